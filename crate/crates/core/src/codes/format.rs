//! Text format for codes.
//!
//! ```text
//! linear n k
//! <k generator rows as 0/1 strings>
//! ```
//!
//! ```text
//! systematic n u
//! <u information positions, 1-based, space separated>
//! <2^u lines: "infobits sigmabits">
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use super::{AnyCode, LinearCode, SystematicCode};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

pub fn parse_code_file(text: &str) -> Result<AnyCode> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (ln, header) = lines.next().ok_or_else(|| Error::parse("code file is empty"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::parse(format!("line {ln}: expected a count, got {s:?}")))
    };
    match fields[..] {
        ["linear", n, k] => {
            let (n, k) = (num(n)?, num(k)?);
            let rows = lines
                .by_ref()
                .take(k)
                .map(|(ln, l)| {
                    l.parse::<BitVector>()
                        .map_err(|e| Error::parse(format!("line {ln}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if rows.len() != k {
                return Err(Error::parse(format!("expected {k} generator rows, found {}", rows.len())));
            }
            if let Some((ln, _)) = lines.next() {
                return Err(Error::parse(format!("line {ln}: unexpected trailing content")));
            }
            Ok(LinearCode::from_generator(BitMatrix::from_rows(rows, n)?)?.into())
        }
        ["systematic", n, u] => {
            let (n, u) = (num(n)?, num(u)?);
            if u > super::systematic::MAX_INFO_POSITIONS || u > n {
                return Err(Error::parse(format!("unsupported information count {u} for length {n}")));
            }
            let (ln, pos_line) = lines
                .next()
                .ok_or_else(|| Error::parse("missing information positions line"))?;
            let info = pos_line
                .split_whitespace()
                .map(|t| match t.parse::<usize>() {
                    Ok(p) if (1..=n).contains(&p) => Ok(p - 1),
                    _ => Err(Error::parse(format!(
                        "line {ln}: information position {t:?} is not in 1..={n}"
                    ))),
                })
                .collect::<Result<Vec<_>>>()?;
            if info.len() != u {
                return Err(Error::parse(format!(
                    "line {ln}: expected {u} information positions, got {}",
                    info.len()
                )));
            }
            let mut table: Vec<Option<BitVector>> = vec![None; 1 << u];
            for (ln, l) in lines {
                let parts: Vec<&str> = l.split_whitespace().collect();
                let (a, s) = match parts[..] {
                    [a, s] => (a, s),
                    [s] if u == 0 => ("", s),
                    _ => return Err(Error::parse(format!("line {ln}: expected \"infobits sigmabits\""))),
                };
                let a: BitVector = a.parse().map_err(|e| Error::parse(format!("line {ln}: {e}")))?;
                let s: BitVector = s.parse().map_err(|e| Error::parse(format!("line {ln}: {e}")))?;
                if a.len() != u || s.len() != n - u {
                    return Err(Error::parse(format!(
                        "line {ln}: expected {u} information bits and {} sigma bits",
                        n - u
                    )));
                }
                let slot = &mut table[a.to_u64() as usize];
                if slot.is_some() {
                    return Err(Error::parse(format!("line {ln}: information word {a} repeated")));
                }
                *slot = Some(s);
            }
            let table = table
                .into_iter()
                .enumerate()
                .map(|(i, s)| {
                    s.ok_or_else(|| {
                        Error::parse(format!(
                            "sigma table misses information word {}",
                            BitVector::from_u64(i as u64, u)
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SystematicCode::from_sigma_table(n, info, table)?.into())
        }
        _ => Err(Error::parse(format!(
            "line {ln}: header must be \"linear n k\" or \"systematic n u\", got {header:?}"
        ))),
    }
}

pub fn write_code_file(code: &AnyCode) -> String {
    match code {
        AnyCode::Linear(c) => {
            let mut s = format!("linear {} {}\n", c.n(), c.k());
            for r in c.generator().rows() {
                s.push_str(&format!("{r}\n"));
            }
            s
        }
        AnyCode::Systematic(c) => {
            let u = c.u();
            let mut s = format!("systematic {} {}\n", c.n(), u);
            let pos: Vec<String> = c.info_positions().iter().map(|p| (p + 1).to_string()).collect();
            s.push_str(&pos.join(" "));
            s.push('\n');
            for a in 0u64..(1 << u) {
                let a = BitVector::from_u64(a, u);
                let sig = c.sigma(&a).expect("information word has length u");
                s.push_str(&format!("{a} {sig}\n"));
            }
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{nadler_code, BinaryCode};

    #[test]
    fn nadler_file_round_trip() {
        let code: AnyCode = nadler_code().into();
        let text = write_code_file(&code);
        assert!(text.starts_with("systematic 12 5\n1 2 4 7 10\n00000 0000000\n"));
        let back = parse_code_file(&text).unwrap();
        assert_eq!(back.codeword_list().unwrap(), code.codeword_list().unwrap());
    }

    #[test]
    fn linear_file() {
        let text = "# hamming\nlinear 7 4\n1000011\n0100101\n0010110\n0001111\n";
        let code = parse_code_file(text).unwrap();
        let lin = code.as_linear().unwrap();
        assert_eq!((lin.n(), lin.k()), (7, 4));
        assert_eq!(parse_code_file(&write_code_file(&code)).unwrap().codeword_list().unwrap(), code.codeword_list().unwrap());
    }

    #[test]
    fn malformed_files_name_the_problem() {
        let err = parse_code_file("linear 7 2\n1000011\n").unwrap_err().to_string();
        assert!(err.contains("expected 2 generator rows"), "{err}");
        let err = parse_code_file("bogus 1 2").unwrap_err().to_string();
        assert!(err.contains("header"), "{err}");
        let err = parse_code_file("systematic 3 1\n4\n0 00\n1 11\n").unwrap_err().to_string();
        assert!(err.contains("not in 1..=3"), "{err}");
        let err = parse_code_file("systematic 3 1\n1\n0 00\n").unwrap_err().to_string();
        assert!(err.contains("misses information word 1"), "{err}");
    }
}
