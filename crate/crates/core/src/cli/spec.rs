//! Textual inputs: code specs, masks, messages and instance files.

use std::path::{Path, PathBuf};

use crate::codes::{nadler_code, nadler_code_from_sigma, parse_code_file, AnyCode, BinaryCode, LinearCode};
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::stego::{WetInstance, WetProblem};

fn resolve(path: &str, base: Option<&Path>) -> PathBuf {
    let p = PathBuf::from(path);
    match base {
        Some(dir) if p.is_relative() => dir.join(p),
        _ => p,
    }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::parse(format!("cannot read {}: {e}", path.display())))
}

/// `hamming:s`, `nadler`, `nadler-sigma` or `file:PATH`.
pub fn parse_code_spec(spec: &str) -> Result<AnyCode> {
    parse_code_spec_in(spec, None)
}

fn parse_code_spec_in(spec: &str, base: Option<&Path>) -> Result<AnyCode> {
    let spec = spec.trim();
    match spec.split_once(':') {
        _ if spec == "nadler" => Ok(nadler_code().into()),
        _ if spec == "nadler-sigma" => Ok(nadler_code_from_sigma().into()),
        Some(("hamming", s)) => {
            let s: usize = s
                .parse()
                .map_err(|_| Error::parse(format!("code spec {spec:?}: {s:?} is not a number")))?;
            Ok(LinearCode::hamming(s)?.into())
        }
        Some(("file", path)) => {
            let path = resolve(path, base);
            parse_code_file(&read_text(&path)?).map_err(|e| Error::parse(format!("{}: {e}", path.display())))
        }
        _ => Err(Error::parse(format!(
            "unknown code spec {spec:?}; expected hamming:S, nadler, nadler-sigma or file:PATH"
        ))),
    }
}

/// A single 0/1 token of length `n` is a mask (1 = wet); anything else is a
/// list of 1-based indices.
fn parse_mask_text(text: &str, n: usize) -> Result<Vec<usize>> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if let [t] = tokens[..] {
        if t.len() == n && t.bytes().all(|b| b == b'0' || b == b'1') {
            return Ok(t.bytes().enumerate().filter(|&(_, b)| b == b'1').map(|(i, _)| i).collect());
        }
    }
    tokens
        .iter()
        .map(|t| match t.parse::<usize>() {
            Ok(i) if (1..=n).contains(&i) => Ok(i - 1),
            _ => Err(Error::parse(format!("wet index {t:?} is not in 1..={n}"))),
        })
        .collect()
}

/// `file:PATH` (a mask string or 1-based indices) or an inline 0/1 mask of
/// length `n`. Returns 0-based wet positions.
pub fn parse_mask_spec(spec: &str, n: usize) -> Result<Vec<usize>> {
    parse_mask_spec_in(spec, n, None)
}

fn parse_mask_spec_in(spec: &str, n: usize, base: Option<&Path>) -> Result<Vec<usize>> {
    if let Some(path) = spec.strip_prefix("file:") {
        let path = resolve(path, base);
        return parse_mask_text(&read_text(&path)?, n).map_err(|e| Error::parse(format!("{}: {e}", path.display())));
    }
    let spec = spec.trim();
    if spec.len() != n || !spec.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(Error::parse(format!("wet mask {spec:?} must be {n} characters of 0/1")));
    }
    parse_mask_text(spec, n)
}

/// `0101…`, or `hex:DIGITS:BITS` (the value written with `BITS` bits, most
/// significant first).
pub fn parse_message(text: &str, len: usize) -> Result<BitVector> {
    let text = text.trim();
    let bits = if let Some(rest) = text.strip_prefix("hex:") {
        let (digits, width) = rest
            .rsplit_once(':')
            .ok_or_else(|| Error::parse(format!("hex message {text:?} needs the form hex:DIGITS:BITS")))?;
        let width: usize = width
            .parse()
            .map_err(|_| Error::parse(format!("hex message bit length {width:?} is not a number")))?;
        let mut all = Vec::with_capacity(4 * digits.len());
        for c in digits.chars() {
            let d = c
                .to_digit(16)
                .ok_or_else(|| Error::parse(format!("{c:?} is not a hex digit")))?;
            all.extend((0..4).rev().map(|i| (d >> i) & 1 == 1));
        }
        if all.len() < width {
            let mut padded = vec![false; width - all.len()];
            padded.extend(all);
            all = padded;
        }
        let extra = all.len() - width;
        if all[..extra].iter().any(|&b| b) {
            return Err(Error::parse(format!("hex message {digits} does not fit in {width} bits")));
        }
        BitVector::from_bits(all[extra..].iter().copied())
    } else {
        text.parse::<BitVector>()
            .map_err(|e| Error::parse(format!("message {text:?}: {e}")))?
    };
    if bits.len() != len {
        return Err(Error::parse(format!("message has {} bits, the code carries {len}", bits.len())));
    }
    Ok(bits)
}

/// Instance file: `key: value` lines with keys `code`, `cover`, `message`
/// and optionally `wet` (mask string or 1-based indices). `#` starts a
/// comment line. Relative `file:` paths are taken from the file's directory.
pub fn parse_instance(text: &str, base: Option<&Path>) -> Result<WetInstance> {
    let mut code = None;
    let mut cover = None;
    let mut message = None;
    let mut wet = None;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| Error::parse(format!("line {}: expected \"key: value\"", i + 1)))?;
        let slot = match key.trim() {
            "code" => &mut code,
            "cover" => &mut cover,
            "message" => &mut message,
            "wet" => &mut wet,
            other => return Err(Error::parse(format!("line {}: unknown key {other:?}", i + 1))),
        };
        if slot.is_some() {
            return Err(Error::parse(format!("line {}: key {} repeated", i + 1, key.trim())));
        }
        *slot = Some((i + 1, value.trim().to_string()));
    }
    let need = |v: Option<(usize, String)>, key: &str| v.ok_or_else(|| Error::parse(format!("instance lacks {key:?}")));
    let (ln, code_spec) = need(code, "code")?;
    let code = parse_code_spec_in(&code_spec, base).map_err(|e| Error::parse(format!("line {ln}: {e}")))?;
    let n = code.length();
    let (ln, cover) = need(cover, "cover")?;
    let cover: BitVector = cover.parse().map_err(|e| Error::parse(format!("line {ln}: cover: {e}")))?;
    if cover.len() != n {
        return Err(Error::parse(format!("line {ln}: cover has {} bits, the code has length {n}", cover.len())));
    }
    let (ln, message) = need(message, "message")?;
    let message = parse_message(&message, code.syndrome_len()).map_err(|e| Error::parse(format!("line {ln}: {e}")))?;
    let wet = match wet {
        Some((ln, w)) => {
            let parsed = if w.starts_with("file:") {
                parse_mask_spec_in(&w, n, base)
            } else {
                parse_mask_text(&w, n)
            };
            parsed.map_err(|e| Error::parse(format!("line {ln}: {e}")))?
        }
        None => Vec::new(),
    };
    Ok(WetInstance {
        code,
        problem: WetProblem::new(cover, message, wet),
    })
}
