//! Acceptance suite: one check per criterion, one pass/fail line each.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use num_bigint::BigUint;
use rand::{Rng, RngCore};
use wetpaper::analysis::*;
use wetpaper::cli::{encode_pgm, lsb_extract, parse_pgm, GrayImage};
use wetpaper::codes::{nadler_code, AnyCode, BinaryCode, LinearCode};
use wetpaper::experiments::*;
use wetpaper::stego::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn ints(v: &[i128]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from_integer(x)).collect()
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    if t <= limit {
        Ok(())
    } else {
        Err(format!("took {t:.2?}, limit {limit:?}"))
    }
}

fn c1_nadler_fixtures() -> Outcome {
    let start = Instant::now();
    let code = nadler_code();
    let a = distance_distribution(&code).map_err(|e| e.to_string())?;
    ensure!(a == ints(&[1, 0, 0, 0, 0, 12, 12, 0, 3, 4, 0, 0, 0]), "distance distribution {a:?}");
    let d_perp = dual_distance(&code).map_err(|e| e.to_string())?;
    ensure!(d_perp == 3, "d⊥ = {d_perp}");
    let r = radii(&code).map_err(|e| e.to_string())?;
    ensure!(r.covering_radius == 4, "ρ = {}", r.covering_radius);
    let mut alpha = ints(&[1, 12, 66, 46, 3]);
    alpha.resize(13, Rational::from_integer(0));
    ensure!(r.alpha == alpha, "α = {:?}", r.alpha);
    ensure!(r.average_radius == Rational::new(294, 128), "ρ̃ = {}", r.average_radius);
    // "Every 4 columns contain every pattern of F_2^4" and not for 5.
    let strength = projection_strength(&code).map_err(|e| e.to_string())?;
    ensure!(strength == 4, "projection strength {strength}");
    let equal_count = oa_strength(&code).map_err(|e| e.to_string())?;
    within(start, Duration::from_secs(5))?;
    Ok(format!(
        "A, d⊥=3, ρ=4, α, ρ̃=147/64 exact; every 4 columns cover F_2^4, 5 do not (equal-count strength {equal_count} = d⊥-1)"
    ))
}

fn c2_wet_threshold_theorem() -> Outcome {
    let start = Instant::now();
    let h = LinearCode::hamming(3).unwrap();
    let mut instances = 0u64;
    for size in 0..=3 {
        for wet in subsets(7, size) {
            for c in 0u64..128 {
                for m in 0u64..8 {
                    let p = WetProblem::new(word(c, 7), word(m, 3), wet.clone());
                    let r = solve_wet_linear(&h, &p).map_err(|e| e.to_string())?;
                    let want = BigUint::from(1u8) << (7 - size - 3);
                    ensure!(r.feasible && r.solution_count == want, "W={wet:?} c={c} m={m}: {:?}", r.solution_count);
                    instances += 1;
                }
            }
        }
    }
    // Brute-force count at |W| = 3, where 2^(δ-r) = 2.
    for wet in subsets(7, 3) {
        for c in (0u64..128).step_by(9) {
            for m in 0u64..8 {
                let n = brute_solution_count(&h, c, m, &wet);
                ensure!(n == 2, "brute force found {n} solutions for W={wet:?}");
            }
        }
    }
    let mut infeasible = None;
    'search: for wet in subsets(7, 4) {
        for m in 0u64..8 {
            let p = WetProblem::new(word(0, 7), word(m, 3), wet.clone());
            if !solve_wet_linear(&h, &p).map_err(|e| e.to_string())?.feasible {
                ensure!(brute_solution_count(&h, 0, m, &wet) == 0, "solver/brute disagree");
                infeasible = Some((wet, m));
                break 'search;
            }
        }
    }
    let (wet, m) = infeasible.ok_or("no infeasible instance with |W| = 4")?;
    let tau = wet_threshold(&h.into()).map_err(|e| e.to_string())?.tau;
    ensure!(tau == 4, "τ = {tau}");
    within(start, Duration::from_secs(10))?;
    Ok(format!("{instances} instances with |W|<=3 feasible with 2^(δ-r) solutions; W={wet:?}, c=0, m={m} infeasible; τ=4"))
}

fn c3_systematic_beats_linear() -> Outcome {
    let start = Instant::now();
    let code = nadler_code();
    let words = code.codeword_list().unwrap().to_vec();
    let mut r = rng(3);
    let mut solved = 0u64;
    for size in 0..=4 {
        for wet in subsets(12, size) {
            // Solvability depends on (c, m) only through π_W(c + (0, m)):
            // cover every pattern, then 64 random (c, m).
            let mut problems: Vec<(u64, u64)> = (0u64..1 << size)
                .map(|p| {
                    let c = wet.iter().enumerate().fold(0u64, |a, (j, &i)| a | ((p >> (size - 1 - j)) & 1) << (11 - i));
                    (c, 0)
                })
                .collect();
            problems.extend((0..64).map(|_| (r.random_range(0..1u64 << 12), r.random_range(0..1u64 << 7))));
            for (c, m) in problems {
                let res = solve_wet_systematic(&code, &WetProblem::new(word(c, 12), word(m, 7), wet.clone()))
                    .map_err(|e| e.to_string())?;
                ensure!(res.feasible, "infeasible at W={wet:?}, c={c}, m={m}");
                let x = res.stego.unwrap().to_u64();
                ensure!(code.syndrome_word(x) == m, "wrong syndrome");
                ensure!(wet.iter().all(|&i| (x ^ c) >> (11 - i) & 1 == 0), "wet position changed");
                solved += 1;
            }
        }
    }
    // A certified failure at |W| = 5: no vector at all meets the constraints.
    let mut cert = None;
    'outer: for wet in subsets(12, 5) {
        let mask = wet.iter().fold(0u64, |a, &i| a | 1u64 << (11 - i));
        let seen: std::collections::HashSet<u64> = words.iter().map(|&w| w & mask).collect();
        if seen.len() < 32 {
            let missing = (0u64..1 << 12).map(|x| x & mask).find(|p| !seen.contains(p)).unwrap();
            let p = WetProblem::new(word(missing, 12), word(0, 7), wet.clone());
            ensure!(!solve_wet_systematic(&code, &p).map_err(|e| e.to_string())?.feasible, "solver found a solution");
            ensure!(brute_solution_count(&code, missing, 0, &wet) == 0, "brute force found a solution");
            cert = Some((wet, missing));
            break 'outer;
        }
    }
    let (wet, c) = cert.ok_or("every 5-set is covered")?;
    within(start, Duration::from_secs(120))?;
    Ok(format!("{solved} instances with |W|<=4 solved; W={wet:?}, c={c:012b}, m=0 certified infeasible"))
}

fn c4_solution_counting() -> Outcome {
    let code = nadler_code();
    let d_perp = dual_distance(&code).map_err(|e| e.to_string())?;
    let mut r = rng(4);
    let mut checked = 0;
    for size in 0..=2 {
        let delta = 12 - size;
        ensure!(delta + d_perp > 12, "δ={delta} below n-d⊥+1");
        for wet in subsets(12, size) {
            for _ in 0..12 {
                let (c, m) = (r.random_range(0..1u64 << 12), r.random_range(0..1u64 << 7));
                let res = solve_wet_systematic(&code, &WetProblem::new(word(c, 12), word(m, 7), wet.clone()))
                    .map_err(|e| e.to_string())?;
                let brute = brute_solution_count(&code, c, m, &wet);
                let want = 1u64 << (delta - 7);
                ensure!(res.solution_count == BigUint::from(brute) && brute == want, "W={wet:?}: solver {}, brute {brute}, want {want}", res.solution_count);
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} instances, counts 2^(δ-7) = 32, 16, 8 match brute force"))
}

fn c5_krawtchouk_duality() -> Outcome {
    let codes = corpus();
    let random = codes.len() - 5;
    ensure!(random >= 20, "corpus has only {random} random codes");
    for code in &codes {
        let n = code.n();
        let want = ints(&weight_counts(&brute_dual_words(code), n));
        let got = dual_distribution(code).map_err(|e| e.to_string())?;
        ensure!(got == want, "dual distribution mismatch for {code:?}");
        let a = distance_distribution(code).map_err(|e| e.to_string())?;
        let size = 1i128 << code.k();
        let t = krawtchouk_transform(n, &a, Rational::new(1, size)).map_err(|e| e.to_string())?;
        ensure!(t == want, "transform mismatch for {code:?}");
        ensure!(inverse_dual_transform(n, &t, size).map_err(|e| e.to_string())? == a, "double transform");
    }
    Ok(format!("{} codes ({random} random, n<=10) match enumerated duals; double transform exact", codes.len()))
}

fn c6_weight_hierarchy() -> Outcome {
    let h = LinearCode::hamming(3).unwrap();
    let d = generalized_hamming_weights(&h).map_err(|e| e.to_string())?;
    let oracle = brute_hierarchy(&h);
    ensure!(d == vec![3, 5, 6, 7] && oracle == d, "Hamming(3) hierarchy {d:?}, oracle {oracle:?}");
    let mut with_mds = 0;
    let codes = corpus();
    for code in &codes {
        let (n, k, r) = (code.n(), code.k(), code.r());
        let d = generalized_hamming_weights(code).map_err(|e| e.to_string())?;
        ensure!(d.windows(2).all(|w| w[0] < w[1]), "not increasing: {d:?}");
        if k <= 5 {
            ensure!(d == brute_hierarchy(code), "oracle mismatch for {code:?}");
        }
        let dual = if r == 0 { vec![] } else { generalized_hamming_weights(&code.dual()).map_err(|e| e.to_string())? };
        let mut all: Vec<usize> = d.iter().copied().chain(dual.iter().map(|&e| n + 1 - e)).collect();
        all.sort_unstable();
        ensure!(all == (1..=n).collect::<Vec<_>>(), "duality fails for {code:?}");
        if d[k - 1] == n {
            let t = mds_rank(code).map_err(|e| e.to_string())?;
            let d_perp = dual_distance(code).map_err(|e| e.to_string())?;
            ensure!(t == n + 2 - r - d_perp, "MDS rank {t} vs n-r-d⊥+2 for {code:?}");
            with_mds += 1;
        }
    }
    Ok(format!("Hamming(3) = (3,5,6,7); {} corpus codes monotone with duality; MDS rank formula on {with_mds}", codes.len()))
}

fn c7_overhead_constant() -> Outcome {
    let start = Instant::now();
    let m_tilde = average_overhead(64).map_err(|e| e.to_string())?;
    ensure!((m_tilde - 1.6067).abs() <= 1e-3, "m̃ = {m_tilde}");
    for m in 1..=40 {
        let (a, b) = (q_m(m, DEFAULT_TERMS), q_m(m - 1, DEFAULT_TERMS));
        let p = 2f64.powi(m as i32);
        ensure!((b - (p - 1.0) / p * a).abs() < 1e-12, "Q recurrence at m={m}");
        ensure!((a - b - a / p).abs() < 1e-12, "Q difference at m={m}");
    }
    for t in [30, 64] {
        for m in 0..=6 {
            let total: f64 = (0..=t)
                .map(|s| rank_defect_probability(t, m, s, DEFAULT_TERMS).unwrap())
                .sum();
            ensure!((total - 1.0).abs() < 1e-12, "rank law sums to {total} at t={t}, m={m}");
        }
    }
    let mut lines = Vec::new();
    for m in 0..=2 {
        let rep = monte_carlo_rank(30, m, 100_000, 7000 + m as u64).map_err(|e| e.to_string())?;
        let p = rep.theoretical[0];
        let sigma = (p * (1.0 - p) / 1e5).sqrt();
        let z = (rep.empirical[0] - p) / sigma;
        ensure!(z.abs() <= 3.0, "t=30 m={m}: z = {z:.2}");
        lines.push(format!("m={m} z={z:+.2}"));
    }
    let rep = monte_carlo_overhead(30, 100_000, 7100).map_err(|e| e.to_string())?;
    let z = (rep.get("mean_empirical").unwrap() - m_tilde) / rep.get("sigma_mean").unwrap();
    ensure!(z.abs() <= 3.0, "extra rows mean z = {z:.2}");
    within(start, Duration::from_secs(60))?;
    Ok(format!("m̃ = {m_tilde:.10}; full rank {}; extra rows mean z={z:+.2}", lines.join(", ")))
}

fn c8_embedding_contracts() -> Outcome {
    let h = LinearCode::hamming(3).unwrap();
    for c in 0u64..128 {
        for m in 0u64..8 {
            let x = emb_linear(&h, &word(c, 7), &word(m, 3)).map_err(|e| e.to_string())?;
            ensure!(rec(&h, &x).unwrap().to_u64() == m, "Hamming rec(emb) fails");
            ensure!(x.to_u64() ^ c == 0 || (x.to_u64() ^ c).count_ones() == 1, "Hamming changed >1 bit");
        }
    }
    let code = nadler_code();
    let rho = radii(&code).map_err(|e| e.to_string())?.covering_radius;
    let mut total = 0u64;
    for c in 0u64..1 << 12 {
        let cv = word(c, 12);
        for m in 0u64..1 << 7 {
            let x = emb_systematic(&code, &cv, &word(m, 7)).map_err(|e| e.to_string())?;
            ensure!(code.syndrome_word(x.to_u64()) == m, "Nadler rec(emb) fails");
            let d = (x.to_u64() ^ c).count_ones() as usize;
            ensure!(d <= rho, "Nadler changed {d} > ρ bits");
            total += d as u64;
        }
    }
    let avg = Rational::new(total as i128, 1 << 19);
    ensure!(avg == Rational::new(147, 64), "average {avg}");
    Ok(format!("2^10 Hamming and 2^19 Nadler pairs; changes <= ρ; Nadler average {total}/2^19 = 2.296875"))
}

fn c9_cli_end_to_end() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_wetpaper");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (cover_path, stego_path) = (dir.path().join("cover.pgm"), dir.path().join("stego.pgm"));
    let mut r = rng(9);
    let mut pixels = vec![0u8; 64 * 64];
    r.fill_bytes(&mut pixels);
    let img = GrayImage::new(64, 64, 255, pixels).unwrap();
    std::fs::write(&cover_path, encode_pgm(&img)).map_err(|e| e.to_string())?;
    let code = AnyCode::from(LinearCode::hamming(4).unwrap());
    // 20% of the 15 cover positions.
    let wet = rand::seq::index::sample(&mut r, 15, 3).into_vec();
    let mask: String = (0..15).map(|i| if wet.contains(&i) { '1' } else { '0' }).collect();
    let msg: String = (0..4).map(|_| if r.random::<bool>() { '1' } else { '0' }).collect();
    let run = |args: &[&str]| Command::new(exe).args(args).output().map_err(|e| e.to_string());
    let o = run(&[
        "embed", "--image", cover_path.to_str().unwrap(), "--code", "hamming:4", "--message", &msg,
        "--wet", &mask, "--out", stego_path.to_str().unwrap(),
    ])?;
    ensure!(o.status.code() == Some(0), "embed exited {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr));
    let stego = parse_pgm(&std::fs::read(&stego_path).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure!(wet.iter().all(|&i| stego.pixels[i] == img.pixels[i]), "wet pixel changed");
    ensure!(stego.pixels[15..] == img.pixels[15..], "pixel outside the cover changed");
    let o = run(&["extract", "--image", stego_path.to_str().unwrap(), "--code", "hamming:4"])?;
    let got = String::from_utf8_lossy(&o.stdout).trim().to_string();
    ensure!(o.status.code() == Some(0) && got == msg, "extracted {got:?}, sent {msg:?}");
    // Lock everything and ask for a message the cover does not carry.
    let carried = code.syndrome(&lsb_extract(&img, 15).unwrap()).unwrap().to_u64();
    let other = format!("{:04b}", carried ^ 1);
    let o = run(&[
        "embed", "--image", cover_path.to_str().unwrap(), "--code", "hamming:4", "--message", &other,
        "--wet", &"1".repeat(15), "--out", dir.path().join("x.pgm").to_str().unwrap(),
    ])?;
    ensure!(o.status.code() == Some(2), "over-wet embed exited {:?}", o.status.code());
    Ok(format!("64x64 image, Hamming(4), wet mask {mask}, message {msg} recovered; over-wet mask exits 2"))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("1 Nadler fixtures", c1_nadler_fixtures),
        ("2 wet threshold theorem", c2_wet_threshold_theorem),
        ("3 systematic beats linear", c3_systematic_beats_linear),
        ("4 solution counting", c4_solution_counting),
        ("5 Krawtchouk duality", c5_krawtchouk_duality),
        ("6 weight hierarchy", c6_weight_hierarchy),
        ("7 overhead constant", c7_overhead_constant),
        ("8 embedding contracts", c8_embedding_contracts),
        ("9 end-to-end CLI", c9_cli_end_to_end),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        let start = Instant::now();
        match check() {
            Ok(detail) => println!("PASS criterion {name} ({:.2?}): {detail}", start.elapsed()),
            Err(why) => {
                println!("FAIL criterion {name} ({:.2?}): {why}", start.elapsed());
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
