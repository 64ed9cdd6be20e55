//! Rank statistics of random binary matrices and the wet-paper overhead.
//!
//! Closed forms are evaluated in `f64`; infinite products and series are cut
//! after a caller-supplied number of terms ([`DEFAULT_TERMS`] is plenty: the
//! tail of `∏ (1 - 2^-j)` after 64 factors is below `2^-64`).
//!
//! Monte Carlo runs split the trials into fixed chunks of [`CHUNK`]; chunk
//! `i` draws from ChaCha8 seeded with `seed` on stream `i`. Counts are summed,
//! so results depend only on `(parameters, trials, seed)`, never on the number
//! of worker threads.

use std::fmt::{self, Write as _};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{rank_words, WordBasis};

pub const DEFAULT_TERMS: usize = 64;

/// Trials per independently seeded chunk.
pub const CHUNK: u64 = 4096;

fn check_terms(terms: usize) -> Result<()> {
    if terms == 0 {
        Err(Error::InvalidParameter("truncation needs at least one term".into()))
    } else {
        Ok(())
    }
}

/// `∏_{j=from}^{from+terms-1} (1 - 2^-j)`.
fn tail_product(from: usize, terms: usize) -> f64 {
    (from..from + terms).map(|j| 1.0 - 0.5f64.powi(j as i32)).product()
}

/// Limit probability that a random `(t+m) × t` matrix has rank `t - s`:
/// `∏_{j>s+m} (1 - 2^-j) / (2^(s(s+m)) ∏_{j=1}^{s} (1 - 2^-j))`.
pub fn rank_defect_probability(t: usize, m: usize, s: usize, terms: usize) -> Result<f64> {
    check_terms(terms)?;
    if s > t {
        return Err(Error::InvalidParameter(format!("rank defect {s} exceeds {t} columns")));
    }
    let num = tail_product(s + m + 1, terms);
    let den = tail_product(1, s) * 2f64.powi((s * (s + m)) as i32);
    Ok(num / den)
}

/// `Q_m = ∏_{j>m} (1 - 2^-j)`: the limit probability that `m` extra rows
/// give full rank.
pub fn q_m(m: usize, terms: usize) -> f64 {
    tail_product(m + 1, terms)
}

/// `m̃ = Σ_{m≥1} m Q_m / 2^m`, the mean number of extra rows needed for full
/// rank, summed up to `m = terms`.
pub fn average_overhead(terms: usize) -> Result<f64> {
    check_terms(terms)?;
    Ok((1..=terms)
        .map(|m| m as f64 * 0.5f64.powi(m as i32) * q_m(m, DEFAULT_TERMS))
        .sum())
}

/// Limit law of the number of extra rows: entry `m` is `Q_m - Q_{m-1}`
/// (`Q_0` for `m = 0`).
pub fn extra_rows_distribution(max_m: usize, terms: usize) -> Vec<f64> {
    (0..=max_m)
        .map(|m| if m == 0 { q_m(0, terms) } else { q_m(m, terms) / 2f64.powi(m as i32) })
        .collect()
}

/// `Σ_s (t - s) P(s)` under the limit law: `avrank(t + m, t)`.
pub fn expected_rank(t: usize, m: usize, terms: usize) -> Result<f64> {
    (0..=t).try_fold(0.0, |acc, s| {
        Ok(acc + (t - s) as f64 * rank_defect_probability(t, m, s, terms)?)
    })
}

/// Exact rank distribution of a uniform `rows × cols` matrix, indexed by rank:
/// `P(ρ) = 2^-((rows-ρ)(cols-ρ)) ∏_{i<ρ} (1-2^(i-rows))(1-2^(i-cols)) / (1-2^(i-ρ))`.
pub fn rank_distribution(rows: usize, cols: usize) -> Vec<f64> {
    let top = rows.min(cols);
    (0..=top)
        .map(|rho| {
            let scale = 2f64.powi(-(((rows - rho) * (cols - rho)) as i32));
            (0..rho).fold(scale, |acc, i| {
                let i = i as i32;
                acc * (1.0 - 2f64.powi(i - rows as i32)) * (1.0 - 2f64.powi(i - cols as i32))
                    / (1.0 - 2f64.powi(i - rho as i32))
            })
        })
        .collect()
}

fn full_row_rank_probability(rows: usize, cols: usize) -> f64 {
    if rows > cols {
        0.0
    } else {
        rank_distribution(rows, cols)[rows]
    }
}

/// Rank distribution of `sub` columns of a uniform full-row-rank
/// `rows × total` matrix.
///
/// With the chosen block of rank `ρ`, the whole matrix has full row rank
/// iff the other `total - sub` columns span the `rows - ρ` dimensional
/// quotient, which gives
/// `P(ρ) = P_unif(rows, sub)(ρ) · P_full(rows - ρ, total - sub) / P_full(rows, total)`.
pub fn submatrix_rank_distribution(rows: usize, total: usize, sub: usize) -> Result<Vec<f64>> {
    if sub > total || rows > total {
        return Err(Error::InvalidParameter(format!(
            "need sub <= total and rows <= total, got rows={rows}, total={total}, sub={sub}"
        )));
    }
    let norm = full_row_rank_probability(rows, total);
    Ok(rank_distribution(rows, sub)
        .into_iter()
        .enumerate()
        .map(|(rho, p)| p * full_row_rank_probability(rows - rho, total - sub) / norm)
        .collect())
}

fn check_nrd(n: usize, r: usize, delta: usize) -> Result<()> {
    if r <= delta && delta <= n {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("need r <= δ <= n, got n={n}, r={r}, δ={delta}")))
    }
}

/// `2^(avrank - (n - δ))` for a given average rank of `G_W`.
pub fn solvability_probability(n: usize, r: usize, delta: usize, avrank: f64) -> Result<f64> {
    check_nrd(n, r, delta)?;
    Ok(2f64.powf(avrank - (n - delta) as f64))
}

/// [`solvability_probability`] with `avrank(n - r, n - δ)` from the limit law.
/// By Jensen's inequality this is a lower bound for the true probability
/// `E[2^(rank - (n - δ))]`.
pub fn solvability_probability_limit(n: usize, r: usize, delta: usize, terms: usize) -> Result<f64> {
    check_nrd(n, r, delta)?;
    let avrank = expected_rank(n - delta, delta - r, terms)?;
    solvability_probability(n, r, delta, avrank)
}

/// Exact probability that a uniformly random `[n, n-r]` code, wet set of size
/// `n - δ`, cover and message admit a solution: `E[2^(rank H_D - r)]` where
/// `H_D` holds `δ` columns of a uniform full-rank `r × n` parity-check matrix.
pub fn exact_solvability_probability(n: usize, r: usize, delta: usize) -> Result<f64> {
    check_nrd(n, r, delta)?;
    Ok(submatrix_rank_distribution(r, n, delta)?
        .iter()
        .enumerate()
        .map(|(rho, p)| p * 2f64.powi(rho as i32 - r as i32))
        .sum())
}

/// Exact distribution of `δ - r` when dry positions are added in random order
/// to a random `[n, n-r]` code until every instance is solvable. Entry `m`
/// is the probability of overhead exactly `m`, for `m = 0..=n-r`.
pub fn dry_overhead_distribution(n: usize, r: usize) -> Result<Vec<f64>> {
    if r > n {
        return Err(Error::InvalidParameter(format!("r = {r} exceeds n = {n}")));
    }
    // Solvable for every instance iff H_D has full row rank; that property
    // is monotone in D, so P(overhead <= m) is P(full rank at δ = r + m).
    let cdf: Vec<f64> = (r..=n)
        .map(|delta| Ok(submatrix_rank_distribution(r, n, delta)?[r]))
        .collect::<Result<_>>()?;
    Ok((0..cdf.len())
        .map(|m| if m == 0 { cdf[0] } else { cdf[m] - cdf[m - 1] })
        .collect())
}

/// Theory against simulation.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub name: String,
    /// Header of the index column (`s`, `m`, ...).
    pub index_label: String,
    pub theoretical: Vec<f64>,
    pub empirical: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub max_abs_deviation: f64,
    /// Scalar results, in insertion order.
    pub summary: Vec<(String, f64)>,
}

impl ExperimentReport {
    fn new(
        name: &str,
        index_label: &str,
        theoretical: Vec<f64>,
        counts: &[u64],
        trials: u64,
        seed: u64,
    ) -> Self {
        let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / trials as f64).collect();
        let max_abs_deviation = theoretical
            .iter()
            .zip(&empirical)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        Self {
            name: name.into(),
            index_label: index_label.into(),
            theoretical,
            empirical,
            trials,
            seed,
            max_abs_deviation,
            summary: Vec::new(),
        }
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.summary.iter().find(|(k, _)| k == key).map(|&(_, v)| v)
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!("{},theoretical,empirical,deviation\n", self.index_label);
        for (i, (t, e)) in self.theoretical.iter().zip(&self.empirical).enumerate() {
            let _ = writeln!(s, "{i},{t:.12},{e:.12},{:.12}", e - t);
        }
        s
    }

    pub fn summary_line(&self) -> String {
        let mut s = format!(
            "{}: trials={} seed={} max_abs_deviation={:.6}",
            self.name, self.trials, self.seed, self.max_abs_deviation
        );
        for (k, v) in &self.summary {
            let _ = write!(s, " {k}={v:.6}");
        }
        s
    }
}

impl fmt::Display for ExperimentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.summary_line())?;
        f.write_str(&self.to_csv())
    }
}

/// Runs `trials` trials in seeded chunks and sums the per-chunk counts.
fn run_chunks<F>(trials: u64, seed: u64, bins: usize, trial: F) -> Result<Vec<u64>>
where
    F: Fn(&mut ChaCha8Rng) -> Result<usize> + Sync,
{
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let chunks = trials.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let mut counts = vec![0u64; bins];
            let todo = CHUNK.min(trials - c * CHUNK);
            for _ in 0..todo {
                let bin = trial(&mut rng)?;
                counts[bin.min(bins - 1)] += 1;
            }
            Ok(counts)
        })
        .try_reduce(
            || vec![0u64; bins],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )
}

fn random_word<R: Rng>(rng: &mut R, bits: usize) -> u64 {
    if bits == 64 {
        rng.random()
    } else {
        rng.random::<u64>() & ((1u64 << bits) - 1)
    }
}

fn check_bits(what: &str, bits: usize) -> Result<()> {
    if bits > 64 {
        Err(Error::TooLarge(format!("{what} = {bits} (limit 64)")))
    } else {
        Ok(())
    }
}

/// Rank defects of random `(t+m) × t` matrices against the limit law.
pub fn monte_carlo_rank(t: usize, m: usize, trials: u64, seed: u64) -> Result<ExperimentReport> {
    check_bits("t", t)?;
    let theory = (0..=t)
        .map(|s| rank_defect_probability(t, m, s, DEFAULT_TERMS))
        .collect::<Result<Vec<_>>>()?;
    let counts = run_chunks(trials, seed, t + 1, |rng| {
        let mut rows: Vec<u64> = (0..t + m).map(|_| random_word(rng, t)).collect();
        Ok(t - rank_words(&mut rows))
    })?;
    let mut report = ExperimentReport::new("rank", "s", theory, &counts, trials, seed);
    let p = report.theoretical[0];
    report.summary.push(("full_rank_theoretical".into(), p));
    report.summary.push(("full_rank_empirical".into(), report.empirical[0]));
    report.summary.push(("sigma".into(), (p * (1.0 - p) / trials as f64).sqrt()));
    Ok(report)
}

fn mean_and_variance(dist: &[f64]) -> (f64, f64) {
    let mean: f64 = dist.iter().enumerate().map(|(i, p)| i as f64 * p).sum();
    let second: f64 = dist.iter().enumerate().map(|(i, p)| (i * i) as f64 * p).sum();
    (mean, second - mean * mean)
}

fn push_mean_summary(report: &mut ExperimentReport, counts: &[u64], theory_mean: f64, variance: f64) {
    let trials = report.trials as f64;
    let mean = counts.iter().enumerate().map(|(i, &c)| i as f64 * c as f64).sum::<f64>() / trials;
    report.summary.push(("mean_empirical".into(), mean));
    report.summary.push(("mean_theoretical".into(), theory_mean));
    report.summary.push(("sigma_mean".into(), (variance / trials).sqrt()));
}

/// Rows are appended to a `t`-column random matrix until it has rank `t`;
/// the histogram of the number of rows beyond `t` is compared with
/// `Q_m - Q_{m-1}`.
pub fn monte_carlo_overhead(t: usize, trials: u64, seed: u64) -> Result<ExperimentReport> {
    check_bits("t", t)?;
    if t == 0 {
        return Err(Error::InvalidParameter("t must be positive".into()));
    }
    const BINS: usize = 40;
    let theory = extra_rows_distribution(BINS - 1, DEFAULT_TERMS);
    let counts = run_chunks(trials, seed, BINS, |rng| {
        let mut basis = WordBasis::new();
        let mut rows = 0usize;
        while basis.rank() < t {
            basis.insert(random_word(rng, t));
            rows += 1;
        }
        Ok(rows - t)
    })?;
    let (_, var) = mean_and_variance(&theory);
    let mut report = ExperimentReport::new("overhead", "m", theory, &counts, trials, seed);
    let m_tilde = average_overhead(DEFAULT_TERMS)?;
    push_mean_summary(&mut report, &counts, m_tilde, var);
    Ok(report)
}

/// Uniform full-rank `r × n` parity-check matrix, as its `n` columns.
fn random_parity_columns<R: Rng>(rng: &mut R, r: usize, n: usize) -> Vec<u64> {
    loop {
        let cols: Vec<u64> = (0..n).map(|_| random_word(rng, r)).collect();
        if rank_words(&mut cols.clone()) == r {
            return cols;
        }
    }
}

/// Dry positions are added in random order to a random `[n, n-r]` code
/// until every instance is solvable; the histogram of `δ - r` is compared
/// with [`dry_overhead_distribution`].
pub fn monte_carlo_dry_overhead(n: usize, r: usize, trials: u64, seed: u64) -> Result<ExperimentReport> {
    check_bits("r", r)?;
    let theory = dry_overhead_distribution(n, r)?;
    let bins = theory.len();
    let counts = run_chunks(trials, seed, bins, |rng| {
        let cols = random_parity_columns(rng, r, n);
        let order = index::sample(rng, n, n);
        let mut basis = WordBasis::new();
        let mut delta = 0usize;
        for j in order.iter() {
            if basis.rank() == r {
                break;
            }
            basis.insert(cols[j]);
            delta += 1;
        }
        Ok(delta - r)
    })?;
    let (mean, var) = mean_and_variance(&theory);
    let mut report = ExperimentReport::new("dry_overhead", "m", theory, &counts, trials, seed);
    push_mean_summary(&mut report, &counts, mean, var);
    report.summary.push(("m_tilde_limit".into(), average_overhead(DEFAULT_TERMS)?));
    Ok(report)
}

/// Minimum weight of a nonzero combination of the rows of the matrix whose
/// columns are `cols`.
fn row_space_distance(cols: &[u64], r: usize) -> usize {
    let n = cols.len();
    let rows: Vec<u64> = (0..r)
        .map(|i| {
            cols.iter()
                .fold(0u64, |acc, &c| (acc << 1) | ((c >> (r - 1 - i)) & 1))
        })
        .collect();
    let mut cur = 0u64;
    let mut best = n + 1;
    for g in 1u64..(1u64 << r) {
        cur ^= rows[g.trailing_zeros() as usize];
        if cur != 0 {
            best = best.min(cur.count_ones() as usize);
        }
    }
    best
}

/// Largest `r` for which the dual distance filter enumerates `2^r` words.
pub const MAX_FILTER_REDUNDANCY: usize = 24;

/// Attempts per trial to find a code meeting the dual distance filter.
pub const FILTER_ATTEMPTS: usize = 10_000;

/// Frequency with which a random instance (uniform full-rank `H`, cover,
/// message and wet set of size `n - δ`) is solvable.
///
/// With `enforce_threshold`, codes are resampled until `δ ≥ n - d⊥ + 1`,
/// in which case every instance must be solvable.
pub fn monte_carlo_wet_feasibility(
    n: usize,
    r: usize,
    delta: usize,
    trials: u64,
    seed: u64,
    enforce_threshold: bool,
) -> Result<ExperimentReport> {
    check_nrd(n, r, delta)?;
    check_bits("n", n)?;
    if enforce_threshold && r > MAX_FILTER_REDUNDANCY {
        return Err(Error::TooLarge(format!("r = {r} for the dual distance filter")));
    }
    let exact = exact_solvability_probability(n, r, delta)?;
    let theory = if enforce_threshold { 1.0 } else { exact };
    let counts = run_chunks(trials, seed, 2, |rng| {
        let mut attempts = 0;
        let cols = loop {
            let cols = random_parity_columns(rng, r, n);
            if !enforce_threshold || delta + row_space_distance(&cols, r) > n {
                break cols;
            }
            attempts += 1;
            if attempts == FILTER_ATTEMPTS {
                return Err(Error::InvalidParameter(format!(
                    "no code with dual distance above {} found in {FILTER_ATTEMPTS} draws",
                    n - delta
                )));
            }
        };
        let wet = index::sample(rng, n, n - delta).into_vec();
        let cover = random_word(rng, n);
        let message = random_word(rng, r);
        let mut is_wet = vec![false; n];
        let mut target = message;
        for &j in &wet {
            is_wet[j] = true;
            if (cover >> (n - 1 - j)) & 1 == 1 {
                target ^= cols[j];
            }
        }
        let mut basis = WordBasis::new();
        for j in (0..n).filter(|&j| !is_wet[j]) {
            basis.insert(cols[j]);
        }
        Ok(usize::from(basis.reduce(target) == 0))
    })?;
    // Bin 1 counts solvable trials; report only that probability.
    let mut report = ExperimentReport::new("feasibility", "event", vec![theory], &counts[1..], trials, seed);
    report.summary.push(("exact".into(), exact));
    report.summary.push(("formula".into(), solvability_probability_limit(n, r, delta, DEFAULT_TERMS)?));
    report.summary.push(("sigma".into(), (theory * (1.0 - theory) / trials as f64).sqrt()));
    Ok(report)
}
