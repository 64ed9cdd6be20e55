//! Code parameters that govern wet-paper solvability.
//!
//! Distributions are exact rationals. Everything here works by exhaustive
//! enumeration and is meant for codes of length at most a couple of dozen.

use std::fmt;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::codes::{gather, AnyCode, BinaryCode, LinearCode};
use crate::combinatorics::{binomial, Combinations};
use crate::error::{Error, Result};
use crate::gf2::rank_words;

pub type Rational = Ratio<i128>;

/// Largest length for which `2^n` scans are attempted.
pub const MAX_SCAN_LENGTH: usize = 24;

/// Largest code size for the pairwise distance scan of nonlinear codes.
pub const MAX_PAIRWISE_SIZE: usize = 1 << 18;

fn check_scan_length(n: usize) -> Result<()> {
    if n > MAX_SCAN_LENGTH {
        Err(Error::TooLarge(format!(
            "2^{n} vectors (limit 2^{MAX_SCAN_LENGTH})"
        )))
    } else {
        Ok(())
    }
}

fn code_size<C: BinaryCode + ?Sized>(code: &C) -> i128 {
    1i128 << code.dimension()
}

/// `A_i = #{(x, y) ∈ C² : d(x, y) = i} / |C|`. For linear codes this is the
/// weight distribution.
pub fn distance_distribution<C: BinaryCode + ?Sized>(code: &C) -> Result<Vec<Rational>> {
    let n = code.length();
    let words = code.codeword_list()?;
    if code.as_linear().is_some() {
        let mut counts = vec![0i128; n + 1];
        for w in words {
            counts[w.count_ones() as usize] += 1;
        }
        return Ok(counts.into_iter().map(Rational::from_integer).collect());
    }
    if words.len() > MAX_PAIRWISE_SIZE {
        return Err(Error::TooLarge(format!("{} codewords for a pairwise scan", words.len())));
    }
    let counts = words
        .par_iter()
        .map(|&x| {
            let mut c = vec![0i128; n + 1];
            for &y in words {
                c[(x ^ y).count_ones() as usize] += 1;
            }
            c
        })
        .reduce(
            || vec![0i128; n + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let size = words.len() as i128;
    Ok(counts.into_iter().map(|c| Rational::new(c, size)).collect())
}

/// Krawtchouk polynomial `K_i(x) = Σ_j (-1)^j C(x, j) C(n - x, i - j)`.
pub fn krawtchouk(n: usize, i: usize, x: usize) -> Result<i128> {
    if i > n || x > n {
        return Err(Error::InvalidParameter(format!(
            "Krawtchouk arguments need 0 <= i, x <= n; got n={n}, i={i}, x={x}"
        )));
    }
    if n > 120 {
        return Err(Error::TooLarge(format!("Krawtchouk length {n}")));
    }
    let (n, i, x) = (n as u64, i as u64, x as u64);
    Ok((0..=i)
        .map(|j| {
            let term = binomial(x, j) * binomial(n - x, i - j);
            if j % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum())
}

/// `out_i = scale · Σ_j values_j K_i(j)`.
pub fn krawtchouk_transform(n: usize, values: &[Rational], scale: Rational) -> Result<Vec<Rational>> {
    Error::check_len("distribution", n + 1, values.len())?;
    (0..=n)
        .map(|i| {
            let mut acc = Rational::zero();
            for (j, v) in values.iter().enumerate() {
                acc += *v * Rational::from_integer(krawtchouk(n, i, j)?);
            }
            Ok(acc * scale)
        })
        .collect()
}

/// Dual distance distribution `A⊥_i = (1/|C|) Σ_j A_j K_i(j)`. For a linear
/// code it is the weight distribution of the dual code.
pub fn dual_distribution<C: BinaryCode + ?Sized>(code: &C) -> Result<Vec<Rational>> {
    if let Some(lin) = code.as_linear() {
        // Enumerating the smaller side is cheaper and gives the same numbers.
        if lin.r() < lin.k() {
            return distance_distribution(&lin.dual());
        }
    }
    let dist = distance_distribution(code)?;
    krawtchouk_transform(code.length(), &dist, Rational::new(1, code_size(code)))
}

/// Recovers the distance distribution from the dual one:
/// `A_i = (|C| / 2^n) Σ_j A⊥_j K_i(j)`.
pub fn inverse_dual_transform(n: usize, dual: &[Rational], code_size: i128) -> Result<Vec<Rational>> {
    krawtchouk_transform(n, dual, Rational::new(code_size, 1i128 << n))
}

/// First positive index with a nonzero entry; `n + 1` if there is none (the
/// full space).
pub fn dual_distance_from(dual: &[Rational]) -> usize {
    dual.iter()
        .enumerate()
        .skip(1)
        .find(|(_, a)| !a.is_zero())
        .map_or(dual.len(), |(i, _)| i)
}

pub fn dual_distance<C: BinaryCode + ?Sized>(code: &C) -> Result<usize> {
    Ok(dual_distance_from(&dual_distribution(code)?))
}

/// Minimum distance from the distance distribution; `n + 1` for a
/// one-word code.
pub fn minimum_distance<C: BinaryCode + ?Sized>(code: &C) -> Result<usize> {
    Ok(dual_distance_from(&distance_distribution(code)?))
}

/// Column `j` of `G` as a `k`-bit word.
fn generator_columns(code: &LinearCode) -> Vec<u64> {
    let g = code.generator();
    (0..code.n())
        .map(|j| (0..code.k()).fold(0u64, |acc, i| (acc << 1) | g.get(i, j) as u64))
        .collect()
}

/// Weight hierarchy `d_1 < … < d_k`.
///
/// The subcode supported inside a set `S` is `{aG : a G_{S^c} = 0}`, of
/// dimension `k - rank(G_{S^c})`, so `d_t` is the least `|S|` whose subcode
/// has dimension at least `t`. All `2^n` supports are scanned.
pub fn generalized_hamming_weights(code: &LinearCode) -> Result<Vec<usize>> {
    let (n, k) = (code.n(), code.k());
    if k > 16 {
        return Err(Error::TooLarge(format!("dimension {k} for the weight hierarchy (limit 16)")));
    }
    check_scan_length(n)?;
    let cols = generator_columns(code);
    let full = if n == 0 { 0 } else { (1u64 << n) - 1 };
    // best[t] = least support size carrying a subcode of dimension t.
    let best = (0u64..=full)
        .into_par_iter()
        .fold(
            || vec![usize::MAX; k + 1],
            |mut best, support| {
                let size = support.count_ones() as usize;
                let mut outside: Vec<u64> = (0..n)
                    .filter(|&j| (support >> j) & 1 == 0)
                    .map(|j| cols[j])
                    .collect();
                let dim = k - rank_words(&mut outside);
                if size < best[dim] {
                    best[dim] = size;
                }
                best
            },
        )
        .reduce(
            || vec![usize::MAX; k + 1],
            |a, b| a.iter().zip(&b).map(|(x, y)| *x.min(y)).collect(),
        );
    Ok((1..=k)
        .map(|t| best[t..].iter().copied().min().expect("t <= k"))
        .collect())
}

/// Least `t` with `d_t = r + t`. Defined only when `d_k = n`.
pub fn mds_rank(code: &LinearCode) -> Result<usize> {
    let d = generalized_hamming_weights(code)?;
    mds_rank_from(code.n(), code.r(), &d)
}

pub fn mds_rank_from(n: usize, r: usize, hierarchy: &[usize]) -> Result<usize> {
    match hierarchy.last() {
        Some(&last) if last == n => {}
        _ => {
            return Err(Error::Undefined(format!(
                "MDS rank needs d_k = n = {n}, hierarchy is {hierarchy:?}"
            )))
        }
    }
    hierarchy
        .iter()
        .enumerate()
        .find(|&(i, &d)| d == r + i + 1)
        .map(|(i, _)| i + 1)
        .ok_or_else(|| Error::Undefined("no t with d_t = r + t".into()))
}

/// Distance from every vector of `F_2^n` to the code, indexed by word.
pub fn distances_to_code<C: BinaryCode + ?Sized>(code: &C) -> Result<Vec<u8>> {
    let n = code.length();
    check_scan_length(n)?;
    let words = code.codeword_list()?;
    let mut dist = vec![u8::MAX; 1 << n];
    let mut frontier: Vec<u64> = words.to_vec();
    for &w in words {
        dist[w as usize] = 0;
    }
    let mut d = 0u8;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &x in &frontier {
            for j in 0..n {
                let y = (x ^ (1 << j)) as usize;
                if dist[y] == u8::MAX {
                    dist[y] = d + 1;
                    next.push(y as u64);
                }
            }
        }
        frontier = next;
        d += 1;
    }
    Ok(dist)
}

/// Distribution of distances to the code with the derived radii.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Radii {
    /// `α_i = #{x : d(x, C) = i} / |C|`.
    #[serde(serialize_with = "ser_rationals")]
    pub alpha: Vec<Rational>,
    pub covering_radius: usize,
    /// `ρ̃ = (1 / 2^n) Σ_x d(x, C)`.
    #[serde(serialize_with = "ser_rational")]
    pub average_radius: Rational,
}

pub fn radii<C: BinaryCode + ?Sized>(code: &C) -> Result<Radii> {
    let n = code.length();
    let dist = distances_to_code(code)?;
    let mut counts = vec![0i128; n + 1];
    for &d in &dist {
        counts[d as usize] += 1;
    }
    let size = code_size(code);
    let covering_radius = counts.iter().rposition(|&c| c != 0).unwrap_or(0);
    let total: i128 = counts.iter().enumerate().map(|(i, c)| i as i128 * c).sum();
    Ok(Radii {
        alpha: counts.iter().map(|&c| Rational::new(c, size)).collect(),
        covering_radius,
        average_radius: Rational::new(total, 1i128 << n),
    })
}

/// First `t`-subset of columns (lexicographic order) on which some pattern
/// does not occur exactly `|C| / 2^t` times.
pub fn oa_counterexample<C: BinaryCode + ?Sized>(code: &C, t: usize) -> Result<Option<Vec<usize>>> {
    let n = code.length();
    let words = code.codeword_list()?;
    if t > n {
        return Err(Error::InvalidParameter(format!("strength {t} exceeds length {n}")));
    }
    if t >= 63 || words.len() % (1usize << t) != 0 {
        return Ok(Some((0..t).collect()));
    }
    let lambda = words.len() >> t;
    let mut counts = vec![0usize; 1 << t];
    for cols in Combinations::new(n, t) {
        counts.iter_mut().for_each(|c| *c = 0);
        for &w in words {
            counts[gather(w, n, &cols) as usize] += 1;
        }
        if counts.iter().any(|&c| c != lambda) {
            return Ok(Some(cols));
        }
    }
    Ok(None)
}

/// Largest `t` such that the codewords, as rows of an array, form an
/// orthogonal array of strength `t`. Strength `t` implies strength `t - 1`,
/// so `t` grows until the first failing column set.
pub fn oa_strength<C: BinaryCode + ?Sized>(code: &C) -> Result<usize> {
    let n = code.length();
    for t in 1..=n {
        if oa_counterexample(code, t)?.is_some() {
            return Ok(t - 1);
        }
    }
    Ok(n)
}

/// First `t`-subset of columns (lexicographic order) on which some pattern
/// never occurs.
pub fn projection_counterexample<C: BinaryCode + ?Sized>(code: &C, t: usize) -> Result<Option<Vec<usize>>> {
    let n = code.length();
    let words = code.codeword_list()?;
    if t > n {
        return Err(Error::InvalidParameter(format!("strength {t} exceeds length {n}")));
    }
    if t >= 63 || words.len() < (1usize << t) {
        return Ok(Some((0..t).collect()));
    }
    let mut seen = vec![false; 1 << t];
    for cols in Combinations::new(n, t) {
        seen.iter_mut().for_each(|c| *c = false);
        for &w in words {
            seen[gather(w, n, &cols) as usize] = true;
        }
        if seen.iter().any(|&c| !c) {
            return Ok(Some(cols));
        }
    }
    Ok(None)
}

/// Largest `t` such that every `t` columns of the code show all `2^t`
/// patterns, i.e. `π_W(C)` is the full space for every `|W| = t`. This is
/// exactly the number of positions that can always be locked. It is at least
/// [`oa_strength`] and equals it for linear codes.
pub fn projection_strength<C: BinaryCode + ?Sized>(code: &C) -> Result<usize> {
    let n = code.length();
    for t in 1..=n {
        if projection_counterexample(code, t)?.is_some() {
            return Ok(t - 1);
        }
    }
    Ok(n)
}

/// Whether the syndrome map is `t`-resilient: for every `t` coordinates,
/// every fixing of them and every syndrome `y`, exactly `2^(n-t) / 2^r`
/// vectors match.
pub fn is_resilient<C: BinaryCode + ?Sized>(code: &C, t: usize) -> Result<bool> {
    let n = code.length();
    check_scan_length(n)?;
    if t > n {
        return Err(Error::InvalidParameter(format!("resilience order {t} exceeds length {n}")));
    }
    let r = code.syndrome_len();
    if n - t < r {
        return Ok(false);
    }
    let expected = 1usize << (n - t - r);
    let syndromes: Vec<u64> = (0u64..1 << n).map(|x| code.syndrome_word(x)).collect();
    let subsets: Vec<Vec<usize>> = Combinations::new(n, t).collect();
    Ok(subsets.par_iter().all(|cols| {
        let mut counts = vec![0usize; 1 << (t + r)];
        for (x, &s) in syndromes.iter().enumerate() {
            let p = gather(x as u64, n, cols);
            counts[((p << r) | s) as usize] += 1;
        }
        counts.iter().all(|&c| c == expected)
    }))
}

/// Checks the rank bound that a generalized Hamming weight gives for
/// projections of the generator matrix.
///
/// With `δ = n - |W|`, and `d_t > δ ≥ r` for some `t ≥ δ - r`, every wet set
/// satisfies `rank(G_W) ≥ n - δ - t + 1`. (The variant `n - r - t + 1` is not
/// a valid bound: at `t = δ - r` it equals `|W| + 1`, more than the number of
/// columns of `G_W`, whenever `δ > r`.)
///
/// `wet` holds 0-based positions and `t` is 1-based. Returns whether the
/// bound holds for this `W`; errors if the hypotheses fail.
pub fn rank_lower_bound_check(code: &LinearCode, wet: &[usize], t: usize) -> Result<bool> {
    let hierarchy = generalized_hamming_weights(code)?;
    rank_lower_bound_check_with(code, &hierarchy, wet, t)
}

/// As [`rank_lower_bound_check`] with a precomputed hierarchy.
pub fn rank_lower_bound_check_with(
    code: &LinearCode,
    hierarchy: &[usize],
    wet: &[usize],
    t: usize,
) -> Result<bool> {
    let (n, r) = (code.n(), code.r());
    let g_w = code.generator().column_submatrix(wet)?;
    let delta = n - wet.len();
    if t == 0 || t > hierarchy.len() {
        return Err(Error::Precondition(format!("t = {t} outside 1..={}", hierarchy.len())));
    }
    let d_t = hierarchy[t - 1];
    if !(d_t > delta && delta >= r) {
        return Err(Error::Precondition(format!(
            "need d_t > δ ≥ r, have d_{t} = {d_t}, δ = {delta}, r = {r}"
        )));
    }
    if t + r < delta {
        return Err(Error::Precondition(format!("need t ≥ δ - r, have t = {t}, δ - r = {}", delta - r)));
    }
    let bound = (n + 1) as i64 - delta as i64 - t as i64;
    Ok(g_w.rank() as i64 >= bound)
}

/// All analytics of one code.
#[derive(Clone, Debug, Serialize)]
pub struct CodeProfile {
    pub kind: &'static str,
    pub n: usize,
    /// `log2 |C|`.
    pub dimension: usize,
    /// Syndrome (message) length.
    pub r: usize,
    #[serde(serialize_with = "ser_rationals")]
    pub distance_distribution: Vec<Rational>,
    #[serde(serialize_with = "ser_rationals")]
    pub dual_distribution: Vec<Rational>,
    pub minimum_distance: usize,
    pub dual_distance: usize,
    #[serde(serialize_with = "ser_rationals")]
    pub alpha: Vec<Rational>,
    pub covering_radius: usize,
    #[serde(serialize_with = "ser_rational")]
    pub average_radius: Rational,
    pub oa_strength: usize,
    pub projection_strength: usize,
    pub weight_hierarchy: Option<Vec<usize>>,
    pub mds_rank: Option<usize>,
    /// `n - d⊥ + 1 - r`.
    pub singleton_defect: i64,
}

pub fn profile(code: &AnyCode) -> Result<CodeProfile> {
    let n = code.length();
    check_scan_length(n)?;
    let distance = distance_distribution(code)?;
    let dual = dual_distribution(code)?;
    let dual_distance = dual_distance_from(&dual);
    let radii = radii(code)?;
    let r = code.syndrome_len();
    let (kind, weight_hierarchy, mds) = match code {
        AnyCode::Linear(lin) => {
            let h = if lin.k() <= 16 {
                Some(generalized_hamming_weights(lin)?)
            } else {
                None
            };
            let mds = h.as_ref().and_then(|h| mds_rank_from(n, r, h).ok());
            ("linear", h, mds)
        }
        AnyCode::Systematic(_) => ("systematic", None, None),
    };
    Ok(CodeProfile {
        kind,
        n,
        dimension: code.dimension(),
        r,
        minimum_distance: dual_distance_from(&distance),
        distance_distribution: distance,
        dual_distribution: dual,
        dual_distance,
        alpha: radii.alpha,
        covering_radius: radii.covering_radius,
        average_radius: radii.average_radius,
        oa_strength: oa_strength(code)?,
        projection_strength: projection_strength(code)?,
        weight_hierarchy,
        mds_rank: mds,
        singleton_defect: n as i64 - dual_distance as i64 + 1 - r as i64,
    })
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn format_list(values: &[Rational]) -> String {
    values.iter().map(format_rational).collect::<Vec<_>>().join(",")
}

fn ser_rational<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

fn ser_rationals<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

impl fmt::Display for CodeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        writeln!(f, "kind: {}", self.kind)?;
        writeln!(f, "n: {}", self.n)?;
        writeln!(f, "dimension: {}", self.dimension)?;
        writeln!(f, "r: {}", self.r)?;
        writeln!(f, "distance_distribution: {}", format_list(&self.distance_distribution))?;
        writeln!(f, "dual_distribution: {}", format_list(&self.dual_distribution))?;
        writeln!(f, "minimum_distance: {}", self.minimum_distance)?;
        writeln!(f, "dual_distance: {}", self.dual_distance)?;
        writeln!(f, "alpha: {}", format_list(&self.alpha))?;
        writeln!(f, "covering_radius: {}", self.covering_radius)?;
        writeln!(
            f,
            "average_radius: {} ({})",
            format_rational(&self.average_radius),
            self.average_radius.to_f64().unwrap_or(f64::NAN)
        )?;
        writeln!(f, "oa_strength: {}", self.oa_strength)?;
        writeln!(f, "projection_strength: {}", self.projection_strength)?;
        if let Some(h) = &self.weight_hierarchy {
            writeln!(f, "weight_hierarchy: {}", join(h))?;
        }
        if let Some(t) = self.mds_rank {
            writeln!(f, "mds_rank: {t}")?;
        }
        writeln!(f, "singleton_defect: {}", self.singleton_defect)
    }
}
