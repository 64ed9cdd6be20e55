//! Syndrome embedding, plain and with wet (locked) positions.
//!
//! A stegoscheme built on a code hides `m` in `c` by moving `c` to a nearby
//! vector whose syndrome is `m`; the receiver just computes the syndrome.
//! With a wet set `W` the sender may not touch positions in `W`, which turns
//! embedding into a constrained system: linear for linear codes, a search
//! over codewords for systematic ones.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::analysis::{dual_distance, projection_strength};
use crate::codes::{check_word_length, gather, AnyCode, BinaryCode, LinearCode, SystematicCode};
use crate::error::{Error, Result};
use crate::gf2::{solve_constrained, sorted_distinct, BitVector};

/// Largest solution-space dimension minimised by walking the whole span.
pub const MAX_SPAN_DIMENSION: usize = 22;

/// Candidate budget for the weight-ordered search used above
/// [`MAX_SPAN_DIMENSION`].
pub const WEIGHT_SEARCH_BUDGET: u64 = 1 << 26;

/// `c + cl(cHᵀ + m)`: changes at most the covering radius many bits.
pub fn emb_linear(code: &LinearCode, c: &BitVector, m: &BitVector) -> Result<BitVector> {
    Error::check_len("cover", code.n(), c.len())?;
    Error::check_len("message", code.r(), m.len())?;
    let target = &code.syndrome(c)? ^ m;
    Ok(c ^ &code.coset_leader(&target)?)
}

/// `(0, m) + nearest(c + (0, m))`: the closest vector to `c` in the translate
/// `(0, m) + C`, which is exactly the set of vectors with syndrome `m`.
pub fn emb_systematic(code: &SystematicCode, c: &BitVector, m: &BitVector) -> Result<BitVector> {
    Error::check_len("cover", code.n(), c.len())?;
    let z = code.lift_syndrome(m)?;
    code.translated_decode(&z, c)
}

/// Plain embedding with whichever code is given.
pub fn emb(code: &AnyCode, c: &BitVector, m: &BitVector) -> Result<BitVector> {
    match code {
        AnyCode::Linear(l) => emb_linear(l, c, m),
        AnyCode::Systematic(s) => emb_systematic(s, c, m),
    }
}

/// The receiver's map: the syndrome of `x`.
pub fn rec<C: BinaryCode + ?Sized>(code: &C, x: &BitVector) -> Result<BitVector> {
    code.syndrome(x)
}

/// Cover, message and wet set (0-based) for one embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WetProblem {
    pub cover: BitVector,
    pub message: BitVector,
    pub wet: Vec<usize>,
}

impl WetProblem {
    pub fn new(cover: BitVector, message: BitVector, wet: Vec<usize>) -> Self {
        Self { cover, message, wet }
    }

    /// Number of dry (free) positions.
    pub fn dry_count(&self) -> usize {
        self.cover.len().saturating_sub(self.wet.len())
    }

    fn validate<C: BinaryCode + ?Sized>(&self, code: &C) -> Result<Vec<usize>> {
        Error::check_len("cover", code.length(), self.cover.len())?;
        Error::check_len("message", code.syndrome_len(), self.message.len())?;
        sorted_distinct(&self.wet, code.length())
    }
}

/// A code together with one problem, as read from an instance file.
#[derive(Clone, Debug)]
pub struct WetInstance {
    pub code: AnyCode,
    pub problem: WetProblem,
}

impl WetInstance {
    pub fn solve(&self) -> Result<WetResult> {
        solve_wet(&self.code, &self.problem)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WetResult {
    pub feasible: bool,
    /// Present iff feasible.
    pub stego: Option<BitVector>,
    pub solution_count: BigUint,
    /// Positions where `stego` differs from the cover; 0 when infeasible.
    pub changes: usize,
    /// Whether `changes` is proven minimal over all solutions.
    pub exact_minimum: bool,
}

impl WetResult {
    fn infeasible() -> Self {
        Self {
            feasible: false,
            stego: None,
            solution_count: BigUint::from(0u8),
            changes: 0,
            exact_minimum: true,
        }
    }
}

/// Solves `xHᵀ = m`, `x_i = c_i (i ∈ W)`.
///
/// Among the solutions the one closest to the cover is returned, the
/// lexicographically smallest among ties. The minimum is exact when the
/// solution space has dimension at most [`MAX_SPAN_DIMENSION`] or the
/// weight-ordered search finishes inside [`WEIGHT_SEARCH_BUDGET`];
/// otherwise a locally improved solution is returned with
/// `exact_minimum = false`.
pub fn solve_wet_linear(code: &LinearCode, problem: &WetProblem) -> Result<WetResult> {
    let wet = problem.validate(code)?;
    let c = &problem.cover;
    let fixed: BTreeMap<usize, bool> = wet.iter().map(|&i| (i, c.get(i))).collect();
    let sol = solve_constrained(code.parity(), &problem.message, &fixed)?;
    let Some(particular) = &sol.particular else {
        return Ok(WetResult::infeasible());
    };
    let solution_count = sol.solution_count();
    let n = code.n();
    let (stego, exact) = if n <= 64 {
        let basis: Vec<u64> = sol.kernel_basis.iter().map(BitVector::to_u64).collect();
        let cw = c.to_u64();
        let start = particular.to_u64();
        let (x, exact) = if basis.len() <= MAX_SPAN_DIMENSION {
            (closest_in_span(start, &basis, cw), true)
        } else {
            let dry: Vec<usize> = (0..n).filter(|i| wet.binary_search(i).is_err()).collect();
            let target = code.syndrome_word(cw) ^ problem.message.to_u64();
            match lightest_change(code, &dry, target, cw) {
                Some(x) => (x, true),
                None => (improve_locally(start, &basis, cw), false),
            }
        };
        (BitVector::from_u64(x, n), exact)
    } else {
        let x = improve_locally_bits(particular.clone(), &sol.kernel_basis, c);
        let exact = sol.kernel_basis.is_empty();
        (x, exact)
    };
    Ok(WetResult {
        feasible: true,
        changes: stego.distance(c),
        stego: Some(stego),
        solution_count,
        exact_minimum: exact,
    })
}

/// Element of `start + span(basis)` closest to `c`, smallest on ties.
fn closest_in_span(start: u64, basis: &[u64], c: u64) -> u64 {
    let mut best = start;
    let mut best_d = (start ^ c).count_ones();
    let mut cur = start;
    for i in 1u64..(1u64 << basis.len()) {
        cur ^= basis[i.trailing_zeros() as usize];
        let d = (cur ^ c).count_ones();
        if d < best_d || (d == best_d && cur < best) {
            best = cur;
            best_d = d;
        }
    }
    best
}

/// Changes supported on `dry` with syndrome `target`, by increasing weight.
/// Returns `c + e` for the lightest `e`, or `None` once the budget is spent.
fn lightest_change(code: &LinearCode, dry: &[usize], target: u64, c: u64) -> Option<u64> {
    let n = code.n();
    let cols: Vec<u64> = dry
        .iter()
        .map(|&p| code.syndrome_word(1u64 << (n - 1 - p)))
        .collect();
    let mut spent = 0u64;
    for w in 0..=dry.len() {
        let mut best: Option<u64> = None;
        for subset in crate::combinatorics::Combinations::new(dry.len(), w) {
            spent += 1;
            if spent > WEIGHT_SEARCH_BUDGET {
                return None;
            }
            let s = subset.iter().fold(0u64, |acc, &j| acc ^ cols[j]);
            if s == target {
                let e = subset.iter().fold(0u64, |acc, &j| acc | (1u64 << (n - 1 - dry[j])));
                let x = c ^ e;
                best = Some(best.map_or(x, |b| b.min(x)));
            }
        }
        if best.is_some() {
            return best;
        }
    }
    None
}

/// Adds basis vectors while that lowers the distance to `c`.
fn improve_locally(mut x: u64, basis: &[u64], c: u64) -> u64 {
    loop {
        let d = (x ^ c).count_ones();
        match basis.iter().map(|&b| x ^ b).find(|&y| (y ^ c).count_ones() < d) {
            Some(y) => x = y,
            None => return x,
        }
    }
}

fn improve_locally_bits(mut x: BitVector, basis: &[BitVector], c: &BitVector) -> BitVector {
    loop {
        let d = x.distance(c);
        match basis.iter().map(|b| &x ^ b).find(|y| y.distance(c) < d) {
            Some(y) => x = y,
            None => return x,
        }
    }
}

/// Solves `s(x) = m`, `x_i = c_i (i ∈ W)` for a systematic code.
///
/// The solutions are `y + (0, m)` for the codewords `y` that agree with
/// `c + (0, m)` on `W`; all `|C|` codewords are scanned, so this is meant for
/// codes whose word list fits in memory.
pub fn solve_wet_systematic(code: &SystematicCode, problem: &WetProblem) -> Result<WetResult> {
    let wet = problem.validate(code)?;
    let n = code.n();
    check_word_length(n)?;
    let c = problem.cover.to_u64();
    let lift = code.lift_syndrome(&problem.message)?.to_u64();
    let want = gather(c ^ lift, n, &wet);
    let mut count = 0u64;
    let mut best: Option<(u32, u64)> = None;
    for &y in code.codeword_list()? {
        if gather(y, n, &wet) != want {
            continue;
        }
        count += 1;
        let x = y ^ lift;
        let key = ((x ^ c).count_ones(), x);
        if best.is_none_or(|b| key < b) {
            best = Some(key);
        }
    }
    let Some((changes, x)) = best else {
        return Ok(WetResult::infeasible());
    };
    Ok(WetResult {
        feasible: true,
        stego: Some(BitVector::from_u64(x, n)),
        solution_count: BigUint::from(count),
        changes: changes as usize,
        exact_minimum: true,
    })
}

pub fn solve_wet(code: &AnyCode, problem: &WetProblem) -> Result<WetResult> {
    match code {
        AnyCode::Linear(l) => solve_wet_linear(l, problem),
        AnyCode::Systematic(s) => solve_wet_systematic(s, problem),
    }
}

/// Solves many problems over one code in parallel; output order matches
/// input order.
pub fn solve_batch(code: &AnyCode, problems: &[WetProblem]) -> Vec<Result<WetResult>> {
    problems.par_iter().map(|p| solve_wet(code, p)).collect()
}

/// Least number of dry positions that makes every instance solvable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WetThreshold {
    /// The threshold `τ`; up to `n - τ` positions can always be locked.
    pub tau: usize,
    /// `n - d⊥ + 1`, the dual-distance bound; equal to `tau` for linear codes.
    pub dual_bound: usize,
}

impl WetThreshold {
    pub fn max_locked(&self, n: usize) -> usize {
        n - self.tau
    }
}

/// For linear codes `τ = n - d⊥ + 1`. For systematic codes every instance
/// with wet set `W` is solvable iff `π_W(C)` is all of `F_2^|W|`, so `τ` is
/// `n` minus the projection strength.
pub fn wet_threshold(code: &AnyCode) -> Result<WetThreshold> {
    let n = code.length();
    let dual_bound = (n + 1).saturating_sub(dual_distance(code)?);
    let tau = match code {
        AnyCode::Linear(_) => dual_bound,
        AnyCode::Systematic(s) => n - projection_strength(s)?,
    };
    Ok(WetThreshold { tau, dual_bound })
}

/// `n - d⊥ + 1 - r`, the Singleton defect of the dual code.
pub fn strict_overhead(code: &LinearCode) -> Result<usize> {
    Ok(code.n() + 1 - dual_distance(code)? - code.r())
}
