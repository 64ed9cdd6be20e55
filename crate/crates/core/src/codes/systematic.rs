use super::{check_word_length, gather, scatter, BinaryCode};
use crate::error::{Error, Result};
use crate::gf2::{sorted_distinct, BitVector};

/// Largest number of information positions accepted for a sigma table.
pub const MAX_INFO_POSITIONS: usize = 20;

/// An `[n, u]` code, possibly nonlinear, given by its information positions
/// and the truth table of its generator function `σ : F_2^u → F_2^(n-u)`.
///
/// The codeword with information part `a` carries `a_j` at
/// `info_positions[j]` and `σ(a)` on the remaining positions in ascending
/// order. Table entry `i` is `σ` of the `u`-bit vector whose integer value
/// (first coordinate most significant) is `i`.
#[derive(Clone, Debug)]
pub struct SystematicCode {
    n: usize,
    info: Vec<usize>,
    redundancy: Vec<usize>,
    sigma: Vec<u64>,
    // Codeword for information word i.
    by_info: Vec<u64>,
    sorted: Vec<u64>,
    linear: bool,
}

impl SystematicCode {
    /// Builds the code from `σ`'s truth table. `info_positions` are 0-based
    /// and their order fixes the order of the information coordinates.
    pub fn from_sigma_table(
        n: usize,
        info_positions: Vec<usize>,
        sigma_table: Vec<BitVector>,
    ) -> Result<Self> {
        check_word_length(n)?;
        let u = info_positions.len();
        if u > MAX_INFO_POSITIONS {
            return Err(Error::TooLarge(format!("{u} information positions")));
        }
        let sorted_info = sorted_distinct(&info_positions, n)?;
        Error::check_len("sigma table", 1 << u, sigma_table.len())?;
        let v = n - u;
        for s in &sigma_table {
            Error::check_len("sigma value", v, s.len())?;
        }
        let redundancy: Vec<usize> = (0..n).filter(|p| sorted_info.binary_search(p).is_err()).collect();
        let sigma: Vec<u64> = sigma_table.iter().map(BitVector::to_u64).collect();
        let by_info: Vec<u64> = sigma
            .iter()
            .enumerate()
            .map(|(a, &s)| scatter(a as u64, n, &info_positions) | scatter(s, n, &redundancy))
            .collect();
        let mut sorted = by_info.clone();
        sorted.sort_unstable();
        let linear = sigma[0] == 0
            && (0..sigma.len()).all(|a| {
                let from_basis = (0..u)
                    .filter(|j| (a >> j) & 1 == 1)
                    .fold(0u64, |acc, j| acc ^ sigma[1 << j]);
                from_basis == sigma[a]
            });
        Ok(Self {
            n,
            info: info_positions,
            redundancy,
            sigma,
            by_info,
            sorted,
            linear,
        })
    }

    /// Builds the code from an explicit codeword list, checking that the
    /// projection onto `info_positions` is a bijection onto `F_2^u`.
    pub fn from_codewords(
        n: usize,
        codewords: &[BitVector],
        info_positions: Vec<usize>,
    ) -> Result<Self> {
        check_word_length(n)?;
        for c in codewords {
            Error::check_len("codeword", n, c.len())?;
        }
        let u = info_positions.len();
        sorted_distinct(&info_positions, n)?;
        if u > MAX_INFO_POSITIONS || codewords.len() != 1 << u {
            return Err(Error::NotSystematic(info_positions));
        }
        let redundancy: Vec<usize> = (0..n).filter(|p| !info_positions.contains(p)).collect();
        let mut table: Vec<Option<BitVector>> = vec![None; 1 << u];
        for c in codewords {
            let w = c.to_u64();
            let a = gather(w, n, &info_positions) as usize;
            if table[a].is_some() {
                return Err(Error::NotSystematic(info_positions));
            }
            table[a] = Some(BitVector::from_u64(gather(w, n, &redundancy), n - u));
        }
        let table = table.into_iter().map(|s| s.expect("bijective by count")).collect();
        Self::from_sigma_table(n, info_positions, table)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of information positions.
    pub fn u(&self) -> usize {
        self.info.len()
    }

    /// Information positions (0-based) in information-coordinate order.
    pub fn info_positions(&self) -> &[usize] {
        &self.info
    }

    /// The complementary positions, ascending.
    pub fn redundancy_positions(&self) -> &[usize] {
        &self.redundancy
    }

    pub fn is_linear(&self) -> bool {
        self.linear
    }

    /// `σ(a)`.
    pub fn sigma(&self, a: &BitVector) -> Result<BitVector> {
        Error::check_len("information vector", self.u(), a.len())?;
        Ok(BitVector::from_u64(self.sigma[a.to_u64() as usize], self.n - self.u()))
    }

    /// The codeword `(a, σ(a))` placed on the code's positions.
    pub fn encode(&self, a: &BitVector) -> Result<BitVector> {
        Error::check_len("information vector", self.u(), a.len())?;
        Ok(BitVector::from_u64(self.by_info[a.to_u64() as usize], self.n))
    }

    /// `(0, m)`: the vector carrying `m` on the redundancy positions and zero
    /// elsewhere. Its syndrome is `m`.
    pub fn lift_syndrome(&self, m: &BitVector) -> Result<BitVector> {
        Error::check_len("syndrome", self.syndrome_len(), m.len())?;
        Ok(BitVector::from_u64(self.lift_word(m.to_u64()), self.n))
    }

    pub(crate) fn lift_word(&self, m: u64) -> u64 {
        scatter(m, self.n, &self.redundancy)
    }

    /// Whether a codeword set is systematic at `positions` (0-based): the
    /// projection onto them hits every pattern exactly once.
    pub fn is_systematic_at(n: usize, codewords: &[u64], positions: &[usize]) -> bool {
        let u = positions.len();
        if u > MAX_INFO_POSITIONS || codewords.len() != 1 << u {
            return false;
        }
        let mut seen = vec![false; 1 << u];
        for &c in codewords {
            let a = gather(c, n, positions) as usize;
            if std::mem::replace(&mut seen[a], true) {
                return false;
            }
        }
        true
    }
}

impl BinaryCode for SystematicCode {
    fn length(&self) -> usize {
        self.n
    }

    fn dimension(&self) -> usize {
        self.info.len()
    }

    /// `π_V(x) - σ(π_U(x))`.
    fn syndrome(&self, x: &BitVector) -> Result<BitVector> {
        Error::check_len("vector", self.n, x.len())?;
        Ok(BitVector::from_u64(
            self.syndrome_word(x.to_u64()),
            self.syndrome_len(),
        ))
    }

    fn syndrome_word(&self, x: u64) -> u64 {
        let a = gather(x, self.n, &self.info) as usize;
        gather(x, self.n, &self.redundancy) ^ self.sigma[a]
    }

    fn codeword_list(&self) -> Result<&[u64]> {
        Ok(&self.sorted)
    }
}
