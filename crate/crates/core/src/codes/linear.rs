use std::fmt;
use std::sync::{Arc, OnceLock};

use super::{check_word_length, coord_bit, BinaryCode, SystematicCode, MAX_LIST_DIMENSION};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Largest redundancy for which the coset-leader table is built at
/// construction time.
pub const MAX_LEADER_TABLE_REDUNDANCY: usize = 20;

/// An `[n, k]` binary linear code held as generator and parity-check matrix.
#[derive(Clone)]
pub struct LinearCode {
    n: usize,
    k: usize,
    generator: BitMatrix,
    parity: BitMatrix,
    // Row words of the parity-check matrix when n <= 64.
    parity_words: Option<Vec<u64>>,
    // Indexed by syndrome word.
    leaders: Option<Arc<Vec<u64>>>,
    codewords: OnceLock<Vec<u64>>,
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinearCode")
            .field("n", &self.n)
            .field("k", &self.k)
            .field("generator", &self.generator)
            .field("parity", &self.parity)
            .field("leader_table", &self.leaders.is_some())
            .finish()
    }
}

impl LinearCode {
    fn assemble(generator: BitMatrix, parity: BitMatrix) -> Self {
        let n = generator.ncols();
        let k = generator.nrows();
        let r = parity.nrows();
        let parity_words = (n <= 64).then(|| parity.rows().iter().map(BitVector::to_u64).collect());
        let mut code = Self {
            n,
            k,
            generator,
            parity,
            parity_words,
            leaders: None,
            codewords: OnceLock::new(),
        };
        if n <= 64 && r <= MAX_LEADER_TABLE_REDUNDANCY {
            code.leaders = Some(Arc::new(code.build_leader_table()));
        }
        code
    }

    /// Code spanned by the rows of a full-rank `G`; the parity-check matrix is
    /// the kernel basis of `G`, which is in standard form on the non-pivot
    /// columns of `G`'s reduced echelon form.
    pub fn from_generator(generator: BitMatrix) -> Result<Self> {
        let rank = generator.rank();
        if rank != generator.nrows() {
            return Err(Error::RankDeficient {
                rank,
                expected: generator.nrows(),
            });
        }
        let parity = BitMatrix::from_rows(generator.kernel_basis(), generator.ncols())?;
        Ok(Self::assemble(generator, parity))
    }

    /// Code whose parity-check matrix is the full-rank `H`.
    pub fn from_parity(parity: BitMatrix) -> Result<Self> {
        let rank = parity.rank();
        if rank != parity.nrows() {
            return Err(Error::RankDeficient {
                rank,
                expected: parity.nrows(),
            });
        }
        let generator = BitMatrix::from_rows(parity.kernel_basis(), parity.ncols())?;
        Ok(Self::assemble(generator, parity))
    }

    /// Binary Hamming code of redundancy `s >= 2`: length `2^s - 1`, and
    /// column `j` (1-based) of the parity-check matrix is the binary
    /// expansion of `j` with the most significant bit in row 1.
    pub fn hamming(s: usize) -> Result<Self> {
        if s < 2 {
            return Err(Error::InvalidParameter(format!(
                "Hamming redundancy must be at least 2, got {s}"
            )));
        }
        if s > 16 {
            return Err(Error::TooLarge(format!("Hamming redundancy {s}")));
        }
        let n = (1usize << s) - 1;
        let mut h = BitMatrix::zeros(s, n);
        for j in 0..n {
            for i in 0..s {
                h.set(i, j, ((j + 1) >> (s - 1 - i)) & 1 == 1);
            }
        }
        Self::from_parity(h)
    }

    /// `[n, 1]` repetition code.
    pub fn repetition(n: usize) -> Result<Self> {
        Self::from_generator(BitMatrix::from_rows(vec![BitVector::ones(n)], n)?)
    }

    /// `[n, n-1]` even-weight code.
    pub fn even_weight(n: usize) -> Result<Self> {
        Self::from_parity(BitMatrix::from_rows(vec![BitVector::ones(n)], n)?)
    }

    /// The whole space `F_2^n` (no parity checks).
    pub fn full_space(n: usize) -> Self {
        Self::assemble(BitMatrix::identity(n), BitMatrix::zeros(0, n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Redundancy `n - k`.
    pub fn r(&self) -> usize {
        self.n - self.k
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn parity(&self) -> &BitMatrix {
        &self.parity
    }

    pub fn has_leader_table(&self) -> bool {
        self.leaders.is_some()
    }

    pub fn dual(&self) -> LinearCode {
        Self::assemble(self.parity.clone(), self.generator.clone())
    }

    /// `msg · G`.
    pub fn encode(&self, msg: &BitVector) -> Result<BitVector> {
        self.generator.vec_mul(msg)
    }

    /// Minimum-weight vector with syndrome `syn`; lexicographically smallest
    /// among those of minimum weight.
    pub fn coset_leader(&self, syn: &BitVector) -> Result<BitVector> {
        Error::check_len("syndrome", self.r(), syn.len())?;
        check_word_length(self.n)?;
        let s = syn.to_u64();
        let leader = match &self.leaders {
            Some(table) => table[s as usize],
            None => self.search_leader(s),
        };
        Ok(BitVector::from_u64(leader, self.n))
    }

    fn column_syndromes(&self) -> Vec<u64> {
        let r = self.r();
        (0..self.n)
            .map(|j| {
                (0..r).fold(0u64, |acc, i| (acc << 1) | self.parity.get(i, j) as u64)
            })
            .collect()
    }

    /// Layered search over syndrome space. A lexicographically minimal leader
    /// of weight `w + 1` minus its last one is a minimal leader of a weight-`w`
    /// coset, so extending only the stored leaders of the previous layer
    /// reaches every minimal leader.
    fn build_leader_table(&self) -> Vec<u64> {
        const UNSET: u8 = u8::MAX;
        let n = self.n;
        let r = self.r();
        let cols = self.column_syndromes();
        let mut leader = vec![0u64; 1 << r];
        let mut weight = vec![UNSET; 1 << r];
        weight[0] = 0;
        let mut layer = vec![0u64];
        let mut w = 0u8;
        while !layer.is_empty() {
            let mut next = Vec::new();
            for &s in &layer {
                let base = leader[s as usize];
                for (j, &col) in cols.iter().enumerate() {
                    let bit = coord_bit(n, j);
                    if base & bit != 0 {
                        continue;
                    }
                    let t = (s ^ col) as usize;
                    let cand = base | bit;
                    if weight[t] == UNSET {
                        weight[t] = w + 1;
                        leader[t] = cand;
                        next.push(t as u64);
                    } else if weight[t] == w + 1 && cand < leader[t] {
                        leader[t] = cand;
                    }
                }
            }
            layer = next;
            w += 1;
        }
        leader
    }

    /// Increasing-weight scan; within a weight, Gosper's hack walks the words
    /// in ascending (lexicographic) order so the first hit is the answer.
    fn search_leader(&self, s: u64) -> u64 {
        let n = self.n;
        for w in 0..=n {
            if w == 0 {
                if s == 0 {
                    return 0;
                }
                continue;
            }
            let mut x: u64 = (1u64 << w) - 1;
            let limit = if n == 64 { u64::MAX } else { 1u64 << n };
            while n == 64 || x < limit {
                if self.syndrome_word(x) == s {
                    return x;
                }
                let c = x & x.wrapping_neg();
                let rr = x.wrapping_add(c);
                if rr == 0 {
                    break;
                }
                x = (((rr ^ x) >> 2) / c) | rr;
            }
        }
        unreachable!("parity-check matrix has full rank, every syndrome has a leader")
    }

    /// The same code in systematic form: information positions are the pivot
    /// columns of the generator's reduced echelon form. When the parity-check
    /// matrix came from [`LinearCode::from_generator`] the two syndromes
    /// coincide.
    pub fn to_systematic(&self) -> Result<SystematicCode> {
        check_word_length(self.n)?;
        if self.k > 20 {
            return Err(Error::TooLarge(format!("dimension {} for a sigma table", self.k)));
        }
        let ech = self.generator.echelon();
        let info = ech.pivots.clone();
        let redundancy: Vec<usize> = (0..self.n).filter(|j| !info.contains(j)).collect();
        let rows: Vec<BitVector> = ech.matrix.rows().iter().map(|r| r.select(&redundancy)).collect();
        let table = (0u64..1 << self.k)
            .map(|a| {
                let a = BitVector::from_u64(a, self.k);
                let mut acc = BitVector::zeros(redundancy.len());
                for i in a.support() {
                    acc ^= &rows[i];
                }
                acc
            })
            .collect();
        SystematicCode::from_sigma_table(self.n, info, table)
    }
}

impl BinaryCode for LinearCode {
    fn length(&self) -> usize {
        self.n
    }

    fn dimension(&self) -> usize {
        self.k
    }

    /// `x·Hᵀ`.
    fn syndrome(&self, x: &BitVector) -> Result<BitVector> {
        self.parity.mul_vec(x)
    }

    fn syndrome_word(&self, x: u64) -> u64 {
        let rows = self
            .parity_words
            .as_ref()
            .expect("syndrome_word needs n <= 64");
        rows.iter()
            .fold(0u64, |acc, &h| (acc << 1) | ((h & x).count_ones() & 1) as u64)
    }

    fn codeword_list(&self) -> Result<&[u64]> {
        check_word_length(self.n)?;
        if self.k > MAX_LIST_DIMENSION {
            return Err(Error::TooLarge(format!("2^{} codewords", self.k)));
        }
        Ok(self.codewords.get_or_init(|| {
            let rows: Vec<u64> = self.generator.rows().iter().map(BitVector::to_u64).collect();
            let mut out = Vec::with_capacity(1 << self.k);
            let mut cur = 0u64;
            out.push(cur);
            for i in 1u64..(1 << self.k) {
                cur ^= rows[i.trailing_zeros() as usize];
                out.push(cur);
            }
            out.sort_unstable();
            out
        }))
    }

    fn as_linear(&self) -> Option<&LinearCode> {
        Some(self)
    }
}
