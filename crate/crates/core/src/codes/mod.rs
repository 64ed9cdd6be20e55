//! Linear and systematic binary codes.
//!
//! Codes short enough to enumerate (length at most 64) are also handled in a
//! word representation: a vector of length `n` is a `u64` whose bit `n-1-i`
//! holds coordinate `i`. Numeric order on such words is lexicographic order
//! on the vectors, which is what every deterministic tie-break in this crate
//! uses.

mod format;
mod linear;
mod nadler;
mod systematic;

pub use format::{parse_code_file, write_code_file};
pub use linear::LinearCode;
pub use nadler::{
    find_coordinate_permutation, nadler_code, nadler_code_from_sigma, NADLER_INFO_POSITIONS,
    NADLER_SIGMA_TO_TABLE, NADLER_TABLE,
};
pub use systematic::SystematicCode;

use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// Largest length handled by the word representation.
pub const MAX_WORD_LENGTH: usize = 64;

/// Largest dimension whose codeword list is materialised.
pub const MAX_LIST_DIMENSION: usize = 22;

/// Mask for coordinate `i` of a length-`n` word.
#[inline]
pub(crate) fn coord_bit(n: usize, i: usize) -> u64 {
    1u64 << (n - 1 - i)
}

/// Gathers the given coordinates of `x` into a word of length `positions.len()`.
#[inline]
pub(crate) fn gather(x: u64, n: usize, positions: &[usize]) -> u64 {
    positions
        .iter()
        .fold(0u64, |acc, &p| (acc << 1) | ((x >> (n - 1 - p)) & 1))
}

/// Inverse of [`gather`]: spreads the bits of `v` onto `positions`.
#[inline]
pub(crate) fn scatter(v: u64, n: usize, positions: &[usize]) -> u64 {
    let k = positions.len();
    positions.iter().enumerate().fold(0u64, |acc, (j, &p)| {
        acc | (((v >> (k - 1 - j)) & 1) << (n - 1 - p))
    })
}

pub(crate) fn check_word_length(n: usize) -> Result<()> {
    if n > MAX_WORD_LENGTH {
        Err(Error::TooLarge(format!(
            "length {n} exceeds the enumeration limit of {MAX_WORD_LENGTH}"
        )))
    } else {
        Ok(())
    }
}

/// Behaviour shared by every code the embedding layer can use.
pub trait BinaryCode: Sync {
    /// Code length `n`.
    fn length(&self) -> usize;

    /// `log2 |C|`: the dimension of a linear code, `u` for a systematic one.
    fn dimension(&self) -> usize;

    /// Length of the syndrome, i.e. the message length of the stegoscheme.
    fn syndrome_len(&self) -> usize {
        self.length() - self.dimension()
    }

    /// Syndrome of `x`; zero exactly on codewords.
    fn syndrome(&self, x: &BitVector) -> Result<BitVector>;

    /// Word form of [`BinaryCode::syndrome`] for `n <= 64`.
    fn syndrome_word(&self, x: u64) -> u64;

    /// All codewords as words, ascending.
    fn codeword_list(&self) -> Result<&[u64]>;

    fn as_linear(&self) -> Option<&LinearCode> {
        None
    }

    fn contains(&self, x: &BitVector) -> Result<bool> {
        Ok(self.syndrome(x)?.is_zero())
    }

    /// A codeword closest to `x`, lexicographically smallest among ties.
    fn nearest_codeword(&self, x: &BitVector) -> Result<BitVector> {
        Error::check_len("vector", self.length(), x.len())?;
        let n = self.length();
        let w = x.to_u64();
        Ok(BitVector::from_u64(nearest_in(self.codeword_list()?, w), n))
    }

    /// `z + nearest_codeword(x - z)`: a closest element of the translate
    /// `z + C`.
    fn translated_decode(&self, z: &BitVector, x: &BitVector) -> Result<BitVector> {
        Error::check_len("translation vector", self.length(), z.len())?;
        Ok(z ^ &self.nearest_codeword(&(x ^ z))?)
    }
}

/// First word of `list` at minimum distance from `x`; `list` must be sorted
/// and nonempty.
#[inline]
pub(crate) fn nearest_in(list: &[u64], x: u64) -> u64 {
    let mut best = list[0];
    let mut best_d = (best ^ x).count_ones();
    for &c in &list[1..] {
        let d = (c ^ x).count_ones();
        if d < best_d {
            best = c;
            best_d = d;
            if d == 0 {
                break;
            }
        }
    }
    best
}

/// Either kind of code, as loaded from a code spec or file.
#[derive(Clone, Debug)]
pub enum AnyCode {
    Linear(LinearCode),
    Systematic(SystematicCode),
}

impl AnyCode {
    pub fn as_systematic(&self) -> Option<&SystematicCode> {
        match self {
            AnyCode::Systematic(s) => Some(s),
            AnyCode::Linear(_) => None,
        }
    }

    pub fn as_dyn(&self) -> &dyn BinaryCode {
        match self {
            AnyCode::Linear(c) => c,
            AnyCode::Systematic(c) => c,
        }
    }
}

impl From<LinearCode> for AnyCode {
    fn from(c: LinearCode) -> Self {
        AnyCode::Linear(c)
    }
}

impl From<SystematicCode> for AnyCode {
    fn from(c: SystematicCode) -> Self {
        AnyCode::Systematic(c)
    }
}

impl BinaryCode for AnyCode {
    fn length(&self) -> usize {
        self.as_dyn().length()
    }
    fn dimension(&self) -> usize {
        self.as_dyn().dimension()
    }
    fn syndrome(&self, x: &BitVector) -> Result<BitVector> {
        self.as_dyn().syndrome(x)
    }
    fn syndrome_word(&self, x: u64) -> u64 {
        self.as_dyn().syndrome_word(x)
    }
    fn codeword_list(&self) -> Result<&[u64]> {
        self.as_dyn().codeword_list()
    }
    fn as_linear(&self) -> Option<&LinearCode> {
        self.as_dyn().as_linear()
    }
    fn nearest_codeword(&self, x: &BitVector) -> Result<BitVector> {
        self.as_dyn().nearest_codeword(x)
    }
}
