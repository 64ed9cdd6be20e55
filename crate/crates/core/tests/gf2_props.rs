use std::collections::BTreeMap;

use proptest::prelude::*;
use wetpaper::gf2::{solve_constrained, BitMatrix, BitVector};

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = BitMatrix> {
    proptest::collection::vec(proptest::collection::vec(any::<bool>(), cols), rows).prop_map(move |rs| {
        BitMatrix::from_rows(rs.into_iter().map(BitVector::from_bits).collect(), cols).unwrap()
    })
}

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (1usize..7, 1usize..9)
}

/// Rank by counting the row space: `log2 |span|`.
fn brute_rank(m: &BitMatrix) -> usize {
    let rows: Vec<u64> = m.rows().iter().map(|r| r.to_u64()).collect();
    let mut span = std::collections::HashSet::new();
    for mask in 0u32..1 << rows.len() {
        let v = (0..rows.len()).filter(|i| mask >> i & 1 == 1).fold(0u64, |a, i| a ^ rows[i]);
        span.insert(v);
    }
    span.len().trailing_zeros() as usize
}

proptest! {
    #[test]
    fn rank_matches_span_size(m in dims().prop_flat_map(|(r, c)| matrix(r, c))) {
        let r = m.rank();
        prop_assert_eq!(r, brute_rank(&m));
        prop_assert_eq!(r, m.transpose().rank());
        prop_assert!(r <= m.nrows().min(m.ncols()));
    }

    #[test]
    fn kernel_is_a_kernel(m in dims().prop_flat_map(|(r, c)| matrix(r, c))) {
        let basis = m.kernel_basis();
        prop_assert_eq!(basis.len() + m.rank(), m.ncols());
        for v in &basis {
            prop_assert!(m.mul_vec(v).unwrap().is_zero());
        }
        let k = BitMatrix::from_rows(basis.clone(), m.ncols()).unwrap();
        prop_assert_eq!(k.rank(), basis.len());
    }

    #[test]
    fn constrained_solutions_match_brute_force(
        (m, b, fixed) in dims().prop_flat_map(|(r, c)| (
            matrix(r, c),
            proptest::collection::vec(any::<bool>(), r),
            proptest::collection::btree_map(0..c, any::<bool>(), 0..=c),
        ))
    ) {
        let n = m.ncols();
        let b = BitVector::from_bits(b);
        let sol = solve_constrained(&m, &b, &fixed).unwrap();
        let mut brute: Vec<BitVector> = (0u64..1 << n)
            .map(|x| BitVector::from_u64(x, n))
            .filter(|x| fixed.iter().all(|(&i, &v)| x.get(i) == v))
            .filter(|x| m.mul_vec(x).unwrap() == b)
            .collect();
        prop_assert_eq!(sol.feasible, !brute.is_empty());
        prop_assert_eq!(sol.solution_count(), num_bigint::BigUint::from(brute.len()));
        let mut got = sol.enumerate().unwrap();
        got.sort();
        brute.sort();
        prop_assert_eq!(got, brute);
        for v in &sol.kernel_basis {
            for &i in fixed.keys() {
                prop_assert!(!v.get(i));
            }
        }
    }

    #[test]
    fn text_round_trip(m in dims().prop_flat_map(|(r, c)| matrix(r, c))) {
        let back: BitMatrix = m.to_text().parse().unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn word_order_is_lexicographic(a in 0u64..1 << 10, b in 0u64..1 << 10) {
        let (x, y) = (BitVector::from_u64(a, 10), BitVector::from_u64(b, 10));
        prop_assert_eq!(x.cmp(&y), x.to_string().cmp(&y.to_string()));
        prop_assert_eq!(x.cmp(&y), a.cmp(&b));
    }
}

#[test]
fn empty_constraints_and_all_fixed() {
    let h = BitMatrix::from_strs(&["1010", "0110"]).unwrap();
    let b: BitVector = "11".parse().unwrap();
    let all: BTreeMap<usize, bool> = [(0, true), (1, true), (2, false), (3, false)].into();
    let sol = solve_constrained(&h, &b, &all).unwrap();
    assert!(sol.feasible);
    assert_eq!(sol.dimension(), 0);
    let bad: BTreeMap<usize, bool> = [(0, false), (1, false), (2, false), (3, false)].into();
    assert!(!solve_constrained(&h, &b, &bad).unwrap().feasible);
}
