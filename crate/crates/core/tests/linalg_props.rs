mod common;

use proptest::prelude::*;
use rado_core::linalg::{
    column_span_dim, kernel_basis, kernel_basis_all_ones, rank, rref, solve_in_span, Rational,
};
use rado_core::RationalMatrix;

fn small_matrix(max_rows: usize, max_cols: usize, lim: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-lim..=lim, c), r)
    })
}

fn is_rref(m: &RationalMatrix, pivots: &[usize]) -> bool {
    let one = Rational::from_integer(1.into());
    for (i, &p) in pivots.iter().enumerate() {
        if *m.get(i, p) != one {
            return false;
        }
        if (0..m.rows()).any(|r| r != i && !num_traits::Zero::is_zero(m.get(r, p))) {
            return false;
        }
        if (0..p).any(|j| !num_traits::Zero::is_zero(m.get(i, j))) {
            return false;
        }
    }
    pivots.windows(2).all(|w| w[0] < w[1])
        && (pivots.len()..m.rows()).all(|i| m.row(i).iter().all(num_traits::Zero::is_zero))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn rref_transcript_replays(rows in small_matrix(4, 6, 5)) {
        let m = RationalMatrix::from_rows(&rows);
        let r = rref(&m);
        prop_assert_eq!(r.transform.apply(&m).unwrap(), r.matrix.clone());
        prop_assert!(is_rref(&r.matrix, &r.pivots));
        prop_assert_eq!(r.rank(), rank(&m));
    }

    #[test]
    fn rank_matches_minors(rows in small_matrix(3, 5, 3)) {
        let m = RationalMatrix::from_rows(&rows);
        prop_assert_eq!(rank(&m), common::full_rank(&rows));
    }

    #[test]
    fn rank_of_transpose(rows in small_matrix(4, 5, 4)) {
        let m = RationalMatrix::from_rows(&rows);
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
    }

    #[test]
    fn kernel_properties(rows in small_matrix(3, 6, 3)) {
        let m = RationalMatrix::from_rows(&rows);
        let k = kernel_basis(&m);
        prop_assert_eq!(k.dim(), m.cols() - rank(&m));
        for v in &k.vectors {
            prop_assert!(m.mul_vec(v).iter().all(num_traits::Zero::is_zero));
        }
        let as_rows: Vec<Vec<i64>> = k
            .integral()
            .iter()
            .map(|v| v.iter().map(|e| i64::try_from(e).unwrap()).collect())
            .collect();
        if !as_rows.is_empty() {
            prop_assert_eq!(common::full_rank(&as_rows), k.dim());
        }
    }

    #[test]
    fn all_ones_kernel_when_columns_sum_to_zero(rows in small_matrix(2, 5, 3)) {
        // force zero column sum by appending the negated row sums
        let rows: Vec<Vec<i64>> = rows
            .into_iter()
            .map(|mut r| {
                let s: i64 = r.iter().sum();
                r.push(-s);
                r
            })
            .collect();
        let m = RationalMatrix::from_rows(&rows);
        let k = kernel_basis_all_ones(&m).unwrap();
        let one = Rational::from_integer(1.into());
        prop_assert!(k.vectors[0].iter().all(|e| *e == one));
        for v in &k.vectors[1..] {
            prop_assert!(num_traits::Zero::is_zero(&v[0]));
        }
        prop_assert_eq!(k.dim(), m.cols() - rank(&m));
    }

    #[test]
    fn span_dims_match_minors(rows in small_matrix(3, 5, 3), mask in 0u32..32) {
        let m = RationalMatrix::from_rows(&rows);
        let subset: Vec<usize> = (0..m.cols()).filter(|&j| mask >> j & 1 == 1).collect();
        prop_assert_eq!(column_span_dim(&m, &subset).unwrap(), common::rank_by_minors(&rows, &subset));
    }

    #[test]
    fn solve_in_span_witnesses(rows in small_matrix(3, 4, 3), coeffs in prop::collection::vec(-3i64..=3, 4)) {
        let m = RationalMatrix::from_rows(&rows);
        let cols: Vec<Vec<Rational>> = (0..m.cols()).map(|j| m.column(j)).collect();
        let target: Vec<Rational> = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.get(i, j) * Rational::from_integer(coeffs[j].into())).sum())
            .collect();
        let w = solve_in_span(&cols, &target).expect("target is in the span");
        let back: Vec<Rational> = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.get(i, j) * &w[j]).sum())
            .collect();
        prop_assert_eq!(back, target);
    }

    #[test]
    fn json_round_trip(rows in small_matrix(3, 4, 9)) {
        let m = RationalMatrix::from_rows(&rows);
        let s = serde_json::to_string(&m).unwrap();
        prop_assert_eq!(serde_json::from_str::<RationalMatrix>(&s).unwrap(), m);
    }
}

#[test]
fn rational_entries_parse() {
    let m: RationalMatrix =
        serde_json::from_str(r#"{"rows":1,"cols":3,"entries":["1/2",["-3","4"],5]}"#).unwrap();
    assert_eq!(*m.get(0, 0), rado_core::linalg::ratio(1, 2));
    assert_eq!(*m.get(0, 1), rado_core::linalg::ratio(-3, 4));
    assert_eq!(*m.get(0, 2), rado_core::linalg::int(5));
    assert!(serde_json::from_str::<RationalMatrix>(r#"{"rows":1,"cols":2,"entries":["1"]}"#).is_err());
    assert!(serde_json::from_str::<RationalMatrix>(r#"{"rows":1,"cols":1,"entries":["1/0"]}"#).is_err());
}
