use num_traits::{Signed, Zero};
use proptest::prelude::*;

use fibspace::bandops::{self, BandMatrixSpec, SeqPrefix, TruncatedMatrix};
use fibspace::classify::{self, subset_sup};
use fibspace::io;
use fibspace::rational::{self, Rational};
use fibspace::spaces;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=24).prop_map(|(p, q)| rational::ratio(p, q))
}

fn prefix(max_len: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(small_rational(), 1..=max_len)
}

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = TruncatedMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(small_rational(), c), r)
            .prop_map(|rows| TruncatedMatrix::from_rows(rows).expect("rectangular"))
    })
}

fn dot(row: &[Rational], x: &[Rational]) -> Rational {
    row.iter()
        .zip(x)
        .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_undoes_transform(x in prefix(48)) {
        let x = SeqPrefix::new(x);
        let y = bandops::apply(&BandMatrixSpec::Fhat, &x).unwrap();
        let back = bandops::apply_fhat_inverse(&y).unwrap();
        prop_assert_eq!(back.terms(), x.terms());
        let z = bandops::apply(&BandMatrixSpec::Fhat, &bandops::apply_fhat_inverse(&x).unwrap()).unwrap();
        prop_assert_eq!(z.terms(), x.terms());
        prop_assert!(bandops::roundtrip_check(&x));
    }

    #[test]
    fn transform_is_linear(x in prefix(24), c in small_rational()) {
        let n = x.len();
        let y: Vec<Rational> = x.iter().rev().cloned().collect();
        let combo = SeqPrefix::new(x.iter().zip(&y).map(|(a, b)| a * &c + b).collect());
        let fx = bandops::apply(&BandMatrixSpec::Fhat, &SeqPrefix::new(x.clone())).unwrap();
        let fy = bandops::apply(&BandMatrixSpec::Fhat, &SeqPrefix::new(y)).unwrap();
        let fc = bandops::apply(&BandMatrixSpec::Fhat, &combo).unwrap();
        for k in 0..n {
            prop_assert_eq!(&fc[k], &(&fx[k] * &c + &fy[k]));
        }
    }

    #[test]
    fn truncated_sums_through_dm(a in matrix(8, 8), seed in prefix(8), m_pick in 0usize..8) {
        let cols = a.cols();
        let x: Vec<Rational> = (0..cols).map(|k| seed[k % seed.len()].clone()).collect();
        let m = m_pick % cols;
        let y = bandops::apply(&BandMatrixSpec::Fhat, &SeqPrefix::new(x.clone())).unwrap();
        let dm = bandops::build_dm_from_a(&a, m).unwrap();
        for n in 0..a.rows() {
            prop_assert_eq!(dot(&a.row(n)[..=m], &x[..=m]), dot(dm.row(n), y.terms()));
        }
    }

    #[test]
    fn ladder_rows_are_dm_rows(a in matrix(5, 8), n_pick in 0usize..5) {
        let n = n_pick % a.rows();
        let ladder = bandops::ladder(&a, n);
        for m in 0..a.cols() {
            let dm = bandops::build_dm_from_a(&a, m).unwrap();
            prop_assert_eq!(ladder.row(m), dm.row(n));
        }
    }

    #[test]
    fn b_transforms_like_fhat_after_a(a in matrix(8, 8), seed in prefix(8)) {
        let z: Vec<Rational> = (0..a.cols()).map(|k| seed[k % seed.len()].clone()).collect();
        let az = SeqPrefix::new((0..a.rows()).map(|n| dot(a.row(n), &z)).collect());
        let bz = bandops::build_b_from_a(&a).mul_vec(&SeqPrefix::new(z)).unwrap();
        let faz = bandops::apply(&BandMatrixSpec::Fhat, &az).unwrap();
        prop_assert_eq!(bz.terms(), faz.terms());
    }

    #[test]
    fn subset_sup_grows_with_cap(a in matrix(10, 12)) {
        let mut last = Rational::zero();
        for cap in 1..=a.cols() {
            let s = subset_sup(&a, cap).unwrap();
            prop_assert!(s.value >= last);
            let attained: Rational = (0..a.rows())
                .map(|n| s.columns.iter().fold(Rational::zero(), |acc, &k| acc + a.get(n, k)).abs())
                .sum();
            prop_assert_eq!(&attained, &s.value);
            last = s.value;
        }
    }

    #[test]
    fn block_sup_is_at_least_half_the_row_sup(a in matrix(8, 8)) {
        let cap = a.cols();
        let rows = subset_sup(&a, cap).unwrap().value;
        let block = classify::block_subset_sup(&a, cap).unwrap().value;
        prop_assert!(block <= rows);
        prop_assert!(&block * rational::int(2) >= rows);
    }

    #[test]
    fn last_row_of_c_sums_alpha_dual_columns(seq in prefix(10)) {
        let a = SeqPrefix::new(seq);
        let b = classify::alpha_dual_matrix(&a);
        let c = bandops::build_c_from_a(&a);
        for k in 0..a.len() {
            let tail = (k..a.len()).fold(Rational::zero(), |acc, n| acc + b.get(n, k));
            prop_assert_eq!(c.get(a.len() - 1, k), &tail);
        }
    }

    #[test]
    fn basis_maps_to_units(n in 0usize..30, extra in 1usize..20) {
        let len = n + extra;
        let c = spaces::basis_sequence(n, len).unwrap();
        let y = bandops::apply(&BandMatrixSpec::Fhat, &c).unwrap();
        let unit = SeqPrefix::unit(n, len);
        prop_assert_eq!(y.terms(), unit.terms());
    }

    #[test]
    fn averages_stay_within_the_range(x in prefix(40)) {
        let x = SeqPrefix::new(x);
        let len = x.len();
        let m_max = len / 2;
        let n_max = len - m_max - 1;
        let grid = spaces::t_matrix(&x, m_max, n_max).unwrap();
        let hi = x.iter().max().unwrap();
        let lo = x.iter().min().unwrap();
        for row in &grid {
            for t in row {
                prop_assert!(t <= hi && t >= lo);
            }
        }
    }

    #[test]
    fn rationals_print_and_parse(r in small_rational()) {
        let text = rational::format(&r);
        prop_assert_eq!(rational::parse(&text).unwrap(), r.clone());
        prop_assert!(!text.ends_with("/1"));
    }

    #[test]
    fn sequence_files_roundtrip(x in prefix(20)) {
        let x = SeqPrefix::named("p", x);
        let json = io::to_json_string(&io::sequence_to_json(&x, Some(4)));
        prop_assert_eq!(io::sequence_from_json(&json).unwrap(), x.clone());
        let csv = io::sequence_to_csv(&x, None);
        let back = io::sequence_from_csv(&csv).unwrap();
        prop_assert_eq!(back.terms(), x.terms());
    }

    #[test]
    fn residual_is_dropped_sup(x in prefix(24), m_pick in 0usize..24) {
        let x = SeqPrefix::new(x);
        let m = m_pick % x.len();
        let r = spaces::reconstruct(&x, spaces::SpaceTag::C0Fhat, m, None, 2).unwrap();
        let y = bandops::apply(&BandMatrixSpec::Fhat, &x).unwrap();
        let dropped = y.iter().skip(m + 1).map(Signed::abs).max().unwrap_or_else(Rational::zero);
        prop_assert_eq!(r.residual_norm, dropped);
    }
}
