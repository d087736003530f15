//! Properties of norms, inversion and condition numbers.

use cyclocond::mpnum::*;
use proptest::prelude::*;
use rug::Float;

const PREC: u32 = 192;

fn matrix(entries: &[f64], n: usize) -> RealMatrix {
    RealMatrix::from_fn(n, n, PREC, |i, j| Float::with_val(PREC, entries[i * n + j]))
}

/// Random matrices shifted towards diagonal dominance so they are invertible.
fn invertible(n: usize) -> impl Strategy<Value = RealMatrix> {
    proptest::collection::vec(-1.0f64..1.0, n * n).prop_map(move |mut v| {
        for i in 0..n {
            v[i * n + i] += if v[i * n + i] >= 0.0 { n as f64 } else { -(n as f64) };
        }
        matrix(&v, n)
    })
}

fn rel(a: &Float, b: &Float) -> Float {
    Float::with_val(PREC, Float::with_val(PREC, a - b) / b).abs()
}

#[test]
fn norm_examples() {
    assert_eq!(RealMatrix::identity(4, 64).frobenius_norm(), 2);
    let a = matrix(&[1.0, 2.0, 3.0, 4.0], 2);
    assert_eq!(a.frobenius_norm(), Float::with_val(PREC, 30).sqrt());
    assert_eq!(matrix(&[1.0, -7.0, 3.0, 4.0], 2).max_entry_norm(), 7);
    let five = a.scale(&Float::with_val(PREC, 5));
    assert_eq!(five.frobenius_norm(), Float::with_val(PREC, a.frobenius_norm() * 5u32));
}

#[test]
fn inversion_examples() {
    let i3 = RealMatrix::identity(3, PREC);
    let r = invert(&i3, &default_target(PREC)).unwrap();
    assert_eq!(r.residual, 0);
    assert_eq!(r.inverse.to_f64_rows(), i3.to_f64_rows());
    let d = matrix(&[2.0, 0.0, 0.0, 4.0], 2);
    let r = invert(&d, &default_target(PREC)).unwrap();
    assert_eq!(r.inverse.to_f64_rows(), vec![vec![0.5, 0.0], vec![0.0, 0.25]]);
    for n in 1..6 {
        assert!((cond(&RealMatrix::identity(n, PREC)).unwrap().cond - n as f64).abs() < 1e-12);
    }
}

#[test]
fn hilbert_inverts_to_half_precision() {
    let h = RealMatrix::from_fn(8, 8, 256, |i, j| Float::with_val(256, 1) / Float::with_val(256, (i + j + 1) as u32));
    let r = invert(&h, &default_target(256)).unwrap();
    assert!(r.residual < pow2_neg(128, 256));
    assert_eq!(r.precision_used, 256);
}

#[test]
fn json_round_trip_is_lossless() {
    let h = RealMatrix::from_fn(3, 4, 200, |i, j| Float::with_val(200, 1) / Float::with_val(200, (i + 2 * j + 3) as u32));
    let back = RealMatrix::from_json(&h.to_json()).unwrap();
    assert_eq!(back, h);
    assert_eq!(h.to_json()["precision_bits"], 200);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn cond_is_submultiplicative(a in invertible(5), b in invertible(5)) {
        let ca = cond(&a).unwrap().cond_exact;
        let cb = cond(&b).unwrap().cond_exact;
        let cab = cond(&a.try_mul(&b).unwrap()).unwrap().cond_exact;
        let slack = Float::with_val(PREC, 1) + pow2_neg(PREC / 4, PREC);
        prop_assert!(cab <= Float::with_val(PREC, &ca * &cb) * slack);
    }

    #[test]
    fn inverse_round_trip(a in invertible(6)) {
        let r = invert(&a, &default_target(PREC)).unwrap();
        let left = inversion_residual(&r.inverse, &a).unwrap();
        prop_assert!(left <= Float::with_val(PREC, &r.residual * 4u32).max(&pow2_neg(PREC - 16, PREC)));
    }

    #[test]
    fn cond_is_scale_and_inverse_invariant(a in invertible(5), lambda in 0.5f64..20.0) {
        let base = cond(&a).unwrap().cond_exact;
        let scaled = cond(&a.scale(&Float::with_val(PREC, lambda))).unwrap().cond_exact;
        let inv = invert(&a, &default_target(PREC)).unwrap().inverse;
        let of_inverse = cond(&inv).unwrap().cond_exact;
        let tol = pow2_neg(PREC / 2, PREC);
        prop_assert!(rel(&scaled, &base) < tol);
        prop_assert!(rel(&of_inverse, &base) < tol);
    }

    #[test]
    fn cond_is_row_permutation_invariant(a in invertible(5), seed in 0usize..120) {
        let mut perm: Vec<usize> = (0..5).collect();
        let mut s = seed;
        for i in (1..5).rev() {
            perm.swap(i, s % (i + 1));
            s /= i + 1;
        }
        let base = cond(&a).unwrap().cond_exact;
        let permuted = cond(&a.permute_rows(&perm)).unwrap().cond_exact;
        prop_assert!(rel(&permuted, &base) < pow2_neg(PREC / 2, PREC));
    }

    #[test]
    fn principal_submatrix_norm_is_smaller(a in invertible(6), k in 1usize..=6) {
        prop_assert!(a.principal(k).frobenius_norm() <= a.frobenius_norm());
        prop_assert!(a.max_entry_norm() <= a.frobenius_norm());
    }

    #[test]
    fn cond_is_at_least_dimension(a in invertible(4)) {
        let r = cond(&a).unwrap();
        prop_assert!(r.cond >= 4.0 * (1.0 - 1e-12));
        let prod = r.frobenius * r.frobenius_inverse;
        prop_assert!((prod - r.cond).abs() <= 1e-12 * r.cond);
    }
}
