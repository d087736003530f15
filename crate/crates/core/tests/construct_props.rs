//! Properties of the node sets and the matrices built from them.

use cyclocond::construct::builders::{chebyshev_values, matrix_from_rows, quasi_vandermonde_exact, r_values};
use cyclocond::construct::factor::{c_integer, epsilon, f_integer};
use cyclocond::construct::*;
use cyclocond::intpoly::{euler_phi, is_prime, IntPolynomial};
use cyclocond::mpnum::{cond, default_target, gauss_jordan, pow2_neg, BoundKind, RealMatrix};
use proptest::prelude::*;
use rug::Float;

const PREC: u32 = 256;

fn odd_primes(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo..=hi).filter(|&p| p % 2 == 1 && is_prime(p))
}

fn sorted(mut v: Vec<Float>) -> Vec<Float> {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

#[test]
fn psi_nodes_are_doubled_chebyshev_nodes() {
    let tol = pow2_neg(PREC - 8, PREC);
    for p in odd_primes(3, 101) {
        let psi = sorted(psi_nodes(4 * p, PREC).unwrap().nodes);
        let cheb: Vec<Float> = chebyshev_nodes(p as usize, PREC)
            .unwrap()
            .scaled(2)
            .nodes
            .into_iter()
            .filter(|x| !x.is_zero())
            .collect();
        let cheb = sorted(cheb);
        assert_eq!(psi.len(), cheb.len(), "p = {p}");
        for (a, b) in psi.iter().zip(&cheb) {
            assert!(Float::with_val(PREC, a - b).abs() <= tol, "p = {p}");
        }
        let retained = sorted(retained_nodes(p, PREC).unwrap().nodes);
        assert_eq!(retained.len(), psi.len());
        for (a, b) in psi.iter().zip(&retained) {
            assert!(Float::with_val(PREC, a - b).abs() <= tol, "p = {p}");
        }
    }
}

#[test]
fn scaled_r_matrix_has_chebyshev_condition() {
    for p in odd_primes(3, 61) {
        let n = p as usize;
        let nodes = q4p_row_nodes(p, PREC).unwrap().nodes;
        let r = matrix_from_rows::<Float>(&nodes, PREC, |t| r_values(t, n)).unwrap();
        let cheb_nodes = chebyshev_nodes(n, PREC).unwrap().nodes;
        let t = matrix_from_rows::<Float>(&cheb_nodes, PREC, |x| chebyshev_values(x, n)).unwrap();
        let cr = cond(&r).unwrap().cond_exact;
        let ct = cond(&t).unwrap().cond_exact;
        let rel = Float::with_val(PREC, Float::with_val(PREC, &cr - &ct) / &ct).abs();
        assert!(rel < pow2_neg(PREC / 2, PREC), "p = {p}");
    }
}

#[test]
fn factorization_residuals_are_small() {
    for p in odd_primes(3, 67) {
        let f = factorize(p, PREC).unwrap();
        assert!(f.residuals_within_tolerance(), "p = {p}");
        assert_eq!(f.u4p.rows(), (p - 1) as usize);
        assert_eq!(f.m4p.rows(), p as usize);
    }
}

#[test]
fn integer_factors_are_unimodular() {
    for p in odd_primes(3, 53) {
        let f = f_integer(p).unwrap();
        let c = c_integer(p).unwrap();
        assert!(f.is_lower_triangular() && f.has_unit_diagonal());
        assert!(c.is_upper_triangular() && c.has_unit_diagonal());
        assert_eq!(f.determinant().unwrap(), 1);
        assert_eq!(c.determinant().unwrap(), 1);
    }
    assert_eq!(epsilon(5), 2);
    assert_eq!(epsilon(3), -2);
}

#[test]
fn gautschi_lower_bound_holds() {
    for p in odd_primes(5, 101) {
        let r = cond_vandermonde_real(p, PREC, NodeScale::Psi).unwrap();
        assert_eq!(r.bounds[0].kind, BoundKind::Lower);
        assert!(r.all_bounds_satisfied(), "p = {p}: cond {}", r.cond);
    }
}

#[test]
fn diagonal_norms_within_bounds() {
    for p in odd_primes(3, 509) {
        let d = diagonal_norm_check(p, 128).unwrap();
        assert!(d.satisfied, "p = {p}");
        assert_eq!(d.inverse_norm_bound.is_some(), p >= 5);
    }
}

#[test]
fn power_of_two_cyclotomic_is_scaled_isometry() {
    for l in 2..=6u32 {
        let n = 1u64 << l;
        let r = cond_vandermonde_cyclotomic(n, PREC).unwrap();
        let phi = euler_phi(n) as f64;
        assert!((r.cond - phi).abs() <= 1e-12 * phi, "n = {n}");
        assert!(r.all_bounds_satisfied());
    }
}

#[test]
fn n12_cyclotomic_bounds() {
    let r = cond_vandermonde_cyclotomic(12, PREC).unwrap();
    assert!(r.all_bounds_satisfied());
    let refined = r.bounds.iter().find(|b| b.name == "cyclotomic_refined").unwrap();
    assert_eq!(refined.value, 128.0);
}

#[test]
fn kuian_condition_equals_dimension() {
    for n in [1usize, 2, 3, 7, 20] {
        let r = kuian_reference(n, PREC).unwrap();
        assert!((r.cond - n as f64).abs() <= 1e-12 * n as f64, "N = {n}");
    }
}

#[test]
fn bound_suite_small_primes() {
    for p in odd_primes(5, 31) {
        for r in verify_bounds::<Float>(p, PREC).unwrap() {
            assert!(r.all_bounds_satisfied(), "p = {p}, {}: {}", r.matrix, r.cond);
        }
    }
}

#[test]
fn f_condition_is_exactly_its_bound() {
    for p in odd_primes(5, 23) {
        let f = verify_bounds::<Float>(p, PREC).unwrap().into_iter().find(|r| r.matrix == "F").unwrap();
        assert_eq!(f.cond, (2 * p - 1) as f64);
        assert!(f.all_bounds_satisfied());
    }
}

fn monic_family(tails: &[Vec<i64>]) -> Vec<IntPolynomial> {
    tails
        .iter()
        .enumerate()
        .map(|(i, tail)| {
            let mut c = tail[..i].to_vec();
            c.push(1);
            IntPolynomial::from_i64s(&c)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn quasi_vandermonde_is_invertible(
        pi in 0usize..5,
        tails in proptest::collection::vec(proptest::collection::vec(-5i64..=5, 16), 16),
    ) {
        let p = [3u64, 5, 7, 11, 17][pi];
        let nodes = psi_nodes(4 * p, PREC).unwrap().nodes;
        let m = nodes.len();
        let polys = monic_family(&tails[..m]);
        let a: RealMatrix = quasi_vandermonde_exact(&nodes, &polys, PREC).unwrap();
        let inv = gauss_jordan(&a).unwrap();
        let residual = cyclocond::mpnum::inversion_residual(&a, &inv).unwrap();
        prop_assert!(residual < default_target(PREC));
    }
}
