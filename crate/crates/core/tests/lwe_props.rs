//! Ring arithmetic, PLWE samples and the lattice embedding.

use std::sync::Arc;

use cyclocond::construct::factorize;
use cyclocond::intpoly::{real_cyclotomic, IntPolynomial};
use cyclocond::lwe::*;
use proptest::prelude::*;
use rand::Rng;
use rug::{Float, Integer};

fn balanced(c: &Integer, q: u64) -> i64 {
    let q = q as i64;
    let mut r = Integer::from(c % q).to_i64().unwrap().rem_euclid(q);
    if r > q / 2 {
        r -= q;
    }
    r
}

/// Product via exact integer polynomials and Euclidean division.
fn oracle_mul(a: &[i64], b: &[i64], p: u64, q: u64) -> Vec<i64> {
    let f = real_cyclotomic(4 * p).unwrap();
    let prod = &IntPolynomial::from_i64s(a) * &IntPolynomial::from_i64s(b);
    let (_, r) = prod.div_rem(&f).unwrap();
    (0..(p - 1) as usize).map(|i| balanced(&r.coeff(i), q)).collect()
}

#[test]
fn ring_product_matches_polynomial_division() {
    for p in [3u64, 5, 7] {
        let params = LweParams::new(p, Some(13), 3.2, 0).unwrap();
        let ring = Arc::new(Ring::real_cyclotomic(&params).unwrap());
        let mut rng = stream_rng(11, p);
        for _ in 0..500 {
            let a = ring.random(&mut rng);
            let b = ring.random(&mut rng);
            let c = a.mul(&b).unwrap();
            assert_eq!(c.coeffs(), oracle_mul(a.coeffs(), b.coeffs(), p, 13).as_slice(), "p = {p}");
            assert_eq!(c, b.mul(&a).unwrap());
            let sum = a.add(&b).unwrap();
            assert_eq!(sum.sub(&b).unwrap(), a);
        }
    }
}

#[test]
fn plwe_relation_holds() {
    let params = LweParams::new(13, None, 3.2, 42).unwrap();
    let ring = Arc::new(Ring::real_cyclotomic(&params).unwrap());
    let mut rng = stream_rng(42, u64::MAX);
    let secret = ring.random(&mut rng);
    for i in 0..50 {
        let s = plwe_sample(&secret, &params, i).unwrap();
        let diff = s.b.sub(&s.a.mul(&secret).unwrap()).unwrap();
        assert_eq!(diff, ring.from_i64s(&s.e));
        let bound = tail_bound(params.sigma) as i64;
        assert!(s.e.iter().all(|x| x.abs() <= bound));
    }
}

#[test]
fn p3_sample_example() {
    let params = LweParams::new(3, Some(13), 3.2, 5).unwrap();
    let ring = Arc::new(Ring::real_cyclotomic(&params).unwrap());
    let x = ring.from_i64s(&[0, 1]);
    for i in 0..20 {
        let s = plwe_sample(&x, &params, i).unwrap();
        if s.a != x {
            continue;
        }
        let expected = ring.from_i64s(&[3 + s.e[0], s.e[1]]);
        assert_eq!(s.b, expected);
    }
    let e = [1i64, -2];
    let b = x.mul(&x).unwrap().add(&ring.from_i64s(&e)).unwrap();
    assert_eq!(b.coeffs(), [4, -2]);
}

#[test]
fn samples_are_deterministic() {
    let params = LweParams::new(7, None, 3.2, 9).unwrap();
    let ring = Arc::new(Ring::real_cyclotomic(&params).unwrap());
    let secret = ring.from_i64s(&[1, -1, 2, 0, 0, 3]);
    let a = plwe_sample(&secret, &params, 3).unwrap();
    let b = plwe_sample(&secret, &params, 3).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let c = plwe_sample(&secret, &params, 4).unwrap();
    assert_ne!(a.a, c.a);
    assert_eq!(discrete_gaussian_vector(3.2, 64, 1).unwrap(), discrete_gaussian_vector(3.2, 64, 1).unwrap());
}

#[test]
fn lattice_round_trip_p13() {
    let fact = factorize(13, 256).unwrap();
    let mut rng = stream_rng(2024, 0);
    let half = Float::with_val(256, 1) >> 1u32;
    for _ in 0..1000 {
        let u: Vec<i64> = (0..12).map(|_| rng.random_range(-1000..=1000)).collect();
        let v = embed_forward(&u, &fact).unwrap();
        let (back, dist) = round_to_integers(&embed_inverse(&v, &fact).unwrap());
        assert!(dist < half);
        assert_eq!(back, u);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in proptest::collection::vec(-6i64..=6, 6),
                 b in proptest::collection::vec(-6i64..=6, 6),
                 c in proptest::collection::vec(-6i64..=6, 6)) {
        let params = LweParams::new(7, Some(13), 3.2, 0).unwrap();
        let ring = Arc::new(Ring::real_cyclotomic(&params).unwrap());
        let (a, b, c) = (ring.from_i64s(&a), ring.from_i64s(&b), ring.from_i64s(&c));
        let left = a.mul(&b.add(&c).unwrap()).unwrap();
        let right = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }
}
