use std::sync::Arc;

use rand::Rng;
use rug::Integer;
use serde::Serialize;

use super::sampler::{sample_vector, stream_rng};
use crate::construct::check_odd_prime;
use crate::error::{Error, Result};
use crate::intpoly::{is_prime, real_cyclotomic};

/// Largest modulus accepted; keeps every product inside `i128`.
pub const MAX_MODULUS: u64 = 1 << 62;

/// Smallest prime `q >= 2^14` with `q ≡ 1 (mod 4p)`.
pub fn default_modulus(p: u64) -> u64 {
    let step = 4 * p;
    let mut q = (1u64 << 14).div_ceil(step) * step + 1;
    while !is_prime(q) {
        q += step;
    }
    q
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LweParams {
    pub p: u64,
    pub q: u64,
    pub sigma: f64,
    /// Ring degree `p - 1`.
    pub dim: usize,
    pub seed: u64,
}

impl LweParams {
    /// `q = None` picks [`default_modulus`].
    pub fn new(p: u64, q: Option<u64>, sigma: f64, seed: u64) -> Result<Self> {
        check_odd_prime(p)?;
        let q = q.unwrap_or_else(|| default_modulus(p));
        if q <= 2 || !is_prime(q) || q >= MAX_MODULUS {
            return Err(Error::invalid(format!("q must be a prime in (2, 2^62), got {q}")));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::invalid(format!("sigma must be a positive finite number, got {sigma}")));
        }
        Ok(Self {
            p,
            q,
            sigma,
            dim: (p - 1) as usize,
            seed,
        })
    }
}

fn balance(x: i128, q: u64) -> i64 {
    let q = q as i128;
    let mut r = x.rem_euclid(q);
    if r > q / 2 {
        r -= q;
    }
    r as i64
}

/// `Z_q[x]/(f)` for a monic `f` of degree `dim`, stored reduced mod `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ring {
    pub q: u64,
    pub dim: usize,
    /// Low coefficients of `f` (the leading 1 is implicit), reduced mod `q`.
    modulus_tail: Vec<i64>,
}

impl Ring {
    pub fn from_monic(f: &crate::intpoly::IntPolynomial, q: u64) -> Result<Self> {
        if !f.is_monic() || f.degree() < 1 {
            return Err(Error::invalid("ring modulus must be monic of degree >= 1"));
        }
        let dim = f.degree() as usize;
        let qi = Integer::from(q);
        let modulus_tail = f.coeffs()[..dim]
            .iter()
            .map(|c| balance(Integer::from(c % &qi).to_i128().expect("reduced"), q))
            .collect();
        Ok(Self { q, dim, modulus_tail })
    }

    /// `Z_q[x]/(Φ_{4p}⁺)`.
    pub fn real_cyclotomic(params: &LweParams) -> Result<Self> {
        Self::from_monic(&real_cyclotomic(4 * params.p)?, params.q)
    }

    /// Reduces an arbitrary-length integer vector into the ring.
    pub fn reduce(self: &Arc<Self>, coeffs: &[i128]) -> ModPoly {
        let q = self.q;
        let mut work: Vec<i128> = coeffs.iter().map(|&c| balance(c, q) as i128).collect();
        for k in (self.dim..work.len()).rev() {
            let c = work[k];
            if c == 0 {
                continue;
            }
            work[k] = 0;
            let base = k - self.dim;
            for (j, &m) in self.modulus_tail.iter().enumerate() {
                work[base + j] = balance(work[base + j] - c * m as i128, q) as i128;
            }
        }
        work.resize(self.dim.max(work.len()), 0);
        ModPoly {
            coeffs: work[..self.dim].iter().map(|&c| balance(c, q)).collect(),
            ring: Arc::clone(self),
        }
    }

    pub fn from_i64s(self: &Arc<Self>, coeffs: &[i64]) -> ModPoly {
        let wide: Vec<i128> = coeffs.iter().map(|&c| c as i128).collect();
        self.reduce(&wide)
    }

    pub fn zero(self: &Arc<Self>) -> ModPoly {
        self.from_i64s(&[])
    }

    /// Uniformly random element.
    pub fn random<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R) -> ModPoly {
        let half = (self.q / 2) as i64;
        let coeffs: Vec<i64> = (0..self.dim).map(|_| rng.random_range(-half..=half)).collect();
        self.from_i64s(&coeffs)
    }
}

/// Ring element with balanced coefficients in `[-(q-1)/2, (q-1)/2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModPoly {
    coeffs: Vec<i64>,
    ring: Arc<Ring>,
}

impl ModPoly {
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn modulus(&self) -> u64 {
        self.ring.q
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check_same_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::invalid("ring elements come from different rings"));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        let sum: Vec<i128> = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| a as i128 + b as i128).collect();
        Ok(self.ring.reduce(&sum))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        let diff: Vec<i128> = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| a as i128 - b as i128).collect();
        Ok(self.ring.reduce(&diff))
    }

    /// Schoolbook product followed by exact reduction.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        let q = self.ring.q;
        let n = self.coeffs.len();
        let mut prod = vec![0i128; (2 * n).saturating_sub(1)];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                prod[i + j] = balance(prod[i + j] + a as i128 * b as i128, q) as i128;
            }
        }
        Ok(self.ring.reduce(&prod))
    }
}

impl Serialize for ModPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_json::json!({ "q": self.ring.q, "coeffs": self.coeffs }).serialize(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PlweSample {
    pub a: ModPoly,
    pub b: ModPoly,
    /// The error term; exposed for testing only.
    pub e: Vec<i64>,
}

/// `(a, a·s + e)` with `a` uniform and `e ← D_{Z,σ}^{p-1}`, from stream `index` of the seed.
pub fn plwe_sample(secret: &ModPoly, params: &LweParams, index: u64) -> Result<PlweSample> {
    if secret.modulus() != params.q || secret.coeffs.len() != params.dim {
        return Err(Error::invalid("secret does not belong to the parameter ring"));
    }
    let ring = secret.ring();
    let mut rng = stream_rng(params.seed, index);
    let a = ring.random(&mut rng);
    let e = sample_vector(&mut rng, params.sigma, params.dim);
    let b = a.mul(secret)?.add(&ring.from_i64s(&e))?;
    Ok(PlweSample { a, b, e })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, q: u64) -> (LweParams, Arc<Ring>) {
        let params = LweParams::new(p, Some(q), 3.2, 1).unwrap();
        let r = Arc::new(Ring::real_cyclotomic(&params).unwrap());
        (params, r)
    }

    #[test]
    fn default_modulus_shape() {
        for p in [3u64, 13, 101, 509] {
            let q = default_modulus(p);
            assert!(q >= 1 << 14 && is_prime(q) && q % (4 * p) == 1);
        }
        assert_eq!(default_modulus(13), 16433);
    }

    #[test]
    fn x_squared_mod_phi12_plus() {
        let (params, r) = ring(3, 13);
        let x = r.from_i64s(&[0, 1]);
        assert_eq!(x.mul(&x).unwrap().coeffs(), [3, 0]);
        let zero_error = plwe_sample(&r.zero(), &params, 0).unwrap();
        assert_eq!(zero_error.b.sub(&r.from_i64s(&zero_error.e)).unwrap(), r.zero());
    }

    #[test]
    fn coefficients_stay_balanced() {
        let (params, r) = ring(7, 13);
        let mut rng = stream_rng(5, 0);
        for _ in 0..50 {
            let a = r.random(&mut rng);
            let b = r.random(&mut rng);
            let c = a.mul(&b).unwrap();
            assert!(c.coeffs().iter().all(|&x| x.abs() <= 6));
            assert_eq!(c.coeffs().len(), params.dim);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(LweParams::new(2, None, 1.0, 0).is_err());
        assert!(LweParams::new(13, Some(15), 1.0, 0).is_err());
        assert!(LweParams::new(13, Some(2), 1.0, 0).is_err());
        assert!(LweParams::new(13, None, 0.0, 0).is_err());
    }
}
