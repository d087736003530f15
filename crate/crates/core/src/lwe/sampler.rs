use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};

/// Tail cut in units of `σ`.
pub const TAIL_SIGMAS: f64 = 12.0;

/// Deterministic generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Support bound `⌈12σ⌉`.
pub fn tail_bound(sigma: f64) -> i64 {
    (TAIL_SIGMAS * sigma).ceil().max(1.0) as i64
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::invalid(format!("sigma must be a positive finite number, got {sigma}")));
    }
    Ok(())
}

/// One draw from `D_{Z,σ}` (mass `∝ exp(-x²/2σ²)`) by rejection from the
/// uniform distribution on `[-⌈12σ⌉, ⌈12σ⌉]`.
pub fn sample_integer<R: Rng + ?Sized>(rng: &mut R, sigma: f64) -> i64 {
    let t = tail_bound(sigma);
    let denom = 2.0 * sigma * sigma;
    loop {
        let x = rng.random_range(-t..=t);
        let xf = x as f64;
        if rng.random::<f64>() < (-xf * xf / denom).exp() {
            return x;
        }
    }
}

pub fn sample_vector<R: Rng + ?Sized>(rng: &mut R, sigma: f64, dim: usize) -> Vec<i64> {
    (0..dim).map(|_| sample_integer(rng, sigma)).collect()
}

/// `dim` independent draws from `D_{Z,σ}`; stream 0 of `seed`.
pub fn discrete_gaussian_vector(sigma: f64, dim: usize, seed: u64) -> Result<Vec<i64>> {
    check_sigma(sigma)?;
    if dim == 0 {
        return Err(Error::invalid("dimension must be >= 1"));
    }
    Ok(sample_vector(&mut stream_rng(seed, 0), sigma, dim))
}

/// Variance of `D_{Z,σ}` truncated to `|x| <= ⌈12σ⌉`, by direct summation.
pub fn analytic_variance(sigma: f64) -> f64 {
    let t = tail_bound(sigma);
    let denom = 2.0 * sigma * sigma;
    let (mut mass, mut second) = (0.0, 0.0);
    for x in -t..=t {
        let xf = x as f64;
        let w = (-xf * xf / denom).exp();
        mass += w;
        second += xf * xf * w;
    }
    second / mass
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_sigma_collapses_to_zero() {
        let v = discrete_gaussian_vector(1e-3, 1000, 1).unwrap();
        assert!(v.iter().all(|&x| x == 0));
    }

    #[test]
    fn seeds_are_deterministic() {
        let a = discrete_gaussian_vector(3.2, 500, 42).unwrap();
        let b = discrete_gaussian_vector(3.2, 500, 42).unwrap();
        let c = discrete_gaussian_vector(3.2, 500, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn variance_matches_theta_sum() {
        let sigma = 3.2;
        let v = discrete_gaussian_vector(sigma, 100_000, 9).unwrap();
        let n = v.len() as f64;
        let mean = v.iter().sum::<i64>() as f64 / n;
        let var = v.iter().map(|&x| (x as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let expected = analytic_variance(sigma);
        assert!((var / expected - 1.0).abs() < 0.05, "{var} vs {expected}");
        assert!(v.iter().all(|&x| x.abs() <= tail_bound(sigma)));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(discrete_gaussian_vector(0.0, 3, 0).is_err());
        assert!(discrete_gaussian_vector(-1.0, 3, 0).is_err());
        assert!(discrete_gaussian_vector(f64::NAN, 3, 0).is_err());
        assert!(discrete_gaussian_vector(1.0, 0, 0).is_err());
    }
}
