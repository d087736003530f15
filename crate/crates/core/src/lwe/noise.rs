use std::io::Write;

use rug::{Float, Integer};
use serde::Serialize;

use super::ring::LweParams;
use super::sampler::{sample_vector, stream_rng};
use crate::construct::bounds::{cond_of, vandermonde_real, NodeScale};
use crate::construct::factor::build_u4p;
use crate::construct::lagrange_inverse;
use crate::construct::Factorization;
use crate::error::{Error, Result};
use crate::mpnum::{gauss_jordan, RealMatrix};

/// A matrix and its certified inverse.
#[derive(Debug, Clone)]
pub struct LinearMap {
    pub matrix: RealMatrix,
    pub inverse: RealMatrix,
    pub residual: Float,
}

impl LinearMap {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn precision(&self) -> u32 {
        self.matrix.precision()
    }

    pub fn frobenius(&self) -> Float {
        self.matrix.frobenius_norm()
    }

    pub fn inverse_frobenius(&self) -> Float {
        self.inverse.frobenius_norm()
    }

    pub fn forward(&self, u: &[Float]) -> Result<Vec<Float>> {
        self.matrix.apply(u)
    }

    pub fn backward(&self, v: &[Float]) -> Result<Vec<Float>> {
        self.inverse.apply(v)
    }
}

/// `u ↦ U_{4p}·u`, coordinates in the basis `{r*_i(ψ)}` mapped to the canonical embedding.
pub fn lattice_embedding(p: u64, prec: u32) -> Result<LinearMap> {
    let (_, inv) = cond_of::<Float, _, _>("U4p", |bits| build_u4p(p, bits), gauss_jordan, prec)?;
    Ok(LinearMap {
        matrix: inv.matrix,
        inverse: inv.inverse,
        residual: inv.residual,
    })
}

/// Coordinate embedding through the Vandermonde matrix of `Φ_{4p}⁺`.
pub fn vandermonde_embedding(p: u64, prec: u32) -> Result<LinearMap> {
    let (_, inv) = cond_of::<Float, _, _>(
        "V_real",
        |bits| vandermonde_real(p, bits, NodeScale::Psi),
        lagrange_inverse,
        prec,
    )?;
    Ok(LinearMap {
        matrix: inv.matrix,
        inverse: inv.inverse,
        residual: inv.residual,
    })
}

fn check_len(len: usize, fact: &Factorization) -> Result<()> {
    let expected = fact.u4p.cols();
    if len != expected {
        return Err(Error::DimensionMismatch { expected, found: len });
    }
    Ok(())
}

pub fn integers_to_floats(u: &[i64], prec: u32) -> Vec<Float> {
    u.iter().map(|&x| Float::with_val(prec, x)).collect()
}

/// `U_{4p}·u`.
pub fn embed_forward(coeffs: &[i64], fact: &Factorization) -> Result<Vec<Float>> {
    check_len(coeffs.len(), fact)?;
    fact.u4p.apply(&integers_to_floats(coeffs, fact.precision))
}

/// `U_{4p}⁻¹·v`, near-integral when `v` lies in the image lattice.
pub fn embed_inverse(v: &[Float], fact: &Factorization) -> Result<Vec<Float>> {
    check_len(v.len(), fact)?;
    fact.u4p_inverse()?.apply(v)
}

/// Nearest integers and the largest rounding distance.
pub fn round_to_integers(v: &[Float]) -> (Vec<Integer>, Float) {
    let prec = v.first().map_or(53, Float::prec);
    let mut worst = Float::new(prec);
    let rounded = v
        .iter()
        .map(|x| {
            let r = Float::with_val(prec, x.round_ref());
            let d = Float::with_val(prec, x - &r).abs();
            if d > worst {
                worst = d;
            }
            r.to_integer().expect("finite coordinate")
        })
        .collect();
    (rounded, worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Debug, Clone, Serialize)]
pub struct NoiseStats {
    pub direction: Direction,
    pub trials: u64,
    /// Trials whose error vector was zero and contributed no ratio.
    pub skipped_zero: u64,
    pub mean_ratio: f64,
    pub max_ratio: f64,
    pub frobenius_bound: f64,
}

impl NoiseStats {
    pub fn within_bound(&self) -> bool {
        self.max_ratio <= self.frobenius_bound * (1.0 + 2f64.powi(-32))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MapStats {
    pub forward: NoiseStats,
    pub inverse: NoiseStats,
    pub frobenius: f64,
    pub inverse_frobenius: f64,
    pub cond: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NoiseReport {
    pub params: LweParams,
    pub precision_bits: u32,
    pub forward: NoiseStats,
    pub inverse: NoiseStats,
    pub u_frobenius: f64,
    pub u_inv_frobenius: f64,
    pub cond_u: f64,
    /// The same trials through the Vandermonde matrix of `Φ_{4p}⁺`.
    pub vandermonde: Option<MapStats>,
}

struct Accumulator {
    sum: f64,
    max: f64,
    count: u64,
}

impl Accumulator {
    fn new() -> Self {
        Self { sum: 0.0, max: 0.0, count: 0 }
    }

    fn push(&mut self, r: f64) {
        self.sum += r;
        self.max = self.max.max(r);
        self.count += 1;
    }

    fn finish(&self, direction: Direction, trials: u64, bound: f64) -> NoiseStats {
        NoiseStats {
            direction,
            trials,
            skipped_zero: trials - self.count,
            mean_ratio: if self.count == 0 { 0.0 } else { self.sum / self.count as f64 },
            max_ratio: self.max,
            frobenius_bound: bound,
        }
    }
}

fn euclidean(v: &[Float]) -> Float {
    let prec = v.first().map_or(53, Float::prec);
    let mut acc = Float::new(prec);
    for x in v {
        acc += x * x;
    }
    acc.sqrt()
}

fn ratio(map_out: &[Float], norm_e: &Float) -> f64 {
    Float::with_val(norm_e.prec(), euclidean(map_out) / norm_e).to_f64()
}

pub fn trial_csv_header(with_contrast: bool) -> &'static str {
    if with_contrast {
        "trial,error_norm,forward_ratio,inverse_ratio,v_forward_ratio,v_inverse_ratio"
    } else {
        "trial,error_norm,forward_ratio,inverse_ratio"
    }
}

/// Ratios `||Ue||/||e||` and `||U⁻¹e||/||e||` over `trials` error vectors
/// `e ← D_{Z,σ}^{p-1}`, trial `i` drawn from stream `i` of the seed.
///
/// With `contrast`, the same vectors also go through the Vandermonde matrix.
/// With `dump`, one CSV row per trial is written to it.
pub fn noise_amplification(
    params: &LweParams,
    trials: u64,
    prec: u32,
    contrast: bool,
    mut dump: Option<&mut dyn Write>,
) -> Result<NoiseReport> {
    if trials == 0 {
        return Err(Error::invalid("trials must be >= 1"));
    }
    let u = lattice_embedding(params.p, prec)?;
    let v = if contrast { Some(vandermonde_embedding(params.p, prec)?) } else { None };
    if let Some(out) = dump.as_deref_mut() {
        writeln!(out, "{}", trial_csv_header(contrast)).map_err(io_error)?;
    }

    let mut acc = [Accumulator::new(), Accumulator::new(), Accumulator::new(), Accumulator::new()];
    for trial in 0..trials {
        let mut rng = stream_rng(params.seed, trial);
        let e = sample_vector(&mut rng, params.sigma, params.dim);
        if e.iter().all(|&x| x == 0) {
            continue;
        }
        let mut ratios = Vec::with_capacity(4);
        for map in std::iter::once(&u).chain(v.as_ref()) {
            let ef = integers_to_floats(&e, map.precision());
            let norm_e = euclidean(&ef);
            ratios.push(ratio(&map.forward(&ef)?, &norm_e));
            ratios.push(ratio(&map.backward(&ef)?, &norm_e));
        }
        for (a, &r) in acc.iter_mut().zip(&ratios) {
            a.push(r);
        }
        if let Some(out) = dump.as_deref_mut() {
            let norm = (e.iter().map(|&x| (x * x) as f64).sum::<f64>()).sqrt();
            let cols: Vec<String> = ratios.iter().map(|r| format!("{r:e}")).collect();
            writeln!(out, "{trial},{norm:e},{}", cols.join(",")).map_err(io_error)?;
        }
    }

    let stats = |map: &LinearMap, fwd: &Accumulator, inv: &Accumulator| {
        let f = map.frobenius().to_f64();
        let fi = map.inverse_frobenius().to_f64();
        MapStats {
            forward: fwd.finish(Direction::Forward, trials, f),
            inverse: inv.finish(Direction::Inverse, trials, fi),
            frobenius: f,
            inverse_frobenius: fi,
            cond: f * fi,
        }
    };
    let main = stats(&u, &acc[0], &acc[1]);
    Ok(NoiseReport {
        params: params.clone(),
        precision_bits: u.precision(),
        forward: main.forward,
        inverse: main.inverse,
        u_frobenius: main.frobenius,
        u_inv_frobenius: main.inverse_frobenius,
        cond_u: main.cond,
        vandermonde: v.as_ref().map(|m| stats(m, &acc[2], &acc[3])),
    })
}

fn io_error(e: std::io::Error) -> Error {
    Error::invalid(format!("cannot write trial dump: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::factorize;

    #[test]
    fn p3_embedding_examples() {
        let fact = factorize(3, 256).unwrap();
        let s = Float::with_val(256, 3).sqrt();
        let v = embed_forward(&[0, 1], &fact).unwrap();
        let tol = Float::with_val(256, 1) >> 250u32;
        assert!(Float::with_val(256, &v[0] - &s).abs() < tol);
        assert!(Float::with_val(256, &v[1] + &s).abs() < tol);
        let ones = embed_forward(&[1, 0], &fact).unwrap();
        assert!(ones.iter().all(|x| *x == 1));
        let back = embed_inverse(&v, &fact).unwrap();
        let (r, dist) = round_to_integers(&back);
        assert_eq!(r, [0, 1]);
        assert!(dist < Float::with_val(256, 1) >> 64u32);
        assert!(embed_forward(&[0, 0], &fact).unwrap().iter().all(Float::is_zero));
        assert!(embed_forward(&[1, 2, 3], &fact).is_err());
    }

    #[test]
    fn small_experiment_respects_bounds() {
        let params = LweParams::new(13, None, 3.2, 7).unwrap();
        let mut buf = Vec::new();
        let r = noise_amplification(&params, 200, 256, true, Some(&mut buf)).unwrap();
        assert!(r.forward.within_bound() && r.inverse.within_bound());
        assert!((r.cond_u - 25.92).abs() < 0.26);
        let v = r.vandermonde.unwrap();
        assert!(v.forward.within_bound() && v.inverse.within_bound());
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 201);
        let again = noise_amplification(&params, 200, 256, true, None).unwrap();
        assert_eq!(again.forward.max_ratio, r.forward.max_ratio);
    }
}
