//! `M_{4p} = F·Q_{4p}·C = diag(2, N_{4p})` and `N_{4p} = P·U_{4p}`.
//!
//! Rows are indexed by node residues `2k - 1` (after moving the zero node to
//! the top), columns by polynomial degree.

use std::sync::OnceLock;

use rug::{Float, Integer};
use serde::Serialize;

use super::builders::{matrix_from_rows, r_values, reduced_values, star_values};
use super::exact::IntMatrix;
use super::nodes::{q4p_row_nodes, retained_nodes};
use crate::error::{Error, Result};
use crate::intpoly::is_prime;
use crate::mpnum::{PrecMatrix, RealMatrix, Scalar};

pub const ROW_CONVENTION: &str =
    "rows: node residues 2k-1 with the zero node (residue p) moved to row 0; columns: polynomial degree";

pub fn check_odd_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::invalid(format!("expected an odd prime p >= 3, got {p}")));
    }
    Ok(())
}

/// `2cos(iπ/2)`.
fn two_cos_quarter(i: u64) -> i64 {
    match i % 4 {
        0 => 2,
        2 => -2,
        _ => 0,
    }
}

/// Last entry of the first row of `Q_{4p}`, `2cos((p-1)π/2)`.
pub fn epsilon(p: u64) -> i64 {
    two_cos_quarter(p - 1)
}

/// Tail of the first row of `C`: `r_i = -cos(iπ/2)`, `i = 1..p-1`.
pub fn r_vector(p: u64) -> Vec<i64> {
    (1..p).map(|i| -two_cos_quarter(i) / 2).collect()
}

/// `Q_{4p} = (R_i(ψ_{2k-1}))`, `p × p`.
pub fn build_q4p<S: Scalar>(p: u64, prec: u32) -> Result<PrecMatrix<S>> {
    check_odd_prime(p)?;
    let nodes = q4p_row_nodes(p, prec)?;
    matrix_from_rows(&nodes.nodes, prec, |t| r_values(t, p as usize))
}

/// Identity with `-1` in column 0 below the diagonal.
pub fn f_integer(p: u64) -> Result<IntMatrix> {
    check_odd_prime(p)?;
    let n = p as usize;
    let mut f = IntMatrix::identity(n);
    for k in 1..n {
        f.set(k, 0, Integer::from(-1));
    }
    Ok(f)
}

/// Identity with `r` as the tail of row 0.
pub fn c_integer(p: u64) -> Result<IntMatrix> {
    check_odd_prime(p)?;
    let mut c = IntMatrix::identity(p as usize);
    for (i, r) in r_vector(p).into_iter().enumerate() {
        c.set(0, i + 1, Integer::from(r));
    }
    Ok(c)
}

fn lift_integer<S: Scalar>(m: &IntMatrix, prec: u32) -> PrecMatrix<S> {
    PrecMatrix::from_fn(m.rows(), m.cols(), prec, |i, j| {
        S::from_real(Float::with_val(prec, m.get(i, j)))
    })
}

pub fn build_f<S: Scalar>(p: u64, prec: u32) -> Result<PrecMatrix<S>> {
    Ok(lift_integer(&f_integer(p)?, prec))
}

pub fn build_c<S: Scalar>(p: u64, prec: u32) -> Result<PrecMatrix<S>> {
    Ok(lift_integer(&c_integer(p)?, prec))
}

/// `N_{4p} = (R*_{j+1}(ψ))` over the `p - 1` retained nodes.
pub fn build_n4p<S: Scalar>(p: u64, prec: u32) -> Result<PrecMatrix<S>> {
    check_odd_prime(p)?;
    let nodes = retained_nodes(p, prec)?;
    matrix_from_rows(&nodes.nodes, prec, |t| star_values(t, (p - 1) as usize))
}

/// `U_{4p} = (r*_j(ψ))` over the `p - 1` retained nodes.
pub fn build_u4p<S: Scalar>(p: u64, prec: u32) -> Result<PrecMatrix<S>> {
    check_odd_prime(p)?;
    let nodes = retained_nodes(p, prec)?;
    matrix_from_rows(&nodes.nodes, prec, |t| reduced_values(t, (p - 1) as usize))
}

/// `P = diag(ψ)` over the retained nodes.
pub fn build_p<S: Scalar>(p: u64, prec: u32) -> Result<PrecMatrix<S>> {
    check_odd_prime(p)?;
    let nodes = retained_nodes(p, prec)?;
    let m = nodes.len();
    let mut out = PrecMatrix::zeros(m, m, prec);
    for (i, x) in nodes.nodes.into_iter().enumerate() {
        out.set(i, i, S::from_real(x));
    }
    Ok(out)
}

/// `diag(2, N_{4p})`, assembled structurally.
pub fn build_m4p<S: Scalar>(p: u64, prec: u32) -> Result<PrecMatrix<S>> {
    let n = build_n4p::<S>(p, prec)?;
    let size = p as usize;
    let mut m = PrecMatrix::zeros(size, size, prec);
    m.set(0, 0, S::from_real(Float::with_val(prec, 2)));
    for i in 0..size - 1 {
        for j in 0..size - 1 {
            m.set(i + 1, j + 1, n.get(i, j).clone());
        }
    }
    Ok(m)
}

#[derive(Debug, Clone)]
pub struct Factorization {
    pub p: u64,
    pub precision: u32,
    pub q4p: RealMatrix,
    pub f: IntMatrix,
    pub c: IntMatrix,
    pub m4p: RealMatrix,
    pub n4p: RealMatrix,
    pub p_diag: RealMatrix,
    pub u4p: RealMatrix,
    pub epsilon: i64,
    pub r_vector: Vec<i64>,
    /// `||F·Q·C - M||_F`
    pub residual_fqc: Float,
    /// `||P·U - N||_F`
    pub residual_pu: Float,
    u4p_inverse: OnceLock<RealMatrix>,
}

impl Factorization {
    /// Residual tolerance `2^{-prec/2}·p`.
    pub fn tolerance(&self) -> Float {
        let mut t = Float::with_val(self.precision, 1) >> (self.precision / 2);
        t *= self.p;
        t
    }

    /// `U_{4p}⁻¹`, computed on first use.
    pub fn u4p_inverse(&self) -> Result<&RealMatrix> {
        if let Some(inv) = self.u4p_inverse.get() {
            return Ok(inv);
        }
        let inv = crate::mpnum::invert(&self.u4p, &crate::mpnum::default_target(self.precision))?;
        Ok(self.u4p_inverse.get_or_init(|| inv.inverse))
    }

    pub fn residuals_within_tolerance(&self) -> bool {
        let tol = self.tolerance();
        self.residual_fqc < tol && self.residual_pu < tol
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.p,
            "precision_bits": self.precision,
            "convention": ROW_CONVENTION,
            "epsilon": self.epsilon,
            "r_vector": self.r_vector,
            "residual_fqc": crate::serde_util::float_to_decimal(&self.residual_fqc),
            "residual_pu": crate::serde_util::float_to_decimal(&self.residual_pu),
            "Q4p": self.q4p.to_json(),
            "F": serde_json::to_value(&self.f).expect("integer matrix serializes"),
            "C": serde_json::to_value(&self.c).expect("integer matrix serializes"),
            "M4p": self.m4p.to_json(),
            "N4p": self.n4p.to_json(),
            "P": self.p_diag.to_json(),
            "U4p": self.u4p.to_json(),
        })
    }
}

impl Serialize for Factorization {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Builds every factor and checks both routes against each other.
pub fn factorize(p: u64, prec: u32) -> Result<Factorization> {
    check_odd_prime(p)?;
    let q4p = build_q4p::<Float>(p, prec)?;
    let f = f_integer(p)?;
    let c = c_integer(p)?;

    let qc = q4p.try_mul(&c.to_real(prec))?;
    let two = Float::with_val(prec, 2);
    if *qc.get(0, 0) != two || (1..qc.cols()).any(|i| !qc.get(0, i).is_zero()) {
        return Err(Error::invariant("first row of Q·C is not (2, 0, ..., 0)"));
    }
    let fqc = f.to_real(prec).try_mul(&qc)?;

    let m4p = build_m4p::<Float>(p, prec)?;
    let n4p = build_n4p::<Float>(p, prec)?;
    let p_diag = build_p::<Float>(p, prec)?;
    let u4p = build_u4p::<Float>(p, prec)?;

    let residual_fqc = fqc.try_sub(&m4p)?.frobenius_norm();
    let residual_pu = p_diag.try_mul(&u4p)?.try_sub(&n4p)?.frobenius_norm();

    let out = Factorization {
        p,
        precision: prec,
        q4p,
        f,
        c,
        m4p,
        n4p,
        p_diag,
        u4p,
        epsilon: epsilon(p),
        r_vector: r_vector(p),
        residual_fqc,
        residual_pu,
        u4p_inverse: OnceLock::new(),
    };
    if !out.residuals_within_tolerance() {
        return Err(Error::invariant(format!(
            "factorization residuals exceed tolerance: FQC {}, PU {}",
            out.residual_fqc.to_f64(),
            out.residual_pu.to_f64()
        )));
    }
    Ok(out)
}
