//! Condition numbers of the named matrices and the inequalities they satisfy.

use rug::Float;
use serde::Serialize;

use super::builders::{chebyshev_values, lagrange_inverse, matrix_from_rows, vandermonde};
use super::factor::{build_c, build_f, build_n4p, build_q4p, build_u4p, check_odd_prime};
use super::nodes::{chebyshev_nodes, retained_nodes, roots_of_unity};
use crate::error::{Error, Result};
use crate::intpoly::ArithmeticInvariants;
use crate::mpnum::{
    default_target, gauss_jordan, invert_adaptive_with, pi, BoundKind, Complex, CondReport,
    InverseResult, PrecMatrix, Scalar,
};

/// Scale of the real nodes in the Vandermonde matrix of `Φ_{4p}⁺`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeScale {
    /// `ψ = 2cos(·)`, the roots of `Φ_{4p}⁺`.
    Psi,
    /// `ψ/2`, the nonzero Chebyshev nodes of order `p`.
    HalfPsi,
}

/// Condition number of the matrix built by `source`, certified by residual.
pub fn cond_of<S, F, K>(name: &str, source: F, kernel: K, prec: u32) -> Result<(CondReport, InverseResult<S>)>
where
    S: Scalar,
    F: Fn(u32) -> Result<PrecMatrix<S>>,
    K: Fn(&PrecMatrix<S>) -> Result<PrecMatrix<S>>,
{
    let target = default_target(S::effective_precision(prec));
    let inv = invert_adaptive_with(source, kernel, prec, &target)?;
    Ok((CondReport::from_inverse(name, &inv), inv))
}

fn real_nodes(p: u64, prec: u32, scale: NodeScale) -> Result<Vec<Float>> {
    let mut nodes = retained_nodes(p, prec)?.nodes;
    if scale == NodeScale::HalfPsi {
        for x in &mut nodes {
            *x >>= 1u32;
        }
    }
    Ok(nodes)
}

/// Vandermonde matrix over the `p - 1` nonzero real nodes, in `Q_{4p}` row order.
pub fn vandermonde_real<S: Scalar>(p: u64, prec: u32, scale: NodeScale) -> Result<PrecMatrix<S>> {
    check_odd_prime(p)?;
    let nodes: Vec<S> = real_nodes(p, prec, scale)?.into_iter().map(S::from_real).collect();
    vandermonde(&nodes, prec)
}

/// `2^{(p-1)/2}`.
pub fn gautschi_bound(p: u64) -> f64 {
    2f64.powf((p - 1) as f64 / 2.0)
}

/// Cond of the Vandermonde matrix of `Φ_{4p}⁺` with the exponential lower bound.
pub fn cond_vandermonde_real(p: u64, prec: u32, scale: NodeScale) -> Result<CondReport> {
    let name = match scale {
        NodeScale::Psi => "V_real",
        NodeScale::HalfPsi => "V_real_half",
    };
    let (report, _) = cond_of::<Float, _, _>(
        name,
        |bits| vandermonde_real(p, bits, scale),
        lagrange_inverse,
        prec,
    )?;
    Ok(report.check("gautschi", BoundKind::Lower, gautschi_bound(p)))
}

/// `2·rad(n)·n^{2^k+k+2}·A(n)`.
pub fn cyclotomic_bound(inv: &ArithmeticInvariants) -> f64 {
    let k = inv.k as f64;
    let exponent = 2f64.powf(k) + k + 2.0;
    2.0 * inv.rad_n as f64 * (inv.n as f64).powf(exponent) * inv.height.to_f64()
}

/// `4·φ(rad n)·φ(n)^k`, stated for `k <= 3`.
pub fn cyclotomic_refined_bound(inv: &ArithmeticInvariants) -> Option<f64> {
    if inv.k > 3 {
        return None;
    }
    let phi_rad = crate::intpoly::euler_phi(inv.rad_n) as f64;
    Some(4.0 * phi_rad * (inv.phi_n as f64).powi(inv.k as i32))
}

/// Vandermonde matrix over the primitive `n`-th roots of unity.
pub fn vandermonde_cyclotomic(n: u64, prec: u32) -> Result<PrecMatrix<Complex>> {
    vandermonde(&roots_of_unity(n, prec)?.nodes, prec)
}

pub fn cond_vandermonde_cyclotomic(n: u64, prec: u32) -> Result<CondReport> {
    if n < 3 {
        return Err(Error::invalid(format!("cyclotomic Vandermonde needs n >= 3, got {n}")));
    }
    let inv = ArithmeticInvariants::of(n)?;
    let (report, _) = cond_of("V_cyclotomic", |bits| vandermonde_cyclotomic(n, bits), lagrange_inverse, prec)?;
    let report = report.check("cyclotomic", BoundKind::Upper, cyclotomic_bound(&inv));
    Ok(match cyclotomic_refined_bound(&inv) {
        Some(b) => report.check("cyclotomic_refined", BoundKind::Upper, b),
        None => report,
    })
}

/// `(T_i(x_k^{(N)}))`, rows by node, columns by degree.
pub fn chebyshev_matrix<S: Scalar>(n: usize, prec: u32) -> Result<PrecMatrix<S>> {
    let nodes = chebyshev_nodes(n, prec)?;
    matrix_from_rows(&nodes.nodes, prec, |x| chebyshev_values(x, n))
}

/// `W_N = (P_i(x_k))` with `P_0 = T_0/√π`, `P_j = √(2/π)·T_j`.
pub fn kuian_matrix<S: Scalar>(n: usize, prec: u32) -> Result<PrecMatrix<S>> {
    let nodes = chebyshev_nodes(n, prec)?;
    let inv_sqrt_pi = pi(prec).sqrt().recip();
    let sqrt_two = Float::with_val(prec, 2).sqrt();
    matrix_from_rows(&nodes.nodes, prec, |x| {
        chebyshev_values(x, n)
            .into_iter()
            .enumerate()
            .map(|(j, mut t)| {
                t *= &inv_sqrt_pi;
                if j > 0 {
                    t *= &sqrt_two;
                }
                t
            })
            .collect()
    })
}

/// Cond of `W_N`, which equals `N`.
pub fn kuian_reference(n: usize, prec: u32) -> Result<CondReport> {
    if n == 0 {
        return Err(Error::invalid("Kuian matrix needs N >= 1"));
    }
    Ok(cond_of::<Float, _, _>("W_N", |bits| kuian_matrix(n, bits), gauss_jordan, prec)?.0)
}

/// The upper bounds proved for `Q, N, U, F, C` and the Chebyshev matrix `V_N`, `N = p`.
pub fn bound_values(p: u64) -> [(&'static str, f64); 6] {
    let pf = p as f64;
    let two_p = 2.0 * pf - 1.0;
    [
        ("Q4p", pf * (pf + 1.0)),
        ("N4p", pf * (pf + 1.0) * two_p * two_p),
        ("U4p", pf.powi(3) * (pf + 1.0) * two_p * two_p),
        ("F", two_p),
        ("C", two_p),
        ("V_N", pf * (pf + 1.0)),
    ]
}

/// Cond of `U_{4p}` alone.
pub fn cond_u4p<S: Scalar>(p: u64, prec: u32) -> Result<CondReport> {
    check_odd_prime(p)?;
    let bound = bound_values(p)[2].1;
    let (r, _) = cond_of::<S, _, _>("U4p", |bits| build_u4p(p, bits), gauss_jordan, prec)?;
    Ok(r.check("U4p", BoundKind::Upper, bound))
}

/// One report per bounded matrix, each carrying its upper bound.
///
/// Generic over the scalar so the sweep can run on machine doubles; every
/// matrix here is polynomially conditioned.
pub fn verify_bounds<S: Scalar>(p: u64, prec: u32) -> Result<Vec<CondReport>> {
    check_odd_prime(p)?;
    if p < 5 {
        return Err(Error::invalid(format!("bound suite needs p >= 5, got {p}")));
    }
    let bounds = bound_values(p);
    let n = p as usize;
    type Source<S> = Box<dyn Fn(u32) -> Result<PrecMatrix<S>>>;
    let sources: [Source<S>; 6] = [
        Box::new(move |b| build_q4p(p, b)),
        Box::new(move |b| build_n4p(p, b)),
        Box::new(move |b| build_u4p(p, b)),
        Box::new(move |b| build_f(p, b)),
        Box::new(move |b| build_c(p, b)),
        Box::new(move |b| chebyshev_matrix(n, b)),
    ];
    sources
        .iter()
        .zip(bounds)
        .map(|(source, (name, bound))| {
            let (r, _) = cond_of(name, source, gauss_jordan, prec)?;
            Ok(r.check(name, BoundKind::Upper, bound))
        })
        .collect()
}

/// `||P||_F <= 2√p` and, for `p >= 5`, `||P⁻¹||_F <= p√(p-1)/2`.
#[derive(Debug, Clone, Serialize)]
pub struct DiagonalNormCheck {
    pub p: u64,
    pub norm: f64,
    pub norm_bound: f64,
    pub inverse_norm: f64,
    pub inverse_norm_bound: Option<f64>,
    pub satisfied: bool,
}

pub fn diagonal_norm_check(p: u64, prec: u32) -> Result<DiagonalNormCheck> {
    check_odd_prime(p)?;
    let nodes = retained_nodes(p, prec)?.nodes;
    let mut sq = Float::new(prec);
    let mut inv_sq = Float::new(prec);
    for x in &nodes {
        let s = Float::with_val(prec, x.square_ref());
        inv_sq += Float::with_val(prec, s.recip_ref());
        sq += s;
    }
    let pf = p as f64;
    let norm = sq.sqrt().to_f64();
    let inverse_norm = inv_sq.sqrt().to_f64();
    let norm_bound = 2.0 * pf.sqrt();
    let inverse_norm_bound = (p >= 5).then(|| pf * (pf - 1.0).sqrt() / 2.0);
    let satisfied = norm <= norm_bound && inverse_norm_bound.is_none_or(|b| inverse_norm <= b);
    Ok(DiagonalNormCheck {
        p,
        norm,
        norm_bound,
        inverse_norm,
        inverse_norm_bound,
        satisfied,
    })
}

/// Reference values printed alongside the computed table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceRow {
    pub p: u64,
    pub cond_v: f64,
    pub cond_u: f64,
    pub bound_term: f64,
}

pub const REFERENCE_TABLE: [ReferenceRow; 5] = [
    ReferenceRow { p: 13, cond_v: 1.43e4, cond_u: 25.92, bound_term: 1.93e7 },
    ReferenceRow { p: 101, cond_v: 1.06e19, cond_u: 583.1, bound_term: 4.24e12 },
    ReferenceRow { p: 127, cond_v: 1.35e19, cond_u: 823.3, bound_term: 1.68e13 },
    ReferenceRow { p: 257, cond_v: 6.89e23, cond_u: 2374.05, bound_term: 1.15e15 },
    ReferenceRow { p: 509, cond_v: 4.29e27, cond_u: 18491.2, bound_term: 6.95e16 },
];

pub fn reference_row(p: u64) -> Option<ReferenceRow> {
    REFERENCE_TABLE.iter().copied().find(|r| r.p == p)
}

#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub p: u64,
    pub degree: u64,
    pub cond_v: Option<f64>,
    pub cond_u: Option<f64>,
    /// `4p⁶`.
    pub bound_term: f64,
    pub reference: Option<ReferenceRow>,
    /// Computed and reference `cond_v` differ by more than a factor of 10.
    pub v_mismatch: Option<bool>,
    pub v_precision_bits: Option<u32>,
    pub u_precision_bits: Option<u32>,
    pub error: Option<String>,
}

/// One row of the conditioning table. Failures are recorded in the row.
pub fn table_row(p: u64, prec: u32) -> TableRow {
    let pf = p as f64;
    let reference = reference_row(p);
    let mut row = TableRow {
        p,
        degree: p.saturating_sub(1),
        cond_v: None,
        cond_u: None,
        bound_term: 4.0 * pf.powi(6),
        reference,
        v_mismatch: None,
        v_precision_bits: None,
        u_precision_bits: None,
        error: None,
    };
    let mut errors = Vec::new();
    match cond_vandermonde_real(p, prec, NodeScale::HalfPsi) {
        Ok(r) => {
            row.cond_v = Some(r.cond);
            row.v_precision_bits = Some(r.precision_bits);
            row.v_mismatch = reference.map(|pr| (r.cond / pr.cond_v).log10().abs() > 1.0);
        }
        Err(e) => errors.push(format!("V: {e}")),
    }
    match cond_u4p::<Float>(p, prec) {
        Ok(r) => {
            row.cond_u = Some(r.cond);
            row.u_precision_bits = Some(r.precision_bits);
        }
        Err(e) => errors.push(format!("U: {e}")),
    }
    if !errors.is_empty() {
        row.error = Some(errors.join("; "));
    }
    row
}
