use rug::Float;
use serde::Serialize;

use super::matrix::PrecMatrix;
use super::scalar::Scalar;
use crate::error::{Error, Result};
use crate::serde_util::float_as_string;

/// Number of precision doublings tried after the first attempt.
pub const MAX_ESCALATIONS: u32 = 4;

#[derive(Debug, Clone)]
pub struct InverseResult<S: Scalar> {
    pub inverse: PrecMatrix<S>,
    /// `||A·A⁻¹ - I||_F` at the working precision.
    pub residual: Float,
    pub precision_used: u32,
    /// The matrix that was actually inverted, at `precision_used`.
    pub matrix: PrecMatrix<S>,
}

/// `2^{-bits}` at `prec` bits.
pub fn pow2_neg(bits: u32, prec: u32) -> Float {
    Float::with_val(prec, 1) >> bits
}

/// Gauss-Jordan inversion with partial pivoting at the matrix's own precision.
pub fn gauss_jordan<S: Scalar>(a: &PrecMatrix<S>) -> Result<PrecMatrix<S>> {
    let n = a.rows();
    let prec = a.precision();
    let mut m = a.clone();
    let threshold = a.max_entry_norm() * pow2_neg(prec.saturating_sub(8), prec);
    let mut swaps = Vec::with_capacity(n);
    let mut pivot_row = vec![S::zero(prec); n];
    for k in 0..n {
        let (best, best_mod) = (k..n)
            .map(|r| (r, m.get(r, k).modulus()))
            .fold((k, Float::new(prec)), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if best_mod <= threshold {
            return Err(Error::Singular { precision: prec, column: k });
        }
        m.swap_rows(k, best);
        swaps.push(best);

        let mut inv_pivot = S::one(prec);
        inv_pivot.div_assign_ref(m.get(k, k));
        *m.get_mut(k, k) = S::one(prec);
        for j in 0..n {
            m.get_mut(k, j).mul_assign_ref(&inv_pivot);
        }
        pivot_row.clone_from_slice(m.row(k));
        for i in 0..n {
            if i == k {
                continue;
            }
            let factor = m.get(i, k).clone();
            if factor.is_zero() {
                continue;
            }
            *m.get_mut(i, k) = S::zero(prec);
            for (j, pk) in pivot_row.iter().enumerate() {
                m.get_mut(i, j).sub_mul_assign(&factor, pk);
            }
        }
    }
    // Undo the row interchanges as column interchanges, last first.
    for (k, &r) in swaps.iter().enumerate().rev() {
        m.swap_cols(k, r);
    }
    Ok(m)
}

/// `||A·X - I||_F`.
pub fn inversion_residual<S: Scalar>(a: &PrecMatrix<S>, x: &PrecMatrix<S>) -> Result<Float> {
    let n = a.rows();
    let prod = a.try_mul(x)?;
    let diff = prod.try_sub(&PrecMatrix::identity(n, prod.precision()))?;
    Ok(diff.frobenius_norm())
}

/// Residual of a handful of columns of `A·X - I`; a lower bound on the full residual.
fn sampled_residual<S: Scalar>(a: &PrecMatrix<S>, x: &PrecMatrix<S>) -> Result<Float> {
    let n = a.rows();
    let picks: Vec<usize> = if n <= 4 {
        (0..n).collect()
    } else {
        vec![0, n / 3, (2 * n) / 3, n - 1]
    };
    let mut acc = Float::new(a.precision().max(53));
    for j in picks {
        let mut col = a.apply(&x.column(j))?;
        col[j].sub_assign_ref(&S::one(a.precision()));
        for v in &col {
            acc += v.norm_sqr();
        }
    }
    Ok(acc.sqrt())
}

/// Inverts the matrix produced by `source` at increasing precision.
///
/// `source(bits)` must rebuild the matrix from its exact or trigonometric
/// definition at `bits` of precision. An attempt is accepted when the residual
/// is at most `target` and below `2^{-bits/2}`; otherwise precision doubles,
/// up to [`MAX_ESCALATIONS`] times.
pub fn invert_adaptive<S, F>(source: F, start_prec: u32, target: &Float) -> Result<InverseResult<S>>
where
    S: Scalar,
    F: Fn(u32) -> Result<PrecMatrix<S>>,
{
    invert_adaptive_with(source, gauss_jordan, start_prec, target)
}

/// [`invert_adaptive`] with a caller-supplied inversion kernel.
///
/// The kernel only proposes an inverse; acceptance always goes through the
/// residual of the matrix returned by `source`.
pub fn invert_adaptive_with<S, F, K>(
    source: F,
    kernel: K,
    start_prec: u32,
    target: &Float,
) -> Result<InverseResult<S>>
where
    S: Scalar,
    F: Fn(u32) -> Result<PrecMatrix<S>>,
    K: Fn(&PrecMatrix<S>) -> Result<PrecMatrix<S>>,
{
    let mut prec = S::effective_precision(start_prec);
    let mut last_residual = f64::INFINITY;
    let mut attempts = 0;
    let mut singular;
    loop {
        attempts += 1;
        singular = None;
        let a = source(prec)?;
        if !a.is_square() {
            return Err(Error::invalid(format!(
                "cannot invert a {}x{} matrix",
                a.rows(),
                a.cols()
            )));
        }
        let bar = pow2_neg(prec / 2, prec.max(53));
        let accept = |r: &Float| *r <= *target && *r < bar;
        match kernel(&a) {
            Ok(inverse) => {
                let quick = sampled_residual(&a, &inverse)?;
                if accept(&quick) {
                    let residual = inversion_residual(&a, &inverse)?;
                    if accept(&residual) {
                        return Ok(InverseResult {
                            inverse,
                            residual,
                            precision_used: prec,
                            matrix: a,
                        });
                    }
                    last_residual = residual.to_f64();
                } else {
                    last_residual = quick.to_f64();
                }
            }
            Err(e @ Error::Singular { .. }) => singular = Some(e),
            Err(e) => return Err(e),
        }
        let next = S::effective_precision(prec * 2);
        if attempts > MAX_ESCALATIONS || next == prec {
            break;
        }
        prec = next;
    }
    if let Some(e) = singular {
        return Err(e);
    }
    Err(Error::EscalationExhausted {
        attempts,
        precision: prec,
        residual: last_residual,
    })
}

/// Inverts a fixed matrix. Escalation re-rounds the given entries, so it only
/// helps when they are exact at the starting precision.
pub fn invert<S: Scalar>(a: &PrecMatrix<S>, target: &Float) -> Result<InverseResult<S>> {
    invert_adaptive(|prec| Ok(a.with_precision(prec)), a.precision(), target)
}

/// Default acceptance threshold `2^{-prec/2}`.
pub fn default_target(prec: u32) -> Float {
    pow2_neg(prec / 2, prec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    /// `cond <= value`
    Upper,
    /// `cond > value`
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub kind: BoundKind,
    pub value: f64,
    pub satisfied: bool,
}

/// Frobenius condition number with diagnostics and optional bound checks.
#[derive(Debug, Clone, Serialize)]
pub struct CondReport {
    pub matrix: String,
    pub dim: usize,
    pub frobenius: f64,
    pub frobenius_inverse: f64,
    pub cond: f64,
    /// Full-precision `cond`.
    #[serde(serialize_with = "float_as_string")]
    pub cond_exact: Float,
    pub residual: f64,
    pub precision_bits: u32,
    /// First entry of `bounds`, mirrored for flat consumers.
    pub bound: Option<f64>,
    pub bound_satisfied: Option<bool>,
    pub bounds: Vec<BoundCheck>,
}

impl CondReport {
    pub fn from_inverse<S: Scalar>(name: impl Into<String>, inv: &InverseResult<S>) -> Self {
        let f2 = inv.matrix.frobenius_norm_sqr();
        let fi2 = inv.inverse.frobenius_norm_sqr();
        // One rounding on the product of squares keeps integer cases exact.
        let c = Float::with_val(inv.precision_used, &f2 * &fi2).sqrt();
        let (f, fi) = (f2.sqrt(), fi2.sqrt());
        Self {
            matrix: name.into(),
            dim: inv.matrix.rows(),
            frobenius: f.to_f64(),
            frobenius_inverse: fi.to_f64(),
            cond: c.to_f64(),
            cond_exact: c,
            residual: inv.residual.to_f64(),
            precision_bits: inv.precision_used,
            bound: None,
            bound_satisfied: None,
            bounds: Vec::new(),
        }
    }

    /// Records `cond <= value` (upper) or `cond > value` (lower).
    pub fn check(mut self, name: impl Into<String>, kind: BoundKind, value: f64) -> Self {
        let satisfied = match kind {
            BoundKind::Upper => self.cond <= value,
            BoundKind::Lower => self.cond > value,
        };
        if self.bounds.is_empty() {
            self.bound = Some(value);
            self.bound_satisfied = Some(satisfied);
        }
        self.bounds.push(BoundCheck {
            name: name.into(),
            kind,
            value,
            satisfied,
        });
        self
    }

    pub fn all_bounds_satisfied(&self) -> bool {
        self.bounds.iter().all(|b| b.satisfied)
    }

    pub fn csv_header() -> &'static str {
        "p,matrix_name,cond,bound,satisfied"
    }

    /// `p,matrix_name,cond,bound,satisfied` for the primary bound.
    pub fn csv_row(&self, p: u64) -> String {
        format!(
            "{},{},{:e},{},{}",
            p,
            self.matrix,
            self.cond,
            self.bound.map(|b| format!("{b:e}")).unwrap_or_default(),
            self.bound_satisfied.map(|s| s.to_string()).unwrap_or_default()
        )
    }
}

/// Frobenius condition number of a fixed matrix.
pub fn cond<S: Scalar>(a: &PrecMatrix<S>) -> Result<CondReport> {
    let inv = invert(a, &default_target(a.precision()))?;
    Ok(CondReport::from_inverse("A", &inv))
}

/// Condition number of a matrix rebuilt from its source at escalating precision.
pub fn cond_adaptive<S, F>(name: &str, source: F, start_prec: u32) -> Result<(CondReport, InverseResult<S>)>
where
    S: Scalar,
    F: Fn(u32) -> Result<PrecMatrix<S>>,
{
    let target = default_target(S::effective_precision(start_prec));
    let inv = invert_adaptive(source, start_prec, &target)?;
    Ok((CondReport::from_inverse(name, &inv), inv))
}
