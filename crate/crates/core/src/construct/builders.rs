//! Vandermonde and quasi-Vandermonde builders.
//!
//! Matrix rows are indexed by nodes, columns by polynomial degree.

use rug::Float;

use crate::error::{Error, Result};
use crate::intpoly::IntPolynomial;
use crate::mpnum::{PrecMatrix, Scalar};

/// Guard bits for an `O(count)`-step recurrence.
fn recurrence_guard(count: usize) -> u32 {
    16 + usize::BITS - count.leading_zeros()
}

/// `R_0(t)..R_{count-1}(t)` from `R_i = t·R_{i-1} - R_{i-2}`, `R_0 = 2`, `R_1 = t`.
pub fn r_values(t: &Float, count: usize) -> Vec<Float> {
    let prec = t.prec();
    let work = prec + recurrence_guard(count);
    let t = Float::with_val(work, t);
    let mut out: Vec<Float> = Vec::with_capacity(count);
    for i in 0..count {
        let v = match i {
            0 => Float::with_val(work, 2),
            1 => t.clone(),
            _ => {
                let mut v = Float::with_val(work, &t * &out[i - 1]);
                v -= &out[i - 2];
                v
            }
        };
        out.push(v);
    }
    out.into_iter().map(|v| Float::with_val(prec, v)).collect()
}

/// `2cos(iπ/2)` as a small integer.
fn two_cos_quarter(i: usize) -> i32 {
    match i % 4 {
        0 => 2,
        2 => -2,
        _ => 0,
    }
}

/// `R*_1(t)..R*_count(t)` from `R*_{i+1} = t·R*_i - R*_{i-1} + 2cos(iπ/2)·t`,
/// with `R*_1 = t`, `R*_2 = t²`.
pub fn star_values(t: &Float, count: usize) -> Vec<Float> {
    let prec = t.prec();
    let work = prec + recurrence_guard(count);
    let t = Float::with_val(work, t);
    let mut out: Vec<Float> = Vec::with_capacity(count);
    for idx in 0..count {
        let i = idx + 1;
        let v = match i {
            1 => t.clone(),
            2 => Float::with_val(work, t.square_ref()),
            _ => {
                let mut v = Float::with_val(work, &t * &out[idx - 1]);
                v -= &out[idx - 2];
                v += Float::with_val(work, &t * two_cos_quarter(i - 1));
                v
            }
        };
        out.push(v);
    }
    out.into_iter().map(|v| Float::with_val(prec, v)).collect()
}

/// `r*_0(t)..r*_{count-1}(t)` from `r*_i = t·r*_{i-1} - r*_{i-2} + 2cos(iπ/2)`,
/// with `r*_0 = 1`, `r*_1 = t`.
pub fn reduced_values(t: &Float, count: usize) -> Vec<Float> {
    let prec = t.prec();
    let work = prec + recurrence_guard(count);
    let t = Float::with_val(work, t);
    let mut out: Vec<Float> = Vec::with_capacity(count);
    for i in 0..count {
        let v = match i {
            0 => Float::with_val(work, 1),
            1 => t.clone(),
            _ => {
                let mut v = Float::with_val(work, &t * &out[i - 1]);
                v -= &out[i - 2];
                v += two_cos_quarter(i);
                v
            }
        };
        out.push(v);
    }
    out.into_iter().map(|v| Float::with_val(prec, v)).collect()
}

/// `T_0(x)..T_{count-1}(x)` from the three-term recurrence.
pub fn chebyshev_values(x: &Float, count: usize) -> Vec<Float> {
    let prec = x.prec();
    let work = prec + recurrence_guard(count);
    let x = Float::with_val(work, x);
    let mut out: Vec<Float> = Vec::with_capacity(count);
    for i in 0..count {
        let v = match i {
            0 => Float::with_val(work, 1),
            1 => x.clone(),
            _ => {
                let mut v = Float::with_val(work, &x * &out[i - 1]);
                v *= 2u32;
                v -= &out[i - 2];
                v
            }
        };
        out.push(v);
    }
    out.into_iter().map(|v| Float::with_val(prec, v)).collect()
}

/// Evaluates an exact polynomial at `x`, correct to about `prec` bits.
///
/// Horner runs with enough extra bits to absorb the cancellation bounded by
/// `Σ |c_j|·|x|^j`, then rounds to `prec`.
pub fn eval_exact(poly: &IntPolynomial, x: &Float, prec: u32) -> Float {
    let ax = Float::with_val(64, x.abs_ref());
    let mut mass = Float::new(64);
    for c in poly.coeffs().iter().rev() {
        mass *= &ax;
        mass += Float::with_val(64, c).abs();
    }
    let guard = mass.get_exp().unwrap_or(0).max(0) as u32 + 16;
    let xw = Float::with_val(prec + guard, x);
    Float::with_val(prec, poly.eval_float(&xw))
}

/// `(p_j(node_i))` for an exact polynomial family.
pub fn quasi_vandermonde_exact<S: Scalar>(
    nodes: &[Float],
    polys: &[IntPolynomial],
    prec: u32,
) -> Result<PrecMatrix<S>> {
    if nodes.is_empty() || polys.is_empty() {
        return Err(Error::invalid("quasi-Vandermonde matrix needs nodes and polynomials"));
    }
    Ok(PrecMatrix::from_fn(nodes.len(), polys.len(), prec, |i, j| {
        S::from_real(eval_exact(&polys[j], &nodes[i], prec))
    }))
}

/// Matrix whose row `i` is `row_values(node_i)`.
pub fn matrix_from_rows<S: Scalar>(
    nodes: &[Float],
    prec: u32,
    row_values: impl Fn(&Float) -> Vec<Float>,
) -> Result<PrecMatrix<S>> {
    let rows = nodes
        .iter()
        .map(|t| {
            let t = Float::with_val(prec, t);
            row_values(&t).into_iter().map(S::from_real).collect()
        })
        .collect();
    PrecMatrix::from_rows(rows, prec)
}

/// Square Vandermonde matrix, row `i = (1, θ_i, θ_i², …)`.
pub fn vandermonde<S: Scalar>(nodes: &[S], prec: u32) -> Result<PrecMatrix<S>> {
    let n = nodes.len();
    if n == 0 {
        return Err(Error::invalid("Vandermonde matrix needs at least one node"));
    }
    let mut m = PrecMatrix::zeros(n, n, prec);
    for (i, theta) in nodes.iter().enumerate() {
        let mut theta = theta.clone();
        theta.set_prec(m.precision());
        let mut power = S::one(prec);
        for j in 0..n {
            m.set(i, j, power.clone());
            power.mul_assign_ref(&theta);
        }
    }
    Ok(m)
}

/// Inverse of a square Vandermonde matrix through its Lagrange basis.
///
/// Reads the nodes from column 1. Column `k` of the inverse holds the
/// coefficients of `L_k(x) = ∏_{j≠k} (x - θ_j)/(θ_k - θ_j)`, obtained by
/// synthetic division of the master polynomial. `O(n²)` operations.
pub fn lagrange_inverse<S: Scalar>(v: &PrecMatrix<S>) -> Result<PrecMatrix<S>> {
    let n = v.rows();
    let prec = v.precision();
    if n == 1 {
        let mut x = S::one(prec);
        x.div_assign_ref(v.get(0, 0));
        return Ok(PrecMatrix::from_fn(1, 1, prec, |_, _| x.clone()));
    }
    let nodes: Vec<S> = v.column(1);

    // master = ∏ (x - θ_j), coefficients low to high, degree n.
    let mut master = vec![S::zero(prec); n + 1];
    master[0] = S::one(prec);
    for (deg, theta) in nodes.iter().enumerate() {
        for j in (0..=deg + 1).rev() {
            let lower = if j > 0 { Some(master[j - 1].clone()) } else { None };
            let mut cur = std::mem::replace(&mut master[j], S::zero(prec));
            let mut next = S::zero(prec);
            if let Some(l) = lower {
                next = l;
            }
            cur.mul_assign_ref(theta);
            next.sub_assign_ref(&cur);
            master[j] = next;
        }
    }

    let mut inv = PrecMatrix::zeros(n, n, prec);
    let mut q = vec![S::zero(prec); n];
    for (k, theta) in nodes.iter().enumerate() {
        let mut denom = S::one(prec);
        for (j, other) in nodes.iter().enumerate() {
            if j != k {
                let mut d = theta.clone();
                d.sub_assign_ref(other);
                denom.mul_assign_ref(&d);
            }
        }
        if denom.is_zero() {
            return Err(Error::Singular { precision: prec, column: k });
        }
        // master / (x - θ_k)
        q[n - 1] = S::one(prec);
        for j in (1..n).rev() {
            let mut v = q[j].clone();
            v.mul_assign_ref(theta);
            v.add_assign_ref(&master[j]);
            q[j - 1] = v;
        }
        for (j, qj) in q.iter().enumerate() {
            let mut x = qj.clone();
            x.div_assign_ref(&denom);
            inv.set(j, k, x);
        }
    }
    Ok(inv)
}
