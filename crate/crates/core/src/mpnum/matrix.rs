use std::fmt;

use rug::{Float, Integer};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::scalar::{Complex, Scalar};
use crate::error::{Error, Result};

/// Dense row-major matrix whose entries share one working precision.
#[derive(Clone, PartialEq)]
pub struct PrecMatrix<S: Scalar> {
    rows: usize,
    cols: usize,
    prec: u32,
    data: Vec<S>,
}

pub type RealMatrix = PrecMatrix<Float>;
pub type ComplexMatrix = PrecMatrix<Complex>;

impl<S: Scalar> PrecMatrix<S> {
    pub fn zeros(rows: usize, cols: usize, prec: u32) -> Self {
        let prec = S::effective_precision(prec);
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            prec,
            data: vec![S::zero(prec); rows * cols],
        }
    }

    pub fn identity(n: usize, prec: u32) -> Self {
        let mut m = Self::zeros(n, n, prec);
        for i in 0..n {
            m.data[i * n + i] = S::one(prec);
        }
        m
    }

    /// Builds entry `(i, j)` from `f(i, j)`, rounding each to `prec`.
    pub fn from_fn(rows: usize, cols: usize, prec: u32, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let prec = S::effective_precision(prec);
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let mut x = f(i, j);
                if x.prec() != prec {
                    x.set_prec(prec);
                }
                data.push(x);
            }
        }
        Self { rows, cols, prec, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>, prec: u32) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::invalid("matrix must have at least one row and column"));
        }
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                expected: c,
                found: bad.len(),
            });
        }
        let mut it = rows.into_iter().flatten();
        Ok(Self::from_fn(r, c, prec, |_, _| it.next().expect("counted")))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut S {
        &mut self.data[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn set(&mut self, i: usize, j: usize, mut v: S) {
        v.set_prec(self.prec);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    /// Copy re-rounded to `prec` bits. Only exact where the entries are exactly
    /// representable; rebuild from the source when more bits are needed.
    pub fn with_precision(&self, prec: u32) -> Self {
        let prec = S::effective_precision(prec);
        let mut out = self.clone();
        out.prec = prec;
        for x in &mut out.data {
            x.set_prec(prec);
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.prec, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, lambda: &S) -> Self {
        let mut out = self.clone();
        for x in &mut out.data {
            x.mul_assign_ref(lambda);
        }
        out
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let prec = self.prec.max(rhs.prec);
        let mut out = Self::zeros(self.rows, rhs.cols, prec);
        for i in 0..self.rows {
            let a_row = self.row(i);
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, a) in a_row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (o, b) in out_row.iter_mut().zip(rhs.row(k)) {
                    o.add_mul_assign(a, b);
                }
            }
        }
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: rhs.rows * rhs.cols,
            });
        }
        let mut out = self.with_precision(self.prec.max(rhs.prec));
        for (o, b) in out.data.iter_mut().zip(&rhs.data) {
            o.sub_assign_ref(b);
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[S]) -> Result<Vec<S>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = S::zero(self.prec);
                for (a, x) in self.row(i).iter().zip(v) {
                    acc.add_mul_assign(a, x);
                }
                acc
            })
            .collect())
    }

    /// Contiguous block `rows × cols` starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of range");
        Self::from_fn(rows, cols, self.prec, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// Leading principal `k × k` submatrix.
    pub fn principal(&self, k: usize) -> Self {
        self.block(0, 0, k, k)
    }

    /// Row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.rows, "permutation length");
        Self::from_fn(self.rows, self.cols, self.prec, |i, j| self.get(perm[i], j).clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Square root of the sum of squared entry moduli.
    pub fn frobenius_norm(&self) -> Float {
        self.frobenius_norm_sqr().sqrt()
    }

    pub fn frobenius_norm_sqr(&self) -> Float {
        let mut acc = Float::new(self.prec);
        for x in &self.data {
            acc += x.norm_sqr();
        }
        acc
    }

    /// Largest entry modulus (not the operator infinity-norm).
    pub fn max_entry_norm(&self) -> Float {
        self.data
            .iter()
            .map(Scalar::modulus)
            .fold(Float::new(self.prec), |m, x| if x > m { x } else { m })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rows": self.rows,
            "cols": self.cols,
            "precision_bits": self.prec,
            "entries": (0..self.rows)
                .map(|i| self.row(i).iter().map(Scalar::to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let parse_err = |detail: &str| Error::Parse {
            what: "matrix",
            detail: detail.to_string(),
        };
        let prec = v["precision_bits"]
            .as_u64()
            .ok_or_else(|| parse_err("missing precision_bits"))? as u32;
        let rows = v["entries"]
            .as_array()
            .ok_or_else(|| parse_err("missing entries"))?
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| parse_err("row is not an array"))?
                    .iter()
                    .map(|x| S::from_json(x, prec))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows, prec)
    }
}

impl RealMatrix {
    pub fn from_integers(rows: &[Vec<Integer>], prec: u32) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|c| Float::with_val(prec, c)).collect())
                .collect(),
            prec,
        )
    }

    pub fn from_f64_rows(rows: &[&[f64]], prec: u32) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&c| Float::with_val(prec, c)).collect())
                .collect(),
            prec,
        )
    }

    pub fn diagonal(diag: &[Float], prec: u32) -> Self {
        Self::from_fn(diag.len(), diag.len(), prec, |i, j| {
            if i == j {
                diag[i].clone()
            } else {
                Float::new(prec)
            }
        })
    }

    /// Entries as `f64`, for display and tests.
    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(Float::to_f64).collect())
            .collect()
    }
}

impl<S: Scalar> fmt::Debug for PrecMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PrecMatrix {}x{} @ {} bits", self.rows, self.cols, self.prec)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

impl<S: Scalar> Serialize for PrecMatrix<S> {
    fn serialize<Se: Serializer>(&self, serializer: Se) -> std::result::Result<Se::Ok, Se::Error> {
        let v = self.to_json();
        let mut st = serializer.serialize_struct("PrecMatrix", 4)?;
        st.serialize_field("rows", &v["rows"])?;
        st.serialize_field("cols", &v["cols"])?;
        st.serialize_field("precision_bits", &v["precision_bits"])?;
        st.serialize_field("entries", &v["entries"])?;
        st.end()
    }
}
