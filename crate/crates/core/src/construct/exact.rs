use rug::{Float, Integer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intpoly::reduced_r_family;
use crate::mpnum::RealMatrix;

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Integer>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Integer::new(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Integer::from(1));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Integer {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Integer) {
        self.data[i * self.cols + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<Integer>> {
        self.data.chunks(self.cols).map(<[Integer]>::to_vec).collect()
    }

    pub fn to_real(&self, prec: u32) -> RealMatrix {
        RealMatrix::from_fn(self.rows, self.cols, prec, |i, j| Float::with_val(prec, self.get(i, j)))
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| *self.get(i, j) == 0))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| *self.get(i, j) == 0))
    }

    pub fn has_unit_diagonal(&self) -> bool {
        (0..self.rows.min(self.cols)).all(|i| *self.get(i, i) == 1)
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if *a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = Integer::from(a * rhs.get(k, j));
                    out.data[i * rhs.cols + j] += prod;
                }
            }
        }
        Ok(out)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<Integer> {
        if self.rows != self.cols {
            return Err(Error::invalid("determinant of a non-square matrix"));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Integer::from(1));
        }
        let mut m = self.to_rows();
        let mut sign = 1;
        let mut prev = Integer::from(1);
        for k in 0..n - 1 {
            if m[k][k] == 0 {
                match (k + 1..n).find(|&r| m[r][k] != 0) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(Integer::new()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let mut v = Integer::from(&m[i][j] * &m[k][k]);
                    v -= Integer::from(&m[i][k] * &m[k][j]);
                    m[i][j] = v.div_exact(&prev);
                }
            }
            prev = m[k][k].clone();
        }
        Ok(Integer::from(&m[n - 1][n - 1] * sign))
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .data
            .chunks(self.cols)
            .map(|r| r.iter().map(Integer::to_string).collect())
            .collect();
        rows.serialize(s)
    }
}

/// Column `i` holds the monomial coefficients of `r*_i`, `i = 0..p-2`.
///
/// Unit upper triangular, so the determinant is 1.
pub fn transition_to_power_basis(p: u64) -> Result<IntMatrix> {
    super::factor::check_odd_prime(p)?;
    let m = (p - 1) as usize;
    let family = reduced_r_family(m)?;
    let mut t = IntMatrix::zeros(m, m);
    for (i, r) in family.iter().enumerate() {
        for (j, c) in r.coeffs().iter().enumerate() {
            t.set(j, i, c.clone());
        }
    }
    if !t.is_upper_triangular() || !t.has_unit_diagonal() {
        return Err(Error::invariant("transition matrix is not unit upper triangular"));
    }
    let det = t.determinant()?;
    if det != 1 {
        return Err(Error::invariant(format!("transition matrix has determinant {det}")));
    }
    Ok(t)
}
