//! Exact polynomials over the integers and the polynomial families built on them.
//!
//! Everything here is exact: coefficients are GMP integers and no operation
//! rounds. Floating evaluation (`eval_float`) is the only exit into inexact
//! arithmetic and happens at the precision of the argument.

mod arith;
mod families;

pub use arith::{distinct_primes, euler_phi, is_prime, radical, ArithmeticInvariants};
pub use families::{
    chebyshev_t, chebyshev_t_family, cyclotomic, height, real_cyclotomic, reduced_r,
    reduced_r_family, scaled_r, scaled_r_family, star_r, star_r_family,
};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Float, Integer, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Dense polynomial with arbitrary-precision integer coefficients.
///
/// `coeffs[i]` is the coefficient of `x^i`. The vector never carries trailing
/// zeros, so the zero polynomial is the empty vector and has degree -1.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<Integer>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn x() -> Self {
        Self::monomial(1, 1)
    }

    pub fn constant(c: impl Into<Integer>) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    /// `c * x^k`.
    pub fn monomial(c: impl Into<Integer>, k: usize) -> Self {
        let mut coeffs = vec![Integer::new(); k + 1];
        coeffs[k] = c.into();
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(coeffs: Vec<Integer>) -> Self {
        let mut p = Self { coeffs };
        p.normalize();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| *c == 0) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Integer> {
        self.coeffs
    }

    /// Coefficient of `x^i`; zero past the degree.
    pub fn coeff(&self, i: usize) -> Integer {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Degree, with -1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&Integer> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| *c == 1)
    }

    /// Largest coefficient in absolute value (0 for the zero polynomial).
    pub fn height(&self) -> Integer {
        self.coeffs
            .iter()
            .map(|c| c.clone().abs())
            .max()
            .unwrap_or_default()
    }

    pub fn scale(&self, c: &Integer) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| Integer::from(a * c)).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Integer::new(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Euclidean division over the integers.
    ///
    /// Succeeds whenever every quotient step divides exactly, which is always
    /// the case for a divisor with leading coefficient ±1. Fails with
    /// `InexactDivision` otherwise.
    pub fn div_rem(&self, divisor: &IntPolynomial) -> Result<(IntPolynomial, IntPolynomial)> {
        let lead = divisor
            .leading()
            .ok_or_else(|| Error::invalid("division by the zero polynomial"))?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Integer::new(); rem.len() - dd];
        for shift in (0..quot.len()).rev() {
            let top = &rem[shift + dd];
            if *top == 0 {
                continue;
            }
            if !top.is_divisible(lead) {
                return Err(Error::InexactDivision);
            }
            let q = Integer::from(top.div_exact_ref(lead));
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[shift + j] -= Integer::from(&q * d);
            }
            quot[shift] = q;
        }
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    /// Exact quotient; errors unless the remainder vanishes.
    pub fn div_exact(&self, divisor: &IntPolynomial) -> Result<IntPolynomial> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision)
        }
    }

    pub fn eval_integer(&self, x: &Integer) -> Integer {
        let mut acc = Integer::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Horner evaluation at the precision of `x`.
    pub fn eval_float(&self, x: &Float) -> Float {
        let mut acc = Float::new(x.prec());
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// `x^m · f(x + 1/x)` with `m = deg f`, as an integer polynomial of degree `2m`.
    ///
    /// For `f = Φₙ⁺` this reproduces `Φₙ`.
    pub fn reciprocal_lift(&self) -> IntPolynomial {
        if self.is_zero() {
            return Self::zero();
        }
        let m = self.coeffs.len() - 1;
        // (x^2 + 1)^j · x^(m - j), accumulated as j grows.
        let x2p1 = IntPolynomial::from_i64s(&[1, 0, 1]);
        let mut power = IntPolynomial::one();
        let mut out = IntPolynomial::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            out = &out + &power.shift(m - j).scale(c);
            power = &power * &x2p1;
        }
        out
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let abs = c.clone().abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (i, abs == 1) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{abs}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{abs}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let mut c = self.coeff(i);
                if let Some(b) = rhs.coeffs.get(i) {
                    c += b;
                }
                c
            })
            .collect();
        IntPolynomial::from_coeffs(coeffs)
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| Integer::from(-c)).collect(),
        }
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![Integer::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPolynomial::from_coeffs(coeffs)
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            coeffs: Vec<String>,
        }
        Repr {
            coeffs: self.coeffs.iter().map(Integer::to_string).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            coeffs: Vec<String>,
        }
        let repr = Repr::deserialize(deserializer)?;
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| s.parse::<Integer>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(IntPolynomial::from_coeffs(coeffs))
    }
}
