use std::fmt;

use rug::ops::NegAssign;
use rug::Float;

use crate::error::{Error, Result};
use crate::serde_util::{float_from_decimal, float_to_decimal};

/// Field element usable as a matrix entry: MPFR reals and complexes built on them.
///
/// The in-place operations round to the precision of `self`.
pub trait Scalar: Clone + fmt::Debug + Send + Sync + PartialEq {
    /// Widest precision the type can carry; `None` when unbounded.
    fn max_precision() -> Option<u32> {
        None
    }

    /// Precision actually used when `requested` bits are asked for.
    fn effective_precision(requested: u32) -> u32 {
        Self::max_precision().map_or(requested, |m| requested.min(m))
    }

    fn zero(prec: u32) -> Self;
    fn one(prec: u32) -> Self;
    fn from_real(re: Float) -> Self;

    fn prec(&self) -> u32;
    /// Re-rounds the value to `prec` bits.
    fn set_prec(&mut self, prec: u32);

    /// `|x|^2` at the precision of `self`.
    fn norm_sqr(&self) -> Float;
    fn modulus(&self) -> Float {
        self.norm_sqr().sqrt()
    }
    fn is_zero(&self) -> bool;

    fn add_assign_ref(&mut self, rhs: &Self);
    fn sub_assign_ref(&mut self, rhs: &Self);
    fn mul_assign_ref(&mut self, rhs: &Self);
    fn div_assign_ref(&mut self, rhs: &Self);
    fn neg_assign(&mut self);

    /// `self -= a * b`.
    fn sub_mul_assign(&mut self, a: &Self, b: &Self);
    /// `self += a * b`.
    fn add_mul_assign(&mut self, a: &Self, b: &Self);

    fn to_json(&self) -> serde_json::Value;
    fn from_json(v: &serde_json::Value, prec: u32) -> Result<Self>;
}

impl Scalar for Float {
    fn zero(prec: u32) -> Self {
        Float::new(prec)
    }

    fn one(prec: u32) -> Self {
        Float::with_val(prec, 1)
    }

    fn from_real(re: Float) -> Self {
        re
    }

    fn prec(&self) -> u32 {
        Float::prec(self)
    }

    fn set_prec(&mut self, prec: u32) {
        Float::set_prec(self, prec);
    }

    fn norm_sqr(&self) -> Float {
        Float::with_val(Float::prec(self), self.square_ref())
    }

    fn modulus(&self) -> Float {
        Float::with_val(Float::prec(self), self.abs_ref())
    }

    fn is_zero(&self) -> bool {
        Float::is_zero(self)
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }

    fn sub_assign_ref(&mut self, rhs: &Self) {
        *self -= rhs;
    }

    fn mul_assign_ref(&mut self, rhs: &Self) {
        *self *= rhs;
    }

    fn div_assign_ref(&mut self, rhs: &Self) {
        *self /= rhs;
    }

    fn neg_assign(&mut self) {
        NegAssign::neg_assign(self);
    }

    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }

    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(float_to_decimal(self))
    }

    fn from_json(v: &serde_json::Value, prec: u32) -> Result<Self> {
        match v {
            serde_json::Value::String(s) => float_from_decimal(s, prec),
            other => Err(Error::Parse {
                what: "real matrix entry",
                detail: format!("expected a decimal string, got {other}"),
            }),
        }
    }
}

/// Machine doubles: a fixed 53-bit backend for sweeps over well-conditioned matrices.
impl Scalar for f64 {
    fn max_precision() -> Option<u32> {
        Some(53)
    }

    fn zero(_prec: u32) -> Self {
        0.0
    }

    fn one(_prec: u32) -> Self {
        1.0
    }

    fn from_real(re: Float) -> Self {
        re.to_f64()
    }

    fn prec(&self) -> u32 {
        53
    }

    fn set_prec(&mut self, _prec: u32) {}

    fn norm_sqr(&self) -> Float {
        Float::with_val(53, self * self)
    }

    fn modulus(&self) -> Float {
        Float::with_val(53, self.abs())
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }

    fn sub_assign_ref(&mut self, rhs: &Self) {
        *self -= rhs;
    }

    fn mul_assign_ref(&mut self, rhs: &Self) {
        *self *= rhs;
    }

    fn div_assign_ref(&mut self, rhs: &Self) {
        *self /= rhs;
    }

    fn neg_assign(&mut self) {
        *self = -*self;
    }

    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }

    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(format!("{self:e}"))
    }

    fn from_json(v: &serde_json::Value, _prec: u32) -> Result<Self> {
        v.as_str()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse {
                what: "f64 matrix entry",
                detail: format!("expected a decimal string, got {v}"),
            })
    }
}

/// Complex number with MPFR components of equal precision.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn new(re: Float, im: Float) -> Self {
        let prec = re.prec().max(im.prec());
        let mut z = Self { re, im };
        Scalar::set_prec(&mut z, prec);
        z
    }

    /// `e^{iθ}`.
    pub fn from_angle(theta: &Float) -> Self {
        let (s, c) = theta.clone().sin_cos(Float::new(theta.prec()));
        Self { re: c, im: s }
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }
}

impl Scalar for Complex {
    fn zero(prec: u32) -> Self {
        Self {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    fn one(prec: u32) -> Self {
        Self {
            re: Float::with_val(prec, 1),
            im: Float::new(prec),
        }
    }

    fn from_real(re: Float) -> Self {
        let prec = re.prec();
        Self {
            re,
            im: Float::new(prec),
        }
    }

    fn prec(&self) -> u32 {
        self.re.prec()
    }

    fn set_prec(&mut self, prec: u32) {
        self.re.set_prec(prec);
        self.im.set_prec(prec);
    }

    fn norm_sqr(&self) -> Float {
        let mut out = Float::with_val(self.re.prec(), self.re.square_ref());
        out += &self.im * &self.im;
        out
    }

    fn modulus(&self) -> Float {
        Float::with_val(self.re.prec(), self.re.hypot_ref(&self.im))
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }

    fn sub_assign_ref(&mut self, rhs: &Self) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }

    fn mul_assign_ref(&mut self, rhs: &Self) {
        let prec = self.re.prec();
        let re = Float::with_val(prec, self.re.mul_sub_mul_ref(&rhs.re, &self.im, &rhs.im));
        let im = Float::with_val(prec, self.re.mul_add_mul_ref(&rhs.im, &self.im, &rhs.re));
        self.re = re;
        self.im = im;
    }

    fn div_assign_ref(&mut self, rhs: &Self) {
        let prec = self.re.prec();
        let den = rhs.norm_sqr();
        let re = Float::with_val(prec, self.re.mul_add_mul_ref(&rhs.re, &self.im, &rhs.im));
        let im = Float::with_val(prec, self.im.mul_sub_mul_ref(&rhs.re, &self.re, &rhs.im));
        self.re = re / &den;
        self.im = im / &den;
    }

    fn neg_assign(&mut self) {
        NegAssign::neg_assign(&mut self.re);
        NegAssign::neg_assign(&mut self.im);
    }

    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        self.re -= &a.re * &b.re;
        self.re += &a.im * &b.im;
        self.im -= &a.re * &b.im;
        self.im -= &a.im * &b.re;
    }

    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        self.re += &a.re * &b.re;
        self.re -= &a.im * &b.im;
        self.im += &a.re * &b.im;
        self.im += &a.im * &b.re;
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::json!([float_to_decimal(&self.re), float_to_decimal(&self.im)])
    }

    fn from_json(v: &serde_json::Value, prec: u32) -> Result<Self> {
        match v.as_array().map(Vec::as_slice) {
            Some([serde_json::Value::String(re), serde_json::Value::String(im)]) => Ok(Self {
                re: float_from_decimal(re, prec)?,
                im: float_from_decimal(im, prec)?,
            }),
            _ => Err(Error::Parse {
                what: "complex matrix entry",
                detail: format!("expected [re, im] decimal strings, got {v}"),
            }),
        }
    }
}
