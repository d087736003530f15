use rug::Integer;
use serde::Serialize;

use super::families::height;
use crate::error::{Error, Result};

/// Distinct prime divisors of `n` in increasing order (empty for `n = 1`).
pub fn distinct_primes(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn radical(n: u64) -> u64 {
    distinct_primes(n).into_iter().product()
}

pub fn euler_phi(n: u64) -> u64 {
    distinct_primes(n)
        .into_iter()
        .fold(n, |acc, q| acc / q * (q - 1))
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && distinct_primes(n) == [n]
}

/// The arithmetic quantities attached to a conductor `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArithmeticInvariants {
    pub n: u64,
    pub phi_n: u64,
    pub rad_n: u64,
    /// Largest absolute coefficient of Φₙ.
    #[serde(serialize_with = "crate::serde_util::integer_as_string")]
    pub height: Integer,
    /// Number of distinct primes dividing `n`.
    pub k: u32,
}

impl ArithmeticInvariants {
    pub fn of(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("conductor must be positive"));
        }
        Ok(Self {
            n,
            phi_n: euler_phi(n),
            rad_n: radical(n),
            height: height(n)?,
            k: distinct_primes(n).len() as u32,
        })
    }
}
