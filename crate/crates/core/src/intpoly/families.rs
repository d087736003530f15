use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::Integer;

use super::IntPolynomial;
use crate::error::{Error, Result};

fn cache() -> &'static Mutex<HashMap<u64, IntPolynomial>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, IntPolynomial>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// The n-th cyclotomic polynomial, as `(x^n - 1) / ∏_{d | n, d < n} Φ_d`.
///
/// Results are memoized process-wide; the lock is never held while recursing.
pub fn cyclotomic(n: u64) -> Result<IntPolynomial> {
    if n == 0 {
        return Err(Error::invalid("cyclotomic polynomial needs n >= 1"));
    }
    if let Some(hit) = cache().lock().expect("cyclotomic cache poisoned").get(&n) {
        return Ok(hit.clone());
    }
    let mut denom = IntPolynomial::one();
    for d in divisors(n) {
        if d < n {
            denom = &denom * &cyclotomic(d)?;
        }
    }
    let xn1 = &IntPolynomial::monomial(1, n as usize) - &IntPolynomial::one();
    let phi = xn1.div_exact(&denom)?;
    cache()
        .lock()
        .expect("cyclotomic cache poisoned")
        .insert(n, phi.clone());
    Ok(phi)
}

/// `A(n)`: the largest absolute coefficient of Φₙ.
pub fn height(n: u64) -> Result<Integer> {
    Ok(cyclotomic(n)?.height())
}

/// Chebyshev polynomials of the first kind `T_0..T_{count-1}` by the three-term recurrence.
pub fn chebyshev_t_family(count: usize) -> Vec<IntPolynomial> {
    let mut out: Vec<IntPolynomial> = Vec::with_capacity(count);
    let two_x = IntPolynomial::monomial(2, 1);
    for i in 0..count {
        let next = match i {
            0 => IntPolynomial::one(),
            1 => IntPolynomial::x(),
            _ => &(&two_x * &out[i - 1]) - &out[i - 2],
        };
        out.push(next);
    }
    out
}

pub fn chebyshev_t(i: usize) -> IntPolynomial {
    chebyshev_t_family(i + 1).pop().expect("family is nonempty")
}

/// `2·T(x/2)`, which is integral for every Chebyshev polynomial.
fn halve_argument_and_double(t: &IntPolynomial) -> Result<IntPolynomial> {
    let coeffs = t
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let num = Integer::from(c * 2u32);
            let den = Integer::from(Integer::u_pow_u(2, j as u32));
            if num.is_divisible(&den) {
                Ok(num.div_exact(&den))
            } else {
                Err(Error::invariant(format!(
                    "2·T(x/2) has a non-integral coefficient at x^{j}"
                )))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntPolynomial::from_coeffs(coeffs))
}

/// `R_0..R_{count-1}` with `R_i(x) = 2·T_i(x/2)`.
pub fn scaled_r_family(count: usize) -> Result<Vec<IntPolynomial>> {
    chebyshev_t_family(count)
        .iter()
        .map(halve_argument_and_double)
        .collect()
}

/// `R_i(x) = 2·T_i(x/2)`: monic for `i >= 1`, `R_0 = 2`, and `R_i(z + 1/z) = z^i + z^-i`.
pub fn scaled_r(i: usize) -> IntPolynomial {
    halve_argument_and_double(&chebyshev_t(i)).expect("2·T_i(x/2) is integral")
}

/// `cos(iπ/2)` as an integer in {-1, 0, 1}.
pub(crate) fn cos_quarter_turns(i: usize) -> i64 {
    match i % 4 {
        0 => 1,
        2 => -1,
        _ => 0,
    }
}

fn star_from_r(i: usize, r_i: &IntPolynomial, r_0: &IntPolynomial) -> Result<IntPolynomial> {
    let c = Integer::from(cos_quarter_turns(i));
    let star = r_i - &r_0.scale(&c);
    if star.coeff(0) != 0 || !star.is_monic() || star.degree() != i as i64 {
        return Err(Error::invariant(format!(
            "R*_{i} must be monic of degree {i} with zero constant term, got {star}"
        )));
    }
    Ok(star)
}

/// `R*_i = R_i - cos(iπ/2)·R_0`, which kills the constant term `R_i(0) = 2cos(iπ/2)`.
pub fn star_r(i: usize) -> Result<IntPolynomial> {
    if i == 0 {
        return Err(Error::invalid("R*_0 is not defined; index must be >= 1"));
    }
    star_from_r(i, &scaled_r(i), &scaled_r(0))
}

/// `R*_1..R*_count` (index 0 of the result holds `R*_1`).
pub fn star_r_family(count: usize) -> Result<Vec<IntPolynomial>> {
    let rs = scaled_r_family(count + 1)?;
    (1..=count).map(|i| star_from_r(i, &rs[i], &rs[0])).collect()
}

fn reduce_star(i: usize, star: &IntPolynomial) -> Result<IntPolynomial> {
    let r = star.div_exact(&IntPolynomial::x()).map_err(|_| {
        Error::invariant(format!("R*_{} is not divisible by x", i + 1))
    })?;
    debug_assert!(r.is_monic() && r.degree() == i as i64);
    Ok(r)
}

/// `r*_i = R*_{i+1} / x`: monic of degree `i`.
pub fn reduced_r(i: usize) -> Result<IntPolynomial> {
    reduce_star(i, &star_r(i + 1)?)
}

/// `r*_0..r*_{count-1}`.
pub fn reduced_r_family(count: usize) -> Result<Vec<IntPolynomial>> {
    star_r_family(count)?
        .iter()
        .enumerate()
        .map(|(i, s)| reduce_star(i, s))
        .collect()
}

/// Minimal polynomial of `2cos(2π/n)`, degree `φ(n)/2`.
///
/// Folds the palindromic coefficients of Φₙ through `x^j + x^-j = R_j(x + 1/x)`.
pub fn real_cyclotomic(n: u64) -> Result<IntPolynomial> {
    if n <= 4 {
        return Err(Error::invalid(format!(
            "real cyclotomic polynomial needs n >= 5, got {n}"
        )));
    }
    let phi = cyclotomic(n)?;
    let c = phi.coeffs();
    let two_m = c.len() - 1;
    if two_m % 2 != 0 || (0..=two_m).any(|j| c[j] != c[two_m - j]) {
        return Err(Error::invariant(format!("Φ_{n} is not palindromic")));
    }
    let m = two_m / 2;
    let rs = scaled_r_family(m + 1)?;
    let mut out = IntPolynomial::constant(c[m].clone());
    for j in 1..=m {
        out = &out + &rs[j].scale(&c[m + j]);
    }
    Ok(out)
}
