//! Exact finite-N moments from the Kostka-determinant formula, the generic
//! confluent (merged-point) expansion, and the distinct-point
//! Akemann-Vernizzi determinant ratio.

mod av;

pub use av::{av_moment_distinct, dd_moment_oracle};

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::{kostka, lambda_factorial_s, partitions, DerivativeIndex};
use crate::cue_asymptotic::kostka_terms;
use crate::error::{invalid, Error, Result};
use crate::exact::{det_complex, det_rational, falling_factorial, falling_factorial_f64, rational_from_f64, rational_to_f64};
use crate::moment::{MomentValue, Normalization};
use crate::numeric::{biguint_to_f64, CompensatedSum};

/// Polynomial in `w` with integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k)
                .collect(),
        )
    }

    pub fn eval_f64(&self, w: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * w + num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN))
    }

    /// Exact value at `w = p/q`, computed as `sum c_k p^k q^(d-k) / q^d`.
    pub fn eval_rational(&self, w: &BigRational) -> BigRational {
        let Some(d) = self.degree() else {
            return BigRational::zero();
        };
        let (p, q) = (w.numer(), w.denom());
        let mut num = BigInt::zero();
        let mut qpow = BigInt::one();
        for c in self.coeffs[..=d].iter().rev() {
            num = num * p + c * &qpow;
            qpow *= q;
        }
        // qpow is now q^(d+1); the loop multiplied num by one spare q.
        BigRational::new(num, qpow / q)
    }
}

/// `(w^a K_{N,s}^{(a)}(w))^{(b)}` where `K_{N,s}(w) = sum_{m=0}^{N+s-1} w^m`.
///
/// Coefficient of `w^{m-b}` is `(m)_a (m)_b` (falling factorials).
pub fn kernel_derivative_poly(n: u32, s: u32, a: u32, b: u32) -> IntPolynomial {
    let top = u64::from(n + s - 1);
    let coeffs = (u64::from(b)..=top)
        .map(|m| BigInt::from(falling_factorial(m, a) * falling_factorial(m, b)))
        .collect();
    IntPolynomial::new(coeffs)
}

/// Floating evaluation of [`kernel_derivative_poly`] without building it.
/// For `w >= 0` every term is non-negative, so the sum is well conditioned.
pub fn kernel_derivative_eval(n: u32, s: u32, a: u32, b: u32, w: f64) -> f64 {
    let top = u64::from(n + s - 1);
    let start = u64::from(a.max(b));
    let mut acc = CompensatedSum::new();
    let mut wp = w.powi((start - u64::from(b)) as i32);
    for m in start..=top {
        acc.add(falling_factorial_f64(m, a) * falling_factorial_f64(m, b) * wp);
        wp *= w;
    }
    acc.value()
}

/// Value at `w = 1`: `sum_m (m)_a (m)_b`.
pub fn kernel_derivative_at_one(n: u32, s: u32, a: u32, b: u32) -> BigUint {
    (u64::from(a.max(b))..=u64::from(n + s - 1))
        .map(|m| falling_factorial(m, a) * falling_factorial(m, b))
        .sum()
}

/// `table[j][n] = f_j^{(n)}(z)` for `j < s`, `n < D`.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeTable {
    rows: Vec<Vec<Complex64>>,
}

impl DerivativeTable {
    pub fn new(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || rows.iter().any(|r| r.len() != d) {
            return invalid("derivative table must be a non-empty rectangular s x D array");
        }
        Ok(Self { rows })
    }

    pub fn functions(&self) -> usize {
        self.rows.len()
    }

    pub fn depth(&self) -> usize {
        self.rows[0].len()
    }

    pub fn get(&self, j: usize, n: usize) -> Complex64 {
        self.rows[j][n]
    }
}

/// `D^mu [det(f_j(x_i)) / Delta(x)]` with all `x_i` merged at the point the
/// table was taken at.
pub fn confluent_expand(table: &DerivativeTable, mu: &DerivativeIndex, s: usize) -> Result<Complex64> {
    if mu.len() != s || table.functions() != s {
        return invalid(format!(
            "need len(mu) = s = number of functions, got {}, {s}, {}",
            mu.len(),
            table.functions()
        ));
    }
    let needed = mu.weight() as usize + s;
    if table.depth() < needed {
        return Err(Error::InsufficientDepth { depth: table.depth(), needed });
    }
    let pref = biguint_to_f64(&mu.factorial());
    let mut total = Complex64::zero();
    for lambda in partitions(mu.weight(), s) {
        let k = kostka(&lambda, mu);
        if k.is_zero() {
            continue;
        }
        let alphas = lambda.alphas(s)?;
        let m: Vec<Vec<Complex64>> = alphas
            .iter()
            .map(|&a| (0..s).map(|j| table.get(j, a as usize)).collect())
            .collect();
        let coef = biguint_to_f64(&k) / biguint_to_f64(&lambda_factorial_s(&lambda, s)?);
        total += det_complex(&m) * coef;
    }
    let sign = if (s * (s - 1) / 2) % 2 == 1 { -1.0 } else { 1.0 };
    Ok(total * pref * sign)
}

/// Exact finite-N moment `M_{mu,nu}(z, N)` for `len(mu) = len(nu)`.
///
/// An exact payload is attached when `z` is real with at most 10 binary
/// fractional digits; use [`finite_n_moment_rational`] for other rationals.
pub fn finite_n_moment(
    mu: &DerivativeIndex,
    nu: &DerivativeIndex,
    z: Complex64,
    n: u32,
) -> Result<MomentValue> {
    if n == 0 {
        return invalid("N must be positive");
    }
    if mu.len() != nu.len() {
        return Err(Error::UnequalLengths { left: mu.len(), right: nu.len() });
    }
    if z.im == 0.0 && (z.re * 1024.0).fract() == 0.0 && z.re.abs() <= 1024.0 {
        let q = rational_from_f64(z.re).expect("finite");
        return finite_n_moment_rational(mu, nu, &q, n);
    }
    let s = mu.len() as u32;
    let shift = nu.weight() as i32 - mu.weight() as i32;
    if z == Complex64::zero() && shift != 0 {
        return Ok(MomentValue::numeric(Complex64::zero(), Normalization::None));
    }
    let w = z.norm_sqr();
    let mut acc = CompensatedSum::new();
    for t in kostka_terms(mu, nu)? {
        let m: Vec<Vec<f64>> = t
            .alphas
            .iter()
            .map(|&a| t.betas.iter().map(|&b| kernel_derivative_eval(n, s, a, b, w)).collect())
            .collect();
        acc.add(rational_to_f64(&t.coef) * crate::exact::det_real(&m));
    }
    let phase = if shift == 0 { Complex64::new(1.0, 0.0) } else { z.powi(shift) };
    Ok(MomentValue::numeric(phase * acc.value(), Normalization::None))
}

/// [`finite_n_moment`] in exact arithmetic at a real rational `z`.
pub fn finite_n_moment_rational(
    mu: &DerivativeIndex,
    nu: &DerivativeIndex,
    z: &BigRational,
    n: u32,
) -> Result<MomentValue> {
    if n == 0 {
        return invalid("N must be positive");
    }
    if mu.len() != nu.len() {
        return Err(Error::UnequalLengths { left: mu.len(), right: nu.len() });
    }
    let s = mu.len() as u32;
    let shift = nu.weight() as i32 - mu.weight() as i32;
    if z.is_zero() && shift != 0 {
        return Ok(MomentValue::exact(BigRational::zero(), Normalization::None));
    }
    let w = z * z;
    let mut total = BigRational::zero();
    for t in kostka_terms(mu, nu)? {
        let m: Vec<Vec<BigRational>> = t
            .alphas
            .iter()
            .map(|&a| {
                t.betas
                    .iter()
                    .map(|&b| kernel_derivative_poly(n, s, a, b).eval_rational(&w))
                    .collect()
            })
            .collect();
        total += &t.coef * det_rational(&m);
    }
    if shift != 0 {
        total *= z.pow(shift);
    }
    Ok(MomentValue::exact(total, Normalization::None))
}
