//! Exact integer and rational helpers plus the determinant kernels shared by
//! the evaluators.
//!
//! Arbitrary precision comes from `num-bigint`/`num-rational`; rationals are
//! always kept reduced with a positive denominator by `Ratio` itself.

use nalgebra::DMatrix;
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type ExactInteger = BigInt;
pub type ExactRational = BigRational;

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `m (m-1) ... (m-a+1)`, zero when `a > m`.
pub fn falling_factorial(m: u64, a: u32) -> BigUint {
    if u64::from(a) > m {
        return BigUint::zero();
    }
    (0..u64::from(a)).fold(BigUint::one(), |acc, i| acc * (m - i))
}

pub fn falling_factorial_f64(m: u64, a: u32) -> f64 {
    if u64::from(a) > m {
        return 0.0;
    }
    (0..u64::from(a)).fold(1.0, |acc, i| acc * (m - i) as f64)
}

pub fn rational_from_int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact value of a finite double (every finite `f64` is a dyadic rational).
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    // `Ratio::to_f64` handles numerators and denominators beyond f64 range.
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// `"p/q"` with the sign on the numerator; integers keep the `/1`.
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"p/q"`, an integer, or a terminating decimal.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
        None => match s.split_once('.') {
            // Terminating decimal, e.g. "-0.375".
            Some((int, frac)) if !frac.is_empty() && frac.bytes().all(|b| b.is_ascii_digit()) => {
                let negative = int.starts_with('-');
                let digits = format!("{}{frac}", int.trim_start_matches(['-', '+']));
                let mut n: BigInt = digits.parse().ok()?;
                if negative {
                    n = -n;
                }
                let d = num_traits::pow(BigInt::from(10), frac.len());
                Some(BigRational::new(n, d))
            }
            Some(_) => None,
            None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
        },
    }
}

/// Fraction-free (Bareiss) elimination. Every intermediate quantity is an
/// exact minor of the input, so the entries never grow beyond determinant size.
pub fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    debug_assert!(m.iter().all(|row| row.len() == n));
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Exact determinant of a rational matrix: clear row denominators, run
/// Bareiss on the integer matrix, divide the row scales back out.
pub fn det_rational(m: &[Vec<BigRational>]) -> BigRational {
    let mut scale = BigInt::one();
    let rows: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            scale *= &l;
            row.iter()
                .map(|q| q.numer() * (&l / q.denom()))
                .collect()
        })
        .collect();
    BigRational::new(det_bareiss(rows), scale)
}

/// Partially pivoted LU determinant.
pub fn det_real(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    if n == 0 {
        return 1.0;
    }
    DMatrix::from_fn(n, n, |i, j| m[i][j]).determinant()
}

pub fn det_complex(m: &[Vec<Complex64>]) -> Complex64 {
    let n = m.len();
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    DMatrix::from_fn(n, n, |i, j| m[i][j]).determinant()
}
