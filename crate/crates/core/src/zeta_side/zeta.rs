use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, rational_to_f64};
use crate::numeric::{biguint_to_f64, CompensatedSum};

const MAX_CORRECTIONS: usize = 40;

/// `B_{2j} / (2j)!` for `j = 1..=MAX_CORRECTIONS`, from the exact recurrence
/// `sum_{i<=m} C(m+1, i) B_i = 0`.
fn bernoulli_ratios() -> &'static [f64] {
    static CACHE: OnceLock<Vec<f64>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let top = 2 * MAX_CORRECTIONS;
        let mut b: Vec<BigRational> = Vec::with_capacity(top + 1);
        b.push(BigRational::from_integer(BigInt::from(1)));
        for m in 1..=top {
            let acc = (0..m).fold(BigRational::zero(), |acc, i| {
                let c = BigInt::from(binomial(m as u64 + 1, i as u64));
                acc + &b[i] * BigRational::from_integer(c)
            });
            b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        (1..=MAX_CORRECTIONS)
            .map(|j| {
                let f = BigRational::from_integer(BigInt::from(factorial(2 * j as u32)));
                rational_to_f64(&(&b[2 * j] / f))
            })
            .collect()
    })
}

/// `d^r/ds^r prod_{i<deg} (s + i)` at `s`.
fn rising_poly_derivative(deg: usize, r: usize, s: f64) -> f64 {
    let mut c = vec![0.0; deg + 1];
    c[0] = 1.0;
    for i in 0..deg {
        for j in (1..=i + 1).rev() {
            c[j] = c[j - 1] + c[j] * i as f64;
        }
        c[0] *= i as f64;
    }
    (r..=deg)
        .rev()
        .fold(0.0, |acc, j| acc * s + c[j] * (1..=r).map(|t| (j + 1 - t) as f64).product::<f64>())
}

fn euler_maclaurin(k: u32, s: f64, n: u64) -> (f64, f64) {
    let k = k as usize;
    let nf = n as f64;
    let l = nf.ln();
    let sign = |p: usize| if p % 2 == 0 { 1.0 } else { -1.0 };
    let mut sum: CompensatedSum = (1..n)
        .map(|m| {
            let lm = (m as f64).ln();
            sign(k) * lm.powi(k as i32) * (-s * lm).exp()
        })
        .collect();
    // d^k/ds^k N^{1-s} / (s-1).
    let t = s - 1.0;
    let head = (-t * l).exp();
    for j in 0..=k {
        let jf: f64 = (1..=j).map(|i| i as f64).product();
        let c = biguint_to_f64(&binomial(k as u64, j as u64));
        sum.add(c * sign(k) * l.powi((k - j) as i32) * head * jf / t.powi(j as i32 + 1));
    }
    sum.add(0.5 * sign(k) * l.powi(k as i32) * (-s * l).exp());
    let mut last = f64::INFINITY;
    for (j, &ratio) in bernoulli_ratios().iter().enumerate() {
        let deg = 2 * j + 1;
        let mut term = 0.0;
        for r in 0..=k.min(deg) {
            let c = biguint_to_f64(&binomial(k as u64, r as u64));
            term += c * rising_poly_derivative(deg, r, s) * sign(k - r) * l.powi((k - r) as i32);
        }
        term *= ratio * (-(s + deg as f64) * l).exp();
        if term.abs() > last {
            break;
        }
        sum.add(term);
        last = term.abs();
        if last <= 1e-17 * sum.value().abs() {
            break;
        }
    }
    (sum.value(), last)
}

/// `zeta^{(k)}(s)` for real `s > 1` by Euler-Maclaurin summation, with the
/// cutoff doubled until the last correction is below `1e-13` relative.
pub fn zeta_deriv(k: u32, s: f64) -> Result<f64> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::Domain(format!("zeta derivatives need real s > 1, got {s}")));
    }
    let mut n = 32 + 2 * u64::from(k);
    loop {
        let (v, err) = euler_maclaurin(k, s, n);
        if err <= 1e-13 * v.abs() || n > 1 << 16 {
            return Ok(v);
        }
        n *= 2;
    }
}

pub fn zeta(s: f64) -> Result<f64> {
    zeta_deriv(0, s)
}
