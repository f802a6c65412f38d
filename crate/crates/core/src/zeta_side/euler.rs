use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Error, Result};
use crate::numeric::CompensatedSum;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerProductConfig {
    /// Largest prime included.
    pub prime_cutoff: u64,
    /// Relative truncation tolerance of each local series.
    pub series_tolerance: f64,
}

impl Default for EulerProductConfig {
    fn default() -> Self {
        Self { prime_cutoff: 100_000, series_tolerance: 1e-17 }
    }
}

impl EulerProductConfig {
    pub fn new(prime_cutoff: u64, series_tolerance: f64) -> Result<Self> {
        if prime_cutoff < 100 {
            return invalid(format!("prime cutoff must be at least 100, got {prime_cutoff}"));
        }
        if !(series_tolerance > 0.0) {
            return invalid("series tolerance must be positive");
        }
        Ok(Self { prime_cutoff, series_tolerance })
    }
}

/// A truncated Euler product and an estimate of the relative effect of the
/// omitted primes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerProduct {
    pub value: f64,
    pub tail_estimate: f64,
    pub primes: usize,
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        out.push(p as u64);
        let mut q = p * p;
        while q <= n {
            composite[q] = true;
            q += p;
        }
    }
    out
}

/// `log[(1 - x)^{KL} sum_m c_K(m) c_L(m) x^m]` where `c_K(m)` is generated
/// by `c(m+1) / c(m) = (K + m) / (m + 1)`, so `c_K(m) = d_K(p^m)` for integer `K`.
fn local_log(k: f64, l: f64, x: f64, tol: f64) -> f64 {
    // Accumulate S - 1 to keep the O(x) parts exact before the logs cancel.
    let mut term = 1.0;
    let mut rest = CompensatedSum::default();
    let mut m = 0.0;
    loop {
        let ratio = (k + m) * (l + m) / ((m + 1.0) * (m + 1.0)) * x;
        term *= ratio;
        rest.add(term);
        m += 1.0;
        let next = (k + m) * (l + m) / ((m + 1.0) * (m + 1.0)) * x;
        if next < 1.0 && term * next / (1.0 - next) <= tol * (1.0 + rest.value()) {
            break;
        }
        if term == 0.0 {
            break;
        }
    }
    k * l * (-x).ln_1p() + rest.value().ln_1p()
}

/// Local factor from explicit `Gamma(K + m) / (m! Gamma(K))` coefficients.
fn local_log_gamma(k: f64, l: f64, x: f64, tol: f64) -> f64 {
    let c = |a: f64, m: f64| (ln_gamma(a + m) - ln_gamma(m + 1.0) - ln_gamma(a)).exp();
    let mut rest = CompensatedSum::default();
    let mut m = 1.0;
    loop {
        let term = c(k, m) * c(l, m) * x.powf(m);
        rest.add(term);
        let ratio = (k + m) * (l + m) / ((m + 1.0) * (m + 1.0)) * x;
        if ratio < 1.0 && term * ratio / (1.0 - ratio) <= tol * (1.0 + rest.value()) {
            break;
        }
        m += 1.0;
    }
    k * l * (-x).ln_1p() + rest.value().ln_1p()
}

fn product<F: Fn(f64) -> f64>(k: f64, l: f64, exponent: f64, cfg: &EulerProductConfig, local: F) -> EulerProduct {
    let primes = primes_up_to(cfg.prime_cutoff);
    let log: CompensatedSum = primes.iter().map(|&p| local((p as f64).powf(-exponent))).collect();
    // Each omitted factor is 1 + c x^2 + O(x^3) with x = p^{-exponent} and
    // c = K(K+1)L(L+1)/4 - KL(KL+1)/2; sum_{p > P} p^{-2 exponent} is
    // estimated by the prime number theorem.
    let c = k * (k + 1.0) * l * (l + 1.0) / 4.0 - k * l * (k * l + 1.0) / 2.0;
    let pc = cfg.prime_cutoff as f64;
    let e2 = 2.0 * exponent;
    let tail = c.abs() * pc.powf(1.0 - e2) / ((e2 - 1.0) * pc.ln());
    EulerProduct { value: log.value().exp(), tail_estimate: tail, primes: primes.len() }
}

fn check_lengths(k: f64, l: f64) -> Result<()> {
    if !(k > 0.0 && l > 0.0 && k.is_finite() && l.is_finite()) {
        return Err(Error::Domain(format!("lengths must be positive, got K = {k}, L = {l}")));
    }
    Ok(())
}

/// `prod_{p <= P} (1 - 1/p)^{KL} sum_m d_K(p^m) d_L(p^m) p^{-m}`.
pub fn euler_a(k: u32, l: u32, cfg: &EulerProductConfig) -> Result<EulerProduct> {
    euler_h(k, l, 0.5, cfg)
}

/// The same product with `p^{-m}` replaced by `p^{-2 sigma m}`: the value at
/// zero shifts of the arithmetic factor that remains after dividing the
/// shifted mean square by `prod zeta(2 sigma)^{KL}`. Tends to [`euler_a`] as
/// `sigma -> 1/2`.
pub fn euler_h(k: u32, l: u32, sigma: f64, cfg: &EulerProductConfig) -> Result<EulerProduct> {
    let (kf, lf) = (f64::from(k), f64::from(l));
    check_lengths(kf, lf)?;
    if !(sigma >= 0.5) {
        return Err(Error::Domain(format!("Euler product needs sigma >= 1/2, got {sigma}")));
    }
    let tol = cfg.series_tolerance;
    Ok(product(kf, lf, 2.0 * sigma, cfg, |x| local_log(kf, lf, x, tol)))
}

/// [`euler_a`] with Gamma-ratio local coefficients, defined for real `K, L > 0`.
pub fn euler_a_gamma(k: f64, l: f64, cfg: &EulerProductConfig) -> Result<EulerProduct> {
    check_lengths(k, l)?;
    let tol = cfg.series_tolerance;
    Ok(product(k, l, 1.0, cfg, |x| local_log_gamma(k, l, x, tol)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn small_primes() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(primes_up_to(10_000).len(), 1229);
    }

    #[test]
    fn config_validation() {
        assert!(EulerProductConfig::new(99, 1e-12).is_err());
        assert!(EulerProductConfig::new(100, 0.0).is_err());
        assert!(EulerProductConfig::new(100, 1e-12).is_ok());
    }

    #[test]
    fn trivial_and_classical_constants() {
        let cfg = EulerProductConfig::new(10_000, 1e-17).unwrap();
        let one = euler_a(1, 1, &cfg).unwrap();
        assert!((one.value - 1.0).abs() < 1e-12);
        assert_eq!(one.tail_estimate, 0.0);
        let two = euler_a(2, 2, &cfg).unwrap();
        assert!((two.value - 6.0 / (PI * PI)).abs() < 1e-4);
        assert!((two.value - 6.0 / (PI * PI)).abs() < 2.0 * two.tail_estimate);
    }

    #[test]
    fn local_series_matches_gamma_coefficients() {
        let cfg = EulerProductConfig::new(2000, 1e-17).unwrap();
        for (k, l) in [(1u32, 2u32), (2, 2), (3, 3), (4, 2), (5, 5)] {
            let a = euler_a(k, l, &cfg).unwrap().value;
            let b = euler_a_gamma(f64::from(k), f64::from(l), &cfg).unwrap().value;
            assert!((a - b).abs() <= 1e-10 * a, "K={k} L={l}: {a} vs {b}");
        }
    }

    #[test]
    fn local_factor_closed_form() {
        // K = 1: sum_m d_L(p^m) x^m = (1 - x)^{-L}, so the factor is 1.
        for l in 1..=4 {
            assert!(local_log(1.0, f64::from(l), 0.3, 1e-17).abs() < 1e-15);
        }
        // K = L = 2: (1 - x)^4 (1 + x) / (1 - x)^3 = 1 - x^2.
        let x: f64 = 0.2;
        assert!((local_log(2.0, 2.0, x, 1e-17) - (1.0 - x * x).ln()).abs() < 1e-15);
    }

    #[test]
    fn h_factor_tends_to_a() {
        let cfg = EulerProductConfig::default();
        let a = euler_a(3, 2, &cfg).unwrap().value;
        let mut last = f64::INFINITY;
        for sigma in [0.8, 0.65, 0.55, 0.51] {
            let d = (euler_h(3, 2, sigma, &cfg).unwrap().value - a).abs();
            assert!(d < last);
            last = d;
        }
    }
}
