//! Number-theoretic counterparts of the moments: Dirichlet coefficients of
//! products of zeta derivatives, truncated mean-square sums, the arithmetic
//! Euler product, and the leading-order predictions as `sigma -> 1/2`.
//!
//! Everything here is evaluated on the real axis; shifts are real.

mod dirichlet;
mod euler;
mod zeta;

pub use dirichlet::{
    dirichlet_coefficient, dirichlet_coefficients, dirichlet_convolve, dirichlet_sum, tail_bound,
    TruncatedSum,
};
pub use euler::{euler_a, euler_a_gamma, euler_h, primes_up_to, EulerProduct, EulerProductConfig};
pub use zeta::{zeta, zeta_deriv};

use crate::combinatorics::{table_pair_sum, DerivativeIndex};
use crate::cue_asymptotic::h_universal;
use crate::error::{invalid, Error, Result};
use crate::numeric::{biguint_to_f64, CompensatedSum};

/// Real shifts `alpha` or `beta`, each at most `0.1` in absolute value.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftVector {
    shifts: Vec<f64>,
}

impl ShiftVector {
    pub const MAX_SHIFT: f64 = 0.1;

    pub fn new(shifts: Vec<f64>) -> Result<Self> {
        if shifts.is_empty() {
            return invalid("shift vector must be non-empty");
        }
        if let Some(s) = shifts.iter().find(|s| !(s.abs() <= Self::MAX_SHIFT)) {
            return invalid(format!("shift {s} exceeds {} in absolute value", Self::MAX_SHIFT));
        }
        Ok(Self { shifts })
    }

    pub fn zeros(len: usize) -> Self {
        Self { shifts: vec![0.0; len.max(1)] }
    }

    pub fn shifts(&self) -> &[f64] {
        &self.shifts
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn sum(&self) -> f64 {
        self.shifts.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LindelofMode {
    /// `(-1)^{|mu|+|nu|} a_{K,L} h_{mu,nu} (2 sigma - 1)^{-(KL+|mu|+|nu|)}`.
    Asymptotic,
    /// `mu! nu! sum_{Q,R} prod zeta^{(Q_ij+R_ij)}(2 sigma) / (Q_ij! R_ij!)`,
    /// the mixed derivative of `prod zeta(2 sigma + alpha_i + beta_j)`
    /// without the arithmetic factor.
    FiniteSigma,
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.5) || !sigma.is_finite() {
        return Err(Error::Domain(format!("need sigma > 1/2, got {sigma}")));
    }
    Ok(())
}

/// Leading-order prediction for the mean of
/// `prod zeta^{(mu_i)}(sigma+it) prod conj(zeta^{(nu_j)}(sigma+it))`.
pub fn lindelof_leading(
    mu: &DerivativeIndex,
    nu: &DerivativeIndex,
    sigma: f64,
    mode: LindelofMode,
    cfg: &EulerProductConfig,
) -> Result<f64> {
    check_sigma(sigma)?;
    let (k, l) = (mu.len() as u32, nu.len() as u32);
    match mode {
        LindelofMode::Asymptotic => {
            let a = euler_a(k, l, cfg)?.value;
            let h = biguint_to_f64(&h_universal(mu, nu));
            let e = k * l + mu.weight() + nu.weight();
            let sign = if (mu.weight() + nu.weight()) % 2 == 0 { 1.0 } else { -1.0 };
            Ok(sign * a * h * (2.0 * sigma - 1.0).powi(-(e as i32)))
        }
        LindelofMode::FiniteSigma => {
            let top = (mu.weight() + nu.weight()) as usize;
            let fact: Vec<f64> = (0..=top)
                .scan(1.0, |f, i| {
                    if i > 0 {
                        *f *= i as f64;
                    }
                    Some(*f)
                })
                .collect();
            let derivs = (0..=top as u32)
                .map(|j| zeta_deriv(j, 2.0 * sigma))
                .collect::<Result<Vec<f64>>>()?;
            let sum: f64 = table_pair_sum(mu.entries(), nu.entries(), |q, r| {
                derivs[(q + r) as usize] / (fact[q as usize] * fact[r as usize])
            });
            Ok(sum * biguint_to_f64(&(mu.factorial() * nu.factorial())))
        }
    }
}

/// `G(alpha, beta, sigma)` for `K, L <= 2`: `prod_{i,j} zeta(2 sigma + alpha_i + beta_j)`,
/// divided by `zeta(4 sigma + sum alpha + sum beta)` when `K = L = 2`.
pub fn g_function(alpha: &[f64], beta: &[f64], sigma: f64) -> Result<f64> {
    let (k, l) = (alpha.len(), beta.len());
    if !(1..=2).contains(&k) || !(1..=2).contains(&l) {
        return invalid(format!("G is defined for lengths 1 or 2, got K = {k}, L = {l}"));
    }
    let mut v = 1.0;
    for a in alpha {
        for b in beta {
            let s = 2.0 * sigma + a + b;
            if !(s > 1.0) {
                return Err(Error::Domain(format!("zeta argument {s} is not above 1")));
            }
            v *= zeta(s)?;
        }
    }
    if k == 2 && l == 2 {
        v /= zeta(4.0 * sigma + alpha.iter().sum::<f64>() + beta.iter().sum::<f64>())?;
    }
    Ok(v)
}

/// `D^mu_alpha D^nu_beta G` at zero shifts by a product of central
/// difference stencils with step `h` (error `O(h^2)`).
pub fn g_mixed_derivative(mu: &DerivativeIndex, nu: &DerivativeIndex, sigma: f64, h: f64) -> Result<f64> {
    check_sigma(sigma)?;
    mixed_derivative(mu, nu, h, |a, b| g_function(a, b, sigma))
}

fn mixed_derivative<F>(mu: &DerivativeIndex, nu: &DerivativeIndex, h: f64, f: F) -> Result<f64>
where
    F: Fn(&[f64], &[f64]) -> Result<f64>,
{
    if !(h > 0.0) {
        return invalid("stencil step must be positive");
    }
    let orders: Vec<u32> = mu.entries().iter().chain(nu.entries()).copied().collect();
    let k = mu.len();
    let mut idx = vec![0u32; orders.len()];
    let mut acc = CompensatedSum::default();
    loop {
        let mut weight = 1.0;
        let mut point = vec![0.0; orders.len()];
        for (v, (&n, &i)) in orders.iter().zip(&idx).enumerate() {
            // Delta^n f(0) / h^n with nodes (n/2 - i) h.
            let c: f64 = (0..i).map(|t| f64::from(n - t) / f64::from(t + 1)).product();
            weight *= if i % 2 == 0 { c } else { -c } / h.powi(n as i32);
            point[v] = (f64::from(n) / 2.0 - f64::from(i)) * h;
        }
        acc.add(weight * f(&point[..k], &point[k..])?);
        let mut v = 0;
        while v < idx.len() && idx[v] == orders[v] {
            idx[v] = 0;
            v += 1;
        }
        if v == idx.len() {
            break;
        }
        idx[v] += 1;
    }
    Ok(acc.value())
}

/// `sum_{m <= M} sigma_alpha(m) sigma_beta(m) m^{-2 sigma}` with
/// `sigma_alpha(m) = sum_{n_1 ... n_K = m} prod n_i^{-alpha_i}`.
pub fn shifted_mean_square(alpha: &[f64], beta: &[f64], sigma: f64, m: u64) -> f64 {
    let sig = |s: &[f64]| dirichlet::convolve_all(s.len(), m, |i, n| (n as f64).powf(-s[i]));
    let a = sig(alpha);
    let b = sig(beta);
    let sum: CompensatedSum = (1..=m as usize)
        .map(|n| a[n] * b[n] * (n as f64).powf(-2.0 * sigma))
        .collect();
    sum.value()
}

/// Outcome of [`pair_identity_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairIdentity {
    pub lhs: f64,
    pub rhs: f64,
    pub deviation: f64,
    pub tail_bound: f64,
}

/// Compares `sum_{m <= M} sigma_alpha(m) sigma_beta(m) m^{-2 sigma}` with
/// its closed form [`g_function`] for shift vectors of length at most 2.
pub fn pair_identity_check(alpha: &ShiftVector, beta: &ShiftVector, sigma: f64, m: u64) -> Result<PairIdentity> {
    if !(sigma > 0.75) {
        return Err(Error::Domain(format!("pair identity check needs sigma > 3/4, got {sigma}")));
    }
    if m == 0 {
        return invalid("cutoff M must be positive");
    }
    let rhs = g_function(alpha.shifts(), beta.shifts(), sigma)?;
    let lhs = shifted_mean_square(alpha.shifts(), beta.shifts(), sigma, m);
    // |sigma_alpha(m)| <= d_K(m) m^{max(0, -min alpha)}.
    let lift = |s: &[f64]| s.iter().fold(0.0f64, |acc, &x| acc.max(-x));
    let sigma_eff = sigma - (lift(alpha.shifts()) + lift(beta.shifts())) / 2.0;
    let tail = tail_bound(m, sigma_eff, 0, (alpha.len() * beta.len()) as u32);
    Ok(PairIdentity { lhs, rhs, deviation: (lhs - rhs).abs(), tail_bound: tail })
}
