//! Monte Carlo estimates of the moments over Haar-random unitaries.
//!
//! Two samplers produce the characteristic polynomial of a CUE matrix:
//! QR of a complex Ginibre matrix followed by an eigensolver, and the
//! Killip-Nenciu Verblunsky-coefficient model, which yields the same
//! eigenvalue law in `O(N^2)` without any matrix factorization.

mod estimate;

pub use estimate::{
    mc_moment, mc_moment_grid, mc_moment_with, McConfig, McEstimate, MomentQuery, Sampler,
};

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Result};
use crate::exact::falling_factorial_f64;

/// Eigenangles `theta_j` of a unitary matrix, each in `[0, 2 pi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenphaseSample {
    phases: Vec<f64>,
}

impl EigenphaseSample {
    pub fn new(phases: Vec<f64>) -> Result<Self> {
        if phases.is_empty() || phases.iter().any(|p| !p.is_finite()) {
            return invalid("need at least one finite eigenphase");
        }
        Ok(Self { phases: phases.into_iter().map(|p| p.rem_euclid(TAU)).collect() })
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.phases.len()
    }

    /// Coefficients `c_0..c_N` of `Lambda_N(z) = prod_j (1 - z e^{-i theta_j})`.
    pub fn char_poly(&self) -> CharPoly {
        let mut c = vec![Complex64::new(0.0, 0.0); self.len() + 1];
        c[0] = Complex64::new(1.0, 0.0);
        for (deg, &t) in self.phases.iter().enumerate() {
            let x = Complex64::from_polar(1.0, -t);
            for k in (1..=deg + 1).rev() {
                c[k] = c[k] - x * c[k - 1];
            }
        }
        CharPoly { coeffs: c }
    }
}

/// `Lambda_N(z) = sum_j c_j z^j`, normalized so `c_0 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharPoly {
    coeffs: Vec<Complex64>,
}

impl CharPoly {
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `Lambda^{(0)}(z) ..= Lambda^{(d)}(z)` by repeated synthetic division
    /// (the Taylor coefficients at `z`, rescaled by `k!`).
    pub fn derivatives(&self, z: Complex64, d: usize) -> Vec<Complex64> {
        let mut work = self.coeffs.clone();
        let n = work.len();
        let mut out = Vec::with_capacity(d + 1);
        let mut fact = 1.0;
        for k in 0..=d {
            if k >= n {
                out.push(Complex64::new(0.0, 0.0));
                continue;
            }
            for j in (k..n - 1).rev() {
                let carry = work[j + 1] * z;
                work[j] += carry;
            }
            if k > 0 {
                fact *= k as f64;
            }
            out.push(work[k] * fact);
        }
        out
    }
}

/// Haar unitary by QR of a complex Ginibre matrix with the phases of
/// `diag(R)` moved into `Q`, then its eigenangles from a complex Schur form.
pub fn sample_cue_eigenphases<R: Rng + ?Sized>(n: usize, rng: &mut R) -> EigenphaseSample {
    let g = DMatrix::<Complex64>::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    });
    let (mut q, r) = g.qr().unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    let eig = q
        .schur()
        .eigenvalues()
        .expect("complex Schur form always yields eigenvalues");
    EigenphaseSample { phases: eig.iter().map(|e| e.arg().rem_euclid(TAU)).collect() }
}

/// Characteristic polynomial of a CUE matrix from independent Verblunsky
/// coefficients: `|alpha_k|^2 ~ Beta(1, N-k-1)` with uniform phase for
/// `k < N-1`, `alpha_{N-1}` uniform on the circle, run through the Szego
/// recursion `Phi_{k+1}(x) = x Phi_k(x) - conj(alpha_k) Phi_k^*(x)`.
pub fn sample_cue_secular<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CharPoly {
    let mut phi = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut next = phi.clone();
    phi[0] = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let theta = rng.random::<f64>() * TAU;
        let radius = if k + 1 == n {
            1.0
        } else {
            let b = (n - k - 1) as f64;
            let u: f64 = rng.random();
            (1.0 - u.powf(1.0 / b)).sqrt()
        };
        let abar = Complex64::from_polar(radius, -theta);
        // Phi_k^*(x) has coefficients conj(phi[k - j]).
        next[0] = -abar * phi[k].conj();
        for j in 1..=k {
            next[j] = phi[j - 1] - abar * phi[k - j].conj();
        }
        next[k + 1] = phi[k];
        phi[..=k + 1].copy_from_slice(&next[..=k + 1]);
    }
    // Lambda(z) = Phi_N(z) / Phi_N(0).
    let p0 = phi[0];
    let mut coeffs: Vec<Complex64> = phi.iter().map(|c| c / p0).collect();
    coeffs[0] = Complex64::new(1.0, 0.0);
    CharPoly { coeffs }
}

/// How derivatives of `Lambda_N` are evaluated from eigenphases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeRoute {
    /// Expand the coefficients (`O(N^2)`), then differentiate termwise.
    Coefficients,
    /// `Lambda^{(k+1)} = sum_m C(k,m) p_{m+1} Lambda^{(k-m)}` with
    /// `p_r = -(r-1)! sum_j x_j^r / (1 - z x_j)^r`, `x_j = e^{-i theta_j}`.
    LogDerivative,
}

/// `Lambda_N^{(0)}(z) ..= Lambda_N^{(d)}(z)`. The log-derivative route is
/// used away from the origin, the coefficient route at `z = 0`.
pub fn char_poly_derivatives(sample: &EigenphaseSample, z: Complex64, d: usize) -> Vec<Complex64> {
    let route = if z == Complex64::new(0.0, 0.0) {
        DerivativeRoute::Coefficients
    } else {
        DerivativeRoute::LogDerivative
    };
    char_poly_derivatives_via(sample, z, d, route)
}

pub fn char_poly_derivatives_via(
    sample: &EigenphaseSample,
    z: Complex64,
    d: usize,
    route: DerivativeRoute,
) -> Vec<Complex64> {
    match route {
        DerivativeRoute::Coefficients => sample.char_poly().derivatives(z, d),
        DerivativeRoute::LogDerivative => log_derivative_route(sample, z, d),
    }
}

fn log_derivative_route(sample: &EigenphaseSample, z: Complex64, d: usize) -> Vec<Complex64> {
    let xs: Vec<Complex64> = sample.phases.iter().map(|&t| Complex64::from_polar(1.0, -t)).collect();
    let lambda0: Complex64 = xs.iter().map(|&x| 1.0 - z * x).product();
    // p[r] for r = 1..=d.
    let mut p = vec![Complex64::new(0.0, 0.0); d + 1];
    let mut ratio_pow: Vec<Complex64> = xs.iter().map(|&x| x / (1.0 - z * x)).collect();
    let ratios = ratio_pow.clone();
    let mut fact = 1.0;
    for r in 1..=d {
        if r > 1 {
            fact *= (r - 1) as f64;
            for (rp, q) in ratio_pow.iter_mut().zip(&ratios) {
                *rp *= q;
            }
        }
        let s: Complex64 = ratio_pow.iter().sum();
        p[r] = -s * fact;
    }
    let mut out = vec![lambda0];
    for k in 0..d {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut binom = 1.0;
        for m in 0..=k {
            acc += p[m + 1] * out[k - m] * binom;
            binom = binom * (k - m) as f64 / (m + 1) as f64;
        }
        out.push(acc);
    }
    // A degree-N polynomial has no derivatives above order N.
    for v in out.iter_mut().skip(sample.len() + 1) {
        *v = Complex64::new(0.0, 0.0);
    }
    out
}

/// `Lambda^{(k)}(z)` directly from coefficients: `sum_j c_j (j)_k z^{j-k}`.
pub fn derivative_from_coefficients(coeffs: &[Complex64], z: Complex64, k: usize) -> Complex64 {
    coeffs
        .iter()
        .enumerate()
        .skip(k)
        .map(|(j, c)| c * z.powu((j - k) as u32) * falling_factorial_f64(j as u64, k as u32))
        .sum()
}

/// Per-sample random stream: `seed` selects the key, the sample index the
/// ChaCha stream, so samples are reproducible in any evaluation order.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_sample(n: usize, seed: u64) -> EigenphaseSample {
        let mut rng = sample_rng(seed, 0);
        EigenphaseSample::new((0..n).map(|_| rng.random::<f64>() * TAU).collect()).unwrap()
    }

    #[test]
    fn origin_derivatives() {
        let s = random_sample(7, 3);
        let d = char_poly_derivatives(&s, c(0.0, 0.0), 1);
        assert_eq!(d[0], c(1.0, 0.0));
        let want: Complex64 = -s.phases().iter().map(|&t| Complex64::from_polar(1.0, -t)).sum::<Complex64>();
        assert!((d[1] - want).norm() < 1e-14);
    }

    #[test]
    fn single_eigenvalue() {
        let s = EigenphaseSample::new(vec![1.2]).unwrap();
        for route in [DerivativeRoute::Coefficients, DerivativeRoute::LogDerivative] {
            let d = char_poly_derivatives_via(&s, c(0.4, -0.3), 4, route);
            assert!((d[1] + Complex64::from_polar(1.0, -1.2)).norm() < 1e-15);
            assert!(d[2..].iter().all(|v| v.norm() < 1e-15), "{route:?}: {d:?}");
        }
    }

    #[test]
    fn routes_agree() {
        for n in [3usize, 16, 64, 128] {
            let s = random_sample(n, n as u64);
            for z in [c(0.5, 0.0), c(0.3, 0.6), c(0.0, 0.9), Complex64::from_polar(1.0, 0.37)] {
                let a = char_poly_derivatives_via(&s, z, 6, DerivativeRoute::Coefficients);
                let b = char_poly_derivatives_via(&s, z, 6, DerivativeRoute::LogDerivative);
                for k in 0..=6 {
                    let scale = a[k].norm().max(b[k].norm());
                    // Independent uniform phases give coefficients of size
                    // sqrt(C(N, j)), which costs the coefficient route digits.
                    let tol = if n <= 16 { 1e-10 } else { 1e-6 };
                    assert!((a[k] - b[k]).norm() <= tol * scale, "n={n} z={z} k={k} {} {}", a[k], b[k]);
                    if n <= 16 {
                        // The termwise sum cancels badly for large N.
                        let direct = derivative_from_coefficients(s.char_poly().coefficients(), z, k);
                        assert!((a[k] - direct).norm() <= 1e-9 * scale);
                    }
                }
            }
        }
    }

    #[test]
    fn qr_sampler_phases_are_real_and_reproducible() {
        let a = sample_cue_eigenphases(5, &mut sample_rng(11, 4));
        let b = sample_cue_eigenphases(5, &mut sample_rng(11, 4));
        assert_eq!(a, b);
        assert_eq!(a.len(), 5);
        assert!(a.phases().iter().all(|p| (0.0..TAU).contains(p)));
    }

    #[test]
    fn verblunsky_polynomial_has_unimodular_roots() {
        // Self-reciprocal up to a unimodular factor: |c_N| = 1 and
        // c_{N-j} = c_N conj(c_j).
        let p = sample_cue_secular(9, &mut sample_rng(5, 1));
        let cs = p.coefficients();
        let top = cs[9];
        assert!((top.norm() - 1.0).abs() < 1e-12);
        for j in 0..=9 {
            assert!((cs[9 - j] - top * cs[j].conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn one_by_one_is_uniform() {
        let m = 100_000u64;
        let mean: Complex64 = (0..m)
            .map(|i| sample_cue_eigenphases(1, &mut sample_rng(9, i)).phases()[0])
            .map(|t| Complex64::from_polar(1.0, t))
            .sum::<Complex64>()
            / m as f64;
        assert!(mean.norm() < 3.0 / (m as f64).sqrt());
    }
}
