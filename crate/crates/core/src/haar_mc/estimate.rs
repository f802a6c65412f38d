use num_complex::Complex64;
use rayon::prelude::*;

use super::{char_poly_derivatives, sample_cue_eigenphases, sample_cue_secular, sample_rng};
use crate::combinatorics::DerivativeIndex;
use crate::error::{invalid, Result};

/// Samples per block. Blocks are the unit of parallel work and are merged in
/// a fixed binary tree, so results do not depend on the worker count.
const BLOCK: u64 = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sampler {
    /// Verblunsky-coefficient model, `O(N^2)` per sample.
    #[default]
    Verblunsky,
    /// Ginibre QR plus eigensolver, `O(N^3)` per sample.
    Qr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct McConfig {
    pub sampler: Sampler,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentQuery {
    pub mu: DerivativeIndex,
    pub nu: DerivativeIndex,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: Complex64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    /// `|mean - target| <= k (stderr_re + stderr_im)`.
    pub fn within(&self, target: Complex64, k: f64) -> bool {
        (self.mean - target).norm() <= k * (self.stderr_re + self.stderr_im)
    }

    /// `(stderr_re + stderr_im) / |mean|`; infinite for a zero mean with noise.
    pub fn relative_stderr(&self) -> f64 {
        let se = self.stderr_re + self.stderr_im;
        if se == 0.0 {
            0.0
        } else {
            se / self.mean.norm()
        }
    }
}

/// Running mean and sum of squared deviations for one real component.
#[derive(Debug, Clone, Copy, Default)]
struct Welford {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    /// Chan et al. pairwise combination.
    fn merge(a: Self, b: Self) -> Self {
        if a.n == 0 {
            return b;
        }
        if b.n == 0 {
            return a;
        }
        let n = a.n + b.n;
        let d = b.mean - a.mean;
        let mean = a.mean + d * (b.n as f64 / n as f64);
        let m2 = a.m2 + b.m2 + d * d * (a.n as f64 * b.n as f64 / n as f64);
        Self { n, mean, m2 }
    }

    fn stderr(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct ComplexStats {
    re: Welford,
    im: Welford,
}

impl ComplexStats {
    fn push(&mut self, v: Complex64) {
        self.re.push(v.re);
        self.im.push(v.im);
    }

    fn merge(a: Self, b: Self) -> Self {
        Self { re: Welford::merge(a.re, b.re), im: Welford::merge(a.im, b.im) }
    }
}

fn tree_merge(blocks: &[Vec<ComplexStats>]) -> Vec<ComplexStats> {
    match blocks.len() {
        0 => Vec::new(),
        1 => blocks[0].clone(),
        len => {
            let (l, r) = blocks.split_at(len / 2);
            let (l, r) = (tree_merge(l), tree_merge(r));
            l.into_iter().zip(r).map(|(a, b)| ComplexStats::merge(a, b)).collect()
        }
    }
}

/// Estimates for many `(mu, nu)` pairs at many points from one shared set of
/// samples. Result is indexed `[point][query]`.
pub fn mc_moment_grid(
    queries: &[MomentQuery],
    zs: &[Complex64],
    n: usize,
    samples: u64,
    seed: u64,
    cfg: &McConfig,
) -> Result<Vec<Vec<McEstimate>>> {
    if samples < 2 {
        return invalid("need at least 2 samples");
    }
    if n == 0 {
        return invalid("N must be positive");
    }
    let depth = queries
        .iter()
        .map(|q| q.mu.max_entry().max(q.nu.max_entry()) as usize)
        .max()
        .unwrap_or(0);
    let cells = zs.len() * queries.len();
    let blocks = samples.div_ceil(BLOCK);
    let per_block: Vec<Vec<ComplexStats>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut stats = vec![ComplexStats::default(); cells];
            let mut derivs: Vec<Vec<Complex64>> = vec![Vec::new(); zs.len()];
            for i in b * BLOCK..((b + 1) * BLOCK).min(samples) {
                let mut rng = sample_rng(seed, i);
                match cfg.sampler {
                    Sampler::Verblunsky => {
                        let p = sample_cue_secular(n, &mut rng);
                        for (d, &z) in derivs.iter_mut().zip(zs) {
                            *d = p.derivatives(z, depth);
                        }
                    }
                    Sampler::Qr => {
                        let s = sample_cue_eigenphases(n, &mut rng);
                        for (d, &z) in derivs.iter_mut().zip(zs) {
                            *d = char_poly_derivatives(&s, z, depth);
                        }
                    }
                }
                for (zi, d) in derivs.iter().enumerate() {
                    for (qi, q) in queries.iter().enumerate() {
                        let mut v = Complex64::new(1.0, 0.0);
                        for &m in q.mu.entries() {
                            v *= d[m as usize];
                        }
                        for &m in q.nu.entries() {
                            v *= d[m as usize].conj();
                        }
                        stats[zi * queries.len() + qi].push(v);
                    }
                }
            }
            stats
        })
        .collect();
    let merged = tree_merge(&per_block);
    Ok(zs
        .iter()
        .enumerate()
        .map(|(zi, _)| {
            (0..queries.len())
                .map(|qi| {
                    let s = merged[zi * queries.len() + qi];
                    McEstimate {
                        mean: Complex64::new(s.re.mean, s.im.mean),
                        stderr_re: s.re.stderr(),
                        stderr_im: s.im.stderr(),
                        samples,
                        seed,
                    }
                })
                .collect()
        })
        .collect())
}

pub fn mc_moment_with(
    mu: &DerivativeIndex,
    nu: &DerivativeIndex,
    z: Complex64,
    n: usize,
    samples: u64,
    seed: u64,
    cfg: &McConfig,
) -> Result<McEstimate> {
    let q = [MomentQuery { mu: mu.clone(), nu: nu.clone() }];
    Ok(mc_moment_grid(&q, &[z], n, samples, seed, cfg)?[0][0])
}

/// Sample mean of `prod Lambda^{(mu_i)}(z) prod conj(Lambda^{(nu_j)}(z))`.
pub fn mc_moment(
    mu: &DerivativeIndex,
    nu: &DerivativeIndex,
    z: Complex64,
    n: usize,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    mc_moment_with(mu, nu, z, n, samples, seed, &McConfig::default())
}
