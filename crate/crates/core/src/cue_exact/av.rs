use std::f64::consts::PI;

use num_complex::Complex64;

use crate::combinatorics::DerivativeIndex;
use crate::error::{invalid, Error, Result};
use crate::exact::det_complex;

fn vandermonde(x: &[Complex64]) -> Complex64 {
    let mut v = Complex64::new(1.0, 0.0);
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            v *= x[j] - x[i];
        }
    }
    v
}

/// `E[prod_i Lambda_N(z_i) prod_j conj(Lambda_N(conj(w_j)))]` for pairwise
/// distinct `z` and pairwise distinct `w`, as `det(Omega_N) / (Delta(z) Delta(w))`.
///
/// For `K >= L` the `K x K` matrix `Omega_N` has the monomial columns
/// `1, z_i, ..., z_i^{K-L-1}` followed by the kernel block
/// `z_i^{K-L} sum_{p < N+L} (z_i w_j)^p`. `K < L` uses the conjugate identity
/// with the roles of `z` and `w` swapped.
pub fn av_moment_distinct(zs: &[Complex64], ws: &[Complex64], n: u32) -> Result<Complex64> {
    if zs.is_empty() || ws.is_empty() {
        return invalid("need at least one z and one w");
    }
    if zs.len() < ws.len() {
        let zc: Vec<Complex64> = ws.iter().map(Complex64::conj).collect();
        let wc: Vec<Complex64> = zs.iter().map(Complex64::conj).collect();
        return av_moment_distinct(&zc, &wc, n).map(|v| v.conj());
    }
    let dz = vandermonde(zs);
    let dw = vandermonde(ws);
    if dz == Complex64::new(0.0, 0.0) || dw == Complex64::new(0.0, 0.0) {
        return Err(Error::CoincidentPoints);
    }
    let (k, l) = (zs.len(), ws.len());
    let excess = (k - l) as u32;
    let len = n + l as u32;
    let omega: Vec<Vec<Complex64>> = zs
        .iter()
        .map(|&z| {
            let mut row: Vec<Complex64> = (0..excess).map(|p| z.powu(p)).collect();
            let zk = z.powu(excess);
            row.extend(ws.iter().map(|&w| {
                let x = z * w;
                let mut acc = Complex64::new(0.0, 0.0);
                let mut xp = Complex64::new(1.0, 0.0);
                for _ in 0..len {
                    acc += xp;
                    xp *= x;
                }
                zk * acc
            }));
            row
        })
        .collect();
    Ok(det_complex(&omega) / (dz * dw))
}

/// Nodes per variable on each Cauchy circle.
const NODES: usize = 12;

/// `D^mu_z D^nu_w` of the distinct-point ratio, merged at `z_i = z`,
/// `w_j = conj(z)`, by the trapezoidal rule on circles about the merge
/// point. Variable `v` uses radius `h (1 + v / (2(K+L)))` so the sampled
/// points stay pairwise distinct.
fn contour_derivative(mu: &DerivativeIndex, nu: &DerivativeIndex, z: Complex64, n: u32, h: f64) -> Result<Complex64> {
    let (k, l) = (mu.len(), nu.len());
    let vars = k + l;
    let orders: Vec<u32> = mu.entries().iter().chain(nu.entries()).copied().collect();
    let centres: Vec<Complex64> = (0..vars).map(|v| if v < k { z } else { z.conj() }).collect();
    let radii: Vec<f64> = (0..vars).map(|v| h * (1.0 + 0.5 * v as f64 / vars as f64)).collect();
    let roots: Vec<Complex64> = (0..NODES)
        .map(|a| Complex64::from_polar(1.0, 2.0 * PI * a as f64 / NODES as f64))
        .collect();
    // Per-variable weight n!/(M r^n) e^{-i n theta}.
    let weights: Vec<Vec<Complex64>> = (0..vars)
        .map(|v| {
            let fact: f64 = (1..=orders[v]).map(f64::from).product();
            let scale = fact / (NODES as f64 * radii[v].powi(orders[v] as i32));
            roots
                .iter()
                .map(|r| r.powu(orders[v]).conj() * scale)
                .collect()
        })
        .collect();
    let total_points = NODES.pow(vars as u32);
    let mut idx = vec![0usize; vars];
    let mut acc = Complex64::new(0.0, 0.0);
    let mut zs = vec![Complex64::new(0.0, 0.0); k];
    let mut ws = vec![Complex64::new(0.0, 0.0); l];
    for _ in 0..total_points {
        let mut wt = Complex64::new(1.0, 0.0);
        for v in 0..vars {
            let p = centres[v] + roots[idx[v]] * radii[v];
            if v < k {
                zs[v] = p;
            } else {
                ws[v - k] = p;
            }
            wt *= weights[v][idx[v]];
        }
        acc += wt * av_moment_distinct(&zs, &ws, n)?;
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < NODES {
                break;
            }
            *slot = 0;
        }
    }
    Ok(acc)
}

/// Numerical merging of [`av_moment_distinct`] into `M_{mu,nu}(z, N)`.
///
/// Oracle quality only. Derivatives come from Cauchy-circle quadrature at
/// radii `h` and `h/2`; the aliasing error scales like `h^12`, which is
/// Richardson-eliminated. If the two radii disagree by more than 10% the
/// result is rejected as cancellation-dominated.
pub fn dd_moment_oracle(
    mu: &DerivativeIndex,
    nu: &DerivativeIndex,
    z: Complex64,
    n: u32,
    h: f64,
) -> Result<Complex64> {
    if !(h > 0.0) {
        return invalid("spacing h must be positive");
    }
    if mu.len() == 1 && nu.len() == 1 && mu.weight() == 0 && nu.weight() == 0 {
        return av_moment_distinct(&[z], &[z.conj()], n);
    }
    let coarse = contour_derivative(mu, nu, z, n, h)?;
    let fine = contour_derivative(mu, nu, z, n, h / 2.0)?;
    let scale = fine.norm().max(coarse.norm());
    let relative = if scale == 0.0 { 0.0 } else { (fine - coarse).norm() / scale };
    if relative > 0.1 {
        return Err(Error::Cancellation { relative });
    }
    let f = 2f64.powi(NODES as i32);
    Ok((fine * f - coarse) / (f - 1.0))
}
