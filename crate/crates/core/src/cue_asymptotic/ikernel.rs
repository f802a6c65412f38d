use num_complex::Complex64;

use crate::numeric::CompensatedComplexSum;

/// `I_r(tau) = int_0^1 x^r e^{-tau x} dx`.
pub fn i_kernel(r: u32, tau: Complex64) -> Complex64 {
    let a = tau.norm();
    if a < 1.0 {
        return taylor(r, tau);
    }
    if f64::from(r) <= a {
        upward(r, tau)[r as usize]
    } else {
        downward(r, r, tau)[0]
    }
}

/// `I_0(tau), ..., I_rmax(tau)` in one pass.
pub fn i_kernel_row(rmax: u32, tau: Complex64) -> Vec<Complex64> {
    let a = tau.norm();
    if a < 1.0 {
        return (0..=rmax).map(|r| taylor(r, tau)).collect();
    }
    // Upward is stable while r <= |tau|, downward above that.
    let split = (a.floor() as u32).min(rmax);
    let mut out = upward(split, tau);
    if split < rmax {
        out.extend(downward(split + 1, rmax, tau));
    }
    out
}

/// `sum_j (-tau)^j / (j! (r + j + 1))`, for `|tau| < 1`.
fn taylor(r: u32, tau: Complex64) -> Complex64 {
    let mut acc = CompensatedComplexSum::new();
    let mut term = Complex64::new(1.0, 0.0);
    for j in 0u32..200 {
        let t = term / f64::from(r + j + 1);
        acc.add(t);
        if t.norm() <= 1e-18 * acc.value().norm() {
            break;
        }
        term *= -tau / f64::from(j + 1);
    }
    acc.value()
}

/// `I_r = (r I_{r-1} - e^{-tau}) / tau` from `I_0 = (1 - e^{-tau}) / tau`.
fn upward(rmax: u32, tau: Complex64) -> Vec<Complex64> {
    let e = (-tau).exp();
    let mut out = Vec::with_capacity(rmax as usize + 1);
    let mut cur = (Complex64::new(1.0, 0.0) - e) / tau;
    out.push(cur);
    for r in 1..=rmax {
        cur = (cur * f64::from(r) - e) / tau;
        out.push(cur);
    }
    out
}

/// `I_lo..=I_hi` by `I_{r-1} = (tau I_r + e^{-tau}) / r`, seeded at
/// `R = max(hi, 3|tau|)` with `I_R = e^{-tau} sum_m R! tau^m / (R+1+m)!`.
fn downward(lo: u32, hi: u32, tau: Complex64) -> Vec<Complex64> {
    let e = (-tau).exp();
    let big_r = hi.max((3.0 * tau.norm()).ceil() as u32);
    let mut acc = CompensatedComplexSum::new();
    let mut term = Complex64::new(1.0 / f64::from(big_r + 1), 0.0);
    for m in 0u32..400 {
        acc.add(term);
        if term.norm() <= 1e-18 * acc.value().norm() {
            break;
        }
        term *= tau / f64::from(big_r + 2 + m);
    }
    let mut cur = e * acc.value();
    let mut out = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
    let mut r = big_r;
    loop {
        if r <= hi {
            out[(r - lo) as usize] = cur;
        }
        if r == lo {
            break;
        }
        cur = (tau * cur + e) / f64::from(r);
        r -= 1;
    }
    out
}
