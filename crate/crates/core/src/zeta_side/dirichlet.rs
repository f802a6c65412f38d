use crate::combinatorics::DerivativeIndex;
use crate::error::{invalid, Error, Result};
use crate::numeric::CompensatedSum;

/// A truncated series together with a bound on the omitted part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedSum {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: u64,
}

fn divisors(m: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m % d == 0 {
            small.push(d);
            if d * d != m {
                large.push(m / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn log_power(n: u64, k: u32) -> f64 {
    if k == 0 {
        1.0
    } else {
        (n as f64).ln().powi(k as i32)
    }
}

fn coefficient_rec(m: u64, entries: &[u32]) -> f64 {
    match entries {
        [] => f64::from(u8::from(m == 1)),
        [k] => log_power(m, *k),
        [k, rest @ ..] => divisors(m)
            .into_iter()
            .map(|d| log_power(d, *k) * coefficient_rec(m / d, rest))
            .sum(),
    }
}

/// `A_mu(m) = sum_{n_1 ... n_K = m} prod_i log(n_i)^{mu_i}` by recursive
/// enumeration of ordered factorizations.
pub fn dirichlet_coefficient(m: u64, mu: &DerivativeIndex) -> Result<f64> {
    if m == 0 {
        return invalid("m must be positive");
    }
    Ok(coefficient_rec(m, mu.entries()))
}

/// Dirichlet convolution of two arithmetic functions stored at indices
/// `1..=M` (index 0 unused).
pub fn dirichlet_convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let m = a.len().min(b.len()).saturating_sub(1);
    let mut out = vec![0.0; m + 1];
    for d in 1..=m {
        if a[d] == 0.0 {
            continue;
        }
        for e in 1..=m / d {
            out[d * e] += a[d] * b[e];
        }
    }
    out
}

/// Dirichlet product of the functions `f_i` over `1..=M`, index 0 unused.
pub(crate) fn convolve_all<F: Fn(usize, u64) -> f64>(len: usize, m: u64, f: F) -> Vec<f64> {
    let column = |i: usize| -> Vec<f64> {
        (0..=m).map(|n| if n == 0 { 0.0 } else { f(i, n) }).collect()
    };
    let mut acc = column(0);
    for i in 1..len {
        acc = dirichlet_convolve(&acc, &column(i));
    }
    acc
}

/// `A_mu(1..=M)` as a table (index 0 unused), built from `K - 1` Dirichlet
/// convolutions in `O(K M log M)` time and `O(M)` memory.
pub fn dirichlet_coefficients(m: u64, mu: &DerivativeIndex) -> Vec<f64> {
    let e = mu.entries();
    convolve_all(e.len(), m, |i, n| log_power(n, e[i]))
}

/// Upper bound for `sum_{m > M} log(m)^a d_D(m) m^{-2 sigma}`.
///
/// Partial summation against `sum_{m <= x} d_D(m) <= x (1 + log x)^{D-1}`
/// gives at most `2 sigma int_{log M}^inf e^{-(2 sigma - 1) u} (1+u)^{D-1} u^a du`,
/// evaluated in closed form. Infinite when the summand is not yet
/// decreasing at `M`.
pub fn tail_bound(m: u64, sigma: f64, a: u32, d: u32) -> f64 {
    let lambda = 2.0 * sigma - 1.0;
    let u = (m as f64).ln();
    if !(lambda > 0.0) || u < f64::from(a) / (2.0 * sigma) {
        return f64::INFINITY;
    }
    // int_U^inf e^{-lambda u} u^n du = e^{-lambda U} sum_i n!/(n-i)! U^{n-i} / lambda^{i+1}.
    let upper_gamma = |n: u32| -> f64 {
        let mut acc = 0.0;
        let mut falling = 1.0;
        for i in 0..=n {
            acc += falling * u.powi((n - i) as i32) / lambda.powi(i as i32 + 1);
            falling *= f64::from(n - i);
        }
        acc * (-lambda * u).exp()
    };
    let dm1 = d.saturating_sub(1);
    let mut binom = 1.0;
    let mut total = 0.0;
    for j in 0..=dm1 {
        total += binom * upper_gamma(j + a);
        binom = binom * f64::from(dm1 - j) / f64::from(j + 1);
    }
    2.0 * sigma * total
}

/// `(-1)^{|mu|+|nu|} sum_{m <= M} A_mu(m) A_nu(m) m^{-2 sigma}`, the mean
/// square of the Dirichlet series of `prod zeta^{(mu_i)}` against
/// `prod zeta^{(nu_j)}`, with the bound from `|A_mu(m)| <= log(m)^{|mu|} d_K(m)`.
pub fn dirichlet_sum(mu: &DerivativeIndex, nu: &DerivativeIndex, sigma: f64, m: u64) -> Result<TruncatedSum> {
    if !(sigma > 0.5) {
        return Err(Error::Domain(format!("Dirichlet sum needs sigma > 1/2, got {sigma}")));
    }
    if m == 0 {
        return invalid("cutoff M must be positive");
    }
    let a = dirichlet_coefficients(m, mu);
    let b = if mu == nu { a.clone() } else { dirichlet_coefficients(m, nu) };
    let sum: CompensatedSum = (1..=m as usize)
        .map(|n| a[n] * b[n] * (-2.0 * sigma * (n as f64).ln()).exp())
        .collect();
    let sign = if (mu.weight() + nu.weight()) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(TruncatedSum {
        value: sign * sum.value(),
        tail_bound: tail_bound(m, sigma, mu.weight() + nu.weight(), (mu.len() * nu.len()) as u32),
        terms: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta_side::zeta_deriv;
    use proptest::prelude::*;

    fn di(v: &[u32]) -> DerivativeIndex {
        DerivativeIndex::new(v.to_vec()).unwrap()
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(dirichlet_coefficient(17, &di(&[0])).unwrap(), 1.0);
        assert!((dirichlet_coefficient(12, &di(&[1])).unwrap() - 12f64.ln()).abs() < 1e-15);
        assert_eq!(dirichlet_coefficient(6, &di(&[0, 0])).unwrap(), 4.0);
        assert_eq!(dirichlet_coefficient(12, &di(&[0, 0, 0])).unwrap(), 18.0);
        assert!(dirichlet_coefficient(0, &di(&[0])).is_err());
    }

    #[test]
    fn sieve_matches_recursion() {
        for mu in [vec![0, 0], vec![1, 0], vec![2, 1], vec![1, 1, 0], vec![0, 2, 1]] {
            let mu = di(&mu);
            let table = dirichlet_coefficients(300, &mu);
            for m in 1..=300u64 {
                let r = dirichlet_coefficient(m, &mu).unwrap();
                assert!((table[m as usize] - r).abs() <= 1e-11 * r.abs().max(1.0), "{mu} m={m}");
            }
        }
    }

    proptest! {
        #[test]
        fn coprime_split(m in 1u64..=50, n in 1u64..=50, e in proptest::collection::vec(0u32..=2, 1..=3)) {
            prop_assume!(gcd(m, n) == 1);
            // Ordered factorizations of mn split uniquely over coprime m, n, so
            // A_mu(mn) = sum_{kappa <= mu} prod C(mu_i, kappa_i) A_kappa(m) A_{mu-kappa}(n).
            let mu = di(&e);
            let mut kappa = vec![0u32; e.len()];
            let mut total = 0.0;
            loop {
                let rest: Vec<u32> = e.iter().zip(&kappa).map(|(a, b)| a - b).collect();
                let c: f64 = e
                    .iter()
                    .zip(&kappa)
                    .map(|(&a, &b)| (0..b).map(|t| f64::from(a - t) / f64::from(t + 1)).product::<f64>())
                    .product();
                total += c * dirichlet_coefficient(m, &di(&kappa)).unwrap() * dirichlet_coefficient(n, &di(&rest)).unwrap();
                let mut i = 0;
                while i < e.len() && kappa[i] == e[i] {
                    kappa[i] = 0;
                    i += 1;
                }
                if i == e.len() {
                    break;
                }
                kappa[i] += 1;
            }
            let direct = dirichlet_coefficient(m * n, &mu).unwrap();
            prop_assert!((direct - total).abs() <= 1e-10 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn sums_approach_zeta_values() {
        let m = 200_000;
        for (mu, nu, want) in [
            (vec![0], vec![0], zeta_deriv(0, 2.0).unwrap()),
            (vec![1], vec![1], zeta_deriv(2, 2.0).unwrap()),
            (vec![1], vec![0], zeta_deriv(1, 2.0).unwrap()),
            (vec![0, 0], vec![0], zeta_deriv(0, 2.0).unwrap().powi(2)),
        ] {
            let s = dirichlet_sum(&di(&mu), &di(&nu), 1.0, m).unwrap();
            let dev = (s.value - want).abs();
            assert!(dev <= s.tail_bound, "{mu:?} {nu:?}: dev {dev} bound {}", s.tail_bound);
            assert!(s.tail_bound < 1e-2);
        }
        assert!(dirichlet_sum(&di(&[0]), &di(&[0]), 0.5, 10).is_err());
    }

    #[test]
    fn tail_bound_is_conservative_for_zeta() {
        // sum_{m > M} m^{-2 sigma} against the closed form.
        for (m, sigma) in [(10u64, 1.0), (1000, 0.8), (50, 2.0)] {
            let exact = zeta_deriv(0, 2.0 * sigma).unwrap() - (1..=m).map(|n| (n as f64).powf(-2.0 * sigma)).sum::<f64>();
            let b = tail_bound(m, sigma, 0, 1);
            assert!(exact <= b && b < 10.0 * exact, "M={m} sigma={sigma}: {exact} vs {b}");
        }
        assert_eq!(tail_bound(2, 1.0, 5, 1), f64::INFINITY);
    }
}
