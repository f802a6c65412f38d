use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use super::i_kernel_row;
use crate::combinatorics::{
    kostka, lambda_factorial_s, pad_to_common_length, partitions, DerivativeIndex, PartitionShape,
};
use crate::error::{Error, Result};
use crate::exact::{binomial, det_rational, det_real, factorial, rational, rational_from_int, rational_to_f64};
use crate::moment::{MomentValue, Normalization};
use crate::numeric::CompensatedSum;

/// One `(lambda, rho)` term: its rational prefactor and shifted indices.
pub(crate) struct KostkaTerm {
    pub coef: BigRational,
    pub alphas: Vec<u32>,
    pub betas: Vec<u32>,
    #[cfg_attr(not(test), allow(dead_code))]
    pub lambda: PartitionShape,
    #[cfg_attr(not(test), allow(dead_code))]
    pub rho: PartitionShape,
}

/// `mu! nu! K_{lambda mu} K_{rho nu} / (lambda!_(s) rho!_(s))` for every pair
/// with a nonzero Kostka product.
pub(crate) fn kostka_terms(mu: &DerivativeIndex, nu: &DerivativeIndex) -> Result<Vec<KostkaTerm>> {
    if mu.len() != nu.len() {
        return Err(Error::UnequalLengths { left: mu.len(), right: nu.len() });
    }
    let s = mu.len();
    let pref = BigInt::from(mu.factorial() * nu.factorial());
    let lambdas: Vec<_> = partitions(mu.weight(), s)
        .into_iter()
        .filter_map(|l| {
            let k = kostka(&l, mu);
            (!k.is_zero()).then_some((l, k))
        })
        .collect();
    let rhos: Vec<_> = partitions(nu.weight(), s)
        .into_iter()
        .filter_map(|r| {
            let k = kostka(&r, nu);
            (!k.is_zero()).then_some((r, k))
        })
        .collect();
    let mut out = Vec::with_capacity(lambdas.len() * rhos.len());
    for (l, kl) in &lambdas {
        let lf = lambda_factorial_s(l, s)?;
        for (r, kr) in &rhos {
            let rf = lambda_factorial_s(r, s)?;
            let coef = BigRational::new(
                &pref * BigInt::from(kl * kr),
                BigInt::from(&lf * rf),
            );
            out.push(KostkaTerm {
                coef,
                alphas: l.alphas(s)?,
                betas: r.alphas(s)?,
                lambda: l.clone(),
                rho: r.clone(),
            });
        }
    }
    Ok(out)
}

/// Number of `(lambda, rho)` determinant terms in the Kostka expansion.
pub fn micro_term_count(mu: &DerivativeIndex, nu: &DerivativeIndex) -> Result<usize> {
    Ok(kostka_terms(mu, nu)?.len())
}

/// `lim M_{mu,nu}(1 - c/N, N) / N^{|mu|+|nu|+s^2}` for `len(mu) = len(nu) = s`.
///
/// At `c = 0` the determinant entries are `1/(alpha_i + beta_j + 1)` and the
/// value is returned exactly.
pub fn micro_limit(mu: &DerivativeIndex, nu: &DerivativeIndex, c: Complex64) -> Result<MomentValue> {
    let terms = kostka_terms(mu, nu)?;
    let s = mu.len() as u32;
    let norm = Normalization::PowerOfN(mu.weight() + nu.weight() + s * s);
    if c == Complex64::zero() {
        let mut total = BigRational::zero();
        for t in &terms {
            let m: Vec<Vec<BigRational>> = t
                .alphas
                .iter()
                .map(|&a| t.betas.iter().map(|&b| rational(1, i64::from(a + b + 1))).collect())
                .collect();
            total += &t.coef * det_rational(&m);
        }
        return Ok(MomentValue::exact(total, norm));
    }
    let tau = Complex64::new(2.0 * c.re, 0.0);
    let rmax = terms
        .iter()
        .map(|t| t.alphas[0] + t.betas[0])
        .max()
        .unwrap_or(0);
    let row: Vec<f64> = i_kernel_row(rmax, tau).into_iter().map(|v| v.re).collect();
    let mut acc = CompensatedSum::new();
    for t in &terms {
        let m: Vec<Vec<f64>> = t
            .alphas
            .iter()
            .map(|&a| t.betas.iter().map(|&b| row[(a + b) as usize]).collect())
            .collect();
        acc.add(rational_to_f64(&t.coef) * det_real(&m));
    }
    Ok(MomentValue::numeric(Complex64::new(acc.value(), 0.0), norm))
}

/// A moment evaluated after zero-padding the index lists to equal length.
/// Each padded zero adds an undifferentiated factor, so the value belongs to
/// the padded lists reported here, not the originals.
#[derive(Debug, Clone, PartialEq)]
pub struct PaddedMoment {
    pub value: MomentValue,
    pub mu: DerivativeIndex,
    pub nu: DerivativeIndex,
}

pub fn micro_limit_padded(
    mu: &DerivativeIndex,
    nu: &DerivativeIndex,
    c: Complex64,
) -> Result<PaddedMoment> {
    let (mu, nu) = pad_to_common_length(mu, nu);
    let value = micro_limit(&mu, &nu, c)?;
    Ok(PaddedMoment { value, mu, nu })
}

fn c1(k: u32, i: u32, j: u32) -> BigRational {
    let num = BigInt::from(factorial(k).pow(2u32) * binomial(k.into(), i.into()) * binomial(k.into(), j.into()))
        * BigInt::from(factorial(k - i) * factorial(k - j));
    let den = BigInt::from(factorial(2 * k - i + 1) * factorial(2 * k + 1 - j));
    BigRational::new(num, den)
}

fn c2(k: u32, i: u32, j: u32) -> BigRational {
    let num = BigInt::from(factorial(k).pow(2u32) * binomial(k.into(), i.into()) * binomial(k.into(), j.into()))
        * BigInt::from(factorial(j) * factorial(k - i));
    let den = BigInt::from(factorial(2 * k - i + 1) * factorial(k + j + 1));
    BigRational::new(num, den)
}

/// `lim E|Lambda^{(k)}(1 - c/N)|^4 / N^{4k+4}` from the explicit double sum
/// over `C1_ij I_{4k-i-j+2} I_{i+j} - C2_ij I_{3k-i-j+1} I_{k+i+j+1}` at `2c`.
pub fn fourth_moment_micro(k: u32, c: f64) -> MomentValue {
    let norm = Normalization::PowerOfN(4 * k + 4);
    if c == 0.0 {
        return MomentValue::exact(fourth_moment_micro_exact(k), norm);
    }
    let row: Vec<f64> = i_kernel_row(4 * k + 2, Complex64::new(2.0 * c, 0.0))
        .into_iter()
        .map(|v| v.re)
        .collect();
    let mut acc = CompensatedSum::new();
    for i in 0..=k {
        for j in 0..=k {
            let a = rational_to_f64(&c1(k, i, j)) * row[(4 * k - i - j + 2) as usize] * row[(i + j) as usize];
            let b = rational_to_f64(&c2(k, i, j)) * row[(3 * k - i - j + 1) as usize] * row[(k + i + j + 1) as usize];
            acc.add(a);
            acc.add(-b);
        }
    }
    MomentValue::numeric(Complex64::new(acc.value(), 0.0), norm)
}

/// The `c = 0` double sum with `I_r(0) = 1/(r+1)`, in exact arithmetic.
pub fn fourth_moment_micro_exact(k: u32) -> BigRational {
    let mut total = BigRational::zero();
    for i in 0..=k {
        for j in 0..=k {
            let d1 = rational_from_int(BigInt::from((4 * k - i - j + 3) * (i + j + 1)));
            let d2 = rational_from_int(BigInt::from((3 * k - i - j + 2) * (k + i + j + 2)));
            total += c1(k, i, j) / d1 - c2(k, i, j) / d2;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::hook_length_count;
    use crate::cue_asymptotic::i_kernel;

    fn di(v: &[u32]) -> DerivativeIndex {
        DerivativeIndex::new(v.to_vec()).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn nine_factorial() -> i64 {
        (1..=9).product()
    }

    #[test]
    fn exact_constants() {
        let v = micro_limit(&di(&[0, 0]), &di(&[0, 0]), c(0.0)).unwrap();
        assert_eq!(v.exact, Some(rational(1, 12)));
        assert_eq!(v.normalization, Normalization::PowerOfN(4));
        let v = micro_limit(&di(&[0, 0, 0]), &di(&[0, 0, 0]), c(0.0)).unwrap();
        assert_eq!(v.exact, Some(rational(42, nine_factorial())));
        let v = micro_limit(&di(&[1, 1]), &di(&[1, 1]), c(0.0)).unwrap();
        assert_eq!(v.exact, Some(rational(61, 10080)));
        assert!((v.numeric.re - 6.0516e-3).abs() < 1e-7);
    }

    #[test]
    fn unequal_lengths_rejected_unless_padded() {
        let err = micro_limit(&di(&[1]), &di(&[1, 0]), c(0.0)).unwrap_err();
        assert_eq!(err, Error::UnequalLengths { left: 1, right: 2 });
        let p = micro_limit_padded(&di(&[1]), &di(&[1, 0]), c(0.0)).unwrap();
        assert_eq!(p.mu, di(&[1, 0]));
        assert_eq!(p.value, micro_limit(&di(&[1, 0]), &di(&[1, 0]), c(0.0)).unwrap());
    }

    #[test]
    fn single_factor_reduces_to_kernel() {
        for k in 0..6u32 {
            for cc in [0.5, 1.0, 2.0, -1.5] {
                let v = micro_limit(&di(&[k]), &di(&[k]), c(cc)).unwrap().numeric.re;
                let want = i_kernel(2 * k, c(2.0 * cc)).re;
                assert!((v - want).abs() <= 1e-13 * want.abs(), "k={k} c={cc}");
            }
        }
    }

    #[test]
    fn numeric_path_converges_to_exact_as_c_vanishes() {
        let mu = di(&[2, 1]);
        let nu = di(&[1, 2]);
        let exact = micro_limit(&mu, &nu, c(0.0)).unwrap().numeric.re;
        let near = micro_limit(&mu, &nu, c(1e-9)).unwrap().numeric.re;
        assert!((near - exact).abs() <= 1e-7 * exact);
    }

    #[test]
    fn fourth_moment_matches_kostka_route() {
        for k in 0..=4u32 {
            let exact = fourth_moment_micro_exact(k);
            let via_kostka = micro_limit(&di(&[k, k]), &di(&[k, k]), c(0.0)).unwrap();
            assert_eq!(Some(exact), via_kostka.exact, "k={k}");
        }
        assert_eq!(fourth_moment_micro(1, 0.0).exact, Some(rational(61, 10080)));
        for k in 1..=3u32 {
            for cc in [0.5, 1.0, 2.0] {
                let a = fourth_moment_micro(k, cc).numeric.re;
                let b = micro_limit(&di(&[k, k]), &di(&[k, k]), c(cc)).unwrap().numeric.re;
                assert!((a - b).abs() <= 1e-10 * b.abs(), "k={k} c={cc} {a} {b}");
            }
        }
    }

    #[test]
    fn imaginary_part_of_c_is_irrelevant() {
        let mu = di(&[1, 2]);
        let nu = di(&[2, 0]);
        let a = micro_limit(&mu, &nu, Complex64::new(0.7, 0.0)).unwrap().numeric;
        let b = micro_limit(&mu, &nu, Complex64::new(0.7, 3.0)).unwrap().numeric;
        assert_eq!(a, b);
    }

    #[test]
    fn all_ones_content_uses_standard_tableaux() {
        // K_{lambda,(1^s)} = f_lambda.
        for s in 1..=3usize {
            let ones = di(&vec![1; s]);
            let terms = kostka_terms(&ones, &ones).unwrap();
            for t in &terms {
                let fl = hook_length_count(&t.lambda);
                let fr = hook_length_count(&t.rho);
                let lf = lambda_factorial_s(&t.lambda, s).unwrap();
                let rf = lambda_factorial_s(&t.rho, s).unwrap();
                let want = BigRational::new(BigInt::from(fl * fr), BigInt::from(lf * rf));
                assert_eq!(t.coef, want);
            }
        }
    }
}
