//! Closed-form limits of the moments: the bulk contingency-table formula
//! inside the disc, its `|z| -> 1` constant `h_{mu,nu}`, and the microscopic
//! Kostka-determinant limits near the unit circle.

mod ikernel;
mod micro;

pub(crate) use micro::kostka_terms;
pub use ikernel::{i_kernel, i_kernel_row};
pub use micro::{
    fourth_moment_micro, fourth_moment_micro_exact, micro_limit, micro_limit_padded,
    micro_term_count, PaddedMoment,
};

pub use crate::moment::{MomentValue, Normalization, Regime, SpectralPoint};

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::{table_pair_sum, DerivativeIndex};
use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, rational_from_int};
use crate::numeric::biguint_to_f64;

/// `p_{n,m}(z, zbar) = sum_k C(n,k) C(m,k) z^{m-k} zbar^{n-k}`.
pub fn p_poly(n: u32, m: u32, z: Complex64) -> Complex64 {
    let zb = z.conj();
    (0..=n.min(m))
        .map(|k| {
            let c = biguint_to_f64(&(binomial(n.into(), k.into()) * binomial(m.into(), k.into())));
            z.powu(m - k) * zb.powu(n - k) * c
        })
        .sum()
}

/// [`p_poly`] at a real rational `z`.
pub fn p_poly_rational(n: u32, m: u32, z: &BigRational) -> BigRational {
    (0..=n.min(m)).fold(BigRational::zero(), |acc, k| {
        let c = rational_from_int(BigInt::from(
            binomial(n.into(), k.into()) * binomial(m.into(), k.into()),
        ));
        acc + c * z.pow((m - k + n - k) as i32)
    })
}

fn disc_exponent(mu: &DerivativeIndex, nu: &DerivativeIndex) -> u32 {
    (mu.len() * nu.len()) as u32 + mu.weight() + nu.weight()
}

/// Large-`N` limit of `M_{mu,nu}(z, N)` for fixed `|z| < 1`.
pub fn bulk_moment(mu: &DerivativeIndex, nu: &DerivativeIndex, z: Complex64) -> Result<MomentValue> {
    let w = z.norm_sqr();
    if !(w < 1.0) {
        return Err(Error::Domain(format!("bulk formula needs |z| < 1, got |z| = {}", z.norm())));
    }
    let sum: Complex64 = table_pair_sum(mu.entries(), nu.entries(), |q, r| p_poly(q, r, z));
    let pref = biguint_to_f64(&(mu.factorial() * nu.factorial()));
    let scale = (1.0 - w).powi(-(disc_exponent(mu, nu) as i32));
    Ok(MomentValue::numeric(sum * pref * scale, Normalization::None))
}

/// [`bulk_moment`] in exact arithmetic at a real rational `z`.
pub fn bulk_moment_exact(
    mu: &DerivativeIndex,
    nu: &DerivativeIndex,
    z: &BigRational,
) -> Result<MomentValue> {
    let one = BigRational::one();
    let w = z * z;
    if w >= one {
        return Err(Error::Domain(format!("bulk formula needs |z| < 1, got z = {z}")));
    }
    let sum: BigRational = table_pair_sum(mu.entries(), nu.entries(), |q, r| p_poly_rational(q, r, z));
    let pref = rational_from_int(BigInt::from(mu.factorial() * nu.factorial()));
    let scale = (one - w).pow(-(disc_exponent(mu, nu) as i32));
    Ok(MomentValue::exact(sum * pref * scale, Normalization::None))
}

/// `h_{mu,nu} = mu! nu! sum_{Q,R} prod C(Q_ij + R_ij, Q_ij)`, the limit of
/// `(1-|z|^2)^{KL+|mu|+|nu|} M_{mu,nu}` as `|z| -> 1`.
pub fn h_universal(mu: &DerivativeIndex, nu: &DerivativeIndex) -> BigUint {
    let sum: BigUint = table_pair_sum(mu.entries(), nu.entries(), |q, r| {
        binomial(u64::from(q + r), u64::from(q))
    });
    mu.factorial() * nu.factorial() * sum
}

/// `h_{(k,k),(k,k)} = (k!)^4 (k+1) (C(4k+3, 2k+2) - 2 C(2k+1, k)^2)`.
pub fn h_k_closed(k: u32) -> BigUint {
    let k64 = u64::from(k);
    let big = BigInt::from(binomial(4 * k64 + 3, 2 * k64 + 2));
    let small = BigInt::from(binomial(2 * k64 + 1, k64));
    let bracket = big - BigInt::from(2) * &small * &small;
    let v = BigInt::from(factorial(k).pow(4u32)) * (k + 1) * bracket;
    v.to_biguint().expect("h_k is positive")
}
