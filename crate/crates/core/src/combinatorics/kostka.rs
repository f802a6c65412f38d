use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{DerivativeIndex, PartitionShape};
use crate::error::Result;
use crate::exact::factorial;

/// Memoized Kostka numbers. Each instance owns its memo; [`kostka`] keeps one
/// per thread.
#[derive(Debug, Default, Clone)]
pub struct KostkaTable {
    memo: HashMap<(Vec<u32>, Vec<u32>), BigUint>,
}

impl KostkaTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, lambda: &PartitionShape, mu: &DerivativeIndex) -> BigUint {
        let content = mu.to_partition();
        self.rec(lambda.parts(), content.parts())
    }

    /// The cells holding the largest label form a horizontal strip of size
    /// `mu_last`; strip it off and recurse on the smaller shape.
    fn rec(&mut self, lambda: &[u32], mu: &[u32]) -> BigUint {
        let size: u32 = lambda.iter().sum();
        if size != mu.iter().sum::<u32>() {
            return BigUint::zero();
        }
        if mu.is_empty() {
            return BigUint::one();
        }
        // A column of height > len(mu) cannot be filled strictly.
        if lambda.len() > mu.len() {
            return BigUint::zero();
        }
        if mu.len() == 1 {
            return BigUint::from(u32::from(lambda.len() == 1));
        }
        let key = (lambda.to_vec(), mu.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let (m, rest) = mu.split_last().unwrap();
        let mut total = BigUint::zero();
        let mut kappa = lambda.to_vec();
        self.strips(lambda, 0, *m, &mut kappa, rest, &mut total);
        self.memo.insert(key, total.clone());
        total
    }

    fn strips(
        &mut self,
        lambda: &[u32],
        i: usize,
        left: u32,
        kappa: &mut Vec<u32>,
        rest: &[u32],
        total: &mut BigUint,
    ) {
        if i == lambda.len() {
            if left == 0 {
                let shape: Vec<u32> = kappa.iter().copied().filter(|&p| p > 0).collect();
                *total += self.rec(&shape, rest);
            }
            return;
        }
        let floor = lambda.get(i + 1).copied().unwrap_or(0);
        let width = lambda[i] - floor;
        for take in 0..=width.min(left) {
            kappa[i] = lambda[i] - take;
            self.strips(lambda, i + 1, left - take, kappa, rest, total);
        }
        kappa[i] = lambda[i];
    }
}

thread_local! {
    static KOSTKA_MEMO: RefCell<KostkaTable> = RefCell::new(KostkaTable::new());
}

/// `K_{lambda mu}`: semistandard tableaux of shape `lambda` and content `mu`
/// (zeros in `mu` are ignored, order does not matter).
pub fn kostka(lambda: &PartitionShape, mu: &DerivativeIndex) -> BigUint {
    KOSTKA_MEMO.with(|t| t.borrow_mut().get(lambda, mu))
}

/// Standard Young tableaux of shape `lambda` by the hook-length formula.
pub fn hook_length_count(lambda: &PartitionShape) -> BigUint {
    let parts = lambda.parts();
    let mut hooks = BigUint::one();
    for (i, &row) in parts.iter().enumerate() {
        for j in 0..row {
            let arm = row - j - 1;
            let leg = parts[i + 1..].iter().filter(|&&p| p > j).count() as u32;
            hooks *= arm + leg + 1;
        }
    }
    factorial(lambda.size()) / hooks
}

/// `lambda!_(s) = prod_{i=1..s} (lambda_i + s - i)!`.
pub fn lambda_factorial_s(lambda: &PartitionShape, s: usize) -> Result<BigUint> {
    Ok(lambda.alphas(s)?.into_iter().map(factorial).product())
}
