use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};
use crate::exact::binomial;

/// A `K x L` table of non-negative integers, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContingencyTable {
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl ContingencyTable {
    pub fn new(rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != rows * cols {
            return invalid(format!(
                "{} entries do not fill a {rows}x{cols} table",
                entries.len()
            ));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn row_sums(&self) -> Vec<u32> {
        self.entries.chunks(self.cols).map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u32> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j)).sum())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let entries = (0..self.cols)
            .flat_map(|j| (0..self.rows).map(move |i| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        Self { rows: self.cols, cols: self.rows, entries }
    }
}

impl fmt::Display for ContingencyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .chunks(self.cols)
            .map(|r| {
                let r: Vec<String> = r.iter().map(u32::to_string).collect();
                format!("[{}]", r.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Lazy depth-first enumeration of tables with the given margins. Cells are
/// filled row-major, each taking its largest feasible value first, so the
/// output is in decreasing lexicographic order of the flattened entries.
#[derive(Debug, Clone)]
pub struct MarginTables {
    k: usize,
    l: usize,
    rows: Option<Vec<u32>>,
    cols: Option<Vec<u32>>,
    cur: Vec<u32>,
    lo: Vec<u32>,
    rrem: Vec<u32>,
    crem: Vec<u32>,
    started: bool,
    done: bool,
}

pub fn enumerate_margin_tables(
    rows: Option<&[u32]>,
    cols: Option<&[u32]>,
    k: usize,
    l: usize,
) -> Result<MarginTables> {
    if rows.is_none() && cols.is_none() {
        return invalid("at least one margin list is required");
    }
    if k == 0 || l == 0 {
        return invalid("table dimensions must be at least 1x1");
    }
    if let Some(r) = rows {
        if r.len() != k {
            return invalid(format!("row margins have length {}, expected {k}", r.len()));
        }
    }
    if let Some(c) = cols {
        if c.len() != l {
            return invalid(format!("column margins have length {}, expected {l}", c.len()));
        }
    }
    let done = match (rows, cols) {
        (Some(r), Some(c)) => r.iter().sum::<u32>() != c.iter().sum::<u32>(),
        _ => false,
    };
    Ok(MarginTables {
        k,
        l,
        rows: rows.map(<[u32]>::to_vec),
        cols: cols.map(<[u32]>::to_vec),
        cur: vec![0; k * l],
        lo: vec![0; k * l],
        rrem: rows.map_or_else(|| vec![0; k], <[u32]>::to_vec),
        crem: cols.map_or_else(|| vec![0; l], <[u32]>::to_vec),
        started: false,
        done,
    })
}

impl MarginTables {
    /// Feasible value range for cell `p` given the remainders left by the
    /// cells before it.
    fn bounds(&self, p: usize) -> Option<(u32, u32)> {
        let (i, j) = (p / self.l, p % self.l);
        let has_r = self.rows.is_some();
        let has_c = self.cols.is_some();
        let mut hi = u32::MAX;
        let mut lo = 0u32;
        if has_r {
            hi = hi.min(self.rrem[i]);
            if j + 1 == self.l {
                lo = lo.max(self.rrem[i]);
            } else if has_c {
                let later: u32 = self.crem[j + 1..].iter().sum();
                lo = lo.max(self.rrem[i].saturating_sub(later));
            }
        }
        if has_c {
            hi = hi.min(self.crem[j]);
            if i + 1 == self.k {
                lo = lo.max(self.crem[j]);
            } else if has_r {
                let later: u32 = self.rrem[i + 1..].iter().sum();
                lo = lo.max(self.crem[j].saturating_sub(later));
            }
        }
        (lo <= hi).then_some((lo, hi))
    }

    fn place(&mut self, p: usize, v: u32) {
        self.cur[p] = v;
        if self.rows.is_some() {
            self.rrem[p / self.l] -= v;
        }
        if self.cols.is_some() {
            self.crem[p % self.l] -= v;
        }
    }

    fn unplace(&mut self, p: usize) {
        let v = self.cur[p];
        if self.rows.is_some() {
            self.rrem[p / self.l] += v;
        }
        if self.cols.is_some() {
            self.crem[p % self.l] += v;
        }
        self.cur[p] = 0;
    }

    /// Greedily fill cells `from..`; on a dead end, backtrack. Returns false
    /// once the search space is exhausted.
    fn fill_from(&mut self, mut from: usize) -> bool {
        let n = self.k * self.l;
        while from < n {
            match self.bounds(from) {
                Some((lo, hi)) => {
                    self.lo[from] = lo;
                    self.place(from, hi);
                    from += 1;
                }
                None => match self.backtrack(from) {
                    Some(p) => from = p + 1,
                    None => return false,
                },
            }
        }
        true
    }

    /// Undo cells before `end` until one can be decremented; returns its index.
    fn backtrack(&mut self, end: usize) -> Option<usize> {
        let mut p = end;
        while p > 0 {
            p -= 1;
            let v = self.cur[p];
            self.unplace(p);
            if v > self.lo[p] {
                self.place(p, v - 1);
                return Some(p);
            }
        }
        None
    }
}

impl Iterator for MarginTables {
    type Item = ContingencyTable;

    fn next(&mut self) -> Option<ContingencyTable> {
        if self.done {
            return None;
        }
        let ok = if self.started {
            let n = self.k * self.l;
            match self.backtrack(n) {
                Some(p) => self.fill_from(p + 1),
                None => false,
            }
        } else {
            self.started = true;
            self.fill_from(0)
        };
        if !ok {
            self.done = true;
            return None;
        }
        Some(ContingencyTable {
            rows: self.k,
            cols: self.l,
            entries: self.cur.clone(),
        })
    }
}

/// Weak compositions of `n` into `parts` parts, largest first part first.
pub fn compositions(n: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(rem: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            cur.push(rem);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in (0..=rem).rev() {
            cur.push(v);
            rec(rem - v, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        rec(n, parts, &mut Vec::with_capacity(parts), &mut out);
    } else if n == 0 {
        out.push(Vec::new());
    }
    out
}

/// `|M_{mu,nu}|`, counted row by row with a memo on the remaining column sums.
pub fn magic_square_count(mu: &[u32], nu: &[u32]) -> BigUint {
    if mu.iter().sum::<u32>() != nu.iter().sum::<u32>() {
        return BigUint::zero();
    }
    if mu.is_empty() || nu.is_empty() {
        return BigUint::one();
    }
    fn rec(
        mu: &[u32],
        i: usize,
        crem: &mut Vec<u32>,
        memo: &mut HashMap<(usize, Vec<u32>), BigUint>,
    ) -> BigUint {
        if i == mu.len() {
            return if crem.iter().all(|&c| c == 0) { BigUint::one() } else { BigUint::zero() };
        }
        if let Some(v) = memo.get(&(i, crem.clone())) {
            return v.clone();
        }
        let key = (i, crem.clone());
        let mut total = BigUint::zero();
        let mut row = vec![0u32; crem.len()];
        bounded_rows(mu[i], 0, crem, &mut row, &mut |row, crem| {
            for (c, &r) in crem.iter_mut().zip(row) {
                *c -= r;
            }
            total += rec(mu, i + 1, crem, memo);
            for (c, &r) in crem.iter_mut().zip(row) {
                *c += r;
            }
        });
        memo.insert(key, total.clone());
        total
    }
    rec(mu, 0, &mut nu.to_vec(), &mut HashMap::new())
}

/// Visit every row `r` with `sum r = rem` and `r_j <= cap_j`.
fn bounded_rows(
    rem: u32,
    j: usize,
    cap: &mut Vec<u32>,
    row: &mut Vec<u32>,
    visit: &mut dyn FnMut(&[u32], &mut Vec<u32>),
) {
    let l = row.len();
    if j + 1 == l {
        if rem <= cap[j] {
            row[j] = rem;
            let snapshot = row.clone();
            visit(&snapshot, cap);
        }
        return;
    }
    let later: u32 = cap[j + 1..].iter().sum();
    let lo = rem.saturating_sub(later);
    for v in (lo..=rem.min(cap[j])).rev() {
        row[j] = v;
        bounded_rows(rem - v, j + 1, cap, row, visit);
    }
}

/// `|M_{mu,.}| * |M_{.,nu}|`: the number of `(Q, R)` pairs in a table-pair sum.
pub fn table_pair_count(mu: &[u32], nu: &[u32]) -> BigUint {
    let (k, l) = (mu.len() as u64, nu.len() as u64);
    let q: BigUint = mu.iter().map(|&m| binomial(u64::from(m) + l - 1, l - 1)).product();
    let r: BigUint = nu.iter().map(|&n| binomial(u64::from(n) + k - 1, k - 1)).product();
    q * r
}

/// `sum_{Q in M_{mu,.}} sum_{R in M_{.,nu}} prod_{i,j} f(Q_ij, R_ij)` for
/// `K = len(mu)`, `L = len(nu)`.
///
/// The columns of `R` are independent, so for a fixed column `q` of `Q` the
/// `R`-sum over column `j` collapses to `g_j(q)`. The remaining sum over `Q`
/// is a column-by-column recursion on the unused row sums.
pub fn table_pair_sum<T, F>(mu: &[u32], nu: &[u32], f: F) -> T
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>,
    F: Fn(u32, u32) -> T,
{
    let (k, l) = (mu.len(), nu.len());
    if k == 0 || l == 0 {
        return T::one();
    }
    // f(q, r) cache; q <= max(mu), r <= max(nu).
    let qmax = *mu.iter().max().unwrap() as usize;
    let rmax = *nu.iter().max().unwrap() as usize;
    let fv: Vec<Vec<T>> = (0..=qmax)
        .map(|q| (0..=rmax).map(|r| f(q as u32, r as u32)).collect())
        .collect();
    let r_cols: Vec<Vec<Vec<u32>>> = nu.iter().map(|&n| compositions(n, k)).collect();

    let g = |j: usize, q: &[u32]| -> T {
        r_cols[j].iter().fold(T::zero(), |acc, r| {
            let term = q
                .iter()
                .zip(r)
                .fold(T::one(), |p, (&qi, &ri)| p * fv[qi as usize][ri as usize].clone());
            acc + term
        })
    };

    struct Ctx<'a, T, G> {
        l: usize,
        g: G,
        memo: HashMap<(usize, Vec<u32>), T>,
        _p: std::marker::PhantomData<&'a ()>,
    }

    fn rec<T, G>(ctx: &mut Ctx<'_, T, G>, j: usize, rem: &mut Vec<u32>) -> T
    where
        T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>,
        G: Fn(usize, &[u32]) -> T,
    {
        if j + 1 == ctx.l {
            // Last column of Q is forced to the remaining row sums.
            return (ctx.g)(j, rem);
        }
        let key = (j, rem.clone());
        if let Some(v) = ctx.memo.get(&key) {
            return v.clone();
        }
        let mut total = T::zero();
        let mut col = vec![0u32; rem.len()];
        loop {
            let gj = (ctx.g)(j, &col);
            if !gj.is_zero() {
                for (r, &c) in rem.iter_mut().zip(&col) {
                    *r -= c;
                }
                let tail = rec(ctx, j + 1, rem);
                for (r, &c) in rem.iter_mut().zip(&col) {
                    *r += c;
                }
                total = total + gj * tail;
            }
            // Odometer over 0 <= col_i <= rem_i.
            let mut i = 0;
            while i < col.len() {
                if col[i] < key.1[i] {
                    col[i] += 1;
                    break;
                }
                col[i] = 0;
                i += 1;
            }
            if i == col.len() {
                break;
            }
        }
        ctx.memo.insert(key, total.clone());
        total
    }

    let mut ctx = Ctx { l, g, memo: HashMap::new(), _p: std::marker::PhantomData };
    rec(&mut ctx, 0, &mut mu.to_vec())
}

/// Literal double sum over every `(Q, R)` pair. Kept as a reference for
/// [`table_pair_sum`].
pub fn table_pair_sum_direct<T, F>(mu: &[u32], nu: &[u32], f: F) -> T
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>,
    F: Fn(u32, u32) -> T,
{
    let (k, l) = (mu.len(), nu.len());
    if k == 0 || l == 0 {
        return T::one();
    }
    let qs: Vec<ContingencyTable> = enumerate_margin_tables(Some(mu), None, k, l)
        .expect("valid margins")
        .collect();
    let rs: Vec<ContingencyTable> = enumerate_margin_tables(None, Some(nu), k, l)
        .expect("valid margins")
        .collect();
    let mut total = T::zero();
    for q in &qs {
        for r in &rs {
            let term = q
                .entries()
                .iter()
                .zip(r.entries())
                .fold(T::one(), |p, (&a, &b)| p * f(a, b));
            total = total + term;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn brute(rows: Option<&[u32]>, cols: Option<&[u32]>, k: usize, l: usize) -> Vec<Vec<u32>> {
        let bound = rows
            .into_iter()
            .chain(cols)
            .flat_map(|m| m.iter().copied())
            .max()
            .unwrap_or(0);
        let mut out = Vec::new();
        let n = k * l;
        let mut cur = vec![0u32; n];
        loop {
            let t = ContingencyTable::new(k, l, cur.clone()).unwrap();
            let ok_r = rows.map_or(true, |r| t.row_sums() == r);
            let ok_c = cols.map_or(true, |c| t.col_sums() == c);
            if ok_r && ok_c {
                out.push(cur.clone());
            }
            let mut i = 0;
            while i < n && cur[i] == bound {
                cur[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            cur[i] += 1;
        }
        out.sort();
        out
    }

    fn listed(rows: Option<&[u32]>, cols: Option<&[u32]>, k: usize, l: usize) -> Vec<Vec<u32>> {
        enumerate_margin_tables(rows, cols, k, l)
            .unwrap()
            .map(|t| t.entries().to_vec())
            .collect()
    }

    #[test]
    fn small_margin_examples() {
        assert_eq!(listed(Some(&[1]), Some(&[1]), 1, 1), vec![vec![1]]);
        assert_eq!(
            listed(Some(&[1, 1]), Some(&[1, 1]), 2, 2),
            vec![vec![1, 0, 0, 1], vec![0, 1, 1, 0]]
        );
        assert_eq!(
            listed(Some(&[2]), None, 1, 2),
            vec![vec![2, 0], vec![1, 1], vec![0, 2]]
        );
        assert!(listed(Some(&[1, 2]), Some(&[1]), 2, 1).is_empty());
    }

    #[test]
    fn margin_argument_checks() {
        assert!(enumerate_margin_tables(None, None, 1, 1).is_err());
        assert!(enumerate_margin_tables(Some(&[1]), None, 2, 1).is_err());
        assert!(enumerate_margin_tables(Some(&[1]), Some(&[1, 0]), 1, 1).is_err());
        assert!(enumerate_margin_tables(Some(&[1]), None, 1, 0).is_err());
    }

    #[test]
    fn magic_square_examples() {
        assert_eq!(magic_square_count(&[1], &[1]), BigUint::from(1u32));
        assert_eq!(magic_square_count(&[1, 1], &[1, 1]), BigUint::from(2u32));
        // [[2,0],[0,1]] and [[1,1],[1,0]]
        assert_eq!(magic_square_count(&[2, 1], &[2, 1]), BigUint::from(2u32));
        assert_eq!(magic_square_count(&[2], &[1]), BigUint::zero());
        // 3x3 tables with all margins 1 are the 3! permutation matrices.
        assert_eq!(magic_square_count(&[1, 1, 1], &[1, 1, 1]), BigUint::from(6u32));
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(3, 3).len(), 10);
        assert_eq!(compositions(0, 2), vec![vec![0, 0]]);
        assert_eq!(compositions(2, 1), vec![vec![2]]);
    }

    #[test]
    fn table_pair_sum_matches_direct_on_binomial_weights() {
        let f = |q: u32, r: u32| BigInt::from(binomial(u64::from(q + r), u64::from(q)));
        for (mu, nu) in [
            (vec![1u32, 1], vec![1u32, 1]),
            (vec![2, 0, 1], vec![1, 2]),
            (vec![3], vec![0, 2, 1]),
            (vec![0, 0], vec![0]),
        ] {
            assert_eq!(
                table_pair_sum(&mu, &nu, f),
                table_pair_sum_direct(&mu, &nu, f),
                "mu={mu:?} nu={nu:?}"
            );
        }
    }

    #[test]
    fn table_pair_count_is_product_of_composition_counts() {
        let mu = [2u32, 1];
        let nu = [1u32, 0, 2];
        let q = enumerate_margin_tables(Some(&mu), None, 2, 3).unwrap().count();
        let r = enumerate_margin_tables(None, Some(&nu), 2, 3).unwrap().count();
        assert_eq!(table_pair_count(&mu, &nu), BigUint::from(q * r));
    }

    fn margins() -> impl Strategy<Value = (Vec<u32>, Vec<u32>)> {
        (1usize..=3, 1usize..=3).prop_flat_map(|(k, l)| {
            (prop::collection::vec(0u32..=3, k), prop::collection::vec(0u32..=3, l))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn enumeration_agrees_with_brute_force((mu, nu) in margins()) {
            let (k, l) = (mu.len(), nu.len());
            let mut both = listed(Some(&mu), Some(&nu), k, l);
            both.sort();
            prop_assert_eq!(both, brute(Some(&mu), Some(&nu), k, l));
            let mut rows = listed(Some(&mu), None, k, l);
            rows.sort();
            prop_assert_eq!(rows, brute(Some(&mu), None, k, l));
            let mut cols = listed(None, Some(&nu), k, l);
            cols.sort();
            prop_assert_eq!(cols, brute(None, Some(&nu), k, l));
        }

        #[test]
        fn enumeration_is_strictly_decreasing((mu, nu) in margins()) {
            let t = listed(Some(&mu), None, mu.len(), nu.len());
            prop_assert!(t.windows(2).all(|w| w[0] > w[1]));
        }

        #[test]
        fn row_only_count_is_binomial_product((mu, nu) in margins()) {
            let l = nu.len() as u64;
            let expect: BigUint = mu
                .iter()
                .map(|&m| binomial(u64::from(m) + l - 1, l - 1))
                .product();
            let got = enumerate_margin_tables(Some(&mu), None, mu.len(), nu.len())
                .unwrap()
                .count();
            prop_assert_eq!(BigUint::from(got), expect);
        }

        #[test]
        fn magic_square_count_symmetric_and_matches_enumeration((mu, nu) in margins()) {
            let n = magic_square_count(&mu, &nu);
            prop_assert_eq!(&n, &magic_square_count(&nu, &mu));
            let listed_n = listed(Some(&mu), Some(&nu), mu.len(), nu.len()).len();
            prop_assert_eq!(n, BigUint::from(listed_n));
        }
    }
}
