//! Normality oracles for 0-1 matrices and entry patterns.
//!
//! Three exact oracles decide pattern normality independently:
//!
//! * [`is_normal_lemma2`]: every coefficient matrix `A_i` is normal and every
//!   pair satisfies `A_i A_jᵀ + A_j A_iᵀ = A_iᵀ A_j + A_jᵀ A_i`.
//! * [`is_normal_symbolic`]: the polynomial matrix `AAᵀ − AᵀA` is identically
//!   zero.
//! * [`is_normal_binary_assignments`]: every 0/1 specialization is normal.
//!
//! [`is_normal_random_specialization`] is a one-sided Monte-Carlo check, and
//! the `eq3` filters are the cheap row/column-sum necessary conditions used
//! for pruning. All arithmetic is exact.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::binary::BinaryMatrix;
use crate::error::{Error, Result};
use crate::pattern::Pattern;

/// Largest class count accepted by [`is_normal_binary_assignments`].
pub const MAX_SUBSET_CLASSES: usize = 20;

/// Half-width of the range random specializations draw from.
pub const RANDOM_VALUE_BOUND: i64 = 1000;

/// `B Bᵀ = Bᵀ B`.
pub fn is_normal_binary(b: &BinaryMatrix) -> bool {
    let rows = b.row_bits();
    let cols = b.transpose();
    let cols = cols.row_bits();
    let n = rows.len();
    for p in 0..n {
        for q in p..n {
            if (rows[p] & rows[q]).count_ones() != (cols[p] & cols[q]).count_ones() {
                return false;
            }
        }
    }
    true
}

/// `A Bᵀ + B Aᵀ = Aᵀ B + Bᵀ A`.
pub fn pair_condition(a: &BinaryMatrix, b: &BinaryMatrix) -> Result<bool> {
    if a.order() != b.order() {
        return Err(Error::domain(format!(
            "order mismatch: {} vs {}",
            a.order(),
            b.order()
        )));
    }
    let at = a.transpose();
    let bt = b.transpose();
    Ok(pair_condition_bits(
        a.row_bits(),
        at.row_bits(),
        b.row_bits(),
        bt.row_bits(),
    ))
}

/// Pair condition on bit rows and bit columns of both matrices. Both sides
/// are symmetric matrices, so only `p ≤ q` is compared.
pub(crate) fn pair_condition_bits(ar: &[u32], ac: &[u32], br: &[u32], bc: &[u32]) -> bool {
    let n = ar.len();
    for p in 0..n {
        for q in p..n {
            let lhs = (ar[p] & br[q]).count_ones() + (br[p] & ar[q]).count_ones();
            let rhs = (ac[p] & bc[q]).count_ones() + (bc[p] & ac[q]).count_ones();
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

fn self_normal_bits(r: &[u32], c: &[u32]) -> bool {
    let n = r.len();
    (0..n).all(|p| (p..n).all(|q| (r[p] & r[q]).count_ones() == (c[p] & c[q]).count_ones()))
}

/// Coefficient matrices as bit rows and bit columns, `class * n + index`.
fn coefficient_bits(p: &Pattern) -> (Vec<u32>, Vec<u32>) {
    let n = p.order();
    let k = p.class_count();
    let mut rows = vec![0u32; k * n];
    let mut cols = vec![0u32; k * n];
    for (t, &c) in p.cells().iter().enumerate() {
        let (i, j) = (t / n, t % n);
        rows[c as usize * n + i] |= 1 << j;
        cols[c as usize * n + j] |= 1 << i;
    }
    (rows, cols)
}

/// Normality through the coefficient-matrix criterion. This is the production
/// oracle.
pub fn is_normal_lemma2(p: &Pattern) -> bool {
    let n = p.order();
    let k = p.class_count();
    let (rows, cols) = coefficient_bits(p);
    let class = |i: usize| (&rows[i * n..(i + 1) * n], &cols[i * n..(i + 1) * n]);
    for i in 0..k {
        let (r, c) = class(i);
        if !self_normal_bits(r, c) {
            return false;
        }
    }
    for i in 0..k {
        let (ri, ci) = class(i);
        for j in i + 1..k {
            let (rj, cj) = class(j);
            if !pair_condition_bits(ri, ci, rj, cj) {
                return false;
            }
        }
    }
    true
}

/// Coefficient-matrix criterion on raw labels of an order-`n` grid with `k`
/// classes, without allocating. Requires `n ≤ 8` and `k ≤ 64`.
pub(crate) fn is_normal_cells(n: usize, cells: &[u8], k: usize) -> bool {
    debug_assert!(n <= 8 && k <= 64);
    let mut rows = [0u32; 64 * 8];
    let mut cols = [0u32; 64 * 8];
    for (t, &c) in cells.iter().enumerate() {
        let (i, j) = (t / n, t % n);
        rows[c as usize * n + i] |= 1 << j;
        cols[c as usize * n + j] |= 1 << i;
    }
    let class = |i: usize| (&rows[i * n..(i + 1) * n], &cols[i * n..(i + 1) * n]);
    for i in 0..k {
        let (r, c) = class(i);
        if !self_normal_bits(r, c) {
            return false;
        }
    }
    for i in 0..k {
        let (ri, ci) = class(i);
        for j in i + 1..k {
            let (rj, cj) = class(j);
            if !pair_condition_bits(ri, ci, rj, cj) {
                return false;
            }
        }
    }
    true
}

/// Unordered monomial `x_a x_b`, stored with `a ≤ b`.
pub type Monomial = (u16, u16);

fn monomial(a: u16, b: u16) -> Monomial {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// The entries of `AAᵀ − AᵀA` as integer quadratic forms in the class
/// indeterminates. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorPolynomial {
    order: usize,
    terms: BTreeMap<((usize, usize), Monomial), i64>,
}

impl CommutatorPolynomial {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `x_a x_b` at position `(p, q)`.
    pub fn term(&self, p: usize, q: usize, a: u16, b: u16) -> i64 {
        self.terms.get(&((p, q), monomial(a, b))).copied().unwrap_or(0)
    }

    /// All nonzero terms in position-then-monomial order.
    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), Monomial, i64)> + '_ {
        self.terms.iter().map(|(&(pos, m), &c)| (pos, m, c))
    }

    /// Nonzero terms at one position.
    pub fn at(&self, p: usize, q: usize) -> BTreeMap<Monomial, i64> {
        self.terms
            .range(((p, q), (0, 0))..=((p, q), (u16::MAX, u16::MAX)))
            .map(|(&(_, m), &c)| (m, c))
            .collect()
    }
}

/// Expands `AAᵀ − AᵀA` symbolically.
pub fn commutator(p: &Pattern) -> CommutatorPolynomial {
    let n = p.order();
    let mut terms: BTreeMap<((usize, usize), Monomial), i64> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            for r in 0..n {
                *terms
                    .entry(((i, j), monomial(p.cell(i, r), p.cell(j, r))))
                    .or_insert(0) += 1;
                *terms
                    .entry(((i, j), monomial(p.cell(r, i), p.cell(r, j))))
                    .or_insert(0) -= 1;
            }
        }
    }
    terms.retain(|_, c| *c != 0);
    CommutatorPolynomial { order: n, terms }
}

/// Normality by polynomial identity: the commutator has no nonzero term.
pub fn is_normal_symbolic(p: &Pattern) -> bool {
    commutator(p).is_zero()
}

/// Sorts both monomial lists and compares them as multisets.
pub(crate) fn same_monomials(mut lhs: Vec<Monomial>, mut rhs: Vec<Monomial>) -> bool {
    for m in lhs.iter_mut().chain(rhs.iter_mut()) {
        *m = monomial(m.0, m.1);
    }
    lhs.sort_unstable();
    rhs.sort_unstable();
    lhs == rhs
}

/// Normality of every 0/1 specialization, i.e. of `∑_{i∈S} A_i` for every
/// subset `S` of classes.
pub fn is_normal_binary_assignments(p: &Pattern) -> Result<bool> {
    let k = p.class_count();
    if k > MAX_SUBSET_CLASSES {
        return Err(Error::capacity(format!(
            "{k} classes exceeds the subset-oracle limit of {MAX_SUBSET_CLASSES}"
        )));
    }
    let n = p.order();
    let mut rows = vec![0u32; n];
    let mut cols = vec![0u32; n];
    for subset in 0u32..(1 << k) {
        rows.iter_mut().for_each(|r| *r = 0);
        cols.iter_mut().for_each(|c| *c = 0);
        for (t, &c) in p.cells().iter().enumerate() {
            if subset >> c & 1 == 1 {
                rows[t / n] |= 1 << (t % n);
                cols[t % n] |= 1 << (t / n);
            }
        }
        if !self_normal_bits(&rows, &cols) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Substitutes independent uniform integers from `[−1000, 1000]` for the
/// classes, `trials` times, and tests `MMᵀ = MᵀM` exactly. `false` is
/// conclusive; `true` is evidence only.
pub fn is_normal_random_specialization(p: &Pattern, trials: usize, seed: u64) -> Result<bool> {
    if trials == 0 {
        return Err(Error::domain("at least one trial is required"));
    }
    let n = p.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = vec![0i64; p.class_count()];
    let mut m = vec![0i64; n * n];
    for _ in 0..trials {
        for v in values.iter_mut() {
            *v = rng.gen_range(-RANDOM_VALUE_BOUND..=RANDOM_VALUE_BOUND);
        }
        for (dst, &c) in m.iter_mut().zip(p.cells()) {
            *dst = values[c as usize];
        }
        for i in 0..n {
            for j in i..n {
                let mut diff = 0i64;
                for r in 0..n {
                    diff += m[i * n + r] * m[j * n + r] - m[r * n + i] * m[r * n + j];
                }
                if diff != 0 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Row sums equal column sums, on and off the diagonal. Necessary for
/// normality of a 0-1 matrix.
pub fn eq3_filter(b: &BinaryMatrix) -> bool {
    b.row_col_profile().is_balanced()
}

/// Checks a row-major prefix of a pattern for a provable violation of the
/// per-class row/column balance.
///
/// For every line `p` and class `i`, let `d_i` be the number of assigned
/// off-diagonal cells of class `i` in row `p` minus those in column `p`. Row
/// `p` must still absorb `Σ max(0, −d_i)` cells and column `p` must absorb
/// `Σ max(0, d_i)` cells; the prefix is rejected if either exceeds the
/// unassigned off-diagonal cells left in that row or column. Labels need not
/// be in restricted-growth form.
pub fn eq3_partial_filter(order: usize, assigned: &[u16]) -> Result<bool> {
    let n = order;
    if assigned.len() > n * n {
        return Err(Error::domain(format!(
            "{} assigned cells exceed the {} cells of order {n}",
            assigned.len(),
            n * n
        )));
    }
    let k = assigned.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
    let mut diff = vec![0i32; n * k];
    let mut rem_row = vec![n as i32 - 1; n];
    let mut rem_col = vec![n as i32 - 1; n];
    for (t, &c) in assigned.iter().enumerate() {
        let (i, j) = (t / n, t % n);
        if i == j {
            continue;
        }
        diff[i * k + c as usize] += 1;
        diff[j * k + c as usize] -= 1;
        rem_row[i] -= 1;
        rem_col[j] -= 1;
    }
    for p in 0..n {
        let line = &diff[p * k..(p + 1) * k];
        let surplus: i32 = line.iter().filter(|&&d| d > 0).sum();
        let deficit: i32 = -line.iter().filter(|&&d| d < 0).sum::<i32>();
        if deficit > rem_row[p] || surplus > rem_col[p] {
            return Ok(false);
        }
    }
    Ok(true)
}
