//! Enumeration and classification of normal 0-1 matrices with a fixed number
//! of ones.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::binary::BinaryMatrix;
use crate::canon::binary_canonical_key;
use crate::error::{Error, Result};

/// Upper bound on `C(n², m)` for a single enumeration.
pub const ENUMERATION_GUARD: u128 = 10_000_000;

/// Largest order the classifier accepts (cell sets are `u64` masks).
pub const MAX_CLASSIFY_ORDER: usize = 8;

/// A permutation-similarity class of 0-1 matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryClass {
    /// Minimal row-major 0/1 string over all simultaneous permutations.
    pub key: Vec<u16>,
    /// The matrix whose row-major string is `key`.
    pub representative: Vec<Vec<u8>>,
    pub member_count: usize,
}

impl BinaryClass {
    pub fn representative_matrix(&self) -> BinaryMatrix {
        BinaryMatrix::from_rows(&self.representative).expect("stored representative is valid")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub order: usize,
    pub ones_count: usize,
    pub total_matrices: usize,
    pub classes: Vec<BinaryClass>,
}

impl ClassificationReport {
    /// Stable key-value rendering.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "order: {}\nones_count: {}\ntotal_matrices: {}\nclass_count: {}\n",
            self.order,
            self.ones_count,
            self.total_matrices,
            self.classes.len()
        );
        for (i, c) in self.classes.iter().enumerate() {
            out.push_str(&format!("class {i}: member_count {}\n", c.member_count));
            for row in &c.representative {
                let line: Vec<String> = row.iter().map(u8::to_string).collect();
                out.push_str(&format!("  {}\n", line.join(" ")));
            }
        }
        out
    }
}

pub(crate) fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

fn check_guard(n: usize, m: usize) -> Result<()> {
    if n == 0 || n > MAX_CLASSIFY_ORDER {
        return Err(Error::capacity(format!(
            "classification supports orders 1..={MAX_CLASSIFY_ORDER}, got {n}"
        )));
    }
    if m > n * n {
        return Err(Error::domain(format!("{m} ones do not fit in an order-{n} matrix")));
    }
    let count = binomial((n * n) as u128, m as u128);
    if count > ENUMERATION_GUARD {
        return Err(Error::capacity(format!(
            "C({}, {m}) = {count} placements exceeds the guard of {ENUMERATION_GUARD}",
            n * n
        )));
    }
    Ok(())
}

/// Normality of the matrix whose row-major cells are the bits of `mask`.
pub(crate) fn is_normal_mask(n: usize, mask: u64) -> bool {
    let mut rows = [0u32; MAX_CLASSIFY_ORDER];
    let mut cols = [0u32; MAX_CLASSIFY_ORDER];
    let mut bits = mask;
    while bits != 0 {
        let t = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        rows[t / n] |= 1 << (t % n);
        cols[t % n] |= 1 << (t / n);
    }
    (0..n).all(|p| (p..n).all(|q| (rows[p] & rows[q]).count_ones() == (cols[p] & cols[q]).count_ones()))
}

/// Visits every `m`-subset of `0..len` in lexicographic order as a bit mask.
pub(crate) fn for_each_combination(len: usize, m: usize, mut visit: impl FnMut(u64)) {
    if m > len {
        return;
    }
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        visit(idx.iter().fold(0u64, |acc, &i| acc | 1 << i));
        // rightmost index that can still advance
        let mut i = m;
        while i > 0 && idx[i - 1] == len - m + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..m {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Cell masks of all normal 0-1 matrices of order `n` with `m` ones, in
/// lexicographic order of their cell-index sets.
pub(crate) fn normal_masks(n: usize, m: usize) -> Result<Vec<u64>> {
    check_guard(n, m)?;
    let mut out = Vec::new();
    if m == 0 {
        out.push(0);
        return Ok(out);
    }
    for_each_combination(n * n, m, |mask| {
        if is_normal_mask(n, mask) {
            out.push(mask);
        }
    });
    Ok(out)
}

/// All normal 0-1 matrices of order `n` with exactly `m` ones (not
/// deduplicated), in lexicographic order of their cell-index sets.
pub fn catalog_for_occupancy(n: usize, m: usize) -> Result<Vec<BinaryMatrix>> {
    Ok(normal_masks(n, m)?
        .into_iter()
        .map(|mask| BinaryMatrix::from_cell_mask(n, mask))
        .collect())
}

/// Groups the normal 0-1 matrices with `m` ones into permutation-similarity
/// classes, ordered by canonical key.
pub fn classify_normal_binary(n: usize, m: usize) -> Result<ClassificationReport> {
    let masks = normal_masks(n, m)?;
    let mut classes: BTreeMap<Vec<u16>, usize> = BTreeMap::new();
    for &mask in &masks {
        let key = binary_canonical_key(&BinaryMatrix::from_cell_mask(n, mask))?;
        *classes.entry(key.bits).or_insert(0) += 1;
    }
    let classes = classes
        .into_iter()
        .map(|(key, member_count)| BinaryClass {
            representative: key.chunks(n).map(|r| r.iter().map(|&b| b as u8).collect()).collect(),
            key,
            member_count,
        })
        .collect();
    Ok(ClassificationReport {
        order: n,
        ones_count: m,
        total_matrices: masks.len(),
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normality::is_normal_binary;

    #[test]
    fn combinations_are_lexicographic_and_complete() {
        let mut seen = Vec::new();
        for_each_combination(5, 2, |m| seen.push(m));
        assert_eq!(seen.len(), 10);
        assert_eq!(seen[0], 0b00011);
        assert_eq!(seen[1], 0b00101);
        assert_eq!(seen[9], 0b11000);
        let mut all = Vec::new();
        for_each_combination(4, 4, |m| all.push(m));
        assert_eq!(all, vec![0b1111]);
    }

    #[test]
    fn mask_normality_matches_matrix_normality() {
        for mask in 0u64..(1 << 9) {
            let b = BinaryMatrix::from_cell_mask(3, mask);
            assert_eq!(is_normal_mask(3, mask), is_normal_binary(&b), "{b:?}");
        }
    }

    #[test]
    fn catalog_examples() {
        let cat = catalog_for_occupancy(3, 1).unwrap();
        assert_eq!(cat.len(), 3);
        assert!(cat.iter().all(|b| (0..3).any(|i| b.get(i, i))));

        let cat = catalog_for_occupancy(2, 2).unwrap();
        assert_eq!(cat, vec![
            BinaryMatrix::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap(),
            BinaryMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap(),
        ]);

        assert_eq!(catalog_for_occupancy(3, 9).unwrap(), vec![BinaryMatrix::all_ones(3)]);
        assert_eq!(catalog_for_occupancy(3, 0).unwrap(), vec![BinaryMatrix::zeros(3)]);
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_normal_binary(3, 1).unwrap().classes.len(), 1);
        assert_eq!(classify_normal_binary(4, 2).unwrap().classes.len(), 2);
        let r = classify_normal_binary(3, 3).unwrap();
        assert_eq!(r.classes.len(), 4);
        assert_eq!(r.classes.iter().map(|c| c.member_count).sum::<usize>(), r.total_matrices);
    }

    #[test]
    fn guards() {
        assert!(matches!(classify_normal_binary(6, 18), Err(Error::Capacity(_))));
        assert!(matches!(classify_normal_binary(9, 1), Err(Error::Capacity(_))));
        assert!(matches!(classify_normal_binary(3, 10), Err(Error::Domain(_))));
        assert!(classify_normal_binary(5, 12).is_ok());
    }
}
