//! Entry patterns: square grids of indeterminates, stored as set partitions of
//! the cell grid.
//!
//! A [`Pattern`] never remembers the names of its indeterminates. Cells carry
//! class identifiers in first-occurrence order (a restricted-growth string over
//! the row-major cell sequence), so two grids that differ only by a renaming of
//! the indeterminates are the same value.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use crate::binary::BinaryMatrix;
use crate::error::{Error, Result};

/// Largest order accepted anywhere in the crate (one row per machine word).
pub const MAX_ORDER: usize = 32;

/// An order-`n` entry pattern in restricted-growth normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    order: usize,
    cells: Vec<u16>,
    class_count: usize,
}

/// Relabels a sequence so that labels appear as 0, 1, 2, ... in order of first
/// occurrence. Returns the relabeled sequence and the number of labels.
pub fn first_occurrence_labels<T, I>(values: I) -> (Vec<u16>, usize)
where
    T: Eq + Hash,
    I: IntoIterator<Item = T>,
{
    let mut seen: HashMap<T, u16> = HashMap::new();
    let out = values
        .into_iter()
        .map(|v| {
            let next = seen.len() as u16;
            *seen.entry(v).or_insert(next)
        })
        .collect();
    (out, seen.len())
}

/// Relabels small integer labels (below 1024) without hashing.
pub(crate) fn relabel_small(values: impl IntoIterator<Item = u16>) -> (Vec<u16>, usize) {
    let mut map = [u16::MAX; MAX_ORDER * MAX_ORDER];
    let mut next = 0u16;
    let out = values
        .into_iter()
        .map(|v| {
            let slot = &mut map[v as usize];
            if *slot == u16::MAX {
                *slot = next;
                next += 1;
            }
            *slot
        })
        .collect();
    (out, next as usize)
}

/// True if `cells` is a restricted-growth string: starts at 0 and every entry
/// is at most one more than the running maximum.
pub fn is_restricted_growth(cells: &[u16]) -> bool {
    let mut next = 0u32;
    for &c in cells {
        let c = c as u32;
        if c > next {
            return false;
        }
        if c == next {
            next += 1;
        }
    }
    true
}

fn check_order(order: usize) -> Result<()> {
    if order == 0 {
        return Err(Error::domain("pattern order must be at least 1"));
    }
    if order > MAX_ORDER {
        return Err(Error::capacity(format!(
            "order {order} exceeds the maximum supported order {MAX_ORDER}"
        )));
    }
    Ok(())
}

/// Checks that `perm` is a bijection on `0..n`.
pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::domain(format!(
            "permutation has length {}, expected {n}",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::domain(format!("{perm:?} is not a permutation of 0..{n}")));
        }
        seen[p] = true;
    }
    Ok(())
}

impl Pattern {
    /// Builds a pattern from arbitrary row-major cell values; equal values
    /// become the same class.
    pub fn from_cells<T: Eq + Hash + Clone>(order: usize, values: &[T]) -> Result<Self> {
        check_order(order)?;
        if values.len() != order * order {
            return Err(Error::domain(format!(
                "expected {} cells for order {order}, got {}",
                order * order,
                values.len()
            )));
        }
        let (cells, class_count) = first_occurrence_labels(values.iter().cloned());
        Ok(Pattern {
            order,
            cells,
            class_count,
        })
    }

    /// Builds a pattern from rows of label tokens. Rows must all have the
    /// same length as the number of rows.
    pub fn from_labels<T: Eq + Hash + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::malformed(1, 1, "pattern has no rows"));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::malformed(
                    i + 1,
                    row.len().min(n) + 1,
                    format!("row {} has {} entries, expected {n}", i + 1, row.len()),
                ));
            }
        }
        let flat: Vec<T> = rows.iter().flat_map(|r| r.iter().cloned()).collect();
        Self::from_cells(n, &flat)
    }

    /// Wraps an existing restricted-growth string.
    pub fn from_rgs(order: usize, cells: Vec<u16>) -> Result<Self> {
        check_order(order)?;
        if cells.len() != order * order {
            return Err(Error::domain(format!(
                "expected {} cells for order {order}, got {}",
                order * order,
                cells.len()
            )));
        }
        if !is_restricted_growth(&cells) {
            return Err(Error::domain("cells are not a restricted-growth string"));
        }
        let class_count = cells.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        Ok(Pattern {
            order,
            cells,
            class_count,
        })
    }

    /// Fast constructor for small integer labels (< 1024) that need relabeling.
    pub(crate) fn from_small_labels(order: usize, values: impl IntoIterator<Item = u16>) -> Self {
        let (cells, class_count) = relabel_small(values);
        debug_assert_eq!(cells.len(), order * order);
        Pattern {
            order,
            cells,
            class_count,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of distinct indeterminates.
    pub fn class_count(&self) -> usize {
        self.class_count
    }

    /// Row-major class identifiers.
    pub fn cells(&self) -> &[u16] {
        &self.cells
    }

    pub fn cell(&self, row: usize, col: usize) -> u16 {
        self.cells[row * self.order + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u16]> {
        self.cells.chunks(self.order)
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.order;
        (0..n).all(|i| (i + 1..n).all(|j| self.cell(i, j) == self.cell(j, i)))
    }

    /// Number of cells in each class.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.class_count];
        for &c in &self.cells {
            sizes[c as usize] += 1;
        }
        sizes
    }

    pub fn transpose(&self) -> Pattern {
        let n = self.order;
        Self::from_small_labels(
            n,
            (0..n * n).map(|t| self.cell(t % n, t / n)),
        )
    }

    /// Simultaneous row/column permutation: cell `(i, j)` moves to
    /// `(perm[i], perm[j])`.
    pub fn permute(&self, perm: &[usize]) -> Result<Pattern> {
        let n = self.order;
        check_permutation(perm, n)?;
        Ok(self.permute_unchecked(perm))
    }

    pub(crate) fn permute_unchecked(&self, perm: &[usize]) -> Pattern {
        let n = self.order;
        let mut inverse = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inverse[p] = i;
        }
        Self::from_small_labels(
            n,
            (0..n * n).map(|t| self.cell(inverse[t / n], inverse[t % n])),
        )
    }

    /// Identifies all classes inside each group. `groups` must partition the
    /// class identifiers `0..class_count`.
    pub fn merge_classes(&self, groups: &[Vec<usize>]) -> Result<Pattern> {
        let mut target = vec![usize::MAX; self.class_count];
        for (g, group) in groups.iter().enumerate() {
            if group.is_empty() {
                return Err(Error::domain("merge groups must be nonempty"));
            }
            for &c in group {
                if c >= self.class_count {
                    return Err(Error::domain(format!(
                        "class {c} out of range 0..{}",
                        self.class_count
                    )));
                }
                if target[c] != usize::MAX {
                    return Err(Error::domain(format!("class {c} appears in two groups")));
                }
                target[c] = g;
            }
        }
        if let Some(c) = target.iter().position(|&t| t == usize::MAX) {
            return Err(Error::domain(format!("class {c} is not covered by any group")));
        }
        Ok(Self::from_small_labels(
            self.order,
            self.cells.iter().map(|&c| target[c as usize] as u16),
        ))
    }

    /// The 0-1 indicator matrix of class `class`.
    pub fn coefficient_matrix(&self, class: usize) -> Result<BinaryMatrix> {
        if class >= self.class_count {
            return Err(Error::domain(format!(
                "class {class} out of range 0..{}",
                self.class_count
            )));
        }
        Ok(self.coefficient_matrix_unchecked(class as u16))
    }

    pub(crate) fn coefficient_matrix_unchecked(&self, class: u16) -> BinaryMatrix {
        let n = self.order;
        let rows = self
            .rows()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &c)| c == class)
                    .fold(0u32, |acc, (j, _)| acc | (1 << j))
            })
            .collect();
        BinaryMatrix::from_row_bits(n, rows)
    }

    /// All coefficient matrices, indexed by class.
    pub fn coefficient_matrices(&self) -> Vec<BinaryMatrix> {
        let n = self.order;
        let mut rows = vec![vec![0u32; n]; self.class_count];
        for (t, &c) in self.cells.iter().enumerate() {
            rows[c as usize][t / n] |= 1 << (t % n);
        }
        rows.into_iter()
            .map(|r| BinaryMatrix::from_row_bits(n, r))
            .collect()
    }

    /// Token grid using the canonical names `x0`, `x1`, ...
    pub fn to_tokens(&self) -> Vec<Vec<String>> {
        self.rows()
            .map(|row| row.iter().map(|c| format!("x{c}")).collect())
            .collect()
    }
}

impl fmt::Display for Pattern {
    /// Writes the canonical text serialization (order line, then rows of
    /// `x<id>` tokens).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.order)?;
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|c| format!("x{c}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}
