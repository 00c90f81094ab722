//! Named patterns and structural checks: the extremal family, the order-3
//! circulant, the small normal 0-1 matrices, bordered forms around a rare
//! class, and the block criterion for `[[B1, B2], [B2ᵀ, B3]]` with `B1`
//! symmetric.

use std::collections::BTreeMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::binary::BinaryMatrix;
use crate::error::{Error, Result};
use crate::max_nonsymmetric_classes;
use crate::normality::{is_normal_lemma2, is_normal_symbolic, same_monomials};
use crate::pattern::{Pattern, MAX_ORDER};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum ExtremalLabel {
    X(usize, usize),
    Y(usize),
    Z,
    U,
    V,
}

/// Class identifiers of the named indeterminates of [`extremal`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalClasses {
    /// `x_{ij}` for `i ≤ j` (0-based), in lexicographic order.
    pub x: BTreeMap<(usize, usize), usize>,
    pub y: Vec<usize>,
    pub z: usize,
    pub u: usize,
    pub v: usize,
}

/// The extremal pattern of order `n`: a symmetric block of distinct
/// upper-triangle indeterminates, a border whose rows are constant, and the
/// order-3 circulant in the trailing corner.
pub fn extremal(n: usize) -> Result<Pattern> {
    Ok(extremal_with_classes(n)?.0)
}

pub fn extremal_with_classes(n: usize) -> Result<(Pattern, ExtremalClasses)> {
    if n < 3 {
        return Err(Error::domain(format!("extremal patterns need order ≥ 3, got {n}")));
    }
    if n > MAX_ORDER {
        return Err(Error::capacity(format!("order {n} exceeds {MAX_ORDER}")));
    }
    let m = n - 3;
    let label = |i: usize, j: usize| -> ExtremalLabel {
        match (i < m, j < m) {
            (true, true) => ExtremalLabel::X(i.min(j), i.max(j)),
            (true, false) => ExtremalLabel::Y(i),
            (false, true) => ExtremalLabel::Y(j),
            (false, false) => match (j + 3 - i) % 3 {
                0 => ExtremalLabel::Z,
                1 => ExtremalLabel::U,
                _ => ExtremalLabel::V,
            },
        }
    };
    let cells: Vec<ExtremalLabel> = (0..n * n).map(|t| label(t / n, t % n)).collect();
    let p = Pattern::from_cells(n, &cells)?;
    let classes = ExtremalClasses {
        x: (0..m)
            .flat_map(|i| (i..m).map(move |j| (i, j)))
            .map(|(i, j)| ((i, j), p.cell(i, j) as usize))
            .collect(),
        y: (0..m).map(|i| p.cell(i, m) as usize).collect(),
        z: p.cell(m, m) as usize,
        u: p.cell(m, m + 1) as usize,
        v: p.cell(m, m + 2) as usize,
    };
    Ok((p, classes))
}

/// `[[z, u, v], [v, z, u], [u, v, z]]`; equal labels merge classes.
pub fn circulant3<T: Eq + Hash + Clone>(z: T, u: T, v: T) -> Pattern {
    let cells = [
        z.clone(), u.clone(), v.clone(),
        v.clone(), z.clone(), u.clone(),
        u, v, z,
    ];
    Pattern::from_cells(3, &cells).expect("order 3 is valid")
}

/// True if `p` has the extremal block shape: leading `(n−3)` block symmetric,
/// border rows constant and mirrored, trailing 3×3 block a circulant on three
/// distinct classes.
pub fn has_extremal_block_shape(p: &Pattern) -> bool {
    let n = p.order();
    if n < 3 {
        return false;
    }
    let m = n - 3;
    let x_symmetric = (0..m).all(|i| (0..m).all(|j| p.cell(i, j) == p.cell(j, i)));
    let y_constant = (0..m).all(|i| {
        let y = p.cell(i, m);
        (m..n).all(|j| p.cell(i, j) == y && p.cell(j, i) == y)
    });
    let (z, u, v) = (p.cell(m, m), p.cell(m, m + 1), p.cell(m, m + 2));
    let circulant = z != u
        && u != v
        && z != v
        && (0..3).all(|a| {
            (0..3).all(|b| {
                let want = [z, u, v][(b + 3 - a) % 3];
                p.cell(m + a, m + b) == want
            })
        });
    x_symmetric && y_constant && circulant
}

fn lemma4_rows(rows: &[&[u8]]) -> BinaryMatrix {
    BinaryMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
        .expect("fixed catalog entries are valid")
}

/// Representatives of the normal 0-1 matrices with `ones` ∈ {1, 2, 3} ones,
/// padded with zeros to order `n`. Order: for three ones, `I_3`,
/// `[[1,1],[1,0]]`, `1 ⊕ [[0,1],[1,0]]`, then the 3-cycle.
pub fn lemma4_catalog(n: usize, ones: usize) -> Result<Vec<BinaryMatrix>> {
    if n < 2 {
        return Err(Error::domain(format!("catalog needs order ≥ 2, got {n}")));
    }
    let forms: Vec<BinaryMatrix> = match ones {
        1 => vec![lemma4_rows(&[&[1]])],
        2 => vec![BinaryMatrix::identity(2), lemma4_rows(&[&[0, 1], &[1, 0]])],
        3 => {
            if n < 3 {
                return Err(Error::domain("three-one forms need order ≥ 3"));
            }
            vec![
                BinaryMatrix::identity(3),
                lemma4_rows(&[&[1, 1], &[1, 0]]),
                lemma4_rows(&[&[1, 0, 0], &[0, 0, 1], &[0, 1, 0]]),
                lemma4_rows(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]),
            ]
        }
        _ => return Err(Error::domain(format!("catalog covers 1 to 3 ones, got {ones}"))),
    };
    forms.iter().map(|f| f.pad_to(n)).collect()
}

/// A nonsymmetric normal pattern of order `n` with exactly `k` classes,
/// obtained by merging classes of [`extremal`]. The `x` classes are merged
/// first, then the `y` classes, then `z`; `u` and `v` are never merged with
/// each other. For `k = 2` everything except `v` is merged into `u`.
pub fn with_k_classes(n: usize, k: usize) -> Result<Pattern> {
    if n < 3 {
        return Err(Error::domain(format!("order must be ≥ 3, got {n}")));
    }
    let top = max_nonsymmetric_classes(n);
    if !(2..=top).contains(&k) {
        return Err(Error::domain(format!("class count {k} outside [2, {top}] for order {n}")));
    }
    let (p, classes) = extremal_with_classes(n)?;
    let mut schedule: Vec<usize> = classes.x.values().copied().collect();
    schedule.extend(&classes.y);
    schedule.push(classes.z);

    let mut pool: Vec<usize> = if k == 2 {
        let mut all = schedule.clone();
        all.push(classes.u);
        all
    } else {
        schedule[..top - k + 1].to_vec()
    };
    pool.sort_unstable();
    let mut groups = vec![pool.clone()];
    groups.extend((0..p.class_count()).filter(|c| !pool.contains(c)).map(|c| vec![c]));
    p.merge_classes(&groups)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BorderedFormKind {
    /// `[[x_i, a], [aᵀ, B]]`: the class is a single diagonal cell.
    Single,
    /// `[[x_i, x_j, b], [x_j, x_i, c], [bᵀ, cᵀ, B]]`.
    DiagonalPair,
    /// `[[x_j, x_i, b], [x_i, x_k, c], [bᵀ, cᵀ, B]]`.
    OffDiagonalPair,
}

/// A permutation bringing a pattern into one of the bordered forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorderedForm {
    pub kind: BorderedFormKind,
    /// `σ` with `permute(P, σ)` in the form.
    pub permutation: Vec<usize>,
    pub pattern: Pattern,
}

/// Moves `first` to 0 (and `second` to 1), keeping other indices in order.
fn front_permutation(n: usize, front: &[usize]) -> Vec<usize> {
    let mut next = front.len();
    (0..n)
        .map(|i| {
            front.iter().position(|&f| f == i).unwrap_or_else(|| {
                next += 1;
                next - 1
            })
        })
        .collect()
}

/// For a normal pattern and a class with one or two cells, finds the
/// bordered form the class forces. A failure is reported as
/// [`Error::Counterexample`].
pub fn bordered_form_check(p: &Pattern, class: usize) -> Result<BorderedForm> {
    let n = p.order();
    let a = p.coefficient_matrix(class)?;
    let ones = a.ones_count();
    if !(1..=2).contains(&ones) {
        return Err(Error::domain(format!("class {class} has {ones} cells, expected 1 or 2")));
    }
    if !is_normal_lemma2(p) {
        return Err(Error::domain("bordered forms are only defined for normal patterns"));
    }
    let cells: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| a.get(i, j))
        .collect();
    let (kind, front) = match cells.as_slice() {
        [(i, j)] if i == j => (BorderedFormKind::Single, vec![*i]),
        [(i, j), (k, l)] if i == j && k == l => (BorderedFormKind::DiagonalPair, vec![*i, *k]),
        [(i, j), (k, l)] if i == l && j == k && i != j => {
            (BorderedFormKind::OffDiagonalPair, vec![*i, *j])
        }
        _ => {
            return Err(Error::Counterexample(format!(
                "class {class} occupies {cells:?}, which fits no bordered form"
            )))
        }
    };
    let permutation = front_permutation(n, &front);
    let q = p.permute_unchecked(&permutation);
    let h = front.len();
    let mirrored = (0..h).all(|i| (h..n).all(|r| q.cell(i, r) == q.cell(r, i)));
    let head_symmetric = h == 1 || q.cell(0, 1) == q.cell(1, 0);
    if !(mirrored && head_symmetric) {
        return Err(Error::Counterexample(format!(
            "class {class}: border of the permuted pattern is not mirrored"
        )));
    }
    Ok(BorderedForm {
        kind,
        permutation,
        pattern: q,
    })
}

/// A rectangular block of class labels, sharing its label space with the
/// other blocks of the same pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    rows: usize,
    cols: usize,
    cells: Vec<u16>,
}

impl Block {
    pub fn new(rows: usize, cols: usize, cells: Vec<u16>) -> Result<Self> {
        if cells.len() != rows * cols {
            return Err(Error::domain(format!(
                "{rows}×{cols} block needs {} cells, got {}",
                rows * cols,
                cells.len()
            )));
        }
        Ok(Block { rows, cols, cells })
    }

    pub fn from_rows(rows: &[Vec<u16>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::domain("ragged block"));
        }
        Block::new(rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u16 {
        self.cells[i * self.cols + j]
    }

    fn is_square_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    fn to_pattern(&self) -> Result<Pattern> {
        Pattern::from_cells(self.rows, &self.cells)
    }
}

fn check_conformal(b1: &Block, b2: &Block, b3: &Block) -> Result<()> {
    if b1.rows != b1.cols || b3.rows != b3.cols || b2.rows != b1.rows || b2.cols != b3.rows {
        return Err(Error::domain(format!(
            "blocks {}×{}, {}×{}, {}×{} are not conformal",
            b1.rows, b1.cols, b2.rows, b2.cols, b3.rows, b3.cols
        )));
    }
    Ok(())
}

/// The pattern `[[B1, B2], [B2ᵀ, B3]]`.
pub fn assemble_blocks(b1: &Block, b2: &Block, b3: &Block) -> Result<Pattern> {
    check_conformal(b1, b2, b3)?;
    let h = b1.rows;
    let n = h + b3.rows;
    let cell = |i: usize, j: usize| match (i < h, j < h) {
        (true, true) => b1.get(i, j),
        (true, false) => b2.get(i, j - h),
        (false, true) => b2.get(j, i - h),
        (false, false) => b3.get(i - h, j - h),
    };
    let cells: Vec<u16> = (0..n * n).map(|t| cell(t / n, t % n)).collect();
    Pattern::from_cells(n, &cells)
}

/// With `B1` symmetric, `[[B1, B2], [B2ᵀ, B3]]` is normal iff `B3` is normal
/// and `B2 B3 = B2 B3ᵀ`; both sides are evaluated as polynomial identities.
pub fn block_normality(b1: &Block, b2: &Block, b3: &Block) -> Result<bool> {
    check_conformal(b1, b2, b3)?;
    if !b1.is_square_symmetric() {
        return Err(Error::domain("leading block must be symmetric"));
    }
    if b3.rows > 0 && !is_normal_symbolic(&b3.to_pattern()?) {
        return Ok(false);
    }
    let m = b3.rows;
    for p in 0..b2.rows {
        for q in 0..m {
            let lhs = (0..m).map(|r| (b2.get(p, r), b3.get(r, q))).collect();
            let rhs = (0..m).map(|r| (b2.get(p, r), b3.get(q, r))).collect();
            if !same_monomials(lhs, rhs) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
