//! Canonical forms under permutation similarity.
//!
//! The canonical key of a pattern is the lexicographically smallest
//! restricted-growth string among all `n!` simultaneous row/column
//! permutations of it. Brute force is adequate for the orders used here.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::binary::BinaryMatrix;
use crate::error::{Error, Result};
use crate::pattern::Pattern;

/// Largest order accepted by the brute-force canonicalizer.
pub const MAX_CANON_ORDER: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalKey {
    /// Minimal relabeled cell string.
    pub cells: Vec<u16>,
    /// Lexicographically smallest `σ` with `relabel(permute(P, σ)) = cells`.
    pub witness: Vec<usize>,
}

/// An equivalence class of patterns with a representative in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimilarityClass {
    pub key: CanonicalKey,
    #[serde(with = "pattern_serde")]
    pub representative: Pattern,
    /// Number of distinct labeled patterns in the class.
    pub member_count: usize,
}

impl SimilarityClass {
    /// Class of `p`, with the member count taken as the orbit size.
    pub fn of(p: &Pattern) -> Result<Self> {
        let key = canonical_key(p)?;
        let representative = Pattern::from_rgs(p.order(), key.cells.clone())?;
        let member_count = orbit_size(p)?;
        Ok(SimilarityClass {
            key,
            representative,
            member_count,
        })
    }
}

pub(crate) mod pattern_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::pattern::Pattern;

    #[derive(Serialize, Deserialize)]
    struct Repr {
        order: usize,
        cells: Vec<u16>,
    }

    pub fn serialize<S: Serializer>(p: &Pattern, s: S) -> Result<S::Ok, S::Error> {
        Repr {
            order: p.order(),
            cells: p.cells().to_vec(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Pattern, D::Error> {
        let r = Repr::deserialize(d)?;
        Pattern::from_rgs(r.order, r.cells).map_err(serde::de::Error::custom)
    }
}

/// Advances `perm` to the next permutation in lexicographic order; returns
/// false after the last one.
pub(crate) fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = vec![perm.clone()];
    while next_permutation(&mut perm) {
        out.push(perm.clone());
    }
    out
}

fn check_canon_order(n: usize) -> Result<()> {
    if n > MAX_CANON_ORDER {
        return Err(Error::capacity(format!(
            "canonical forms are limited to order {MAX_CANON_ORDER}, got {n}"
        )));
    }
    Ok(())
}

/// Minimizes the row-major string of `value(τ(a), τ(b))` over all `σ = τ⁻¹`,
/// relabeling by first occurrence when `relabel` is set.
fn minimize<F: Fn(usize, usize) -> u16>(n: usize, value: F, relabel: bool) -> (Vec<u16>, Vec<usize>) {
    let mut sigma: Vec<usize> = (0..n).collect();
    let mut tau = vec![0usize; n];
    let mut best: Option<(Vec<u16>, Vec<usize>)> = None;
    let mut current = vec![0u16; n * n];
    let mut map = vec![u16::MAX; n * n + 1];
    loop {
        for (i, &s) in sigma.iter().enumerate() {
            tau[s] = i;
        }
        map.iter_mut().for_each(|m| *m = u16::MAX);
        let mut next = 0u16;
        let mut smaller = best.is_none();
        let mut larger = false;
        for t in 0..n * n {
            let raw = value(tau[t / n], tau[t % n]);
            let v = if relabel {
                let slot = &mut map[raw as usize];
                if *slot == u16::MAX {
                    *slot = next;
                    next += 1;
                }
                *slot
            } else {
                raw
            };
            current[t] = v;
            if !smaller {
                let b = best.as_ref().map(|(c, _)| c[t]).unwrap_or(0);
                if v < b {
                    smaller = true;
                } else if v > b {
                    larger = true;
                    break;
                }
            }
        }
        if !larger && smaller {
            best = Some((current.clone(), sigma.clone()));
        }
        if !next_permutation(&mut sigma) {
            break;
        }
    }
    best.expect("at least one permutation")
}

/// Canonical key of `p`. Deterministic; the witness is the lexicographically
/// smallest permutation attaining the minimum.
pub fn canonical_key(p: &Pattern) -> Result<CanonicalKey> {
    let n = p.order();
    check_canon_order(n)?;
    let (cells, witness) = minimize(n, |i, j| p.cell(i, j), true);
    Ok(CanonicalKey { cells, witness })
}

/// Canonical representative of `p`.
pub fn canonical_form(p: &Pattern) -> Result<Pattern> {
    Pattern::from_rgs(p.order(), canonical_key(p)?.cells)
}

/// Permutation similarity combined with relabeling of indeterminates.
pub fn are_equivalent(p: &Pattern, q: &Pattern) -> Result<bool> {
    if p.order() != q.order() {
        return Err(Error::domain(format!(
            "order mismatch: {} vs {}",
            p.order(),
            q.order()
        )));
    }
    if p.class_count() != q.class_count() {
        return Ok(false);
    }
    Ok(canonical_key(p)?.cells == canonical_key(q)?.cells)
}

/// Number of distinct patterns `relabel(permute(p, σ))` over all `σ`.
pub fn orbit_size(p: &Pattern) -> Result<usize> {
    let n = p.order();
    check_canon_order(n)?;
    let orbit: BTreeSet<Pattern> = all_permutations(n)
        .iter()
        .map(|s| p.permute_unchecked(s))
        .collect();
    Ok(orbit.len())
}

/// Canonical key of a 0-1 matrix: the minimal row-major 0/1 string over all
/// simultaneous permutations (no relabeling, so a matrix and its complement
/// stay distinct).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryKey {
    pub bits: Vec<u16>,
    pub witness: Vec<usize>,
}

pub fn binary_canonical_key(b: &BinaryMatrix) -> Result<BinaryKey> {
    let n = b.order();
    check_canon_order(n)?;
    let (bits, witness) = minimize(n, |i, j| b.get(i, j) as u16, false);
    Ok(BinaryKey { bits, witness })
}

/// `∃σ: Pσᵀ A Pσ = B`.
pub fn is_binary_perm_similar(a: &BinaryMatrix, b: &BinaryMatrix) -> Result<bool> {
    if a.order() != b.order() {
        return Err(Error::domain(format!(
            "order mismatch: {} vs {}",
            a.order(),
            b.order()
        )));
    }
    if a.ones_count() != b.ones_count() {
        return Ok(false);
    }
    Ok(binary_canonical_key(a)?.bits == binary_canonical_key(b)?.bits)
}
