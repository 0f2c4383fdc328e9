//! Bruhat order on `S_n`: comparison, covers, and the transpositions labeling
//! the bottom and top covers of an interval.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::enumerator::OrderCache;
use crate::error::{Error, Result};
use crate::perm::{all_transpositions, Permutation, Transposition};

fn same_degree(u: &Permutation, v: &Permutation) -> Result<usize> {
    if u.degree() != v.degree() {
        return Err(Error::DegreeMismatch {
            left: u.degree(),
            right: v.degree(),
        });
    }
    Ok(u.degree())
}

/// Tableau criterion: `u <= v` iff for every prefix length `i` the sorted
/// prefix `{u(1..i)}` is entrywise below the sorted prefix `{v(1..i)}`.
///
/// Implemented in the equivalent counting form: for all `i` and `k`,
/// `#{j <= i : u(j) >= k} <= #{j <= i : v(j) >= k}`.
pub fn bruhat_leq(u: &Permutation, v: &Permutation) -> Result<bool> {
    let n = same_degree(u, v)?;
    let mut cu = [0u8; crate::perm::MAX_DEGREE + 2];
    let mut cv = [0u8; crate::perm::MAX_DEGREE + 2];
    for i in 0..n {
        let (x, y) = (u.word()[i] as usize, v.word()[i] as usize);
        for c in &mut cu[1..=x] {
            *c += 1;
        }
        for c in &mut cv[1..=y] {
            *c += 1;
        }
        if (1..=n).any(|k| cu[k] > cv[k]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Reachability in the Hasse diagram, read from a prebuilt order cache.
pub fn bruhat_leq_oracle(u: &Permutation, v: &Permutation, cache: &OrderCache) -> Result<bool> {
    same_degree(u, v)?;
    cache.leq_perm(u, v)
}

/// `u ⋖ w`: `u <= w` and `l(w) = l(u) + 1`.
pub fn is_cover(u: &Permutation, w: &Permutation) -> Result<bool> {
    same_degree(u, w)?;
    Ok(w.length() == u.length() + 1 && bruhat_leq(u, w)?)
}

/// Transpositions `t` with `u ⋖ ut`, found without computing lengths: `u(a) <
/// u(b)` and no position strictly between holds a value strictly between.
pub fn up_cover_labels(u: &Permutation) -> Vec<Transposition> {
    let w = u.word();
    let n = w.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if w[a] < w[b] && !w[a + 1..b].iter().any(|&x| w[a] < x && x < w[b]) {
                out.push(Transposition::new(a + 1, b + 1).unwrap());
            }
        }
    }
    out
}

/// Transpositions `t` with `vt ⋖ v`.
pub fn down_cover_labels(v: &Permutation) -> Vec<Transposition> {
    let w = v.word();
    let n = w.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if w[a] > w[b] && !w[a + 1..b].iter().any(|&x| w[b] < x && x < w[a]) {
                out.push(Transposition::new(a + 1, b + 1).unwrap());
            }
        }
    }
    out
}

/// A Bruhat interval `[u, v]`; construction fails unless `u <= v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Interval {
    u: Permutation,
    v: Permutation,
}

impl Interval {
    pub fn new(u: Permutation, v: Permutation) -> Result<Self> {
        if !bruhat_leq(&u, &v)? {
            return Err(Error::NotAnInterval {
                u: u.to_string(),
                v: v.to_string(),
            });
        }
        Ok(Interval { u, v })
    }

    /// Trusted constructor for pairs already known to be comparable.
    pub(crate) fn new_unchecked(u: Permutation, v: Permutation) -> Self {
        debug_assert!(bruhat_leq(&u, &v).unwrap());
        Interval { u, v }
    }

    pub fn bottom(&self) -> &Permutation {
        &self.u
    }

    pub fn top(&self) -> &Permutation {
        &self.v
    }

    pub fn degree(&self) -> usize {
        self.u.degree()
    }

    pub fn atom_labels(&self) -> CoverLabelSet {
        let labels = all_transpositions(self.degree())
            .unwrap()
            .into_iter()
            .filter(|&t| {
                let w = self.u.right_mul(t).unwrap();
                is_cover(&self.u, &w).unwrap() && bruhat_leq(&w, &self.v).unwrap()
            })
            .collect();
        CoverLabelSet {
            side: CoverSide::Atom,
            labels,
        }
    }

    pub fn coatom_labels(&self) -> CoverLabelSet {
        let labels = all_transpositions(self.degree())
            .unwrap()
            .into_iter()
            .filter(|&t| {
                let w = self.v.right_mul(t).unwrap();
                is_cover(&w, &self.v).unwrap() && bruhat_leq(&self.u, &w).unwrap()
            })
            .collect();
        CoverLabelSet {
            side: CoverSide::Coatom,
            labels,
        }
    }

    /// `a(I)`
    pub fn atom_count(&self) -> usize {
        self.atom_labels().len()
    }

    /// `c(I)`
    pub fn coatom_count(&self) -> usize {
        self.coatom_labels().len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverSide {
    Atom,
    Coatom,
}

impl CoverSide {
    pub fn as_str(self) -> &'static str {
        match self {
            CoverSide::Atom => "atom",
            CoverSide::Coatom => "coatom",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverLabelSet {
    pub side: CoverSide,
    pub labels: BTreeSet<Transposition>,
}

impl CoverLabelSet {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Transposition> + '_ {
        self.labels.iter().copied()
    }
}

pub fn atom_labels(interval: &Interval) -> CoverLabelSet {
    interval.atom_labels()
}

pub fn coatom_labels(interval: &Interval) -> CoverLabelSet {
    interval.coatom_labels()
}

pub fn atom_count(interval: &Interval) -> usize {
    interval.atom_count()
}

pub fn coatom_count(interval: &Interval) -> usize {
    interval.coatom_count()
}
