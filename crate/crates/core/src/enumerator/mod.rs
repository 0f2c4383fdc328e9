//! Exhaustive machinery: the full Bruhat order of `S_n` as a reachability
//! bitmatrix, interval scans, and the verification checks built on them.

mod bitmatrix;
mod cache_file;
mod scan;
mod verify;

pub use bitmatrix::BitMatrix;
pub use cache_file::{load_cache, save_cache, CACHE_MAGIC, CACHE_VERSION};
pub use scan::{
    count_intervals, fold_intervals, scan_max_gap, scan_with_profile, IntervalRecord, ProfileScan,
    ScanIndex, ScanResult,
};
pub use verify::{
    verify_corollary, verify_floor_lemma, verify_prop_2_1, verify_prop_2_9, verify_prop_4_10,
    verify_theorem_a, verify_theorem_b, Check, CheckReport, Prop410Mode, Verifier,
};

use crate::bruhat::up_cover_labels;
use crate::error::{Error, Result};
use crate::perm::{enumerate_sn, factorial, Permutation};

/// Default ceiling for exhaustive work; degree 8 needs explicit opt-in.
pub const DEFAULT_MAX_DEGREE: usize = 7;
pub const LARGE_MAX_DEGREE: usize = 8;

/// Bytes needed for the reachability bitmatrix of `S_n`.
pub fn bitmatrix_bytes(n: usize) -> Result<u64> {
    let size = factorial(n)? as u64;
    Ok(size * size.div_ceil(64) * 8)
}

/// Checks the degree against the exhaustive limits.
pub fn check_exhaustive_degree(n: usize, allow_large: bool) -> Result<()> {
    if !(2..=LARGE_MAX_DEGREE).contains(&n) {
        return Err(Error::Unsupported {
            n,
            reason: format!("exhaustive order supports 2 <= n <= {LARGE_MAX_DEGREE}"),
        });
    }
    if n > DEFAULT_MAX_DEGREE && !allow_large {
        return Err(Error::Unsupported {
            n,
            reason: format!(
                "needs {} bytes for the order bitmatrix; pass the allow-large flag",
                bitmatrix_bytes(n)?
            ),
        });
    }
    Ok(())
}

/// The Bruhat order of `S_n`, indexed by permutation rank.
///
/// `leq` row `r` is the up-set of `unrank(r)`: bit `c` is set iff
/// `unrank(r) <= unrank(c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderCache {
    n: usize,
    covers_up: Vec<Vec<u32>>,
    leq: BitMatrix,
}

impl OrderCache {
    pub(crate) fn from_parts(n: usize, covers_up: Vec<Vec<u32>>, leq: BitMatrix) -> Self {
        OrderCache { n, covers_up, leq }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// `n!`
    pub fn size(&self) -> usize {
        self.covers_up.len()
    }

    /// Ranks of the elements covering `unrank(rank)`, ascending.
    pub fn covers_up(&self, rank: u32) -> &[u32] {
        &self.covers_up[rank as usize]
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.leq
    }

    pub fn leq(&self, u: u32, v: u32) -> bool {
        self.leq.get(u as usize, v as usize)
    }

    pub fn leq_perm(&self, u: &Permutation, v: &Permutation) -> Result<bool> {
        for p in [u, v] {
            if p.degree() != self.n {
                return Err(Error::DegreeMismatch {
                    left: self.n,
                    right: p.degree(),
                });
            }
        }
        Ok(self.leq(u.rank().0, v.rank().0))
    }
}

/// Builds the order from the cover relations (found by the
/// no-intermediate-value criterion) followed by a transitive closure swept in
/// decreasing length.
pub fn build_order_cache(n: usize, allow_large: bool) -> Result<OrderCache> {
    check_exhaustive_degree(n, allow_large)?;
    let elements: Vec<Permutation> = enumerate_sn(n)?.collect();
    let size = elements.len();
    let mut leq = BitMatrix::try_new(size, size).map_err(|_| Error::Allocation {
        n,
        bytes: bitmatrix_bytes(n).unwrap_or(u64::MAX),
    })?;

    let covers_up: Vec<Vec<u32>> = elements
        .iter()
        .map(|u| {
            let mut up: Vec<u32> = up_cover_labels(u)
                .into_iter()
                .map(|t| u.right_mul(t).unwrap().rank().0)
                .collect();
            up.sort_unstable();
            up
        })
        .collect();

    let mut by_length: Vec<u32> = (0..size as u32).collect();
    let lengths: Vec<usize> = elements.iter().map(Permutation::length).collect();
    by_length.sort_by_key(|&r| std::cmp::Reverse(lengths[r as usize]));
    for &r in &by_length {
        let r = r as usize;
        leq.set(r, r);
        for &c in &covers_up[r] {
            leq.or_row_into(c as usize, r);
        }
    }
    Ok(OrderCache { n, covers_up, leq })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bruhat::{bruhat_leq, is_cover};

    fn rank(s: &str) -> u32 {
        s.parse::<Permutation>().unwrap().rank().0
    }

    #[test]
    fn s3_order() {
        let c = build_order_cache(3, false).unwrap();
        assert_eq!(c.size(), 6);
        assert!(c.leq(rank("123"), rank("321")));
        assert!(!c.leq(rank("213"), rank("132")));
        assert!(!c.leq(rank("132"), rank("213")));
        assert_eq!(c.matrix().row_count_ones(0), 6);
    }

    #[test]
    fn s4_matches_tableau_criterion() {
        let c = build_order_cache(4, false).unwrap();
        let all: Vec<_> = enumerate_sn(4).unwrap().collect();
        let mut pairs = 0;
        for (i, u) in all.iter().enumerate() {
            for (j, v) in all.iter().enumerate() {
                assert_eq!(c.leq(i as u32, j as u32), bruhat_leq(u, v).unwrap());
                pairs += 1;
            }
            for &w in c.covers_up(i as u32) {
                assert!(is_cover(u, &all[w as usize]).unwrap());
            }
        }
        assert_eq!(pairs, 576);
    }

    #[test]
    fn closure_is_reflexive_and_transitive() {
        let c = build_order_cache(5, false).unwrap();
        let size = c.size() as u32;
        assert_eq!(c.matrix().row_count_ones(0), size as usize);
        for a in 0..size {
            assert!(c.leq(a, a));
            for b in 0..size {
                if !c.leq(a, b) {
                    continue;
                }
                for d in 0..size {
                    if c.leq(b, d) {
                        assert!(c.leq(a, d));
                    }
                }
            }
        }
    }

    #[test]
    fn degree_limits() {
        assert!(build_order_cache(1, false).is_err());
        assert!(build_order_cache(9, true).is_err());
        let err = build_order_cache(8, false).unwrap_err();
        assert!(err.to_string().contains("allow-large"), "{err}");
        assert_eq!(bitmatrix_bytes(8).unwrap(), 40320 * 630 * 8);
        let c = build_order_cache(4, false).unwrap();
        let p = "12345".parse::<Permutation>().unwrap();
        assert!(c.leq_perm(&p, &p).is_err());
    }
}
