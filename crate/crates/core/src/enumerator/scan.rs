use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::{BitMatrix, OrderCache};
use crate::error::{Error, Result};
use crate::extremal::max_coatoms;
use crate::perm::{enumerate_sn, Permutation, Transposition};

/// Number of consecutive tops handed to a worker at a time.
const STRIPE: usize = 16;

/// Derived lookup tables for scanning intervals: labeled covers in both
/// directions and the down-set of every element.
pub struct ScanIndex<'a> {
    cache: &'a OrderCache,
    elements: Vec<Permutation>,
    /// `(transposition index, rank of ut)` for each `u ⋖ ut`.
    up: Vec<Vec<(u8, u32)>>,
    /// `(transposition index, rank of vt)` for each `vt ⋖ v`.
    down: Vec<Vec<(u8, u32)>>,
    /// Row `v` holds `{u : u <= v}`.
    below: BitMatrix,
}

fn label_between(n: usize, x: &Permutation, y: &Permutation) -> u8 {
    let mut diff = (0..n).filter(|&i| x.word()[i] != y.word()[i]);
    let a = diff.next().expect("distinct elements");
    let b = diff.next().expect("covers differ by a transposition");
    Transposition::new(a + 1, b + 1).unwrap().index(n) as u8
}

impl<'a> ScanIndex<'a> {
    pub fn new(cache: &'a OrderCache) -> Result<Self> {
        let n = cache.degree();
        let size = cache.size();
        let elements: Vec<Permutation> = enumerate_sn(n)?.collect();
        let mut up = Vec::with_capacity(size);
        let mut down: Vec<Vec<(u8, u32)>> = vec![Vec::new(); size];
        for (r, u) in elements.iter().enumerate() {
            let labeled: Vec<(u8, u32)> = cache
                .covers_up(r as u32)
                .iter()
                .map(|&c| (label_between(n, u, &elements[c as usize]), c))
                .collect();
            for &(t, c) in &labeled {
                down[c as usize].push((t, r as u32));
            }
            up.push(labeled);
        }

        let mut below = BitMatrix::try_new(size, size).map_err(|_| Error::Allocation {
            n,
            bytes: super::bitmatrix_bytes(n).unwrap_or(u64::MAX),
        })?;
        let mut by_length: Vec<usize> = (0..size).collect();
        let lengths: Vec<usize> = elements.iter().map(Permutation::length).collect();
        by_length.sort_by_key(|&r| lengths[r]);
        for &v in &by_length {
            below.set(v, v);
            for &(_, w) in &down[v] {
                below.or_row_into(w as usize, v);
            }
        }
        Ok(ScanIndex {
            cache,
            elements,
            up,
            down,
            below,
        })
    }

    pub fn cache(&self) -> &OrderCache {
        self.cache
    }

    pub fn degree(&self) -> usize {
        self.cache.degree()
    }

    pub fn element(&self, rank: u32) -> &Permutation {
        &self.elements[rank as usize]
    }

    pub fn down_set(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.below.iter_row(v as usize).map(|u| u as u32)
    }

    pub fn down_set_size(&self, v: u32) -> usize {
        self.below.row_count_ones(v as usize)
    }

    /// Atom and coatom label masks of `[u, v]`; bit `i` stands for the
    /// transposition with index `i`.
    pub fn record(&self, u: u32, v: u32) -> IntervalRecord {
        let (ur, vr) = (u as usize, v as usize);
        let mut coatoms = 0u64;
        for &(t, w) in &self.down[vr] {
            if self.cache.leq(u, w) {
                coatoms |= 1 << t;
            }
        }
        let mut atoms = 0u64;
        for &(t, x) in &self.up[ur] {
            if self.below.get(vr, x as usize) {
                atoms |= 1 << t;
            }
        }
        IntervalRecord {
            u,
            v,
            atoms,
            coatoms,
        }
    }
}

/// One interval seen by a scan, with its labels as transposition-index masks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntervalRecord {
    pub u: u32,
    pub v: u32,
    pub atoms: u64,
    pub coatoms: u64,
}

impl IntervalRecord {
    pub fn atom_count(&self) -> u32 {
        self.atoms.count_ones()
    }

    pub fn coatom_count(&self) -> u32 {
        self.coatoms.count_ones()
    }

    pub fn gap(&self) -> i64 {
        self.coatom_count() as i64 - self.atom_count() as i64
    }
}

/// Visits every interval `[u, v]` with `v` striped across `jobs` workers.
///
/// Partial results are merged in stripe order, so the outcome does not depend
/// on `jobs` as long as `merge` is associative.
pub fn fold_intervals<A, M, V, G>(
    index: &ScanIndex<'_>,
    jobs: usize,
    make: M,
    visit: V,
    merge: G,
) -> Result<A>
where
    A: Send,
    M: Fn() -> A + Sync,
    V: Fn(&mut A, &IntervalRecord) + Sync,
    G: Fn(A, A) -> A,
{
    if jobs == 0 {
        return Err(Error::ThreadPool("jobs must be at least 1".into()));
    }
    let size = index.cache.size();
    let stripes = size.div_ceil(STRIPE);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::ThreadPool(e.to_string()))?;
    let partials: Vec<A> = pool.install(|| {
        (0..stripes)
            .into_par_iter()
            .map(|s| {
                let mut acc = make();
                for v in s * STRIPE..((s + 1) * STRIPE).min(size) {
                    for u in index.down_set(v as u32) {
                        visit(&mut acc, &index.record(u, v as u32));
                    }
                }
                acc
            })
            .collect()
    });
    Ok(partials.into_iter().fold(make(), merge))
}

fn histogram_as_pairs<S: Serializer>(
    h: &BTreeMap<i64, u64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(h.iter().map(|(g, c)| [*g, *c as i64]))
}

/// Outcome of scanning every interval of `S_n` for the largest `c(I) - a(I)`.
///
/// Witnesses are ordered by `(rank(u), rank(v))`.
#[derive(Clone, Debug, Serialize)]
pub struct ScanResult {
    pub n: usize,
    pub max_gap: i64,
    pub maximizing_intervals: Vec<(Permutation, Permutation)>,
    /// Gap value to number of intervals; serialized as ascending `[gap, count]` pairs.
    #[serde(serialize_with = "histogram_as_pairs")]
    pub histogram: BTreeMap<i64, u64>,
    pub intervals_scanned: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl ScanResult {
    /// Everything except timing.
    pub fn same_outcome(&self, other: &ScanResult) -> bool {
        self.n == other.n
            && self.max_gap == other.max_gap
            && self.maximizing_intervals == other.maximizing_intervals
            && self.histogram == other.histogram
            && self.intervals_scanned == other.intervals_scanned
    }
}

/// A scan together with the intervals having `c(I) = floor(n^2/4)` and
/// `a(I) = n - 1`.
#[derive(Clone, Debug)]
pub struct ProfileScan {
    pub result: ScanResult,
    pub profile: Vec<(Permutation, Permutation)>,
}

#[derive(Default)]
struct GapAccumulator {
    histogram: BTreeMap<i64, u64>,
    max_gap: Option<i64>,
    witnesses: Vec<(u32, u32)>,
    profile: Vec<(u32, u32)>,
    intervals: u64,
}

impl GapAccumulator {
    fn merge(mut self, other: GapAccumulator) -> GapAccumulator {
        for (g, c) in other.histogram {
            *self.histogram.entry(g).or_default() += c;
        }
        match (self.max_gap, other.max_gap) {
            (_, None) => {}
            (None, Some(_)) => {
                self.max_gap = other.max_gap;
                self.witnesses = other.witnesses;
            }
            (Some(a), Some(b)) if b > a => {
                self.max_gap = Some(b);
                self.witnesses = other.witnesses;
            }
            (Some(a), Some(b)) if b == a => self.witnesses.extend(other.witnesses),
            _ => {}
        }
        self.profile.extend(other.profile);
        self.intervals += other.intervals;
        self
    }
}

pub fn scan_with_profile(index: &ScanIndex<'_>, jobs: usize) -> Result<ProfileScan> {
    let start = Instant::now();
    let n = index.degree();
    let top_coatoms = max_coatoms(n)? as u32;
    let acc = fold_intervals(
        index,
        jobs,
        GapAccumulator::default,
        |acc, rec| {
            let gap = rec.gap();
            *acc.histogram.entry(gap).or_default() += 1;
            acc.intervals += 1;
            match acc.max_gap {
                Some(m) if gap < m => {}
                Some(m) if gap == m => acc.witnesses.push((rec.u, rec.v)),
                _ => {
                    acc.max_gap = Some(gap);
                    acc.witnesses = vec![(rec.u, rec.v)];
                }
            }
            if rec.coatom_count() == top_coatoms && rec.atom_count() as usize == n - 1 {
                acc.profile.push((rec.u, rec.v));
            }
        },
        GapAccumulator::merge,
    )?;
    let to_perms = |mut pairs: Vec<(u32, u32)>| -> Vec<(Permutation, Permutation)> {
        pairs.sort_unstable();
        pairs
            .into_iter()
            .map(|(u, v)| (index.element(u).clone(), index.element(v).clone()))
            .collect()
    };
    let result = ScanResult {
        n,
        max_gap: acc.max_gap.expect("S_n has at least one interval"),
        maximizing_intervals: to_perms(acc.witnesses),
        histogram: acc.histogram,
        intervals_scanned: acc.intervals,
        elapsed: start.elapsed(),
    };
    Ok(ProfileScan {
        result,
        profile: to_perms(acc.profile),
    })
}

/// Largest `c(I) - a(I)` over all intervals of `S_n`, with every witness.
pub fn scan_max_gap(cache: &OrderCache, jobs: usize) -> Result<ScanResult> {
    let start = Instant::now();
    let index = ScanIndex::new(cache)?;
    let mut result = scan_with_profile(&index, jobs)?.result;
    result.elapsed = start.elapsed();
    Ok(result)
}

/// `#{(u, v) : u <= v}` read directly off the bitmatrix.
pub fn count_intervals(cache: &OrderCache) -> u64 {
    cache.matrix().count_ones()
}
