//! Closed-form extremal quantities for atoms and coatoms of intervals in `S_n`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::bruhat::Interval;
use crate::error::{Error, Result};
use crate::graphs::common_partition;
use crate::perm::{Permutation, MAX_DEGREE};

/// `floor(x^2 / 4)` with overflow-checked squaring.
pub fn floor_quarter_square(x: u64) -> Result<u64> {
    x.checked_mul(x)
        .map(|sq| sq / 4)
        .ok_or_else(|| Error::Overflow(format!("{x}^2")))
}

fn positive(what: &'static str, x: u64) -> Result<()> {
    if x == 0 {
        return Err(Error::Domain {
            what,
            value: 0,
            requirement: "x >= 1",
        });
    }
    Ok(())
}

/// The gap function `floor(x^2/4) - x + 1`.
pub fn f(x: u64) -> Result<i64> {
    positive("f", x)?;
    let q = floor_quarter_square(x)?;
    i64::try_from(q)
        .ok()
        .and_then(|q| q.checked_sub(x as i64 - 1))
        .ok_or_else(|| Error::Overflow(format!("f({x})")))
}

/// Forward difference `f(x+1) - f(x)`, in closed form.
pub fn f_delta(x: u64) -> Result<i64> {
    positive("f_delta", x)?;
    let x = x as i64;
    Ok(if x % 2 == 0 {
        x / 2 - 1
    } else {
        (x + 1) / 2 - 1
    })
}

/// `floor(k1^2/4) + floor(k2^2/4) + 1 < floor((k1+k2)^2/4)` for `k1, k2 >= 2`.
pub fn floor_lemma_holds(k1: u64, k2: u64) -> Result<bool> {
    for k in [k1, k2] {
        if k < 2 {
            return Err(Error::Domain {
                what: "floor_lemma_holds",
                value: k as i64,
                requirement: "k1, k2 >= 2",
            });
        }
    }
    let sum = k1
        .checked_add(k2)
        .ok_or_else(|| Error::Overflow(format!("{k1} + {k2}")))?;
    let lhs = floor_quarter_square(k1)? + floor_quarter_square(k2)? + 1;
    Ok(lhs < floor_quarter_square(sum)?)
}

/// Largest number of coatoms of a lower interval `[e, v]` in `S_n`.
pub fn max_coatoms(n: usize) -> Result<u64> {
    positive("max_coatoms", n as u64)?;
    floor_quarter_square(n as u64)
}

/// Largest value of `c(I) - a(I)` over intervals of `S_n`.
pub fn theorem_a_value(n: usize) -> Result<i64> {
    f(n as u64)
}

/// Parameters of the block permutation
/// `[t+m+1, ..., n, t+1, ..., t+m, 1, ..., t]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct OptTopSpec {
    pub n: usize,
    pub m: usize,
    pub t: usize,
}

impl OptTopSpec {
    pub fn new(n: usize, m: usize, t: usize) -> Result<Self> {
        if !(2..=MAX_DEGREE).contains(&n) {
            return Err(Error::InvalidDegree(n));
        }
        if m != n / 2 && m != n.div_ceil(2) {
            return Err(Error::Domain {
                what: "OptTopSpec::m",
                value: m as i64,
                requirement: "m in {floor(n/2), ceil(n/2)}",
            });
        }
        if t < 1 || t > n - m {
            return Err(Error::Domain {
                what: "OptTopSpec::t",
                value: t as i64,
                requirement: "1 <= t <= n - m",
            });
        }
        Ok(OptTopSpec { n, m, t })
    }

    pub fn permutation(&self) -> Permutation {
        let (n, m, t) = (self.n as u8, self.m as u8, self.t as u8);
        let word: Vec<u8> = (t + m + 1..=n).chain(t + 1..=t + m).chain(1..=t).collect();
        Permutation::new(word).expect("block form is a permutation")
    }
}

/// Every `(m, t)` admitted for degree `n`; for even `n` both `m` choices
/// coincide and are listed once.
pub fn opt_top_specs(n: usize) -> Result<Vec<OptTopSpec>> {
    if !(2..=MAX_DEGREE).contains(&n) {
        return Err(Error::InvalidDegree(n));
    }
    let ms: BTreeSet<usize> = [n / 2, n.div_ceil(2)].into();
    let mut out = Vec::new();
    for m in ms {
        for t in 1..=n - m {
            out.push(OptTopSpec { n, m, t });
        }
    }
    Ok(out)
}

/// Top elements with `floor(n^2/4)` coatoms, each with the `(m, t)` pairs
/// that generate it.
pub fn opt_top_with_provenance(n: usize) -> Result<BTreeMap<Permutation, Vec<OptTopSpec>>> {
    let mut out: BTreeMap<Permutation, Vec<OptTopSpec>> = BTreeMap::new();
    for spec in opt_top_specs(n)? {
        out.entry(spec.permutation()).or_default().push(spec);
    }
    Ok(out)
}

/// The block permutations, deduplicated, in rank order.
pub fn opt_top_permutations(n: usize) -> Result<BTreeSet<Permutation>> {
    Ok(opt_top_with_provenance(n)?.into_keys().collect())
}

/// Expected number of block permutations: `n` for odd `n`, `n/2` for even `n`.
pub fn opt_top_count(n: usize) -> usize {
    if n % 2 == 1 {
        n
    } else {
        n / 2
    }
}

pub fn is_opt_top(v: &Permutation) -> bool {
    let n = v.degree();
    n >= 2
        && opt_top_specs(n)
            .unwrap()
            .iter()
            .any(|s| s.permutation() == *v)
}

/// Per-interval comparison of the actual atom/coatom counts against the
/// component bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapBoundReport {
    pub u: Permutation,
    pub v: Permutation,
    /// Component sizes `k_i`, descending.
    pub component_sizes: Vec<usize>,
    /// `sum floor(k_i^2/4)`
    pub coatom_bound: u64,
    /// `sum (k_i - 1)`
    pub atom_bound: u64,
    pub atom_count: u64,
    pub coatom_count: u64,
    pub gap: i64,
    pub coatom_slack: i64,
    pub atom_slack: i64,
    /// Number of singleton components.
    pub singletons: usize,
    /// `sum f(k_i)`
    pub f_sum: i64,
    /// `f(n - q)`, taken as 0 when every component is a singleton.
    pub f_reduced: i64,
    pub f_n: i64,
}

impl GapBoundReport {
    /// Descriptions of every violated link in
    /// `c <= bound`, `a >= bound`, `c - a <= sum f(k_i) <= f(n-q) <= f(n)`.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.coatom_count > self.coatom_bound {
            out.push(format!("c = {} > {}", self.coatom_count, self.coatom_bound));
        }
        if self.atom_count < self.atom_bound {
            out.push(format!("a = {} < {}", self.atom_count, self.atom_bound));
        }
        if self.gap > self.f_sum {
            out.push(format!("gap {} > sum f(k_i) = {}", self.gap, self.f_sum));
        }
        if self.f_sum > self.f_reduced {
            out.push(format!(
                "sum f(k_i) = {} > f(n-q) = {}",
                self.f_sum, self.f_reduced
            ));
        }
        if self.f_reduced > self.f_n {
            out.push(format!("f(n-q) = {} > f(n) = {}", self.f_reduced, self.f_n));
        }
        out
    }
}

pub fn gap_bound_report(interval: &Interval) -> Result<GapBoundReport> {
    let n = interval.degree();
    let partition = common_partition(interval)?;
    let mut sizes = partition.block_sizes();
    sizes.sort_unstable_by(|a, b| b.cmp(a));

    let mut coatom_bound = 0u64;
    let mut atom_bound = 0u64;
    let mut f_sum = 0i64;
    for &k in &sizes {
        coatom_bound += floor_quarter_square(k as u64)?;
        atom_bound += k as u64 - 1;
        f_sum += f(k as u64)?;
    }
    let singletons = partition.singleton_count();
    let f_reduced = if singletons == n {
        0
    } else {
        f((n - singletons) as u64)?
    };
    let atom_count = interval.atom_count() as u64;
    let coatom_count = interval.coatom_count() as u64;
    let report = GapBoundReport {
        u: interval.bottom().clone(),
        v: interval.top().clone(),
        component_sizes: sizes,
        coatom_bound,
        atom_bound,
        atom_count,
        coatom_count,
        gap: coatom_count as i64 - atom_count as i64,
        coatom_slack: coatom_bound as i64 - coatom_count as i64,
        atom_slack: atom_count as i64 - atom_bound as i64,
        singletons,
        f_sum,
        f_reduced,
        f_n: f(n as u64)?,
    };
    let violations = report.violations();
    if !violations.is_empty() {
        return Err(Error::BoundChain {
            u: report.u.to_string(),
            v: report.v.to_string(),
            detail: violations.join("; "),
        });
    }
    Ok(report)
}
