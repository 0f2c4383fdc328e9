//! Exhaustive and sampled checks of the extremal statements about atoms and
//! coatoms, each producing a machine-readable [`CheckReport`].

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use super::scan::{scan_with_profile, ProfileScan, ScanIndex};
use super::{build_order_cache, check_exhaustive_degree, count_intervals, OrderCache};
use crate::bruhat::Interval;
use crate::error::{Error, Result};
use crate::extremal::{
    f, floor_lemma_holds, is_opt_top, max_coatoms, opt_top_count, opt_top_permutations,
    theorem_a_value,
};
use crate::graphs::check_components_equal;
use crate::perm::{enumerate_sn, Permutation};

/// Largest `k` used by the floor-inequality check.
pub const LEMMA_RANGE: u64 = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Check {
    /// Largest gap equals `floor(n^2/4) - n + 1`.
    #[serde(rename = "a")]
    TheoremA,
    /// Maximizers are exactly the intervals with `c = floor(n^2/4)`, `a = n - 1`.
    #[serde(rename = "b")]
    TheoremB,
    /// Largest coatom count of a lower interval.
    #[serde(rename = "p21")]
    MaxCoatoms,
    /// Lower intervals attaining it are the block permutations.
    #[serde(rename = "p29")]
    MaxCoatomTops,
    /// Atom and coatom graphs share their components.
    #[serde(rename = "p410")]
    Components,
    /// Tops of maximizing intervals are block permutations.
    #[serde(rename = "corollary")]
    Corollary,
    /// Strict floor inequality for `k1, k2 >= 2`.
    #[serde(rename = "lemma")]
    Lemma,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::TheoremA,
        Check::TheoremB,
        Check::MaxCoatoms,
        Check::MaxCoatomTops,
        Check::Components,
        Check::Corollary,
        Check::Lemma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::TheoremA => "a",
            Check::TheoremB => "b",
            Check::MaxCoatoms => "p21",
            Check::MaxCoatomTops => "p29",
            Check::Components => "p410",
            Check::Corollary => "corollary",
            Check::Lemma => "lemma",
        }
    }

    /// Smallest degree the statement is made for.
    pub fn min_degree(self) -> usize {
        match self {
            Check::TheoremB | Check::Corollary => 4,
            Check::TheoremA | Check::MaxCoatomTops | Check::Components => 2,
            Check::MaxCoatoms | Check::Lemma => 1,
        }
    }

    fn needs_cache(self) -> bool {
        matches!(
            self,
            Check::TheoremA | Check::TheoremB | Check::Components | Check::Corollary
        )
    }

    /// Rejects degrees outside the statement's hypothesis or the supported range.
    pub fn validate_degree(self, n: usize, allow_large: bool) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidDegree(0));
        }
        if n < self.min_degree() {
            return Err(Error::Unsupported {
                n,
                reason: format!("check {} requires n >= {}", self.name(), self.min_degree()),
            });
        }
        match self {
            Check::Lemma => Ok(()),
            _ if self.needs_cache() => check_exhaustive_degree(n, allow_large),
            _ if n > super::LARGE_MAX_DEGREE => Err(Error::Unsupported {
                n,
                reason: format!("exhaustive checks support n <= {}", super::LARGE_MAX_DEGREE),
            }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown check {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: Check,
    pub n: usize,
    pub passed: bool,
    pub details: serde_json::Value,
    pub counterexample: Option<String>,
}

/// How intervals are chosen for the component check.
///
/// Sampling draws the top uniformly from `S_n`, then the bottom uniformly
/// from its down-set, using ChaCha8 seeded from the given `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prop410Mode {
    Exhaustive,
    Sample { count: u64, seed: u64 },
}

fn interval_text(u: &Permutation, v: &Permutation) -> String {
    format!("[{u}, {v}]")
}

/// Runs checks for one degree, building the order and the interval scan at
/// most once.
pub struct Verifier {
    n: usize,
    jobs: usize,
    allow_large: bool,
    cache: Option<OrderCache>,
    scan: Option<ProfileScan>,
    lower_coatoms: Option<Vec<(Permutation, u64)>>,
}

impl Verifier {
    pub fn new(n: usize, jobs: usize, allow_large: bool) -> Self {
        Verifier {
            n,
            jobs,
            allow_large,
            cache: None,
            scan: None,
            lower_coatoms: None,
        }
    }

    /// Uses a prebuilt (for instance, loaded) order cache.
    pub fn with_cache(cache: OrderCache, jobs: usize, allow_large: bool) -> Self {
        let mut v = Verifier::new(cache.degree(), jobs, allow_large);
        v.cache = Some(cache);
        v
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn cache(&mut self) -> Result<&OrderCache> {
        if self.cache.is_none() {
            self.cache = Some(build_order_cache(self.n, self.allow_large)?);
        }
        Ok(self.cache.as_ref().unwrap())
    }

    pub fn scan(&mut self) -> Result<&ProfileScan> {
        if self.scan.is_none() {
            let jobs = self.jobs;
            let cache = self.cache()?;
            let index = ScanIndex::new(cache)?;
            let scan = scan_with_profile(&index, jobs)?;
            self.scan = Some(scan);
        }
        Ok(self.scan.as_ref().unwrap())
    }

    fn lower_coatoms(&mut self) -> Result<&[(Permutation, u64)]> {
        if self.lower_coatoms.is_none() {
            let e = Permutation::identity(self.n)?;
            let counts = enumerate_sn(self.n)?
                .map(|v| {
                    let c = Interval::new_unchecked(e.clone(), v.clone()).coatom_count() as u64;
                    (v, c)
                })
                .collect();
            self.lower_coatoms = Some(counts);
        }
        Ok(self.lower_coatoms.as_deref().unwrap())
    }

    pub fn run(&mut self, check: Check, mode: Prop410Mode) -> Result<CheckReport> {
        check.validate_degree(self.n, self.allow_large)?;
        match check {
            Check::TheoremA => self.theorem_a(),
            Check::TheoremB => self.theorem_b(),
            Check::MaxCoatoms => self.prop_2_1(),
            Check::MaxCoatomTops => self.prop_2_9(),
            Check::Components => self.prop_4_10(mode),
            Check::Corollary => self.corollary(),
            Check::Lemma => Ok(verify_floor_lemma(LEMMA_RANGE)?.with_degree(self.n)),
        }
    }

    pub fn theorem_a(&mut self) -> Result<CheckReport> {
        Check::TheoremA.validate_degree(self.n, self.allow_large)?;
        let n = self.n;
        let expected = theorem_a_value(n)?;
        let by_popcount = count_intervals(self.cache()?);
        let scan = &self.scan()?.result;
        let histogram_total: u64 = scan.histogram.values().sum();
        let passed = scan.max_gap == expected
            && histogram_total == by_popcount
            && scan.intervals_scanned == by_popcount;
        let counterexample = if scan.max_gap > expected {
            scan.maximizing_intervals
                .first()
                .map(|(u, v)| format!("{} has gap {}", interval_text(u, v), scan.max_gap))
        } else if !passed {
            Some(format!(
                "largest gap {} (expected {expected}); {histogram_total} intervals scanned vs {by_popcount} comparable pairs",
                scan.max_gap
            ))
        } else {
            None
        };
        Ok(CheckReport {
            check: Check::TheoremA,
            n,
            passed,
            details: json!({
                "expected": expected,
                "max_gap": scan.max_gap,
                "witness_count": scan.maximizing_intervals.len(),
                "intervals_scanned": scan.intervals_scanned,
                "comparable_pairs": by_popcount,
            }),
            counterexample,
        })
    }

    pub fn theorem_b(&mut self) -> Result<CheckReport> {
        Check::TheoremB.validate_degree(self.n, self.allow_large)?;
        let n = self.n;
        let scan = self.scan()?;
        let witnesses: BTreeSet<_> = scan.result.maximizing_intervals.iter().cloned().collect();
        let profile: BTreeSet<_> = scan.profile.iter().cloned().collect();
        let not_profiled = witnesses.difference(&profile).next();
        let not_maximal = profile.difference(&witnesses).next();
        let counterexample = match (not_profiled, not_maximal) {
            (Some((u, v)), _) => Some(format!(
                "{} maximizes the gap without c = floor(n^2/4) and a = n - 1",
                interval_text(u, v)
            )),
            (None, Some((u, v))) => Some(format!(
                "{} has c = floor(n^2/4) and a = n - 1 but does not maximize the gap",
                interval_text(u, v)
            )),
            _ => None,
        };
        Ok(CheckReport {
            check: Check::TheoremB,
            n,
            passed: counterexample.is_none(),
            details: json!({
                "max_gap": scan.result.max_gap,
                "maximizers": witnesses.len(),
                "profile_matches": profile.len(),
                "coatoms": max_coatoms(n)?,
                "atoms": n - 1,
            }),
            counterexample,
        })
    }

    pub fn prop_2_1(&mut self) -> Result<CheckReport> {
        Check::MaxCoatoms.validate_degree(self.n, self.allow_large)?;
        let n = self.n;
        let expected = max_coatoms(n)?;
        let counts = self.lower_coatoms()?;
        let (arg, observed) = counts
            .iter()
            .max_by_key(|(v, c)| (*c, std::cmp::Reverse(v.clone())))
            .map(|(v, c)| (v.clone(), *c))
            .expect("S_n is nonempty");
        let passed = observed == expected;
        Ok(CheckReport {
            check: Check::MaxCoatoms,
            n,
            passed,
            details: json!({ "expected": expected, "observed": observed, "first_maximizer": arg }),
            counterexample: (!passed).then(|| format!("[e, {arg}] has {observed} coatoms")),
        })
    }

    pub fn prop_2_9(&mut self) -> Result<CheckReport> {
        Check::MaxCoatomTops.validate_degree(self.n, self.allow_large)?;
        let n = self.n;
        let target = max_coatoms(n)?;
        let found: BTreeSet<Permutation> = self
            .lower_coatoms()?
            .iter()
            .filter(|(_, c)| *c == target)
            .map(|(v, _)| v.clone())
            .collect();
        let generated = opt_top_permutations(n)?;
        let expected_count = opt_top_count(n);
        let counterexample = if let Some(v) = found.difference(&generated).next() {
            Some(format!(
                "[e, {v}] has {target} coatoms but is not a block permutation"
            ))
        } else if let Some(v) = generated.difference(&found).next() {
            Some(format!(
                "block permutation {v} has fewer than {target} coatoms"
            ))
        } else if found.len() != expected_count {
            Some(format!(
                "{} maximizers, expected {expected_count}",
                found.len()
            ))
        } else {
            None
        };
        Ok(CheckReport {
            check: Check::MaxCoatomTops,
            n,
            passed: counterexample.is_none(),
            details: json!({
                "maximizers": found,
                "count": found.len(),
                "expected_count": expected_count,
            }),
            counterexample,
        })
    }

    pub fn prop_4_10(&mut self, mode: Prop410Mode) -> Result<CheckReport> {
        Check::Components.validate_degree(self.n, self.allow_large)?;
        let n = self.n;
        let cache = self.cache()?;
        let index = ScanIndex::new(cache)?;
        let mut checked = 0u64;
        let mut counterexample = None;
        let mut check_pair = |u: u32, v: u32| {
            let (up, vp) = (index.element(u), index.element(v));
            checked += 1;
            let i = Interval::new_unchecked(up.clone(), vp.clone());
            if counterexample.is_none() && !check_components_equal(&i) {
                counterexample = Some(interval_text(up, vp));
            }
        };
        let mode_json = match mode {
            Prop410Mode::Exhaustive => {
                for v in 0..cache.size() as u32 {
                    for u in index.down_set(v) {
                        check_pair(u, v);
                    }
                }
                json!("exhaustive")
            }
            Prop410Mode::Sample { count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..count {
                    let v = rng.random_range(0..cache.size() as u32);
                    let k = rng.random_range(0..index.down_set_size(v));
                    let u = index.down_set(v).nth(k).expect("k below down-set size");
                    check_pair(u, v);
                }
                json!({ "sample": count, "seed": seed, "rng": "ChaCha8" })
            }
        };
        Ok(CheckReport {
            check: Check::Components,
            n,
            passed: counterexample.is_none(),
            details: json!({ "mode": mode_json, "intervals_checked": checked }),
            counterexample,
        })
    }

    pub fn corollary(&mut self) -> Result<CheckReport> {
        Check::Corollary.validate_degree(self.n, self.allow_large)?;
        let n = self.n;
        let scan = self.scan()?;
        let tops: BTreeSet<&Permutation> = scan
            .result
            .maximizing_intervals
            .iter()
            .map(|(_, v)| v)
            .collect();
        let bad = tops.iter().find(|v| !is_opt_top(v));
        Ok(CheckReport {
            check: Check::Corollary,
            n,
            passed: bad.is_none(),
            details: json!({ "tops": tops }),
            counterexample: bad.map(|v| format!("maximizing top {v} is not a block permutation")),
        })
    }
}

impl CheckReport {
    fn with_degree(mut self, n: usize) -> Self {
        self.n = n;
        self
    }
}

/// The strict floor inequality, and `f(k1 + k2) > f(k1) + f(k2)`, on
/// `2 <= k1, k2 <= max_k`.
pub fn verify_floor_lemma(max_k: u64) -> Result<CheckReport> {
    let mut pairs = 0u64;
    let mut counterexample = None;
    for k1 in 2..=max_k {
        for k2 in 2..=max_k {
            pairs += 1;
            let ok = floor_lemma_holds(k1, k2)? && f(k1 + k2)? > f(k1)? + f(k2)?;
            if !ok && counterexample.is_none() {
                counterexample = Some(format!("k1 = {k1}, k2 = {k2}"));
            }
        }
    }
    Ok(CheckReport {
        check: Check::Lemma,
        n: 0,
        passed: counterexample.is_none(),
        details: json!({ "range": [2, max_k], "pairs": pairs }),
        counterexample,
    })
}

pub fn verify_theorem_a(n: usize, jobs: usize) -> Result<CheckReport> {
    Verifier::new(n, jobs, false).theorem_a()
}

pub fn verify_theorem_b(n: usize, jobs: usize) -> Result<CheckReport> {
    Verifier::new(n, jobs, false).theorem_b()
}

pub fn verify_prop_2_1(n: usize) -> Result<CheckReport> {
    Verifier::new(n, 1, false).prop_2_1()
}

pub fn verify_prop_2_9(n: usize) -> Result<CheckReport> {
    Verifier::new(n, 1, false).prop_2_9()
}

pub fn verify_prop_4_10(n: usize, mode: Prop410Mode) -> Result<CheckReport> {
    Verifier::new(n, 1, false).prop_4_10(mode)
}

pub fn verify_corollary(n: usize, jobs: usize) -> Result<CheckReport> {
    Verifier::new(n, jobs, false).corollary()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s4_checks_pass() {
        let mut v = Verifier::new(4, 2, false);
        for check in Check::ALL {
            let r = v.run(check, Prop410Mode::Exhaustive).unwrap();
            assert!(r.passed, "{check}: {r:?}");
        }
        let b = v.theorem_b().unwrap();
        assert_eq!(b.details["maximizers"], 4);
        assert_eq!(b.details["profile_matches"], 4);
        let p29 = v.prop_2_9().unwrap();
        assert_eq!(p29.details["maximizers"], json!(["3412", "4231"]));
    }

    #[test]
    fn hypotheses_are_enforced() {
        assert!(matches!(
            verify_theorem_b(3, 1),
            Err(Error::Unsupported { n: 3, .. })
        ));
        assert!(matches!(
            verify_corollary(3, 1),
            Err(Error::Unsupported { n: 3, .. })
        ));
        assert!(verify_prop_2_9(1).is_err());
        assert!(Check::Lemma.validate_degree(0, false).is_err());
        assert!(Check::TheoremA.validate_degree(8, false).is_err());
        assert!(Check::TheoremA.validate_degree(8, true).is_ok());
        let err = Check::TheoremB.validate_degree(3, false).unwrap_err();
        assert!(err.to_string().contains("n >= 4"), "{err}");
    }

    #[test]
    fn small_degrees() {
        assert!(verify_prop_4_10(2, Prop410Mode::Exhaustive).unwrap().passed);
        assert_eq!(
            verify_prop_4_10(2, Prop410Mode::Exhaustive)
                .unwrap()
                .details["intervals_checked"],
            3
        );
        assert!(verify_prop_2_1(1).unwrap().passed);
        let r = verify_prop_2_1(5).unwrap();
        assert!(r.passed);
        assert_eq!(r.details["observed"], 6);
        assert_eq!(verify_prop_2_9(5).unwrap().details["count"], 5);
    }

    #[test]
    fn sampling_is_reproducible() {
        let mode = Prop410Mode::Sample {
            count: 500,
            seed: 7,
        };
        let a = verify_prop_4_10(5, mode).unwrap();
        let b = verify_prop_4_10(5, mode).unwrap();
        assert!(a.passed);
        assert_eq!(a, b);
    }

    #[test]
    fn check_names_round_trip() {
        for c in Check::ALL {
            assert_eq!(c.name().parse::<Check>().unwrap(), c);
            assert_eq!(serde_json::to_value(c).unwrap(), json!(c.name()));
        }
        assert!("x".parse::<Check>().is_err());
    }
}
