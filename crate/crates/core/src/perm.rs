//! Permutations of `{1..n}` in one-line notation.
//!
//! Positions and values are 1-indexed. Composition is `(vw)(i) = v(w(i))`, so
//! right multiplication by the transposition `(a b)` exchanges the entries in
//! word positions `a` and `b`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported degree; `12!` is the largest factorial that fits a `u32`.
pub const MAX_DEGREE: usize = 12;

fn check_degree(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DEGREE {
        return Err(Error::InvalidDegree(n));
    }
    Ok(())
}

/// `n!` as a `u32`, or an overflow error.
pub fn factorial(n: usize) -> Result<u32> {
    (1..=n as u32).try_fold(1u32, |acc, k| {
        acc.checked_mul(k).ok_or(Error::FactorialOverflow(n))
    })
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    word: Vec<u8>,
}

impl Permutation {
    /// Builds a permutation from its one-line word, checking that it is a
    /// bijection of `{1..n}`.
    pub fn new(word: Vec<u8>) -> Result<Self> {
        check_degree(word.len())?;
        let mut seen = [false; MAX_DEGREE + 1];
        for &x in &word {
            let x = x as usize;
            if x == 0 || x > word.len() || seen[x] {
                return Err(Error::NotAPermutation(format!("{word:?}")));
            }
            seen[x] = true;
        }
        Ok(Permutation { word })
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_degree(n)?;
        Ok(Permutation {
            word: (1..=n as u8).collect(),
        })
    }

    /// The longest element `w0 = n (n-1) ... 1`.
    pub fn longest(n: usize) -> Result<Self> {
        check_degree(n)?;
        Ok(Permutation {
            word: (1..=n as u8).rev().collect(),
        })
    }

    pub fn degree(&self) -> usize {
        self.word.len()
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    /// `v(i)` for a 1-indexed position `i`.
    pub fn at(&self, i: usize) -> u8 {
        self.word[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.word
            .iter()
            .enumerate()
            .all(|(i, &x)| x as usize == i + 1)
    }

    /// Number of inversions, i.e. the Coxeter length.
    pub fn length(&self) -> usize {
        let w = &self.word;
        let mut count = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// The product `self * t`.
    pub fn right_mul(&self, t: Transposition) -> Result<Self> {
        if t.b() as usize > self.degree() {
            return Err(Error::TranspositionOutOfRange {
                a: t.a(),
                b: t.b(),
                n: self.degree(),
            });
        }
        let mut word = self.word.clone();
        word.swap(t.a() as usize - 1, t.b() as usize - 1);
        Ok(Permutation { word })
    }

    pub fn inverse(&self) -> Self {
        let mut word = vec![0u8; self.word.len()];
        for (i, &x) in self.word.iter().enumerate() {
            word[x as usize - 1] = i as u8 + 1;
        }
        Permutation { word }
    }

    /// The product `self * other`, i.e. `i -> self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(Permutation {
            word: other
                .word
                .iter()
                .map(|&x| self.word[x as usize - 1])
                .collect(),
        })
    }

    /// Lexicographic rank via the Lehmer code.
    pub fn rank(&self) -> PermRank {
        let n = self.word.len();
        let mut value = 0u32;
        for i in 0..n {
            let smaller_after = self.word[i + 1..]
                .iter()
                .filter(|&&x| x < self.word[i])
                .count() as u32;
            // n <= 12 so the partial factorials are in range
            value += smaller_after * factorial(n - 1 - i).expect("degree checked");
        }
        PermRank(value)
    }

    pub fn unrank(rank: PermRank, n: usize) -> Result<Self> {
        check_degree(n)?;
        let total = factorial(n)?;
        if rank.0 >= total {
            return Err(Error::RankOutOfRange {
                rank: rank.0 as u64,
                n,
            });
        }
        let mut pool: Vec<u8> = (1..=n as u8).collect();
        let mut rest = rank.0;
        let mut word = Vec::with_capacity(n);
        for i in 0..n {
            let f = factorial(n - 1 - i)?;
            let idx = (rest / f) as usize;
            rest %= f;
            word.push(pool.remove(idx));
        }
        Ok(Permutation { word })
    }

    /// Comma-separated form, accepted for every degree.
    pub fn to_comma_string(&self) -> String {
        let parts: Vec<String> = self.word.iter().map(|x| x.to_string()).collect();
        parts.join(",")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() <= 9 {
            for &x in &self.word {
                write!(f, "{x}")?;
            }
            Ok(())
        } else {
            f.write_str(&self.to_comma_string())
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let text = s.trim();
        let parse_err = |reason: &str| Error::Parse {
            text: s.to_string(),
            reason: reason.to_string(),
        };
        let word: Vec<u8> = if text.contains(',') {
            text.split(',')
                .map(|p| p.trim().parse::<u8>().map_err(|_| parse_err("bad entry")))
                .collect::<Result<_>>()?
        } else {
            text.chars()
                .map(|c| match c.to_digit(10) {
                    Some(d) if d > 0 => Ok(d as u8),
                    _ => Err(parse_err("compact form takes digits 1-9")),
                })
                .collect::<Result<_>>()?
        };
        if word.is_empty() {
            return Err(parse_err("empty"));
        }
        Permutation::new(word)
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// The transposition `(a b)` with `1 <= a < b`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(into = "[u8; 2]", try_from = "[u8; 2]")]
pub struct Transposition {
    a: u8,
    b: u8,
}

impl Transposition {
    /// Accepts the pair in either order.
    pub fn new(a: usize, b: usize) -> Result<Self> {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        if lo == 0 || lo == hi || hi > MAX_DEGREE {
            return Err(Error::InvalidTransposition { a, b });
        }
        Ok(Transposition {
            a: lo as u8,
            b: hi as u8,
        })
    }

    pub fn a(self) -> u8 {
        self.a
    }

    pub fn b(self) -> u8 {
        self.b
    }

    /// Position of this transposition in [`all_transpositions`] for degree `n`.
    pub fn index(self, n: usize) -> usize {
        let a = self.a as usize - 1;
        let b = self.b as usize - 1;
        // pairs (a, *) precede pairs (a+1, *)
        a * (2 * n - a - 1) / 2 + (b - a - 1)
    }

    pub fn as_permutation(self, n: usize) -> Result<Permutation> {
        Permutation::identity(n)?.right_mul(self)
    }
}

impl From<Transposition> for [u8; 2] {
    fn from(t: Transposition) -> Self {
        [t.a, t.b]
    }
}

impl TryFrom<[u8; 2]> for Transposition {
    type Error = Error;

    fn try_from(p: [u8; 2]) -> Result<Self> {
        Transposition::new(p[0] as usize, p[1] as usize)
    }
}

impl fmt::Display for Transposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {})", self.a, self.b)
    }
}

/// Lexicographic rank of a permutation, in `[0, n!)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct PermRank(pub u32);

/// All `n(n-1)/2` transpositions, ordered lexicographically by `(a, b)`.
pub fn all_transpositions(n: usize) -> Result<Vec<Transposition>> {
    check_degree(n)?;
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for a in 1..=n {
        for b in a + 1..=n {
            out.push(Transposition {
                a: a as u8,
                b: b as u8,
            });
        }
    }
    Ok(out)
}

/// Iterates `S_n` in rank order.
pub fn enumerate_sn(n: usize) -> Result<SymmetricGroupIter> {
    check_degree(n)?;
    factorial(n)?;
    Ok(SymmetricGroupIter {
        next: Some((1..=n as u8).collect()),
    })
}

pub struct SymmetricGroupIter {
    next: Option<Vec<u8>>,
}

impl Iterator for SymmetricGroupIter {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(Permutation { word: current })
    }
}

fn next_permutation(a: &mut [u8]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len()).rev().find(|&j| a[i - 1] < a[j]).unwrap();
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn inversions_brute(v: &Permutation) -> usize {
        let w = v.word();
        (0..w.len())
            .flat_map(|i| (0..w.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| i < j && w[i] > w[j])
            .count()
    }

    #[test]
    fn identity_and_length() {
        assert_eq!(Permutation::identity(4).unwrap(), p("1234"));
        assert_eq!(Permutation::identity(5).unwrap().length(), 0);
        assert_eq!(Permutation::identity(1).unwrap().word(), &[1]);
        assert!(matches!(
            Permutation::identity(0),
            Err(Error::InvalidDegree(0))
        ));
        assert_eq!(p("1234").length(), 0);
        assert_eq!(inversions_brute(&p("4231")), 5);
        assert_eq!(p("4231").length(), 5);
        assert_eq!(inversions_brute(&p("3412")), 4);
        assert_eq!(p("3412").length(), 4);
    }

    #[test]
    fn longest_element_length() {
        for n in 1..=MAX_DEGREE {
            assert_eq!(Permutation::longest(n).unwrap().length(), n * (n - 1) / 2);
        }
    }

    #[test]
    fn right_multiplication_swaps_positions() {
        let t12 = Transposition::new(1, 2).unwrap();
        let t13 = Transposition::new(1, 3).unwrap();
        assert_eq!(p("1234").right_mul(t12).unwrap(), p("2134"));
        assert_eq!(p("3412").right_mul(t13).unwrap(), p("1432"));
        let t15 = Transposition::new(1, 5).unwrap();
        assert!(matches!(
            p("1234").right_mul(t15),
            Err(Error::TranspositionOutOfRange { .. })
        ));
        // vt agrees with compose(v, t)
        let v = p("3412");
        assert_eq!(
            v.right_mul(t13).unwrap(),
            v.compose(&t13.as_permutation(4).unwrap()).unwrap()
        );
    }

    #[test]
    fn inverse_examples() {
        let solve = |v: &Permutation| {
            let n = v.degree();
            let word = (1..=n as u8)
                .map(|j| (1..=n).find(|&i| v.at(i) == j).unwrap() as u8)
                .collect();
            Permutation::new(word).unwrap()
        };
        assert_eq!(solve(&p("3412")), p("3412"));
        assert_eq!(p("3412").inverse(), p("3412"));
        assert_eq!(solve(&p("4231")), p("4231"));
        assert_eq!(p("4231").inverse(), p("4231"));
        assert_eq!(p("231").inverse(), solve(&p("231")));
        let e = Permutation::identity(4).unwrap();
        assert_eq!(p("3142").compose(&e).unwrap(), p("3142"));
        assert!(p("12").compose(&p("123")).is_err());
    }

    #[test]
    fn ranks_and_enumeration() {
        for n in 1..=6 {
            assert_eq!(Permutation::identity(n).unwrap().rank(), PermRank(0));
            assert_eq!(
                Permutation::longest(n).unwrap().rank(),
                PermRank(factorial(n).unwrap() - 1)
            );
        }
        assert_eq!(all_transpositions(4).unwrap().len(), 6);
        assert_eq!(enumerate_sn(5).unwrap().count(), 120);
        for (i, v) in enumerate_sn(7).unwrap().enumerate() {
            assert_eq!(v.rank(), PermRank(i as u32));
            assert_eq!(Permutation::unrank(PermRank(i as u32), 7).unwrap(), v);
        }
        assert!(Permutation::unrank(PermRank(24), 4).is_err());
    }

    #[test]
    fn factorial_overflow_is_reported() {
        assert_eq!(factorial(12).unwrap(), 479_001_600);
        assert!(matches!(factorial(13), Err(Error::FactorialOverflow(13))));
        assert!(matches!(enumerate_sn(13), Err(Error::InvalidDegree(13))));
    }

    #[test]
    fn transposition_index_matches_listing() {
        for n in 2..=MAX_DEGREE {
            for (i, t) in all_transpositions(n).unwrap().into_iter().enumerate() {
                assert_eq!(t.index(n), i);
            }
        }
        assert!(Transposition::new(2, 2).is_err());
        assert!(Transposition::new(0, 2).is_err());
        assert_eq!(
            Transposition::new(3, 1).unwrap(),
            Transposition::new(1, 3).unwrap()
        );
    }

    #[test]
    fn text_forms() {
        assert_eq!(p("3,4,1,2"), p("3412"));
        assert_eq!(p("3412").to_string(), "3412");
        let big = Permutation::longest(10).unwrap();
        assert_eq!(big.to_string(), "10,9,8,7,6,5,4,3,2,1");
        assert_eq!(big.to_string().parse::<Permutation>().unwrap(), big);
        assert!("1224".parse::<Permutation>().is_err());
        assert!("1034".parse::<Permutation>().is_err());
        assert!("".parse::<Permutation>().is_err());
        assert!("1,x".parse::<Permutation>().is_err());
    }

    fn perm_strategy() -> impl Strategy<Value = Permutation> {
        (1usize..=9).prop_flat_map(|n| {
            Just((1..=n as u8).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(|w| Permutation::new(w).unwrap())
        })
    }

    proptest! {
        #[test]
        fn group_laws(v in perm_strategy()) {
            let e = Permutation::identity(v.degree()).unwrap();
            prop_assert_eq!(v.inverse().inverse(), v.clone());
            prop_assert_eq!(v.compose(&v.inverse()).unwrap(), e);
            prop_assert_eq!(v.inverse().length(), v.length());
            prop_assert_eq!(v.length(), inversions_brute(&v));
            prop_assert_eq!(Permutation::unrank(v.rank(), v.degree()).unwrap(), v.clone());
            prop_assert_eq!(v.to_string().parse::<Permutation>().unwrap(), v);
        }

        #[test]
        fn transposition_changes_length_by_odd_amount(v in perm_strategy(), a in 1usize..=9, b in 1usize..=9) {
            let n = v.degree();
            prop_assume!(a != b && a <= n && b <= n);
            let t = Transposition::new(a, b).unwrap();
            let w = v.right_mul(t).unwrap();
            let diff = w.length() as i64 - v.length() as i64;
            prop_assert!(diff % 2 != 0);
            prop_assert_eq!(w.right_mul(t).unwrap(), v);
            let lo = t.a() as i64;
            let hi = t.b() as i64;
            prop_assert_eq!(t.as_permutation(n).unwrap().length() as i64, 2 * (hi - lo) - 1);
        }
    }
}
