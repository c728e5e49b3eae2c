use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ModsolveError, MAX_LENGTH};
use crate::rational::Rational;

/// A solution of sum_d d*u_d = 0 mod 2^l - 1 with a positive sum. Each u_d is
/// an l-bit integer whose bit r is the digit u_{d,r}; only nonzero u_d are kept.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawSolution", into = "RawSolution")]
pub struct ModSolution {
    length: u32,
    terms: Vec<(u32, u64)>,
}

#[derive(Serialize, Deserialize)]
struct RawSolution {
    length: u32,
    terms: Vec<(u32, u64)>,
}

impl TryFrom<RawSolution> for ModSolution {
    type Error = ModsolveError;

    fn try_from(raw: RawSolution) -> Result<Self, Self::Error> {
        ModSolution::new(raw.length, raw.terms)
    }
}

impl From<ModSolution> for RawSolution {
    fn from(s: ModSolution) -> Self {
        RawSolution { length: s.length, terms: s.terms }
    }
}

fn modulus(length: u32) -> u64 {
    (1u64 << length) - 1
}

fn rotate(u: u64, k: u32, length: u32) -> u64 {
    let k = k % length;
    if k == 0 {
        return u;
    }
    ((u << k) | (u >> (length - k))) & modulus(length)
}

impl ModSolution {
    /// Validates `(d, u_d)` pairs against the system.
    pub fn new(length: u32, terms: impl IntoIterator<Item = (u32, u64)>) -> Result<Self, ModsolveError> {
        if length == 0 || length > MAX_LENGTH {
            return Err(ModsolveError::LengthOutOfRange { len: length, max: MAX_LENGTH });
        }
        let mut map = BTreeMap::new();
        for (d, u) in terms {
            if u > modulus(length) {
                return Err(ModsolveError::DigitOverflow { d, u, len: length });
            }
            if map.insert(d, u).is_some() {
                return Err(ModsolveError::DuplicateExponent(d));
            }
        }
        map.retain(|_, u| *u != 0);
        let sol = ModSolution { length, terms: map.into_iter().collect() };
        let total = sol.total();
        if total == 0 || !total.is_multiple_of(u128::from(modulus(length))) {
            return Err(ModsolveError::NotASolution { total, len: length });
        }
        Ok(sol)
    }

    /// Builds the solution with u_{d,r} = 1 exactly at the given `(d, r)` pairs.
    pub fn from_digits(length: u32, digits: impl IntoIterator<Item = (u32, u32)>) -> Result<Self, ModsolveError> {
        if length == 0 || length > MAX_LENGTH {
            return Err(ModsolveError::LengthOutOfRange { len: length, max: MAX_LENGTH });
        }
        let mut map: BTreeMap<u32, u64> = BTreeMap::new();
        for (d, r) in digits {
            if r >= length {
                return Err(ModsolveError::DigitOverflow { d, u: 1 << r.min(63), len: length });
            }
            let u = map.entry(d).or_default();
            if *u >> r & 1 == 1 {
                return Err(ModsolveError::DuplicateDigit { d, r });
            }
            *u |= 1 << r;
        }
        ModSolution::new(length, map)
    }

    pub fn length(&self) -> u32 {
        self.length
    }

    /// `(d, u_d)` pairs with u_d != 0, sorted by d.
    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    pub fn u(&self, d: u32) -> u64 {
        self.terms.iter().find(|t| t.0 == d).map_or(0, |t| t.1)
    }

    /// All `(d, r)` with u_{d,r} = 1.
    pub fn digits(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.terms
            .iter()
            .flat_map(move |&(d, u)| (0..self.length).filter(move |r| u >> r & 1 == 1).map(move |r| (d, r)))
    }

    pub fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.terms.iter().map(|t| t.0)
    }

    /// Number of 1-digits.
    pub fn weight(&self) -> u32 {
        self.terms.iter().map(|t| t.1.count_ones()).sum()
    }

    pub fn density(&self) -> Rational {
        Rational::new(i64::from(self.weight()), i64::from(self.length))
    }

    /// sum_d d*u_d.
    pub fn total(&self) -> u128 {
        self.terms.iter().map(|&(d, u)| u128::from(d) * u128::from(u)).sum()
    }

    /// Rotates every u_d left by one place within l bits.
    pub fn shift(&self) -> ModSolution {
        self.shifted(1)
    }

    pub fn shifted(&self, k: u32) -> ModSolution {
        let terms = self.terms.iter().map(|&(d, u)| (d, rotate(u, k, self.length))).collect();
        ModSolution { length: self.length, terms }
    }

    pub fn support(&self) -> SupportMap {
        let m = u128::from(modulus(self.length));
        let values = (0..self.length)
            .map(|k| {
                let s: u128 =
                    self.terms.iter().map(|&(d, u)| u128::from(d) * u128::from(rotate(u, k, self.length))).sum();
                debug_assert_eq!(s % m, 0);
                (s / m) as u64
            })
            .collect();
        SupportMap { values }
    }

    pub fn is_irreducible(&self) -> bool {
        self.support().is_injective()
    }

    /// The rotation whose u_d tuple, ordered by d, is lexicographically smallest.
    pub fn canonical(&self) -> ModSolution {
        (0..self.length)
            .map(|k| self.shifted(k))
            .min_by(|a, b| a.terms.iter().map(|t| t.1).cmp(b.terms.iter().map(|t| t.1)))
            .expect("length is positive")
    }

    /// sum_d d*u_{d,r} = 2 phi(l-r-1) - phi(l-r) for every r.
    pub fn satisfies_digit_identity(&self) -> bool {
        let phi = self.support();
        let l = self.length as usize;
        (0..self.length).all(|r| {
            let lhs: u64 = self.terms.iter().filter(|t| t.1 >> r & 1 == 1).map(|t| u64::from(t.0)).sum();
            let i = l - r as usize - 1;
            2 * phi.values[i] == lhs + phi.values[(i + 1) % l]
        })
    }
}

/// phi(k) = sum_d d * shift^k(u_d) / (2^l - 1) for k in Z/l.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SupportMap {
    values: Vec<u64>,
}

impl SupportMap {
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Positions i with phi(i+1) != 2 phi(i).
    pub fn jumps(&self) -> Vec<usize> {
        let l = self.values.len();
        (0..l).filter(|&i| self.values[(i + 1) % l] != 2 * self.values[i]).collect()
    }

    /// 2 phi(i) - phi(i+1) at each position; zero off the jumps.
    pub fn jump_values(&self) -> Vec<u64> {
        let l = self.values.len();
        (0..l).map(|i| 2 * self.values[i] - self.values[(i + 1) % l]).collect()
    }

    pub fn is_injective(&self) -> bool {
        let mut v = self.values.clone();
        v.sort_unstable();
        v.windows(2).all(|w| w[0] != w[1])
    }

    /// |phi| = sum of the values.
    pub fn total(&self) -> u64 {
        self.values.iter().sum()
    }

    pub fn max(&self) -> u64 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    pub fn rotated(&self, k: usize) -> SupportMap {
        let mut values = self.values.clone();
        let l = values.len().max(1);
        values.rotate_left(k % l);
        SupportMap { values }
    }
}
