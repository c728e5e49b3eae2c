use serde::{Deserialize, Serialize};

use super::bounds::{max_weight_below, stabilization_bound};
use super::{ExponentSet, ModSolution, ModsolveError, MAX_LENGTH};
use crate::rational::{Exact, Rational};

const INF: u32 = u32::MAX;

/// Minimum weight at one length, with a solution attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sigma {
    pub weight: u32,
    pub witness: ModSolution,
}

/// Fewest distinct members of D summing to each value up to a limit, with
/// one subset attaining it.
struct SubsetTable {
    cost: Vec<u32>,
    pick: Vec<Vec<u32>>,
}

impl SubsetTable {
    fn new(set: &ExponentSet, limit: usize) -> Self {
        let mut cost = vec![INF; limit + 1];
        let mut pick = vec![Vec::new(); limit + 1];
        cost[0] = 0;
        for d in set.iter() {
            let d = d as usize;
            for j in (d..=limit).rev() {
                if cost[j - d] != INF && cost[j - d] + 1 < cost[j] {
                    cost[j] = cost[j - d] + 1;
                    let mut p = pick[j - d].clone();
                    p.push(d as u32);
                    pick[j] = p;
                }
            }
        }
        SubsetTable { cost, pick }
    }
}

fn check_length(len: u32) -> Result<(), ModsolveError> {
    if len == 0 || len > MAX_LENGTH {
        return Err(ModsolveError::LengthOutOfRange { len, max: MAX_LENGTH });
    }
    Ok(())
}

/// Minimum weight of a length-`len` solution among those of weight at most
/// `cap`, or `None` when there is none.
///
/// A solution is the same thing as a closed walk phi(0), ..., phi(len) = phi(0)
/// of positive integers whose steps J = 2 phi(i) - phi(i+1) are sums of
/// distinct members of D, the digits at place r = len-1-i spelling out the
/// subset. The weight is the total subset size and |phi| = sum of the J's,
/// so every value is at most cap * max D and the smallest at most
/// cap * max D / len. The search is a shortest-path sweep over walks
/// rooted at their smallest value.
pub fn sigma_bounded(set: &ExponentSet, len: u32, cap: u32) -> Result<Option<Sigma>, ModsolveError> {
    check_length(len)?;
    if cap == 0 {
        return Ok(None);
    }
    let bound = cap as usize * set.max() as usize;
    let table = SubsetTable::new(set, 2 * bound);
    let steps: Vec<usize> = (0..=2 * bound).filter(|&j| table.cost[j] <= cap).collect();
    let l = len as usize;
    let mut best: Option<(u32, Vec<usize>)> = None;
    for start in 1..=bound / l {
        let limit = best.as_ref().map_or(cap, |b| b.0 - 1);
        if limit == 0 {
            break;
        }
        let width = bound - start + 1;
        let mut dist = vec![vec![INF; width]; l + 1];
        let mut parent = vec![vec![0usize; width]; l + 1];
        dist[0][0] = 0;
        for t in 0..l {
            for vi in 0..width {
                let c = dist[t][vi];
                if c == INF {
                    continue;
                }
                let v = vi + start;
                // v' = 2v - j must stay in [start, bound].
                let lo = (2 * v).saturating_sub(bound);
                let hi = 2 * v - start;
                let first = steps.partition_point(|&j| j < lo);
                for &j in steps[first..].iter().take_while(|&&j| j <= hi) {
                    let nc = c + table.cost[j];
                    if nc > limit {
                        continue;
                    }
                    let wi = 2 * v - j - start;
                    if nc < dist[t + 1][wi] {
                        dist[t + 1][wi] = nc;
                        parent[t + 1][wi] = vi;
                    }
                }
            }
        }
        let total = dist[l][0];
        if total != INF && best.as_ref().is_none_or(|b| total < b.0) {
            let mut walk = vec![0usize; l + 1];
            for t in (1..=l).rev() {
                walk[t - 1] = parent[t][walk[t]];
            }
            best = Some((total, walk.into_iter().map(|vi| vi + start).collect()));
        }
    }
    let Some((weight, walk)) = best else { return Ok(None) };
    let digits = (0..l).flat_map(|t| {
        let j = 2 * walk[t] - walk[t + 1];
        let r = (l - 1 - t) as u32;
        table.pick[j].iter().map(move |&d| (d, r))
    });
    let witness = ModSolution::from_digits(len, digits.collect::<Vec<_>>())?;
    debug_assert_eq!(witness.weight(), weight);
    Ok(Some(Sigma { weight, witness }))
}

/// sigma(D, l): the minimum weight of a solution of length `len`.
pub fn sigma(set: &ExponentSet, len: u32) -> Result<Sigma, ModsolveError> {
    check_length(len)?;
    // Repeating one member at every place has weight len, so the search ends.
    let mut cap = 1;
    loop {
        if let Some(found) = sigma_bounded(set, len, cap)? {
            return Ok(found);
        }
        cap = (cap * 2).min(len);
    }
}

/// The 2-density of D as found by a search over lengths up to some maximum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Density {
    pub density: Exact,
    pub length: u32,
    pub witness: ModSolution,
    /// True when every length that could still beat `density` was searched.
    pub certified: bool,
    pub stabilization_bound: u32,
    pub searched_up_to: u32,
}

/// 5n + 5 with n = floor(log2(max D + 2)).
pub fn default_max_length(set: &ExponentSet) -> u32 {
    let n = (set.max() + 2).ilog2();
    (5 * n + 5).min(MAX_LENGTH)
}

/// Minimum of sigma(D, l)/l over l <= `max_len`, stopping early once longer
/// lengths provably cannot improve on the incumbent.
pub fn density(set: &ExponentSet, max_len: u32) -> Result<Density, ModsolveError> {
    check_length(max_len)?;
    let first = set.members()[0];
    let mut best = Sigma { weight: 1, witness: ModSolution::new(1, [(first, 1)])? };
    let mut best_density = Rational::from_integer(1);
    let mut len = 2;
    let mut stab = stabilization_bound(best_density, set.max());
    while len <= max_len.min(stab) {
        let cap = max_weight_below(best_density, len);
        if let Some(found) = sigma_bounded(set, len, cap)? {
            best_density = Rational::new(i64::from(found.weight), i64::from(len));
            best = found;
            stab = stabilization_bound(best_density, set.max());
        }
        len += 1;
    }
    Ok(Density {
        density: Exact(best_density),
        length: best.witness.length(),
        witness: best.witness,
        certified: stab <= max_len,
        stabilization_bound: stab,
        searched_up_to: (len - 1).max(1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> ExponentSet {
        s.parse().unwrap()
    }

    #[test]
    fn sigma_examples() {
        let d = set("odd<=13");
        let s = sigma(&d, 3).unwrap();
        assert_eq!(s.weight, 1);
        assert_eq!(s.witness.terms(), [(7, 1)]);
        let s = sigma(&d, 6).unwrap();
        assert_eq!(s.weight, 2);
        assert_eq!(s.witness.total() % 63, 0);
        for len in 1..=20 {
            assert_eq!(sigma(&set("1"), len).unwrap().weight, len);
        }
    }

    #[test]
    fn witnesses_are_valid() {
        let d = set("3,5,11");
        for len in 1..=16 {
            let s = sigma(&d, len).unwrap();
            assert_eq!(s.witness.weight(), s.weight);
            assert_eq!(s.witness.length(), len);
            assert!(s.witness.satisfies_digit_identity());
        }
    }

    #[test]
    fn bounded_respects_cap() {
        let d = set("odd<=13");
        assert_eq!(sigma_bounded(&d, 6, 1).unwrap(), None);
        assert_eq!(sigma_bounded(&d, 6, 2).unwrap().unwrap().weight, 2);
        assert!(sigma_bounded(&d, 41, 1).is_err());
    }

    #[test]
    fn density_examples() {
        let d = density(&set("odd<=13"), 20).unwrap();
        assert_eq!(d.density, Exact(Rational::new(1, 3)));
        assert_eq!(d.length, 3);
        assert!(d.certified);
        assert!(d.witness.is_irreducible());
        let d = density(&set("1"), 10).unwrap();
        assert_eq!(d.density, Exact(Rational::from_integer(1)));
        assert!(d.certified);
    }

    #[test]
    fn default_length() {
        assert_eq!(default_max_length(&set("odd<=29")), 25);
        assert_eq!(default_max_length(&set("odd<=61")), 30);
    }
}
