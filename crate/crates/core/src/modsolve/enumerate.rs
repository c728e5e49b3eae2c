use std::collections::BTreeSet;

use super::bounds::support_sum_min;
use super::{ExponentSet, ModSolution, ModsolveError};
use crate::rational::Rational;

/// Knobs for the structured enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumOptions {
    /// Off: every jump is a single member of D, so a weight-w solution has
    /// exactly w jumps and values at most max D. On: jumps may be sums of
    /// several members, trusting only the support bounds.
    pub strict: bool,
    /// Largest weight tried by [`minimal_irreducible_solutions`].
    pub max_weight: u32,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { strict: false, max_weight: 5 }
    }
}

/// Irreducible solutions with density exactly `density` and weight at most
/// `opts.max_weight`, one canonical rotation per shift class.
pub fn minimal_irreducible_solutions(
    set: &ExponentSet,
    density: Rational,
    opts: EnumOptions,
) -> Result<Vec<ModSolution>, ModsolveError> {
    if density <= Rational::from_integer(0) || density > Rational::from_integer(1) {
        return Err(ModsolveError::BadDensity(density.to_string()));
    }
    let mut out = BTreeSet::new();
    for w in 1..=opts.max_weight {
        let len = Rational::from_integer(i64::from(w)) / density;
        if !len.is_integer() || *len.numer() > i64::from(super::MAX_LENGTH) {
            continue;
        }
        out.extend(irreducible_solutions(set, *len.numer() as u32, w, opts.strict)?);
    }
    Ok(out.into_iter().collect())
}

/// Irreducible solutions of length `len` and weight exactly `weight`, built
/// run by run from their supports: from the smallest value n_1 the support
/// doubles for l_1 steps, drops by a jump to n_2, doubles for l_2 steps, and
/// so on until it returns to n_1.
pub fn irreducible_solutions(
    set: &ExponentSet,
    len: u32,
    weight: u32,
    strict: bool,
) -> Result<Vec<ModSolution>, ModsolveError> {
    if len == 0 || len > super::MAX_LENGTH {
        return Err(ModsolveError::LengthOutOfRange { len, max: super::MAX_LENGTH });
    }
    let max_d = u64::from(set.max());
    let sum_cap = u64::from(weight) * max_d;
    // Feasible jump counts under the support-sum bound.
    let jump_counts: Vec<u32> = if strict { (1..=weight.min(len)).collect() } else { vec![weight] }
        .into_iter()
        .filter(|&s| s <= len && support_sum_min(s, len) <= u128::from(sum_cap))
        .collect();
    let Some(&min_jumps) = jump_counts.first() else { return Ok(Vec::new()) };
    let mut search = Runs {
        set,
        len: len as usize,
        weight,
        strict,
        value_cap: u64::from(weight - min_jumps + 1) * max_d,
        sum_cap,
        path: Vec::with_capacity(len as usize),
        jumps: Vec::new(),
        found: BTreeSet::new(),
    };
    for start in 1..=(sum_cap / u64::from(len)).min(search.value_cap) {
        search.path.push(start);
        search.run(0, start)?;
        search.path.pop();
    }
    Ok(search.found.into_iter().collect())
}

struct Runs<'a> {
    set: &'a ExponentSet,
    len: usize,
    weight: u32,
    strict: bool,
    value_cap: u64,
    sum_cap: u64,
    /// Support values so far; path[0] is the minimum.
    path: Vec<u64>,
    /// (position, members) for each jump so far.
    jumps: Vec<(usize, Vec<u32>)>,
    found: BTreeSet<ModSolution>,
}

impl Runs<'_> {
    /// Grows the run whose first value ends `path`, trying a jump after each
    /// doubling. `used` counts digits so far and `total` sums `path`.
    fn run(&mut self, used: u32, mut total: u64) -> Result<(), ModsolveError> {
        let base = self.path.len();
        let result = loop {
            if used >= self.weight || total > self.sum_cap {
                break Ok(());
            }
            if let Err(e) = self.jump(used, total) {
                break Err(e);
            }
            let v = 2 * self.path[self.path.len() - 1];
            if self.path.len() == self.len || v > self.value_cap || self.path.contains(&v) {
                break Ok(());
            }
            self.path.push(v);
            total += v;
        };
        self.path.truncate(base);
        result
    }

    /// Every jump out of the last value of `path`.
    fn jump(&mut self, used: u32, total: u64) -> Result<(), ModsolveError> {
        let start = self.path[0];
        let v = self.path[self.path.len() - 1];
        let pos = self.path.len() - 1;
        let closing = self.path.len() == self.len;
        if !closing {
            // The remaining values are distinct and exceed the start.
            let remaining = (self.len - self.path.len()) as u64;
            if total + remaining * (start + 1) > self.sum_cap {
                return Ok(());
            }
        }
        let targets: Vec<u64> = if closing {
            vec![start]
        } else if self.strict {
            ((start + 1)..=self.value_cap.min(2 * v - 1)).collect()
        } else {
            self.set
                .iter()
                .map(u64::from)
                .filter(|&d| d < 2 * v)
                .map(|d| 2 * v - d)
                .filter(|&n| n > start && n <= self.value_cap)
                .collect()
        };
        let max_parts = if self.strict { self.weight - used } else { 1 };
        for next in targets {
            if !closing && self.path.contains(&next) {
                continue;
            }
            let Some(j) = (2 * v).checked_sub(next).filter(|&j| j > 0) else { continue };
            let mut subsets = Vec::new();
            subsets_summing_to(self.set.members(), j, max_parts, &mut Vec::new(), 0, &mut subsets);
            for subset in subsets {
                let used = used + subset.len() as u32;
                self.jumps.push((pos, subset));
                if closing {
                    if used == self.weight {
                        self.record()?;
                    }
                } else {
                    self.path.push(next);
                    let r = self.run(used, total + next);
                    self.path.pop();
                    r?;
                }
                self.jumps.pop();
            }
        }
        Ok(())
    }

    fn record(&mut self) -> Result<(), ModsolveError> {
        let l = self.len as u32;
        let digits: Vec<(u32, u32)> = self
            .jumps
            .iter()
            .flat_map(|(pos, members)| members.iter().map(move |&d| (d, l - 1 - *pos as u32)))
            .collect();
        let sol = ModSolution::from_digits(l, digits)?;
        debug_assert_eq!(sol.support().values(), self.path.as_slice());
        self.found.insert(sol.canonical());
        Ok(())
    }
}

/// Subsets of `members` (sorted) with at most `max_parts` elements summing to `target`.
fn subsets_summing_to(
    members: &[u32],
    target: u64,
    max_parts: u32,
    current: &mut Vec<u32>,
    from: usize,
    out: &mut Vec<Vec<u32>>,
) {
    if target == 0 {
        if !current.is_empty() {
            out.push(current.clone());
        }
        return;
    }
    if max_parts == 0 {
        return;
    }
    for i in from..members.len() {
        let d = u64::from(members[i]);
        if d > target {
            break;
        }
        current.push(members[i]);
        subsets_summing_to(members, target - d, max_parts - 1, current, i + 1, out);
        current.pop();
    }
}
