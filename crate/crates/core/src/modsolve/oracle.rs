//! Exhaustive reference searches over residues mod 2^l - 1, independent of
//! the support-walk formulation. Memory grows as 2^l, so lengths are capped.

use std::collections::{BTreeSet, VecDeque};

use super::{ExponentSet, ModSolution, ModsolveError};

pub const BFS_MAX_LENGTH: u32 = 24;

fn moves(set: &ExponentSet, len: u32) -> Vec<(u32, u32, u64)> {
    let m = (1u64 << len) - 1;
    set.iter().flat_map(|d| (0..len).map(move |r| (d, r, (u64::from(d) << r) % m.max(1)))).collect()
}

fn check(len: u32) -> Result<(), ModsolveError> {
    if len == 0 || len > BFS_MAX_LENGTH {
        return Err(ModsolveError::LengthOutOfRange { len, max: BFS_MAX_LENGTH });
    }
    Ok(())
}

/// Fewest moves d*2^r (repeats allowed) reaching each residue from 0.
pub fn residue_distances(set: &ExponentSet, len: u32) -> Result<Vec<u32>, ModsolveError> {
    check(len)?;
    let m = (1u64 << len) - 1;
    let size = m.max(1) as usize;
    let steps: Vec<u64> = moves(set, len).into_iter().map(|t| t.2).collect();
    let mut dist = vec![u32::MAX; size];
    dist[0] = 0;
    let mut queue = VecDeque::from([0u64]);
    while let Some(x) = queue.pop_front() {
        let next = dist[x as usize] + 1;
        for &s in &steps {
            let y = ((x + s) % m.max(1)) as usize;
            if dist[y] == u32::MAX {
                dist[y] = next;
                queue.push_back(y as u64);
            }
        }
    }
    Ok(dist)
}

/// sigma(D, l) by breadth-first search. Repeated moves never help: two
/// copies of d*2^r equal one copy of d*2^(r+1), so the relaxed minimum is
/// attained by distinct digits.
pub fn sigma_bfs(set: &ExponentSet, len: u32) -> Result<u32, ModsolveError> {
    let dist = residue_distances(set, len)?;
    let m = dist.len() as u64;
    let best = moves(set, len).iter().map(|&(_, _, s)| dist[((m - s) % m) as usize]).min().expect("set is nonempty");
    Ok(best + 1)
}

/// Every solution of length `len` and weight exactly `weight`, one per shift
/// class, as canonical rotations in sorted order.
pub fn solutions_of_weight(set: &ExponentSet, len: u32, weight: u32) -> Result<Vec<ModSolution>, ModsolveError> {
    let dist = residue_distances(set, len)?;
    let mut search = Exhaustive {
        len,
        m: dist.len() as u64,
        moves: moves(set, len),
        dist,
        chosen: Vec::with_capacity(weight as usize),
        found: BTreeSet::new(),
    };
    if weight > 0 {
        search.walk(0, 0, weight)?;
    }
    Ok(search.found.into_iter().collect())
}

struct Exhaustive {
    len: u32,
    m: u64,
    moves: Vec<(u32, u32, u64)>,
    dist: Vec<u32>,
    chosen: Vec<(u32, u32)>,
    found: BTreeSet<ModSolution>,
}

impl Exhaustive {
    /// Extends the chosen digits by moves with index >= `from`.
    fn walk(&mut self, from: usize, sum: u64, left: u32) -> Result<(), ModsolveError> {
        if left == 0 {
            if sum == 0 {
                let s = ModSolution::from_digits(self.len, self.chosen.iter().copied())?;
                self.found.insert(s.canonical());
            }
            return Ok(());
        }
        if self.dist[((self.m - sum) % self.m) as usize] > left {
            return Ok(());
        }
        for i in from..self.moves.len() {
            let (d, r, s) = self.moves[i];
            self.chosen.push((d, r));
            self.walk(i + 1, (sum + s) % self.m, left - 1)?;
            self.chosen.pop();
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bfs_sigma_examples() {
        let d: ExponentSet = "odd<=13".parse().unwrap();
        assert_eq!(sigma_bfs(&d, 3).unwrap(), 1);
        assert_eq!(sigma_bfs(&d, 6).unwrap(), 2);
        assert_eq!(sigma_bfs(&ExponentSet::new([1]).unwrap(), 7).unwrap(), 7);
        assert!(sigma_bfs(&d, 25).is_err());
    }

    #[test]
    fn weight_two_length_six() {
        let d: ExponentSet = "odd<=13".parse().unwrap();
        let sols = solutions_of_weight(&d, 6, 2).unwrap();
        assert!(sols.iter().all(|s| s.weight() == 2 && s.total() % 63 == 0));
        let irreducible: Vec<_> = sols.iter().filter(|s| s.is_irreducible()).collect();
        assert_eq!(irreducible.len(), 1);
        assert_eq!(irreducible[0].terms(), [(11, 1), (13, 4)]);
    }
}
