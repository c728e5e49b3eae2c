//! The mod-2 matrix built on the minimal support, the Frobenius-semilinear
//! map it defines, and the first vertex read off its stable image.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::FieldCtx;
use crate::modsolve::{
    self, default_max_length, density, minimal_irreducible_solutions, support_sum_min, EnumOptions, ExponentSet,
    ModSolution, ModsolveError,
};
use crate::rational::{Exact, Rational, Vertex};
use crate::zeta::CurvePoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VssError {
    #[error(transparent)]
    Modsolve(#[from] ModsolveError),
    #[error("cell ({row}, {col}) of the matrix is assigned twice with different values")]
    Ambiguous { row: u64, col: u64 },
    #[error("density of {0} is not certified within the searched lengths")]
    Uncertified(ExponentSet),
    #[error("no minimal irreducible solutions for {0}")]
    NoSolutions(ExponentSet),
    #[error("solutions have different densities")]
    MixedDensity,
}

/// How off-diagonal coefficients are placed in the matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryRule {
    /// Each consecutive pair (phi(i), phi(i+1)) of a minimal solution's support
    /// fills one cell: 1 for a doubling, the product of c_d over the digits of
    /// the jump otherwise.
    #[default]
    SupportTransitions,
    /// Every pair (s_i, s_j) of the minimal support: 1 when s_j = 2 s_i, and
    /// c_d when 2 s_i - s_j = d is a digit used by some minimal solution.
    DigitMatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalSupportMatrix {
    /// The minimal support s_1 < ... < s_N.
    pub sigma: Vec<u64>,
    /// Row i, column j holds m_ij as field-element bits.
    pub entries: Vec<Vec<u64>>,
    pub density: Exact,
    /// Every (d, r) with u_{d,r} = 1 in some minimal solution.
    pub jump_digits: BTreeSet<(u32, u32)>,
    pub q_degree: u32,
}

#[derive(Clone, PartialEq, Eq)]
enum Source {
    Doubling,
    Jump(Vec<u32>),
}

impl MinimalSupportMatrix {
    pub fn build(solutions: &[ModSolution], f: &CurvePoly, rule: EntryRule) -> Result<Self, VssError> {
        let ctx = *f.ctx();
        let density = solutions.first().ok_or(VssError::MixedDensity)?.density();
        if solutions.iter().any(|s| s.density() != density) {
            return Err(VssError::MixedDensity);
        }
        let sigma: Vec<u64> =
            solutions.iter().flat_map(|s| s.support().values().to_vec()).collect::<BTreeSet<_>>().into_iter().collect();
        let index: HashMap<u64, usize> = sigma.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let jump_digits: BTreeSet<(u32, u32)> = solutions.iter().flat_map(|s| s.digits().collect::<Vec<_>>()).collect();
        let coeff = |d: u32| f.coeff(d).bits();
        let mut cells: BTreeMap<(usize, usize), (Source, u64)> = BTreeMap::new();
        let mut place = |i: usize, j: usize, source: Source, value: u64| -> Result<(), VssError> {
            match cells.insert((i, j), (source, value)) {
                Some((old, _)) if old != cells[&(i, j)].0 => Err(VssError::Ambiguous { row: sigma[i], col: sigma[j] }),
                _ => Ok(()),
            }
        };
        match rule {
            EntryRule::SupportTransitions => {
                for sol in solutions {
                    let phi = sol.support();
                    let l = sol.length() as usize;
                    let values = phi.values();
                    for t in 0..l {
                        let (a, b) = (values[t], values[(t + 1) % l]);
                        let (i, j) = (index[&a], index[&b]);
                        if b == 2 * a {
                            place(i, j, Source::Doubling, 1)?;
                        } else {
                            let r = (l - 1 - t) as u32;
                            let subset: Vec<u32> =
                                sol.terms().iter().filter(|t| t.1 >> r & 1 == 1).map(|t| t.0).collect();
                            let value = subset.iter().fold(1, |v, &d| ctx.mul_bits(v, coeff(d)));
                            place(i, j, Source::Jump(subset), value)?;
                        }
                    }
                }
            }
            EntryRule::DigitMatch => {
                let digits: BTreeSet<u32> = jump_digits.iter().map(|t| t.0).collect();
                for (i, &a) in sigma.iter().enumerate() {
                    for (j, &b) in sigma.iter().enumerate() {
                        if b == 2 * a {
                            place(i, j, Source::Doubling, 1)?;
                        } else if let Some(d) = (2 * a).checked_sub(b).and_then(|d| u32::try_from(d).ok()) {
                            if digits.contains(&d) {
                                place(i, j, Source::Jump(vec![d]), coeff(d))?;
                            }
                        }
                    }
                }
            }
        }
        let n = sigma.len();
        let mut entries = vec![vec![0u64; n]; n];
        for ((i, j), (_, v)) in cells {
            entries[i][j] = v;
        }
        Ok(MinimalSupportMatrix { sigma, entries, density: Exact(density), jump_digits, q_degree: ctx.degree() })
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    /// The same matrix with rows and columns reordered by `perm` (new index k
    /// holds old index perm[k]).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = self.clone();
        out.sigma = perm.iter().map(|&k| self.sigma[k]).collect();
        out.entries = perm.iter().map(|&a| perm.iter().map(|&b| self.entries[a][b]).collect()).collect();
        out
    }

    pub fn semilinear_map(&self, ctx: FieldCtx) -> SemilinearMap {
        SemilinearMap { ctx, matrix: self.entries.clone(), twist: 1 }
    }
}

/// v -> M^T v^(2^twist), coordinates raised to the power 2^twist.
#[derive(Clone, Debug)]
pub struct SemilinearMap {
    ctx: FieldCtx,
    /// M itself; the map multiplies by its transpose.
    matrix: Vec<Vec<u64>>,
    twist: u32,
}

impl SemilinearMap {
    pub fn new(ctx: FieldCtx, matrix: Vec<Vec<u64>>, twist: u32) -> Self {
        SemilinearMap { ctx, matrix, twist }
    }

    pub fn with_twist(mut self, twist: u32) -> Self {
        self.twist = twist;
        self
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        let n = self.matrix.len();
        let mut out = vec![0u64; n];
        for (i, &x) in v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let x = self.twist_bits(x);
            for (j, o) in out.iter_mut().enumerate() {
                *o ^= self.ctx.mul_bits(self.matrix[i][j], x);
            }
        }
        out
    }

    fn twist_bits(&self, x: u64) -> u64 {
        (0..self.twist).fold(x, |y, _| self.ctx.square_bits(y))
    }

    /// Dimensions of Im phi^0, Im phi^1, ... up to and including the first
    /// repeat. The chain is descending, so a repeat means it has stabilized.
    pub fn image_chain(&self) -> Vec<usize> {
        let n = self.matrix.len();
        let mut basis: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect();
        let mut dims = vec![n];
        loop {
            let images: Vec<Vec<u64>> = basis.iter().map(|b| self.apply(b)).collect();
            basis = row_reduce(&self.ctx, images);
            let d = basis.len();
            let last = *dims.last().expect("nonempty");
            assert!(d <= last, "image chain must not grow");
            dims.push(d);
            if d == last {
                return dims;
            }
        }
    }

    /// dim V_ss, the dimension of the stable image.
    pub fn stable_dim(&self) -> usize {
        *self.image_chain().last().expect("nonempty")
    }
}

/// Nonzero rows of the reduced echelon form.
fn row_reduce(ctx: &FieldCtx, mut rows: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, p);
        let inv = ctx.inv_bits(rows[rank][c]).expect("pivot is nonzero");
        for x in rows[rank].iter_mut() {
            *x = ctx.mul_bits(*x, inv);
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let factor = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x ^= ctx.mul_bits(factor, y);
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

/// Rank of a matrix over F_q.
pub fn rank(ctx: &FieldCtx, rows: &[Vec<u64>]) -> usize {
    row_reduce(ctx, rows.to_vec()).len()
}

/// dim V_ss of the matrix under the squaring twist.
pub fn vss_dim(m: &MinimalSupportMatrix, ctx: FieldCtx) -> usize {
    m.semilinear_map(ctx).stable_dim()
}

/// Largest weight an irreducible solution of the given density can have
/// under the support-sum bound.
pub fn weight_bound(density: Rational, max_d: u32) -> u32 {
    // l(l+1)/2 <= |phi| <= w max D with l = w / density.
    let limit = (density * density * Rational::from_integer(2 * i64::from(max_d))).to_integer().max(1) as u32;
    (1..=limit)
        .filter(|&w| {
            let l = Rational::from_integer(i64::from(w)) / density;
            l.is_integer() && {
                let l = *l.numer() as u32;
                l <= modsolve::MAX_LENGTH && support_sum_min(w.min(l), l) <= u128::from(w) * u128::from(max_d)
            }
        })
        .max()
        .unwrap_or(1)
}

/// Density and minimal irreducible solutions of one exponent set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalStructure {
    pub set: ExponentSet,
    pub density: Exact,
    pub solutions: Vec<ModSolution>,
}

impl MinimalStructure {
    /// Certified density, then every irreducible solution attaining it with
    /// jumps allowed to be sums of several members.
    pub fn compute(set: &ExponentSet) -> Result<Self, VssError> {
        let d = density(set, default_max_length(set))?;
        if !d.certified {
            return Err(VssError::Uncertified(set.clone()));
        }
        let delta = d.density.0;
        let opts = EnumOptions { strict: true, max_weight: weight_bound(delta, set.max()).max(d.witness.weight()) };
        let solutions = minimal_irreducible_solutions(set, delta, opts)?;
        if solutions.is_empty() {
            return Err(VssError::NoSolutions(set.clone()));
        }
        Ok(MinimalStructure { set: set.clone(), density: d.density, solutions })
    }
}

/// Memoizes [`MinimalStructure::compute`] per exponent set; safe to share
/// across threads.
#[derive(Default)]
pub struct StructureCache {
    map: Mutex<HashMap<ExponentSet, Arc<MinimalStructure>>>,
}

impl StructureCache {
    pub fn get(&self, set: &ExponentSet) -> Result<Arc<MinimalStructure>, VssError> {
        if let Some(s) = self.map.lock().expect("cache lock").get(set) {
            return Ok(Arc::clone(s));
        }
        let s = Arc::new(MinimalStructure::compute(set)?);
        self.map.lock().expect("cache lock").insert(set.clone(), Arc::clone(&s));
        Ok(s)
    }
}

/// floor(log2(2g + 2)).
pub fn ladder_n(genus: u32) -> u32 {
    (2 * genus + 2).ilog2()
}

/// The exponent set the first-vertex prediction works with: odd exponents up
/// to 2g+1, minus the distinguished ones whose coefficients vanish.
pub fn effective_set(f: &CurvePoly) -> Result<ExponentSet, VssError> {
    let d = f.degree();
    let n = ladder_n(f.genus());
    let full = ExponentSet::odds_up_to(d)?;
    let (a, b) = ((1u32 << n) - 1, 3 * (1u32 << (n - 1)) - 1);
    let zero = |e: u32| f.coeff(e).is_zero();
    let set = if d == (1 << (n + 1)) - 3 && zero(a) && zero(b) {
        full.exclude(&[a, b])?
    } else if a < d && zero(a) {
        full.exclude(&[a])?
    } else {
        full
    };
    Ok(set)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VssPrediction {
    pub set: ExponentSet,
    pub sigma: Vec<u64>,
    pub density: Exact,
    pub dim: usize,
    /// (dim, density * dim) when dim > 0.
    pub vertex: Option<Vertex>,
}

pub fn predict_first_vertex(f: &CurvePoly) -> Result<VssPrediction, VssError> {
    predict_with(f, &StructureCache::default(), EntryRule::default())
}

pub fn predict_with(f: &CurvePoly, cache: &StructureCache, rule: EntryRule) -> Result<VssPrediction, VssError> {
    let set = effective_set(f)?;
    let structure = cache.get(&set)?;
    let m = MinimalSupportMatrix::build(&structure.solutions, f, rule)?;
    let dim = vss_dim(&m, *f.ctx());
    let delta = structure.density.0;
    let vertex = (dim > 0).then(|| Vertex::new(dim as u32, delta * Rational::from_integer(dim as i64)));
    Ok(VssPrediction { set, sigma: m.sigma, density: structure.density, dim, vertex })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldCtx {
        FieldCtx::new(1).unwrap()
    }

    fn curve(ctx: FieldCtx, text: &str) -> CurvePoly {
        CurvePoly::parse(ctx, text).unwrap()
    }

    fn sols(text: &[(u32, &[(u32, u64)])]) -> Vec<ModSolution> {
        text.iter().map(|(l, t)| ModSolution::new(*l, t.iter().copied()).unwrap()).collect()
    }

    #[test]
    fn companion_matrix_at_n3() {
        let s = sols(&[(3, &[(7, 1)])]);
        let m = MinimalSupportMatrix::build(&s, &curve(f2(), "7:1"), EntryRule::SupportTransitions).unwrap();
        assert_eq!(m.sigma, [1, 2, 4]);
        assert_eq!(m.entries, [vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]);
        assert_eq!(vss_dim(&m, f2()), 3);
        let m = MinimalSupportMatrix::build(&s, &curve(f2(), "5:1"), EntryRule::SupportTransitions).unwrap();
        assert_eq!(m.entries[2][0], 0);
        assert_eq!(vss_dim(&m, f2()), 0);
    }

    #[test]
    fn six_by_six_at_n3() {
        let s = sols(&[(3, &[(7, 1)]), (6, &[(13, 4), (11, 1)])]);
        for (text, dim) in [("13:1,11:1,7:1", 6), ("13:1,11:1", 6), ("13:1,7:1", 3), ("13:1", 0)] {
            for rule in [EntryRule::SupportTransitions, EntryRule::DigitMatch] {
                let m = MinimalSupportMatrix::build(&s, &curve(f2(), text), rule).unwrap();
                assert_eq!(m.sigma, [1, 2, 3, 4, 6, 8]);
                assert_eq!(vss_dim(&m, f2()), dim, "{text}");
            }
        }
    }

    #[test]
    fn permutation_invariance() {
        let s = sols(&[(3, &[(7, 1)]), (6, &[(13, 4), (11, 1)])]);
        let m = MinimalSupportMatrix::build(&s, &curve(f2(), "13:1,7:1"), EntryRule::default()).unwrap();
        let p = m.permuted(&[5, 3, 1, 0, 2, 4]);
        assert_eq!(vss_dim(&p, f2()), vss_dim(&m, f2()));
    }

    #[test]
    fn ambiguous_cells_are_rejected() {
        // Same support 1 -> 2 -> 4 -> 1, closing jump 7 spelled two ways.
        let a = ModSolution::new(3, [(1, 1), (6, 1)]).unwrap();
        let b = ModSolution::new(3, [(3, 1), (4, 1)]).unwrap();
        assert_eq!(b.support().values(), a.support().values());
        assert!(matches!(
            MinimalSupportMatrix::build(&[a, b], &curve(f2(), "3:1"), EntryRule::SupportTransitions),
            Err(VssError::Ambiguous { row: 4, col: 1 })
        ));
    }

    #[test]
    fn predictions() {
        let p = predict_first_vertex(&curve(f2(), "7:1,3:1")).unwrap();
        assert_eq!(p.vertex, Some(Vertex::integral(3, 1)));
        let p = predict_first_vertex(&curve(f2(), "13:1,11:1")).unwrap();
        assert_eq!(p.vertex, Some(Vertex::integral(6, 2)));
        assert_eq!(p.sigma, [1, 2, 3, 4, 6, 8]);
        assert_eq!(p.density, Exact(Rational::new(1, 3)));
    }

    #[test]
    fn weight_bounds() {
        assert_eq!(weight_bound(Rational::new(1, 3), 13), 2);
        assert!(weight_bound(Rational::new(2, 9), 61) >= 2);
    }
}
