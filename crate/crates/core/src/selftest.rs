//! The invariant suite, runnable from the command line as well as from tests.
//! Every check is exhaustive over a fixed small family, or seeded.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::field::FieldCtx;
use crate::modsolve::{
    density, irreducible_solutions, sigma, solutions_of_weight, support_sum_lower_bound, ExponentSet, ModSolution,
};
use crate::rational::Rational;
use crate::sweep::{Domain, SweepSpec};
use crate::vss::{rank, EntryRule, MinimalStructure, MinimalSupportMatrix, SemilinearMap, StructureCache};
use crate::zeta::{l_polynomial, l_polynomial_verified, CurvePoly};

/// Failures kept per check; the count is always exact.
const KEEP: usize = 8;

#[derive(Clone, Debug, Default, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub cases: u64,
    pub failed: u64,
    pub examples: Vec<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check { name, ..Default::default() }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failed += 1;
            if self.examples.len() < KEEP {
                self.examples.push(detail());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0 && self.cases > 0
    }
}

fn all_curves(a: u32, g: u32) -> Vec<CurvePoly> {
    SweepSpec::exhaustive(a, g).curves().expect("small exhaustive family")
}

fn random_curves(a: u32, g_max: u32, count: u64, seed: u64) -> Vec<CurvePoly> {
    let spec = SweepSpec { genus_max: g_max, domain: Domain::Random { seed, count }, ..SweepSpec::exhaustive(a, 1) };
    spec.curves().expect("seeded family")
}

/// Nonempty subsets of the odd numbers up to 13.
fn small_sets() -> Vec<ExponentSet> {
    let odds: Vec<u32> = (1..=13).step_by(2).collect();
    (1u32..1 << odds.len())
        .map(|mask| {
            ExponentSet::new(odds.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &d)| d)).unwrap()
        })
        .collect()
}

/// Solutions gathered from sigma witnesses (l <= 12) and minimal
/// enumerations over every nonempty D of odd numbers up to 13.
fn solution_corpus() -> Vec<ModSolution> {
    let mut out = BTreeSet::new();
    for set in small_sets() {
        for len in 1..=12 {
            out.insert(sigma(&set, len).expect("length in range").witness);
        }
        if let Ok(s) = MinimalStructure::compute(&set) {
            out.extend(s.solutions.iter().cloned());
        }
    }
    out.into_iter().collect()
}

pub fn digit_identity(corpus: &[ModSolution]) -> Check {
    let mut c = Check::new("digit identity");
    for s in corpus {
        let total_ok = s.total() % ((1u128 << s.length()) - 1) == 0;
        c.record(total_ok && s.satisfies_digit_identity(), || format!("{s:?}"));
    }
    c
}

pub fn shift_equivariance(corpus: &[ModSolution]) -> Check {
    let mut c = Check::new("shift equivariance");
    for s in corpus {
        for k in 0..s.length() {
            let ok = s.shifted(k).support() == s.support().rotated(k as usize);
            c.record(ok, || format!("{s:?} shift {k}"));
        }
    }
    c
}

pub fn support_sum_bound(corpus: &[ModSolution]) -> Check {
    let mut c = Check::new("support-sum lower bound");
    for s in corpus.iter().filter(|s| s.is_irreducible()) {
        let phi = s.support();
        let jumps = phi.jumps().len() as u32;
        if jumps >= s.length() {
            continue;
        }
        let bound = support_sum_lower_bound(jumps, s.length()).expect("1 <= s < l");
        c.record(u128::from(phi.total()) >= bound, || format!("{s:?}: |phi| {} < {bound}", phi.total()));
    }
    c
}

/// Every sigma(D, l)/l is at least the certified density.
pub fn density_minimality() -> Check {
    let mut c = Check::new("density minimality");
    for set in small_sets() {
        let d = density(&set, 20).expect("length in range");
        for len in 1..=20 {
            let s = sigma(&set, len).expect("length in range");
            let ok = Rational::new(i64::from(s.weight), i64::from(len)) >= d.density.0;
            c.record(ok && d.certified, || format!("{set} l={len}"));
        }
    }
    c
}

/// Structured enumeration against the residue backtracking at every
/// length up to 12, for each D of odd numbers up to 13.
pub fn enumeration_equivalence() -> Check {
    let mut c = Check::new("structured vs exhaustive enumeration");
    for set in small_sets() {
        for len in 1..=12 {
            let w = sigma(&set, len).expect("length in range").weight;
            let structured = irreducible_solutions(&set, len, w, true).expect("length in range");
            let exhaustive: Vec<ModSolution> = solutions_of_weight(&set, len, w)
                .expect("length in range")
                .into_iter()
                .filter(ModSolution::is_irreducible)
                .collect();
            c.record(structured == exhaustive, || format!("{set} l={len} w={w}"));
        }
    }
    c
}

/// Functional equation and Weil bound from all 2g sums, g <= 5 over F_2
/// and g <= 3 over F_4.
pub fn weil_and_functional_equation() -> Check {
    let mut c = Check::new("functional equation and Weil bound");
    for (a, g_max) in [(1, 5), (2, 3)] {
        for g in 1..=g_max {
            for f in all_curves(a, g) {
                let r = l_polynomial_verified(&f);
                c.record(r.is_ok(), || format!("{f}: {:?}", r.err()));
            }
        }
    }
    c
}

/// L = 1 mod 2 in positive degrees: every curve with g <= 8 over F_2 or
/// g <= 4 over F_4, and 200 seeded curves with g <= 6 over F_4.
pub fn two_rank_zero() -> Check {
    let mut c = Check::new("2-rank 0 parity");
    let exhaustive =
        [(1, 8), (2, 4)].into_iter().flat_map(|(a, g_max)| (1..=g_max).flat_map(move |g| all_curves(a, g)));
    for f in exhaustive.chain(random_curves(2, 6, 200, 11)) {
        let ok = l_polynomial(&f).is_ok_and(|l| l.has_two_rank_zero());
        c.record(ok, || f.to_string());
    }
    c
}

/// First slope at least 1/n whenever 2^n - 1 <= 2g+1 <= 2^(n+1) - 3, over
/// F_2 for n = 3 and 4.
pub fn first_slope_bound() -> Check {
    let mut c = Check::new("first slope bound");
    for g in 3..=14 {
        let n = (2 * g + 2u32).ilog2();
        let spec = SweepSpec::exhaustive(1, g).with_predictors([crate::sweep::Predictor::Oracle]);
        let out = crate::sweep::run_sweep(&spec, None).expect("exhaustive family");
        for r in out.records {
            let v = r.oracle.expect("oracle ran");
            c.record(v.slope() >= Rational::new(1, i64::from(n)), || format!("{}: {v}", r.coeffs));
        }
    }
    c
}

fn matrices(a: u32, g_max: u32) -> Vec<(FieldCtx, MinimalSupportMatrix)> {
    let cache = StructureCache::default();
    let mut out = Vec::new();
    for g in 1..=g_max {
        for f in all_curves(a, g) {
            let Ok(set) = crate::vss::effective_set(&f) else { continue };
            let Ok(s) = cache.get(&set) else { continue };
            if let Ok(m) = MinimalSupportMatrix::build(&s.solutions, &f, EntryRule::default()) {
                out.push((*f.ctx(), m));
            }
        }
    }
    out
}

/// Image chain never grows and stabilizes within N steps.
pub fn image_chain() -> Check {
    let mut c = Check::new("image chain monotonicity");
    for (a, g_max) in [(1, 8), (2, 4)] {
        for (ctx, m) in matrices(a, g_max) {
            let dims = m.semilinear_map(ctx).image_chain();
            let ok = dims.windows(2).all(|w| w[1] <= w[0]) && dims.len() <= m.len() + 2;
            c.record(ok, || format!("{:?}: {dims:?}", m.sigma));
        }
    }
    c
}

/// Over F_2 the stable dimension is the rank of M^N.
pub fn f2_rank_cross_check() -> Check {
    let mut c = Check::new("F_2 stable dimension equals rank of M^N");
    for (ctx, m) in matrices(1, 8) {
        let n = m.len();
        let mut power: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect();
        for _ in 0..n {
            power = (0..n)
                .map(|i| (0..n).map(|j| (0..n).fold(0, |acc, k| acc ^ (power[i][k] & m.entries[k][j]))).collect())
                .collect();
        }
        let dim = m.semilinear_map(ctx).stable_dim();
        c.record(dim == rank(&ctx, &power), || format!("{:?}", m.sigma));
    }
    c
}

/// Squaring and q-power twists give the same stable dimension over F_4 up to
/// genus 4. From genus 5 on they can differ (see the vss integration tests).
pub fn twist_independence() -> Check {
    let mut c = Check::new("twist independence over F_4");
    for (ctx, m) in matrices(2, 4) {
        let map = m.semilinear_map(ctx);
        let dims: Vec<usize> = (0..=ctx.degree()).map(|t| map.clone().with_twist(t).stable_dim()).collect();
        c.record(dims.windows(2).all(|w| w[0] == w[1]), || format!("{:?}: {dims:?}", m.sigma));
    }
    c
}

/// phi(lambda v + w) = lambda^2 phi(v) + phi(w) over F_4 and F_8, every
/// lambda, seeded matrices and vectors.
pub fn semilinearity() -> Check {
    let mut c = Check::new("semilinearity");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for a in [2, 3] {
        let ctx = FieldCtx::new(a).expect("small field");
        let q = ctx.order();
        for n in 1..=6 {
            for _ in 0..8 {
                let mut random_vec = || (0..n).map(|_| rng.random_range(0..q)).collect::<Vec<u64>>();
                let matrix: Vec<Vec<u64>> = (0..n).map(|_| random_vec()).collect();
                let (v, w) = (random_vec(), random_vec());
                let map = SemilinearMap::new(ctx, matrix, 1);
                for lambda in 0..q {
                    let lv: Vec<u64> = v.iter().zip(&w).map(|(&x, &y)| ctx.mul_bits(lambda, x) ^ y).collect();
                    let l2 = ctx.square_bits(lambda);
                    let expect: Vec<u64> =
                        map.apply(&v).iter().zip(map.apply(&w)).map(|(&x, y)| ctx.mul_bits(l2, x) ^ y).collect();
                    c.record(map.apply(&lv) == expect, || format!("a={a} n={n} lambda={lambda}"));
                }
            }
        }
    }
    c
}

/// Every check, in a fixed order.
pub fn run_all() -> Vec<Check> {
    let corpus = solution_corpus();
    vec![
        digit_identity(&corpus),
        shift_equivariance(&corpus),
        support_sum_bound(&corpus),
        density_minimality(),
        enumeration_equivalence(),
        weil_and_functional_equation(),
        two_rank_zero(),
        first_slope_bound(),
        image_chain(),
        f2_rank_cross_check(),
        twist_independence(),
        semilinearity(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_checks_pass() {
        let corpus: Vec<ModSolution> = ["odd<=13", "3,5,11", "1"]
            .iter()
            .flat_map(|s| {
                let set: ExponentSet = s.parse().unwrap();
                (1..=8).map(move |l| sigma(&set, l).unwrap().witness)
            })
            .collect();
        assert!(digit_identity(&corpus).passed());
        assert!(shift_equivariance(&corpus).passed());
    }

    #[test]
    fn semilinearity_passes() {
        let c = semilinearity();
        assert!(c.passed(), "{:?}", c.examples);
    }

    #[test]
    fn failures_are_counted() {
        let mut c = Check::new("x");
        for i in 0..20 {
            c.record(i % 2 == 0, || i.to_string());
        }
        assert_eq!((c.cases, c.failed, c.examples.len()), (20, 10, KEEP));
        assert!(!c.passed());
        assert!(!Check::new("empty").passed());
    }
}
