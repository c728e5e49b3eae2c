use np2::field::FieldCtx;
use np2::modsolve::{
    irreducible_solutions, sigma, sigma_bfs, solutions_of_weight, support_sum_lower_bound, ExponentSet, ModSolution,
};
use np2::rational::{Rational, Vertex};
use np2::vss::{effective_set, predict_first_vertex, EntryRule, MinimalSupportMatrix, SemilinearMap, StructureCache};
use np2::zeta::{exponential_sum, l_polynomial, l_polynomial_verified, CurvePoly};
use num_bigint::BigInt;
use proptest::prelude::*;

fn odd_set(max_index: u32, max_len: usize) -> impl Strategy<Value = ExponentSet> {
    prop::collection::btree_set(0..max_index, 1..=max_len)
        .prop_map(|idx| ExponentSet::new(idx.into_iter().map(|i| 2 * i + 1)).unwrap())
}

/// (q degree, genus, code) for a curve with nonzero leading coefficient.
fn curve(a_max: u32, g_min: u32, g_max: u32) -> impl Strategy<Value = CurvePoly> {
    (1..=a_max, g_min..=g_max).prop_flat_map(|(a, g)| {
        let q = 1u64 << a;
        (Just(a), Just(g), 1..q, 0..q.pow(g)).prop_map(|(a, g, lead, rest)| {
            let ctx = FieldCtx::new(a).unwrap();
            CurvePoly::from_code(ctx, g, rest | lead << (g * a)).unwrap()
        })
    })
}

fn revalidates(s: &ModSolution) -> bool {
    s.total() > 0 && s.total().is_multiple_of((1u128 << s.length()) - 1) && s.satisfies_digit_identity()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sigma_witness_satisfies_digit_identity(set in odd_set(15, 6), len in 1u32..=12) {
        let s = sigma(&set, len).unwrap();
        prop_assert!(revalidates(&s.witness));
        prop_assert_eq!(s.witness.weight(), s.weight);
        prop_assert!(s.witness.exponents().all(|d| set.contains(d)));
        prop_assert_eq!(sigma_bfs(&set, len).unwrap(), s.weight);
    }

    #[test]
    fn shifting_rotates_the_support(set in odd_set(15, 6), len in 1u32..=12, k in 0u32..12) {
        let w = sigma(&set, len).unwrap().witness;
        prop_assert_eq!(w.shifted(k).support(), w.support().rotated(k as usize));
        prop_assert_eq!(w.shifted(k).canonical(), w.canonical());
        prop_assert!(revalidates(&w.shifted(k)));
    }

    #[test]
    fn structured_enumeration_matches_exhaustive(set in odd_set(15, 5), len in 1u32..=10) {
        let w = sigma(&set, len).unwrap().weight;
        let structured = irreducible_solutions(&set, len, w, true).unwrap();
        let exhaustive: Vec<ModSolution> =
            solutions_of_weight(&set, len, w).unwrap().into_iter().filter(ModSolution::is_irreducible).collect();
        prop_assert_eq!(&structured, &exhaustive);
        for s in &structured {
            prop_assert!(revalidates(s));
            let phi = s.support();
            let jumps = phi.jumps().len() as u32;
            if jumps < len {
                prop_assert!(u128::from(phi.total()) >= support_sum_lower_bound(jumps, len).unwrap());
            }
        }
    }

    #[test]
    fn l_polynomial_invariants(f in curve(2, 1, 4)) {
        prop_assume!(f.ctx().degree() * f.genus() <= 8);
        let l = l_polynomial_verified(&f).unwrap();
        prop_assert!(l.check_functional_equation().is_ok());
        prop_assert!(l.check_weil_bound().is_ok());
        prop_assert!(l.has_two_rank_zero());
        prop_assert_eq!(&l, &l_polynomial(&f).unwrap());
        let slopes = l.newton_polygon().slopes();
        prop_assert!(slopes.windows(2).all(|w| w[0] < w[1]));
        let mut mirrored: Vec<Rational> = slopes.iter().map(|s| Rational::from_integer(1) - s).collect();
        mirrored.reverse();
        prop_assert_eq!(slopes, mirrored);
    }

    #[test]
    fn first_slope_is_at_least_one_over_n(f in curve(1, 3, 10)) {
        let n = (2 * f.genus() + 2).ilog2();
        let v = l_polynomial(&f).unwrap().newton_polygon().first_vertex().unwrap();
        prop_assert!(v.slope() >= Rational::new(1, i64::from(n)));
    }

    #[test]
    fn vss_agrees_with_oracle_over_f4(f in curve(2, 1, 5)) {
        let p = predict_first_vertex(&f).unwrap();
        if let Some(v) = p.vertex {
            prop_assert_eq!(v, l_polynomial(&f).unwrap().newton_polygon().first_vertex().unwrap());
        }
    }

    #[test]
    fn map_is_semilinear(
        a in 2u32..=3,
        n in 1usize..=6,
        seed in prop::collection::vec(any::<u64>(), 3 * 36 + 1),
    ) {
        let ctx = FieldCtx::new(a).unwrap();
        let q = ctx.order();
        let mut it = seed.into_iter().map(|x| x % q);
        let matrix: Vec<Vec<u64>> = (0..n).map(|_| (0..n).map(|_| it.next().unwrap()).collect()).collect();
        let v: Vec<u64> = (0..n).map(|_| it.next().unwrap()).collect();
        let w: Vec<u64> = (0..n).map(|_| it.next().unwrap()).collect();
        let lambda = it.next().unwrap();
        let map = SemilinearMap::new(ctx, matrix, 1);
        let combo: Vec<u64> = v.iter().zip(&w).map(|(&x, &y)| ctx.mul_bits(lambda, x) ^ y).collect();
        let l2 = ctx.square_bits(lambda);
        let expect: Vec<u64> = map.apply(&v).iter().zip(map.apply(&w)).map(|(&x, y)| ctx.mul_bits(l2, x) ^ y).collect();
        prop_assert_eq!(map.apply(&combo), expect);
        let dims = map.image_chain();
        prop_assert!(dims.windows(2).all(|p| p[1] <= p[0]));
        prop_assert!(dims.len() <= n + 2);
        prop_assert_eq!(dims[0], n);
    }

    /// Arbitrary matrices can tell the twists apart; curve matrices of
    /// genus at most 4 cannot.
    #[test]
    fn twist_does_not_matter_for_small_curve_matrices(f in curve(2, 1, 4)) {
        let cache = StructureCache::default();
        let s = cache.get(&effective_set(&f).unwrap()).unwrap();
        let m = MinimalSupportMatrix::build(&s.solutions, &f, EntryRule::default()).unwrap();
        let map = m.semilinear_map(*f.ctx());
        prop_assert_eq!(map.clone().with_twist(2).stable_dim(), map.stable_dim());
        prop_assert_eq!(map.clone().with_twist(0).stable_dim(), map.stable_dim());
    }
}

/// (squaring dim, q-power dim) for a curve over F_4, plus its first vertex.
fn twisted_dims(coeffs: &str) -> (usize, usize, Vertex) {
    let f = CurvePoly::parse(FieldCtx::new(2).unwrap(), coeffs).unwrap();
    let s = StructureCache::default().get(&effective_set(&f).unwrap()).unwrap();
    let map = MinimalSupportMatrix::build(&s.solutions, &f, EntryRule::default()).unwrap().semilinear_map(*f.ctx());
    let v = l_polynomial(&f).unwrap().newton_polygon().first_vertex().unwrap();
    (map.stable_dim(), map.with_twist(2).stable_dim(), v)
}

#[test]
fn only_the_squaring_twist_matches_the_point_count() {
    let (sq, lin, v) = twisted_dims("11:2,9:1,5:1");
    assert_eq!((sq, lin, v), (5, 0, Vertex::integral(5, 2)));
    let (sq, lin, v) = twisted_dims("11:2,9:1,5:2,1:1");
    assert_eq!((sq, lin, v), (0, 5, Vertex::integral(10, 5)));
    let (sq, lin, v) = twisted_dims("13:1,9:2,5:3");
    assert_eq!((sq, lin, v), (0, 5, Vertex::integral(12, 6)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    /// log L(T) reproduces sum S_m T^m / m through T^{2g}.
    #[test]
    fn exp_log_round_trip(f in curve(2, 1, 4)) {
        prop_assume!(f.ctx().degree() * f.genus() <= 8);
        let l = l_polynomial(&f).unwrap();
        let g = f.genus();
        let direct: Vec<BigInt> = (1..=2 * g).map(|m| BigInt::from(exponential_sum(&f, m).unwrap())).collect();
        prop_assert_eq!(l.power_sums(2 * g as usize), direct);
    }
}
