use proptest::prelude::*;

use mmlip_core::gen;
use mmlip_core::maps;
use mmlip_core::order::{self, SearchBudget};
use mmlip_core::prokhorov::{prokhorov, prokhorov_by_subsets};
use mmlip_core::rational::{int, rat, Rational};
use mmlip_core::transport::{compose, compose_pair_sets, glue, max_coupling_mass};
use mmlip_core::{FiniteMMSpace, PairSet, PointMap};

fn space(max: usize) -> impl Strategy<Value = FiniteMMSpace> {
    (any::<u64>(), 1..=max, 1i64..=4, prop::sample::select(vec![2u32, 5, 64]))
        .prop_map(|(seed, n, d, g)| gen::random(seed, n, &rat(d, 2), g).unwrap())
}

fn pair_set(rows: usize, cols: usize, bits: u64) -> PairSet {
    PairSet::new(rows, cols, (0..rows * cols).filter(|p| bits >> p & 1 == 1).map(|p| (p / cols, p % cols))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_spaces_are_metric(x in space(6)) {
        let n = x.len();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(x.dist(i, j), x.dist(j, i));
                prop_assert_eq!(*x.dist(i, j) == int(0), i == j);
                for k in 0..n {
                    prop_assert!(x.dist(i, k) <= &(x.dist(i, j) + x.dist(j, k)));
                }
            }
        }
        prop_assert!(x.is_canonical());
    }

    #[test]
    fn coupling_mass_is_monotone(x in space(3), y in space(3), a in any::<u64>(), b in any::<u64>()) {
        let small = pair_set(x.len(), y.len(), a & b);
        let large = pair_set(x.len(), y.len(), a);
        let (vs, cs) = max_coupling_mass(&x, &y, &small).unwrap();
        let (vl, cl) = max_coupling_mass(&x, &y, &large).unwrap();
        prop_assert!(vs <= vl);
        cs.check_marginals(x.mass(), y.mass()).unwrap();
        cl.check_marginals(x.mass(), y.mass()).unwrap();
        prop_assert_eq!(cl.mass_on(&large), vl);
    }

    #[test]
    fn gluing_projects_back(x in space(3), y in space(3), z in space(3), a in any::<u64>(), b in any::<u64>()) {
        let (_, sigma) = max_coupling_mass(&x, &y, &pair_set(x.len(), y.len(), a)).unwrap();
        let (_, tau) = max_coupling_mass(&y, &z, &pair_set(y.len(), z.len(), b)).unwrap();
        let t = glue(&sigma, &tau).unwrap();
        prop_assert_eq!(t.marginal_12(), sigma.clone());
        prop_assert_eq!(t.marginal_23(), tau.clone());
        prop_assert_eq!(t.marginal_13(), compose(&sigma, &tau).unwrap());
        let s = pair_set(x.len(), y.len(), a.rotate_left(7));
        let r = pair_set(y.len(), z.len(), b.rotate_left(3));
        prop_assert!(t.mass_on_cylinder(&s, &r) >= sigma.mass_on(&s) + tau.mass_on(&r) - int(1));
    }

    #[test]
    fn graphs_compose_like_maps(n in 1usize..5, m in 1usize..5, k in 1usize..5, seed in any::<u64>()) {
        let f = PointMap::new((0..n).map(|i| (seed as usize >> i) % m).collect(), m).unwrap();
        let g = PointMap::new((0..m).map(|i| (seed as usize >> (i + 8)) % k).collect(), k).unwrap();
        let composed = compose_pair_sets(&PairSet::graph(&f), &PairSet::graph(&g)).unwrap();
        prop_assert_eq!(composed, PairSet::graph(&f.then(&g).unwrap()));
    }

    #[test]
    fn prokhorov_matches_definition(x in space(4), a in any::<u64>(), b in any::<u64>()) {
        let n = x.len();
        let weights = |s: u64| -> Vec<Rational> {
            let w: Vec<i64> = (0..n).map(|i| (s >> (4 * i) & 7) as i64).collect();
            let total: i64 = w.iter().sum();
            if total == 0 { x.mass().to_vec() } else { w.iter().map(|&v| rat(v, total)).collect() }
        };
        let (mu, nu) = (weights(a), weights(b));
        prop_assert_eq!(prokhorov(&x, &mu, &nu).unwrap(), prokhorov_by_subsets(&x, &mu, &nu).unwrap());
    }

    #[test]
    fn unilateral_box_is_below_box(x in space(4), y in space(4)) {
        let budget = SearchBudget::default();
        let (u, w) = order::unilateral_box(&x, &y, &budget).unwrap();
        let (b, wb) = order::box_metric(&x, &y, &budget).unwrap();
        w.verify(&x, &y).unwrap();
        wb.verify_box(&x, &y).unwrap();
        prop_assert!(u <= b);
        let (back, _) = order::box_metric(&y, &x, &budget).unwrap();
        prop_assert_eq!(back, b);
        prop_assert_eq!(order::unilateral_box(&x, &x, &budget).unwrap().0, int(0));
    }

    #[test]
    fn scaling_down_is_dominated(x in space(4), c in 1i64..=4) {
        let shrunk = gen::scaled(&x, &rat(c, 4)).unwrap();
        let f = order::check_lipschitz_order(&x, &shrunk, &SearchBudget::default()).unwrap();
        prop_assert_eq!(f, Some(PointMap::identity(x.len())));
    }

    #[test]
    fn discretization_bounds(x in space(4), t in prop::sample::select(vec![rat(1, 8), rat(1, 4), rat(1, 2), int(1), int(4)])) {
        let d = maps::discretize(&x, &t).unwrap();
        let radius = &t / int(2);
        prop_assert!(x.measure(&x.neighborhood(&d.net, &radius, true).unwrap()) >= int(1) - &radius);
        prop_assert!(d.prokhorov <= radius);
        prop_assert!(d.verify_box(&x, &SearchBudget::default()).unwrap() <= t);
    }

    #[test]
    fn ky_box_is_attained(x in space(3), y in space(3)) {
        let budget = SearchBudget::default();
        let (k, w) = order::ky_unilateral_box(&x, &y, &budget).unwrap();
        w.verify(&x, &y).unwrap();
        prop_assert!(order::check_ky_order(&x, &y, &k, &budget).unwrap().is_some());
        let (error, _) = maps::ky_error(&x, &y, &w.map).unwrap();
        prop_assert_eq!(error, k);
    }
}
