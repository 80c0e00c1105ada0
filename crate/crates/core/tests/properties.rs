//! Randomized invariants of every layer, driven by proptest over small
//! matrices and generator seeds.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use sesq_core::cohomology::{ascend, carrier_cohomology, godement};
use sesq_core::intlin::module::{quotient, tensor, Subgroup};
use sesq_core::intlin::{smith_normal_form, FgModule, IntMatrix, Vector, ZAlgebra};
use sesq_core::scheme::random::{sheaf, sheaf_hom};
use sesq_core::scheme::{CongruenceScheme, FiniteSpace};
use sesq_core::sesquiad::catalog::test_sesquiads;
use sesq_core::sesquiad::{congruence_generated, localize, Sesquiad, DEFAULT_SPEC_BOUND};
use sesq_core::smodule::random::{hom, module, rng, sub_points, Shape};
use sesq_core::smodule::{full_closure, product, quotient as module_quotient, ModuleHom};

fn matrix(rows: usize, cols: usize, entries: &[i64]) -> IntMatrix {
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|r| entries[r * cols..(r + 1) * cols].to_vec())
        .collect();
    IntMatrix::from_rows(&data)
}

fn small_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec(-6i64..=6, r * c).prop_map(move |e| matrix(r, c, &e))
    })
}

fn big(v: &[i64]) -> Vector {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn test_sesquiad(i: usize) -> Arc<Sesquiad> {
    let all = test_sesquiads();
    Arc::new(all[i % all.len()].1.clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_reconstructs(m in small_matrix()) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert!(s.u.is_unimodular() && s.v.is_unimodular());
        let diag: Vec<BigInt> = (0..m.rows().min(m.cols())).map(|i| s.d.row(i)[i].clone()).collect();
        for w in diag.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()));
        }
    }

    #[test]
    fn membership_matches_projection(m in small_matrix(), v in prop::collection::vec(-8i64..=8, 4)) {
        let n = m.rows();
        let ambient = FgModule::new(n, vec![big(&vec![3; n])]);
        let s = Subgroup::generated(&ambient, m.columns()).unwrap();
        let (q, proj) = quotient(&ambient, &s).unwrap();
        let v = big(&v[..n]);
        prop_assert_eq!(s.member(&v).unwrap(), q.is_zero_element(&proj.mul_vec(&v)));
    }

    #[test]
    fn tensor_is_symmetric(a in prop::collection::vec(0i64..=12, 1..=2), b in prop::collection::vec(0i64..=12, 1..=2)) {
        let z = ZAlgebra::integers();
        let group = |orders: &[i64]| {
            let n = orders.len();
            let rels = orders.iter().enumerate().map(|(i, &d)| {
                let mut v = vec![BigInt::zero(); n];
                v[i] = BigInt::from(d);
                v
            });
            FgModule::new(n, rels.collect::<Vec<_>>()).with_integer_action()
        };
        let (x, y) = (group(&a), group(&b));
        prop_assert_eq!(tensor(&x, &y, &z).unwrap().invariants(), tensor(&y, &x, &z).unwrap().invariants());
    }

    #[test]
    fn units_are_closed_under_products(n in 2i64..=30, x in 0i64..30, y in 0i64..30) {
        let r = ZAlgebra::zmod(n);
        let (x, y) = (big(&[x]), big(&[y]));
        prop_assert!(r.is_unit(r.unit()));
        if r.is_unit(&x) && r.is_unit(&y) {
            prop_assert!(r.is_unit(&r.mul(&x, &y)));
        }
    }

    #[test]
    fn ideals_are_action_stable(i in 0usize..5, picks in prop::collection::vec(0usize..8, 0..3)) {
        let a = test_sesquiad(i);
        let r = a.universal();
        let gens: Vec<Vector> = picks.iter().map(|&k| a.embed(k % a.len()).clone()).collect();
        let ideal = r.ideal_generated(&gens);
        for b in ideal.lattice().basis() {
            for k in 0..a.len() {
                prop_assert!(ideal.member(&r.mul(a.embed(k), b)).unwrap());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn saturation_is_idempotent(i in 0usize..5) {
        let a = test_sesquiad(i);
        let once = a.saturate();
        let twice = once.saturate();
        prop_assert_eq!(once.facts(), twice.facts());
        prop_assert_eq!(once.universal().as_module().invariants(), twice.universal().as_module().invariants());
    }

    #[test]
    fn congruences_are_ideal_fibers(i in 0usize..5, x in 0usize..8, y in 0usize..8) {
        let a = test_sesquiad(i);
        let (x, y) = (x % a.len(), y % a.len());
        for c in a.all_congruences(DEFAULT_SPEC_BOUND).unwrap() {
            let d: Vector = a.embed(x).iter().zip(a.embed(y)).map(|(u, v)| u - v).collect();
            prop_assert_eq!(c.related(x, y), c.ideal().contains(&d));
            prop_assert_eq!(congruence_generated(&a, &c.generating_pairs(&a)), c);
        }
    }

    #[test]
    fn simple_means_trivial_spectrum(i in 0usize..5) {
        let a = test_sesquiad(i);
        let (primes, _) = a.spec_c(DEFAULT_SPEC_BOUND).unwrap();
        let only_diagonal = primes.len() == 1 && primes[0].is_diagonal();
        prop_assert_eq!(a.is_simple(DEFAULT_SPEC_BOUND).unwrap(), only_diagonal);
    }

    #[test]
    fn kernels_and_cokernels_of_full_maps_are_full(i in 0usize..5, seed in any::<u64>()) {
        let a = test_sesquiad(i);
        let mut r = rng(seed);
        let f = hom(&mut r, &a, &Shape::default());
        prop_assume!(f.is_full());
        prop_assert!(f.kernel().unwrap().is_full());
        prop_assert!(f.cokernel().unwrap().is_full());
    }

    #[test]
    fn full_submodules_are_kernels(i in 0usize..5, seed in any::<u64>()) {
        let a = test_sesquiad(i);
        let mut r = rng(seed);
        let s = module(&mut r, &a, &Shape::default());
        let u = sub_points(&mut r, &s);
        let q = module_quotient(&s, &u).unwrap();
        let z = q.target.zero_index();
        let ker: Vec<usize> = (0..s.len()).filter(|&p| q.point_map[p] == z).collect();
        prop_assert_eq!(&ker, &full_closure(&s, &u));
        prop_assert_eq!(full_closure(&s, &u) == u, ker == u);
    }

    #[test]
    fn products_have_pairing_maps(i in 0usize..5, seed in any::<u64>()) {
        let a = test_sesquiad(i);
        let mut r = rng(seed);
        let g = hom(&mut r, &a, &Shape::finite(16));
        let h = hom(&mut r, &a, &Shape::finite(16));
        // pair two maps out of a common source: g and the zero map
        let zero = ModuleHom::zero(&g.source, &h.target).unwrap();
        let (p, ps, pt) = product(&g.target, &h.target).unwrap();
        let pairing: Vec<usize> = (0..g.source.len())
            .map(|x| {
                (0..p.len())
                    .find(|&k| ps.point_map[k] == g.point_map[x] && pt.point_map[k] == zero.point_map[x])
                    .expect("the product contains every pair")
            })
            .collect();
        let u = ModuleHom::new(&g.source, &p, pairing).unwrap();
        prop_assert_eq!(u.then(&ps).unwrap().point_map, g.point_map.clone());
        prop_assert!(u.then(&pt).unwrap().is_zero());
    }

    #[test]
    fn strongness_passes_through_tensoring(i in 0usize..5, seed in any::<u64>()) {
        let a = test_sesquiad(i);
        let small = Shape { max_generators: 1, max_relations: 1, max_extra_points: 1, coefficient: 2, finite_cap: Some(8) };
        let mut r = rng(seed);
        let f = hom(&mut r, &a, &small);
        prop_assume!(f.is_strong().unwrap());
        let m = module(&mut r, &a, &small);
        let (_, _, one_f) = ModuleHom::identity(&m).tensor(&f).unwrap();
        prop_assert!(one_f.is_strong().unwrap());
    }
}

fn spaces() -> Vec<FiniteSpace> {
    (1..=4).flat_map(FiniteSpace::all_posets).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sheaf_kernels_and_cokernels_compose_to_zero(k in 0usize..100, seed in any::<u64>()) {
        let spaces = spaces();
        let a = test_sesquiad(0);
        let x = Arc::new(CongruenceScheme::constant(spaces[k % spaces.len()].clone(), a).unwrap());
        let mut r = rng(seed);
        let h = sheaf_hom(&mut r, &x, &Shape::default()).unwrap();
        let ker = h.kernel().unwrap();
        let coker = h.cokernel().unwrap();
        prop_assert!(ker.then(&h).unwrap().is_zero());
        prop_assert!(h.then(&coker).unwrap().is_zero());
        prop_assert!(ker.maps.iter().all(ModuleHom::is_point_injective));
        prop_assert!(coker.maps.iter().all(ModuleHom::is_point_surjective));
        // stalks are sections over minimal open sets
        prop_assert!(!h.is_full_on_opens().unwrap() || h.is_full_on_stalks());
    }

    #[test]
    fn cohomology_is_additive(k in 0usize..100, seed in any::<u64>()) {
        let spaces = spaces();
        let a = test_sesquiad(0);
        let x = Arc::new(CongruenceScheme::constant(spaces[k % spaces.len()].clone(), a).unwrap());
        let mut r = rng(seed);
        let f = ascend(&sheaf(&mut r, &x, &Shape::default()).unwrap()).unwrap();
        let g = ascend(&sheaf(&mut r, &x, &Shape::default()).unwrap()).unwrap();
        let sum = carrier_cohomology(&f.direct_sum(&g).unwrap()).unwrap();
        let hf = carrier_cohomology(&f).unwrap();
        let hg = carrier_cohomology(&g).unwrap();
        for p in 0..sum.len() {
            prop_assert_eq!(sum[p].invariants(), hf[p].invariants().direct_sum(&hg[p].invariants()));
        }
    }

    #[test]
    fn resolutions_square_to_zero(k in 0usize..100, seed in any::<u64>()) {
        let spaces = spaces();
        let a = test_sesquiad(0);
        let x = Arc::new(CongruenceScheme::constant(spaces[k % spaces.len()].clone(), a).unwrap());
        let mut r = rng(seed);
        let f = ascend(&sheaf(&mut r, &x, &Shape::default()).unwrap()).unwrap();
        let res = godement(&f, x.dimension() + 3).unwrap();
        let c = &res.complex;
        for (kk, w) in c.differentials.windows(2).enumerate() {
            let dd = w[1].mul(&w[0]);
            let target = &c.groups[kk + 2];
            prop_assert!(dd.columns().iter().all(|v| target.is_zero_element(v)));
        }
    }

    #[test]
    fn cohomology_vanishes_above_dimension(k in 0usize..100, seed in any::<u64>()) {
        let spaces = spaces();
        let a = test_sesquiad(0);
        let x = Arc::new(CongruenceScheme::constant(spaces[k % spaces.len()].clone(), a).unwrap());
        let mut r = rng(seed);
        let f = ascend(&sheaf(&mut r, &x, &Shape::default()).unwrap()).unwrap();
        let h = carrier_cohomology(&f).unwrap();
        prop_assert!(h.iter().skip(x.dimension() + 1).all(FgModule::is_zero_module));
    }
}

#[test]
fn spectrum_stalks_are_localizations() {
    for (name, a) in test_sesquiads() {
        let a = Arc::new(a);
        let x = CongruenceScheme::spec(&a, DEFAULT_SPEC_BOUND).unwrap();
        let primes = x.primes().expect("a spectrum records its primes").to_vec();
        for (i, p) in primes.iter().enumerate() {
            let l = localize(&a, p).unwrap();
            let stalk = x.stalk(i);
            assert_eq!(
                stalk.len(),
                l.local.len(),
                "{name}: stalk size at prime {i}"
            );
            assert_eq!(
                stalk.universal().as_module().invariants(),
                l.local.universal().as_module().invariants(),
                "{name}: stalk ring at prime {i}"
            );
        }
    }
}

#[test]
fn constant_sheaf_on_a_point_has_no_higher_cohomology() {
    let a = test_sesquiad(0);
    let x = Arc::new(CongruenceScheme::constant(FiniteSpace::point(), a).unwrap());
    let mut r = rng(5);
    let f = ascend(&sheaf(&mut r, &x, &Shape::default()).unwrap()).unwrap();
    let h = carrier_cohomology(&f).unwrap();
    assert!(h.iter().skip(1).all(FgModule::is_zero_module));
    assert_eq!(h[0].invariants(), f.global_sections().unwrap().invariants());
}
