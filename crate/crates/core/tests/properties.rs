mod common;

use std::sync::Arc;

use proptest::prelude::*;

use gstable::corpus::{generated_submodule, restriction_instance};
use gstable::group::{families, FiniteGroup, Perm};
use gstable::linalg::{FieldMatrix, Subspace};
use gstable::rep::{module_radical_ideal, radical_series, socle_series, Representation, Search};
use gstable::report::{self, Verdict};
use gstable::schreier::{certify_splitting, is_split, CoefficientGroup, SchreierSystem};

fn prime() -> impl Strategy<Value = u32> {
    prop_oneof![Just(2u32), Just(3), Just(5), Just(7)]
}

fn matrix(p: u32, rows: usize, cols: usize) -> impl Strategy<Value = FieldMatrix> {
    proptest::collection::vec(0..p, rows * cols)
        .prop_map(move |e| FieldMatrix::from_entries(p as u64, rows, cols, e).unwrap())
}

fn square_triple() -> impl Strategy<Value = (FieldMatrix, FieldMatrix, FieldMatrix)> {
    (prime(), 1usize..6).prop_flat_map(|(p, n)| (matrix(p, n, n), matrix(p, n, n), matrix(p, n, n)))
}

fn rectangular() -> impl Strategy<Value = (FieldMatrix, FieldMatrix)> {
    (prime(), 1usize..6, 1usize..6).prop_flat_map(|(p, r, c)| (matrix(p, r, c), matrix(p, r, 1)))
}

fn vectors() -> impl Strategy<Value = (u32, usize, Vec<Vec<u32>>, Vec<Vec<u32>>)> {
    (prime(), 1usize..6).prop_flat_map(|(p, n)| {
        let v = proptest::collection::vec(proptest::collection::vec(0..p, n), 0..5);
        (Just(p), Just(n), v.clone(), v)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn products_are_associative((a, b, c) in square_triple()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!((&a * &b).transpose(), &b.transpose() * &a.transpose());
    }

    #[test]
    fn inverses_are_two_sided((a, _, _) in square_triple()) {
        let n = a.rows();
        let p = a.modulus();
        match a.invert().unwrap() {
            Some(inv) => {
                prop_assert!((&a * &inv).is_identity());
                prop_assert!((&inv * &a).is_identity());
                prop_assert_eq!(common::rank(&rows(&a), p), n);
            }
            None => prop_assert!(common::rank(&rows(&a), p) < n),
        }
    }

    #[test]
    fn rank_plus_nullity_is_the_width((a, b) in rectangular()) {
        let p = a.modulus();
        prop_assert_eq!(a.rank(), common::rank(&rows(&a), p));
        let kernel = a.kernel();
        prop_assert_eq!(a.rank() + kernel.len(), a.cols());
        for k in &kernel {
            prop_assert!((&a * k).is_zero());
        }
        match FieldMatrix::solve(&a, &b).unwrap() {
            Some(sol) => {
                prop_assert_eq!(&a * &sol.particular, b.clone());
                prop_assert_eq!(sol.nullspace.len(), kernel.len());
            }
            None => {
                let mut aug = rows(&a);
                for (r, x) in aug.iter_mut().zip(b.col_vec(0)) {
                    r.push(x);
                }
                prop_assert!(common::rank(&aug, p) > a.rank());
            }
        }
    }

    #[test]
    fn subspace_dimensions_add_up((p, n, u, w) in vectors()) {
        let su = Subspace::span(p, n, u.clone());
        let sw = Subspace::span(p, n, w.clone());
        prop_assert_eq!(su.dim(), common::rank(&u, p));
        prop_assert_eq!(su.sum(&sw).dim() + su.intersection(&sw).dim(), su.dim() + sw.dim());
        for v in &u {
            let c = su.coords(v).unwrap();
            prop_assert_eq!(&su.combine(&c), v);
        }
        prop_assert!(su.intersection(&sw).is_subspace_of(&su));
    }

    #[test]
    fn permutations_form_a_group(a in Just((0..6u32).collect::<Vec<_>>()).prop_shuffle(),
                                 b in Just((0..6u32).collect::<Vec<_>>()).prop_shuffle(),
                                 c in Just((0..6u32).collect::<Vec<_>>()).prop_shuffle()) {
        let (a, b, c) = (Perm::new(a).unwrap(), Perm::new(b).unwrap(), Perm::new(c).unwrap());
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert!(a.compose(&a.inverse()).is_identity());
        for i in 0..6 {
            prop_assert_eq!(a.compose(&b).apply(i), a.apply(b.apply(i)));
        }
        let g = FiniteGroup::cayley_close(6, &[a, b], 720).unwrap();
        g.verify_associativity().unwrap();
        prop_assert_eq!(720 % g.order(), 0);
        for x in 0..g.order() {
            prop_assert_eq!(g.mul(x, g.inv(x)), 0);
        }
    }
}

fn rows(m: &FieldMatrix) -> Vec<Vec<u32>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// Groups with a normal subgroup given by generators.
fn pairs() -> Vec<(Arc<FiniteGroup>, Vec<usize>)> {
    let s3 = Arc::new(families::symmetric(3));
    let c = s3.generators()[1];
    let d8 = Arc::new(families::dihedral(4));
    let r = d8.generators()[0];
    let z4 = Arc::new(families::cyclic(4));
    let i = z4.generators()[0];
    let q8 = Arc::new(families::quaternion());
    let minus = q8.center()[1];
    let k4 = Arc::new(families::abelian(&[2, 2]));
    let a = k4.generators()[0];
    vec![(s3, vec![c]), (d8, vec![r]), (z4.clone(), vec![z4.mul(i, i)]), (q8, vec![minus]), (k4, vec![a])]
}

/// A random submodule or quotient of the regular module.
fn random_module(g: &Arc<FiniteGroup>, p: u32, v: &[u32], quotient: bool) -> Option<Representation> {
    let reg = Representation::regular(g, p);
    let w = generated_submodule(&reg, &[v.to_vec()]);
    if w.is_zero() || w.is_full() {
        return None;
    }
    Some(if quotient { reg.quotient(&w).unwrap() } else { reg.submodule(&w).unwrap() })
}

fn module_case() -> impl Strategy<Value = (usize, u32, Vec<u32>, bool)> {
    (0usize..5, prop_oneof![Just(2u32), Just(3)], proptest::collection::vec(0u32..3, 8), any::<bool>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn radical_moves_layers_down((which, p, v, quotient) in module_case()) {
        let (g, _) = &pairs()[which];
        let v: Vec<u32> = v.iter().take(g.order()).map(|x| x % p).collect();
        prop_assume!(v.len() == g.order());
        let Some(rho) = random_module(g, p, &v, quotient) else { return Ok(()) };
        let j = module_radical_ideal(&rho).unwrap();
        let soc = socle_series(&rho).unwrap();
        let rad = radical_series(&rho).unwrap();
        for x in j.basis() {
            for k in 1..soc.layers.len() {
                prop_assert!(soc.layers[k].image(&x).is_subspace_of(&soc.layers[k - 1]));
            }
            for k in 0..rad.length() {
                prop_assert!(rad.layers[k].image(&x).is_subspace_of(&rad.layers[k + 1]));
            }
        }
        prop_assert_eq!(soc.layer_dims().iter().sum::<usize>(), rho.dim());
        prop_assert_eq!(rad.layer_dims(), socle_series(&rho.dual()).unwrap().layer_dims());
        prop_assert_eq!(soc.length(), rad.length());
    }

    #[test]
    fn restrictions_of_g_modules_extend((which, p, v, quotient) in module_case(), level in 1usize..3) {
        let (g, normal) = &pairs()[which];
        let v: Vec<u32> = v.iter().take(g.order()).map(|x| x % p).collect();
        prop_assume!(v.len() == g.order());
        let Some(r) = random_module(g, p, &v, quotient) else { return Ok(()) };
        let sub = gstable::group::Subgroup::generated(g, normal).unwrap();
        let length = socle_series(&r.restrict(&sub).unwrap()).unwrap().length();
        let inst = restriction_instance("random", g, normal, &r, level.min(length));
        let report = report::run(&inst.spec).unwrap();
        let stability = report.stability.as_ref().unwrap();
        prop_assert!(stability.g_stable.is(true));
        prop_assert_eq!(stability.numerical.as_ref().unwrap().copies, g.order() / sub.order());
        let extends = &report.extension.as_ref().unwrap().extends;
        prop_assert!(!extends.is(false), "a G-module restricted to N was reported not to extend");
        let outcome = report::verify(&report).unwrap();
        prop_assert!(outcome.passed(), "{:?}", outcome.failures().collect::<Vec<_>>());
    }

    #[test]
    fn run_is_deterministic(seed in 0u64..1000, which in 0usize..4) {
        let name = ["heis2-central-jordan", "d8-z4-char-pair-gf5", "a4-v4-perm-gf2", "q8-center-sign2-gf3"][which];
        let spec = gstable::spec::ProblemSpec { seed, ..common::instance(name).spec };
        let a = report::run(&spec).unwrap().without_timing();
        let b = report::run(&spec).unwrap().without_timing();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let o = a.obstruction.as_ref().unwrap();
        prop_assert_eq!(&o.trivial, &common::instance(name).expected.extends.map(Verdict::Decided).unwrap());
    }

    #[test]
    fn coboundary_factor_sets_split(values in proptest::collection::vec(0usize..6, 6), which in 0usize..3) {
        let base = Arc::new([families::symmetric(3), families::cyclic(6), families::cyclic(3)][which].clone());
        let u = Arc::new(CoefficientGroup::enumerated(Arc::new(families::cyclic(6))));
        let ug = u.group().clone();
        let n = base.order();
        let f: Vec<usize> = (0..n).map(|g| if g == 0 { 0 } else { values[g % values.len()] }).collect();
        let gamma: Vec<u32> = (0..n)
            .flat_map(|g| (0..n).map(move |h| (g, h)))
            .map(|(g, h)| ug.mul(ug.mul(f[g], f[h]), ug.inv(f[base.mul(g, h)])) as u32)
            .collect();
        let kappa = (0..n).flat_map(|_| 0..6u32).collect();
        let sys = SchreierSystem::new(base, u, kappa, gamma).unwrap();
        sys.verify().unwrap();
        let Search::Found(beta) = is_split(&sys).unwrap() else { panic!("a coboundary must split") };
        certify_splitting(&sys, &beta).unwrap();
        let ext = sys.build_extension_default().unwrap();
        ext.certify(&sys).unwrap();
        prop_assert!(common::has_complement(&ext, sys.base()));
    }
}
