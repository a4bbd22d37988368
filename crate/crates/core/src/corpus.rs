//! The bundled problem instances and module suite.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::{families, FiniteGroup, Perm, Subgroup};
use crate::linalg::{FieldMatrix, Subspace};
use crate::rep::{socle_series, Representation};
use crate::spec::{rows_of, Analysis, Caps, ProblemSpec, SubmoduleSpec, PROBLEM_SCHEMA};

/// Verdicts known by construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Expected {
    /// `None` for problems with a non-normal subgroup.
    pub stable: Option<bool>,
    /// Whether `ρ` extends to `G` compatibly with `V`; `None` when unstable.
    pub extends: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub name: &'static str,
    pub spec: ProblemSpec,
    pub expected: Expected,
}

pub const ALL_ANALYSES: [Analysis; 6] = [
    Analysis::Stability,
    Analysis::Obstruction,
    Analysis::Extension,
    Analysis::Gr,
    Analysis::SchreierVerify,
    Analysis::Observability,
];

fn mat(p: u32, rows: &[&[i64]]) -> FieldMatrix {
    let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
    FieldMatrix::from_rows(p as u64, &rows).expect("literal matrix")
}

fn jordan(p: u32, n: usize) -> FieldMatrix {
    let mut m = FieldMatrix::identity(p, n);
    for i in 0..n.saturating_sub(1) {
        m.set(i, i + 1, 1);
    }
    m
}

fn find(g: &FiniteGroup, cycles: &[&[u32]]) -> usize {
    let perm = Perm::from_cycles(g.degree(), cycles).expect("valid cycles");
    g.index_of(&perm).expect("element of the group")
}

fn klein_four(g: &FiniteGroup) -> Vec<usize> {
    vec![find(g, &[&[0, 1], &[2, 3]]), find(g, &[&[0, 2], &[1, 3]])]
}

/// Action matrices of the generators of `G` on an invariant subspace, in its echelon basis.
fn action_on(space: &Subspace, r: &Representation) -> Vec<FieldMatrix> {
    let p = r.modulus();
    r.group()
        .generators()
        .iter()
        .map(|&s| {
            let cols: Vec<Vec<u32>> = space
                .basis()
                .iter()
                .map(|b| space.coords(&r.matrix(s).apply(b)).expect("invariant subspace"))
                .collect();
            FieldMatrix::from_columns(p, space.dim(), &cols)
        })
        .collect()
}

fn submodule_spec(space: &Subspace, action: &[FieldMatrix]) -> SubmoduleSpec {
    SubmoduleSpec {
        basis: space.basis().iter().map(|b| b.iter().map(|&x| x as i64).collect()).collect(),
        action: action.iter().map(rows_of).collect(),
    }
}

fn spec(name: &str, g: &FiniteGroup, normal: &[usize], p: u32, rep: &[FieldMatrix], v: Option<SubmoduleSpec>) -> ProblemSpec {
    ProblemSpec {
        schema: PROBLEM_SCHEMA.into(),
        name: name.into(),
        group: g.descriptor(),
        normal: normal.iter().map(|&n| g.element(n).images().to_vec()).collect(),
        p: p as u64,
        rep: rep.iter().map(rows_of).collect(),
        v,
        analyses: ALL_ANALYSES.to_vec(),
        seed: 0,
        caps: Caps::default(),
    }
}

/// Restricts a `G`-module to `N` and takes `V = soc_N` with the restricted action, so
/// `r` itself is an extension.
fn restricted(name: &'static str, g: &Arc<FiniteGroup>, normal: &[usize], r: &Representation) -> Instance {
    restriction_instance(name, g, normal, r, 1)
}

/// Restriction of the `G`-module `r` to `N = ⟨normal⟩` with `V` the `level`-th socle
/// layer of the restriction; `r` is an extension by construction.
pub fn restriction_instance(name: &'static str, g: &Arc<FiniteGroup>, normal: &[usize], r: &Representation, level: usize) -> Instance {
    let sub = Subgroup::generated(g, normal).expect("subgroup");
    let res = r.restrict(&sub).expect("restriction");
    let soc = socle_series(&res).expect("socle series").layers[level].clone();
    let action = action_on(&soc, r);
    let rep: Vec<FieldMatrix> = normal.iter().map(|&n| r.matrix(n).clone()).collect();
    Instance {
        name,
        spec: spec(name, g, normal, r.modulus(), &rep, Some(submodule_spec(&soc, &action))),
        expected: Expected { stable: Some(true), extends: Some(true) },
    }
}

/// An `N`-module given directly, with `V = span(basis)` carrying the given action (or `V = 0`).
fn direct(
    name: &'static str,
    g: &FiniteGroup,
    normal: &[usize],
    p: u32,
    rep: &[FieldMatrix],
    v: Option<(Vec<Vec<u32>>, Vec<FieldMatrix>)>,
    expected: Expected,
) -> Instance {
    let v = v.map(|(basis, action)| {
        let space = Subspace::span(p, rep[0].rows(), basis);
        submodule_spec(&space, &action)
    });
    Instance { name, spec: spec(name, g, normal, p, rep, v), expected }
}

const EXTENDS: Expected = Expected { stable: Some(true), extends: Some(true) };
const OBSTRUCTED: Expected = Expected { stable: Some(true), extends: Some(false) };
const UNSTABLE: Expected = Expected { stable: Some(false), extends: None };

fn trivial_action(g: &FiniteGroup, p: u32, dim: usize) -> Vec<FieldMatrix> {
    vec![FieldMatrix::identity(p, dim); g.generators().len()]
}

fn by_generator(g: &FiniteGroup, pairs: &[(usize, FieldMatrix)]) -> Vec<FieldMatrix> {
    g.generators()
        .iter()
        .map(|s| pairs.iter().find(|(x, _)| x == s).expect("generator").1.clone())
        .collect()
}

pub fn instances() -> Vec<Instance> {
    let mut out = Vec::new();

    let s3 = Arc::new(families::symmetric(3));
    let (t, c) = (s3.generators()[0], s3.generators()[1]);
    out.push(restricted("s3-a3-perm-gf3", &s3, &[c], &Representation::permutation(&s3, 3)));
    out.push(restricted("s3-a3-perm-gf2", &s3, &[c], &Representation::permutation(&s3, 2)));
    out.push(restriction_instance("s3-a3-regular-gf3", &s3, &[c], &Representation::regular(&s3, 3), 2));
    out.push(restricted("s3-a3-trivial-gf7", &s3, &[c], &Representation::trivial(&s3, 7, 1)));
    let two_dim = by_generator(&s3, &[(t, mat(2, &[&[0, 1], &[1, 0]])), (c, mat(2, &[&[0, 1], &[1, 1]]))]);
    let two_dim = Representation::from_generators(&s3, 2, 2, &two_dim).expect("2-dim module of S3");
    out.push(restricted("s3-a3-2dim-gf2", &s3, &[c], &two_dim));

    let z9 = Arc::new(families::cyclic(9));
    let x = z9.generators()[0];
    let r = Representation::from_generators(&z9, 3, 4, &[jordan(3, 4)]).expect("Jordan module");
    out.push(restricted("z9-z3-jordan-gf3", &z9, &[z9.pow(x, 3)], &r));

    let z4 = Arc::new(families::cyclic(4));
    let i = z4.generators()[0];
    let r = Representation::from_generators(&z4, 2, 3, &[jordan(2, 3)]).expect("Jordan module");
    out.push(restricted("z4-z2-jordan-gf2", &z4, &[z4.mul(i, i)], &r));

    let a4 = Arc::new(families::alternating(4));
    out.push(restricted("a4-v4-perm-gf2", &a4, &klein_four(&a4), &Representation::permutation(&a4, 2)));
    let s4 = Arc::new(families::symmetric(4));
    out.push(restricted("s4-v4-perm-gf2", &s4, &klein_four(&s4), &Representation::permutation(&s4, 2)));

    let k4 = Arc::new(families::abelian(&[2, 2]));
    let (a, _) = (k4.generators()[0], k4.generators()[1]);
    out.push(restricted("z2xz2-z2-regular-gf2", &k4, &[a], &Representation::regular(&k4, 2)));

    for (p, name) in [(2u32, "heis2-central-jordan"), (3, "heis3-central-jordan")] {
        let h = Arc::new(families::heisenberg(p as usize).expect("Heisenberg group"));
        let z = h.center()[1];
        out.push(direct(
            name,
            &h,
            &[z],
            p,
            &[jordan(p, 2)],
            Some((vec![vec![1, 0]], trivial_action(&h, p, 1))),
            OBSTRUCTED,
        ));
    }

    let z2 = z4.mul(i, i);
    out.push(direct(
        "z4-z2-regular-gf2",
        &z4,
        &[z2],
        2,
        &[mat(2, &[&[0, 1], &[1, 0]])],
        Some((vec![vec![1, 1]], trivial_action(&z4, 2, 1))),
        OBSTRUCTED,
    ));

    let q8 = families::quaternion();
    let minus = q8.center()[1];
    out.push(direct("q8-center-sign-gf3", &q8, &[minus], 3, &[mat(3, &[&[2]])], None, OBSTRUCTED));
    out.push(direct(
        "q8-center-sign2-gf3",
        &q8,
        &[minus],
        3,
        &[mat(3, &[&[2, 0], &[0, 2]])],
        None,
        EXTENDS,
    ));

    let z8 = families::cyclic(8);
    let y = z8.generators()[0];
    out.push(direct("z8-z4-char2-gf5", &z8, &[z8.mul(y, y)], 5, &[mat(5, &[&[2]])], None, OBSTRUCTED));

    let h2 = families::heisenberg(2).expect("Heisenberg group");
    let z = h2.center()[1];
    out.push(direct("heis2-central-jordan-v0", &h2, &[z], 2, &[jordan(2, 2)], None, OBSTRUCTED));
    out.push(direct("heis2-central-trivial", &h2, &[z], 2, &[mat(2, &[&[1]])], None, EXTENDS));

    out.push(direct("z4-z2-sign-gf5", &z4, &[z2], 5, &[mat(5, &[&[4]])], None, EXTENDS));

    let d8 = families::dihedral(4);
    let rot = d8.generators()[0];
    out.push(direct("d8-z4-char-pair-gf5", &d8, &[rot], 5, &[mat(5, &[&[2, 0], &[0, 3]])], None, EXTENDS));
    out.push(direct("d8-z4-char-gf5", &d8, &[rot], 5, &[mat(5, &[&[2]])], None, UNSTABLE));

    out.push(direct("s3-a3-char-gf7", &s3, &[c], 7, &[mat(7, &[&[2]])], None, UNSTABLE));
    // (0 1 3) ≡ (0 1 2)^2 modulo the Klein four-group.
    let c1 = find(&s4, &[&[0, 1, 2]]);
    let c2 = find(&s4, &[&[0, 1, 3]]);
    out.push(direct("s4-a4-char-gf7", &s4, &[c1, c2], 7, &[mat(7, &[&[2]]), mat(7, &[&[4]])], None, UNSTABLE));

    let mut obs = direct(
        "s3-transposition-observability",
        &s3,
        &[t],
        3,
        &[mat(3, &[&[2]])],
        None,
        Expected { stable: None, extends: None },
    );
    obs.spec.analyses = vec![Analysis::Observability];
    out.push(obs);
    out
}

/// The smallest `ρ`-invariant subspace containing `vecs`.
pub fn generated_submodule(rho: &Representation, vecs: &[Vec<u32>]) -> Subspace {
    let mut space = Subspace::zero(rho.modulus(), rho.dim());
    let mut queue: Vec<Vec<u32>> = vecs.to_vec();
    while let Some(v) = queue.pop() {
        if space.insert(&v) {
            for &s in rho.group().generators() {
                queue.push(rho.matrix(s).apply(&v));
            }
        }
    }
    space
}

/// Modules for the radical and socle checks: regular, Jordan, permutation and seeded
/// random sub- and quotient modules of regular modules.
pub fn module_suite() -> Vec<(String, Representation)> {
    let mut out = Vec::new();
    for p in [2u32, 3, 5] {
        let g = Arc::new(families::cyclic(p as usize));
        out.push((format!("regular-z{p}"), Representation::regular(&g, p)));
    }
    for p in [2u32, 3] {
        let h = Arc::new(families::heisenberg(p as usize).expect("Heisenberg group"));
        let z = Subgroup::generated(&h, &[h.center()[1]]).expect("center");
        let rho = Representation::from_generators(z.group(), p as u64, 2, &[jordan(p, 2)]).expect("central module");
        out.push((format!("heis{p}-central-jordan"), rho));
    }
    for (n, p) in [(3usize, 2u32), (3, 3), (4, 2), (4, 3)] {
        let g = Arc::new(families::symmetric(n));
        out.push((format!("s{n}-perm-gf{p}"), Representation::permutation(&g, p)));
    }
    let a4 = Arc::new(families::alternating(4));
    out.push(("a4-perm-gf2".into(), Representation::permutation(&a4, 2)));
    let z9 = Arc::new(families::cyclic(9));
    out.push(("z9-jordan4-gf3".into(), Representation::from_generators(&z9, 3, 4, &[jordan(3, 4)]).expect("Jordan")));
    let d8 = Arc::new(families::dihedral(4));
    out.push(("regular-d8-gf2".into(), Representation::regular(&d8, 2)));
    out.extend(random_modules(10));
    out
}

/// Seeded random submodules and quotients of regular modules of dimension ≤ 8.
pub fn random_modules(count: u64) -> Vec<(String, Representation)> {
    let groups: Vec<(&str, Arc<FiniteGroup>)> = vec![
        ("z4", Arc::new(families::cyclic(4))),
        ("z2xz2", Arc::new(families::abelian(&[2, 2]))),
        ("s3", Arc::new(families::symmetric(3))),
        ("d8", Arc::new(families::dihedral(4))),
        ("q8", Arc::new(families::quaternion())),
        ("z6", Arc::new(families::cyclic(6))),
    ];
    (0..count)
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (gname, g) = &groups[rng.gen_range(0..groups.len())];
            let p = [2u32, 3][rng.gen_range(0..2)];
            let reg = Representation::regular(g, p);
            let d = reg.dim();
            let w = loop {
                let v: Vec<u32> = (0..d).map(|_| rng.gen_range(0..p)).collect();
                let w = generated_submodule(&reg, &[v]);
                if !w.is_zero() && !w.is_full() {
                    break w;
                }
            };
            let (kind, m) = if seed % 2 == 0 {
                ("quotient", reg.quotient(&w).expect("quotient module"))
            } else {
                ("submodule", reg.submodule(&w).expect("submodule"))
            };
            (format!("random{seed}-{kind}-{gname}-gf{p}"), m)
        })
        .collect()
}
