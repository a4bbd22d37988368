//! Acceptance criteria, one timed line each. Runs without the libtest harness so the
//! lines are always printed.

mod common;

use std::collections::HashSet;
use std::panic::{self, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{extension_oracle, has_complement, mat_mul, radical_oracle, ExtensionOracle};
use gstable::corpus::{self, Instance};
use gstable::group::{families, FiniteGroup, QuotientMap};
use gstable::linalg::{FieldMatrix, MatrixSpace};
use gstable::obstruction::{ideal_of, quotient_system};
use gstable::rep::{algebra_radical, module_radical_ideal, radical_series, socle_series, EnvelopingAlgebra, Representation, Search};
use gstable::report::{self, AnalysisReport, Verdict};
use gstable::schreier::{certify_splitting, is_split, CoefficientGroup, SchreierSystem};
use gstable::spec::{Analysis, Problem};
use gstable::stability::{FactorSet, StructureMap};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn stable_reports() -> Vec<(Instance, Problem, AnalysisReport)> {
    corpus::instances()
        .into_iter()
        .filter(|i| i.expected.stable == Some(true))
        .map(|i| {
            let prob = i.spec.build().expect("corpus problem");
            let report = report::run(&i.spec).expect("corpus report");
            (i, prob, report)
        })
        .collect()
}

fn structure_map(prob: &Problem, report: &AnalysisReport) -> Option<StructureMap> {
    let xs = report.stability.as_ref()?.structure_map.as_ref()?;
    let (module, _) = prob.pair().ok()?;
    StructureMap::from_coset_intertwiners(module, xs).ok()
}

fn inverse(m: &FieldMatrix) -> FieldMatrix {
    m.invert().expect("square").expect("invertible")
}

/// Socle and radical layers are moved down one step by the radical of the
/// enveloping algebra, which is nilpotent within the Loewy length.
fn ac1() -> Outcome {
    let suite = corpus::module_suite();
    ensure!(suite.len() >= 20, "only {} modules", suite.len());
    for (name, rho) in &suite {
        let j = module_radical_ideal(rho).map_err(|e| format!("{name}: {e}"))?;
        let soc = socle_series(rho).map_err(|e| format!("{name}: {e}"))?;
        let rad = radical_series(rho).map_err(|e| format!("{name}: {e}"))?;
        for x in j.basis() {
            for k in 1..soc.layers.len() {
                ensure!(soc.layers[k].image(&x).is_subspace_of(&soc.layers[k - 1]), "{name}: J soc_{k} ⊄ soc_{}", k - 1);
            }
            for k in 0..rad.layers.len() - 1 {
                ensure!(rad.layers[k].image(&x).is_subspace_of(&rad.layers[k + 1]), "{name}: J rad^{k} ⊄ rad^{}", k + 1);
            }
        }
        let index = j.nilpotency_index(rho.dim() + 1).ok_or_else(|| format!("{name}: J is not nilpotent"))?;
        ensure!(index <= soc.length(), "{name}: nilpotency index {index} > socle length {}", soc.length());
        ensure!(soc.length() == rad.length(), "{name}: socle and radical lengths differ");
    }
    Ok(format!("{} modules", suite.len()))
}

fn schreier_suite() -> Vec<(String, SchreierSystem, Option<QuotientMap>)> {
    let mut out = Vec::new();
    let enumerated = |g: FiniteGroup| Arc::new(CoefficientGroup::enumerated(Arc::new(g)));
    // Extensions of a cyclic group of order 2 by an enumerated U, with the generator
    // acting by `act` and squaring to `square`.
    let over_z2 = |u: Arc<CoefficientGroup>, act: &dyn Fn(usize) -> usize, square: usize| {
        let base = Arc::new(families::cyclic(2));
        let t = base.generators()[0];
        let n = u.order();
        let kappa = (0..2).flat_map(|g| (0..n).map(move |x| (g, x))).map(|(g, x)| if g == t { act(x) } else { x } as u32).collect();
        let mut gamma = vec![0u32; 4];
        gamma[t * 2 + t] = square as u32;
        SchreierSystem::new(base, u, kappa, gamma).expect("system")
    };
    let z2 = enumerated(families::cyclic(2));
    let z2_gen = z2.group().generators()[0];
    out.push(("z2 by z2, direct".into(), over_z2(z2.clone(), &|x| x, 0), None));
    out.push(("z2 by z2, cyclic".into(), over_z2(z2.clone(), &|x| x, z2_gen), None));
    let z3 = enumerated(families::cyclic(3));
    let z3_inv = z3.clone();
    out.push(("z3 by z2, inversion".into(), over_z2(z3.clone(), &move |x| z3_inv.inv(x), 0), None));
    let z4 = enumerated(families::cyclic(4));
    let z4g = z4.group().clone();
    let u2 = z4g.pow(z4g.generators()[0], 2);
    let inv4 = z4.clone();
    out.push(("z4 by z2, dihedral".into(), over_z2(z4.clone(), &|x| inv4.inv(x), 0), None));
    let inv4 = z4.clone();
    out.push(("z4 by z2, quaternion".into(), over_z2(z4.clone(), &|x| inv4.inv(x), u2), None));
    out.push(("z4 by z2, cyclic".into(), over_z2(z4.clone(), &|x| x, z4g.generators()[0]), None));

    // Central extensions of the Klein four-group by Z2 from bilinear forms.
    let k4 = Arc::new(families::abelian(&[2, 2]));
    let bits = |e: usize| {
        let p = k4.element(e).images();
        ((p[0] != 0) as u32, (p[2] != 2) as u32)
    };
    for (name, form) in [
        ("z2 by k4, dihedral", [[0u32, 1], [0, 0]]),
        ("z2 by k4, quaternion", [[1, 1], [0, 1]]),
        ("z2 by k4, direct", [[0, 0], [0, 0]]),
    ] {
        let gamma = (0..4)
            .flat_map(|a| (0..4).map(move |b| (a, b)))
            .map(|(a, b)| {
                let (x, y) = (bits(a), bits(b));
                let xs = [x.0, x.1];
                let ys = [y.0, y.1];
                let mut v = 0;
                for i in 0..2 {
                    for j in 0..2 {
                        v ^= form[i][j] & xs[i] & ys[j];
                    }
                }
                if v == 1 { z2_gen as u32 } else { 0 }
            })
            .collect();
        let kappa = (0..4).flat_map(|_| 0..2u32).collect();
        out.push((name.into(), SchreierSystem::new(k4.clone(), z2.clone(), kappa, gamma).expect("system"), None));
    }

    // Z3 rotating the Klein four-group: A4.
    let v4 = enumerated(families::abelian(&[2, 2]));
    let vg = v4.group().clone();
    let (a, b) = (vg.generators()[0], vg.generators()[1]);
    let ab = vg.mul(a, b);
    let rot = |x: usize| match x {
        _ if x == a => b,
        _ if x == b => ab,
        _ if x == ab => a,
        _ => x,
    };
    let base = Arc::new(families::cyclic(3));
    let kappa = (0..3)
        .flat_map(|g| (0..4).map(move |x| (g, x)))
        .map(|(g, x)| {
            let steps = (0..g).find(|&k| base.pow(base.generators()[0], k) == g).unwrap_or(0);
            (0..steps).fold(x, |y, _| rot(y)) as u32
        })
        .collect();
    out.push(("k4 by z3, rotation".into(), SchreierSystem::new(base, v4, kappa, vec![0; 9]).expect("system"), None));

    // Quotient systems of the corpus, and their inflations to G.
    for inst in corpus::instances().into_iter().filter(|i| i.expected.stable == Some(true)) {
        let prob = inst.spec.build().expect("corpus problem");
        let (module, v) = prob.pair().expect("pair");
        let report = report::run(&gstable::spec::ProblemSpec { analyses: vec![Analysis::Stability], ..inst.spec.clone() })
            .expect("report");
        let Some(alpha) = structure_map(&prob, &report) else { continue };
        let ideal = ideal_of(module, v).expect("ideal");
        let Ok(u) = CoefficientGroup::one_plus_j(module.modulus(), module.dim(), &ideal.basis(), 8) else { continue };
        let gamma = FactorSet::compute(module, &alpha).expect("factor set");
        let sys = quotient_system(module, &alpha, &gamma, Arc::new(u)).expect("quotient system");
        if sys.base().order() <= 16 {
            out.push((format!("{} quotient", inst.name), sys.clone(), None));
        }
        if prob.group.order() <= 16 {
            let inflated = SchreierSystem::inflate(&sys, module.qmap()).expect("inflation");
            out.push((format!("{} inflated", inst.name), inflated, Some(module.qmap().clone())));
        }
    }
    out
}

/// Extension groups of Schreier systems are groups, the sequence is exact, inflated
/// copies of `N` are normal, and splitting agrees with an exhaustive complement search.
fn ac2() -> Outcome {
    let suite = schreier_suite();
    let mut split = 0;
    for (name, sys, qmap) in &suite {
        ensure!(sys.base().order() <= 16 && sys.coeff().order() <= 8, "{name}: outside the size bounds");
        sys.verify().map_err(|e| format!("{name}: {e}"))?;
        let ext = sys.build_extension_default().map_err(|e| format!("{name}: {e}"))?;
        ext.group.verify_associativity().map_err(|e| format!("{name}: {e}"))?;
        ext.certify(sys).map_err(|e| format!("{name}: {e}"))?;
        if let Some(q) = qmap {
            ext.certify_inflated(q.normal()).map_err(|e| format!("{name}: {e}"))?;
        }
        let verdict = is_split(sys).map_err(|e| format!("{name}: {e}"))?;
        let oracle = has_complement(&ext, sys.base());
        match verdict {
            Search::Found(beta) => {
                certify_splitting(sys, &beta).map_err(|e| format!("{name}: {e}"))?;
                ensure!(oracle, "{name}: split, but no complement exists");
                split += 1;
            }
            Search::Absent => ensure!(!oracle, "{name}: not split, but a complement exists"),
            Search::Unresolved(why) => return Err(format!("{name}: unresolved ({why})")),
        }
    }
    let names: HashSet<&str> = suite.iter().map(|(n, _, _)| n.as_str()).collect();
    ensure!(names.contains("z2 by z2, direct") && names.contains("z2 by z2, cyclic"), "missing Z2-by-Z2 extensions");
    let inflations = suite.iter().filter(|(_, _, q)| q.is_some()).count();
    Ok(format!("{} systems ({split} split, {inflations} inflations)", suite.len()))
}

/// Strong → tensor (regular Y) → numerical → strong on every stable instance with soc ⊆ V.
fn ac3() -> Outcome {
    let mut count = 0;
    for (inst, prob, report) in stable_reports() {
        let (module, v) = prob.pair().expect("pair");
        let soc = socle_series(module.rho()).expect("socle series");
        if !soc.layers[1].is_subspace_of(&v.space) {
            continue;
        }
        let name = inst.name;
        let o = report.obstruction.as_ref().ok_or_else(|| format!("{name}: no obstruction section"))?;
        let t = o.tensor.as_ref().ok_or_else(|| format!("{name}: no tensor chain ({:?})", o.tensor_status))?;
        let q = module.qmap().quotient().order();
        let y_dim = t.y.first().map_or(0, FieldMatrix::rows);
        ensure!(y_dim > 0 && y_dim % q == 0, "{name}: dim Y = {y_dim} is not a multiple of |G/N| = {q}");
        ensure!(o.layers.first().is_some_and(|l| l.tensored), "{name}: first layer is not tensored with Y");
        let closing = StructureMap::from_table(
            module,
            (0..prob.group.order())
                .map(|g| {
                    let (k, n) = module.decompose(g);
                    &t.closing_structure_map[k] * module.rho().matrix(n)
                })
                .collect(),
        )
        .map_err(|e| format!("{name}: {e}"))?;
        closing.certify_pair(v).map_err(|e| format!("{name}: {e}"))?;
        let outcome = report::verify(&report).map_err(|e| format!("{name}: {e}"))?;
        ensure!(outcome.passed(), "{name}: verify fails: {:?}", outcome.failures().collect::<Vec<_>>());
        count += 1;
    }
    ensure!(count >= 10, "only {count} instances");
    Ok(format!("{count} instances closed the cycle"))
}

/// The obstruction verdict agrees with an exhaustive search for extensions.
fn ac4() -> Outcome {
    let mut compared = 0;
    let mut skipped = Vec::new();
    for (inst, prob, report) in stable_reports() {
        let name = inst.name;
        let (module, _) = prob.pair().expect("pair");
        if prob.group.order() > 48 || module.dim() > 6 {
            skipped.push(name);
            continue;
        }
        let ours = report.extension.as_ref().ok_or_else(|| format!("{name}: no extension section"))?;
        let exists = match extension_oracle(&prob, 1 << 20) {
            ExtensionOracle::Exists(_) => true,
            ExtensionOracle::None => false,
            ExtensionOracle::TooLarge(_) => {
                skipped.push(name);
                continue;
            }
        };
        ensure!(ours.extends == Verdict::Decided(exists), "{name}: verdict {:?}, oracle {exists}", ours.extends);
        compared += 1;
    }
    let z4 = report::run(&common::instance("z4-z2-sign-gf5").spec).map_err(|e| e.to_string())?;
    let ext = z4.extension.and_then(|e| e.extended_rep).ok_or("z4-z2-sign-gf5: no extension")?;
    ensure!(ext == vec![FieldMatrix::from_rows(5, &[vec![2]]).expect("1x1")], "z4-z2-sign-gf5: generator ↦ {ext:?}");
    let heis = report::run(&common::instance("heis2-central-jordan").spec).map_err(|e| e.to_string())?;
    ensure!(heis.obstruction.is_some_and(|o| o.trivial.is(false)), "heis2-central-jordan: class is not nontrivial");
    ensure!(compared >= 15, "only {compared} instances compared (skipped {skipped:?})");
    Ok(format!("{compared} instances agree with the oracle, {} out of scope", skipped.len()))
}

/// `res ind Q ≅ Q^{⊕|G:N|}` with a certified intertwiner, checked entry by entry.
fn ac5() -> Outcome {
    let mut count = 0;
    for (inst, prob, report) in stable_reports() {
        let name = inst.name;
        let (module, _) = prob.pair().expect("pair");
        let n = report.stability.as_ref().and_then(|s| s.numerical.as_ref()).ok_or_else(|| format!("{name}: no witness"))?;
        let ind = module.rho().induce(module.normal()).map_err(|e| e.to_string())?;
        let index = prob.group.order() / module.normal().order();
        ensure!(n.copies == index, "{name}: {} copies for index {index}", n.copies);
        let p = module.modulus();
        let big = module.dim() * n.copies;
        ensure!(n.iso.rows() == big && n.iso.is_invertible(), "{name}: witness is not an invertible {big}x{big} matrix");
        let iso = n.iso.flatten();
        for (local, &g) in module.normal().members().iter().enumerate() {
            let blocks = vec![module.rho().matrix(local).clone(); n.copies];
            let sum = FieldMatrix::block_diag(p, &blocks).flatten();
            let lhs = mat_mul(&iso, &ind.module.matrix(g).flatten(), big, p);
            let rhs = mat_mul(&sum, &iso, big, p);
            ensure!(lhs == rhs, "{name}: intertwining fails at {g}");
        }
        if name == "heis2-central-jordan" {
            ensure!(n.copies == 4 && big == 8, "heis2-central-jordan: {} copies, {big}x{big}", n.copies);
        }
        count += 1;
    }
    Ok(format!("{count} instances, Heisenberg mod 2 with 4 copies and an 8x8 witness"))
}

/// The graded module is a representation whose `N`-part is the graded `ρ` and whose
/// layer dimensions are the socle layers.
fn ac6() -> Outcome {
    let mut count = 0;
    let mut skipped = Vec::new();
    for (inst, prob, report) in stable_reports() {
        let name = inst.name;
        if structure_map(&prob, &report).is_none() {
            continue;
        }
        let (module, _) = prob.pair().expect("pair");
        let gr = report.gr.as_ref().ok_or_else(|| format!("{name}: no gr section"))?;
        let Some(soc) = &gr.socle else {
            skipped.push(name);
            continue;
        };
        let p = module.modulus();
        let d = module.dim();
        let rep = Representation::from_generators(&prob.group, p as u64, d, &soc.generators).map_err(|e| format!("{name}: {e}"))?;
        for a in 0..prob.group.order() {
            for b in 0..prob.group.order() {
                let lhs = rep.matrix(prob.group.mul(a, b)).flatten();
                ensure!(lhs == mat_mul(&rep.matrix(a).flatten(), &rep.matrix(b).flatten(), d, p), "{name}: not a homomorphism");
            }
        }
        let dims = socle_series(module.rho()).expect("socle series").layer_dims();
        ensure!(soc.layer_dims == dims, "{name}: graded dims {:?}, socle layers {dims:?}", soc.layer_dims);
        let pinv = inverse(&soc.basis);
        for (local, &g) in module.normal().members().iter().enumerate() {
            let c = &(&pinv * module.rho().matrix(local)) * &soc.basis;
            let mut off = 0;
            let mut graded = FieldMatrix::zeros(p, d, d);
            for &k in &soc.layer_dims {
                graded.set_block(off, off, &c.block(off, off, k, k));
                off += k;
            }
            ensure!(rep.matrix(g) == &graded, "{name}: N-action on gr differs at {g}");
        }
        count += 1;
    }
    Ok(format!("{count} instances; no extension and soc ⊄ V: {skipped:?}"))
}

/// Two seeds give structure maps that differ by `U` pointwise and generate the same `U·α(G)`.
fn ac7() -> Outcome {
    let mut count = 0;
    let mut differing = 0;
    for inst in corpus::instances().into_iter().filter(|i| i.expected.stable == Some(true)) {
        let name = inst.name;
        let prob = inst.spec.build().expect("problem");
        let (module, v) = prob.pair().expect("pair");
        let alphas: Vec<StructureMap> = [1u64, 2]
            .iter()
            .map(|&seed| {
                let spec = gstable::spec::ProblemSpec { seed, analyses: vec![Analysis::Stability], ..inst.spec.clone() };
                let report = report::run(&spec).map_err(|e| e.to_string())?;
                structure_map(&prob, &report).ok_or_else(|| format!("{name}: no structure map for seed {seed}"))
            })
            .collect::<Result<_, _>>()?;
        let ideal = ideal_of(module, v).expect("ideal");
        let u = CoefficientGroup::one_plus_j(module.modulus(), module.dim(), &ideal.basis(), 1 << 12)
            .map_err(|e| format!("{name}: {e}"))?;
        let mats = u.matrices().expect("matrix group");
        let space = MatrixSpace::span(module.modulus(), module.dim(), module.dim(), &ideal.basis());
        let id = FieldMatrix::identity(module.modulus(), module.dim());
        let (a1, a2) = (&alphas[0], &alphas[1]);
        let (mut s1, mut s2) = (HashSet::new(), HashSet::new());
        for g in 0..prob.group.order() {
            let quotient = &inverse(a1.at(g)) * a2.at(g);
            let in_u = if v.is_zero() { u.contains(&quotient) } else { space.contains(&quotient.try_sub(&id).expect("shape")) };
            ensure!(in_u, "{name}: α(g)^-1 α'(g) ∉ U at {g}");
            for m in mats {
                s1.insert(m * a1.at(g));
                s2.insert(m * a2.at(g));
            }
        }
        ensure!(s1 == s2, "{name}: U·α(G) ≠ U·α'(G)");
        gstable::schreier::certify_independence(&u, a1, a2).map_err(|e| format!("{name}: {e}"))?;
        if a1.alpha != a2.alpha {
            differing += 1;
        }
        count += 1;
    }
    ensure!(differing > 0, "the two seeds never produced different structure maps");
    Ok(format!("{count} instances ({differing} with different α)"))
}

/// The computed radical equals the set of elements generating nilpotent ideals.
fn ac8() -> Outcome {
    let mut reps: Vec<(String, Representation)> = corpus::module_suite();
    for inst in corpus::instances() {
        let prob = inst.spec.build().expect("problem");
        reps.push((inst.name.to_string(), prob.rho.clone()));
    }
    let mut count = 0;
    for (name, rho) in &reps {
        let alg = EnvelopingAlgebra::of(rho).map_err(|e| format!("{name}: {e}"))?;
        if alg.dim() > 6 {
            continue;
        }
        let basis = alg.basis();
        let radical = algebra_radical(&alg).map_err(|e| format!("{name}: {e}"))?;
        let oracle: HashSet<Vec<u32>> = radical_oracle(&basis).into_iter().collect();
        let p = alg.modulus();
        for c in common::all_vectors(p, basis.len()) {
            let x = gstable::rep::combine(&basis, &c, p, alg.degree(), alg.degree());
            ensure!(radical.contains(&x) == oracle.contains(&c), "{name}: radical differs from the oracle at {c:?}");
        }
        count += 1;
    }
    ensure!(count > 0, "no algebras of dimension ≤ 6");
    Ok(format!("{count} enveloping algebras"))
}

fn main() {
    let criteria: [(&str, &str, fn() -> Outcome, Duration); 8] = [
        ("AC1", "socle and radical layers under the radical", ac1, Duration::from_secs(10)),
        ("AC2", "Schreier extensions and complements", ac2, Duration::from_secs(30)),
        ("AC3", "strong → tensor → numerical → strong", ac3, Duration::from_secs(120)),
        ("AC4", "obstruction verdicts vs exhaustive extensions", ac4, Duration::from_secs(300)),
        ("AC5", "induced-restricted module is a power of Q", ac5, Duration::from_secs(30)),
        ("AC6", "graded module action", ac6, Duration::from_secs(30)),
        ("AC7", "structure maps independent of the seed", ac7, Duration::from_secs(60)),
        ("AC8", "radical vs maximal nilpotent ideal", ac8, Duration::from_secs(60)),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, title, f, limit) in criteria {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.1?}, limit {limit:?}")),
            r => r,
        };
        match &result {
            Ok(detail) => println!("{id} PASS {title}: {detail} ({elapsed:.2?} / {limit:?})"),
            Err(why) => {
                failed += 1;
                println!("{id} FAIL {title}: {why} ({elapsed:.2?} / {limit:?})");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
