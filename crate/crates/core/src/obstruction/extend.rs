use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::cocycle::{solve_coboundary, AdditiveCocycle, CoefficientModule};
use crate::error::{certify, Error, Result};
use crate::linalg::FieldMatrix;
use crate::rep::{annihilator_ideal, hom_space, AnnihilatorIdeal, AnnihilatorMode, Representation, Search};
use crate::schreier::{certify_splitting, is_split, CoefficientGroup, SchreierSystem};
use crate::stability::{FactorSet, NormalModule, StructureMap, SubmoduleAction};

/// `J_V`: the endomorphisms of `Q|_N` killing `V`.
pub fn ideal_of(module: &NormalModule, v: &SubmoduleAction) -> Result<AnnihilatorIdeal> {
    let end = hom_space(module.rho(), module.rho())?;
    annihilator_ideal(&end, &v.space, AnnihilatorMode::Socle)
}

/// Conjugation `σ -> α(g)σα(g)^-1` on a basis of `J`, in the coordinates of that basis.
pub fn conjugation_action(module: &NormalModule, alpha: &StructureMap, ideal: &AnnihilatorIdeal) -> Result<CoefficientModule> {
    let basis = ideal.basis();
    let p = module.modulus();
    let qmap = module.qmap();
    let inv = alpha.inverses()?;
    let mut action = Vec::with_capacity(qmap.quotient().order());
    for a in 0..qmap.quotient().order() {
        let l = qmap.lift(a);
        let cols = basis
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let c = &(alpha.at(l) * b) * &inv[l];
                ideal.ideal.coords(&c).ok_or_else(|| {
                    Error::Certification(format!("J is not stable under conjugation by α at ({a}, basis {i})"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        action.push(FieldMatrix::from_columns(p, basis.len(), &cols));
    }
    Ok(CoefficientModule { dim: basis.len(), action })
}

/// `j(a, b) = 1 - γ(a, b)` in the coordinates of the fixed basis of `J`.
pub fn additive_cocycle(
    module: &NormalModule,
    alpha: &StructureMap,
    gamma: &FactorSet,
    ideal: &AnnihilatorIdeal,
) -> Result<AdditiveCocycle> {
    if !ideal.squares_to_zero() {
        return Err(Error::Precondition("J² ≠ 0; use the splitting search of the Schreier system".into()));
    }
    let p = module.modulus();
    let id = FieldMatrix::identity(p, module.dim());
    let m = gamma.quotient_order;
    let mut values = Vec::with_capacity(m * m);
    for a in 0..m {
        for b in 0..m {
            let c = id.try_sub(gamma.at(a, b))?;
            values.push(
                ideal
                    .ideal
                    .coords(&c)
                    .ok_or_else(|| Error::Precondition(format!("γ({a}, {b}) is not in 1 + J")))?,
            );
        }
    }
    let j = AdditiveCocycle { coeff: conjugation_action(module, alpha, ideal)?, values };
    j.certify(module.qmap().quotient(), p)?;
    Ok(j)
}

/// `g -> β(ḡ)α(g)` for per-coset factors `β`; certified exhaustively, on `N` and on `V`.
pub fn extend_module_structure(
    module: &NormalModule,
    v: &SubmoduleAction,
    alpha: &StructureMap,
    beta: &[FieldMatrix],
) -> Result<Representation> {
    let qmap = module.qmap();
    certify(beta.len() == qmap.quotient().order(), || "β has the wrong length".into())?;
    let table = (0..module.group().order()).map(|g| &beta[qmap.project(g)] * alpha.at(g)).collect();
    let rep = Representation::from_table(module.group(), module.modulus(), module.dim(), table)?;
    rep.certify_exhaustive()?;
    certify_extension(module, v, &rep)?;
    Ok(rep)
}

/// Restriction to `N` is `ρ` and restriction to `V` is the given action.
pub fn certify_extension(module: &NormalModule, v: &SubmoduleAction, rep: &Representation) -> Result<()> {
    certify(rep.dim() == module.dim() && rep.group().order() == module.group().order(), || {
        "extension has the wrong shape".into()
    })?;
    for (local, &n) in module.normal().members().iter().enumerate() {
        certify(rep.matrix(n) == module.rho().matrix(local), || format!("extension differs from ρ at {n}"))?;
    }
    for g in 0..module.group().order() {
        certify(v.agrees(rep.matrix(g), g), || format!("extension does not restrict to the action on V at {g}"))?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObstructionRoute {
    /// `J_V² = 0`: linear coboundary equation in `J`-coordinates.
    Additive,
    /// Splitting search in the quotient Schreier system with `U = (1 + J_V)^×`.
    Multiplicative,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Triviality {
    Trivial,
    Nontrivial,
    Unresolved(String),
}

impl Triviality {
    pub fn is_trivial(&self) -> bool {
        matches!(self, Triviality::Trivial)
    }
}

#[derive(Clone, Debug)]
pub struct ObstructionReport {
    pub route: ObstructionRoute,
    pub trivial: Triviality,
    /// Fixed basis of `J_V`.
    pub ideal: Vec<FieldMatrix>,
    pub cocycle: Option<AdditiveCocycle>,
    /// Per quotient element, the factor `β(ḡ)` with `g -> β(ḡ)α(g)` a homomorphism.
    pub beta: Option<Vec<FieldMatrix>>,
    pub extended: Option<Representation>,
}

/// The Schreier system on `(G/N, U)` with `κ(a, u) = α(l_a) u α(l_a)^-1` and `γ` from the factor set.
pub fn quotient_system(
    module: &NormalModule,
    alpha: &StructureMap,
    gamma: &FactorSet,
    u: Arc<CoefficientGroup>,
) -> Result<SchreierSystem> {
    let qmap = module.qmap();
    let m = qmap.quotient().order();
    let inv = alpha.inverses()?;
    let mats = u.matrices().ok_or_else(|| Error::Precondition("U must be realized by matrices".into()))?;
    let mut kappa = Vec::with_capacity(m * u.order());
    for a in 0..m {
        let l = qmap.lift(a);
        for (x, mx) in mats.iter().enumerate() {
            let c = &(alpha.at(l) * mx) * &inv[l];
            let idx = u
                .index_of(&c)
                .ok_or_else(|| Error::Precondition(format!("U is not stable under α at ({a}, {x})")))?;
            kappa.push(idx as u32);
        }
    }
    let mut gam = Vec::with_capacity(m * m);
    for a in 0..m {
        for b in 0..m {
            let idx = u
                .index_of(gamma.at(a, b))
                .ok_or_else(|| Error::Precondition(format!("γ({a}, {b}) is not in U")))?;
            gam.push(idx as u32);
        }
    }
    let sys = SchreierSystem::new(qmap.quotient().clone(), u, kappa, gam)?;
    sys.verify()?;
    Ok(sys)
}

/// Decides whether the `N`-action extends to `G` compatibly with `V` and `α`'s
/// coset classes, and builds the extension when it does.
pub fn analyze_obstruction(
    module: &NormalModule,
    v: &SubmoduleAction,
    alpha: &StructureMap,
    cap: usize,
) -> Result<ObstructionReport> {
    alpha.certify_pair(v)?;
    let gamma = FactorSet::compute(module, alpha)?;
    let ideal = ideal_of(module, v)?;
    let p = module.modulus();
    let d = module.dim();
    let basis = ideal.basis();
    let quotient = module.qmap().quotient().clone();
    if ideal.squares_to_zero() {
        let j = additive_cocycle(module, alpha, &gamma, &ideal)?;
        let Some(b) = solve_coboundary(&j, &quotient, p)? else {
            return Ok(ObstructionReport {
                route: ObstructionRoute::Additive,
                trivial: Triviality::Nontrivial,
                ideal: basis,
                cocycle: Some(j),
                beta: None,
                extended: None,
            });
        };
        let id = FieldMatrix::identity(p, d);
        let beta: Vec<FieldMatrix> = b
            .iter()
            .map(|c| id.try_add(&ideal.ideal.combine(c)))
            .collect::<Result<_>>()?;
        let extended = extend_module_structure(module, v, alpha, &beta)?;
        return Ok(ObstructionReport {
            route: ObstructionRoute::Additive,
            trivial: Triviality::Trivial,
            ideal: basis,
            cocycle: Some(j),
            beta: Some(beta),
            extended: Some(extended),
        });
    }
    let unresolved = |why: String| ObstructionReport {
        route: ObstructionRoute::Multiplicative,
        trivial: Triviality::Unresolved(why),
        ideal: basis.clone(),
        cocycle: None,
        beta: None,
        extended: None,
    };
    let u = match CoefficientGroup::one_plus_j(p, d, &basis, cap) {
        Ok(u) => Arc::new(u),
        Err(Error::SizeLimit { needed, cap, .. }) => {
            return Ok(unresolved(format!("U = (1 + J)^× needs {needed} elements, cap is {cap}")))
        }
        Err(e) => return Err(e),
    };
    let sys = quotient_system(module, alpha, &gamma, u.clone())?;
    match is_split(&sys)? {
        Search::Found(idx) => {
            certify_splitting(&sys, &idx)?;
            let beta: Vec<FieldMatrix> = idx
                .iter()
                .map(|&x| u.matrix(x).cloned().ok_or_else(|| Error::Certification("lost U matrix".into())))
                .collect::<Result<_>>()?;
            let extended = extend_module_structure(module, v, alpha, &beta)?;
            Ok(ObstructionReport {
                route: ObstructionRoute::Multiplicative,
                trivial: Triviality::Trivial,
                ideal: basis,
                cocycle: None,
                beta: Some(beta),
                extended: Some(extended),
            })
        }
        Search::Absent => Ok(ObstructionReport {
            route: ObstructionRoute::Multiplicative,
            trivial: Triviality::Nontrivial,
            ideal: basis,
            cocycle: None,
            beta: None,
            extended: None,
        }),
        Search::Unresolved(why) => Ok(unresolved(why)),
    }
}
