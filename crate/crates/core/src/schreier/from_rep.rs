use std::collections::HashSet;
use std::sync::Arc;

use super::coeff::CoefficientGroup;
use super::system::{ExtensionGroup, SchreierSystem};
use crate::error::{certify, Error, Result};
use crate::linalg::FieldMatrix;
use crate::rep::Representation;
use crate::stability::{FactorSet, NormalModule, StructureMap};

/// `E(α, U)` together with its action `(u, g) q = u α(g) q` on `Q`.
#[derive(Clone, Debug)]
pub struct RepExtension {
    pub system: SchreierSystem,
    pub ext: ExtensionGroup,
    pub action: Representation,
}

/// Builds `κ(g,u) = α(g) u α(g)^-1` and `γ` from the factor set of `α`, then `E` and its action.
pub fn extension_from_rep(
    module: &NormalModule,
    alpha: &StructureMap,
    gamma: &FactorSet,
    u: Arc<CoefficientGroup>,
    cap: usize,
) -> Result<RepExtension> {
    let mats = u
        .matrices()
        .ok_or_else(|| Error::Precondition("coefficient group must be realized by matrices".into()))?;
    let grp = module.group();
    let inv = alpha.inverses()?;
    let n = module.normal();
    for (x, m) in mats.iter().enumerate() {
        for &s in n.group().generators() {
            let r = module.rho().matrix(s);
            if m * r != r * m {
                return Err(Error::Precondition(format!("coefficient {x} does not commute with ρ({})", n.to_parent(s))));
            }
        }
    }
    let nu = u.order();
    let mut kappa = Vec::with_capacity(grp.order() * nu);
    for g in 0..grp.order() {
        for (x, m) in mats.iter().enumerate() {
            let c = &(alpha.at(g) * m) * &inv[g];
            let idx = u
                .index_of(&c)
                .ok_or_else(|| Error::Precondition(format!("U is not stable under conjugation by α at (g, u) = ({g}, {x})")))?;
            kappa.push(idx as u32);
        }
    }
    let mut gamma_idx = Vec::with_capacity(grp.order() * grp.order());
    for g in 0..grp.order() {
        for h in 0..grp.order() {
            let idx = u
                .index_of(gamma.value(module, g, h))
                .ok_or_else(|| Error::Precondition(format!("U does not contain γ at (g, h) = ({g}, {h})")))?;
            gamma_idx.push(idx as u32);
        }
    }
    let system = SchreierSystem::new(grp.clone(), u.clone(), kappa, gamma_idx)?;
    system.verify()?;
    let ext = system.build_extension(cap)?;
    ext.certify_inflated(n)?;
    let table: Vec<FieldMatrix> =
        (0..ext.order()).map(|e| &mats[ext.coeff_part(e)] * alpha.at(ext.project(e))).collect();
    let action = Representation::from_table(&ext.group, module.modulus(), module.dim(), table)?;
    let out = RepExtension { system, ext, action };
    out.certify(module, alpha)?;
    Ok(out)
}

impl RepExtension {
    /// `ρ_E(ι(n)) = ρ(n)`, `ρ_E(u, 1) = u`, `ρ_E(u, g) = u α(g)`.
    pub fn certify(&self, module: &NormalModule, alpha: &StructureMap) -> Result<()> {
        let u = self.system.coeff();
        let mats = u.matrices().ok_or_else(|| Error::Certification("coefficients lost their matrices".into()))?;
        for (local, &nn) in module.normal().members().iter().enumerate() {
            certify(self.action.matrix(self.ext.section(nn)) == module.rho().matrix(local), || {
                format!("ρ_E differs from ρ at ι({nn})")
            })?;
        }
        for e in 0..self.ext.order() {
            let expected = &mats[self.ext.coeff_part(e)] * alpha.at(self.ext.project(e));
            certify(self.action.matrix(e) == &expected, || format!("ρ_E is not u α(g) at element {e}"))?;
        }
        Ok(())
    }

    /// The square `E -> G`, `E -> U·α(G)` commutes modulo `U`, and
    /// `x -> (π(x), ρ_E(x))` is injective, so `E` is the pull-back.
    pub fn certify_pullback(&self, alpha: &StructureMap) -> Result<()> {
        let u = self.system.coeff();
        let mut seen = HashSet::new();
        for e in 0..self.ext.order() {
            let img = self.action.matrix(e);
            let g = self.ext.project(e);
            let ai = alpha.at(g).invert()?.ok_or_else(|| Error::Certification(format!("α({g}) is singular")))?;
            certify(u.contains(&(img * &ai)), || format!("square does not commute modulo U at element {e}"))?;
            certify(seen.insert((g, img.clone())), || format!("pull-back map is not injective at element {e}"))?;
        }
        Ok(())
    }
}

/// `α'(g) = ρ'(ι(g))` for a module of an extension inflated from `G/N`.
pub fn structure_map_from_extension(module: &NormalModule, ext: &ExtensionGroup, rep: &Representation) -> Result<StructureMap> {
    certify(Arc::ptr_eq(rep.group(), &ext.group) || rep.group().order() == ext.order(), || {
        "module is not on the extension group".into()
    })?;
    rep.certify()?;
    let alpha = (0..ext.g_order).map(|g| rep.matrix(ext.section(g)).clone()).collect();
    StructureMap::from_table(module, alpha)
}

/// `α(g)^-1 α'(g) ∈ U` for all `g`, and `U·α(G) = U·α'(G)` as sets of matrices.
pub fn certify_independence(u: &CoefficientGroup, a1: &StructureMap, a2: &StructureMap) -> Result<()> {
    let mats = u.matrices().ok_or_else(|| Error::Precondition("coefficient group must be realized by matrices".into()))?;
    certify(a1.alpha.len() == a2.alpha.len(), || "structure maps on different groups".into())?;
    let mut s1 = HashSet::new();
    let mut s2 = HashSet::new();
    for (g, (x, y)) in a1.alpha.iter().zip(&a2.alpha).enumerate() {
        let xi = x.invert()?.ok_or_else(|| Error::Certification(format!("α({g}) is singular")))?;
        certify(u.contains(&(&xi * y)), || format!("α(g)^-1 α'(g) ∉ U at g = {g}"))?;
        for m in mats {
            s1.insert(m * x);
            s2.insert(m * y);
        }
    }
    certify(s1 == s2, || "U·α(G) ≠ U·α'(G)".into())
}
