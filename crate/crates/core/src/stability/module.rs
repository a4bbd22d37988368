use std::sync::Arc;

use crate::error::{certify, Error, Result};
use crate::group::{FiniteGroup, QuotientMap, Subgroup};
use crate::linalg::{FieldMatrix, Subspace};
use crate::rep::Representation;

/// A module for a normal subgroup: `N ⊲ G` and `ρ: N -> GL(Q)`.
#[derive(Clone, Debug)]
pub struct NormalModule {
    n: Subgroup,
    rho: Representation,
    qmap: QuotientMap,
}

impl NormalModule {
    pub fn new(n: Subgroup, rho: Representation) -> Result<Self> {
        if rho.group().order() != n.order() {
            return Err(Error::Dimension {
                op: "normal module",
                detail: format!("representation of a group of order {}, subgroup has order {}", rho.group().order(), n.order()),
            });
        }
        let qmap = QuotientMap::new(&n)?;
        Ok(Self { n, rho, qmap })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.n.parent()
    }

    pub fn normal(&self) -> &Subgroup {
        &self.n
    }

    pub fn rho(&self) -> &Representation {
        &self.rho
    }

    pub fn qmap(&self) -> &QuotientMap {
        &self.qmap
    }

    pub fn modulus(&self) -> u32 {
        self.rho.modulus()
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    /// Coset representatives, identity first.
    pub fn reps(&self) -> &[usize] {
        self.qmap.reps()
    }

    /// `g = reps[k] * n`; returns `(k, local index of n)`.
    pub fn decompose(&self, g: usize) -> (usize, usize) {
        let k = self.qmap.project(g);
        let grp = self.group();
        let n = grp.mul(grp.inv(self.qmap.lift(k)), g);
        (k, self.n.from_parent(n).expect("coset decomposition"))
    }

    /// `ρ` evaluated at a parent element lying in `N`.
    pub fn rho_at(&self, g: usize) -> &FieldMatrix {
        self.rho.matrix(self.n.from_parent(g).expect("element of N"))
    }

    pub fn twist(&self, g: usize) -> Result<Representation> {
        self.rho.twist(&self.n, g)
    }
}

/// A submodule `V ⊆ Q` carrying a `G`-action that extends the `N`-action.
///
/// The action is a representation of `G` in the coordinates of `space`'s echelon basis.
#[derive(Clone, Debug)]
pub struct SubmoduleAction {
    pub space: Subspace,
    pub action: Representation,
}

impl SubmoduleAction {
    /// The zero submodule.
    pub fn zero(module: &NormalModule) -> Self {
        Self {
            space: Subspace::zero(module.modulus(), module.dim()),
            action: Representation::trivial(module.group(), module.modulus(), 0),
        }
    }

    /// Checks invariance under `N`, agreement of the two `N`-actions, and the homomorphism law.
    pub fn validate(module: &NormalModule, space: Subspace, action: Representation) -> Result<Self> {
        certify(space.ambient() == module.dim(), || "V lives in the wrong space".into())?;
        certify(action.dim() == space.dim(), || "V-action has the wrong dimension".into())?;
        certify(action.group().order() == module.group().order(), || "V-action is not on G".into())?;
        if space.dim() > 0 {
            action.certify()?;
        }
        let v = Self { space, action };
        for (local, &g) in module.normal().members().iter().enumerate() {
            certify(v.agrees(module.rho().matrix(local), g), || {
                format!("V is not N-stable or the actions disagree at element {g}")
            })?;
        }
        Ok(v)
    }

    pub fn is_zero(&self) -> bool {
        self.space.is_zero()
    }

    /// `x · b_j = Σ_i A(g)_ij b_i` on the basis of `V`.
    pub fn agrees(&self, x: &FieldMatrix, g: usize) -> bool {
        if self.space.is_zero() {
            return true;
        }
        let a = self.action.matrix(g);
        self.space.basis().iter().enumerate().all(|(j, b)| {
            let img = x.apply(b);
            let expected = self.space.combine(&a.col_vec(j));
            img == expected
        })
    }

    /// Basis of `V` as matrix columns.
    pub fn basis_matrix(&self) -> FieldMatrix {
        self.space.basis_columns()
    }
}
