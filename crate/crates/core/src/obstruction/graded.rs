use serde::{Deserialize, Serialize};

use super::extend::ideal_of;
use crate::error::{certify, Error, Result};
use crate::linalg::{FieldMatrix, Subspace};
use crate::rep::{is_irreducible, radical_series, socle_series, Representation};
use crate::stability::{NormalModule, StructureMap, SubmoduleAction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradedRoute {
    /// Socle layers of `Q`.
    Socle,
    /// Radical layers of `Q`, directly; the head is irreducible.
    IrreducibleHead,
    /// Radical layers of `Q` as the dual of the socle layers of `Q*`.
    Dual,
}

/// A `G`-action on an associated graded module.
#[derive(Clone, Debug)]
pub struct GradedModule {
    pub route: GradedRoute,
    /// Adapted basis (columns, bottom layer first) of `Q`, or of `Q*` on the dual route.
    pub basis: FieldMatrix,
    pub layer_dims: Vec<usize>,
    pub rep: Representation,
}

/// Basis adapted to an ascending chain `0 = F_0 ⊆ F_1 ⊆ ... ⊆ F_k = Q`.
fn adapted_basis(chain: &[Subspace]) -> (FieldMatrix, Vec<usize>) {
    let p = chain[0].modulus();
    let d = chain[0].ambient();
    let mut cols = Vec::new();
    let mut dims = Vec::new();
    for w in chain.windows(2) {
        let ext = w[0].extend_within(&w[1]);
        dims.push(ext.len());
        cols.extend(ext);
    }
    (FieldMatrix::from_columns(p, d, &cols), dims)
}

/// Diagonal blocks of `m` (already in adapted coordinates).
fn diagonal_part(m: &FieldMatrix, dims: &[usize]) -> FieldMatrix {
    let blocks: Vec<FieldMatrix> = dims
        .iter()
        .scan(0, |off, &k| {
            let b = m.block(*off, *off, k, k);
            *off += k;
            Some(b)
        })
        .collect();
    FieldMatrix::block_diag(m.modulus(), &blocks)
}

/// Zero below the diagonal blocks, i.e. the chain is preserved.
fn preserves_chain(m: &FieldMatrix, dims: &[usize]) -> bool {
    let mut row0 = 0;
    for &k in dims {
        let col_end = row0;
        for r in row0..row0 + k {
            if (0..col_end).any(|c| m.get(r, c) != 0) {
                return false;
            }
        }
        row0 += k;
    }
    true
}

/// Graded action of a table of matrices on a chain; the chain must be preserved and
/// every ideal element must vanish on the graded pieces.
fn graded_table(
    chain: &[Subspace],
    table: &[FieldMatrix],
    ideal: &[FieldMatrix],
) -> Result<(FieldMatrix, Vec<usize>, Vec<FieldMatrix>)> {
    let (pm, dims) = adapted_basis(chain);
    let pinv = pm.invert()?.ok_or_else(|| Error::Certification("adapted basis is singular".into()))?;
    for (i, b) in ideal.iter().enumerate() {
        let c = &(&pinv * b) * &pm;
        certify(preserves_chain(&c, &dims) && diagonal_part(&c, &dims).is_zero(), || {
            format!("U acts nontrivially on the graded layers (ideal basis element {i})")
        })?;
    }
    let mut out = Vec::with_capacity(table.len());
    for (g, a) in table.iter().enumerate() {
        let c = &(&pinv * a) * &pm;
        certify(preserves_chain(&c, &dims), || format!("α({g}) does not preserve the filtration"))?;
        out.push(diagonal_part(&c, &dims));
    }
    Ok((pm, dims, out))
}

/// `gr Q` of the socle series with the action descended from `U·α(G)`.
pub fn gr_module(module: &NormalModule, v: &SubmoduleAction, alpha: &StructureMap) -> Result<GradedModule> {
    let soc = socle_series(module.rho())?;
    if module.dim() > 0 && !soc.layers[1].is_subspace_of(&v.space) {
        return Err(Error::Precondition("gr needs soc Q ⊆ V".into()));
    }
    alpha.certify_pair(v)?;
    let ideal = ideal_of(module, v)?.basis();
    let (basis, layer_dims, table) = graded_table(&soc.layers, &alpha.alpha, &ideal)?;
    let rep = Representation::from_table(module.group(), module.modulus(), module.dim(), table)?;
    let out = GradedModule { route: GradedRoute::Socle, basis, layer_dims, rep };
    out.certify(module, alpha)?;
    Ok(out)
}

/// `gr Q` of the radical series: directly when the head is irreducible, otherwise as
/// `(gr Q*)*` through the socle series of the dual.
pub fn gr_radical_module(module: &NormalModule, v: &SubmoduleAction, alpha: &StructureMap) -> Result<GradedModule> {
    alpha.certify_pair(v)?;
    let p = module.modulus();
    let d = module.dim();
    let rad = radical_series(module.rho())?;
    let ideal = ideal_of(module, v)?.basis();
    let head_irreducible = d == 0 || {
        let head = module.rho().quotient(&rad.layers[1])?;
        head.dim() > 0 && is_irreducible(&head)?
    };
    let soc_in_v = d == 0 || socle_series(module.rho())?.layers[1].is_subspace_of(&v.space);
    if head_irreducible && soc_in_v {
        let chain: Vec<Subspace> = rad.layers.iter().rev().cloned().collect();
        let (basis, layer_dims, table) = graded_table(&chain, &alpha.alpha, &ideal)?;
        let rep = Representation::from_table(module.group(), p, d, table)?;
        let out = GradedModule { route: GradedRoute::IrreducibleHead, basis, layer_dims, rep };
        out.certify(module, alpha)?;
        return Ok(out);
    }
    let dual = module.rho().dual();
    let soc_dual = socle_series(&dual)?;
    let alpha_dual = alpha
        .inverses()?
        .into_iter()
        .map(|a| a.transpose())
        .collect::<Vec<_>>();
    let ideal_dual: Vec<FieldMatrix> = ideal.iter().map(FieldMatrix::transpose).collect();
    let (basis, layer_dims, table) = graded_table(&soc_dual.layers, &alpha_dual, &ideal_dual).map_err(|e| match e {
        Error::Certification(msg) => Error::Precondition(format!("neither radical-series route applies: {msg}")),
        other => other,
    })?;
    let table = table
        .iter()
        .map(|m| m.invert().map(|i| i.map(|i| i.transpose())))
        .collect::<Result<Option<Vec<_>>>>()?
        .ok_or_else(|| Error::Certification("graded dual action is singular".into()))?;
    let rep = Representation::from_table(module.group(), p, d, table)?;
    let out = GradedModule { route: GradedRoute::Dual, basis, layer_dims, rep };
    out.certify(module, alpha)?;
    Ok(out)
}

impl GradedModule {
    /// Homomorphism law over all pairs, agreement with the graded parts of `α` in the
    /// stored basis, layer dimensions, and `N`-restriction equal to the graded `ρ`.
    pub fn certify(&self, module: &NormalModule, alpha: &StructureMap) -> Result<()> {
        self.rep.certify_exhaustive()?;
        let pm = &self.basis;
        let pinv = pm.invert()?.ok_or_else(|| Error::Certification("adapted basis is singular".into()))?;
        let dual = self.route == GradedRoute::Dual;
        let graded = |m: &FieldMatrix| -> Result<FieldMatrix> {
            let x = if dual { m.invert()?.ok_or_else(|| Error::Certification("singular value".into()))?.transpose() } else { m.clone() };
            let c = &(&pinv * &x) * pm;
            certify(preserves_chain(&c, &self.layer_dims), || "value does not preserve the filtration".into())?;
            let g = diagonal_part(&c, &self.layer_dims);
            if dual {
                Ok(g.invert()?.ok_or_else(|| Error::Certification("singular graded value".into()))?.transpose())
            } else {
                Ok(g)
            }
        };
        for g in 0..module.group().order() {
            certify(self.rep.matrix(g) == &graded(alpha.at(g))?, || format!("graded action differs from α at {g}"))?;
        }
        for (local, &n) in module.normal().members().iter().enumerate() {
            certify(self.rep.matrix(n) == &graded(module.rho().matrix(local))?, || {
                format!("graded action differs from the graded N-action at {n}")
            })?;
        }
        let expected = match self.route {
            GradedRoute::Socle => socle_series(module.rho())?.layer_dims(),
            GradedRoute::IrreducibleHead => {
                let mut v = radical_series(module.rho())?.layer_dims();
                v.reverse();
                v
            }
            GradedRoute::Dual => socle_series(&module.rho().dual())?.layer_dims(),
        };
        certify(expected == self.layer_dims, || "graded dimensions differ from the filtration".into())
    }
}
