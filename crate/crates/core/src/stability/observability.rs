use crate::error::{certify, Result};
use crate::group::Subgroup;
use crate::linalg::FieldMatrix;
use crate::rep::{combine, hom_space, Representation, Search};

/// An `H`-linear section of evaluation `ind_H^G Q -> Q`, and the map
/// `α(g) q = (section q)(g)` it determines.
#[derive(Clone, Debug)]
pub struct ObservabilityWitness {
    pub induced: Representation,
    pub section: FieldMatrix,
    /// Indexed by elements of `G`.
    pub alpha: Vec<FieldMatrix>,
}

/// Decides whether evaluation at the identity splits as a map of `H`-modules.
///
/// Solves `Σ c_k Ev·K_k = I` over a basis `K_k` of `Hom_H(Q, ind Q)`.
pub fn test_split_observability(h: &Subgroup, rho: &Representation) -> Result<Search<ObservabilityWitness>> {
    let p = rho.modulus();
    let d = rho.dim();
    let ind = rho.induce(h)?;
    let res = ind.module.restrict(h)?;
    let hom = hom_space(rho, &res)?;
    let ev = ind.evaluation();
    let cols: Vec<Vec<u32>> = hom.iter().map(|k| (&ev * k).flatten()).collect();
    let target = FieldMatrix::identity(p, d);
    let sys = FieldMatrix::from_columns(p, d * d, &cols);
    let Some(sol) = FieldMatrix::solve(&sys, &FieldMatrix::column(p, target.flatten()))? else {
        return Ok(Search::Absent);
    };
    let section = combine(&hom, &sol.particular.col_vec(0), p, ind.module.dim(), d);
    Ok(Search::Found(ObservabilityWitness::from_section(h, rho, ind.module, ind.reps, section)?))
}

impl ObservabilityWitness {
    /// Rebuilds `α(h r_i) = ρ(h)·block_i` from a section of evaluation, and certifies.
    pub fn from_section(
        h: &Subgroup,
        rho: &Representation,
        induced: Representation,
        reps: Vec<usize>,
        section: FieldMatrix,
    ) -> Result<Self> {
        let d = rho.dim();
        let g = h.parent();
        certify(section.rows() == reps.len() * d && section.cols() == d, || "section has the wrong shape".into())?;
        let mut alpha = vec![FieldMatrix::zeros(rho.modulus(), d, d); g.order()];
        for (i, &r) in reps.iter().enumerate() {
            let block = section.block(i * d, 0, d, d);
            for (local, &x) in h.members().iter().enumerate() {
                alpha[g.mul(x, r)] = rho.matrix(local) * &block;
            }
        }
        let w = Self { induced, section, alpha };
        w.certify(h, rho)?;
        Ok(w)
    }

    /// Section property, `H`-linearity, and `α(1) = I`, `α(gh) = α(g)ρ(h)`, `α(hg) = ρ(h)α(g)`.
    pub fn certify(&self, h: &Subgroup, rho: &Representation) -> Result<()> {
        let d = rho.dim();
        let g = h.parent();
        let ev = FieldMatrix::identity(rho.modulus(), d);
        certify(self.section.block(0, 0, d, d) == ev, || "section does not split evaluation".into())?;
        for &s in h.group().generators() {
            certify(self.induced.matrix(h.to_parent(s)) * &self.section == &self.section * rho.matrix(s), || {
                format!("section is not H-linear at {}", h.to_parent(s))
            })?;
        }
        certify(self.alpha[0].is_identity(), || "α(1) is not the identity".into())?;
        for x in 0..g.order() {
            for (local, &hh) in h.members().iter().enumerate() {
                let r = rho.matrix(local);
                certify(self.alpha[g.mul(x, hh)] == &self.alpha[x] * r, || {
                    format!("α(gh) ≠ α(g)ρ(h) at ({x}, {hh})")
                })?;
                certify(self.alpha[g.mul(hh, x)] == r * &self.alpha[x], || {
                    format!("α(hg) ≠ ρ(h)α(g) at ({x}, {hh})")
                })?;
            }
        }
        Ok(())
    }
}
