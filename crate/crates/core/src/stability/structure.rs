use serde::{Deserialize, Serialize};

use super::module::{NormalModule, SubmoduleAction};
use crate::error::{certify, Error, Result};
use crate::linalg::FieldMatrix;
use crate::rep::{find_invertible_affine, hom_space, module_isomorphism, IsoSearch, Search};

/// Outcome of comparing `Q` with its twists `Q^r` over the coset representatives.
#[derive(Clone, Debug, PartialEq)]
pub enum CosetSearch {
    /// One intertwiner `X_k: Q -> Q^{r_k}` per coset representative, `X_0 = I`.
    Stable(Vec<FieldMatrix>),
    /// No isomorphism `Q -> Q^r` exists. `pair_only` is set when one exists but
    /// none of them restricts to the given action on `V`.
    Unstable { element: usize, pair_only: bool },
    Inconclusive { element: usize, reason: String },
}

impl CosetSearch {
    pub fn is_stable(&self) -> bool {
        matches!(self, CosetSearch::Stable(_))
    }
}

/// Tests `Q ≅ Q^r` for each coset representative `r`, compatibly with `V` when it is nonzero.
pub fn test_g_stability(module: &NormalModule, v: &SubmoduleAction, search: IsoSearch) -> Result<CosetSearch> {
    let p = module.modulus();
    let mut out = vec![FieldMatrix::identity(p, module.dim())];
    for (k, &r) in module.reps().iter().enumerate().skip(1) {
        let seeded = IsoSearch { seed: search.seed.wrapping_add(k as u64), ..search };
        let twisted = module.twist(r)?;
        let found = if v.is_zero() {
            module_isomorphism(module.rho(), &twisted, seeded)?
        } else {
            match pair_intertwiner(module, v, &twisted, r, seeded)? {
                Search::Absent => {
                    let plain = module_isomorphism(module.rho(), &twisted, seeded)?;
                    return Ok(CosetSearch::Unstable { element: r, pair_only: plain.is_found() });
                }
                other => other,
            }
        };
        match found {
            Search::Found(x) => out.push(x),
            Search::Absent => return Ok(CosetSearch::Unstable { element: r, pair_only: false }),
            Search::Unresolved(reason) => return Ok(CosetSearch::Inconclusive { element: r, reason }),
        }
    }
    Ok(CosetSearch::Stable(out))
}

/// Invertible `X` with `X ρ(n) = ρ^r(n) X` and `X B = B A(r)`, `B` a basis of `V`.
fn pair_intertwiner(
    module: &NormalModule,
    v: &SubmoduleAction,
    twisted: &crate::rep::Representation,
    r: usize,
    search: IsoSearch,
) -> Result<Search<FieldMatrix>> {
    let p = module.modulus();
    let d = module.dim();
    let hom = hom_space(module.rho(), twisted)?;
    if hom.is_empty() {
        return Ok(Search::Absent);
    }
    let b = v.basis_matrix();
    let target = &b * v.action.matrix(r);
    let cols: Vec<Vec<u32>> = hom.iter().map(|x| (x * &b).flatten()).collect();
    let sys = FieldMatrix::from_columns(p, target.rows() * target.cols(), &cols);
    let rhs = FieldMatrix::column(p, target.flatten());
    let Some(sol) = FieldMatrix::solve(&sys, &rhs)? else {
        return Ok(Search::Absent);
    };
    let base = crate::rep::combine(&hom, &sol.particular.col_vec(0), p, d, d);
    let dirs: Vec<FieldMatrix> =
        sol.nullspace.iter().map(|k| crate::rep::combine(&hom, &k.col_vec(0), p, d, d)).collect();
    Ok(find_invertible_affine(&base, &dirs, search))
}

/// A structure map `α: G -> GL(Q)`, tabulated over all of `G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureMap {
    pub alpha: Vec<FieldMatrix>,
}

impl StructureMap {
    /// `α(r_k n) = X_k ρ(n)` from one intertwiner per coset representative.
    pub fn from_coset_intertwiners(module: &NormalModule, xs: &[FieldMatrix]) -> Result<Self> {
        let reps = module.reps();
        if xs.len() != reps.len() {
            return Err(Error::Dimension {
                op: "structure map",
                detail: format!("{} intertwiners for {} cosets", xs.len(), reps.len()),
            });
        }
        if !xs[0].is_identity() {
            return Err(Error::Precondition("the identity coset must be assigned I".into()));
        }
        let grp = module.group();
        let n = module.normal();
        for (x, &r) in xs.iter().zip(reps) {
            certify(x.rows() == module.dim() && x.is_square() && x.is_invertible(), || {
                format!("intertwiner for coset representative {r} is not invertible of size {}", module.dim())
            })?;
            for &s in n.group().generators() {
                let ns = n.to_parent(s);
                let lhs = x * module.rho().matrix(s);
                let rhs = module.rho_at(grp.conj(r, ns)) * x;
                certify(lhs == rhs, || format!("intertwiner fails the twist equation at (g, n) = ({r}, {ns})"))?;
            }
        }
        let alpha = (0..grp.order())
            .map(|g| {
                let (k, local) = module.decompose(g);
                &xs[k] * module.rho().matrix(local)
            })
            .collect();
        let map = Self { alpha };
        map.certify(module)?;
        Ok(map)
    }

    /// Wraps a table, certifying it.
    pub fn from_table(module: &NormalModule, alpha: Vec<FieldMatrix>) -> Result<Self> {
        certify(alpha.len() == module.group().order(), || "structure map table has the wrong length".into())?;
        let map = Self { alpha };
        map.certify(module)?;
        Ok(map)
    }

    pub fn at(&self, g: usize) -> &FieldMatrix {
        &self.alpha[g]
    }

    /// Coset representative values `α(r_k)`.
    pub fn coset_values(&self, module: &NormalModule) -> Vec<FieldMatrix> {
        module.reps().iter().map(|&r| self.alpha[r].clone()).collect()
    }

    pub fn inverses(&self) -> Result<Vec<FieldMatrix>> {
        self.alpha
            .iter()
            .enumerate()
            .map(|(g, a)| a.invert()?.ok_or_else(|| Error::Certification(format!("α({g}) is singular"))))
            .collect()
    }

    /// Exhaustive check of `α(1) = I`, invertibility, the twist equation, both
    /// normalization laws, and `α|_N = ρ`.
    pub fn certify(&self, module: &NormalModule) -> Result<()> {
        let grp = module.group();
        let d = module.dim();
        certify(self.alpha.len() == grp.order(), || "structure map table has the wrong length".into())?;
        certify(self.alpha.iter().all(|a| a.rows() == d && a.cols() == d && a.modulus() == module.modulus()), || {
            "structure map value has the wrong shape".into()
        })?;
        certify(self.alpha[0].is_identity(), || "α(1) is not the identity".into())?;
        for (g, a) in self.alpha.iter().enumerate() {
            certify(a.is_invertible(), || format!("α({g}) is singular"))?;
        }
        let n = module.normal();
        for (local, &ng) in n.members().iter().enumerate() {
            let rho_n = module.rho().matrix(local);
            certify(&self.alpha[ng] == rho_n, || format!("α differs from ρ at N-element {ng}"))?;
            for g in 0..grp.order() {
                let a = &self.alpha[g];
                let an = a * rho_n;
                certify(an == module.rho_at(grp.conj(g, ng)) * a, || {
                    format!("twist equation fails at (g, n) = ({g}, {ng})")
                })?;
                certify(self.alpha[grp.mul(g, ng)] == an, || format!("α(gn) ≠ α(g)ρ(n) at (g, n) = ({g}, {ng})"))?;
                certify(self.alpha[grp.mul(ng, g)] == rho_n * a, || {
                    format!("α(ng) ≠ ρ(n)α(g) at (g, n) = ({g}, {ng})")
                })?;
            }
        }
        Ok(())
    }

    /// `α(g)` restricts to the given action on `V` for every `g`.
    pub fn certify_pair(&self, v: &SubmoduleAction) -> Result<()> {
        for (g, a) in self.alpha.iter().enumerate() {
            certify(v.agrees(a, g), || format!("α({g}) does not restrict to the action on V"))?;
        }
        Ok(())
    }
}

/// Factor set `γ(g,h) = α(g)α(h)α(gh)^-1`, stored on `G/N × G/N`.
///
/// For a normalized `α` the full table on `G × G` is constant on `N`-cosets
/// (certified on construction), so the quotient table determines it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorSet {
    pub quotient_order: usize,
    /// Row-major, `values[a * m + b] = γ(a, b)`.
    pub values: Vec<FieldMatrix>,
}

impl FactorSet {
    pub fn compute(module: &NormalModule, alpha: &StructureMap) -> Result<Self> {
        let inv = alpha.inverses()?;
        let grp = module.group();
        let qmap = module.qmap();
        let m = qmap.quotient().order();
        let lifts: Vec<usize> = (0..m).map(|a| qmap.lift(a)).collect();
        let mut values = Vec::with_capacity(m * m);
        for &la in &lifts {
            for &lb in &lifts {
                values.push(&(alpha.at(la) * alpha.at(lb)) * &inv[grp.mul(la, lb)]);
            }
        }
        let fs = Self { quotient_order: m, values };
        fs.certify(module, alpha, &inv)?;
        Ok(fs)
    }

    pub fn at(&self, a: usize, b: usize) -> &FieldMatrix {
        &self.values[a * self.quotient_order + b]
    }

    /// `γ(g, h)` for elements of `G`.
    pub fn value(&self, module: &NormalModule, g: usize, h: usize) -> &FieldMatrix {
        let q = module.qmap();
        self.at(q.project(g), q.project(h))
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(FieldMatrix::is_identity)
    }

    fn certify(&self, module: &NormalModule, alpha: &StructureMap, inv: &[FieldMatrix]) -> Result<()> {
        let grp = module.group();
        let qmap = module.qmap();
        let m = self.quotient_order;
        for a in 0..m {
            certify(self.at(0, a).is_identity() && self.at(a, 0).is_identity(), || {
                format!("γ is not normalized at quotient element {a}")
            })?;
        }
        let n = module.normal();
        for (k, val) in self.values.iter().enumerate() {
            for &s in n.group().generators() {
                let r = module.rho().matrix(s);
                certify(val * r == r * val, || format!("γ at {k} does not commute with ρ"))?;
            }
        }
        for g in 0..grp.order() {
            for h in 0..grp.order() {
                let full = &(alpha.at(g) * alpha.at(h)) * &inv[grp.mul(g, h)];
                certify(&full == self.at(qmap.project(g), qmap.project(h)), || {
                    format!("γ is not constant on cosets at ({g}, {h})")
                })?;
            }
        }
        self.certify_schreier(module, alpha, inv)
    }

    /// `α(f)γ(g,h)α(f)^-1 · γ(f,gh) = γ(f,g) · γ(fg,h)` for all `f` in `G`, `g, h` in `G/N`.
    ///
    /// Together with coset-constancy this covers every triple of `G`.
    fn certify_schreier(&self, module: &NormalModule, alpha: &StructureMap, inv: &[FieldMatrix]) -> Result<()> {
        let grp = module.group();
        let qmap = module.qmap();
        let m = self.quotient_order;
        for f in 0..grp.order() {
            let fb = qmap.project(f);
            let quot = qmap.quotient();
            for a in 0..m {
                for b in 0..m {
                    let lhs = &(&(alpha.at(f) * self.at(a, b)) * &inv[f]) * self.at(fb, quot.mul(a, b));
                    let rhs = self.at(fb, a) * self.at(quot.mul(fb, a), b);
                    certify(lhs == rhs, || {
                        format!("Schreier identity fails at (f, g, h) = ({f}, {}, {})", qmap.lift(a), qmap.lift(b))
                    })?;
                }
            }
        }
        Ok(())
    }
}
