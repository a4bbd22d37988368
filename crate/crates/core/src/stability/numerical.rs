use super::module::{NormalModule, SubmoduleAction};
use super::structure::StructureMap;
use crate::error::{certify, Error, Result};
use crate::linalg::FieldMatrix;
use crate::rep::{is_iso_to_power, IsoSearch, Representation, Search};

/// A `G`-module `M` with `M|_N ≅ Q^{⊕n}`; `iso · M(n) = ρ^{⊕n}(n) · iso`.
#[derive(Clone, Debug)]
pub struct NumericalWitness {
    pub copies: usize,
    pub module: Representation,
    pub iso: FieldMatrix,
}

impl NumericalWitness {
    pub fn certify(&self, module: &NormalModule) -> Result<()> {
        let d = module.dim();
        certify(self.module.group().order() == module.group().order(), || "witness module is not on G".into())?;
        certify(self.module.dim() == self.copies * d, || "witness module has the wrong dimension".into())?;
        self.module.certify()?;
        certify(
            self.iso.rows() == self.module.dim() && self.iso.is_square() && self.iso.is_invertible(),
            || "numerical isomorphism is not invertible".into(),
        )?;
        let n = module.normal();
        for &s in n.group().generators() {
            let blocks = vec![module.rho().matrix(s).clone(); self.copies];
            let sum = FieldMatrix::block_diag(module.modulus(), &blocks);
            certify(&self.iso * self.module.matrix(n.to_parent(s)) == &sum * &self.iso, || {
                format!("numerical isomorphism fails at N-element {}", n.to_parent(s))
            })?;
        }
        Ok(())
    }
}

/// `Q` as an `N`-direct summand of a `G`-module `M`: `project · embed = I`,
/// both maps `N`-linear, and `embed(V)` a `G`-submodule carrying the action on `V`.
#[derive(Clone, Debug)]
pub struct SummandWitness {
    pub module: Representation,
    pub embed: FieldMatrix,
    pub project: FieldMatrix,
}

impl SummandWitness {
    pub fn certify(&self, module: &NormalModule, v: &SubmoduleAction) -> Result<()> {
        let d = module.dim();
        let big = self.module.dim();
        certify(self.module.group().order() == module.group().order(), || "summand module is not on G".into())?;
        certify(
            (self.embed.rows(), self.embed.cols(), self.project.rows(), self.project.cols()) == (big, d, d, big),
            || "summand maps have the wrong shape".into(),
        )?;
        self.module.certify()?;
        certify((&self.project * &self.embed).is_identity(), || "projection after embedding is not the identity".into())?;
        let n = module.normal();
        for &s in n.group().generators() {
            let ns = n.to_parent(s);
            let r = module.rho().matrix(s);
            certify(self.module.matrix(ns) * &self.embed == &self.embed * r, || {
                format!("embedding is not N-linear at {ns}")
            })?;
            certify(&self.project * self.module.matrix(ns) == r * &self.project, || {
                format!("projection is not N-linear at {ns}")
            })?;
        }
        if !v.is_zero() {
            let eb = &self.embed * &v.basis_matrix();
            for &s in module.group().generators() {
                certify(self.module.matrix(s) * &eb == &eb * v.action.matrix(s), || {
                    format!("embedded V is not a G-submodule with the given action at generator {s}")
                })?;
            }
        }
        Ok(())
    }

    /// `α(g) = project · M(g) · embed`; invertible when `V` contains the socle.
    pub fn structure_map(&self, module: &NormalModule, v: &SubmoduleAction) -> Result<StructureMap> {
        let alpha: Vec<FieldMatrix> = (0..module.group().order())
            .map(|g| &(&self.project * self.module.matrix(g)) * &self.embed)
            .collect();
        if let Some(g) = alpha.iter().position(|a| !a.is_invertible()) {
            return Err(Error::Precondition(format!(
                "summand yields a singular value at element {g}; V must contain the socle"
            )));
        }
        let map = StructureMap::from_table(module, alpha)?;
        map.certify_pair(v)?;
        Ok(map)
    }
}

/// A `G`-module structure on `Q ⊗ Y` for a `G/N`-module `Y`, restricting to
/// `ρ ⊗ 1` on `N` and to `A ⊗ Y` on `V ⊗ Y`.
#[derive(Clone, Debug)]
pub struct TensorWitness {
    pub y: Representation,
    pub module: Representation,
}

impl TensorWitness {
    pub fn certify(&self, module: &NormalModule, v: &SubmoduleAction) -> Result<()> {
        let p = module.modulus();
        let d = module.dim();
        let m = self.y.dim();
        let qmap = module.qmap();
        certify(m > 0, || "tensor factor is zero".into())?;
        certify(self.y.group().order() == qmap.quotient().order(), || "tensor factor is not a G/N-module".into())?;
        certify(self.module.group().order() == module.group().order(), || "tensor module is not on G".into())?;
        certify(self.module.dim() == d * m, || "tensor module has the wrong dimension".into())?;
        self.y.certify()?;
        self.module.certify()?;
        let id = FieldMatrix::identity(p, m);
        let n = module.normal();
        for &s in n.group().generators() {
            let ns = n.to_parent(s);
            certify(self.module.matrix(ns) == &module.rho().matrix(s).kronecker(&id), || {
                format!("tensor module does not restrict to ρ ⊗ 1 at {ns}")
            })?;
        }
        if !v.is_zero() {
            let bt = v.basis_matrix().kronecker(&id);
            for &s in module.group().generators() {
                let act = v.action.matrix(s).kronecker(self.y.matrix(qmap.project(s)));
                certify(self.module.matrix(s) * &bt == &bt * &act, || {
                    format!("V ⊗ Y is not a G-submodule with the tensor action at generator {s}")
                })?;
            }
        }
        Ok(())
    }
}

/// `ind Q` with `W = diag(α(r_i)^-1)`, which carries `res ind Q` onto `Q^{⊕|G:N|}`.
pub fn numerical_from_structure(module: &NormalModule, alpha: &StructureMap) -> Result<NumericalWitness> {
    let ind = module.rho().induce(module.normal())?;
    let inv = alpha.inverses()?;
    let blocks: Vec<FieldMatrix> = ind.reps.iter().map(|&r| inv[r].clone()).collect();
    let w = NumericalWitness {
        copies: ind.reps.len(),
        iso: FieldMatrix::block_diag(module.modulus(), &blocks),
        module: ind.module,
    };
    w.certify(module)?;
    Ok(w)
}

/// Decides `res ind Q ≅ Q^{⊕|G:N|}` by the isomorphism search, without a structure map.
pub fn numerical_by_search(module: &NormalModule, search: IsoSearch) -> Result<Search<NumericalWitness>> {
    let ind = module.rho().induce(module.normal())?;
    let copies = ind.reps.len();
    let res = ind.module.restrict(module.normal())?;
    let found = is_iso_to_power(&res, module.rho(), copies, search)?;
    match found {
        Search::Found(iso) => {
            let w = NumericalWitness { copies, module: ind.module, iso };
            w.certify(module)?;
            Ok(Search::Found(w))
        }
        Search::Absent => Ok(Search::Absent),
        Search::Unresolved(r) => Ok(Search::Unresolved(r)),
    }
}

/// `q -> f_q` with `f_q(g) = α(g) q`, split by evaluation at the identity.
pub fn converse_embedding(module: &NormalModule, alpha: &StructureMap) -> Result<SummandWitness> {
    let ind = module.rho().induce(module.normal())?;
    let parts: Vec<FieldMatrix> = ind.reps.iter().map(|&r| alpha.at(r).clone()).collect();
    let w = SummandWitness { embed: FieldMatrix::vstack(&parts)?, project: ind.evaluation(), module: ind.module };
    w.certify(module, &SubmoduleAction::zero(module))?;
    Ok(w)
}

/// Block relabeling `Q^{⊕n} -> Q ⊗ k^n`, `(i, q) -> (q, i)`.
fn block_to_tensor(p: u32, d: usize, n: usize) -> FieldMatrix {
    let mut perm = FieldMatrix::zeros(p, d * n, d * n);
    for i in 0..n {
        for q in 0..d {
            perm.set(q * n + i, i * d + q, 1);
        }
    }
    perm
}

/// Numerical witness to a tensor witness with `Y` the `n`-dimensional trivial module.
pub fn numerical_to_tensor(module: &NormalModule, w: &NumericalWitness) -> Result<TensorWitness> {
    let p = module.modulus();
    let perm = block_to_tensor(p, module.dim(), w.copies);
    let conj = &perm * &w.iso;
    let t = w.module.conjugate_by(&conj)?;
    let y = Representation::trivial(module.qmap().quotient(), p, w.copies);
    let out = TensorWitness { y, module: t };
    out.certify(module, &SubmoduleAction::zero(module))?;
    Ok(out)
}

/// `M = (Q ⊗ Y) ⊗ Y*` with `M|_N ≅ Q^{⊕ dim(Y)²}`, and the summand
/// `q -> q ⊗ Σ e_i ⊗ e_i*` split by the `e_1 ⊗ e_1*` coefficient.
pub fn tensor_to_numerical(
    module: &NormalModule,
    v: &SubmoduleAction,
    t: &TensorWitness,
) -> Result<(NumericalWitness, SummandWitness)> {
    let p = module.modulus();
    let d = module.dim();
    let m = t.y.dim();
    let ydual = t.y.dual().inflate(module.qmap())?;
    let big = t.module.tensor(&ydual)?;
    let n = m * m;
    // Basis (q, y, y') sits at (q*m + y)*m + y'.
    let mut iso = FieldMatrix::zeros(p, d * n, d * n);
    for q in 0..d {
        for y in 0..m {
            for y2 in 0..m {
                iso.set((y * m + y2) * d + q, (q * m + y) * m + y2, 1);
            }
        }
    }
    let mut embed = FieldMatrix::zeros(p, d * n, d);
    let mut project = FieldMatrix::zeros(p, d, d * n);
    for q in 0..d {
        for y in 0..m {
            embed.set((q * m + y) * m + y, q, 1);
        }
        project.set(q, q * m * m, 1);
    }
    let numerical = NumericalWitness { copies: n, module: big.clone(), iso };
    numerical.certify(module)?;
    let summand = SummandWitness { module: big, embed, project };
    summand.certify(module, v)?;
    Ok((numerical, summand))
}

/// Both directions between tensor and numerical witnesses, each certified.
#[derive(Clone, Debug)]
pub struct TensorRoundtrip {
    pub numerical: NumericalWitness,
    pub summand: SummandWitness,
    pub tensor_again: TensorWitness,
}

pub fn tensor_roundtrip(module: &NormalModule, v: &SubmoduleAction, t: &TensorWitness) -> Result<TensorRoundtrip> {
    t.certify(module, v)?;
    let (numerical, summand) = tensor_to_numerical(module, v, t)?;
    let tensor_again = numerical_to_tensor(module, &numerical)?;
    Ok(TensorRoundtrip { numerical, summand, tensor_again })
}
