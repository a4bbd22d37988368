//! Problem descriptions: JSON input, validation, and the objects they denote.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupDescriptor, Perm, Subgroup, DEFAULT_CAP};
use crate::linalg::{check_modulus, FieldMatrix, Subspace};
use crate::rep::{IsoSearch, Representation};
use crate::schreier::COEFF_CAP;
use crate::stability::{NormalModule, SubmoduleAction};

pub const PROBLEM_SCHEMA: &str = "gstable.problem/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Analysis {
    Stability,
    Obstruction,
    Extension,
    Gr,
    SchreierVerify,
    Observability,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest group that is enumerated (`G`, and `E`).
    pub group: usize,
    /// Largest coefficient group `U` that is enumerated.
    pub coeff: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self { group: DEFAULT_CAP, coeff: COEFF_CAP }
    }
}

/// A `G`-stable submodule `V`: basis vectors (rows) and the action of each generator
/// of `G` in that basis, `g b_j = Σ_i A_ij b_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubmoduleSpec {
    pub basis: Vec<Vec<i64>>,
    pub action: Vec<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub schema: String,
    #[serde(default)]
    pub name: String,
    pub group: GroupDescriptor,
    /// Generators of `N` as permutations of the same domain.
    pub normal: Vec<Vec<u32>>,
    pub p: u64,
    /// One matrix (rows) per generator of `N`, in the order of `normal`.
    pub rep: Vec<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<SubmoduleSpec>,
    pub analyses: Vec<Analysis>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub caps: Caps,
}

/// The validated objects of a problem.
#[derive(Clone, Debug)]
pub struct Problem {
    pub group: Arc<FiniteGroup>,
    pub sub: Subgroup,
    pub p: u32,
    pub rho: Representation,
    /// Present when `N` is normal.
    pub module: Option<NormalModule>,
    pub v: Option<SubmoduleAction>,
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Validation { path: path.into(), message: message.into() }
}

fn matrix(p: u64, rows: &[Vec<i64>], dim: usize, path: &str) -> Result<FieldMatrix> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(invalid(path, format!("expected a {dim}x{dim} matrix")));
    }
    FieldMatrix::from_rows(p, rows).map_err(|e| invalid(path, e.to_string()))
}

impl ProblemSpec {
    pub fn search(&self) -> IsoSearch {
        IsoSearch { seed: self.seed, scan_basis: self.seed == 0, ..IsoSearch::default() }
    }

    pub fn wants(&self, a: Analysis) -> bool {
        self.analyses.contains(&a)
    }

    /// Checks every field before any computation and builds the objects.
    pub fn build(&self) -> Result<Problem> {
        if self.schema != PROBLEM_SCHEMA {
            return Err(Error::Schema { expected: PROBLEM_SCHEMA.into(), found: self.schema.clone() });
        }
        let p = check_modulus(self.p).map_err(|e| invalid("p", e.to_string()))?;
        if self.group.generators.iter().any(|g| g.len() != self.group.domain) {
            return Err(invalid("group.generators", "generator does not act on the domain"));
        }
        let group = Arc::new(FiniteGroup::from_descriptor(&self.group, self.caps.group)?);
        let normal_idx = self
            .normal
            .iter()
            .enumerate()
            .map(|(i, images)| {
                let perm = Perm::new(images.clone()).map_err(|e| invalid(format!("normal[{i}]"), e.to_string()))?;
                group
                    .index_of(&perm)
                    .ok_or_else(|| invalid(format!("normal[{i}]"), "not an element of the group"))
            })
            .collect::<Result<Vec<_>>>()?;
        let sub = Subgroup::generated(&group, &normal_idx)?;
        if self.rep.len() != self.normal.len() {
            return Err(invalid("rep", format!("{} matrices for {} generators", self.rep.len(), self.normal.len())));
        }
        let dim = self.rep.first().map_or(0, Vec::len);
        if dim == 0 {
            return Err(invalid("rep", "representation must have positive dimension"));
        }
        let mats = self
            .rep
            .iter()
            .enumerate()
            .map(|(i, m)| matrix(self.p, m, dim, &format!("rep[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let rho = Representation::from_generators(sub.group(), self.p, dim, &mats)
            .map_err(|e| invalid("rep", e.to_string()))?;
        let needs_normal = self.analyses.iter().any(|&a| a != Analysis::Observability);
        if needs_normal && !sub.is_normal() {
            return Err(invalid("normal", "subgroup is not normal"));
        }
        let module = if sub.is_normal() { Some(NormalModule::new(sub.clone(), rho.clone())?) } else { None };
        let v = match (&self.v, &module) {
            (None, Some(m)) => Some(SubmoduleAction::zero(m)),
            (None, None) => None,
            (Some(_), None) => return Err(invalid("v", "V needs a normal subgroup")),
            (Some(vs), Some(m)) => Some(self.build_v(vs, m, &group, p)?),
        };
        Ok(Problem { group, sub, p, rho, module, v })
    }

    fn build_v(&self, vs: &SubmoduleSpec, m: &NormalModule, group: &Arc<FiniteGroup>, p: u32) -> Result<SubmoduleAction> {
        let d = m.dim();
        let k = vs.basis.len();
        if vs.basis.iter().any(|b| b.len() != d) {
            return Err(invalid("v.basis", format!("vectors must have length {d}")));
        }
        let user: Vec<Vec<u32>> = vs
            .basis
            .iter()
            .map(|b| b.iter().map(|&x| crate::linalg::field::reduce(x, p)).collect())
            .collect();
        let space = Subspace::span(p, d, user.iter().cloned());
        if space.dim() != k {
            return Err(invalid("v.basis", "basis vectors are dependent"));
        }
        if vs.action.len() != group.generators().len() {
            return Err(invalid("v.action", "one matrix per generator of G is required"));
        }
        // Echelon vector e_j = Σ_i c_ij u_i; the action in echelon coordinates is C^-1 A C.
        let ucols = FieldMatrix::from_columns(p, d, &user);
        let c_cols = space
            .basis()
            .iter()
            .map(|e| {
                FieldMatrix::solve(&ucols, &FieldMatrix::column(p, e.clone()))?
                    .map(|s| s.particular.col_vec(0))
                    .ok_or_else(|| invalid("v.basis", "echelon basis outside the span"))
            })
            .collect::<Result<Vec<_>>>()?;
        let c = FieldMatrix::from_columns(p, k, &c_cols);
        let cinv = c.invert()?.ok_or_else(|| invalid("v.basis", "singular change of basis"))?;
        let gens = vs
            .action
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let a = matrix(self.p, a, k, &format!("v.action[{i}]"))?;
                Ok(&(&cinv * &a) * &c)
            })
            .collect::<Result<Vec<_>>>()?;
        let action = Representation::from_generators(group, self.p, k, &gens).map_err(|e| invalid("v.action", e.to_string()))?;
        SubmoduleAction::validate(m, space, action).map_err(|e| invalid("v", e.to_string()))
    }
}

impl Problem {
    pub fn module(&self) -> Result<&NormalModule> {
        self.module.as_ref().ok_or_else(|| Error::Precondition("the subgroup is not normal".into()))
    }

    pub fn pair(&self) -> Result<(&NormalModule, &SubmoduleAction)> {
        let m = self.module()?;
        let v = self.v.as_ref().ok_or_else(|| Error::Precondition("no submodule V".into()))?;
        Ok((m, v))
    }
}

/// Rows of a matrix as signed integers, the JSON form used in problems and reports.
pub fn rows_of(m: &FieldMatrix) -> Vec<Vec<i64>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|&x| x as i64).collect()).collect()
}
