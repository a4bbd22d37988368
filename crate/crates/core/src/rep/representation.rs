use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{certify, Error, Result};
use crate::group::{FiniteGroup, GroupDescriptor, QuotientMap, Subgroup, DEFAULT_CAP};
use crate::linalg::{check_modulus, FieldMatrix, Subspace};

/// Default bound on the dimension of constructed modules.
pub const DIM_CAP: usize = 2048;

/// A linear representation `group -> GL(dim, p)`, stored as one matrix per element.
#[derive(Clone, Debug)]
pub struct Representation {
    group: Arc<FiniteGroup>,
    p: u32,
    dim: usize,
    matrices: Vec<FieldMatrix>,
}

/// JSON form: group descriptor plus one matrix per group generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepDescriptor {
    pub group: GroupDescriptor,
    pub p: u64,
    pub dim: usize,
    pub generator_matrices: Vec<FieldMatrix>,
}

impl Representation {
    /// Extends generator images to the whole group along a breadth-first spanning tree
    /// and checks every relation closing the search.
    pub fn from_generators(
        group: &Arc<FiniteGroup>,
        p: u64,
        dim: usize,
        gens: &[FieldMatrix],
    ) -> Result<Self> {
        let p = check_modulus(p)?;
        if gens.len() != group.generators().len() {
            return Err(Error::Dimension {
                op: "rep_from_generators",
                detail: format!("{} matrices for {} generators", gens.len(), group.generators().len()),
            });
        }
        for (i, m) in gens.iter().enumerate() {
            if m.modulus() != p {
                return Err(Error::Modulus(m.modulus(), p));
            }
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::Dimension {
                    op: "rep_from_generators",
                    detail: format!("generator {i} is {}x{}, expected {dim}x{dim}", m.rows(), m.cols()),
                });
            }
            if !m.is_invertible() {
                return Err(Error::Validation {
                    path: format!("generator_matrices[{i}]"),
                    message: "matrix is singular".into(),
                });
            }
        }
        let tree = group.generator_tree()?;
        let n = group.order();
        let mut order: Vec<usize> = (1..n).collect();
        // Parents must be filled before children: sort by word length.
        let depth = |mut e: usize| {
            let mut d = 0;
            while let Some((parent, _)) = tree[e] {
                e = parent;
                d += 1;
            }
            d
        };
        order.sort_by_key(|&e| depth(e));
        let mut matrices = vec![FieldMatrix::identity(p, dim); n];
        for e in order {
            let (parent, k) = tree[e].expect("non-identity element");
            matrices[e] = &gens[k] * &matrices[parent];
        }
        for e in 0..n {
            for (k, &s) in group.generators().iter().enumerate() {
                let se = group.mul(s, e);
                if matrices[se] != &gens[k] * &matrices[e] {
                    let mut word = vec![k];
                    word.extend(group.word(&tree, e));
                    return Err(Error::RelationViolation { word });
                }
            }
        }
        Ok(Self { group: group.clone(), p, dim, matrices })
    }

    /// Wraps a full matrix table, certifying it on generators times elements.
    pub fn from_table(group: &Arc<FiniteGroup>, p: u32, dim: usize, matrices: Vec<FieldMatrix>) -> Result<Self> {
        if matrices.len() != group.order() {
            return Err(Error::Dimension {
                op: "rep_from_table",
                detail: format!("{} matrices for a group of order {}", matrices.len(), group.order()),
            });
        }
        let r = Self { group: group.clone(), p, dim, matrices };
        r.certify()?;
        Ok(r)
    }

    pub(crate) fn from_table_unchecked(group: &Arc<FiniteGroup>, p: u32, dim: usize, matrices: Vec<FieldMatrix>) -> Self {
        debug_assert_eq!(matrices.len(), group.order());
        Self { group: group.clone(), p, dim, matrices }
    }

    pub fn from_descriptor(desc: &RepDescriptor) -> Result<Self> {
        let g = Arc::new(FiniteGroup::from_descriptor(&desc.group, DEFAULT_CAP)?);
        Self::from_generators(&g, desc.p, desc.dim, &desc.generator_matrices)
    }

    pub fn descriptor(&self) -> RepDescriptor {
        RepDescriptor {
            group: self.group.descriptor(),
            p: self.p as u64,
            dim: self.dim,
            generator_matrices: self.generator_matrices(),
        }
    }

    pub fn trivial(group: &Arc<FiniteGroup>, p: u32, dim: usize) -> Self {
        let id = FieldMatrix::identity(p, dim);
        Self::from_table_unchecked(group, p, dim, vec![id; group.order()])
    }

    /// Left regular module: `g e_h = e_{gh}`.
    pub fn regular(group: &Arc<FiniteGroup>, p: u32) -> Self {
        let n = group.order();
        let matrices = (0..n)
            .map(|g| {
                let mut m = FieldMatrix::zeros(p, n, n);
                for h in 0..n {
                    m.set(group.mul(g, h), h, 1);
                }
                m
            })
            .collect();
        Self::from_table_unchecked(group, p, n, matrices)
    }

    /// Permutation module on the points the group acts on: `g e_i = e_{g(i)}`.
    pub fn permutation(group: &Arc<FiniteGroup>, p: u32) -> Self {
        let d = group.degree();
        let matrices = group
            .elements()
            .iter()
            .map(|g| {
                let mut m = FieldMatrix::zeros(p, d, d);
                for i in 0..d {
                    m.set(g.apply(i), i, 1);
                }
                m
            })
            .collect();
        Self::from_table_unchecked(group, p, d, matrices)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &FieldMatrix {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[FieldMatrix] {
        &self.matrices
    }

    pub fn generator_matrices(&self) -> Vec<FieldMatrix> {
        self.group.generators().iter().map(|&g| self.matrices[g].clone()).collect()
    }

    /// Homomorphism law on generators times elements, plus `ρ(1) = I`.
    /// Sufficient because the generators generate.
    pub fn certify(&self) -> Result<()> {
        self.group.generator_tree()?;
        for (g, m) in self.matrices.iter().enumerate() {
            certify(m.rows() == self.dim && m.cols() == self.dim && m.modulus() == self.p, || {
                format!("matrix of element {g} has the wrong shape")
            })?;
        }
        certify(self.matrices[0].is_identity(), || "identity does not act as I".into())?;
        for &s in self.group.generators() {
            for e in 0..self.group.order() {
                let se = self.group.mul(s, e);
                certify(self.matrices[se] == &self.matrices[s] * &self.matrices[e], || {
                    format!("homomorphism law fails at ({s}, {e})")
                })?;
            }
        }
        Ok(())
    }

    /// Homomorphism law over all pairs of elements.
    pub fn certify_exhaustive(&self) -> Result<()> {
        let n = self.group.order();
        certify(self.matrices[0].is_identity(), || "identity does not act as I".into())?;
        for x in 0..n {
            for y in 0..n {
                certify(self.matrices[self.group.mul(x, y)] == &self.matrices[x] * &self.matrices[y], || {
                    format!("homomorphism law fails at ({x}, {y})")
                })?;
            }
        }
        Ok(())
    }

    fn same_setting(&self, other: &Representation, op: &'static str) -> Result<()> {
        if self.p != other.p {
            return Err(Error::Modulus(self.p, other.p));
        }
        if !Arc::ptr_eq(&self.group, &other.group) && self.group.order() != other.group.order() {
            return Err(Error::Dimension { op, detail: "representations of different groups".into() });
        }
        Ok(())
    }

    /// `ρ^g(n) = ρ(g n g^-1)` for a representation of the normal subgroup `n_sub`.
    pub fn twist(&self, n_sub: &Subgroup, g: usize) -> Result<Representation> {
        let parent = n_sub.parent();
        if g >= parent.order() {
            return Err(Error::NotInGroup(format!("index {g}")));
        }
        self.check_on(n_sub)?;
        let matrices = (0..n_sub.order())
            .map(|n| {
                let c = parent.conj(g, n_sub.to_parent(n));
                let local = n_sub
                    .from_parent(c)
                    .ok_or_else(|| Error::NotNormal(format!("conjugate of {n} by {g} leaves the subgroup")))?;
                Ok(self.matrices[local].clone())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_table_unchecked(&self.group, self.p, self.dim, matrices))
    }

    fn check_on(&self, sub: &Subgroup) -> Result<()> {
        if self.group.order() != sub.order() {
            return Err(Error::Dimension {
                op: "subgroup representation",
                detail: format!("representation of order {} vs subgroup order {}", self.group.order(), sub.order()),
            });
        }
        Ok(())
    }

    /// Restriction to a subgroup of this representation's group.
    pub fn restrict(&self, sub: &Subgroup) -> Result<Representation> {
        if sub.parent().order() != self.group.order() {
            return Err(Error::Dimension { op: "restrict", detail: "subgroup of a different group".into() });
        }
        let matrices = sub.members().iter().map(|&m| self.matrices[m].clone()).collect();
        Ok(Self::from_table_unchecked(sub.group(), self.p, self.dim, matrices))
    }

    /// Kronecker product; basis vector `(i, j)` sits at `i * other.dim + j`.
    pub fn tensor(&self, other: &Representation) -> Result<Representation> {
        self.same_setting(other, "tensor")?;
        let dim = self.dim * other.dim;
        if dim > DIM_CAP {
            return Err(Error::SizeLimit { what: "tensor dimension", needed: dim, cap: DIM_CAP });
        }
        let matrices = self.matrices.iter().zip(&other.matrices).map(|(a, b)| a.kronecker(b)).collect();
        Ok(Self::from_table_unchecked(&self.group, self.p, dim, matrices))
    }

    /// Contragredient module, `g -> ρ(g^-1)^T`.
    pub fn dual(&self) -> Representation {
        let matrices = (0..self.group.order())
            .map(|g| self.matrices[self.group.inv(g)].transpose())
            .collect();
        Self::from_table_unchecked(&self.group, self.p, self.dim, matrices)
    }

    pub fn direct_sum(reps: &[Representation]) -> Result<Representation> {
        let first = reps.first().ok_or(Error::Dimension { op: "direct_sum", detail: "no summands".into() })?;
        for r in reps {
            first.same_setting(r, "direct_sum")?;
        }
        let dim = reps.iter().map(|r| r.dim).sum();
        let matrices = (0..first.group.order())
            .map(|g| {
                let blocks: Vec<FieldMatrix> = reps.iter().map(|r| r.matrices[g].clone()).collect();
                FieldMatrix::block_diag(first.p, &blocks)
            })
            .collect();
        Ok(Self::from_table_unchecked(&first.group, first.p, dim, matrices))
    }

    pub fn power(&self, n: usize) -> Result<Representation> {
        Self::direct_sum(&vec![self.clone(); n])
    }

    /// Pulls a representation of `G/N` back to `G`.
    pub fn inflate(&self, qmap: &QuotientMap) -> Result<Representation> {
        if self.group.order() != qmap.quotient().order() {
            return Err(Error::Dimension { op: "inflate", detail: "not a representation of the quotient".into() });
        }
        let matrices = (0..qmap.parent().order()).map(|g| self.matrices[qmap.project(g)].clone()).collect();
        Ok(Self::from_table_unchecked(qmap.parent(), self.p, self.dim, matrices))
    }

    /// Induction from a subgroup `h` of `G` to `G`.
    ///
    /// Coordinates are values `f(r_i)` of `f: G -> Q` with `f(hx) = ρ(h) f(x)`, on right
    /// coset representatives `r_i` (identity first); `G` acts by `(x f)(y) = f(yx)`.
    pub fn induce(&self, h: &Subgroup) -> Result<Induced> {
        self.check_on(h)?;
        let g = h.parent();
        let reps = h.right_coset_reps();
        let m = reps.len();
        let d = self.dim;
        if m * d > DIM_CAP {
            return Err(Error::SizeLimit { what: "induced dimension", needed: m * d, cap: DIM_CAP });
        }
        let mut coset_of = vec![0usize; g.order()];
        for (i, &r) in reps.iter().enumerate() {
            for &x in h.members() {
                coset_of[g.mul(x, r)] = i;
            }
        }
        let matrices = (0..g.order())
            .map(|x| {
                let mut big = FieldMatrix::zeros(self.p, m * d, m * d);
                for (i, &ri) in reps.iter().enumerate() {
                    let y = g.mul(ri, x);
                    let j = coset_of[y];
                    let hh = g.mul(y, g.inv(reps[j]));
                    let local = h.from_parent(hh).expect("element of the subgroup");
                    big.set_block(i * d, j * d, &self.matrices[local]);
                }
                big
            })
            .collect();
        let module = Self::from_table_unchecked(g, self.p, m * d, matrices);
        Ok(Induced { module, reps, block_dim: d })
    }

    /// Whether `w` is stable under every group element.
    pub fn is_invariant(&self, w: &Subspace) -> bool {
        self.group
            .generators()
            .iter()
            .all(|&s| w.basis().iter().all(|v| w.contains(&self.matrices[s].apply(v))))
    }

    /// Action on an invariant subspace, in the coordinates of its echelon basis.
    pub fn submodule(&self, w: &Subspace) -> Result<Representation> {
        certify(self.is_invariant(w), || "subspace is not invariant".into())?;
        let k = w.dim();
        let matrices = self
            .matrices
            .iter()
            .map(|m| {
                let cols: Vec<Vec<u32>> =
                    w.basis().iter().map(|v| w.coords(&m.apply(v)).expect("invariant")).collect();
                FieldMatrix::from_columns(self.p, k, &cols)
            })
            .collect();
        Ok(Self::from_table_unchecked(&self.group, self.p, k, matrices))
    }

    /// Action on `Q / w` in the coordinates of [`Subspace::quotient_coords`].
    pub fn quotient(&self, w: &Subspace) -> Result<Representation> {
        certify(self.is_invariant(w), || "subspace is not invariant".into())?;
        let free = w.free_positions();
        let k = free.len();
        let matrices = self
            .matrices
            .iter()
            .map(|m| {
                let cols: Vec<Vec<u32>> = free.iter().map(|&c| w.quotient_coords(&m.col_vec(c))).collect();
                FieldMatrix::from_columns(self.p, k, &cols)
            })
            .collect();
        Ok(Self::from_table_unchecked(&self.group, self.p, k, matrices))
    }

    /// Conjugate representation `x ρ(g) x^-1`.
    pub fn conjugate_by(&self, x: &FieldMatrix) -> Result<Representation> {
        let xi = x.invert()?.ok_or_else(|| Error::Precondition("conjugating matrix is singular".into()))?;
        let matrices = self.matrices.iter().map(|m| &(x * m) * &xi).collect();
        Ok(Self::from_table_unchecked(&self.group, self.p, self.dim, matrices))
    }
}

/// An induced module together with the transversal used to build it.
#[derive(Clone, Debug)]
pub struct Induced {
    pub module: Representation,
    /// Right coset representatives, identity first.
    pub reps: Vec<usize>,
    pub block_dim: usize,
}

impl Induced {
    /// Evaluation at the identity: the first block of coordinates.
    pub fn evaluation(&self) -> FieldMatrix {
        let d = self.block_dim;
        let mut ev = FieldMatrix::zeros(self.module.modulus(), d, self.module.dim());
        ev.set_block(0, 0, &FieldMatrix::identity(self.module.modulus(), d));
        ev
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::families;

    fn m(p: u64, rows: &[&[i64]]) -> FieldMatrix {
        FieldMatrix::from_rows(p, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn generator_extension() {
        let triv = Arc::new(families::cyclic(1));
        let r = Representation::from_generators(&triv, 5, 1, &[]).unwrap();
        assert_eq!(r.matrix(0), &FieldMatrix::identity(5, 1));

        let z2 = Arc::new(families::cyclic(2));
        let sign = Representation::from_generators(&z2, 5, 1, &[m(5, &[&[-1]])]).unwrap();
        assert_eq!(sign.matrix(1), &m(5, &[&[4]]));
        sign.certify_exhaustive().unwrap();

        let err = Representation::from_generators(&z2, 5, 1, &[m(5, &[&[2]])]).unwrap_err();
        assert!(matches!(err, Error::RelationViolation { .. }));
    }

    #[test]
    fn constructions_are_homomorphisms() {
        let s3 = Arc::new(families::symmetric(3));
        let perm = Representation::permutation(&s3, 3);
        let reg = Representation::regular(&s3, 2);
        perm.certify_exhaustive().unwrap();
        reg.certify_exhaustive().unwrap();
        perm.dual().certify_exhaustive().unwrap();
        perm.tensor(&perm).unwrap().certify_exhaustive().unwrap();
        Representation::direct_sum(&[perm.clone(), perm.dual()]).unwrap().certify_exhaustive().unwrap();
    }

    #[test]
    fn induction_from_a3() {
        let s3 = Arc::new(families::symmetric(3));
        let a3 = Subgroup::generated(&s3, &[s3.generators()[1]]).unwrap();
        let triv = Representation::trivial(a3.group(), 7, 1);
        let ind = triv.induce(&a3).unwrap();
        assert_eq!(ind.module.dim(), 2);
        ind.module.certify_exhaustive().unwrap();
        let h = Subgroup::generated(&s3, &[s3.generators()[0]]).unwrap();
        let sign = Representation::from_generators(h.group(), 7, 1, &[m(7, &[&[-1]])]).unwrap();
        let ind = sign.induce(&h).unwrap();
        assert_eq!(ind.module.dim(), 3);
        ind.module.certify_exhaustive().unwrap();
    }

    #[test]
    fn sub_and_quotient_modules() {
        let z2 = Arc::new(families::cyclic(2));
        let reg = Representation::regular(&z2, 2);
        let fixed = Subspace::span(2, 2, [vec![1, 1]]);
        let sub = reg.submodule(&fixed).unwrap();
        let quo = reg.quotient(&fixed).unwrap();
        assert!(sub.matrix(1).is_identity());
        assert!(quo.matrix(1).is_identity());
        assert!(reg.submodule(&Subspace::span(2, 2, [vec![1, 0]])).is_err());
    }
}
