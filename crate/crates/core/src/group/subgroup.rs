use std::sync::Arc;

use super::finite::FiniteGroup;
use crate::error::{Error, Result};

/// A subgroup of an enumerated parent group.
///
/// Local element `i` is `members[i]` in the parent; local 0 is the identity.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Vec<usize>,
    position: Vec<Option<u32>>,
    group: Arc<FiniteGroup>,
    normal: bool,
}

impl Subgroup {
    /// Closure of `generators` (parent indices) inside `parent`.
    pub fn generated(parent: &Arc<FiniteGroup>, generators: &[usize]) -> Result<Self> {
        if let Some(&bad) = generators.iter().find(|&&g| g >= parent.order()) {
            return Err(Error::NotInGroup(format!("index {bad}")));
        }
        let members = parent.closure(generators);
        let mut position = vec![None; parent.order()];
        for (i, &m) in members.iter().enumerate() {
            position[m] = Some(i as u32);
        }
        let local_gens = generators.iter().map(|&g| position[g].unwrap() as usize).collect();
        let group = Arc::new(FiniteGroup::from_closed_subset(parent, &members, local_gens));
        let normal = parent
            .generators()
            .iter()
            .all(|&g| generators.iter().all(|&n| position[parent.conj(g, n)].is_some()));
        Ok(Self { parent: parent.clone(), members, position, group, normal })
    }

    pub fn whole(parent: &Arc<FiniteGroup>) -> Self {
        Self::generated(parent, parent.generators()).expect("generators are in range")
    }

    pub fn trivial(parent: &Arc<FiniteGroup>) -> Self {
        Self::generated(parent, &[]).expect("empty generator list")
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    /// The subgroup as a group in its own right.
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.members.len()
    }

    pub fn is_normal(&self) -> bool {
        self.normal
    }

    pub fn contains(&self, g: usize) -> bool {
        self.position[g].is_some()
    }

    pub fn to_parent(&self, local: usize) -> usize {
        self.members[local]
    }

    pub fn from_parent(&self, g: usize) -> Option<usize> {
        self.position[g].map(|x| x as usize)
    }

    /// One representative per left coset `gH`, minimal index in each, identity first.
    pub fn left_coset_reps(&self) -> Vec<usize> {
        self.coset_reps(|g, h| self.parent.mul(g, h))
    }

    /// One representative per right coset `Hg`, minimal index in each, identity first.
    pub fn right_coset_reps(&self) -> Vec<usize> {
        self.coset_reps(|g, h| self.parent.mul(h, g))
    }

    fn coset_reps(&self, act: impl Fn(usize, usize) -> usize) -> Vec<usize> {
        let mut covered = vec![false; self.parent.order()];
        let mut reps = Vec::new();
        for g in 0..self.parent.order() {
            if covered[g] {
                continue;
            }
            reps.push(g);
            for &h in &self.members {
                covered[act(g, h)] = true;
            }
        }
        reps
    }

    /// Exhaustive check that `g n g^-1` lies in the subgroup for every `g`, `n`.
    pub fn verify_normal(&self) -> Result<()> {
        for g in 0..self.parent.order() {
            for &n in &self.members {
                if !self.contains(self.parent.conj(g, n)) {
                    return Err(Error::NotNormal(format!("conjugate of {n} by {g} leaves the subgroup")));
                }
            }
        }
        Ok(())
    }
}

/// The natural map `G -> G/N` with cosets realized by their minimal representatives.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    normal: Subgroup,
    reps: Vec<usize>,
    projection: Vec<usize>,
    quotient: Arc<FiniteGroup>,
}

impl QuotientMap {
    pub fn new(normal: &Subgroup) -> Result<Self> {
        if !normal.is_normal() {
            return Err(Error::NotNormal("quotient requires a normal subgroup".into()));
        }
        let parent = normal.parent();
        let reps = normal.left_coset_reps();
        let mut projection = vec![0usize; parent.order()];
        for (k, &r) in reps.iter().enumerate() {
            for &n in normal.members() {
                projection[parent.mul(r, n)] = k;
            }
        }
        let m = reps.len();
        let mut mult = vec![0u32; m * m];
        for (a, &ra) in reps.iter().enumerate() {
            for (b, &rb) in reps.iter().enumerate() {
                mult[a * m + b] = projection[parent.mul(ra, rb)] as u32;
            }
        }
        let gens: Vec<usize> = parent.generators().iter().map(|&g| projection[g]).collect();
        let quotient = Arc::new(FiniteGroup::from_table(m, mult, gens)?);
        let q = Self { normal: normal.clone(), reps, projection, quotient };
        q.verify_homomorphism()?;
        Ok(q)
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        self.normal.parent()
    }

    pub fn normal(&self) -> &Subgroup {
        &self.normal
    }

    pub fn quotient(&self) -> &Arc<FiniteGroup> {
        &self.quotient
    }

    #[inline]
    pub fn project(&self, g: usize) -> usize {
        self.projection[g]
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    /// Coset representative of quotient element `q`.
    #[inline]
    pub fn lift(&self, q: usize) -> usize {
        self.reps[q]
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    /// Exhaustive homomorphism and kernel check.
    pub fn verify_homomorphism(&self) -> Result<()> {
        let g = self.parent();
        let q = &self.quotient;
        for x in 0..g.order() {
            if (self.projection[x] == 0) != self.normal.contains(x) {
                return Err(Error::Certification(format!("kernel mismatch at {x}")));
            }
            for y in 0..g.order() {
                if self.projection[g.mul(x, y)] != q.mul(self.projection[x], self.projection[y]) {
                    return Err(Error::Certification(format!("projection not multiplicative at ({x}, {y})")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Perm, DEFAULT_CAP};

    fn s3() -> Arc<FiniteGroup> {
        let t = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let c = Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        Arc::new(FiniteGroup::cayley_close(3, &[t, c], DEFAULT_CAP).unwrap())
    }

    #[test]
    fn subgroups_of_s3() {
        let g = s3();
        let c = g.generators()[1];
        let t = g.generators()[0];
        let a3 = Subgroup::generated(&g, &[c]).unwrap();
        assert_eq!(a3.order(), 3);
        assert!(a3.is_normal());
        a3.verify_normal().unwrap();
        let h = Subgroup::generated(&g, &[t]).unwrap();
        assert_eq!(h.order(), 2);
        assert!(!h.is_normal());
        assert!(h.verify_normal().is_err());
        assert!(Subgroup::whole(&g).is_normal());
        assert_eq!(Subgroup::whole(&g).order(), 6);
    }

    #[test]
    fn cosets_and_quotient() {
        let g = s3();
        let a3 = Subgroup::generated(&g, &[g.generators()[1]]).unwrap();
        let reps = a3.left_coset_reps();
        assert_eq!(reps.len(), 2);
        assert_eq!(reps[0], 0);
        let q = QuotientMap::new(&a3).unwrap();
        assert_eq!(q.quotient().order(), 2);
        let whole = QuotientMap::new(&Subgroup::whole(&g)).unwrap();
        assert_eq!(whole.quotient().order(), 1);
        let h = Subgroup::generated(&g, &[g.generators()[0]]).unwrap();
        assert!(matches!(QuotientMap::new(&h), Err(Error::NotNormal(_))));
    }
}
