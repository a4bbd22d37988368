use std::collections::{HashMap, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::perm::Perm;
use crate::error::{Error, Result};

/// Default bound on the number of enumerated group elements.
pub const DEFAULT_CAP: usize = 4096;

/// Exhaustive associativity checks up to this order; sampling above.
const EXHAUSTIVE_ASSOC: usize = 256;
const ASSOC_SAMPLES: usize = 10_000;
const ASSOC_SEED: u64 = 0x5eed_a550c;

/// JSON form of a permutation group: domain size and generator images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub domain: usize,
    pub generators: Vec<Vec<u32>>,
}

/// A fully enumerated finite group. Element 0 is the identity.
#[derive(Clone)]
pub struct FiniteGroup {
    degree: usize,
    elements: Vec<Perm>,
    lookup: HashMap<Perm, usize>,
    mult: Vec<u32>,
    inv: Vec<u32>,
    generators: Vec<usize>,
}

impl FiniteGroup {
    /// Closure of `generators` acting on `degree` points, by breadth-first search.
    pub fn cayley_close(degree: usize, generators: &[Perm], cap: usize) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::InvalidPerm(format!("{g:?} does not act on {degree} points")));
        }
        let id = Perm::identity(degree);
        let mut elements = vec![id.clone()];
        let mut lookup = HashMap::from([(id, 0usize)]);
        // tree[e] = (parent, generator position) with elements[e] = gen * elements[parent]
        let mut tree: Vec<Option<(usize, usize)>> = vec![None];
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for (k, s) in generators.iter().enumerate() {
                let x = s.compose(&elements[e]);
                if lookup.contains_key(&x) {
                    continue;
                }
                if elements.len() == cap {
                    return Err(Error::SizeLimit { what: "group closure", needed: cap + 1, cap });
                }
                lookup.insert(x.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(x);
                tree.push(Some((e, k)));
            }
        }
        let n = elements.len();
        let gen_idx: Vec<usize> = generators.iter().map(|g| lookup[g]).collect();
        // right[x][k] = x * gen_k
        let right: Vec<Vec<usize>> = elements
            .iter()
            .map(|x| generators.iter().map(|s| lookup[&x.compose(s)]).collect())
            .collect();
        // Columns in BFS order: x * (s * e') = (x * s) * e'.
        let mut mult = vec![0u32; n * n];
        for x in 0..n {
            mult[x * n] = x as u32;
        }
        for e in 1..n {
            let (parent, k) = tree[e].expect("non-identity element has a parent");
            for x in 0..n {
                let xs = right[x][k];
                mult[x * n + e] = mult[xs * n + parent];
            }
        }
        let inv = inverse_table(n, &mult)?;
        Ok(Self { degree, elements, lookup, mult, inv, generators: gen_idx })
    }

    pub fn from_descriptor(desc: &GroupDescriptor, cap: usize) -> Result<Self> {
        let gens = desc
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| {
                Perm::new(g.clone()).map_err(|e| Error::Validation {
                    path: format!("group.generators[{i}]"),
                    message: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::cayley_close(desc.domain, &gens, cap)
    }

    pub fn descriptor(&self) -> GroupDescriptor {
        GroupDescriptor {
            domain: self.degree,
            generators: self.generators.iter().map(|&g| self.elements[g].images().to_vec()).collect(),
        }
    }

    /// Abstract group from a multiplication table with identity at index 0.
    ///
    /// Elements are realized as left-regular permutations of `0..n`.
    pub fn from_table(n: usize, mult: Vec<u32>, generators: Vec<usize>) -> Result<Self> {
        if mult.len() != n * n || n == 0 {
            return Err(Error::Dimension { op: "from_table", detail: format!("table size {}", mult.len()) });
        }
        if mult.iter().any(|&x| x as usize >= n) {
            return Err(Error::Certification("table entry out of range".into()));
        }
        for x in 0..n {
            if mult[x] as usize != x || mult[x * n] as usize != x {
                return Err(Error::Certification(format!("element 0 is not an identity at {x}")));
            }
        }
        let elements: Vec<Perm> = (0..n)
            .map(|g| Perm::from_vec_unchecked(mult[g * n..(g + 1) * n].to_vec()))
            .collect();
        for (g, e) in elements.iter().enumerate() {
            Perm::new(e.images().to_vec()).map_err(|_| {
                Error::Certification(format!("row {g} of the table is not a permutation"))
            })?;
        }
        let lookup = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let inv = inverse_table(n, &mult)?;
        let g = Self { degree: n, elements, lookup, mult, inv, generators };
        g.verify_associativity()?;
        Ok(g)
    }

    /// Subgroup-style restriction of the tables to a closed subset containing the identity first.
    pub(crate) fn from_closed_subset(parent: &FiniteGroup, members: &[usize], generators: Vec<usize>) -> Self {
        let n = members.len();
        let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut mult = vec![0u32; n * n];
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate() {
                mult[i * n + j] = pos[&parent.mul(a, b)] as u32;
            }
        }
        let inv = members.iter().map(|&a| pos[&parent.inv(a)] as u32).collect();
        let elements: Vec<Perm> = members.iter().map(|&m| parent.elements[m].clone()).collect();
        let lookup = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Self { degree: parent.degree, elements, lookup, mult, inv, generators }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub const fn identity(&self) -> usize {
        0
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.lookup.get(p).copied()
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order() + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `g * x * g^-1`.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn pow(&self, a: usize, e: usize) -> usize {
        (0..e).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Elements commuting with every generator, ascending.
    pub fn center(&self) -> Vec<usize> {
        (0..self.order())
            .filter(|&z| self.generators.iter().all(|&s| self.mul(s, z) == self.mul(z, s)))
            .collect()
    }

    /// Breadth-first spanning tree from the identity: `tree[e] = (parent, generator)` with
    /// `e = generators[generator] * parent`. Fails if the generators do not generate.
    pub fn generator_tree(&self) -> Result<Vec<Option<(usize, usize)>>> {
        let n = self.order();
        let mut tree: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for (k, &s) in self.generators.iter().enumerate() {
                let x = self.mul(s, e);
                if !seen[x] {
                    seen[x] = true;
                    tree[x] = Some((e, k));
                    queue.push_back(x);
                }
            }
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::Precondition(format!(
                "generators do not generate the group (element {missing} unreachable)"
            )));
        }
        Ok(tree)
    }

    /// Generator positions spelling `e` as a word, leftmost letter applied last.
    pub fn word(&self, tree: &[Option<(usize, usize)>], mut e: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while let Some((parent, k)) = tree[e] {
            w.push(k);
            e = parent;
        }
        w
    }

    /// Exhaustive up to order 256, seeded sampling above.
    pub fn verify_associativity(&self) -> Result<()> {
        let n = self.order();
        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Err(Error::Certification(format!("associativity fails at ({a}, {b}, {c})")));
            }
            Ok(())
        };
        if n <= EXHAUSTIVE_ASSOC {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(ASSOC_SEED);
            for _ in 0..ASSOC_SAMPLES {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    /// Sorted closure of `gens` under multiplication.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let n = self.order();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for &s in gens {
                let x = self.mul(s, e);
                if !seen[x] {
                    seen[x] = true;
                    queue.push_back(x);
                }
            }
        }
        (0..n).filter(|&i| seen[i]).collect()
    }
}

fn inverse_table(n: usize, mult: &[u32]) -> Result<Vec<u32>> {
    (0..n)
        .map(|a| {
            (0..n)
                .find(|&b| mult[a * n + b] == 0)
                .map(|b| b as u32)
                .ok_or_else(|| Error::Certification(format!("element {a} has no inverse")))
        })
        .collect()
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order())
            .field("degree", &self.degree)
            .field("generators", &self.generators)
            .finish()
    }
}
