//! Brute-force oracles shared by the integration tests. They avoid the library's
//! algorithms for the property under test and use only group tables and plain
//! row reduction.

#![allow(dead_code)]

use std::collections::VecDeque;

use gstable::corpus::{self, Instance};
use gstable::group::FiniteGroup;
use gstable::linalg::FieldMatrix;
use gstable::schreier::ExtensionGroup;
use gstable::spec::Problem;

pub fn instance(name: &str) -> Instance {
    corpus::instances().into_iter().find(|i| i.name == name).unwrap_or_else(|| panic!("no instance {name}"))
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r, mut b, mut e) = (1u64, a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Row-reduced basis of the span of `rows`.
pub fn echelon(rows: &[Vec<u32>], p: u32) -> Vec<Vec<u32>> {
    let p = p as u64;
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    for r in rows {
        let mut v: Vec<u64> = r.iter().map(|&x| x as u64 % p).collect();
        for (piv, b) in &basis {
            let c = v[*piv];
            if c != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x = (*x + (p - c) * y) % p;
                }
            }
        }
        if let Some(piv) = v.iter().position(|&x| x != 0) {
            let s = inv_mod(v[piv], p);
            for x in v.iter_mut() {
                *x = *x * s % p;
            }
            for (_, b) in basis.iter_mut() {
                let c = b[piv];
                if c != 0 {
                    for (x, y) in b.iter_mut().zip(&v) {
                        *x = (*x + (p - c) * y) % p;
                    }
                }
            }
            basis.push((piv, v));
        }
    }
    basis.into_iter().map(|(_, v)| v.into_iter().map(|x| x as u32).collect()).collect()
}

pub fn rank(rows: &[Vec<u32>], p: u32) -> usize {
    echelon(rows, p).len()
}

pub fn in_span(rows: &[Vec<u32>], v: &[u32], p: u32) -> bool {
    let mut all = rows.to_vec();
    all.push(v.to_vec());
    rank(&all, p) == rank(rows, p)
}

/// Product of flattened `n x n` matrices.
pub fn mat_mul(a: &[u32], b: &[u32], n: usize, p: u32) -> Vec<u32> {
    let p = p as u64;
    let mut out = vec![0u32; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k] as u64;
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] = ((out[i * n + j] as u64 + x * b[k * n + j] as u64) % p) as u32;
            }
        }
    }
    out
}

/// Every coefficient vector over `GF(p)^k`, in lexicographic order.
pub fn all_vectors(p: u32, k: usize) -> impl Iterator<Item = Vec<u32>> {
    let total = (p as u64).pow(k as u32);
    (0..total).map(move |mut idx| {
        (0..k)
            .map(|_| {
                let c = (idx % p as u64) as u32;
                idx /= p as u64;
                c
            })
            .collect()
    })
}

fn combine(basis: &[Vec<u32>], coeffs: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0u32; basis[0].len()];
    for (b, &c) in basis.iter().zip(coeffs) {
        for (x, &y) in out.iter_mut().zip(b) {
            *x = ((*x as u64 + c as u64 * y as u64) % p as u64) as u32;
        }
    }
    out
}

/// Whether the two-sided ideal spanned by `gens` (flattened `n x n`) is nilpotent.
fn ideal_is_nilpotent(gens: &[Vec<u32>], n: usize, p: u32) -> bool {
    let first = echelon(gens, p);
    let mut power = first.clone();
    for _ in 0..n {
        if power.is_empty() {
            return true;
        }
        let products: Vec<Vec<u32>> =
            power.iter().flat_map(|a| first.iter().map(move |b| mat_mul(a, b, n, p))).collect();
        power = echelon(&products, p);
    }
    power.is_empty()
}

/// The largest nilpotent ideal of the algebra spanned by `basis`: every element
/// `x` whose ideal `A x A` is nilpotent. Returns the elements as coordinate
/// vectors over `basis`.
pub fn radical_oracle(basis: &[FieldMatrix]) -> Vec<Vec<u32>> {
    let p = basis[0].modulus();
    let n = basis[0].rows();
    let flat: Vec<Vec<u32>> = basis.iter().map(FieldMatrix::flatten).collect();
    all_vectors(p, basis.len())
        .filter(|c| {
            let x = combine(&flat, c, p);
            let gens: Vec<Vec<u32>> = flat
                .iter()
                .flat_map(|a| flat.iter().map(|b| mat_mul(&mat_mul(a, &x, n, p), b, n, p)).collect::<Vec<_>>())
                .collect();
            ideal_is_nilpotent(&gens, n, p)
        })
        .collect()
}

/// A subgroup complement to `U` exists in `E`: some choice of lifts of the
/// generators of `G` generates a subgroup of order `|G|`.
pub fn has_complement(ext: &ExtensionGroup, base: &FiniteGroup) -> bool {
    let gens = base.generators();
    let u = ext.u_order;
    let total = u.pow(gens.len() as u32);
    (0..total).any(|mut idx| {
        let lifts: Vec<usize> = gens
            .iter()
            .map(|&s| {
                let x = idx % u;
                idx /= u;
                ext.pair(x, s)
            })
            .collect();
        ext.group.closure(&lifts).len() == base.order()
    })
}

#[derive(Debug)]
pub enum ExtensionOracle {
    /// Generator matrices of an extension.
    Exists(Vec<FieldMatrix>),
    None,
    /// The candidate space exceeds the limit.
    TooLarge(u128),
}

/// Candidates for `R(s)`: invertible `X` with `X ρ(n) = ρ(s n s^-1) X` on generators of
/// `N`, `X` agreeing with the `V`-action of `s`, and `X^{ord s}` equal to `ρ(s^{ord s})`
/// (or `I`).
fn generator_candidates(prob: &Problem, s: usize, limit: u128) -> Result<Vec<FieldMatrix>, u128> {
    let g = &prob.group;
    let (module, v) = prob.pair().expect("normal problem");
    let p = prob.p;
    let d = module.dim();
    let sub = module.normal();
    let rho = module.rho();
    let var = |i: usize, j: usize| i * d + j;
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut rhs: Vec<u32> = Vec::new();
    for &ln in sub.group().generators() {
        let n = sub.to_parent(ln);
        let conj = sub.from_parent(g.mul(g.mul(s, n), g.inv(s))).expect("normal");
        let (a, b) = (rho.matrix(ln), rho.matrix(conj));
        // (X a - b X)_{ij} = Σ_k X_ik a_kj - b_ik X_kj = 0
        for i in 0..d {
            for j in 0..d {
                let mut row = vec![0u32; d * d];
                for k in 0..d {
                    row[var(i, k)] = (row[var(i, k)] + a.get(k, j)) % p;
                    row[var(k, j)] = (row[var(k, j)] + p - b.get(i, k)) % p;
                }
                rows.push(row);
                rhs.push(0);
            }
        }
    }
    let act = v.action.matrix(s);
    for (j, bj) in v.space.basis().iter().enumerate() {
        let target = v.space.combine(&act.col_vec(j));
        for i in 0..d {
            let mut row = vec![0u32; d * d];
            for k in 0..d {
                row[var(i, k)] = bj[k];
            }
            rows.push(row);
            rhs.push(target[i]);
        }
    }
    let a = FieldMatrix::from_row_vecs(p, d * d, &rows);
    let b = FieldMatrix::column(p, rhs);
    let Some(sol) = FieldMatrix::solve(&a, &b).expect("shapes") else { return Ok(Vec::new()) };
    let k = sol.nullspace.len();
    let size = (p as u128).pow(k as u32);
    if size > limit {
        return Err(size);
    }
    let base = sol.particular.col_vec(0);
    let dirs: Vec<Vec<u32>> = sol.nullspace.iter().map(|m| m.col_vec(0)).collect();
    let order = g.element_order(s);
    let power = g.pow(s, order);
    let expected = match sub.from_parent(power) {
        Some(l) => rho.matrix(l).clone(),
        None => FieldMatrix::identity(p, d),
    };
    Ok(all_vectors(p, k)
        .map(|c| {
            let mut x = base.clone();
            for (dir, &cc) in dirs.iter().zip(&c) {
                for (xi, &di) in x.iter_mut().zip(dir) {
                    *xi = ((*xi as u64 + cc as u64 * di as u64) % p as u64) as u32;
                }
            }
            FieldMatrix::from_entries(p as u64, d, d, x).expect("square")
        })
        .filter(|x| x.is_invertible() && x.pow(order as u64) == expected)
        .collect())
}

/// Extends generator images to all of `G` by breadth-first search, checking every
/// edge; `None` when the images violate a relation.
fn close_homomorphism(g: &FiniteGroup, images: &[FieldMatrix]) -> Option<Vec<FieldMatrix>> {
    let mut table: Vec<Option<FieldMatrix>> = vec![None; g.order()];
    let d = images[0].rows();
    table[0] = Some(FieldMatrix::identity(images[0].modulus(), d));
    let mut queue = VecDeque::from([0usize]);
    while let Some(e) = queue.pop_front() {
        let me = table[e].clone().expect("assigned");
        for (k, &s) in g.generators().iter().enumerate() {
            let t = g.mul(s, e);
            let m = &images[k] * &me;
            match &table[t] {
                Some(existing) if *existing != m => return None,
                Some(_) => {}
                None => {
                    table[t] = Some(m);
                    queue.push_back(t);
                }
            }
        }
    }
    Some(table.into_iter().map(|m| m.expect("generated")).collect())
}

/// Exhaustive search for a representation of `G` restricting to `ρ` on `N` and to
/// the given action on `V`.
pub fn extension_oracle(prob: &Problem, limit: u128) -> ExtensionOracle {
    let g = &prob.group;
    let (module, v) = prob.pair().expect("normal problem");
    let mut cands = Vec::new();
    let mut total: u128 = 1;
    for &s in g.generators() {
        match generator_candidates(prob, s, limit) {
            Ok(c) => {
                total = total.saturating_mul(c.len() as u128);
                cands.push(c);
            }
            Err(size) => return ExtensionOracle::TooLarge(size),
        }
    }
    if total > limit {
        return ExtensionOracle::TooLarge(total);
    }
    if total == 0 {
        return ExtensionOracle::None;
    }
    let mut idx = vec![0usize; cands.len()];
    loop {
        let images: Vec<FieldMatrix> = idx.iter().zip(&cands).map(|(&i, c)| c[i].clone()).collect();
        if let Some(table) = close_homomorphism(g, &images) {
            let on_n = module.normal().members().iter().enumerate().all(|(l, &n)| table[n] == *module.rho().matrix(l));
            let on_v = (0..g.order()).all(|e| v.agrees(&table[e], e));
            if on_n && on_v {
                return ExtensionOracle::Exists(images);
            }
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return ExtensionOracle::None;
            }
            idx[k] += 1;
            if idx[k] < cands[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}
