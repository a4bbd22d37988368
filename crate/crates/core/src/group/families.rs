//! Standard small groups as permutation groups.

use super::finite::{FiniteGroup, DEFAULT_CAP};
use super::perm::Perm;
use crate::error::Result;

fn cycle(n: usize, pts: &[u32]) -> Perm {
    Perm::from_cycles(n, &[pts]).expect("valid cycle")
}

fn close(n: usize, gens: Vec<Perm>) -> FiniteGroup {
    FiniteGroup::cayley_close(n, &gens, DEFAULT_CAP).expect("small standard group")
}

/// Cyclic group of order `n` generated by an `n`-cycle.
pub fn cyclic(n: usize) -> FiniteGroup {
    let pts: Vec<u32> = (0..n as u32).collect();
    let gens = if n > 1 { vec![cycle(n, &pts)] } else { vec![] };
    close(n.max(1), gens)
}

/// Direct product of cyclic groups acting on disjoint blocks of points.
pub fn abelian(orders: &[usize]) -> FiniteGroup {
    let total: usize = orders.iter().sum();
    let mut gens = Vec::new();
    let mut start = 0u32;
    for &m in orders {
        let pts: Vec<u32> = (start..start + m as u32).collect();
        if m > 1 {
            gens.push(cycle(total, &pts));
        }
        start += m as u32;
    }
    close(total.max(1), gens)
}

/// Symmetric group on `n` points, generated by `(0 1)` and `(0 1 .. n-1)`.
pub fn symmetric(n: usize) -> FiniteGroup {
    let pts: Vec<u32> = (0..n as u32).collect();
    close(n, vec![cycle(n, &[0, 1]), cycle(n, &pts)])
}

/// Alternating group on `n >= 3` points, generated by the 3-cycles `(0 1 k)`.
pub fn alternating(n: usize) -> FiniteGroup {
    close(n, (2..n as u32).map(|k| cycle(n, &[0, 1, k])).collect())
}

/// Dihedral group of order `2n` acting on the vertices of an `n`-gon.
pub fn dihedral(n: usize) -> FiniteGroup {
    let pts: Vec<u32> = (0..n as u32).collect();
    let refl = Perm::new((0..n as u32).map(|i| (n as u32 - i) % n as u32).collect()).expect("reflection");
    close(n, vec![cycle(n, &pts), refl])
}

/// Quaternion group of order 8, by left multiplication on its own elements.
///
/// Element `2u + s` stands for `(-1)^s * u` with `u` in `1, i, j, k`.
pub fn quaternion() -> FiniteGroup {
    // Products of the units 1, i, j, k as (sign, unit).
    const UNIT: [[(u32, u32); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let mul = |a: u32, b: u32| {
        let (s, u) = UNIT[(a / 2) as usize][(b / 2) as usize];
        2 * u + ((a % 2 + b % 2 + s) % 2)
    };
    let left = |a: u32| Perm::new((0..8).map(|b| mul(a, b)).collect()).expect("left translation");
    close(8, vec![left(2), left(4)])
}

/// Upper unitriangular 3x3 matrices mod `p`, by left translation on `(a, b, c)`.
///
/// The product is `(a, b, c)(a', b', c') = (a + a', b + b', c + c' + a b')`,
/// with `(a, b, c)` stored at `a + p b + p^2 c`. Generators are `(1,0,0)` and `(0,1,0)`.
pub fn heisenberg(p: usize) -> Result<FiniteGroup> {
    let n = p * p * p;
    let decode = |x: usize| (x % p, (x / p) % p, x / (p * p));
    let encode = |a: usize, b: usize, c: usize| (a % p + p * (b % p) + p * p * (c % p)) as u32;
    let left = |a: usize, b: usize, c: usize| {
        Perm::new(
            (0..n)
                .map(|x| {
                    let (a2, b2, c2) = decode(x);
                    encode(a + a2, b + b2, c + c2 + a * b2)
                })
                .collect(),
        )
    };
    FiniteGroup::cayley_close(n, &[left(1, 0, 0)?, left(0, 1, 0)?], DEFAULT_CAP)
}
