use super::system::SchreierSystem;
use crate::error::{certify, Result};
use crate::rep::Search;

/// Bound on `|U|^(number of generators of G)` for the splitting and equivalence searches.
pub const SEARCH_BOUND: u64 = 1 << 20;

/// Enumerates values of `β` on the generators and extends each along the generator tree:
/// `extend(s, parent, β(parent), β(s))` gives `β(s · parent)`.
fn search_beta(
    sys: &SchreierSystem,
    extend: impl Fn(usize, usize, usize, usize) -> usize,
    accept: impl Fn(&[usize]) -> bool,
) -> Result<Search<Vec<usize>>> {
    let g = sys.base();
    let nu = sys.coeff().order();
    let k = g.generators().len();
    let total = (nu as u64).checked_pow(k as u32).filter(|&t| t <= SEARCH_BOUND);
    let Some(total) = total else {
        return Ok(Search::Unresolved(format!("{nu}^{k} candidate values exceed the search bound")));
    };
    let tree = g.generator_tree()?;
    let order = bfs_order(&tree);
    let mut choice = vec![0usize; k];
    for _ in 0..total {
        let mut beta = vec![0usize; g.order()];
        for &e in &order {
            if let Some((parent, gi)) = tree[e] {
                beta[e] = extend(g.generators()[gi], parent, beta[parent], choice[gi]);
            }
        }
        if accept(&beta) {
            return Ok(Search::Found(beta));
        }
        for c in choice.iter_mut() {
            *c += 1;
            if *c < nu {
                break;
            }
            *c = 0;
        }
    }
    Ok(Search::Absent)
}

/// Elements in breadth-first order of the tree (parents before children).
fn bfs_order(tree: &[Option<(usize, usize)>]) -> Vec<usize> {
    let n = tree.len();
    let mut depth = vec![usize::MAX; n];
    depth[0] = 0;
    fn d(e: usize, tree: &[Option<(usize, usize)>], depth: &mut [usize]) -> usize {
        if depth[e] != usize::MAX {
            return depth[e];
        }
        let (p, _) = tree[e].expect("tree reaches every element");
        let v = d(p, tree, depth) + 1;
        depth[e] = v;
        v
    }
    for e in 0..n {
        d(e, tree, &mut depth);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&e| depth[e]);
    order
}

/// A map `β: G -> U` such that `σ(g) = (β(g), g)` is a homomorphism.
///
/// The homomorphism law reads `β(gh) = β(g) ^g β(h) γ(g,h)`; values on the
/// generators determine `β`, and the law is checked on generators × elements.
pub fn is_split(sys: &SchreierSystem) -> Result<Search<Vec<usize>>> {
    sys.verify()?;
    let g = sys.base().clone();
    let u = sys.coeff().clone();
    let gens = g.generators().to_vec();
    search_beta(
        sys,
        |s, parent, b_parent, b_s| u.mul(u.mul(b_s, sys.kappa(s, b_parent)), sys.gamma(s, parent)),
        |beta| {
            gens.iter().all(|&s| {
                (0..g.order()).all(|e| {
                    beta[g.mul(s, e)] == u.mul(u.mul(beta[s], sys.kappa(s, beta[e])), sys.gamma(s, e))
                })
            })
        },
    )
}

/// Checks that `σ(g) = (β(g), g)` is a homomorphism on all pairs.
pub fn certify_splitting(sys: &SchreierSystem, beta: &[usize]) -> Result<()> {
    let g = sys.base();
    let u = sys.coeff();
    certify(beta.len() == g.order(), || "splitting map has the wrong length".into())?;
    for a in 0..g.order() {
        for b in 0..g.order() {
            let lhs = u.mul(u.mul(beta[a], sys.kappa(a, beta[b])), sys.gamma(a, b));
            certify(beta[g.mul(a, b)] == lhs, || format!("splitting map is not a homomorphism at ({a}, {b})"))?;
        }
    }
    Ok(())
}

/// A map `β: G -> U` with `γ'(g,h) = β(g) ^g β(h) γ(g,h) β(gh)^-1` and
/// `^g' u = β(g) ^g u β(g)^-1`.
pub fn systems_equivalent(s1: &SchreierSystem, s2: &SchreierSystem) -> Result<Search<Vec<usize>>> {
    s1.verify()?;
    s2.verify()?;
    certify(
        s1.base().order() == s2.base().order() && s1.coeff().order() == s2.coeff().order(),
        || "systems are on different pairs".into(),
    )?;
    let u = s1.coeff().clone();
    search_beta(
        s1,
        |s, parent, b_parent, b_s| {
            let inner = u.mul(u.mul(b_s, s1.kappa(s, b_parent)), s1.gamma(s, parent));
            u.mul(u.inv(s2.gamma(s, parent)), inner)
        },
        |beta| certify_equivalence(s1, s2, beta).is_ok(),
    )
}

pub fn certify_equivalence(s1: &SchreierSystem, s2: &SchreierSystem, beta: &[usize]) -> Result<()> {
    let g = s1.base();
    let u = s1.coeff();
    certify(beta.len() == g.order(), || "equivalence map has the wrong length".into())?;
    for a in 0..g.order() {
        for b in 0..g.order() {
            let rhs = u.mul(
                u.mul(u.mul(beta[a], s1.kappa(a, beta[b])), s1.gamma(a, b)),
                u.inv(beta[g.mul(a, b)]),
            );
            certify(s2.gamma(a, b) == rhs, || format!("factor sets are not related at ({a}, {b})"))?;
        }
        for x in 0..u.order() {
            let rhs = u.mul(u.mul(beta[a], s1.kappa(a, x)), u.inv(beta[a]));
            certify(s2.kappa(a, x) == rhs, || format!("actions are not related at ({a}, {x})"))?;
        }
    }
    Ok(())
}
