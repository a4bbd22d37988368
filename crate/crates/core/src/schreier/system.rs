use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::coeff::CoefficientGroup;
use crate::error::{certify, Error, Result};
use crate::group::{FiniteGroup, QuotientMap, Subgroup, DEFAULT_CAP};

/// Above this many tuples per identity, verification samples instead.
pub const EXHAUSTIVE_TUPLES: usize = 1 << 24;
/// Number of sampled tuples per identity when sampling.
pub const SAMPLED_TUPLES: usize = 100_000;
const SAMPLE_SEED: u64 = 0x5c4e_1e12;

/// A conjugation action `κ: G × U -> U` and factor set `γ: G × G -> U`.
#[derive(Clone, Debug)]
pub struct SchreierSystem {
    base: Arc<FiniteGroup>,
    coeff: Arc<CoefficientGroup>,
    /// `kappa[g * |U| + u] = ^g u`.
    kappa: Vec<u32>,
    /// `gamma[g * |G| + h] = γ(g, h)`.
    gamma: Vec<u32>,
}

/// The first identity found to fail, with its arguments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub identity: &'static str,
    pub tuple: Vec<usize>,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} fails at {:?}", self.identity, self.tuple)
    }
}

impl SchreierSystem {
    pub fn new(base: Arc<FiniteGroup>, coeff: Arc<CoefficientGroup>, kappa: Vec<u32>, gamma: Vec<u32>) -> Result<Self> {
        let (g, u) = (base.order(), coeff.order());
        if kappa.len() != g * u || gamma.len() != g * g {
            return Err(Error::Dimension {
                op: "schreier system",
                detail: format!("κ has {} entries, γ has {}, for |G| = {g}, |U| = {u}", kappa.len(), gamma.len()),
            });
        }
        if kappa.iter().chain(&gamma).any(|&x| x as usize >= u) {
            return Err(Error::Validation { path: "kappa/gamma".into(), message: "coefficient index out of range".into() });
        }
        Ok(Self { base, coeff, kappa, gamma })
    }

    /// Trivial action and factor set (the direct product).
    pub fn direct_product(base: Arc<FiniteGroup>, coeff: Arc<CoefficientGroup>) -> Self {
        let (g, u) = (base.order(), coeff.order());
        let kappa = (0..g).flat_map(|_| 0..u as u32).collect();
        Self { base, coeff, kappa, gamma: vec![0; g * g] }
    }

    pub fn base(&self) -> &Arc<FiniteGroup> {
        &self.base
    }

    pub fn coeff(&self) -> &Arc<CoefficientGroup> {
        &self.coeff
    }

    pub fn kappa(&self, g: usize, u: usize) -> usize {
        self.kappa[g * self.coeff.order() + u] as usize
    }

    pub fn gamma(&self, g: usize, h: usize) -> usize {
        self.gamma[g * self.base.order() + h] as usize
    }

    pub fn kappa_table(&self) -> &[u32] {
        &self.kappa
    }

    pub fn gamma_table(&self) -> &[u32] {
        &self.gamma
    }

    /// Runs `check` over every tuple when there are few enough, else over seeded samples.
    fn scan(
        dims: &[usize],
        mut check: impl FnMut(&[usize]) -> bool,
        identity: &'static str,
    ) -> std::result::Result<(), Violation> {
        let total = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
        let mut tuple = vec![0usize; dims.len()];
        if dims.contains(&0) {
            return Ok(());
        }
        match total {
            Some(t) if t <= EXHAUSTIVE_TUPLES => {
                for _ in 0..t {
                    if !check(&tuple) {
                        return Err(Violation { identity, tuple });
                    }
                    for (x, &d) in tuple.iter_mut().zip(dims) {
                        *x += 1;
                        if *x < d {
                            break;
                        }
                        *x = 0;
                    }
                }
            }
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
                for _ in 0..SAMPLED_TUPLES {
                    for (x, &d) in tuple.iter_mut().zip(dims) {
                        *x = rng.gen_range(0..d);
                    }
                    if !check(&tuple) {
                        return Err(Violation { identity, tuple });
                    }
                }
            }
        }
        Ok(())
    }

    /// All identities of a Schreier system, first failure reported.
    pub fn check(&self) -> std::result::Result<(), Violation> {
        let (ng, nu) = (self.base.order(), self.coeff.order());
        let (gr, u) = (&self.base, &self.coeff);
        if self.gamma(0, 0) != 0 {
            return Err(Violation { identity: "γ(1,1) = 1", tuple: vec![0, 0] });
        }
        Self::scan(&[nu], |t| self.kappa(0, t[0]) == t[0], "^1 u = u")?;
        Self::scan(
            &[ng, nu, nu],
            |t| self.kappa(t[0], u.mul(t[1], t[2])) == u.mul(self.kappa(t[0], t[1]), self.kappa(t[0], t[2])),
            "^g(uv) = (^g u)(^g v)",
        )?;
        Self::scan(
            &[ng, ng, nu],
            |t| {
                let (g, h, x) = (t[0], t[1], t[2]);
                let c = self.gamma(g, h);
                let rhs = u.mul(u.mul(c, self.kappa(gr.mul(g, h), x)), u.inv(c));
                self.kappa(g, self.kappa(h, x)) == rhs
            },
            "^g(^h u) = γ(g,h) ^{gh}u γ(g,h)^-1",
        )?;
        Self::scan(
            &[ng, ng, ng],
            |t| {
                let (f, g, h) = (t[0], t[1], t[2]);
                let lhs = u.mul(self.kappa(f, self.gamma(g, h)), self.gamma(f, gr.mul(g, h)));
                let rhs = u.mul(self.gamma(f, g), self.gamma(gr.mul(f, g), h));
                lhs == rhs
            },
            "^f γ(g,h) γ(f,gh) = γ(f,g) γ(fg,h)",
        )?;
        Self::scan(&[ng], |t| self.gamma(0, t[0]) == 0 && self.gamma(t[0], 0) == 0, "γ(1,g) = γ(g,1) = 1")?;
        Ok(())
    }

    pub fn verify(&self) -> Result<()> {
        self.check().map_err(|v| Error::Certification(v.to_string()))
    }

    /// `κ(g,u) = κ'(ḡ,u)`, `γ(g,h) = γ'(ḡ,h̄)` for a system on the quotient.
    pub fn inflate(quot: &SchreierSystem, qmap: &QuotientMap) -> Result<Self> {
        quot.verify()?;
        certify(quot.base.order() == qmap.quotient().order(), || "system is not on the quotient".into())?;
        let parent = qmap.parent().clone();
        let (ng, nu) = (parent.order(), quot.coeff.order());
        let mut kappa = Vec::with_capacity(ng * nu);
        for g in 0..ng {
            let gb = qmap.project(g);
            kappa.extend((0..nu).map(|x| quot.kappa(gb, x) as u32));
        }
        let mut gamma = Vec::with_capacity(ng * ng);
        for g in 0..ng {
            for h in 0..ng {
                gamma.push(quot.gamma(qmap.project(g), qmap.project(h)) as u32);
            }
        }
        let sys = Self { base: parent, coeff: quot.coeff.clone(), kappa, gamma };
        sys.verify()?;
        Ok(sys)
    }

    /// The group `E` on pairs `(x, g)`, stored at `g * |U| + x`.
    pub fn build_extension(&self, cap: usize) -> Result<ExtensionGroup> {
        self.verify()?;
        let (ng, nu) = (self.base.order(), self.coeff.order());
        let n = ng * nu;
        if n > cap {
            return Err(Error::SizeLimit { what: "extension group", needed: n, cap });
        }
        let u = &self.coeff;
        let mut mult = vec![0u32; n * n];
        for g in 0..ng {
            for x in 0..nu {
                let a = g * nu + x;
                for h in 0..ng {
                    let c = self.gamma(g, h);
                    let gh = self.base.mul(g, h);
                    for y in 0..nu {
                        let z = u.mul(u.mul(x, self.kappa(g, y)), c);
                        mult[a * n + h * nu + y] = (gh * nu + z) as u32;
                    }
                }
            }
        }
        let mut gens: Vec<usize> = self.base.generators().iter().map(|&s| s * nu).collect();
        gens.extend(u.group().generators().iter().copied());
        let group = Arc::new(FiniteGroup::from_table(n, mult, gens)?);
        let ext = ExtensionGroup { group, u_order: nu, g_order: ng };
        ext.certify(self)?;
        Ok(ext)
    }

    pub fn build_extension_default(&self) -> Result<ExtensionGroup> {
        self.build_extension(DEFAULT_CAP)
    }
}

/// An extension `1 -> U -> E -> G -> 1` on pairs.
#[derive(Clone, Debug)]
pub struct ExtensionGroup {
    pub group: Arc<FiniteGroup>,
    pub u_order: usize,
    pub g_order: usize,
}

impl ExtensionGroup {
    pub fn pair(&self, x: usize, g: usize) -> usize {
        g * self.u_order + x
    }

    /// `π(x, g) = g`.
    pub fn project(&self, e: usize) -> usize {
        e / self.u_order
    }

    pub fn coeff_part(&self, e: usize) -> usize {
        e % self.u_order
    }

    /// `ι(g) = (1, g)`.
    pub fn section(&self, g: usize) -> usize {
        g * self.u_order
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// Inverse formula, homomorphism `π`, kernel `U × {1}`, injectivity of `U -> E`.
    pub fn certify(&self, sys: &SchreierSystem) -> Result<()> {
        let (g, u) = (&sys.base, &sys.coeff);
        let grp = &self.group;
        certify(grp.order() == g.order() * u.order(), || "|E| ≠ |U|·|G|".into())?;
        for e in 0..grp.order() {
            let (x, h) = (self.coeff_part(e), self.project(e));
            let hi = g.inv(h);
            let c = u.inv(sys.gamma(hi, h));
            let expected = self.pair(u.mul(c, u.inv(sys.kappa(hi, x))), hi);
            certify(grp.inv(e) == expected, || format!("inverse formula fails at ({x}, {h})"))?;
        }
        for a in 0..grp.order() {
            for b in 0..grp.order() {
                certify(self.project(grp.mul(a, b)) == g.mul(self.project(a), self.project(b)), || {
                    format!("π is not a homomorphism at ({a}, {b})")
                })?;
            }
        }
        for x in 0..u.order() {
            for y in 0..u.order() {
                certify(grp.mul(self.pair(x, 0), self.pair(y, 0)) == self.pair(u.mul(x, y), 0), || {
                    format!("U -> E is not a homomorphism at ({x}, {y})")
                })?;
            }
        }
        certify(self.section(0) == 0, || "ι(1) is not the identity".into())?;
        Ok(())
    }

    /// For a system inflated along `G -> G/N`: `ι|_N` is a homomorphism, `ι(N)`
    /// commutes with `U`, is normal, and `π^-1(N) = U · ι(N)` with trivial intersection.
    pub fn certify_inflated(&self, n: &Subgroup) -> Result<()> {
        let grp = &self.group;
        let g = n.parent();
        for &a in n.members() {
            for &b in n.members() {
                certify(grp.mul(self.section(a), self.section(b)) == self.section(g.mul(a, b)), || {
                    format!("ι is not a homomorphism on N at ({a}, {b})")
                })?;
            }
            for x in 0..self.u_order {
                let ux = self.pair(x, 0);
                certify(grp.mul(ux, self.section(a)) == grp.mul(self.section(a), ux), || {
                    format!("ι({a}) does not commute with coefficient {x}")
                })?;
            }
        }
        let iota_n: Vec<usize> = n.members().iter().map(|&a| self.section(a)).collect();
        for &s in grp.generators() {
            for &m in &iota_n {
                let c = grp.conj(s, m);
                certify(iota_n.contains(&c), || format!("ι(N) is not normal: conjugate of {m} by {s}"))?;
            }
        }
        let mut preimage = Vec::new();
        for x in 0..self.u_order {
            for &m in &iota_n {
                preimage.push(grp.mul(self.pair(x, 0), m));
            }
        }
        preimage.sort_unstable();
        preimage.dedup();
        certify(preimage.len() == self.u_order * n.order(), || "U · ι(N) is not a direct product".into())?;
        let expected: Vec<usize> = (0..grp.order()).filter(|&e| n.contains(self.project(e))).collect();
        certify(preimage == expected, || "π^-1(N) ≠ U · ι(N)".into())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::families;

    fn z2_systems() -> (SchreierSystem, SchreierSystem) {
        let g = Arc::new(families::cyclic(2));
        let u = Arc::new(CoefficientGroup::enumerated(Arc::new(families::cyclic(2))));
        let direct = SchreierSystem::direct_product(g.clone(), u.clone());
        let twisted = SchreierSystem::new(g, u, vec![0, 1, 0, 1], vec![0, 0, 0, 1]).unwrap();
        (direct, twisted)
    }

    #[test]
    fn z2_by_z2_extensions() {
        let (direct, twisted) = z2_systems();
        direct.verify().unwrap();
        twisted.verify().unwrap();
        let klein = direct.build_extension_default().unwrap();
        assert!((1..4).all(|e| klein.group.element_order(e) == 2));
        let z4 = twisted.build_extension_default().unwrap();
        assert_eq!(z4.group.element_order(z4.section(1)), 4);
        let s = z4.section(1);
        assert_eq!(z4.group.mul(s, s), z4.pair(1, 0));
    }

    #[test]
    fn bad_normalization_is_named() {
        let g = Arc::new(families::cyclic(2));
        let u = Arc::new(CoefficientGroup::enumerated(Arc::new(families::cyclic(2))));
        let bad = SchreierSystem::new(g, u, vec![0, 1, 0, 1], vec![1, 0, 0, 0]).unwrap();
        assert_eq!(bad.check().unwrap_err().identity, "γ(1,1) = 1");
    }
}
