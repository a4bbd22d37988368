use serde::{Deserialize, Serialize};

use super::cocycle::{solve_coboundary, AdditiveCocycle, CoefficientModule};
use super::extend::ideal_of;
use crate::error::{certify, Error, Result};
use crate::linalg::{field, FieldMatrix, MatrixSpace, Subspace};
use crate::rep::{annihilator_ideal, hom_space, socle_series, AnnihilatorMode, Representation, Search};
use crate::stability::{NormalModule, StructureMap, SubmoduleAction, TensorWitness};

/// Largest coefficient module (in `J ⊗ End(Y)` coordinates) a single layer may solve over.
pub const COEFF_DIM_CAP: usize = 1536;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerReport {
    /// Dimension of the layer target `Q'` inside `Q`.
    pub target_dim: usize,
    pub coeff_dim: usize,
    /// A regular factor of `G/N` was tensored on at this layer.
    pub tensored: bool,
    pub y_dim: usize,
}

#[derive(Clone, Debug)]
pub struct LayeredTensor {
    pub witness: TensorWitness,
    pub layers: Vec<LayerReport>,
}

/// A structure on `Q ⊗ Y` that is a homomorphism on `W ⊗ Y`.
struct State {
    y: Representation,
    alpha: Vec<FieldMatrix>,
    w: Subspace,
}

/// Coordinates of elements of `J_W ⊗ End(Y)` restricted to `Q' ⊗ Y`, relative to
/// `S_i ⊗ E_ab` with `S_i` a section of the restriction map.
struct LayerCoords {
    section: Vec<FieldMatrix>,
    target: FieldMatrix,
    restricted: MatrixSpace,
    to_section: FieldMatrix,
    d: usize,
    t: usize,
}

impl LayerCoords {
    fn new(end: &[FieldMatrix], w: &Subspace, target: &Subspace, t: usize) -> Result<Self> {
        let p = w.modulus();
        let d = w.ambient();
        let ideal = annihilator_ideal(end, w, AnnihilatorMode::Socle)?;
        let pt = target.basis_columns();
        let mut restricted = MatrixSpace::zero(p, d, target.dim());
        let mut section = Vec::new();
        let mut images = Vec::new();
        for b in ideal.basis() {
            let r = &b * &pt;
            if restricted.insert(&r) {
                section.push(b);
                images.push(r);
            }
        }
        let k = section.len();
        let cols: Vec<Vec<u32>> = images.iter().map(|r| restricted.coords(r).expect("image lies in its span")).collect();
        let to_section = if k == 0 {
            FieldMatrix::zeros(p, 0, 0)
        } else {
            FieldMatrix::from_columns(p, k, &cols)
                .invert()?
                .ok_or_else(|| Error::Certification("section images are dependent".into()))?
        };
        Ok(Self { section, target: pt, restricted, to_section, d, t })
    }

    fn dim(&self) -> usize {
        self.section.len() * self.t * self.t
    }

    fn decompose(&self, m: &FieldMatrix) -> Option<Vec<u32>> {
        let (d, t, k) = (self.d, self.t, self.section.len());
        let p = m.modulus();
        let mut out = vec![0u32; k * t * t];
        for a in 0..t {
            for b in 0..t {
                let mut x = FieldMatrix::zeros(p, d, d);
                for q in 0..d {
                    for q2 in 0..d {
                        x.set(q, q2, m.get(q * t + a, q2 * t + b));
                    }
                }
                let y = &x * &self.target;
                if k == 0 {
                    if !y.is_zero() {
                        return None;
                    }
                    continue;
                }
                let e = self.restricted.coords(&y)?;
                let c = self.to_section.apply(&e);
                for (i, ci) in c.into_iter().enumerate() {
                    out[i * t * t + a * t + b] = ci;
                }
            }
        }
        Some(out)
    }

    /// `Σ c_{i,a,b} S_i ⊗ E_ab`.
    fn combine(&self, c: &[u32], p: u32) -> FieldMatrix {
        let (d, t) = (self.d, self.t);
        let mut out = FieldMatrix::zeros(p, d * t, d * t);
        for (i, s) in self.section.iter().enumerate() {
            for a in 0..t {
                for b in 0..t {
                    let coef = c[i * t * t + a * t + b];
                    if coef == 0 {
                        continue;
                    }
                    for q in 0..d {
                        for q2 in 0..d {
                            let v = s.get(q, q2);
                            if v != 0 {
                                let (r, col) = (q * t + a, q2 * t + b);
                                out.set(r, col, field::add(out.get(r, col), field::mul(coef, v, p), p));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn basis_element(&self, i: usize, a: usize, b: usize, p: u32) -> FieldMatrix {
        let mut c = vec![0u32; self.dim()];
        c[i * self.t * self.t + a * self.t + b] = 1;
        self.combine(&c, p)
    }
}

fn invert(m: &FieldMatrix, what: impl FnOnce() -> String) -> Result<FieldMatrix> {
    m.invert()?.ok_or_else(|| Error::Certification(what()))
}

/// One layer: kill the cocycle of `α` restricted to `target ⊗ Y` in `J_W ⊗ End(Y)`,
/// after optionally tensoring on `y_new`. `None` when the class does not vanish.
fn solve_layer(
    module: &NormalModule,
    end: &[FieldMatrix],
    state: &State,
    target: &Subspace,
    y_new: Option<&Representation>,
) -> Result<Option<(State, usize)>> {
    let p = module.modulus();
    let qmap = module.qmap();
    let quotient = qmap.quotient();
    let grp = module.group();
    let (y, alpha) = match y_new {
        Some(extra) => {
            let y = state.y.tensor(extra)?;
            let alpha = (0..grp.order())
                .map(|g| state.alpha[g].kronecker(extra.matrix(qmap.project(g))))
                .collect::<Vec<_>>();
            (y, alpha)
        }
        None => (state.y.clone(), state.alpha.clone()),
    };
    let t = y.dim();
    let coords = LayerCoords::new(end, &state.w, target, t)?;
    let dim = coords.dim();
    let m = quotient.order();
    let lifts: Vec<usize> = (0..m).map(|a| qmap.lift(a)).collect();
    let lift_inv: Vec<FieldMatrix> = lifts
        .iter()
        .map(|&l| invert(&alpha[l], || format!("structure value at {l} is singular")))
        .collect::<Result<_>>()?;
    let mut action = Vec::with_capacity(m);
    for a in 0..m {
        let mut cols = Vec::with_capacity(dim);
        for i in 0..coords.section.len() {
            for x in 0..t {
                for z in 0..t {
                    let e = coords.basis_element(i, x, z, p);
                    let conj = &(&alpha[lifts[a]] * &e) * &lift_inv[a];
                    cols.push(coords.decompose(&conj).ok_or_else(|| {
                        Error::Certification(format!("layer ideal is not stable under conjugation at {a}"))
                    })?);
                }
            }
        }
        action.push(FieldMatrix::from_columns(p, dim, &cols));
    }
    let id = FieldMatrix::identity(p, module.dim() * t);
    let mut values = Vec::with_capacity(m * m);
    for a in 0..m {
        for b in 0..m {
            let prod = grp.mul(lifts[a], lifts[b]);
            let pinv = invert(&alpha[prod], || format!("structure value at {prod} is singular"))?;
            let gamma = &(&alpha[lifts[a]] * &alpha[lifts[b]]) * &pinv;
            let j = coords
                .decompose(&id.try_sub(&gamma)?)
                .ok_or_else(|| Error::Certification(format!("layer factor set leaves 1 + J at ({a}, {b})")))?;
            values.push(j);
        }
    }
    let cocycle = AdditiveCocycle { coeff: CoefficientModule { dim, action }, values };
    cocycle.certify(quotient, p)?;
    let Some(b) = solve_coboundary(&cocycle, quotient, p)? else {
        return Ok(None);
    };
    let factors: Vec<FieldMatrix> = b.iter().map(|c| id.try_add(&coords.combine(c, p))).collect::<Result<_>>()?;
    let next: Vec<FieldMatrix> = (0..grp.order()).map(|g| &factors[qmap.project(g)] * &alpha[g]).collect();
    certify_layer(module, &next, target, t)?;
    Ok(Some((State { y, alpha: next, w: target.clone() }, dim)))
}

/// Normalized structure map for `ρ ⊗ 1` on `Q ⊗ Y` that is multiplicative on `target ⊗ Y`.
fn certify_layer(module: &NormalModule, alpha: &[FieldMatrix], target: &Subspace, t: usize) -> Result<()> {
    let p = module.modulus();
    let grp = module.group();
    let n = module.normal();
    let idt = FieldMatrix::identity(p, t);
    let pt = target.basis_columns().kronecker(&idt);
    certify(alpha[0].is_identity(), || "layer structure is not normalized at 1".into())?;
    for &s in grp.generators() {
        for h in 0..grp.order() {
            let lhs = &(&alpha[s] * &alpha[h]) * &pt;
            certify(lhs == &alpha[grp.mul(s, h)] * &pt, || {
                format!("layer structure is not multiplicative on the target at ({s}, {h})")
            })?;
        }
    }
    for &ns in n.group().generators() {
        let nn = n.to_parent(ns);
        let r = module.rho().matrix(ns).kronecker(&idt);
        for g in 0..grp.order() {
            let ar = &alpha[g] * &r;
            certify(alpha[grp.mul(g, nn)] == ar, || format!("layer structure: α(gn) ≠ α(g)ρ(n) at ({g}, {nn})"))?;
            let twisted = module.rho_at(grp.conj(g, nn)).kronecker(&idt);
            certify(ar == &twisted * &alpha[g], || format!("layer structure: twist equation fails at ({g}, {nn})"))?;
        }
    }
    Ok(())
}

/// Targets `V + soc_{i+1}Q` for the layer driver, strictly increasing and ending at `Q`.
/// A single target `Q` when `J_V² = 0`.
fn layer_targets(module: &NormalModule, v: &SubmoduleAction) -> Result<Vec<Subspace>> {
    let full = Subspace::full(module.modulus(), module.dim());
    if module.dim() == 0 || ideal_of(module, v)?.squares_to_zero() {
        return Ok(vec![full]);
    }
    let soc = socle_series(module.rho())?;
    let mut out: Vec<Subspace> = Vec::new();
    let mut cur = v.space.clone();
    for layer in soc.layers.iter().skip(2) {
        let next = v.space.sum(layer);
        if next.dim() > cur.dim() {
            out.push(next.clone());
            cur = next;
        }
    }
    if out.last().is_none_or(|s| !s.is_full()) {
        out.push(full);
    }
    Ok(out)
}

/// Peels socle layers above `V`, killing each layer's additive cocycle, tensoring with
/// the regular module of `G/N` only where the untensored class does not vanish.
/// `first`, when given, is tensored on at the first layer unconditionally.
pub fn layered_tensor_structure(
    module: &NormalModule,
    v: &SubmoduleAction,
    alpha: &StructureMap,
    first: Option<&Representation>,
) -> Result<Search<LayeredTensor>> {
    alpha.certify_pair(v)?;
    let p = module.modulus();
    if module.dim() > 0 {
        let soc = socle_series(module.rho())?;
        certify_precondition(soc.layers[1].is_subspace_of(&v.space))?;
    }
    let quotient = module.qmap().quotient();
    let regular = Representation::regular(quotient, p);
    let end = hom_space(module.rho(), module.rho())?;
    let mut state = State {
        y: Representation::trivial(quotient, p, 1),
        alpha: alpha.alpha.clone(),
        w: v.space.clone(),
    };
    let mut layers = Vec::new();
    for (idx, target) in layer_targets(module, v)?.iter().enumerate() {
        let forced = if idx == 0 { first } else { None };
        if forced.is_none() {
            if let Some((next, dim)) = solve_layer(module, &end, &state, target, None)? {
                layers.push(LayerReport { target_dim: target.dim(), coeff_dim: dim, tensored: false, y_dim: next.y.dim() });
                state = next;
                continue;
            }
        }
        let extra = forced.unwrap_or(&regular);
        let t = state.y.dim() * extra.dim();
        let section_dim = LayerCoords::new(&end, &state.w, target, 1)?.section.len();
        if section_dim * t * t > COEFF_DIM_CAP {
            return Ok(Search::Unresolved(format!(
                "layer coefficient module of dimension {} exceeds {COEFF_DIM_CAP}",
                section_dim * t * t
            )));
        }
        match solve_layer(module, &end, &state, target, Some(extra))? {
            Some((next, dim)) => {
                layers.push(LayerReport { target_dim: target.dim(), coeff_dim: dim, tensored: true, y_dim: next.y.dim() });
                state = next;
            }
            None => return Ok(Search::Absent),
        }
    }
    let out = Representation::from_table(module.group(), p, module.dim() * state.y.dim(), state.alpha)?;
    let witness = TensorWitness { y: state.y, module: out };
    witness.certify(module, v)?;
    Ok(Search::Found(LayeredTensor { witness, layers }))
}

fn certify_precondition(ok: bool) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition("layer peeling needs soc Q ⊆ V".into()))
    }
}

/// `Q ⊗ Y` for a given `G/N`-module `Y` in the square-zero setting: forms `j ⊗ 1_Y` in
/// `J_V ⊗ End(Y)` and solves it. Absence is a legitimate outcome for non-regular `Y`.
pub fn tensor_kill(
    module: &NormalModule,
    v: &SubmoduleAction,
    alpha: &StructureMap,
    y: &Representation,
) -> Result<Search<TensorWitness>> {
    if !ideal_of(module, v)?.squares_to_zero() {
        return Err(Error::Precondition("tensor_kill needs J_V² = 0".into()));
    }
    alpha.certify_pair(v)?;
    let p = module.modulus();
    let end = hom_space(module.rho(), module.rho())?;
    let state = State {
        y: Representation::trivial(module.qmap().quotient(), p, 1),
        alpha: alpha.alpha.clone(),
        w: v.space.clone(),
    };
    let full = Subspace::full(p, module.dim());
    let Some((next, _)) = solve_layer(module, &end, &state, &full, Some(y))? else {
        return Ok(Search::Absent);
    };
    let out = Representation::from_table(module.group(), p, module.dim() * next.y.dim(), next.alpha)?;
    let witness = TensorWitness { y: next.y, module: out };
    witness.certify(module, v)?;
    Ok(Search::Found(witness))
}
