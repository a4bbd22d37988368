use super::extend::{certify_extension, ideal_of};
use crate::error::{certify, Error, Result};
use crate::linalg::{FieldMatrix, MatrixSpace};
use crate::rep::{combine, find_invertible_affine, IsoSearch, Representation, Search};
use crate::stability::{NormalModule, SubmoduleAction};

#[derive(Clone, Debug)]
pub enum TwistVerdict {
    /// `ρ1 = u ρ2 u^-1` with `u ∈ 1 + J_V`.
    Conjugate { u: FieldMatrix },
    /// Not conjugate on `Q`, but `ρ1 ⊗ Y = u (ρ2 ⊗ Y) u^-1` with `u ∈ 1 + J_V ⊗ End(Y)`.
    TensorConjugate { y: Representation, u: FieldMatrix },
    /// Neither identification exists (`Unresolved` searches are reported here too,
    /// with the reason).
    Inequivalent { reason: Option<String> },
}

/// `u ∈ 1 + span(ideal)` with `u r2(s) = r1(s) u` for every generator `s`.
fn conjugator(
    r1: &Representation,
    r2: &Representation,
    ideal: &[FieldMatrix],
    search: IsoSearch,
) -> Result<Search<FieldMatrix>> {
    let p = r1.modulus();
    let d = r1.dim();
    let gens = r1.group().generators();
    // c r2(s) - r1(s) c = r1(s) - r2(s)
    let cols: Vec<Vec<u32>> = ideal
        .iter()
        .map(|b| {
            gens.iter()
                .flat_map(|&s| (b * r2.matrix(s)).try_sub(&(r1.matrix(s) * b)).expect("same shape").flatten())
                .collect()
        })
        .collect();
    let rhs: Vec<u32> = gens
        .iter()
        .flat_map(|&s| r1.matrix(s).try_sub(r2.matrix(s)).expect("same shape").flatten())
        .collect();
    let id = FieldMatrix::identity(p, d);
    if ideal.is_empty() {
        let ok = gens.iter().all(|&s| r1.matrix(s) == r2.matrix(s));
        return Ok(if ok { Search::Found(id) } else { Search::Absent });
    }
    let a = FieldMatrix::from_columns(p, rhs.len(), &cols);
    let b = FieldMatrix::column(p, rhs);
    let Some(sol) = FieldMatrix::solve(&a, &b)? else {
        return Ok(Search::Absent);
    };
    let base = id.try_add(&combine(ideal, &sol.particular.col_vec(0), p, d, d))?;
    let dirs: Vec<FieldMatrix> = sol.nullspace.iter().map(|k| combine(ideal, &k.col_vec(0), p, d, d)).collect();
    Ok(find_invertible_affine(&base, &dirs, search))
}

fn certify_conjugate(r1: &Representation, r2: &Representation, ideal: &MatrixSpace, u: &FieldMatrix) -> Result<()> {
    let p = r1.modulus();
    certify(ideal.contains(&u.try_sub(&FieldMatrix::identity(p, u.rows()))?), || "u is not in 1 + J".into())?;
    for g in 0..r1.group().order() {
        certify(u * r2.matrix(g) == r1.matrix(g) * u, || format!("u does not conjugate ρ2 to ρ1 at {g}"))?;
    }
    Ok(())
}

/// Compares two extensions of `ρ` that agree on `V` through `δ(g) = ρ1(g)ρ2(g)^-1 ∈ 1 + J_V`.
pub fn h1_twist_class(
    module: &NormalModule,
    v: &SubmoduleAction,
    rho1: &Representation,
    rho2: &Representation,
    search: IsoSearch,
) -> Result<TwistVerdict> {
    rho1.certify()?;
    rho2.certify()?;
    certify_extension(module, v, rho1)?;
    certify_extension(module, v, rho2)?;
    let p = module.modulus();
    let d = module.dim();
    let ideal = ideal_of(module, v)?;
    let id = FieldMatrix::identity(p, d);
    for g in 0..module.group().order() {
        let inv = rho2.matrix(g).invert()?.ok_or_else(|| Error::Certification(format!("ρ2({g}) is singular")))?;
        let delta = &(rho1.matrix(g) * &inv) - &id;
        if !ideal.ideal.contains(&delta) {
            return Err(Error::Precondition(format!("δ({g}) is not in 1 + J_V")));
        }
    }
    let basis = ideal.basis();
    let mut reason = None;
    match conjugator(rho1, rho2, &basis, search)? {
        Search::Found(u) => {
            certify_conjugate(rho1, rho2, &ideal.ideal, &u)?;
            return Ok(TwistVerdict::Conjugate { u });
        }
        Search::Unresolved(why) => reason = Some(why),
        Search::Absent => {}
    }
    let qmap = module.qmap();
    let y = Representation::regular(qmap.quotient(), p);
    let yg = y.inflate(qmap)?;
    let t1 = rho1.tensor(&yg)?;
    let t2 = rho2.tensor(&yg)?;
    let m = y.dim();
    let mut tensor_basis = Vec::with_capacity(basis.len() * m * m);
    for b in &basis {
        for x in 0..m {
            for z in 0..m {
                let mut e = FieldMatrix::zeros(p, m, m);
                e.set(x, z, 1);
                tensor_basis.push(b.kronecker(&e));
            }
        }
    }
    let tensor_ideal = MatrixSpace::span(p, d * m, d * m, &tensor_basis);
    match conjugator(&t1, &t2, &tensor_basis, search)? {
        Search::Found(u) => {
            certify_conjugate(&t1, &t2, &tensor_ideal, &u)?;
            Ok(TwistVerdict::TensorConjugate { y, u })
        }
        Search::Unresolved(why) => Ok(TwistVerdict::Inequivalent { reason: Some(why) }),
        Search::Absent => Ok(TwistVerdict::Inequivalent { reason }),
    }
}
