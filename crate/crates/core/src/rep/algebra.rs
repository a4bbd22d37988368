use super::representation::Representation;
use crate::error::{certify, Result};
use crate::linalg::{FieldMatrix, MatrixSpace};

/// The span of the matrices of a representation inside `End_k(Q)`.
#[derive(Clone, Debug)]
pub struct EnvelopingAlgebra {
    space: MatrixSpace,
}

impl EnvelopingAlgebra {
    /// Span of `ρ(g)` over all group elements, certified closed under multiplication.
    pub fn of(rho: &Representation) -> Result<Self> {
        let (p, d) = (rho.modulus(), rho.dim());
        let mut space = MatrixSpace::zero(p, d, d);
        for m in rho.matrices() {
            space.insert(m);
            if space.dim() == d * d {
                break;
            }
        }
        let alg = Self { space };
        alg.certify_closed()?;
        Ok(alg)
    }

    /// Wraps a span already known to be a unital subalgebra.
    pub fn from_space(space: MatrixSpace) -> Result<Self> {
        let alg = Self { space };
        alg.certify_closed()?;
        Ok(alg)
    }

    fn certify_closed(&self) -> Result<()> {
        let (d, _) = self.space.shape();
        let p = self.space.modulus();
        certify(self.space.contains(&FieldMatrix::identity(p, d)), || "algebra does not contain I".into())?;
        let basis = self.space.basis();
        for a in &basis {
            for b in &basis {
                certify(self.space.contains(&(a * b)), || "span is not closed under products".into())?;
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn degree(&self) -> usize {
        self.space.shape().0
    }

    pub fn modulus(&self) -> u32 {
        self.space.modulus()
    }

    pub fn space(&self) -> &MatrixSpace {
        &self.space
    }

    pub fn basis(&self) -> Vec<FieldMatrix> {
        self.space.basis()
    }
}

/// Integer matrix power `x^e` modulo `m`, entries lifted from `[0, p)`.
fn int_matrix_pow(x: &FieldMatrix, e: u64, m: u64) -> Vec<u64> {
    let n = x.rows();
    let mul = |a: &[u64], b: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = a[i * n + k];
                if aik == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] = ((out[i * n + j] as u128 + aik as u128 * b[k * n + j] as u128) % m as u128) as u64;
                }
            }
        }
        out
    };
    let mut base: Vec<u64> = x.entries().iter().map(|&v| v as u64 % m).collect();
    let mut acc: Vec<u64> = (0..n * n).map(|i| u64::from(i / n == i % n) % m).collect();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base);
        }
        base = mul(&base, &base);
        e >>= 1;
    }
    acc
}

/// `Tr(x~^(p^i)) / p^i mod p` for an integer lift `x~` of `x`.
fn trace_form(x: &FieldMatrix, i: u32) -> u32 {
    let p = x.modulus() as u64;
    let n = x.rows();
    let modulus = p.pow(i + 1);
    let pw = int_matrix_pow(x, p.pow(i), modulus);
    let tr = (0..n).fold(0u64, |acc, k| (acc + pw[k * n + k]) % modulus);
    ((tr / p.pow(i)) % p) as u32
}

/// Jacobson radical of a matrix algebra over GF(p).
///
/// Iterated `p`-power trace forms: `I_{-1} = A`, and `I_i` is the set of `a` in
/// `I_{i-1}` with `g_i(ab) = 0` for all `b` in `A`, where `g_i` is the trace form above;
/// the radical is `I_l` with `l = floor(log_p n)`.
pub fn algebra_radical(alg: &EnvelopingAlgebra) -> Result<MatrixSpace> {
    let p = alg.modulus();
    let n = alg.degree();
    let mut l = 0u32;
    while (p as u64).pow(l + 1) <= n as u64 {
        l += 1;
    }
    let a_basis = alg.basis();
    let mut current = a_basis.clone();
    for i in 0..=l {
        if current.is_empty() {
            break;
        }
        // Row k: values g_i(c_k b_j); solve for combinations killing every column.
        let mut form = FieldMatrix::zeros(p, a_basis.len(), current.len());
        for (k, c) in current.iter().enumerate() {
            for (j, b) in a_basis.iter().enumerate() {
                form.set(j, k, trace_form(&(c * b), i));
            }
        }
        let kern = form.kernel();
        current = kern
            .iter()
            .map(|v| super::hom::combine(&current, &v.col_vec(0), p, n, n))
            .collect();
    }
    let rad = MatrixSpace::span(p, n, n, &current);
    certify(rad.is_subspace_of(alg.space()), || "radical escaped the algebra".into())?;
    certify(rad.nilpotency_index(n).is_some(), || "computed radical is not nilpotent".into())?;
    Ok(rad)
}

/// Number of simple components of a commutative semisimple algebra, via the
/// dimension of the fixed space of `x -> x^p`. Returns `None` if not commutative.
pub fn frobenius_fixed_dim(space: &MatrixSpace) -> Option<usize> {
    let basis = space.basis();
    for a in &basis {
        for b in &basis {
            if a * b != b * a {
                return None;
            }
        }
    }
    let p = space.modulus();
    let k = basis.len();
    // Columns: coordinates of b^p - b.
    let cols: Vec<Vec<u32>> = basis
        .iter()
        .map(|b| {
            let diff = &b.pow(p as u64) - b;
            space.coords(&diff).expect("closed under powers")
        })
        .collect();
    let m = FieldMatrix::from_columns(p, k, &cols);
    Some(m.kernel().len())
}

/// Whether a module is irreducible, without assuming split endomorphisms.
///
/// Semisimple (radical of the enveloping algebra vanishes) and `End` a field.
pub fn is_irreducible(rho: &Representation) -> Result<bool> {
    if rho.dim() == 0 {
        return Ok(false);
    }
    let alg = EnvelopingAlgebra::of(rho)?;
    if !algebra_radical(&alg)?.is_zero() {
        return Ok(false);
    }
    let end = super::hom::hom_space(rho, rho)?;
    let space = MatrixSpace::span(rho.modulus(), rho.dim(), rho.dim(), &end);
    Ok(frobenius_fixed_dim(&space) == Some(1))
}
