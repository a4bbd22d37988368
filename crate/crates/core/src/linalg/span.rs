use super::matrix::FieldMatrix;
use super::subspace::Subspace;

/// A linear subspace of `rows × cols` matrices, stored through row-major flattening.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixSpace {
    rows: usize,
    cols: usize,
    space: Subspace,
}

impl MatrixSpace {
    pub fn zero(p: u32, rows: usize, cols: usize) -> Self {
        Self { rows, cols, space: Subspace::zero(p, rows * cols) }
    }

    pub fn span<'a>(p: u32, rows: usize, cols: usize, mats: impl IntoIterator<Item = &'a FieldMatrix>) -> Self {
        let mut s = Self::zero(p, rows, cols);
        for m in mats {
            s.insert(m);
        }
        s
    }

    pub fn insert(&mut self, m: &FieldMatrix) -> bool {
        assert_eq!((m.rows(), m.cols()), (self.rows, self.cols), "matrix shape mismatch");
        self.space.insert(m.entries())
    }

    pub fn modulus(&self) -> u32 {
        self.space.modulus()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.space.is_zero()
    }

    pub fn contains(&self, m: &FieldMatrix) -> bool {
        self.space.contains(m.entries())
    }

    /// Coordinates in [`MatrixSpace::basis`].
    pub fn coords(&self, m: &FieldMatrix) -> Option<Vec<u32>> {
        self.space.coords(m.entries())
    }

    pub fn combine(&self, coords: &[u32]) -> FieldMatrix {
        FieldMatrix::from_raw(self.modulus(), self.rows, self.cols, self.space.combine(coords))
    }

    pub fn basis(&self) -> Vec<FieldMatrix> {
        self.space
            .basis()
            .iter()
            .map(|v| FieldMatrix::from_raw(self.modulus(), self.rows, self.cols, v.clone()))
            .collect()
    }

    pub fn subspace(&self) -> &Subspace {
        &self.space
    }

    pub fn is_subspace_of(&self, other: &MatrixSpace) -> bool {
        self.space.is_subspace_of(&other.space)
    }

    /// Span of all products `a·b`.
    pub fn product(&self, other: &MatrixSpace) -> MatrixSpace {
        let (a, b) = (self.basis(), other.basis());
        let mut out = MatrixSpace::zero(self.modulus(), self.rows, other.cols);
        for x in &a {
            for y in &b {
                out.insert(&(x * y));
                if out.dim() == out.rows * out.cols {
                    return out;
                }
            }
        }
        out
    }

    /// Smallest `k >= 1` with `self^k = 0`, if it occurs within `bound` steps.
    pub fn nilpotency_index(&self, bound: usize) -> Option<usize> {
        let mut power = self.clone();
        let mut k = 1;
        loop {
            if power.is_zero() {
                return Some(k);
            }
            if k > bound {
                return None;
            }
            let next = power.product(self);
            if next == power {
                return None;
            }
            power = next;
            k += 1;
        }
    }
}
