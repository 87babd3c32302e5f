use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::Rational;

/// A linear map on stacked-probability vectors.
///
/// Raw matrix equality is stricter than physical equality: two transforms
/// that agree on the affine hull of a state space are the same operation.
/// Use [`crate::Theory::same_action`] for that comparison.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transform {
    matrix: Matrix,
    reversible: bool,
}

impl Transform {
    pub fn new(matrix: Matrix, reversible: bool) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidTransform(format!(
                "matrix is {}x{}, expected square",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Transform { matrix, reversible })
    }

    pub fn identity(dim: usize) -> Self {
        Transform { matrix: Matrix::identity(dim), reversible: true }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_reversible(&self) -> bool {
        self.reversible
    }

    /// Plain matrix-vector product, no validation.
    pub fn apply_raw(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        self.matrix
            .mul_vec(v)
            .ok_or(Error::LayoutMismatch { expected: self.dim(), found: v.len() })
    }
}

/// `a ∘ b`: apply `b` first, then `a`.
pub fn compose(a: &Transform, b: &Transform) -> Result<Transform> {
    let m = a
        .matrix
        .mul(&b.matrix)
        .ok_or(Error::LayoutMismatch { expected: a.dim(), found: b.dim() })?;
    Ok(Transform { matrix: m, reversible: a.reversible && b.reversible })
}

/// Permutation matrix sending input coordinate `perm[i]` to output `i`.
pub fn coordinate_permutation_matrix(perm: &[usize]) -> Matrix {
    let n = perm.len();
    let mut m = Matrix::zeros(n, n);
    for (out, &inp) in perm.iter().enumerate() {
        m.set(out, inp, Rational::one());
    }
    m
}
