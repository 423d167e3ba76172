//! Matrix-free linear operators.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::{Matrix, Vector};

/// A linear map on `R^dim`, applied without materializing a matrix.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &Vector) -> Vector;
    /// Whether the operator is declared symmetric.
    fn is_symmetric(&self) -> bool {
        false
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply(&self, x: &Vector) -> Vector {
        (**self).apply(x)
    }
    fn is_symmetric(&self) -> bool {
        (**self).is_symmetric()
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply(&self, x: &Vector) -> Vector {
        (**self).apply(x)
    }
    fn is_symmetric(&self) -> bool {
        (**self).is_symmetric()
    }
}

/// Operator backed by a dense matrix.
#[derive(Debug, Clone)]
pub struct DenseOperator {
    matrix: Matrix,
    symmetric: bool,
}

impl DenseOperator {
    /// Wraps a square matrix; the symmetric flag is set when `A == Aᵀ` exactly.
    pub fn new(matrix: Matrix) -> Self {
        assert!(matrix.is_square(), "dense operator needs a square matrix");
        let symmetric = matrix == matrix.transpose();
        Self { matrix, symmetric }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }
}

impl LinearOperator for DenseOperator {
    fn dim(&self) -> usize {
        self.matrix.nrows()
    }
    fn apply(&self, x: &Vector) -> Vector {
        &self.matrix * x
    }
    fn is_symmetric(&self) -> bool {
        self.symmetric
    }
}

/// Operator defined by a closure.
pub struct FnOperator<F> {
    dim: usize,
    f: F,
    symmetric: bool,
}

impl<F: Fn(&Vector) -> Vector> FnOperator<F> {
    pub fn new(dim: usize, symmetric: bool, f: F) -> Self {
        Self { dim, f, symmetric }
    }
}

impl<F: Fn(&Vector) -> Vector> LinearOperator for FnOperator<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn apply(&self, x: &Vector) -> Vector {
        (self.f)(x)
    }
    fn is_symmetric(&self) -> bool {
        self.symmetric
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IdentityOperator(pub usize);

impl LinearOperator for IdentityOperator {
    fn dim(&self) -> usize {
        self.0
    }
    fn apply(&self, x: &Vector) -> Vector {
        x.clone()
    }
    fn is_symmetric(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone)]
pub struct DiagonalOperator(pub Vector);

impl LinearOperator for DiagonalOperator {
    fn dim(&self) -> usize {
        self.0.len()
    }
    fn apply(&self, x: &Vector) -> Vector {
        self.0.component_mul(x)
    }
    fn is_symmetric(&self) -> bool {
        true
    }
}

/// Builds the dense matrix of an operator column by column.
pub fn materialize(op: &dyn LinearOperator) -> Matrix {
    let n = op.dim();
    let mut m = Matrix::zeros(n, n);
    let mut e = Vector::zeros(n);
    for j in 0..n {
        e[j] = 1.0;
        m.set_column(j, &op.apply(&e));
        e[j] = 0.0;
    }
    m
}

/// Deterministic pseudo-random probe vectors with entries in `[-1, 1)`.
pub fn probe_vectors(dim: usize, count: usize, seed: u64) -> Vec<Vector> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| Vector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0)))
        .collect()
}

/// Largest relative symmetry defect `|⟨Ax,y⟩ − ⟨x,Ay⟩| / (‖Ax‖‖y‖)` over
/// `pairs` random probe pairs.
pub fn symmetry_defect(op: &dyn LinearOperator, pairs: usize, seed: u64) -> f64 {
    let probes = probe_vectors(op.dim(), 2 * pairs, seed);
    probes
        .chunks(2)
        .map(|xy| {
            let (x, y) = (&xy[0], &xy[1]);
            let ax = op.apply(x);
            let ay = op.apply(y);
            let scale = ax.norm() * y.norm();
            if scale == 0.0 {
                0.0
            } else {
                (ax.dot(y) - x.dot(&ay)).abs() / scale
            }
        })
        .fold(0.0, f64::max)
}
