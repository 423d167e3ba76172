//! Numerical kernels: spectral differentiation, dense eigenvalues,
//! finite-difference Jacobians and symmetric Krylov solvers.

pub mod eigen;
pub mod fd;
pub mod fourier;
pub mod krylov;
pub mod operator;

pub use eigen::{dense_eigenvalues, SpectrumReport};
pub use fd::{default_step, fd_jacobian};
pub use fourier::{spectral_derivative, FourierGrid};
pub use krylov::{minres, pcg, KrylovStats};
pub use operator::{
    materialize, probe_vectors, symmetry_defect, DenseOperator, DiagonalOperator, FnOperator,
    IdentityOperator, LinearOperator,
};
