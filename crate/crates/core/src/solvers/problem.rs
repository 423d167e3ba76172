//! Problem description consumed by every solver.

use crate::error::{invalid, Error, Result};
use crate::numlin::{default_step, fd_jacobian, materialize, DenseOperator, LinearOperator};
use crate::{Matrix, Vector};

pub type VectorMap = Box<dyn Fn(&Vector) -> Result<Vector> + Send + Sync>;
pub type OperatorMap = Box<dyn Fn(&Vector) -> Result<Box<dyn LinearOperator>> + Send + Sync>;
pub type MatrixMap = Box<dyn Fn(&Vector) -> Result<Matrix> + Send + Sync>;
pub type PreconditionerMap = Box<dyn Fn(f64) -> Result<Box<dyn LinearOperator>> + Send + Sync>;

/// Splitting `F(x) = A x − Nh(x)` with `Nh` homogeneous of degree `p`.
pub struct HomogeneousSplit {
    pub degree: f64,
    linear: Box<dyn LinearOperator + Send + Sync>,
    linear_solve: VectorMap,
    nonlinear: VectorMap,
}

impl HomogeneousSplit {
    /// `linear` applies `A`, `linear_solve` applies `A⁻¹`, `nonlinear` is `Nh`.
    pub fn new(
        degree: f64,
        linear: Box<dyn LinearOperator + Send + Sync>,
        linear_solve: VectorMap,
        nonlinear: VectorMap,
    ) -> Self {
        Self { degree, linear, linear_solve, nonlinear }
    }

    pub fn apply_linear(&self, x: &Vector) -> Vector {
        self.linear.apply(x)
    }

    pub fn solve_linear(&self, y: &Vector) -> Result<Vector> {
        (self.linear_solve)(y)
    }

    pub fn nonlinear(&self, x: &Vector) -> Result<Vector> {
        (self.nonlinear)(x)
    }

    /// Stabilizing factor `⟨A x, x⟩ / ⟨Nh(x), x⟩`.
    pub fn stabilizing_factor(&self, x: &Vector) -> Result<f64> {
        let nh = self.nonlinear(x)?;
        stabilizing_quotient(self.apply_linear(x).dot(x), nh.dot(x))
    }

    /// Petviashvili map `s(x)^γ · A⁻¹ Nh(x)`.
    pub fn petviashvili_map(&self, x: &Vector, gamma: f64) -> Result<Vector> {
        let nh = self.nonlinear(x)?;
        let s = stabilizing_quotient(self.apply_linear(x).dot(x), nh.dot(x))?;
        Ok(self.solve_linear(&nh)? * stabilizing_power(s, gamma)?)
    }
}

pub(crate) fn stabilizing_quotient(num: f64, den: f64) -> Result<f64> {
    if den == 0.0 || !den.is_finite() {
        return Err(Error::Evaluation(format!("stabilizing factor denominator is {den}")));
    }
    Ok(num / den)
}

pub(crate) fn stabilizing_power(s: f64, gamma: f64) -> Result<f64> {
    if s < 0.0 && gamma.fract() != 0.0 {
        return Err(Error::Evaluation(format!(
            "stabilizing factor {s} is negative and exponent {gamma} is not an integer"
        )));
    }
    Ok(s.powf(gamma))
}

/// An algebraic system `F(x) = 0` on `R^dim` with optional extra structure.
pub struct ProblemSpec {
    dim: usize,
    residual: VectorMap,
    fixed_point: Option<VectorMap>,
    jacobian: Option<OperatorMap>,
    fixed_point_jacobian: Option<MatrixMap>,
    split: Option<HomogeneousSplit>,
    preconditioner: Option<PreconditionerMap>,
}

impl ProblemSpec {
    pub fn new(dim: usize, residual: impl Fn(&Vector) -> Result<Vector> + Send + Sync + 'static) -> Self {
        Self {
            dim,
            residual: Box::new(residual),
            fixed_point: None,
            jacobian: None,
            fixed_point_jacobian: None,
            split: None,
            preconditioner: None,
        }
    }

    pub fn with_fixed_point(mut self, g: impl Fn(&Vector) -> Result<Vector> + Send + Sync + 'static) -> Self {
        self.fixed_point = Some(Box::new(g));
        self
    }

    pub fn with_jacobian(
        mut self,
        j: impl Fn(&Vector) -> Result<Box<dyn LinearOperator>> + Send + Sync + 'static,
    ) -> Self {
        self.jacobian = Some(Box::new(j));
        self
    }

    /// Analytic Jacobian of the fixed-point map, used by spectrum reports.
    pub fn with_fixed_point_jacobian(
        mut self,
        j: impl Fn(&Vector) -> Result<Matrix> + Send + Sync + 'static,
    ) -> Self {
        self.fixed_point_jacobian = Some(Box::new(j));
        self
    }

    pub fn with_split(mut self, split: HomogeneousSplit) -> Self {
        self.split = Some(split);
        self
    }

    /// Symmetric positive definite preconditioner family indexed by a shift `s`.
    pub fn with_preconditioner(
        mut self,
        m: impl Fn(f64) -> Result<Box<dyn LinearOperator>> + Send + Sync + 'static,
    ) -> Self {
        self.preconditioner = Some(Box::new(m));
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check(&self, x: &Vector) -> Result<()> {
        if x.len() != self.dim {
            return Err(invalid(format!("expected a vector of length {}, got {}", self.dim, x.len())));
        }
        Ok(())
    }

    pub fn residual(&self, x: &Vector) -> Result<Vector> {
        self.check(x)?;
        (self.residual)(x)
    }

    pub fn has_fixed_point(&self) -> bool {
        self.fixed_point.is_some()
    }

    pub fn fixed_point(&self, x: &Vector) -> Result<Vector> {
        self.check(x)?;
        match &self.fixed_point {
            Some(g) => g(x),
            None => Err(invalid("problem has no fixed-point map")),
        }
    }

    pub fn has_analytic_jacobian(&self) -> bool {
        self.jacobian.is_some()
    }

    /// Jacobian of `F` at `x`; falls back to central differences.
    pub fn jacobian_at(&self, x: &Vector) -> Result<Box<dyn LinearOperator>> {
        self.check(x)?;
        match &self.jacobian {
            Some(j) => j(x),
            None => {
                let m = fd_jacobian(|v| (self.residual)(v), x, default_step(x))?;
                Ok(Box::new(DenseOperator::new(m)))
            }
        }
    }

    /// Dense Jacobian of `F` at `x`.
    pub fn jacobian_matrix(&self, x: &Vector) -> Result<Matrix> {
        Ok(materialize(self.jacobian_at(x)?.as_ref()))
    }

    pub fn has_analytic_fixed_point_jacobian(&self) -> bool {
        self.fixed_point_jacobian.is_some()
    }

    /// Jacobian of the fixed-point map, analytic when available.
    pub fn fixed_point_jacobian(&self, x: &Vector) -> Result<Matrix> {
        self.check(x)?;
        match &self.fixed_point_jacobian {
            Some(j) => j(x),
            None => fd_jacobian(|v| self.fixed_point(v), x, default_step(x)),
        }
    }

    pub fn split(&self) -> Option<&HomogeneousSplit> {
        self.split.as_ref()
    }

    pub fn preconditioner(&self, s: f64) -> Option<Result<Box<dyn LinearOperator>>> {
        self.preconditioner.as_ref().map(|m| m(s))
    }
}
