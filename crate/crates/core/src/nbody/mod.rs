//! Planar N-body relative equilibria around a fixed central mass.
//!
//! Bodies `q_j ∈ R²` rotate uniformly with angular velocity `ω` about a
//! central mass. Relative equilibria solve `ω² M q = −∇U(q)` with
//!
//! `U(q) = Σ_j c·m_j/|q_j| + g·Σ_{i<j} m_i m_j/|q_i − q_j|`,
//!
//! where `c` is the central mass and `g` the strength of the mutual
//! interaction. Regular polygons on the unit circle are solutions and the
//! problem is invariant under simultaneous rotation of all bodies.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::numlin::{DenseOperator, DiagonalOperator, LinearOperator};
use crate::solvers::{HomogeneousSplit, ProblemSpec};
use crate::symmetry::GroupAction;
use crate::{Matrix, Vector};

/// Homogeneity degree of the gravitational nonlinearity.
pub const DEGREE: f64 = -2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct NBodyConfig {
    pub n: usize,
    /// Coefficient `c` of the central attraction.
    pub central_mass: f64,
    /// Coefficient `g` of the mutual attraction between bodies.
    pub interaction: f64,
    pub masses: Vec<f64>,
}

impl NBodyConfig {
    /// Unit body masses, central mass `m0` and unit mutual interaction.
    pub fn new(n: usize, m0: f64) -> Result<Self> {
        Self::with_coefficients(n, m0, 1.0)
    }

    /// Unit central attraction with mutual interaction strength `m0`.
    ///
    /// At the two-body polygon the plain iteration matrix then has spectrum
    /// `{−2, 1, −8/(m0+4), 4/(m0+4)}`.
    pub fn benchmark(n: usize, m0: f64) -> Result<Self> {
        Self::with_coefficients(n, 1.0, m0)
    }

    pub fn with_coefficients(n: usize, central_mass: f64, interaction: f64) -> Result<Self> {
        let cfg = Self { n, central_mass, interaction, masses: vec![1.0; n] };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_masses(mut self, masses: Vec<f64>) -> Result<Self> {
        self.masses = masses;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(invalid(format!("need at least two bodies, got {}", self.n)));
        }
        if !(self.central_mass >= 0.0 && self.central_mass.is_finite()) {
            return Err(invalid(format!("central mass must be nonnegative, got {}", self.central_mass)));
        }
        if !(self.interaction >= 0.0 && self.interaction.is_finite()) {
            return Err(invalid(format!("interaction must be nonnegative, got {}", self.interaction)));
        }
        if self.masses.len() != self.n || self.masses.iter().any(|&m| !(m > 0.0 && m.is_finite())) {
            return Err(invalid("masses must be positive, one per body"));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// `ω² = c + (g·m/4)·Σ_{k=1}^{N−1} csc(πk/N)` for equal masses `m`; the
    /// first body's mass is used.
    pub fn omega_squared(&self) -> f64 {
        let n = self.n as f64;
        let csc_sum: f64 = (1..self.n).map(|k| 1.0 / (PI * k as f64 / n).sin()).sum();
        self.central_mass + 0.25 * self.interaction * self.masses[0] * csc_sum
    }

    pub fn omega(&self) -> f64 {
        self.omega_squared().sqrt()
    }

    fn mass_diagonal(&self) -> Vector {
        Vector::from_fn(self.dim(), |i, _| self.masses[i / 2])
    }
}

fn body(q: &Vector, j: usize) -> [f64; 2] {
    [q[2 * j], q[2 * j + 1]]
}

fn check_config(cfg: &NBodyConfig, q: &Vector) -> Result<()> {
    if q.len() != cfg.dim() {
        return Err(invalid(format!("configuration has length {}, expected {}", q.len(), cfg.dim())));
    }
    Ok(())
}

fn norm2(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

fn collision(what: &str) -> Error {
    Error::Domain(format!("collision: {what}"))
}

/// Value of `U(q)`.
pub fn potential(cfg: &NBodyConfig, q: &Vector) -> Result<f64> {
    check_config(cfg, q)?;
    let mut u = 0.0;
    for j in 0..cfg.n {
        let r = norm2(body(q, j));
        if r == 0.0 {
            return Err(collision(&format!("body {j} at the center")));
        }
        u += cfg.central_mass * cfg.masses[j] / r;
        for i in 0..j {
            let (a, b) = (body(q, i), body(q, j));
            let d = norm2([a[0] - b[0], a[1] - b[1]]);
            if d == 0.0 {
                return Err(collision(&format!("bodies {i} and {j}")));
            }
            u += cfg.interaction * cfg.masses[i] * cfg.masses[j] / d;
        }
    }
    Ok(u)
}

/// Analytic gradient `∇U(q)`.
pub fn grad_u(cfg: &NBodyConfig, q: &Vector) -> Result<Vector> {
    check_config(cfg, q)?;
    let mut g = Vector::zeros(cfg.dim());
    for j in 0..cfg.n {
        let p = body(q, j);
        let r = norm2(p);
        if r == 0.0 {
            return Err(collision(&format!("body {j} at the center")));
        }
        let w = cfg.central_mass * cfg.masses[j] / (r * r * r);
        g[2 * j] -= w * p[0];
        g[2 * j + 1] -= w * p[1];
        for i in 0..j {
            let a = body(q, i);
            let d = [a[0] - p[0], a[1] - p[1]];
            let dn = norm2(d);
            if dn == 0.0 {
                return Err(collision(&format!("bodies {i} and {j}")));
            }
            let w = cfg.interaction * cfg.masses[i] * cfg.masses[j] / (dn * dn * dn);
            for c in 0..2 {
                g[2 * i + c] -= w * d[c];
                g[2 * j + c] += w * d[c];
            }
        }
    }
    Ok(g)
}

/// Hessian of `1/|d|` with respect to `d`.
fn inverse_distance_hessian(d: [f64; 2]) -> [[f64; 2]; 2] {
    let r = norm2(d);
    let r3 = r * r * r;
    let r5 = r3 * r * r;
    let mut h = [[0.0; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            h[a][b] = 3.0 * (d[a] * d[b]) / r5 - if a == b { 1.0 / r3 } else { 0.0 };
        }
    }
    h
}

/// Analytic Hessian of `U`, exactly symmetric.
pub fn hess_u(cfg: &NBodyConfig, q: &Vector) -> Result<Matrix> {
    check_config(cfg, q)?;
    let mut h = Matrix::zeros(cfg.dim(), cfg.dim());
    for j in 0..cfg.n {
        let p = body(q, j);
        if norm2(p) == 0.0 {
            return Err(collision(&format!("body {j} at the center")));
        }
        let hc = inverse_distance_hessian(p);
        let w = cfg.central_mass * cfg.masses[j];
        for a in 0..2 {
            for b in 0..2 {
                h[(2 * j + a, 2 * j + b)] += w * hc[a][b];
            }
        }
        for i in 0..j {
            let o = body(q, i);
            let d = [o[0] - p[0], o[1] - p[1]];
            if norm2(d) == 0.0 {
                return Err(collision(&format!("bodies {i} and {j}")));
            }
            let hp = inverse_distance_hessian(d);
            let w = cfg.interaction * cfg.masses[i] * cfg.masses[j];
            for a in 0..2 {
                for b in 0..2 {
                    let v = w * hp[a][b];
                    h[(2 * i + a, 2 * i + b)] += v;
                    h[(2 * j + a, 2 * j + b)] += v;
                    h[(2 * i + a, 2 * j + b)] -= v;
                    h[(2 * j + a, 2 * i + b)] -= v;
                }
            }
        }
    }
    Ok(h)
}

/// Plain fixed-point map `G(q) = −ω⁻² M⁻¹ ∇U(q)`.
pub fn fixed_point_map(cfg: &NBodyConfig, q: &Vector) -> Result<Vector> {
    let w2 = cfg.omega_squared();
    Ok(-grad_u(cfg, q)?.component_div(&cfg.mass_diagonal()) / w2)
}

/// Jacobian of the plain fixed-point map, `−ω⁻² M⁻¹ H(q)`.
pub fn fixed_point_jacobian(cfg: &NBodyConfig, q: &Vector) -> Result<Matrix> {
    let w2 = cfg.omega_squared();
    let m = cfg.mass_diagonal();
    let mut h = hess_u(cfg, q)?;
    for (i, mut row) in h.row_iter_mut().enumerate() {
        row *= -1.0 / (w2 * m[i]);
    }
    Ok(h)
}

/// Jacobian of the Petviashvili map `s(q)^γ G(q)` with
/// `s(q) = ⟨ω² M q, q⟩ / ⟨−∇U(q), q⟩`.
pub fn petviashvili_jacobian(cfg: &NBodyConfig, q: &Vector, gamma: f64) -> Result<Matrix> {
    let w2 = cfg.omega_squared();
    let m = cfg.mass_diagonal();
    let nh = -grad_u(cfg, q)?;
    let nh_jac = -hess_u(cfg, q)?;
    let mq = m.component_mul(q);
    let num = w2 * mq.dot(q);
    let den = nh.dot(q);
    if den == 0.0 {
        return Err(Error::Evaluation("stabilizing factor denominator vanishes".into()));
    }
    let s = num / den;
    // ∇s = (2ω²Mq − s(Nh'ᵀq + Nh)) / den
    let grad_s = (&mq * (2.0 * w2) - (nh_jac.transpose() * q + &nh) * s) / den;
    let g = fixed_point_map(cfg, q)?;
    let gp = fixed_point_jacobian(cfg, q)?;
    let sg = s.powf(gamma);
    Ok(gp * sg + &g * grad_s.transpose() * (gamma * s.powf(gamma - 1.0)))
}

/// Regular polygon `q_j = (cos θ_j, sin θ_j)`, `θ_j = 2πj/N`, `j = 1..N`.
pub fn polygon_solution(n: usize) -> Result<Vector> {
    if n < 2 {
        return Err(invalid(format!("need at least two bodies, got {n}")));
    }
    let mut q = Vector::zeros(2 * n);
    for j in 1..=n {
        let theta = 2.0 * PI * j as f64 / n as f64;
        q[2 * (j - 1)] = theta.cos();
        q[2 * (j - 1) + 1] = theta.sin();
    }
    Ok(q)
}

/// Residual `F(q) = ω² M q + ∇U(q)` with plain fixed-point map, homogeneous
/// split (`A = ω² M`, `Nh = −∇U`, degree −2) and analytic Jacobians.
pub fn build_nbody(cfg: &NBodyConfig) -> Result<ProblemSpec> {
    cfg.validate()?;
    let cfg = Arc::new(cfg.clone());
    let w2 = cfg.omega_squared();
    let a_diag = cfg.mass_diagonal() * w2;

    let c = cfg.clone();
    let a = a_diag.clone();
    let mut spec = ProblemSpec::new(cfg.dim(), move |q| Ok(a.component_mul(q) + grad_u(&c, q)?));

    let c = cfg.clone();
    spec = spec.with_fixed_point(move |q| fixed_point_map(&c, q));

    let c = cfg.clone();
    let a = a_diag.clone();
    spec = spec.with_jacobian(move |q| {
        let mut j = hess_u(&c, q)?;
        for i in 0..j.nrows() {
            j[(i, i)] += a[i];
        }
        Ok(Box::new(DenseOperator::new(j)) as Box<dyn LinearOperator>)
    });

    let c = cfg.clone();
    spec = spec.with_fixed_point_jacobian(move |q| fixed_point_jacobian(&c, q));

    let c = cfg.clone();
    let inv = a_diag.map(|v| 1.0 / v);
    let split = HomogeneousSplit::new(
        DEGREE,
        Box::new(DiagonalOperator(a_diag)),
        Box::new(move |y| Ok(y.component_mul(&inv))),
        Box::new(move |q| Ok(-grad_u(&c, q)?)),
    );
    Ok(spec.with_split(split))
}

/// Perturbation directions used to seed the experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Perturbation {
    /// Vector of ones.
    Ones,
    /// Rotation generator at the polygon.
    Generator,
}

/// `q* + ε·w` for the chosen perturbation direction `w`.
pub fn perturbed_start(qstar: &Vector, kind: Perturbation, eps: f64) -> Vector {
    let w = match kind {
        Perturbation::Ones => Vector::from_element(qstar.len(), 1.0),
        Perturbation::Generator => RotationGroup.generators(qstar).remove(0),
    };
    qstar + w * eps
}

/// Simultaneous rotation of every body about the origin.
#[derive(Debug, Clone, Copy, Default)]
pub struct RotationGroup;

pub fn rotation_action() -> RotationGroup {
    RotationGroup
}

impl GroupAction for RotationGroup {
    fn dim(&self) -> usize {
        1
    }

    fn act(&self, alpha: &[f64], x: &Vector) -> Vector {
        let (s, c) = alpha[0].sin_cos();
        let mut y = x.clone();
        for j in 0..x.len() / 2 {
            let (a, b) = (x[2 * j], x[2 * j + 1]);
            y[2 * j] = c * a - s * b;
            y[2 * j + 1] = s * a + c * b;
        }
        y
    }

    fn generators(&self, x: &Vector) -> Vec<Vector> {
        let mut g = Vector::zeros(x.len());
        for j in 0..x.len() / 2 {
            g[2 * j] = -x[2 * j + 1];
            g[2 * j + 1] = x[2 * j];
        }
        vec![g]
    }

    /// `α* = atan2(Σ⟨x_j, J x*_j⟩, Σ⟨x_j, x*_j⟩)`.
    fn align(&self, x: &Vector, xref: &Vector) -> Option<Vec<f64>> {
        let jref = self.generators(xref).remove(0);
        Some(vec![x.dot(&jref).atan2(x.dot(xref))])
    }

    fn period(&self) -> Option<f64> {
        Some(2.0 * PI)
    }
}

/// Two-body system in polar coordinates `(r1, r2, θ = θ1 − θ2)` after the
/// rotation has been factored out, for central mass `m0`, unit masses and
/// `ω² = m0 + 1/4`.
pub fn reduced_polar_residual(r1: f64, r2: f64, theta: f64, m0: f64) -> Result<[f64; 3]> {
    if !(r1 > 0.0 && r2 > 0.0) {
        return Err(Error::Domain(format!("radii must be positive, got ({r1}, {r2})")));
    }
    let dist2 = r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * theta.cos();
    if !(dist2 > 0.0) {
        return Err(collision("bodies coincide"));
    }
    let w2 = m0 + 0.25;
    let d3 = dist2 * dist2.sqrt();
    Ok([
        w2 * r1 - m0 / (r1 * r1) - (r1 - r2 * theta.cos()) / d3,
        w2 * r2 - m0 / (r2 * r2) - (r2 - r1 * theta.cos()) / d3,
        2.0 * r1 * r2 * theta.sin() / d3,
    ])
}
