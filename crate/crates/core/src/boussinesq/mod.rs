//! Solitary waves of the Bona-Smith system
//!
//! `η_t + u_x + (ηu)_x − b η_xxt = 0`, `u_t + η_x + u u_x + c η_xxx − d u_xxt = 0`
//!
//! with `c = 2/3 − θ²` and `b = d = (θ² − 1/3)/2`. Traveling waves of speed
//! `c_s` solve a nonlinear system that is discretized by Fourier collocation
//! on `(−L, L)`. States are stacked as `[u; η]`.

mod propagate;

pub use propagate::{propagate, propagate_at, Propagation, Snapshot};

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numlin::{FnOperator, FourierGrid, LinearOperator};
use crate::solvers::ProblemSpec;
use crate::symmetry::GroupAction;
use crate::{Matrix, Vector};

/// Smallest first-mode magnitude accepted when locating a wave center.
pub const MODE_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BsParams {
    pub theta2: f64,
    pub cs: f64,
    pub n: usize,
    pub half_length: f64,
}

impl BsParams {
    pub fn new(theta2: f64, cs: f64, n: usize, half_length: f64) -> Result<Self> {
        let p = Self { theta2, cs, n, half_length };
        p.validate()?;
        Ok(p)
    }

    /// Parameters of the closed-form wave for `θ²` on the given grid.
    pub fn exact(theta2: f64, n: usize, half_length: f64) -> Result<Self> {
        let e = ExactParameters::new(theta2)?;
        Self::new(theta2, e.cs, n, half_length)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta2 > 2.0 / 3.0 && self.theta2 <= 1.0) {
            return Err(invalid(format!("θ² = {} must lie in (2/3, 1]", self.theta2)));
        }
        if !(self.cs > 1.0 && self.cs.is_finite()) {
            return Err(invalid(format!("wave speed {} must exceed 1", self.cs)));
        }
        if self.n < 4 || self.n % 2 != 0 {
            return Err(invalid(format!("grid size {} must be even and at least 4", self.n)));
        }
        if !(self.half_length > 0.0 && self.half_length.is_finite()) {
            return Err(invalid(format!("half-length {} must be positive", self.half_length)));
        }
        Ok(())
    }

    pub fn c_coef(&self) -> f64 {
        2.0 / 3.0 - self.theta2
    }

    pub fn b_coef(&self) -> f64 {
        0.5 * (self.theta2 - 1.0 / 3.0)
    }

    pub fn d_coef(&self) -> f64 {
        self.b_coef()
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_length / self.n as f64
    }

    pub fn grid(&self) -> Result<FourierGrid> {
        FourierGrid::new(self.n, self.half_length)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct WavePair {
    pub u: Vector,
    pub eta: Vector,
}

impl WavePair {
    pub fn new(u: Vector, eta: Vector) -> Result<Self> {
        if u.len() != eta.len() {
            return Err(invalid(format!("component lengths differ ({} vs {})", u.len(), eta.len())));
        }
        Ok(Self { u, eta })
    }

    pub fn zeros(n: usize) -> Self {
        Self { u: Vector::zeros(n), eta: Vector::zeros(n) }
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn stack(&self) -> Vector {
        let n = self.len();
        Vector::from_iterator(2 * n, self.u.iter().chain(self.eta.iter()).copied())
    }

    pub fn unstack(x: &Vector) -> Result<Self> {
        if x.len() % 2 != 0 {
            return Err(invalid(format!("stacked state has odd length {}", x.len())));
        }
        let n = x.len() / 2;
        Ok(Self { u: x.rows(0, n).into_owned(), eta: x.rows(n, n).into_owned() })
    }

    pub fn is_finite(&self) -> bool {
        self.u.iter().chain(self.eta.iter()).all(|v| v.is_finite())
    }

    /// Largest `|η|` among the two samples at each end of the grid.
    pub fn edge_amplitude(&self) -> f64 {
        let n = self.len();
        if n < 2 {
            return 0.0;
        }
        [0, 1, n - 2, n - 1].iter().map(|&j| self.eta[j].abs()).fold(0.0, f64::max)
    }
}

/// Closed-form parameters of the sech² solitary wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactParameters {
    pub amplitude: f64,
    pub cs: f64,
    pub decay: f64,
    /// Ratio `u / η`.
    pub velocity_ratio: f64,
}

impl ExactParameters {
    pub fn new(theta2: f64) -> Result<Self> {
        if !(theta2 > 7.0 / 9.0 && theta2 < 1.0) {
            return Err(Error::Domain(format!("closed-form wave needs θ² in (7/9, 1), got {theta2}")));
        }
        let t = theta2;
        Ok(Self {
            amplitude: 4.5 * (t - 7.0 / 9.0) / (1.0 - t),
            cs: 4.0 * (t - 2.0 / 3.0) / (2.0 * (1.0 - t) * (t - 1.0 / 3.0)).sqrt(),
            decay: 0.5 * (3.0 * (t - 7.0 / 9.0) / ((t - 1.0 / 3.0) * (t - 2.0 / 3.0))).sqrt(),
            velocity_ratio: (2.0 * (1.0 - t) / (t - 1.0 / 3.0)).sqrt(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactProfile {
    pub wave: WavePair,
    pub params: ExactParameters,
    pub center: f64,
}

fn sech2(z: f64) -> f64 {
    let s = 1.0 / z.cosh();
    s * s
}

/// Samples `η = η₀ sech²(λ(x − x0))`, `u = Bη` at the collocation points.
pub fn exact_profile(theta2: f64, n: usize, half_length: f64, x0: f64) -> Result<ExactProfile> {
    let params = ExactParameters::new(theta2)?;
    let grid = FourierGrid::new(n, half_length)?;
    let eta = grid.points().map(|x| params.amplitude * sech2(params.decay * (x - x0)));
    let u = &eta * params.velocity_ratio;
    Ok(ExactProfile { wave: WavePair { u, eta }, params, center: x0 })
}

/// The collocated traveling-wave system for fixed parameters.
#[derive(Debug, Clone)]
pub struct BsProblem {
    params: BsParams,
    grid: Arc<FourierGrid>,
}

impl BsProblem {
    pub fn new(params: BsParams) -> Result<Self> {
        params.validate()?;
        Ok(Self { params, grid: Arc::new(params.grid()?) })
    }

    pub fn params(&self) -> &BsParams {
        &self.params
    }

    pub fn grid(&self) -> &FourierGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        2 * self.params.n
    }

    /// Applies the linear part `S_h` to a stacked vector.
    pub fn apply_linear(&self, v: &Vector) -> Vector {
        let n = self.params.n;
        let (a, e) = (v.rows(0, n).into_owned(), v.rows(n, n).into_owned());
        let (d2a, d2e) = self.grid.second_derivative_pair(&a, &e);
        let (cs, b, c, d) = (self.params.cs, self.params.b_coef(), self.params.c_coef(), self.params.d_coef());
        let mut out = Vector::zeros(2 * n);
        for j in 0..n {
            out[j] = -a[j] + cs * (e[j] - b * d2e[j]);
            out[n + j] = cs * (a[j] - d * d2a[j]) - (e[j] + c * d2e[j]);
        }
        out
    }

    /// `F_h(u, η) = S_h(u, η) − (uη, u²/2)`.
    pub fn residual(&self, x: &Vector) -> Result<Vector> {
        self.check(x)?;
        let n = self.params.n;
        let mut out = self.apply_linear(x);
        for j in 0..n {
            let (u, e) = (x[j], x[n + j]);
            out[j] -= u * e;
            out[n + j] -= 0.5 * u * u;
        }
        Ok(out)
    }

    /// Jacobian `S_h − [[diag η, diag u], [diag u, 0]]` applied to `v`.
    pub fn jacobian_apply(&self, x: &Vector, v: &Vector) -> Vector {
        let n = self.params.n;
        let mut out = self.apply_linear(v);
        for j in 0..n {
            let (u, e) = (x[j], x[n + j]);
            out[j] -= e * v[j] + u * v[n + j];
            out[n + j] -= u * v[j];
        }
        out
    }

    /// Matrix-free Jacobian at `x`.
    pub fn jacobian_operator(&self, x: &Vector) -> Result<impl LinearOperator + Send + Sync + 'static> {
        self.check(x)?;
        let this = self.clone();
        let state = x.clone();
        Ok(FnOperator::new(self.dim(), true, move |v: &Vector| this.jacobian_apply(&state, v)))
    }

    /// Dense Jacobian, exactly symmetric.
    pub fn jacobian_matrix(&self, x: &Vector) -> Result<Matrix> {
        self.check(x)?;
        let n = self.params.n;
        let d2 = self.grid.derivative_matrix(2)?;
        let (cs, b, c) = (self.params.cs, self.params.b_coef(), self.params.c_coef());
        let coupling = Matrix::identity(n, n) * cs - &d2 * (cs * b);
        let mut m = Matrix::zeros(2 * n, 2 * n);
        m.view_mut((0, n), (n, n)).copy_from(&coupling);
        m.view_mut((n, 0), (n, n)).copy_from(&coupling);
        m.view_mut((n, n), (n, n)).copy_from(&(-(Matrix::identity(n, n) + &d2 * c)));
        for j in 0..n {
            let (u, e) = (x[j], x[n + j]);
            m[(j, j)] = -1.0 - e;
            m[(j, n + j)] -= u;
            m[(n + j, j)] -= u;
        }
        Ok(m)
    }

    /// Applies `(sI − D²)⁻¹` to each half of a stacked vector.
    pub fn precond_apply(&self, s: f64, v: &Vector) -> Result<Vector> {
        check_shift(s)?;
        if v.len() != self.dim() {
            return Err(invalid(format!("expected a vector of length {}, got {}", self.dim(), v.len())));
        }
        Ok(self.precond_unchecked(s, v))
    }

    fn precond_unchecked(&self, s: f64, v: &Vector) -> Vector {
        let n = self.params.n;
        let k = self.grid.wavenumbers();
        let (a, e) = self.grid.apply_symbol_pair(&v.rows(0, n).into_owned(), &v.rows(n, n).into_owned(), |i| {
            Complex64::new(1.0 / (s + k[i] * k[i]), 0.0)
        });
        Vector::from_iterator(2 * n, a.iter().chain(e.iter()).copied())
    }

    pub fn preconditioner(&self, s: f64) -> Result<impl LinearOperator + Send + Sync + 'static> {
        check_shift(s)?;
        let this = self.clone();
        Ok(FnOperator::new(self.dim(), true, move |v: &Vector| this.precond_unchecked(s, v)))
    }

    fn check(&self, x: &Vector) -> Result<()> {
        if x.len() != self.dim() {
            return Err(invalid(format!("expected a vector of length {}, got {}", self.dim(), x.len())));
        }
        Ok(())
    }
}

fn check_shift(s: f64) -> Result<()> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(invalid(format!("preconditioner shift must be positive, got {s}")));
    }
    Ok(())
}

/// Solver-facing view of the collocated system.
pub fn build_bs_problem(params: BsParams) -> Result<ProblemSpec> {
    let bs = BsProblem::new(params)?;
    let (r, j, m) = (bs.clone(), bs.clone(), bs.clone());
    Ok(ProblemSpec::new(bs.dim(), move |x| r.residual(x))
        .with_jacobian(move |x| Ok(Box::new(j.jacobian_operator(x)?) as Box<dyn LinearOperator>))
        .with_preconditioner(move |s| Ok(Box::new(m.preconditioner(s)?) as Box<dyn LinearOperator>)))
}

/// Spatial translation `(u, η)(x) ↦ (u, η)(x − α)` by Fourier phase shifts.
#[derive(Debug, Clone)]
pub struct TranslationGroup {
    grid: Arc<FourierGrid>,
}

pub fn translation_action(params: &BsParams) -> Result<TranslationGroup> {
    params.validate()?;
    Ok(TranslationGroup { grid: Arc::new(params.grid()?) })
}

impl TranslationGroup {
    pub fn grid(&self) -> &FourierGrid {
        &self.grid
    }

    fn halves(&self, x: &Vector) -> (Vector, Vector) {
        let n = self.grid.n();
        (x.rows(0, n).into_owned(), x.rows(n, n).into_owned())
    }
}

fn join(a: Vector, b: Vector) -> Vector {
    let n = a.len();
    Vector::from_iterator(2 * n, a.iter().chain(b.iter()).copied())
}

impl GroupAction for TranslationGroup {
    fn dim(&self) -> usize {
        1
    }

    fn act(&self, alpha: &[f64], x: &Vector) -> Vector {
        let (u, e) = self.halves(x);
        let (su, se) = self.grid.shift_pair(&u, &e, alpha[0]);
        join(su, se)
    }

    fn generators(&self, x: &Vector) -> Vec<Vector> {
        let (u, e) = self.halves(x);
        let (du, de) = self.grid.first_derivative_pair(&u, &e);
        vec![join(-du, -de)]
    }

    /// Difference of the η first-mode centers.
    fn align(&self, x: &Vector, xref: &Vector) -> Option<Vec<f64>> {
        let n = self.grid.n();
        let target = mode_center(&self.grid, &x.rows(n, n).into_owned()).ok()?;
        let reference = mode_center(&self.grid, &xref.rows(n, n).into_owned()).ok()?;
        Some(vec![wrap_periodic(target - reference, self.grid.half_length())])
    }

    fn period(&self) -> Option<f64> {
        Some(2.0 * self.grid.half_length())
    }
}

/// Maps `x` into `(−L, L]`.
pub fn wrap_periodic(x: f64, half_length: f64) -> f64 {
    let period = 2.0 * half_length;
    let mut y = (x + half_length).rem_euclid(period) - half_length;
    if y <= -half_length {
        y += period;
    }
    y
}

/// Center `−(L/π)·arg(v̂₁)` of a single bump from its first Fourier mode.
pub fn mode_center(grid: &FourierGrid, v: &Vector) -> Result<f64> {
    let a1 = grid.first_mode(v);
    let scale = v.amax().max(f64::MIN_POSITIVE);
    if !(a1.norm() >= MODE_FLOOR * scale) || !a1.norm().is_finite() {
        return Err(Error::Search(format!("first Fourier mode {:e} is too small to locate a bump", a1.norm())));
    }
    let l = grid.half_length();
    Ok(wrap_periodic(-(l / std::f64::consts::PI) * a1.arg(), l))
}

/// Centers of the η and u components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveCenters {
    pub eta: f64,
    pub u: f64,
}

pub fn wave_centers(w: &WavePair, half_length: f64) -> Result<WaveCenters> {
    let grid = FourierGrid::new(w.len(), half_length)?;
    Ok(WaveCenters { eta: mode_center(&grid, &w.eta)?, u: mode_center(&grid, &w.u)? })
}

/// Center of the η component.
pub fn translation_shift(w: &WavePair, half_length: f64) -> Result<f64> {
    let grid = FourierGrid::new(w.len(), half_length)?;
    mode_center(&grid, &w.eta)
}

/// Initial perturbations of a base wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Seed {
    Unperturbed,
    /// Adds `ε·exp(−x²)` to both components.
    Gauss { eps: f64 },
    /// Adds `ε·(x − x0)·exp(−(x − x0)²)` to both components.
    GaussDerivative { eps: f64, x0: f64 },
    /// Adds `ε·D` of each component.
    GeneratorDiscrete { eps: f64 },
}

pub fn seeded_wave(base: &WavePair, grid: &FourierGrid, seed: Seed) -> Result<WavePair> {
    if base.len() != grid.n() {
        return Err(invalid("wave length does not match the grid"));
    }
    let x = grid.points();
    let bump = |f: &dyn Fn(f64) -> f64, eps: f64| {
        let add = x.map(|xi| eps * f(xi));
        WavePair { u: &base.u + &add, eta: &base.eta + &add }
    };
    Ok(match seed {
        Seed::Unperturbed => base.clone(),
        Seed::Gauss { eps } => bump(&|xi| (-xi * xi).exp(), eps),
        Seed::GaussDerivative { eps, x0 } => bump(&|xi| (xi - x0) * (-(xi - x0) * (xi - x0)).exp(), eps),
        Seed::GeneratorDiscrete { eps } => {
            let (du, de) = grid.first_derivative_pair(&base.u, &base.eta);
            WavePair { u: &base.u + du * eps, eta: &base.eta + de * eps }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numlin::{materialize, symmetry_defect};
    use crate::symmetry::{composition_defect, generator_defect, kernel_check};
    use approx::assert_relative_eq;

    fn exact_09() -> (BsProblem, ExactProfile) {
        let prof = exact_profile(0.9, 1024, 50.0, 0.0).unwrap();
        let bs = BsProblem::new(BsParams::new(0.9, prof.params.cs, 1024, 50.0).unwrap()).unwrap();
        (bs, prof)
    }

    #[test]
    fn closed_form_parameters() {
        // direct evaluation at θ² = 9/10 with exact fractions under the roots
        let e = ExactParameters::new(0.9).unwrap();
        assert_relative_eq!(e.amplitude, 5.5, epsilon = 1e-13);
        assert_relative_eq!(e.cs, 4.0 * (7.0 / 30.0) / (2.0 * 0.1 * (17.0 / 30.0_f64)).sqrt(), epsilon = 1e-13);
        assert_relative_eq!(e.cs, 2.772413120334689, epsilon = 1e-12);
        assert_relative_eq!(e.decay, 0.8326327587384307, epsilon = 1e-12);
        assert_relative_eq!(e.velocity_ratio, 0.5940885257860045, epsilon = 1e-12);
        assert!(matches!(ExactParameters::new(0.7), Err(Error::Domain(_))));
        assert!(matches!(ExactParameters::new(1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn parameter_validation() {
        assert!(BsParams::new(0.6, 1.2, 64, 10.0).is_err());
        assert!(BsParams::new(0.9, 0.9, 64, 10.0).is_err());
        assert!(BsParams::new(0.9, 1.2, 63, 10.0).is_err());
        assert!(BsParams::new(0.9, 1.2, 64, 0.0).is_err());
        let p = BsParams::new(0.9, 1.2, 64, 10.0).unwrap();
        assert_eq!(p.b_coef(), p.d_coef());
        assert!(p.c_coef() < 0.0);
    }

    #[test]
    fn exact_profile_shape() {
        let prof = exact_profile(0.9, 256, 30.0, 0.0).unwrap();
        let n = 256;
        // x_j = −L + jh is symmetric about 0 through j ↦ n − j
        for j in 1..n {
            assert!((prof.wave.eta[j] - prof.wave.eta[n - j]).abs() <= 1e-12);
        }
        let ratio = prof.params.velocity_ratio;
        assert!((&prof.wave.u - &prof.wave.eta * ratio).amax() <= 1e-12);
        assert!(prof.wave.edge_amplitude() < 1e-10);
    }

    #[test]
    fn exact_profile_solves_collocated_system() {
        let (bs, prof) = exact_09();
        let r = bs.residual(&prof.wave.stack()).unwrap();
        assert!(r.norm() <= 1e-10, "{:e}", r.norm());
        assert_eq!(bs.residual(&Vector::zeros(2048)).unwrap().norm(), 0.0);
    }

    #[test]
    fn jacobian_is_symmetric_and_matches_differences() {
        let prof = exact_profile(0.9, 64, 20.0, 0.7).unwrap();
        let bs = BsProblem::new(BsParams::new(0.9, 2.0, 64, 20.0).unwrap()).unwrap();
        let x = prof.wave.stack();
        let op = bs.jacobian_operator(&x).unwrap();
        assert!(symmetry_defect(&op, 4, 3) <= 1e-10);
        let dense = bs.jacobian_matrix(&x).unwrap();
        assert_eq!(dense, dense.transpose());
        assert!((materialize(&op) - &dense).amax() <= 1e-9 * dense.amax());
        let fd = crate::numlin::fd_jacobian(|v| bs.residual(v), &x, 1e-6).unwrap();
        assert!((fd - &dense).amax() <= 1e-5 * dense.amax());
    }

    #[test]
    fn preconditioner_inverts_shifted_laplacian() {
        let bs = BsProblem::new(BsParams::new(0.9, 1.2, 32, 4.0).unwrap()).unwrap();
        let ones = Vector::from_element(64, 1.0);
        assert!((bs.precond_apply(2.0, &ones).unwrap() - &ones * 0.5).amax() <= 1e-15);
        let g = bs.grid();
        let x = g.points();
        let k = 3.0 * std::f64::consts::PI / 4.0;
        let mode = x.map(|xi| (k * xi).cos());
        let v = join(mode.clone(), mode.clone());
        let out = bs.precond_apply(1.0, &v).unwrap();
        assert!((out - &v / (1.0 + k * k)).amax() <= 1e-14);
        let probe = crate::numlin::probe_vectors(64, 1, 4).remove(0);
        let y = bs.precond_apply(0.5, &probe).unwrap();
        let (ya, ye) = (y.rows(0, 32).into_owned(), y.rows(32, 32).into_owned());
        let (d2a, d2e) = g.second_derivative_pair(&ya, &ye);
        let back = join(&ya * 0.5 - d2a, &ye * 0.5 - d2e);
        assert!((back - probe).amax() <= 1e-12);
        assert!(bs.precond_apply(0.0, &ones).is_err());
        assert!(bs.precond_apply(-1.0, &ones).is_err());
    }

    #[test]
    fn translation_group_laws() {
        let p = BsParams::new(0.9, 1.5, 512, 30.0).unwrap();
        let grp = translation_action(&p).unwrap();
        let x = exact_profile(0.9, 512, 30.0, 0.3).unwrap().wave.stack();
        let h = p.spacing();
        let shifted = grp.act(&[3.0 * h], &x);
        for j in 0..512 {
            assert!((shifted[(j + 3) % 512] - x[j]).abs() <= 1e-12);
            assert!((shifted[512 + (j + 3) % 512] - x[512 + j]).abs() <= 1e-12);
        }
        let back = grp.act(&[-0.37], &grp.act(&[0.37], &x));
        assert!((back - &x).amax() <= 1e-12);
        assert!(composition_defect(&grp, &x, &[(0.2, 1.3), (-4.0, 0.9)]) <= 1e-12);
        assert!(generator_defect(&grp, &x, 1e-5) <= 1e-8);
    }

    #[test]
    fn centers_and_alignment() {
        let p0 = exact_profile(0.9, 512, 40.0, 0.0).unwrap();
        assert!(translation_shift(&p0.wave, 40.0).unwrap().abs() <= 1e-12);
        let p1 = exact_profile(0.9, 512, 40.0, 1.5).unwrap();
        assert!((translation_shift(&p1.wave, 40.0).unwrap() - 1.5).abs() <= 1e-10);
        let c = wave_centers(&p1.wave, 40.0).unwrap();
        assert!((c.u - c.eta).abs() <= 1e-12);
        let p = BsParams::exact(0.9, 512, 40.0).unwrap();
        let grp = translation_action(&p).unwrap();
        let rep = crate::symmetry::align_to_orbit(&p1.wave.stack(), &p0.wave.stack(), &grp).unwrap();
        assert!((rep.alpha_star[0] - 1.5).abs() <= 1e-10);
        assert!(rep.orbital_distance <= 1e-10);
        assert!(translation_shift(&WavePair::zeros(512), 40.0).is_err());
    }

    #[test]
    fn wrap_into_half_open_interval() {
        assert_eq!(wrap_periodic(0.5, 2.0), 0.5);
        assert!((wrap_periodic(3.0, 2.0) + 1.0).abs() < 1e-15);
        assert_eq!(wrap_periodic(2.0, 2.0), 2.0);
        assert_eq!(wrap_periodic(-2.0, 2.0), 2.0);
    }

    #[test]
    fn translation_generator_spans_kernel() {
        let (bs, prof) = exact_09();
        let problem = build_bs_problem(*bs.params()).unwrap();
        let grp = translation_action(bs.params()).unwrap();
        assert!(kernel_check(&problem, &prof.wave.stack(), &grp).unwrap() <= 1e-8);
    }

    #[test]
    fn residual_commutes_with_grid_shifts() {
        let p = BsParams::new(0.9, 1.3, 64, 8.0).unwrap();
        let bs = BsProblem::new(p).unwrap();
        let grp = translation_action(&p).unwrap();
        let x = crate::numlin::probe_vectors(128, 1, 11).remove(0);
        for j in [1, 5, 17] {
            let a = j as f64 * p.spacing();
            let lhs = bs.residual(&grp.act(&[a], &x)).unwrap();
            let rhs = grp.act(&[a], &bs.residual(&x).unwrap());
            assert!((lhs - rhs).amax() <= 1e-10);
        }
    }

    #[test]
    fn seeds() {
        let prof = exact_profile(0.9, 256, 30.0, 0.0).unwrap();
        let grid = FourierGrid::new(256, 30.0).unwrap();
        let w = &prof.wave;
        assert_eq!(seeded_wave(w, &grid, Seed::Unperturbed).unwrap(), *w);
        let g = seeded_wave(w, &grid, Seed::Gauss { eps: 0.05 }).unwrap();
        let mid = 128;
        assert!((g.eta[mid] - w.eta[mid] - 0.05).abs() < 1e-15);
        assert!((g.u[mid] - w.u[mid] - 0.05).abs() < 1e-15);
        let s = seeded_wave(w, &grid, Seed::GaussDerivative { eps: 1.0, x0: -1.5 }).unwrap();
        let x = grid.points();
        let j = 100;
        let z = x[j] + 1.5;
        assert!((s.eta[j] - w.eta[j] - z * (-z * z).exp()).abs() < 1e-14);
        let d = seeded_wave(w, &grid, Seed::GeneratorDiscrete { eps: 0.01 }).unwrap();
        assert!((&d.eta - &w.eta - grid.first_derivative(&w.eta) * 0.01).amax() < 1e-14);
    }

    #[test]
    fn stacking_round_trip() {
        let w = WavePair::new(Vector::from_vec(vec![1.0, 2.0]), Vector::from_vec(vec![3.0, 4.0])).unwrap();
        assert_eq!(w.stack().as_slice(), &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(WavePair::unstack(&w.stack()).unwrap(), w);
        assert!(WavePair::unstack(&Vector::zeros(3)).is_err());
        assert!(WavePair::new(Vector::zeros(2), Vector::zeros(3)).is_err());
    }
}
