//! Pseudospectral time integration of the Bona-Smith system with classical
//! fourth-order Runge-Kutta.
//!
//! The operators `1 − b∂²` and `1 − d∂²` are inverted diagonally in Fourier
//! space, so the semi-discrete system is non-stiff.

use num_complex::Complex64;

use super::{BsParams, WavePair};
use crate::error::{invalid, Result};
use crate::numlin::FourierGrid;

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub wave: WavePair,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Propagation {
    pub snapshots: Vec<Snapshot>,
    /// Set when the state stopped being finite; snapshots hold what was
    /// recorded before that.
    pub aborted: Option<String>,
    pub steps: usize,
    /// Step actually used, `t_end / steps`.
    pub dt: f64,
}

struct Rhs<'a> {
    grid: &'a FourierGrid,
    b: f64,
    c: f64,
}

impl Rhs<'_> {
    fn eval(&self, w: &WavePair) -> WavePair {
        let k = self.grid.wavenumbers();
        let nyq = self.grid.nyquist_index();
        let eta_xx = self.grid.second_derivative(&w.eta);
        let mass_flux = &w.u + w.eta.component_mul(&w.u);
        let momentum_flux = &w.eta + w.u.map(|v| 0.5 * v * v) + eta_xx * self.c;
        let b = self.b;
        let (eta_t, u_t) = self.grid.apply_symbol_pair(&mass_flux, &momentum_flux, |i| {
            if i == nyq {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, -k[i] / (1.0 + b * k[i] * k[i]))
            }
        });
        WavePair { u: u_t, eta: eta_t }
    }
}

fn axpy(w: &WavePair, a: f64, k: &WavePair) -> WavePair {
    WavePair { u: &w.u + &k.u * a, eta: &w.eta + &k.eta * a }
}

/// Integrates from `t = 0` to `t_end`, recording the initial and final states.
pub fn propagate(w0: &WavePair, params: &BsParams, dt: f64, t_end: f64) -> Result<Propagation> {
    propagate_at(w0, params, dt, &[0.0, t_end])
}

/// Integrates from `t = 0`, recording snapshots at the requested times.
///
/// The step is reduced to `t_end / ⌈t_end / dt⌉` and each snapshot is taken
/// at the nearest step.
pub fn propagate_at(w0: &WavePair, params: &BsParams, dt: f64, times: &[f64]) -> Result<Propagation> {
    params.validate()?;
    if w0.len() != params.n {
        return Err(invalid(format!("wave has {} samples, grid has {}", w0.len(), params.n)));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(invalid(format!("time step must be positive, got {dt}")));
    }
    if times.is_empty() || times.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
        return Err(invalid("snapshot times must be a nonempty list of finite nonnegative values"));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid("snapshot times must be nondecreasing"));
    }
    let t_end = *times.last().expect("nonempty");
    let steps = ((t_end / dt) - 1e-9).ceil().max(0.0) as usize;
    let h = if steps == 0 { dt } else { t_end / steps as f64 };
    let marks: Vec<usize> = times.iter().map(|t| if steps == 0 { 0 } else { (t / h).round() as usize }).collect();

    let grid = params.grid()?;
    let rhs = Rhs { grid: &grid, b: params.b_coef(), c: params.c_coef() };
    let mut out = Propagation { snapshots: Vec::with_capacity(times.len()), aborted: None, steps, dt: h };
    let mut w = w0.clone();
    let mut next = 0;
    for step in 0..=steps {
        if !w.is_finite() {
            out.aborted = Some(format!("state became non-finite at t = {}", step as f64 * h));
            return Ok(out);
        }
        while next < marks.len() && marks[next] == step {
            out.snapshots.push(Snapshot { t: step as f64 * h, wave: w.clone() });
            next += 1;
        }
        if step == steps {
            break;
        }
        let k1 = rhs.eval(&w);
        let k2 = rhs.eval(&axpy(&w, 0.5 * h, &k1));
        let k3 = rhs.eval(&axpy(&w, 0.5 * h, &k2));
        let k4 = rhs.eval(&axpy(&w, h, &k3));
        w = WavePair {
            u: &w.u + (&k1.u + (&k2.u + &k3.u) * 2.0 + &k4.u) * (h / 6.0),
            eta: &w.eta + (&k1.eta + (&k2.eta + &k3.eta) * 2.0 + &k4.eta) * (h / 6.0),
        };
    }
    Ok(out)
}
