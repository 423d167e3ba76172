//! Fourier pseudospectral collocation on a periodic interval `[-L, L)`.
//!
//! Grid points are `x_j = -L + j·2L/N` for `j = 0..N`. Wavenumbers follow
//! the FFT ordering `k = 0, 1, …, N/2-1, -N/2, …, -1` scaled by `π/L`.
//! First derivatives zero the Nyquist coefficient so the differentiation
//! matrix is real and antisymmetric.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, Result};
use crate::{Matrix, Vector};

#[derive(Clone)]
pub struct FourierGrid {
    n: usize,
    half_length: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    wavenumbers: Vec<f64>,
}

impl fmt::Debug for FourierGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FourierGrid")
            .field("n", &self.n)
            .field("half_length", &self.half_length)
            .finish()
    }
}

impl FourierGrid {
    pub fn new(n: usize, half_length: f64) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(invalid(format!("grid size must be even and at least 4, got {n}")));
        }
        if !(half_length > 0.0 && half_length.is_finite()) {
            return Err(invalid(format!("half-length must be positive, got {half_length}")));
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let scale = PI / half_length;
        let wavenumbers = (0..n)
            .map(|idx| {
                let k = if idx < n / 2 { idx as f64 } else { idx as f64 - n as f64 };
                k * scale
            })
            .collect();
        Ok(Self { n, half_length, forward, inverse, wavenumbers })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_length / self.n as f64
    }

    pub fn points(&self) -> Vector {
        let h = self.spacing();
        Vector::from_fn(self.n, |j, _| -self.half_length + j as f64 * h)
    }

    /// Angular wavenumbers `kπ/L` in FFT order.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    pub fn nyquist_index(&self) -> usize {
        self.n / 2
    }

    /// Unnormalized forward DFT of real samples.
    pub fn forward(&self, v: &[f64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.n, "sample count does not match grid");
        let mut buf: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.forward.process(&mut buf);
        buf
    }

    /// Inverse DFT (normalized by `1/N`), keeping the real part.
    pub fn inverse_real(&self, mut coeffs: Vec<Complex64>) -> Vector {
        assert_eq!(coeffs.len(), self.n, "coefficient count does not match grid");
        self.inverse.process(&mut coeffs);
        let inv_n = 1.0 / self.n as f64;
        Vector::from_iterator(self.n, coeffs.iter().map(|c| c.re * inv_n))
    }

    /// Multiplies the Fourier coefficients of `v` by `symbol(index)`.
    pub fn apply_symbol(&self, v: &Vector, symbol: impl Fn(usize) -> Complex64) -> Vector {
        let mut c = self.forward(v.as_slice());
        for (idx, ci) in c.iter_mut().enumerate() {
            *ci *= symbol(idx);
        }
        self.inverse_real(c)
    }

    /// Same as [`apply_symbol`](Self::apply_symbol) for a real symbol.
    pub fn apply_real_symbol(&self, v: &Vector, symbol: impl Fn(usize) -> f64) -> Vector {
        let mut c = self.forward(v.as_slice());
        for (idx, ci) in c.iter_mut().enumerate() {
            *ci *= symbol(idx);
        }
        self.inverse_real(c)
    }

    /// Applies a symbol with `σ(−k) = conj σ(k)` to two real vectors at once
    /// by transforming `a + i·b`.
    pub fn apply_symbol_pair(
        &self,
        a: &Vector,
        b: &Vector,
        symbol: impl Fn(usize) -> Complex64,
    ) -> (Vector, Vector) {
        assert!(a.len() == self.n && b.len() == self.n, "sample count does not match grid");
        let mut c: Vec<Complex64> = a.iter().zip(b.iter()).map(|(&x, &y)| Complex64::new(x, y)).collect();
        self.forward.process(&mut c);
        for (idx, ci) in c.iter_mut().enumerate() {
            *ci *= symbol(idx);
        }
        self.inverse.process(&mut c);
        let inv_n = 1.0 / self.n as f64;
        (
            Vector::from_iterator(self.n, c.iter().map(|z| z.re * inv_n)),
            Vector::from_iterator(self.n, c.iter().map(|z| z.im * inv_n)),
        )
    }

    pub fn first_derivative(&self, v: &Vector) -> Vector {
        self.apply_symbol(v, |idx| self.first_derivative_symbol(idx))
    }

    pub fn second_derivative(&self, v: &Vector) -> Vector {
        self.apply_real_symbol(v, |idx| -self.wavenumbers[idx] * self.wavenumbers[idx])
    }

    fn first_derivative_symbol(&self, idx: usize) -> Complex64 {
        if idx == self.nyquist_index() {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, self.wavenumbers[idx])
        }
    }

    pub fn first_derivative_pair(&self, a: &Vector, b: &Vector) -> (Vector, Vector) {
        self.apply_symbol_pair(a, b, |idx| self.first_derivative_symbol(idx))
    }

    pub fn second_derivative_pair(&self, a: &Vector, b: &Vector) -> (Vector, Vector) {
        self.apply_symbol_pair(a, b, |idx| Complex64::new(-self.wavenumbers[idx] * self.wavenumbers[idx], 0.0))
    }

    pub fn derivative(&self, v: &Vector, order: usize) -> Result<Vector> {
        if v.len() != self.n {
            return Err(invalid(format!("expected {} samples, got {}", self.n, v.len())));
        }
        match order {
            1 => Ok(self.first_derivative(v)),
            2 => Ok(self.second_derivative(v)),
            _ => Err(invalid(format!("derivative order must be 1 or 2, got {order}"))),
        }
    }

    /// Explicit differentiation matrix from the closed-form cotangent and
    /// cosecant kernels. Order 1 is exactly antisymmetric and order 2 exactly
    /// symmetric.
    pub fn derivative_matrix(&self, order: usize) -> Result<Matrix> {
        let n = self.n;
        let ht = 2.0 * PI / n as f64;
        let scale = PI / self.half_length;
        let sign = |d: usize| if d % 2 == 0 { 1.0 } else { -1.0 };
        match order {
            1 => Ok(Matrix::from_fn(n, n, |i, j| {
                if i == j {
                    0.0
                } else {
                    let d = (i + n - j) % n;
                    let half = |d: usize| 0.5 * sign(d) / (d as f64 * ht / 2.0).tan();
                    let val = match (2 * d).cmp(&n) {
                        std::cmp::Ordering::Less => half(d),
                        std::cmp::Ordering::Equal => 0.0,
                        std::cmp::Ordering::Greater => -half(n - d),
                    };
                    scale * val
                }
            })),
            2 => {
                let diag = -PI * PI / (3.0 * ht * ht) - 1.0 / 6.0;
                Ok(Matrix::from_fn(n, n, |i, j| {
                    let d = (i + n - j) % n;
                    let d = d.min(n - d);
                    let val = if d == 0 {
                        diag
                    } else {
                        let s = (d as f64 * ht / 2.0).sin();
                        -0.5 * sign(d) / (s * s)
                    };
                    scale * scale * val
                }))
            }
            _ => Err(invalid(format!("derivative order must be 1 or 2, got {order}"))),
        }
    }

    /// Translates samples by `alpha` (`v(x) ↦ v(x - alpha)`) through Fourier
    /// phase factors. The Nyquist mode uses `cos(kα)`, which makes grid
    /// multiples of the spacing exact circular shifts.
    pub fn shift(&self, v: &Vector, alpha: f64) -> Vector {
        self.apply_symbol(v, |idx| self.shift_symbol(idx, alpha))
    }

    pub fn shift_pair(&self, a: &Vector, b: &Vector, alpha: f64) -> (Vector, Vector) {
        self.apply_symbol_pair(a, b, |idx| self.shift_symbol(idx, alpha))
    }

    fn shift_symbol(&self, idx: usize, alpha: f64) -> Complex64 {
        let phase = self.wavenumbers[idx] * alpha;
        if idx == self.nyquist_index() {
            Complex64::new(phase.cos(), 0.0)
        } else {
            Complex64::from_polar(1.0, -phase)
        }
    }

    /// Coefficient of `exp(iπx/L)` in the trigonometric interpolant of `v`.
    pub fn first_mode(&self, v: &Vector) -> Complex64 {
        let c = self.forward(v.as_slice())[1];
        // the grid starts at -L, contributing a factor exp(-iπ) = -1
        -c / self.n as f64
    }
}

/// Pseudospectral derivative of order 1 or 2 of samples on `[-L, L)`.
pub fn spectral_derivative(v: &Vector, half_length: f64, order: usize) -> Result<Vector> {
    FourierGrid::new(v.len(), half_length)?.derivative(v, order)
}
