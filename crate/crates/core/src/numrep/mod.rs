//! Momentum-grid realization of operator expressions.
//!
//! Momenta sit at half-integer cell centres `p_j = −pmax + (j + ½)dp`, so no
//! grid point has `P = 0`. Positions are `x_k = (k − N/2)dx` with
//! `dx = 2πħ/(N dp)`, and `Q_i` acts as `F⁻¹ diag(x) F` along axis `i`, where
//! `F` is the discretized kernel `exp(+ipx/ħ)`. States are laid out as
//! `[sector][spin][grid]` with sector 0 the `Λ = +1` block.

mod linear_map;
mod localize;
mod residual;
mod states;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use thiserror::Error;

use crate::algebra::{AlgebraError, Spin};

pub use linear_map::{realize, realize_tree, LinearMap};
pub use localize::{microcausality_check, nw_evolution, CausalityResult, Interval, NwEvolution, NwParams};
pub use residual::{
    casimir_spectrum, convergence_entry, numeric_residual_suite, residual_norm, NumericConfig, ResidualResult,
};
pub use states::{balanced_width, edge_weight, gaussian_family, gaussian_specs, GaussianSpec, SectorChoice};

pub type State = Vec<Complex64>;

#[derive(Debug, Error)]
pub enum NumError {
    #[error("unsupported symbol `{0}` for this grid")]
    UnsupportedSymbol(String),
    #[error("invalid grid configuration: {0}")]
    Config(String),
    #[error("wave packet reaches the edge of the box ({0}); use a larger box")]
    WrapAround(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Parameters and precomputed tables of a momentum grid.
#[derive(Clone)]
pub struct GridRep {
    pub d: usize,
    pub npts: usize,
    pub pmax: f64,
    pub mass: f64,
    pub spin: Spin,
    pub hbar: f64,
    /// Value substituted for the time symbol `t`.
    pub time: f64,
    dp: f64,
    dx: f64,
    momenta: Vec<f64>,
    positions: Vec<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for GridRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GridRep")
            .field("d", &self.d)
            .field("npts", &self.npts)
            .field("pmax", &self.pmax)
            .field("mass", &self.mass)
            .field("spin", &self.spin)
            .field("hbar", &self.hbar)
            .field("time", &self.time)
            .finish()
    }
}

/// Largest per-axis size accepted in three dimensions.
pub const MAX_NPTS_3D: usize = 48;

impl GridRep {
    pub fn new(d: usize, npts: usize, pmax: f64, mass: f64, spin: Spin) -> Result<Self, NumError> {
        GridRep::with_hbar(d, npts, pmax, mass, spin, 1.0)
    }

    pub fn with_hbar(d: usize, npts: usize, pmax: f64, mass: f64, spin: Spin, hbar: f64) -> Result<Self, NumError> {
        if d != 1 && d != 3 {
            return Err(NumError::Config(format!("dimension must be 1 or 3, got {d}")));
        }
        if npts < 4 || !npts.is_multiple_of(2) {
            return Err(NumError::Config(format!("points per axis must be even and >= 4, got {npts}")));
        }
        if d == 3 && npts > MAX_NPTS_3D {
            return Err(NumError::Config(format!("3D grids are limited to {MAX_NPTS_3D} points per axis")));
        }
        for (name, v) in [("pmax", pmax), ("mass", mass), ("hbar", hbar)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(NumError::Config(format!("{name} must be positive, got {v}")));
            }
        }
        let dp = 2.0 * pmax / npts as f64;
        let dx = 2.0 * std::f64::consts::PI * hbar / (npts as f64 * dp);
        let momenta = (0..npts).map(|j| -pmax + (j as f64 + 0.5) * dp).collect();
        let positions = (0..npts).map(|k| (k as f64 - npts as f64 / 2.0) * dx).collect();
        let mut planner = FftPlanner::new();
        Ok(GridRep {
            d,
            npts,
            pmax,
            mass,
            spin,
            hbar,
            time: 0.0,
            dp,
            dx,
            momenta,
            positions,
            fwd: planner.plan_fft_forward(npts),
            inv: planner.plan_fft_inverse(npts),
        })
    }

    pub fn at_time(mut self, t: f64) -> Self {
        self.time = t;
        self
    }

    pub fn dp(&self) -> f64 {
        self.dp
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Momentum samples along one axis.
    pub fn momenta(&self) -> &[f64] {
        &self.momenta
    }

    /// Position samples along one axis.
    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    /// Spatial box length `N dx`.
    pub fn box_len(&self) -> f64 {
        self.npts as f64 * self.dx
    }

    /// Number of grid points `N^d`.
    pub fn grid_len(&self) -> usize {
        self.npts.pow(self.d as u32)
    }

    pub fn spin_dim(&self) -> usize {
        self.spin.dim()
    }

    /// Number of `(sector, spin)` blocks.
    pub fn blocks(&self) -> usize {
        2 * self.spin_dim()
    }

    pub fn state_len(&self) -> usize {
        self.blocks() * self.grid_len()
    }

    pub fn zeros(&self) -> State {
        vec![Complex64::new(0.0, 0.0); self.state_len()]
    }

    /// Per-axis indices of a grid point (axis 0 slowest).
    pub fn unravel(&self, g: usize) -> [usize; 3] {
        let n = self.npts;
        match self.d {
            1 => [g, 0, 0],
            _ => [g / (n * n), (g / n) % n, g % n],
        }
    }

    /// Momentum vector at a grid point; unused axes are zero.
    pub fn momentum_at(&self, g: usize) -> [f64; 3] {
        let idx = self.unravel(g);
        let mut p = [0.0; 3];
        for (axis, pa) in p.iter_mut().enumerate().take(self.d) {
            *pa = self.momenta[idx[axis]];
        }
        p
    }

    pub fn omega_at(&self, g: usize) -> f64 {
        let p = self.momentum_at(g);
        (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + self.mass * self.mass).sqrt()
    }

    fn axis_stride(&self, axis: usize) -> usize {
        self.npts.pow((self.d - 1 - axis) as u32)
    }

    /// Applies `Q_axis` to every block of `v` in place.
    pub fn apply_q(&self, axis: usize, v: &mut [Complex64]) {
        assert!(axis < self.d, "axis {axis} outside a {}-dimensional grid", self.d);
        let n = self.npts;
        let stride = self.axis_stride(axis);
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.fwd.get_inplace_scratch_len()];
        let lines_per_block = self.grid_len() / n;
        let scale = 1.0 / n as f64;
        for block in v.chunks_mut(self.grid_len()) {
            for line in 0..lines_per_block {
                let base = (line / stride) * stride * n + line % stride;
                for (j, b) in buf.iter_mut().enumerate() {
                    let x = block[base + j * stride];
                    *b = if j % 2 == 0 { x } else { -x };
                }
                self.inv.process_with_scratch(&mut buf, &mut scratch);
                for (b, x) in buf.iter_mut().zip(&self.positions) {
                    *b *= *x;
                }
                self.fwd.process_with_scratch(&mut buf, &mut scratch);
                for (j, b) in buf.iter().enumerate() {
                    let y = *b * scale;
                    block[base + j * stride] = if j % 2 == 0 { y } else { -y };
                }
            }
        }
    }

    /// Position-space amplitudes `φ(x_k)` of a 1D block, normalized so that
    /// `Σ|φ|² dx = Σ|ψ|² dp`.
    pub fn to_position_1d(&self, psi: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.d, 1);
        let n = self.npts;
        let mut buf: Vec<Complex64> = psi
            .iter()
            .enumerate()
            .map(|(j, x)| if j % 2 == 0 { *x } else { -*x })
            .collect();
        self.inv.process(&mut buf);
        // |F|² = N on the DFT, so rescale by dp/(dx N) in norm.
        let k = (self.dp / (self.dx * n as f64)).sqrt();
        for b in buf.iter_mut() {
            *b *= k;
        }
        buf
    }

    /// Inverse of [`GridRep::to_position_1d`].
    pub fn to_momentum_1d(&self, phi: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.d, 1);
        let n = self.npts;
        let mut buf = phi.to_vec();
        self.fwd.process(&mut buf);
        let k = (self.dx * n as f64 / self.dp).sqrt() / n as f64;
        buf.iter()
            .enumerate()
            .map(|(j, b)| {
                let y = *b * k;
                if j % 2 == 0 {
                    y
                } else {
                    -y
                }
            })
            .collect()
    }
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_avoids_zero_momentum() {
        let g = GridRep::new(1, 16, 4.0, 1.0, Spin::ZERO).unwrap();
        assert!(g.momenta().iter().all(|p| p.abs() > 1e-9));
        assert!((g.momenta()[0] + 4.0 - g.dp() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn position_transform_round_trips() {
        let g = GridRep::new(1, 64, 6.0, 1.0, Spin::ZERO).unwrap();
        let psi: Vec<Complex64> = g
            .momenta()
            .iter()
            .map(|p| Complex64::new((-p * p).exp(), 0.3 * p))
            .collect();
        let back = g.to_momentum_1d(&g.to_position_1d(&psi));
        let err: f64 = psi.iter().zip(&back).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-13, "{err}");
        let nx: f64 = g.to_position_1d(&psi).iter().map(|z| z.norm_sqr()).sum::<f64>() * g.dx();
        let np: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>() * g.dp();
        assert!((nx - np).abs() < 1e-12 * np);
    }

    #[test]
    fn bad_configurations_are_refused() {
        assert!(GridRep::new(2, 16, 1.0, 1.0, Spin::ZERO).is_err());
        assert!(GridRep::new(1, 15, 1.0, 1.0, Spin::ZERO).is_err());
        assert!(GridRep::new(3, 64, 1.0, 1.0, Spin::ZERO).is_err());
        assert!(GridRep::new(1, 16, 1.0, -1.0, Spin::ZERO).is_err());
    }

    #[test]
    fn q_is_derivative_on_gaussian() {
        // Q = iħ d/dp; on exp(-p²/2s²) gives -iħ p/s² exp(-p²/2s²).
        let g = GridRep::new(1, 512, 12.0, 1.0, Spin::ZERO).unwrap();
        let s2 = 1.3f64;
        let mut v = g.zeros();
        for (j, p) in g.momenta().iter().enumerate() {
            v[j] = Complex64::new((-p * p / (2.0 * s2)).exp(), 0.0);
        }
        g.apply_q(0, &mut v);
        let mut err = 0.0f64;
        for (j, p) in g.momenta().iter().enumerate() {
            let want = Complex64::new(0.0, -p / s2 * (-p * p / (2.0 * s2)).exp());
            err = err.max((v[j] - want).norm());
        }
        assert!(err < 1e-12, "{err}");
    }
}
