use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{norm, GridRep, State};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SectorChoice {
    Both,
    Positive,
    Negative,
}

/// A complex Gaussian wave packet in momentum space, independent of any grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianSpec {
    /// Momentum widths per axis.
    pub width: [f64; 3],
    /// Position offsets per axis, entering as the phase `exp(−ip·a/ħ)`.
    pub offset: [f64; 3],
    /// One amplitude per `(sector, spin)` block.
    pub amps: Vec<Complex64>,
}

impl GaussianSpec {
    /// Samples the packet on `grid` and normalizes it to unit norm.
    pub fn sample(&self, grid: &GridRep) -> State {
        let n = grid.grid_len();
        let mut profile = vec![Complex64::new(0.0, 0.0); n];
        for (g, v) in profile.iter_mut().enumerate() {
            let p = grid.momentum_at(g);
            let mut e = Complex64::new(0.0, 0.0);
            for axis in 0..grid.d {
                let s = self.width[axis];
                e += Complex64::new(-p[axis] * p[axis] / (2.0 * s * s), -p[axis] * self.offset[axis] / grid.hbar);
            }
            *v = e.exp();
        }
        let mut out = grid.zeros();
        for (b, amp) in self.amps.iter().enumerate().take(grid.blocks()) {
            for g in 0..n {
                out[b * n + g] = profile[g] * amp;
            }
        }
        let k = norm(&out);
        out.iter_mut().for_each(|z| *z /= k);
        out
    }
}

/// The momentum width that balances truncation at `±pmax` against
/// wrap-around in the position box: `σ² = 2 pmax²/(πN)`.
pub fn balanced_width(grid: &GridRep) -> f64 {
    (2.0 * grid.pmax * grid.pmax / (std::f64::consts::PI * grid.npts as f64)).sqrt()
}

/// `count` packet specs drawn from a seeded stream: widths within ±10% of
/// `width` (default [`balanced_width`]), offsets within a tenth of the
/// position width, random complex block amplitudes.
pub fn gaussian_specs(
    seed: u64,
    count: usize,
    grid: &GridRep,
    width: Option<f64>,
    sectors: SectorChoice,
) -> Vec<GaussianSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w0 = width.unwrap_or_else(|| balanced_width(grid));
    let dim = grid.spin_dim();
    (0..count)
        .map(|_| {
            let width = [0; 3].map(|_| w0 * rng.random_range(0.9..1.1));
            let offset = [0; 3].map(|_| rng.random_range(-0.1..0.1) * grid.hbar / w0);
            let amps = (0..2 * dim)
                .map(|b| {
                    let on = match sectors {
                        SectorChoice::Both => true,
                        SectorChoice::Positive => b < dim,
                        SectorChoice::Negative => b >= dim,
                    };
                    if on {
                        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect();
            GaussianSpec { width, offset, amps }
        })
        .collect()
}

/// Sampled, normalized test states; see [`gaussian_specs`].
pub fn gaussian_family(
    seed: u64,
    count: usize,
    grid: &GridRep,
    width: Option<f64>,
    sectors: SectorChoice,
) -> Vec<State> {
    gaussian_specs(seed, count, grid, width, sectors)
        .iter()
        .map(|s| s.sample(grid))
        .collect()
}

/// Relative norm of the part of `psi` within `min(10, N/8)` cells of the
/// momentum box edge on any axis.
pub fn edge_weight(psi: &[Complex64], grid: &GridRep) -> f64 {
    let w = (grid.npts / 8).clamp(1, 10);
    let n = grid.grid_len();
    let mut edge = 0.0;
    for (idx, z) in psi.iter().enumerate() {
        let ix = grid.unravel(idx % n);
        let near = (0..grid.d).any(|a| ix[a] < w || ix[a] >= grid.npts - w);
        if near {
            edge += z.norm_sqr();
        }
    }
    (edge / psi.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Spin;

    #[test]
    fn states_are_normalized_and_seeded() {
        let g = GridRep::new(3, 8, 2.0, 1.0, Spin::HALF).unwrap();
        let a = gaussian_family(11, 3, &g, None, SectorChoice::Negative);
        let b = gaussian_family(11, 3, &g, None, SectorChoice::Negative);
        assert_eq!(a, b);
        for psi in &a {
            assert!((norm(psi) - 1.0).abs() < 1e-12);
            assert!(psi[..2 * g.grid_len()].iter().all(|z| z.norm() == 0.0));
        }
    }

    #[test]
    fn balanced_states_respect_band_limit() {
        let g = GridRep::new(3, 32, 1.1, 1.0, Spin::ZERO).unwrap();
        for psi in gaussian_family(1, 4, &g, None, SectorChoice::Both) {
            assert!(edge_weight(&psi, &g) < crate::tolerances::BAND_LIMIT);
        }
    }
}
