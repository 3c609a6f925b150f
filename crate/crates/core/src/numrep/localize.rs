use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{norm, GridRep, NumError, State};
use crate::algebra::Spin;

/// Free evolution of a Newton–Wigner localized packet in one dimension.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NwParams {
    pub mass: f64,
    /// Position width of the initial packet.
    pub sigma: f64,
    /// Initial centre.
    pub y: f64,
    /// Final time; frames are spread evenly over `[0, t]`.
    pub t: f64,
    pub frames: usize,
    pub npts: usize,
    /// Momentum half-width; defaults to `10ħ/σ`.
    pub pmax: Option<f64>,
    pub hbar: f64,
}

impl Default for NwParams {
    fn default() -> Self {
        NwParams {
            mass: 1.0,
            sigma: 0.1,
            y: 0.0,
            t: 1.0,
            frames: 20,
            npts: 4096,
            pmax: None,
            hbar: 1.0,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NwEvolution {
    pub params: NwParams,
    pub x: Vec<f64>,
    pub times: Vec<f64>,
    /// `density[frame][k]` is `|φ(x_k, t_frame)|²`.
    pub density: Vec<Vec<f64>>,
    /// Probability beyond `|x − y| > ct + 3σ`, per frame.
    pub outside_cone: Vec<f64>,
    /// Least-squares slope of `ln density` against the distance past the
    /// light cone, over `[2/m, 4/m]` at the final time.
    pub fitted_slope: f64,
    pub max_norm_drift: f64,
}

#[derive(Serialize)]
struct NwSummary<'a> {
    outside_cone_probability: f64,
    fitted_slope: f64,
    max_norm_drift: f64,
    params: &'a NwParams,
}

impl NwEvolution {
    pub fn outside_cone_probability(&self) -> f64 {
        *self.outside_cone.last().unwrap_or(&0.0)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,t,density\n");
        for (t, row) in self.times.iter().zip(&self.density) {
            for (x, d) in self.x.iter().zip(row) {
                out.push_str(&format!("{x},{t},{d:e}\n"));
            }
        }
        out
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&NwSummary {
            outside_cone_probability: self.outside_cone_probability(),
            fitted_slope: self.fitted_slope,
            max_norm_drift: self.max_norm_drift,
            params: &self.params,
        })
        .expect("summary serializes")
    }
}

/// Speed of light in the units where `ω = sqrt(p² + m²)`.
const C: f64 = 1.0;

/// Fraction of the box at each end that must stay empty.
const EDGE_FRACTION: f64 = 0.05;
const EDGE_MASS: f64 = 1e-10;

fn slope_fit(points: &[(f64, f64)]) -> f64 {
    if points.len() < 3 {
        return f64::NAN;
    }
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    num / den
}

pub fn nw_evolution(params: &NwParams) -> Result<NwEvolution, NumError> {
    let p = params;
    if !(p.sigma > 0.0 && p.t >= 0.0 && p.frames >= 1) {
        return Err(NumError::Config("need sigma > 0, t >= 0 and at least one frame".into()));
    }
    let pmax = p.pmax.unwrap_or(10.0 * p.hbar / p.sigma);
    let grid = GridRep::with_hbar(1, p.npts, pmax, p.mass, Spin::ZERO, p.hbar)?;
    if grid.dx() > p.sigma {
        return Err(NumError::Config(format!(
            "cell size {:.3e} exceeds sigma; raise npts or pmax",
            grid.dx()
        )));
    }
    let half = grid.box_len() / 2.0;
    let reach = p.y.abs() + C * p.t + 5.0 * p.sigma + 10.0 / p.mass;
    if reach > half * (1.0 - EDGE_FRACTION) {
        return Err(NumError::WrapAround(format!(
            "packet reaches {reach:.3} but the box half-width is {half:.3}"
        )));
    }
    let momenta = grid.momenta().to_vec();
    let mut psi0: State = momenta
        .iter()
        .map(|k| Complex64::new(-k * k * p.sigma * p.sigma / (2.0 * p.hbar * p.hbar), -k * p.y / p.hbar).exp())
        .collect();
    let k0 = norm(&psi0) * grid.dp().sqrt();
    psi0.iter_mut().for_each(|z| *z /= k0);

    let x = grid.positions().to_vec();
    let edge = (EDGE_FRACTION * p.npts as f64).ceil() as usize;
    let times: Vec<f64> = (0..=p.frames).map(|k| p.t * k as f64 / p.frames as f64).collect();
    let mut density = Vec::with_capacity(times.len());
    let mut outside = Vec::with_capacity(times.len());
    let mut drift = 0.0f64;
    for &t in &times {
        let evolved: State = psi0
            .iter()
            .zip(&momenta)
            .map(|(z, k)| {
                let w = (k * k + p.mass * p.mass).sqrt();
                z * Complex64::from_polar(1.0, -w * t / p.hbar)
            })
            .collect();
        let rho: Vec<f64> = grid.to_position_1d(&evolved).iter().map(|z| z.norm_sqr()).collect();
        let total: f64 = rho.iter().sum::<f64>() * grid.dx();
        drift = drift.max((total - 1.0).abs());
        let tail: f64 = rho[..edge].iter().chain(&rho[p.npts - edge..]).sum::<f64>() * grid.dx();
        if tail > EDGE_MASS {
            return Err(NumError::WrapAround(format!("probability {tail:.1e} at the box edge at t = {t}")));
        }
        let cone = C * t + 3.0 * p.sigma;
        outside.push(
            x.iter()
                .zip(&rho)
                .filter(|(xk, _)| (*xk - p.y).abs() > cone)
                .map(|(_, r)| r)
                .sum::<f64>()
                * grid.dx(),
        );
        density.push(rho);
    }

    let last = density.last().expect("at least one frame");
    let points: Vec<(f64, f64)> = x
        .iter()
        .zip(last)
        .filter_map(|(xk, r)| {
            let dist = (xk - p.y).abs() - C * p.t;
            (dist >= 2.0 / p.mass && dist <= 4.0 / p.mass && *r > 0.0).then(|| (dist, r.ln()))
        })
        .collect();
    Ok(NwEvolution {
        params: p.clone(),
        x,
        times,
        density,
        outside_cone: outside,
        fitted_slope: slope_fit(&points),
        max_norm_drift: drift,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    fn contains(&self, x: f64) -> bool {
        x >= self.lo && x < self.hi
    }

    /// Distance between two intervals; zero when they overlap.
    pub fn gap(&self, other: &Interval) -> f64 {
        (other.lo - self.hi).max(self.lo - other.hi).max(0.0)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CausalityResult {
    /// Estimate of `‖[P_R(t), P_R′(t′)]‖`.
    pub norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// True when the regions are spacelike separated.
    pub spacelike: bool,
}

const MAX_ITERS: usize = 2000;
const ROUNDOFF_NORM: f64 = 1e-14;

/// `U(t)† χ_R U(t)` on the positive-energy sector of a 1D grid.
fn nw_projector(grid: &GridRep, r: &Interval, t: f64, psi: &[Complex64]) -> State {
    let phase: Vec<Complex64> = grid
        .momenta()
        .iter()
        .map(|k| Complex64::from_polar(1.0, -(k * k + grid.mass * grid.mass).sqrt() * t / grid.hbar))
        .collect();
    let u: State = psi.iter().zip(&phase).map(|(z, ph)| z * ph).collect();
    let mut phi = grid.to_position_1d(&u);
    for (z, x) in phi.iter_mut().zip(grid.positions()) {
        if !r.contains(*x) {
            *z = Complex64::new(0.0, 0.0);
        }
    }
    grid.to_momentum_1d(&phi)
        .iter()
        .zip(&phase)
        .map(|(z, ph)| z * ph.conj())
        .collect()
}

/// Largest singular value of `[P_R(t_r), P_R′(t_r′)]` for Newton–Wigner
/// position projectors, by power iteration on `C†C` from a seeded start.
pub fn microcausality_check(
    r: Interval,
    t_r: f64,
    r2: Interval,
    t_r2: f64,
    grid: &GridRep,
    seed: u64,
) -> Result<CausalityResult, NumError> {
    if grid.d != 1 {
        return Err(NumError::Config("projector commutators use a 1D grid".into()));
    }
    let half = grid.box_len() / 2.0;
    for iv in [&r, &r2] {
        if !(iv.lo < iv.hi) || iv.lo < -half || iv.hi > half {
            return Err(NumError::Config(format!(
                "interval [{}, {}] must be nonempty and inside the box [-{half:.3}, {half:.3}]",
                iv.lo, iv.hi
            )));
        }
    }
    let comm = |v: &[Complex64]| -> State {
        let ab = nw_projector(grid, &r, t_r, &nw_projector(grid, &r2, t_r2, v));
        let ba = nw_projector(grid, &r2, t_r2, &nw_projector(grid, &r, t_r, v));
        ab.iter().zip(&ba).map(|(a, b)| a - b).collect()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: State = (0..grid.npts)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let k = norm(&v);
    v.iter_mut().for_each(|z| *z /= k);
    let mut estimate = 0.0;
    let mut converged = false;
    let mut iterations = 0;
    for it in 1..=MAX_ITERS {
        iterations = it;
        let w = comm(&v);
        let next = norm(&w);
        // C is anti-Hermitian, so C†C v = −C(Cv).
        let u = comm(&w);
        let nu = norm(&u);
        let change = (next - estimate).abs();
        estimate = next;
        if nu == 0.0 {
            converged = true;
            break;
        }
        v = u.iter().map(|z| -z / nu).collect();
        // A commutator at roundoff has no dominant direction to converge to.
        if it > 10 && (change <= 1e-12 * estimate || estimate <= ROUNDOFF_NORM) {
            converged = true;
            break;
        }
    }
    Ok(CausalityResult {
        norm: estimate,
        iterations,
        converged,
        spacelike: r.gap(&r2) > C * (t_r - t_r2).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_exact_line() {
        let pts: Vec<(f64, f64)> = (0..5).map(|k| (k as f64, 1.0 - 2.0 * k as f64)).collect();
        assert!((slope_fit(&pts) + 2.0).abs() < 1e-12);
        assert!(slope_fit(&pts[..2]).is_nan());
    }

    #[test]
    fn small_box_is_refused() {
        let p = NwParams {
            npts: 256,
            t: 50.0,
            ..NwParams::default()
        };
        assert!(matches!(nw_evolution(&p), Err(NumError::WrapAround(_))));
    }

    #[test]
    fn interval_gap() {
        let a = Interval::new(-2.0, -0.5);
        assert_eq!(a.gap(&Interval::new(1.5, 3.0)), 2.0);
        assert_eq!(a.gap(&Interval::new(-1.0, 3.0)), 0.0);
    }
}
