//! Grid realizations against closed forms computed here, independent of the
//! FFT machinery, plus frozen outputs of the localization demo.

use num_complex::Complex64;
use qps_core::numrep::{gaussian_family, inner, norm, nw_evolution, NwParams, SectorChoice};
use qps_core::{parse_expr, realize, realize_tree, GridRep, Spin};
use qps_core::algebra::parse_tree;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn rel(a: &[Complex64], b: &[Complex64]) -> f64 {
    let d: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm(&d) / norm(b).max(1e-300)
}

fn line(spin: Spin) -> GridRep {
    GridRep::new(1, 256, 10.0, 1.3, spin).unwrap()
}

fn packet(grid: &GridRep) -> Vec<Complex64> {
    gaussian_family(5, 1, grid, Some(1.2), SectorChoice::Both).remove(0)
}

/// Multiplies every block by `f(p)`.
fn pointwise(grid: &GridRep, psi: &[Complex64], f: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
    let n = grid.grid_len();
    psi.iter().enumerate().map(|(i, z)| z * f(grid.momenta()[i % n])).collect()
}

#[test]
fn position_commutator_with_omega_is_velocity() {
    let g = line(Spin::ZERO);
    let psi = packet(&g);
    let m = g.mass;
    let got = realize_tree(&parse_tree("Q1*omega - omega*Q1", None).unwrap(), &g).unwrap().apply(&psi);
    let want = pointwise(&g, &psi, |p| I * p / (p * p + m * m).sqrt());
    assert!(rel(&got, &want) < 1e-10, "{}", rel(&got, &want));
}

#[test]
fn position_is_a_derivative_in_momentum() {
    // Q = iħ d/dp on ψ(p) = exp(−p²/2w² − ipa).
    let g = line(Spin::ZERO);
    let (w, a) = (1.1, 0.4);
    let psi: Vec<Complex64> = (0..2)
        .flat_map(|_| g.momenta().iter().map(move |p| Complex64::new(-p * p / (2.0 * w * w), -p * a).exp()))
        .collect();
    let got = realize(&parse_expr("Q1").unwrap(), &g).unwrap().apply(&psi);
    let want = pointwise(&g, &psi, |p| I * Complex64::new(-p / (w * w), -a));
    assert!(rel(&got, &want) < 1e-10, "{}", rel(&got, &want));
}

#[test]
fn heisenberg_relation_on_the_line() {
    let g = line(Spin::ZERO);
    let psi = packet(&g);
    let got = realize_tree(&parse_tree("Q1*P1 - P1*Q1", None).unwrap(), &g).unwrap().apply(&psi);
    let want: Vec<Complex64> = psi.iter().map(|z| I * z).collect();
    assert!(rel(&got, &want) < 1e-10);
}

#[test]
fn spin_half_blocks_follow_pauli_matrices() {
    let g = line(Spin::HALF);
    let n = g.grid_len();
    let psi = packet(&g);
    // Block order is (sector, m) with m = +1/2 first.
    let mut s1 = psi.clone();
    let mut s3 = psi.clone();
    for sector in 0..2 {
        let (up, down) = (2 * sector * n, (2 * sector + 1) * n);
        for k in 0..n {
            s1[up + k] = psi[down + k] / 2.0;
            s1[down + k] = psi[up + k] / 2.0;
            s3[up + k] = psi[up + k] / 2.0;
            s3[down + k] = -psi[down + k] / 2.0;
        }
    }
    for (text, want) in [("S1", s1), ("S3", s3)] {
        let got = realize(&parse_expr(text).unwrap(), &g).unwrap().apply(&psi);
        assert!(rel(&got, &want) < 1e-14, "{text}");
    }
}

#[test]
fn sector_sign_multiplies_energy() {
    let g = line(Spin::ZERO);
    let n = g.grid_len();
    let psi = packet(&g);
    let m = g.mass;
    let got = realize(&parse_expr("Lam*omega").unwrap(), &g).unwrap().apply(&psi);
    let want: Vec<Complex64> = psi
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let p = g.momenta()[i % n];
            let sign = if i < n { 1.0 } else { -1.0 };
            z * sign * (p * p + m * m).sqrt()
        })
        .collect();
    assert!(rel(&got, &want) < 1e-14);
}

#[test]
fn realized_generators_are_symmetric() {
    let g = GridRep::new(3, 16, 1.1, 1.0, Spin::HALF).unwrap();
    let states = gaussian_family(2, 2, &g, None, SectorChoice::Both);
    let (a, b) = (&states[0], &states[1]);
    for text in ["Lam*omega", "Q1*P2 - Q2*P1 + S3", "P1*Q2*S3"] {
        let op = realize(&parse_expr(text).unwrap(), &g).unwrap();
        let lhs = inner(a, &op.apply(b));
        let rhs = inner(&op.apply_adjoint(a), b);
        assert!((lhs - rhs).norm() < 1e-12, "{text}");
    }
}

/// `|φ(x, t)|²` by direct quadrature of the continuum Fourier integral.
fn direct_density(p: &NwParams, x: f64) -> f64 {
    let n = 20_000;
    let pmax = 12.0 / p.sigma;
    let h = 2.0 * pmax / n as f64;
    let norm = (std::f64::consts::PI.sqrt() / p.sigma).sqrt();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..=n {
        let k = -pmax + j as f64 * h;
        let w = if j == 0 || j == n { 0.5 } else { 1.0 };
        let omega = (k * k + p.mass * p.mass).sqrt();
        let amp = (-k * k * p.sigma * p.sigma / 2.0).exp() / norm;
        acc += w * amp * Complex64::from_polar(1.0, k * (x - p.y) - omega * p.t);
    }
    (acc * h).norm_sqr() / (2.0 * std::f64::consts::PI)
}

#[test]
fn evolved_density_matches_direct_quadrature() {
    let p = NwParams {
        t: 2.0,
        frames: 2,
        ..NwParams::default()
    };
    let evo = nw_evolution(&p).unwrap();
    let last = evo.density.last().unwrap();
    let peak = last.iter().cloned().fold(0.0, f64::max);
    for k in (0..evo.x.len()).step_by(7) {
        let x = evo.x[k];
        if x.abs() > 6.0 {
            continue;
        }
        let want = direct_density(&p, x);
        assert!((last[k] - want).abs() < 1e-8 * peak, "x = {x}: {} vs {want}", last[k]);
    }
}

#[test]
fn localization_demo_is_frozen() {
    // Values recorded at σ = 0.1, N = 4096, t = 5.
    let frozen = [
        (0.5, 1.640066701901e-2, -1.492716185852),
        (1.0, 3.803252492078e-3, -3.235135241582),
        (2.0, 2.340737482730e-4, -7.622105859950),
    ];
    let mut prev = f64::INFINITY;
    for (m, outside, slope) in frozen {
        let evo = nw_evolution(&NwParams {
            mass: m,
            t: 5.0,
            ..NwParams::default()
        })
        .unwrap();
        let got = evo.outside_cone_probability();
        assert!((got / outside - 1.0).abs() < 1e-8, "m = {m}: {got}");
        assert!((evo.fitted_slope - slope).abs() < 1e-8, "m = {m}: {}", evo.fitted_slope);
        assert!(evo.max_norm_drift < qps_core::tolerances::UNITARITY);
        assert!(got < prev);
        prev = got;
    }
}
