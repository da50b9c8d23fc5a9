#![allow(clippy::needless_range_loop)]

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use proptest::prelude::*;
use rotorlab::operators::radial_problem;
use rotorlab::spectral::*;
use rotorlab::{ManifoldSpec, PotentialSpec, RotorParams, Signature};

fn solve(spec: &ManifoldSpec, rotor: &RotorParams, m: i64, s: i64, v: &PotentialSpec, n: usize, k: usize) -> SpectrumResult {
    let grid = Grid::for_domain(spec.theta_domain(), Some(n), Some(8.0)).unwrap();
    solve_spectrum(spec, rotor, m, s, v, &grid, k, NormConvention::UnitVolume).unwrap()
}

fn sphere() -> ManifoldSpec {
    ManifoldSpec::sphere(1.0).unwrap()
}

/// Independent dense oracle: the unsymmetrized three-point stencil of
/// `-(h f')'/h + q f` on the same cell-centred nodes, diagonalized as a
/// general matrix.
fn dense_stencil_eigenvalues(spec: &ManifoldSpec, rotor: &RotorParams, m: i64, s: i64, n: usize) -> Vec<f64> {
    let problem = radial_problem(spec, rotor, m, s, &PotentialSpec::Zero).unwrap();
    let d = PI / n as f64;
    let h = |t: f64| t.sin();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let t = (i as f64 + 0.5) * d;
        let (left, right) = (if i == 0 { 0.0 } else { h(t - 0.5 * d) }, if i == n - 1 { 0.0 } else { h(t + 0.5 * d) });
        a[(i, i)] = (left + right) / (h(t) * d * d) + problem.q(t);
        if i > 0 {
            a[(i, i - 1)] = -left / (h(t) * d * d);
        }
        if i + 1 < n {
            a[(i, i + 1)] = -right / (h(t) * d * d);
        }
    }
    let mut values: Vec<f64> = a.complex_eigenvalues().iter().map(|z| z.re).collect();
    values.sort_by(f64::total_cmp);
    values
}

#[test]
fn legendre_spectrum() {
    let rotor = RotorParams::standard(1.0, 1.0).unwrap();
    let r = solve(&sphere(), &rotor, 0, 0, &PotentialSpec::Zero, 2000, 6);
    let exact = [0.0, 2.0, 6.0, 12.0, 20.0, 30.0];
    assert!(r.eigenvalues_dimensionless[0].abs() < 1e-4);
    for j in 1..6 {
        let e = r.eigenvalues_dimensionless[j];
        assert!((e - exact[j]).abs() / exact[j] < 1e-4, "j = {j}: {e}");
    }
    let dense = dense_stencil_eigenvalues(&sphere(), &rotor, 0, 0, 300);
    let coarse = solve(&sphere(), &rotor, 0, 0, &PotentialSpec::Zero, 300, 6);
    for (a, b) in dense.iter().zip(&coarse.eigenvalues_dimensionless) {
        assert!((a - b).abs() <= 1e-8 * (1.0 + b.abs()), "{a} vs {b}");
    }
}

#[test]
fn symmetric_top_spectrum_and_richardson() {
    // MR²/I = 2
    let rotor = RotorParams::standard(1.0, 0.5).unwrap();
    let exact = |k: usize| {
        let j = (k + 1) as f64;
        j * (j + 1.0) - 1.0 + 2.0
    };
    let levels: Vec<Vec<f64>> = [500, 1000, 2000]
        .iter()
        .map(|&n| solve(&sphere(), &rotor, 1, 1, &PotentialSpec::Zero, n, 5).eigenvalues_dimensionless)
        .collect();
    for k in 0..5 {
        assert!((levels[2][k] - exact(k)).abs() / exact(k) < 1e-4);
        let ratio = (levels[0][k] - levels[1][k]) / (levels[1][k] - levels[2][k]);
        assert!((3.5..=4.5).contains(&ratio), "k = {k}: ratio {ratio}");
    }
    let dense = dense_stencil_eigenvalues(&sphere(), &rotor, 1, 1, 300);
    let coarse = solve(&sphere(), &rotor, 1, 1, &PotentialSpec::Zero, 300, 5);
    for (a, b) in dense.iter().zip(&coarse.eigenvalues_dimensionless) {
        assert!((a - b).abs() <= 1e-8 * b.abs(), "{a} vs {b}");
    }
}

#[test]
fn richardson_ratio_for_every_geometry() {
    let rotor = RotorParams::standard(1.0, 0.5).unwrap();
    let cases = [
        (sphere(), PotentialSpec::CosineWell { v0: 2.0 }, 1i64, 0i64),
        (ManifoldSpec::pseudosphere(1.0).unwrap(), PotentialSpec::Harmonic { v0: 4.0 }, 0, 1),
        (ManifoldSpec::torus(3.0, 1.0).unwrap(), PotentialSpec::CosineWell { v0: 1.0 }, 1, 1),
    ];
    for (spec, v, m, s) in &cases {
        let levels: Vec<Vec<f64>> = [400, 800, 1600]
            .iter()
            .map(|&n| solve(spec, &rotor, *m, *s, v, n, 5).eigenvalues_dimensionless)
            .collect();
        for k in 0..5 {
            let ratio = (levels[0][k] - levels[1][k]) / (levels[1][k] - levels[2][k]);
            assert!((3.5..=4.5).contains(&ratio), "{:?} k = {k}: ratio {ratio}", spec.kind());
        }
    }
}

#[test]
fn torus_constant_mode() {
    let rotor = RotorParams::standard(1.0, 2.0).unwrap();
    let torus = ManifoldSpec::torus(3.0, 1.0).unwrap();
    let r = solve(&torus, &rotor, 0, 0, &PotentialSpec::Zero, 1024, 3);
    assert!(r.eigenvalues_dimensionless[0].abs() < 1e-8);
    let f = &r.eigenfunctions[0];
    let spread = f.iter().fold(0.0f64, |m, x| m.max((x - f[0]).abs()));
    assert!(spread < 1e-8 * f[0].abs());
    // ∫ f² h dθ = 1 with ∫ h = 2πL
    assert!((f[0].abs() - 1.0 / (2.0 * PI * 3.0f64).sqrt()).abs() < 1e-8);
}

#[test]
fn pole_regularity() {
    let rotor = RotorParams::standard(1.0, 0.5).unwrap();
    for (m, s) in [(2, 0), (0, -2), (3, 1)] {
        let r = solve(&sphere(), &rotor, m, s, &PotentialSpec::Zero, 2000, 1);
        let f = &r.eigenfunctions[0];
        let peak = f.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let t0 = r.nodes[0];
        assert!(f[0].abs() / peak <= 2.0 * t0 * t0, "(m, s) = ({m}, {s})");
    }
}

#[test]
fn eigenfunctions_are_weight_orthonormal() {
    let rotor = RotorParams::new(1.0, 0.5, 1.0, Signature::Negative).unwrap();
    let pseudo = ManifoldSpec::pseudosphere(1.0).unwrap();
    let v = PotentialSpec::CosineWell { v0: 3.0 };
    let r = solve(&pseudo, &rotor, 1, 2, &v, 800, 6);
    for i in 0..6 {
        for j in 0..=i {
            let inner = r.weighted_inner(i, j, |t| t.sinh());
            let target = if i == j { 1.0 } else { 0.0 };
            assert!((inner - target).abs() <= 1e-8);
        }
    }
    assert!(r.eigenvalues_dimensionless.windows(2).all(|w| w[0] <= w[1]));
    assert!(r.eigenvalues_dimensionless.iter().all(|e| e.is_finite()));
}

#[test]
fn negative_signature_resonance_uses_the_collapsed_coefficient() {
    let rotor = RotorParams::new(1.0, 1.0, 1.0, Signature::Negative).unwrap();
    let pseudo = ManifoldSpec::pseudosphere(1.0).unwrap();
    let p = radial_problem(&pseudo, &rotor, 0, 1, &PotentialSpec::Zero).unwrap();
    for t in [0.3f64, 1.0, 2.0] {
        // s² a_ss R² with a_ss = 1/(R² sh²θ)
        let expected = 1.0 / t.sinh().powi(2);
        assert!((p.q(t) - expected).abs() <= 1e-12 * (1.0 + t.cosh().powi(2) / t.sinh().powi(2)));
    }
}

#[test]
fn ground_state_bounded_by_potential_minimum() {
    let rotor = RotorParams::standard(1.0, 0.5).unwrap();
    let v = PotentialSpec::CosineWell { v0: 5.0 };
    let r = solve(&sphere(), &rotor, 0, 0, &v, 400, 1);
    assert!(r.eigenvalues_dimensionless[0] >= -1e-9);
    assert!(r.eigenvalues_dimensionless[0] > 0.0);
}

#[test]
fn normalizations_differ_by_a_constant() {
    let rotor = RotorParams::standard(1.0, 0.5).unwrap();
    for spec in [sphere(), ManifoldSpec::torus(3.0, 1.0).unwrap(), ManifoldSpec::pseudosphere(1.0).unwrap()] {
        let grid = Grid::for_domain(spec.theta_domain(), Some(200), Some(6.0)).unwrap();
        let v = PotentialSpec::Harmonic { v0: 1.0 };
        let a = solve_spectrum(&spec, &rotor, 1, 0, &v, &grid, 3, NormConvention::UnitVolume).unwrap();
        let b = solve_spectrum(&spec, &rotor, 1, 0, &v, &grid, 3, NormConvention::GeometricVolume).unwrap();
        assert_eq!(a.eigenvalues_dimensionless, b.eigenvalues_dimensionless);
        assert_eq!(a.eigenfunctions, b.eigenfunctions);
        assert!(a.normalization_factor > 0.0 && b.normalization_factor > 0.0);
    }
    // on a unit-volume configuration space the normalized constant state is |Ψ| = 1
    let rotor = RotorParams::standard(1.0, 1.0).unwrap();
    for spec in [sphere(), ManifoldSpec::torus(3.0, 1.0).unwrap()] {
        let grid = Grid::for_domain(spec.theta_domain(), Some(400), None).unwrap();
        let r = solve_spectrum(&spec, &rotor, 0, 0, &PotentialSpec::Zero, &grid, 1, NormConvention::UnitVolume).unwrap();
        for f in &r.eigenfunctions[0] {
            // the grid sum of h differs from its integral by O(δ²)
            assert!(((f * r.normalization_factor).abs() - 1.0).abs() < 1e-5, "{:?}", spec.kind());
        }
    }
}

#[test]
fn pseudosphere_flags() {
    let rotor = RotorParams::standard(1.0, 0.5).unwrap();
    let pseudo = ManifoldSpec::pseudosphere(1.0).unwrap();
    let free = solve(&pseudo, &rotor, 0, 0, &PotentialSpec::Zero, 400, 2);
    assert!(free.scattering);
    assert!(!free.warnings.is_empty());
    let well = solve(&pseudo, &rotor, 0, 0, &PotentialSpec::Harmonic { v0: 20.0 }, 400, 2);
    assert!(!well.scattering);
    assert!(well.warnings.is_empty());
}

#[test]
fn sphere_resonance_scan_degeneracy() {
    let rotor = RotorParams::standard(1.0, 1.0).unwrap();
    let grid = Grid::for_domain(sphere().theta_domain(), Some(1000), None).unwrap();
    let table = spectrum_scan(&sphere(), &rotor, -1..=1, -1..=1, &PotentialSpec::Zero, &grid, 4, NormConvention::UnitVolume, Some(3)).unwrap();
    assert_eq!(table.len(), 9);
    // level j(j+1) appears in cell (m, s) iff j >= max(|m|, |s|)
    for ((m, s), cell) in &table.cells {
        let r = cell.as_ref().unwrap();
        let j0 = m.abs().max(s.abs()) as usize;
        for (k, e) in r.eigenvalues_dimensionless.iter().enumerate() {
            let j = (j0 + k) as f64;
            assert!((e - j * (j + 1.0)).abs() < 1e-3 * (1.0 + j * j), "({m}, {s}) level {k}: {e}");
        }
    }
    let mut multiplicity: BTreeMap<i64, usize> = BTreeMap::new();
    for cell in table.cells.values() {
        for e in &cell.as_ref().unwrap().eigenvalues_dimensionless {
            *multiplicity.entry(e.round() as i64).or_default() += 1;
        }
    }
    assert_eq!(multiplicity[&0], 1);
    assert_eq!(multiplicity[&2], 9);
}

#[test]
fn scan_is_deterministic_and_matches_single_solves() {
    let rotor = RotorParams::standard(1.0, 0.5).unwrap();
    let grid = Grid::for_domain(sphere().theta_domain(), Some(200), None).unwrap();
    let v = PotentialSpec::CosineWell { v0: 1.0 };
    let one = spectrum_scan(&sphere(), &rotor, -2..=2, -1..=1, &v, &grid, 3, NormConvention::UnitVolume, Some(1)).unwrap();
    let many = spectrum_scan(&sphere(), &rotor, -2..=2, -1..=1, &v, &grid, 3, NormConvention::UnitVolume, Some(4)).unwrap();
    for (key, a) in &one.cells {
        let b = many.get(key.0, key.1).unwrap().as_ref().unwrap();
        let a = a.as_ref().unwrap();
        assert_eq!(a, b);
        let single = solve_spectrum(&sphere(), &rotor, key.0, key.1, &v, &grid, 3, NormConvention::UnitVolume).unwrap();
        assert_eq!(a, &single);
        let mirror = one.get(-key.0, -key.1).unwrap().as_ref().unwrap();
        assert_eq!(a.eigenvalues_dimensionless, mirror.eigenvalues_dimensionless);
    }
}

#[test]
fn scan_keeps_per_cell_errors() {
    let rotor = RotorParams::standard(1.0, 0.5).unwrap();
    let grid = Grid::for_domain(sphere().theta_domain(), Some(16), None).unwrap();
    let table = spectrum_scan(&sphere(), &rotor, 0..=1, 0..=0, &PotentialSpec::Zero, &grid, 17, NormConvention::UnitVolume, None).unwrap();
    assert_eq!(table.len(), 2);
    assert!(table.cells.values().all(|c| c.is_err()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mirrored_quantum_numbers_share_a_spectrum(m in -3i64..=3, s in -3i64..=3, ratio in 0.3f64..3.0) {
        let rotor = RotorParams::standard(1.0, ratio).unwrap();
        let a = solve(&sphere(), &rotor, m, s, &PotentialSpec::CosineWell { v0: 0.5 }, 100, 3);
        let b = solve(&sphere(), &rotor, -m, -s, &PotentialSpec::CosineWell { v0: 0.5 }, 100, 3);
        prop_assert_eq!(a.eigenvalues_dimensionless, b.eigenvalues_dimensionless);
    }

    #[test]
    fn eigenvalues_ascend_and_are_orthonormal(m in -2i64..=2, s in -2i64..=2, v0 in -2.0f64..4.0) {
        let rotor = RotorParams::standard(1.0, 0.8).unwrap();
        let torus = ManifoldSpec::torus(2.5, 1.0).unwrap();
        let r = solve(&torus, &rotor, m, s, &PotentialSpec::CosineWell { v0 }, 128, 4);
        prop_assert!(r.eigenvalues_dimensionless.windows(2).all(|w| w[0] <= w[1]));
        for i in 0..4 {
            let n = r.weighted_inner(i, i, |t| 2.5 + t.cos());
            prop_assert!((n - 1.0).abs() <= 1e-8);
        }
    }
}
