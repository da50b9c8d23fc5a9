use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use proptest::prelude::*;
use rotorlab::classical::kinetic_energy;
use rotorlab::groups::*;
use rotorlab::{ManifoldSpec, RotorParams, Signature};

const M: f64 = 1.3;
const I: f64 = 0.7;
const R: f64 = 1.7;

fn energy(g: &Matrix3<f64>, dg: &Matrix3<f64>, flavor: Flavor, inertia: [f64; 3]) -> f64 {
    let v = velocity_from_path(g, dg, flavor);
    kinetic_energy_group(&v, inertia[0], inertia[1], inertia[2])
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

fn angles() -> impl Strategy<Value = EulerAngles> {
    (-PI..PI, 0.05..PI - 0.05, -PI..PI).prop_map(|(a, b, c)| EulerAngles::new(a, b, c))
}

fn hyperbolic_angles() -> impl Strategy<Value = EulerAngles> {
    (-PI..PI, 0.05f64..2.0, -PI..PI).prop_map(|(a, b, c)| EulerAngles::new(a, b, c))
}

fn rates() -> impl Strategy<Value = BodyRates> {
    (-2.0..2.0, -2.0..2.0, -2.0..2.0).prop_map(|(a, b, c)| BodyRates::new(a, b, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn left_translations_preserve_the_top(x in angles(), w in rates(), a in angles()) {
        let top = top_inertia(M, R, I);
        let (u, du) = (euler_matrix(&x), euler_matrix_rate(&x, &w));
        let a = euler_matrix(&a);
        let t0 = energy(&u, &du, Flavor::Rotational, top);
        prop_assert!(rel(energy(&(a * u), &(a * du), Flavor::Rotational, top), t0) <= 1e-12);
    }

    #[test]
    fn right_z_rotations_preserve_the_top(x in angles(), w in rates(), alpha in -PI..PI) {
        let top = top_inertia(M, R, I);
        let (u, du) = (euler_matrix(&x), euler_matrix_rate(&x, &w));
        let z = rotation_z(alpha);
        let t0 = energy(&u, &du, Flavor::Rotational, top);
        prop_assert!(rel(energy(&(u * z), &(du * z), Flavor::Rotational, top), t0) <= 1e-12);
    }

    #[test]
    fn spherical_top_is_bi_invariant(x in angles(), w in rates(), a in angles(), b in angles()) {
        let iso = [I; 3];
        let (u, du) = (euler_matrix(&x), euler_matrix_rate(&x, &w));
        let (a, b) = (euler_matrix(&a), euler_matrix(&b));
        let t0 = energy(&u, &du, Flavor::Rotational, iso);
        prop_assert!(rel(energy(&(a * u * b), &(a * du * b), Flavor::Rotational, iso), t0) <= 1e-12);
    }

    #[test]
    fn lorentz_casimir_is_bi_invariant(x in hyperbolic_angles(), w in rates(), a in hyperbolic_angles(), b in hyperbolic_angles()) {
        let casimir = [I, I, -I];
        let (l, dl) = (lorentz_matrix(&x), lorentz_matrix_rate(&x, &w));
        let (a, b) = (lorentz_matrix(&a), lorentz_matrix(&b));
        let t0 = energy(&l, &dl, Flavor::Lorentzian, casimir);
        let t1 = energy(&(a * l * b), &(a * dl * b), Flavor::Lorentzian, casimir);
        prop_assert!((t1 - t0).abs() <= 1e-10 * t0.abs().max(1.0));
    }

    #[test]
    fn lorentz_top_is_left_invariant(x in hyperbolic_angles(), w in rates(), a in hyperbolic_angles()) {
        let top = top_inertia(M, R, I);
        let (l, dl) = (lorentz_matrix(&x), lorentz_matrix_rate(&x, &w));
        let a = lorentz_matrix(&a);
        let t0 = energy(&l, &dl, Flavor::Lorentzian, top);
        prop_assert!(rel(energy(&(a * l), &(a * dl), Flavor::Lorentzian, top), t0) <= 1e-10);
    }
}

/// Trace form: with `I1 = I2 = I`, `I3 = -I`, `T = (I/4) tr(λ̂²)`.
#[test]
fn casimir_is_the_trace_form() {
    let x = EulerAngles::new(0.3, 1.1, -0.8);
    let w = BodyRates::new(0.4, -1.2, 0.9);
    let v = co_moving_velocity(&x, &w, Flavor::Lorentzian);
    let lam = v.matrix();
    let trace = (lam * lam).trace();
    let t = kinetic_energy_group(&v, I, I, -I);
    assert!((t - 0.25 * I * trace).abs() <= 1e-13);
}

fn coordinate_and_group(spec: &ManifoldSpec, sig: Signature, flavor: Flavor, x: &EulerAngles, w: &BodyRates) -> (f64, f64, f64) {
    let rotor = RotorParams::new(M, I, 1.0, sig).unwrap();
    let t = kinetic_energy(spec, &rotor, x.theta, &Vector3::new(w.dtheta, w.dphi, w.dpsi)).unwrap();
    let inertia = top_inertia(M, R, sig.sign() * I);
    let v = co_moving_velocity(x, w, flavor);
    let scale = kinetic_energy_group(&v, inertia[0].abs(), inertia[1].abs(), inertia[2].abs());
    (t, kinetic_energy_group(&v, inertia[0], inertia[1], inertia[2]), scale)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sphere_coordinate_energy_is_the_top(x in angles(), w in rates()) {
        let spec = ManifoldSpec::sphere(R).unwrap();
        let (t, g, _) = coordinate_and_group(&spec, Signature::Positive, Flavor::Rotational, &x, &w);
        prop_assert!(rel(t, g) <= 1e-12);
    }

    #[test]
    fn pseudosphere_coordinate_energy_is_the_lorentz_top(x in hyperbolic_angles(), w in rates(), negative in any::<bool>()) {
        let spec = ManifoldSpec::pseudosphere(R).unwrap();
        let sig = if negative { Signature::Negative } else { Signature::Positive };
        let (t, g, scale) = coordinate_and_group(&spec, sig, Flavor::Lorentzian, &x, &w);
        prop_assert!((t - g).abs() <= 1e-12 * scale);
    }
}
