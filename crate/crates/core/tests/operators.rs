use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rotorlab::operators::{laplacian_coefficients, radial_problem, LaplacianCoefficients};
use rotorlab::quadrature::integrate;
use rotorlab::{ManifoldSpec, PotentialSpec, RotorParams, Signature};

const M: f64 = 1.3;
const I: f64 = 0.7;
const R: f64 = 1.7;
const L: f64 = 4.0;

/// The printed sphere operator with the elementary functions left abstract,
/// so the same text yields the pseudosphere by swapping in sh, ch, cth.
fn sphere_text(sin: f64, cos: f64, ctg: f64, inertia_sign: f64) -> [f64; 5] {
    let r2 = R * R;
    [
        1.0 / r2,
        ctg / r2,
        1.0 / (r2 * sin * sin),
        -2.0 * cos / (r2 * sin * sin),
        (inertia_sign * M * r2 * sin * sin + I * cos * cos) / (I * r2 * sin * sin),
    ]
}

fn torus_text(t: f64) -> [f64; 5] {
    let (s, c) = t.sin_cos();
    let d = L + R * c;
    [1.0 / (R * R), -s / (R * d), 1.0 / (d * d), -2.0 * s / (d * d), M / I + s * s / (d * d)]
}

fn as_array(c: &LaplacianCoefficients) -> [f64; 5] {
    [c.a_tt, c.b_t, c.a_pp, c.a_ps, c.a_ss]
}

fn max_rel(a: [f64; 5], b: [f64; 5]) -> f64 {
    a.iter()
        .zip(&b)
        .map(|(x, y)| if x == y { 0.0 } else { (x - y).abs() / x.abs().max(y.abs()) })
        .fold(0.0, f64::max)
}

fn rotor(sig: Signature) -> RotorParams {
    RotorParams::new(M, I, 1.0, sig).unwrap()
}

#[test]
fn transcriptions_at_random_latitudes() {
    let mut rng = StdRng::seed_from_u64(81);
    let sphere = ManifoldSpec::sphere(R).unwrap();
    let pseudo = ManifoldSpec::pseudosphere(R).unwrap();
    let torus = ManifoldSpec::torus(L, R).unwrap();
    for _ in 0..1000 {
        let t: f64 = rng.gen_range(1e-3..PI - 1e-3);
        let got = as_array(&laplacian_coefficients(&sphere, &rotor(Signature::Positive), t).unwrap());
        assert!(max_rel(got, sphere_text(t.sin(), t.cos(), 1.0 / t.tan(), 1.0)) <= 1e-12, "sphere θ = {t}");

        let t: f64 = rng.gen_range(1e-3..6.0);
        let (sh, ch) = (t.sinh(), t.cosh());
        let got = as_array(&laplacian_coefficients(&pseudo, &rotor(Signature::Positive), t).unwrap());
        assert!(max_rel(got, sphere_text(sh, ch, ch / sh, 1.0)) <= 1e-12, "pseudosphere θ = {t}");
        let got = as_array(&laplacian_coefficients(&pseudo, &rotor(Signature::Negative), t).unwrap());
        assert!(max_rel(got, sphere_text(sh, ch, ch / sh, -1.0)) <= 1e-12, "pseudosphere(-) θ = {t}");

        let t = rng.gen_range(0.0..TAU);
        let got = as_array(&laplacian_coefficients(&torus, &rotor(Signature::Positive), t).unwrap());
        assert!(max_rel(got, torus_text(t)) <= 1e-12, "torus θ = {t}");
    }
}

#[test]
fn resonance_collapse() {
    let resonant = |sig| RotorParams::new(M, M * R * R, 1.0, sig).unwrap();
    let sphere = ManifoldSpec::sphere(R).unwrap();
    let pseudo = ManifoldSpec::pseudosphere(R).unwrap();
    for k in 1..200 {
        let t = PI * k as f64 / 200.0;
        let c = laplacian_coefficients(&sphere, &resonant(Signature::Positive), t).unwrap();
        let s2 = R * R * t.sin().powi(2);
        assert!((c.a_ss - 1.0 / s2).abs() <= 1e-12 * c.a_ss);
        assert!((c.a_pp - 1.0 / s2).abs() <= 1e-12 * c.a_pp);

        let t = 3.0 * k as f64 / 200.0;
        let sh2 = R * R * t.sinh().powi(2);
        let c = laplacian_coefficients(&pseudo, &resonant(Signature::Positive), t).unwrap();
        assert!((c.a_ss - (2.0 * t).cosh() / sh2).abs() <= 1e-12 * c.a_ss);
        let c = laplacian_coefficients(&pseudo, &resonant(Signature::Negative), t).unwrap();
        // -1/R² + cth²/R² cancels; the summands bound the rounding
        let summands = 1.0 / (R * R) + (t.cosh() / t.sinh()).powi(2) / (R * R);
        assert!((c.a_ss - 1.0 / sh2).abs() <= 1e-12 * summands, "θ = {t}");
    }
}

/// `∫ (L u) v h dθ` for the radial operator `L f = f'' + drift f' - q f`.
fn weighted_form(spec: &ManifoldSpec, m: i64, s: i64, u: &dyn Fn(f64) -> (f64, f64, f64), v: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let problem = radial_problem(spec, &rotor(Signature::Positive), m, s, &PotentialSpec::CosineWell { v0: 0.4 }).unwrap();
    integrate(
        |t| {
            let (f, df, d2f) = u(t);
            let lu = d2f + problem.drift(t) * df - problem.q(t) * f;
            lu * v(t) * problem.weight(t)
        },
        a,
        b,
        1e-13,
        1e-12,
    )
    .unwrap()
    .value
}

#[test]
fn radial_operator_is_symmetric_in_the_weighted_product() {
    // bumps vanishing with two derivatives at the ends of [a, b]
    let bump = |a: f64, b: f64, k: f64| {
        move |t: f64| {
            let x = (t - a) / (b - a);
            let w = b - a;
            let base = (x * (1.0 - x)).powi(3);
            let d_base = 3.0 * (x * (1.0 - x)).powi(2) * (1.0 - 2.0 * x) / w;
            let d2_base = (6.0 * x * (1.0 - x) * (1.0 - 2.0 * x).powi(2) - 6.0 * (x * (1.0 - x)).powi(2)) / (w * w);
            let (s, c) = (k * t).sin_cos();
            let osc = 1.0 + 0.3 * s;
            let d_osc = 0.3 * k * c;
            let d2_osc = -0.3 * k * k * s;
            (base * osc, d_base * osc + base * d_osc, d2_base * osc + 2.0 * d_base * d_osc + base * d2_osc)
        }
    };
    let cases = [
        (ManifoldSpec::sphere(R).unwrap(), 0.3, 2.8),
        (ManifoldSpec::pseudosphere(R).unwrap(), 0.2, 3.5),
        (ManifoldSpec::torus(L, R).unwrap(), -2.0, 2.5),
    ];
    for (spec, a, b) in &cases {
        let u = bump(*a, *b, 2.0);
        let v = bump(*a, *b, 3.0);
        let uv = weighted_form(spec, 1, 2, &u, &|t| v(t).0, *a, *b);
        let vu = weighted_form(spec, 1, 2, &v, &|t| u(t).0, *a, *b);
        assert!((uv - vu).abs() <= 1e-9 * uv.abs().max(1e-3), "{:?}: {uv} vs {vu}", spec.kind());
    }
}

proptest! {
    #[test]
    fn q_depends_on_quantum_numbers_through_m_minus_s_c(m in -4i64..=4, s in -4i64..=4, u in 0.02f64..0.98) {
        let spec = ManifoldSpec::sphere(R).unwrap();
        let t = u * PI;
        let rt = rotor(Signature::Positive);
        let p = radial_problem(&spec, &rt, m, s, &PotentialSpec::Zero).unwrap();
        let n = radial_problem(&spec, &rt, -m, -s, &PotentialSpec::Zero).unwrap();
        prop_assert_eq!(p.q(t), n.q(t));
        let c = laplacian_coefficients(&spec, &rt, t).unwrap();
        let (mf, sf) = (m as f64, s as f64);
        let expanded = R * R * (mf * mf * c.a_pp + mf * sf * c.a_ps + sf * sf * c.a_ss);
        prop_assert!((p.q(t) - expanded).abs() <= 1e-10 * (1.0 + expanded.abs()));
    }

    #[test]
    fn drift_is_log_derivative_of_the_volume(u in 0.02f64..0.98) {
        let spec = ManifoldSpec::torus(L, R).unwrap();
        let t = u * TAU;
        let c = laplacian_coefficients(&spec, &rotor(Signature::Positive), t).unwrap();
        let p = radial_problem(&spec, &rotor(Signature::Positive), 0, 0, &PotentialSpec::Zero).unwrap();
        prop_assert!((p.drift(t) - R * R * c.b_t).abs() <= 1e-13 * (1.0 + p.drift(t).abs()));
    }
}
