//! Special functions against independent oracles written out here.

use std::f64::consts::PI;

use ocwt::specfun::{
    cherednik_c, gamma_complex, gauss_2f1, jacobi_cherednik_apply, opdam_g, opdam_g_derivative_form, plancherel_density,
    symmetric_uniform_nodes, weight_a,
};
use ocwt::transform::eigen_residual;
use ocwt::{Complex64, Params};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// Stirling series at `z + 30`, shifted back by the recurrence.
fn gamma_stirling(z: Complex64) -> Complex64 {
    const B: [f64; 8] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
        -3617.0 / 510.0,
    ];
    let n = 30;
    let w = z + n as f64;
    let mut ln = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln();
    for (k, b) in B.iter().enumerate() {
        let m = 2 * (k + 1);
        ln += b / ((m * (m - 1)) as f64 * w.powu(m as u32 - 1));
    }
    let mut shift = c(1.0, 0.0);
    for k in 0..n {
        shift *= z + k as f64;
    }
    ln.exp() / shift
}

/// Euler's integral with `t = e^u`, trapezoid in `u`.
fn gamma_euler(z: Complex64) -> Complex64 {
    let (lo, hi, h) = (-40.0, 5.0, 1e-3);
    let n = ((hi - lo) / h) as usize;
    let f = |u: f64| (z * u - u.exp()).exp();
    let mut s = 0.5 * (f(lo) + f(hi));
    for k in 1..n {
        s += f(lo + k as f64 * h);
    }
    s * h
}

#[test]
fn gamma_at_two_plus_three_i() {
    let z = c(2.0, 3.0);
    let stirling = gamma_stirling(z);
    let euler = gamma_euler(z);
    assert!(rel(stirling, euler) < 1e-11, "oracles disagree: {stirling} vs {euler}");
    let v = gamma_complex(z).unwrap();
    assert!(rel(v, stirling) < 1e-12, "{v} vs {stirling}");
}

#[test]
fn gamma_reflection() {
    for &z in &[c(0.3, 0.7), c(-1.4, 2.2), c(0.5, -5.0)] {
        let lhs = gamma_complex(z).unwrap() * gamma_complex(1.0 - z).unwrap();
        let rhs = PI / (PI * z).sin();
        assert!(rel(lhs, rhs) < 1e-12, "{z}");
    }
}

/// Pfaff transform to `z/(z−1)` and 500 terms, compensated summation.
fn hyp2f1_pfaff(a: Complex64, b: Complex64, cc: f64, z: f64) -> Complex64 {
    let t = z / (z - 1.0);
    let bb = cc - b;
    let mut term = c(1.0, 0.0);
    let (mut sum, mut comp) = (c(0.0, 0.0), c(0.0, 0.0));
    for n in 0..500 {
        let y = term - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        let nf = n as f64;
        term = term * (a + nf) * (bb + nf) / ((cc + nf) * (nf + 1.0)) * t;
    }
    c(1.0 - z, 0.0).powc(-a) * sum
}

#[test]
fn hyp2f1_against_transformed_series() {
    let (a, b) = (c(0.75, 0.5), c(0.75, -0.5));
    let oracle = hyp2f1_pfaff(a, b, 1.5, -2.0);
    // the other Pfaff branch must agree with the first
    let other = hyp2f1_pfaff(b, a, 1.5, -2.0);
    assert!(rel(oracle, other) < 1e-14);
    assert!(oracle.im.abs() < 1e-14, "conjugate parameters give a real value");
    let v = gauss_2f1(a, b, c(1.5, 0.0), -2.0).unwrap();
    assert!(rel(v, oracle) < 1e-13, "{v} vs {oracle}");
}

#[test]
fn hyp2f1_binomial_identity() {
    for &(a, b) in &[
        (c(0.7, 0.0), c(1.9, 0.0)),
        (c(1.25, 0.4), c(2.5, 0.0)),
        (c(-0.3, 1.0), c(0.8, 0.0)),
    ] {
        for k in 0..=50 {
            let z = -5.0 * k as f64 / 50.0;
            let v = gauss_2f1(a, b, b, z).unwrap();
            let exact = c(1.0 - z, 0.0).powc(-a);
            assert!(rel(v, exact) <= 1e-10, "a={a} b={b} z={z}: {v} vs {exact}");
        }
    }
}

#[test]
fn eigenfunction_is_one_at_origin() {
    let p = Params::default();
    for &l in &[c(0.0, 0.0), c(1.0, 0.0), c(2.0, 1.0)] {
        assert!((opdam_g(l, 0.0, &p).unwrap() - 1.0).norm() <= 1e-12);
    }
}

#[test]
fn eigen_equation_residual() {
    let p = Params::default();
    for &l in &[0.5, 1.0, 3.0] {
        let r = eigen_residual(l, &p, 2.0, 1e-3).unwrap();
        assert!(r <= 1e-4, "lambda={l}: {r}");
    }
}

#[test]
fn derivative_form_agrees() {
    let p = Params::default();
    let l = c(1.3, 0.0);
    let a = opdam_g(l, 0.7, &p).unwrap();
    let b = opdam_g_derivative_form(l, 0.7, &p, 1e-3).unwrap();
    assert!((a - b).norm() <= 1e-9, "{a} vs {b}");
}

#[test]
fn operator_on_odd_function_matches_hand_derivative() {
    // f(x) = sinh(x) e^{−x²} is odd, so (f(x) − f(−x))/2 = f and f(−x) = −f:
    // T f = f′ + [(2α+1) coth x + (2β+1) tanh x] f + ρ f
    let p = Params::default();
    let h = 1.0 / 999.0;
    let nodes = symmetric_uniform_nodes(1500, h);
    let f = |x: f64| x.sinh() * (-x * x).exp();
    let values: Vec<Complex64> = nodes.iter().map(|&x| c(f(x), 0.0)).collect();
    let t = jacobi_cherednik_apply(&nodes, &values, &p).unwrap();
    let i = nodes.iter().position(|&x| (x - 0.5).abs() < 1e-12).expect("0.5 is a node");
    let x = 0.5_f64;
    let df = x.cosh() * (-x * x).exp() - 2.0 * x * f(x);
    let oracle = df + ((2.0 * p.alpha() + 1.0) / x.tanh() + (2.0 * p.beta() + 1.0) * x.tanh()) * f(x) + p.rho() * f(x);
    assert!((t[i].re - oracle).abs() < 1e-5 * oracle.abs(), "{} vs {oracle}", t[i]);
    assert!(t[i].im == 0.0);
}

#[test]
fn c_function_from_gamma_factors() {
    let p = Params::default();
    let l = c(1.0, 0.0);
    let il = c(0.0, 1.0) * l;
    let rho = p.rho();
    let direct = c(2.0, 0.0).powc(rho - il) * gamma_stirling(c(p.alpha() + 1.0, 0.0)) * gamma_stirling(il)
        / (gamma_stirling((rho + il) / 2.0) * gamma_stirling((p.alpha() - p.beta() + 1.0 + il) / 2.0));
    let v = cherednik_c(l, &p).unwrap();
    assert!(rel(v, direct) < 1e-12, "{v} vs {direct}");
}

#[test]
fn c_function_pole_order_at_zero() {
    let p = Params::default();
    let inv = |l: f64| cherednik_c(c(l, 0.0), &p).unwrap().norm_sqr().recip();
    let ratio = inv(1e-3) / inv(2e-3);
    assert!((ratio - 0.25).abs() <= 0.05 * 0.25, "{ratio}");
}

#[test]
fn density_vanishes_at_zero() {
    let d = plancherel_density(0.0, &Params::default()).unwrap();
    assert_eq!(d.abs, 0.0);
    // and approaches 0 continuously
    assert!(plancherel_density(1e-6, &Params::default()).unwrap().abs < 1e-4);
}

#[test]
fn weight_at_one() {
    let p = Params::default();
    let hand = 1f64.sinh().powi(3) * 1f64.cosh().powi(2);
    assert!((weight_a(1.0, &p) - hand).abs() <= 1e-14 * hand);
}

fn params() -> impl Strategy<Value = Params> {
    (-0.49..3.0f64, 0.0..1.0f64).prop_map(|(a, t)| {
        let b = -0.5 + t * (a + 0.5);
        Params::new(a, b).unwrap()
    })
}

proptest! {
    #[test]
    fn gamma_recurrence(re in -6.0..8.0f64, im in 0.05..20.0f64) {
        let z = c(re, im);
        let lhs = gamma_complex(z + 1.0).unwrap();
        let rhs = z * gamma_complex(z).unwrap();
        prop_assert!(rel(lhs, rhs) <= 1e-11, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn gamma_conjugate_symmetry(re in -6.0..8.0f64, im in 0.05..20.0f64) {
        let z = c(re, im);
        let a = gamma_complex(z.conj()).unwrap();
        let b = gamma_complex(z).unwrap().conj();
        prop_assert!(rel(a, b) <= 1e-13);
    }

    #[test]
    fn binomial_identity(a in -2.0..3.0f64, ai in -1.0..1.0f64, b in 0.3..4.0f64, z in -5.0..0.0f64) {
        let a = c(a, ai);
        let v = gauss_2f1(a, c(b, 0.0), c(b, 0.0), z).unwrap();
        prop_assert!(rel(v, c(1.0 - z, 0.0).powc(-a)) <= 1e-10);
    }

    #[test]
    fn abs_density_is_even(p in params(), l in 0.01..30.0f64) {
        let a = plancherel_density(l, &p).unwrap().abs;
        let b = plancherel_density(-l, &p).unwrap().abs;
        prop_assert!((a - b).abs() <= 1e-13 * a);
    }

    #[test]
    fn normalized_at_origin(p in params(), re in -10.0..10.0f64, im in -2.0..2.0f64) {
        let g = opdam_g(c(re, im), 0.0, &p).unwrap();
        prop_assert!((g - 1.0).norm() <= 1e-12);
    }
}
