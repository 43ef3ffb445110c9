mod common;

use common::{integrate, std_pdf};
use tranche_core::quadrature::{integrate_gaussian, tensor_rule, MAX_ORDER};
use tranche_core::special::std_normal_cdf;
use tranche_core::synth::synth_portfolio;
use tranche_core::QuadratureRule;

fn double_factorial(k: usize) -> f64 {
    (1..=k).rev().step_by(2).map(|v| v as f64).product()
}

#[test]
fn two_point_rule() {
    let r = QuadratureRule::gauss_hermite(2).unwrap();
    assert!((r.node(0)[0] + 1.0).abs() < 1e-15);
    assert!((r.node(1)[0] - 1.0).abs() < 1e-15);
    assert!(r.weights().iter().all(|w| (w - 0.5).abs() < 1e-15));
}

#[test]
fn polynomial_exactness_through_degree_nine_at_five_nodes() {
    let r = QuadratureRule::gauss_hermite(5).unwrap();
    for d in 0..=9usize {
        let got = r.integrate(|x| x[0].powi(d as i32));
        let expect = if d % 2 == 1 {
            0.0
        } else if d == 0 {
            1.0
        } else {
            double_factorial(d - 1)
        };
        assert!((got - expect).abs() < 1e-12 * expect.max(1.0), "degree {d}: {got}");
    }
    let q3 = QuadratureRule::gauss_hermite(3).unwrap();
    assert!((q3.integrate(|x| x[0].powi(4)) - 3.0).abs() < 1e-12);
}

#[test]
fn weights_positive_nodes_symmetric_across_orders() {
    for q in [2, 3, 7, 16, 64, 65, 128, 200, MAX_ORDER] {
        let r = QuadratureRule::gauss_hermite(q).unwrap();
        let sum: f64 = r.weights().iter().sum();
        assert!((sum - 1.0).abs() < 1e-12, "q={q} sum={sum}");
        assert!(r.weights().iter().all(|&w| w > 0.0), "q={q}");
        for j in 0..q {
            assert!((r.node(j)[0] + r.node(q - 1 - j)[0]).abs() < 1e-12, "q={q}");
            assert!((r.weights()[j] - r.weights()[q - 1 - j]).abs() <= 1e-14 * r.weights()[j].max(1e-300));
        }
        // second moment is exact for every q >= 2
        assert!((r.integrate(|x| x[0] * x[0]) - 1.0).abs() < 1e-11, "q={q}");
    }
}

#[test]
fn order_guards() {
    assert!(QuadratureRule::gauss_hermite(1).is_err());
    assert!(QuadratureRule::gauss_hermite(MAX_ORDER + 1).is_err());
    let r = QuadratureRule::gauss_hermite(3).unwrap();
    assert!(r.tensor(5).is_err());
    assert!(r.tensor(0).is_err());
}

#[test]
fn smooth_integrand_against_independent_quadrature() {
    let r = QuadratureRule::gauss_hermite(64).unwrap();
    let f = |x: f64| std_normal_cdf((-1.7 - 0.45 * x) / (1.0f64 - 0.45 * 0.45).sqrt());
    let gh = r.integrate(|x| f(x[0]));
    let gl = integrate(|x| f(x) * std_pdf(x), -12.0, 12.0, &[], 200);
    assert!((gh - gl).abs() < 1e-13, "{gh} vs {gl}");
}

#[test]
fn total_probability_identity() {
    let r = QuadratureRule::gauss_hermite(64).unwrap();
    let pd = -1.644_853_626_951_472_2; // inverse normal cdf of 0.05
    let v = r.integrate(|x| std_normal_cdf((pd - 0.5 * x[0]) / 0.75f64.sqrt()));
    assert!((v - 0.05).abs() < 1e-8);
    let p = synth_portfolio(25).unwrap();
    let first = &p.loans()[0];
    let v = integrate_gaussian(|x| Ok::<_, ()>(first.conditional_default_prob(x)), &r).unwrap();
    assert!((v - 0.015).abs() < 1e-8);
}

#[test]
fn tensor_products() {
    let r = QuadratureRule::gauss_hermite(4).unwrap();
    assert_eq!(tensor_rule(&r, 1).unwrap(), r);
    let q2 = QuadratureRule::gauss_hermite(2).unwrap().tensor(2).unwrap();
    assert_eq!(q2.len(), 4);
    for (x, w) in q2.iter() {
        assert!((x[0].abs() - 1.0).abs() < 1e-15 && (x[1].abs() - 1.0).abs() < 1e-15);
        assert!((w - 0.25).abs() < 1e-15);
    }
    let q3 = QuadratureRule::gauss_hermite(3).unwrap().tensor(2).unwrap();
    assert!((q3.integrate(|x| x[0] * x[0] * x[1] * x[1]) - 1.0).abs() < 1e-12);
    for m in 1..=4 {
        let t = QuadratureRule::gauss_hermite(5).unwrap().tensor(m).unwrap();
        assert!((t.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(t.integrate(|x| x[m - 1]).abs() < 1e-12);
    }
}

#[test]
fn node_errors_carry_the_offending_node() {
    let r = QuadratureRule::gauss_hermite(8).unwrap();
    let err = integrate_gaussian(|x| if x[0] > 2.0 { Err("boom") } else { Ok(1.0) }, &r).unwrap_err();
    assert!(r.node(err.index)[0] > 2.0);
    assert_eq!(err.node, r.node(err.index).to_vec());
    assert_eq!(err.source, "boom");
}

#[test]
fn constant_and_odd_integrands() {
    let r = QuadratureRule::gauss_hermite(64).unwrap();
    assert!((r.integrate(|_| 1.0) - 1.0).abs() < 1e-12);
    assert!(r.integrate(|x| x[0]).abs() < 1e-12);
}
