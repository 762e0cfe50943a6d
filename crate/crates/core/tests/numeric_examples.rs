use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rank2spec::elliptic::{ellip_e, ellip_k, incomplete_e, incomplete_f};
use rank2spec::graphs::{moments_exact, Family};
use rank2spec::jacobian::{
    conjecture_identity_residual, d61_boundary_c12, d61_jacobian_poly, domain_contains, jacobian_theta, jacobian_xy, psi,
};
use rank2spec::measures::{
    a_l_star_discrete, a_l_star_limit_check, catalog, eval_density, find_entry, quad_joint_moment, quad_moment,
    Generator,
};
use rank2spec::quad::tanh_sinh;
use rank2spec::seq::binomial;
use rank2spec::{GroupName, TorusPoint};

const PI2: f64 = PI * PI;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[test]
fn jacobian_spot_values() {
    let j = jacobian_theta(GroupName::D4_1, TorusPoint::new(0.25, 0.25)).unwrap();
    assert!((j.norm() - 16.0 * PI2).abs() < 1e-10);
    assert!(jacobian_theta(GroupName::D4_1, TorusPoint::new(0.3, 0.0)).unwrap().norm() < 1e-12);
    assert!((jacobian_theta(GroupName::Z0, TorusPoint::new(0.0, 0.0)).unwrap().norm() - 4.0 * PI2).abs() < 1e-12);

    assert!((jacobian_xy(GroupName::D4_1, c(0.0), c(0.0), 1e-9).unwrap().norm() - 16.0 * PI2).abs() < 1e-10);
    assert!(jacobian_xy(GroupName::D4_2, c(0.0), c(3.0), 1e-9).unwrap().norm() < 1e-12);
    assert!(jacobian_xy(GroupName::Z2_3, c(2.0), c(1.0), 1e-9).unwrap().norm() < 1e-12);
}

#[test]
fn d61_jacobian_vanishes_on_curved_boundary() {
    for x in [0.25, 0.5, 2.0, 5.0, 7.5] {
        for sign in [1.0, -1.0] {
            let y = d61_boundary_c12(x, sign);
            assert!(domain_contains(GroupName::D6_1, c(x), y, 1e-9));
            // J is a square root, so compare J^2 against the size of its terms.
            let j2 = d61_jacobian_poly(c(x), y);
            let scale = (1.0 + x.abs() + y.norm()).powi(4);
            assert!(j2.norm() < 1e-13 * scale, "x={x} sign={sign}: {j2}");
        }
    }
}

#[test]
fn domain_examples() {
    assert!(domain_contains(GroupName::D4_2, c(0.0), c(-1.0), 1e-9));
    assert!(!domain_contains(GroupName::D4_1, c(3.0), c(0.0), 1e-9));
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for name in GroupName::MEASURE {
        for _ in 0..1000 {
            let t = TorusPoint::new(rng.gen(), rng.gen());
            let (x, y) = psi(name, t).unwrap();
            assert!(domain_contains(name, x, y, 1e-9), "{name} {t:?}");
        }
    }
}

#[test]
fn identity_on_reflection_axis() {
    for t1 in [0.1, 0.37, 0.8] {
        let r = conjecture_identity_residual(GroupName::Z2_2, TorusPoint::new(t1, 0.0)).unwrap();
        assert!(r < 1e-12);
    }
}

#[test]
fn elliptic_values() {
    assert!((ellip_k(0.0).unwrap() - PI / 2.0).abs() < 1e-15);
    assert!((ellip_e(0.0) - PI / 2.0).abs() < 1e-15);
    assert!((ellip_e(1.0) - 1.0).abs() < 1e-15);
    let k = tanh_sinh(|t| 1.0 / (1.0 - 0.5 * t.sin().powi(2)).sqrt(), 0.0, PI / 2.0, 1e-14).unwrap();
    assert!((ellip_k(0.5).unwrap() - k.value).abs() < 1e-12);
    let f = tanh_sinh(|t| 1.0 / (1.0 - 0.4 * t.sin().powi(2)).sqrt(), 0.0, 0.7, 1e-14).unwrap();
    assert!((incomplete_f(0.7, 0.4).unwrap() - f.value).abs() < 1e-12);
    let e = tanh_sinh(|t| (1.0 - 0.4 * t.sin().powi(2)).sqrt(), 0.0, 0.7, 1e-14).unwrap();
    assert!((incomplete_e(0.7, 0.4).unwrap() - e.value).abs() < 1e-12);
}

#[test]
fn density_spot_values() {
    let d = |id: &str, p: &[f64]| eval_density(&find_entry(id).unwrap(), p).unwrap();
    assert!((d("D4_1-rho1-H", &[0.0]) - 1.0 / (2.0 * PI)).abs() < 1e-15);
    assert!((d("Z2_2-rho2-G", &[0.0]) - 1.0 / PI).abs() < 1e-15);
    assert!(d("D4_2-rho1-H", &[0.0]).is_infinite());
    assert_eq!(d("D4_1-rho1-H", &[3.0]), 0.0);
    assert!(eval_density(&find_entry("D4_1-rho1-H").unwrap(), &[0.0, 1.0]).is_err());
}

#[test]
fn quadrature_moment_examples() {
    let q = |id: &str, m: u32| quad_moment(&find_entry(id).unwrap(), m, 0).unwrap().value;
    assert!((q("Z2_2-rho2-H", 2) - 2.0).abs() < 1e-10);
    assert!((q("Z2_2-rho2-G", 2) - 1.0).abs() < 1e-10);
    assert!((q("D4_2-rho1-G", 4) - 4.0).abs() < 1e-10);
    assert!((q("D4_2-rho1-H", 2) - 4.0).abs() < 1e-10);
    assert!((q("D6_1-rho1-H", 1) - 2.0).abs() < 1e-10);
    let j = quad_joint_moment(&find_entry("D4_1-joint-H").unwrap(), [2, 0, 2, 0]).unwrap();
    assert!((j.value - 4.0).abs() < 1e-10);
}

#[test]
fn every_density_has_mass_one() {
    for e in catalog() {
        let mass = if e.generator == Generator::Joint {
            quad_joint_moment(&e, [0; 4]).unwrap().value
        } else {
            quad_moment(&e, 0, 0).unwrap().value
        };
        assert!((mass - 1.0).abs() < 1e-8, "{}: {mass}", e.id);
    }
}

#[test]
fn so4_rho2_is_shifted_arcsine() {
    let shifted = find_entry("D4_2-rho2-H").unwrap();
    let arcsine = find_entry("D4_1-rho1-H").unwrap();
    for y in [-0.9, -0.2, 0.5, 1.0, 2.3, 2.95] {
        let a = eval_density(&shifted, &[y]).unwrap();
        let b = eval_density(&arcsine, &[y - 1.0]).unwrap();
        assert!((a - b).abs() < 1e-13 * b, "{y}");
    }
    // int y^m = sum_k C(m,k) int x^k for x arcsine on [-2,2], exactly.
    for m in 0..=10u32 {
        let lhs = moments_exact(Family::H, GroupName::D4_2, (0, 0, m, 0)).unwrap();
        let rhs: BigInt = (0..=m as u64)
            .map(|k| binomial(m as u64, k) * moments_exact(Family::H, GroupName::D4_1, (k as u32, 0, 0, 0)).unwrap())
            .sum();
        assert_eq!(lhs, rhs, "m={m}");
        let q = quad_moment(&shifted, m, 0).unwrap().value;
        let l = lhs.to_f64().unwrap();
        assert!((q - l).abs() < 1e-9 * l.max(1.0));
    }
}

#[test]
fn discrete_a_l_star() {
    let w4: Vec<f64> = a_l_star_discrete(4).unwrap().atoms.iter().map(|a| a.1).collect();
    for (a, b) in w4.iter().zip([0.0, 0.5, 0.0, 0.5]) {
        assert!((a - b).abs() < 1e-15);
    }
    let w3: Vec<f64> = a_l_star_discrete(3).unwrap().atoms.iter().map(|a| a.1).collect();
    for (a, b) in w3.iter().zip([0.0, 0.5, 0.5]) {
        assert!((a - b).abs() < 1e-15);
    }
    for l in [3, 4, 17, 50, 51] {
        assert!((a_l_star_discrete(l).unwrap().total_mass() - 1.0).abs() < 1e-13);
    }
    assert!(a_l_star_discrete(2).is_err());
    assert!(a_l_star_limit_check(200, 2).unwrap() < 0.02);
    assert!(a_l_star_limit_check(201, 1).unwrap() < 0.02);
}
