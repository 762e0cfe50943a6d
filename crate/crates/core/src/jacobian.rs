//! Jacobians of the invariant maps `theta -> (x, y)`, joint-spectrum domains and
//! the identities relating Jacobians, S-functions and subgroups.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{build_subgroup, GroupName};
use crate::laurent::{LaurentPoly, TorusPoint};
use crate::orbit::{character, fundamental_generators, s_function, varrho};

const PI2: f64 = PI * PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn measure_group(group: GroupName) -> Result<()> {
    if group.is_measure_group() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{group} carries no joint spectral measure here"
        )))
    }
}

/// `(chi_rho1, chi_rho2)` as Laurent polynomials.
pub fn invariant_polys(group: GroupName) -> Result<(LaurentPoly, LaurentPoly)> {
    let t = fundamental_generators(group)?;
    let g = build_subgroup(group);
    Ok((character(&g, t.rho1)?.poly, character(&g, t.rho2)?.poly))
}

/// `Psi(t) = (x, y)`.
pub fn psi(group: GroupName, t: TorusPoint) -> Result<(Complex64, Complex64)> {
    let (p, q) = invariant_polys(group)?;
    Ok((p.evaluate(t), q.evaluate(t)))
}

fn det2(p: &LaurentPoly, q: &LaurentPoly, t: TorusPoint) -> Complex64 {
    let (a, b) = p.gradient(t);
    let (cc, d) = q.gradient(t);
    a * d - b * cc
}

/// `det d(x,y)/d(theta1,theta2)` by term-wise differentiation.
pub fn jacobian_theta(group: GroupName, t: TorusPoint) -> Result<Complex64> {
    let (p, q) = invariant_polys(group)?;
    Ok(det2(&p, &q, t))
}

/// `J^2` written in the invariants.
pub fn jacobian_squared_xy(group: GroupName, x: Complex64, y: Complex64) -> Result<Complex64> {
    use GroupName::*;
    let k = 16.0 * PI2 * PI2;
    Ok(match group {
        Z0 => x * x * y * y * k,
        Z2_2 => -(x * x) * (4.0 - y * y) * k,
        Z2_3 => y * y * (x * x - y * 4.0) * k,
        D4_1 => (4.0 - x * x) * (4.0 - y * y) * k,
        D4_2 => (y + 1.0) * (3.0 - y) * (y * 4.0 - x * x + 4.0) * k,
        D6_1 => -d61_jacobian_poly(x, y) * k,
        _ => return measure_group(group).map(|_| c(0.0, 0.0)),
    })
}

/// `(y+2x+1)(16+24x-13x^2+2x^3+16y-4xy-x^2y+4y^2)`.
pub fn d61_jacobian_poly(x: Complex64, y: Complex64) -> Complex64 {
    (y + x * 2.0 + 1.0)
        * (x * 24.0 + 16.0 - x * x * 13.0 + x * x * x * 2.0 + y * 16.0 - x * y * 4.0 - x * x * y
            + y * y * 4.0)
}

/// Closed form of J on the joint spectrum; principal square roots throughout.
pub fn jacobian_xy(group: GroupName, x: Complex64, y: Complex64, tol: f64) -> Result<Complex64> {
    measure_group(group)?;
    if !domain_contains(group, x, y, tol) {
        return Err(Error::OutsideDomain(format!("{x}"), format!("{y}")));
    }
    use GroupName::*;
    let k = 4.0 * PI2;
    let rsqrt = |v: f64| v.max(0.0).sqrt();
    Ok(match group {
        Z0 => x * y * k,
        Z2_2 => c(0.0, 1.0) * x * rsqrt(4.0 - y.re * y.re) * k,
        Z2_3 => y * (x * x - y * 4.0).sqrt() * k,
        D4_1 => c(rsqrt((4.0 - x.re * x.re) * (4.0 - y.re * y.re)), 0.0) * k,
        D4_2 => c(rsqrt((y.re + 1.0) * (3.0 - y.re) * (4.0 * y.re - x.re * x.re + 4.0)), 0.0) * k,
        D6_1 => c(0.0, 1.0) * d61_jacobian_poly(x, y).sqrt() * k,
        _ => unreachable!(),
    })
}

/// D6_1 surface residual `x^3 - y1^2 - 4 x y1 - x^2 - 2 y1 - x - y2^2`.
pub fn d61_surface_residual(x: f64, y1: f64, y2: f64) -> f64 {
    x * x * x - y1 * y1 - 4.0 * x * y1 - x * x - 2.0 * y1 - x - y2 * y2
}

/// Membership in the joint spectrum, with a band of width `tol` around the
/// algebraic equalities and inequalities.
pub fn domain_contains(group: GroupName, x: Complex64, y: Complex64, tol: f64) -> bool {
    use GroupName::*;
    let unit = |z: Complex64| (z.norm() - 1.0).abs() <= tol;
    let real = |z: Complex64| z.im.abs() <= tol;
    match group {
        Z0 => unit(x) && unit(y),
        Z2_2 => unit(x) && real(y) && y.re.abs() <= 2.0 + tol,
        Z2_3 => {
            // x = 2 cos(phi) sqrt(y), so x^2 conj(y) is real and in [0, 4].
            let w = x * x * y.conj();
            unit(y) && w.im.abs() <= 4.0 * tol && w.re >= -tol && w.re <= 4.0 + tol
        }
        D4_1 => real(x) && real(y) && x.re.abs() <= 2.0 + tol && y.re.abs() <= 2.0 + tol,
        D4_2 => {
            real(x) && real(y) && y.re <= 3.0 + tol && y.re >= x.re * x.re / 4.0 - 1.0 - tol
        }
        D6_1 => {
            let scale = 1.0 + x.re.abs().powi(3);
            real(x)
                && x.re >= -1.0 - tol
                && x.re <= 8.0 + tol
                && d61_surface_residual(x.re, y.re, y.im).abs() <= tol * scale
                && 8.0 * y.re - x.re * x.re - 4.0 * x.re + 16.0 >= -tol * scale
        }
        _ => false,
    }
}

/// `|4 pi^2 |S_varrho(t)| - w |J(t)||`, w = 1 or `(1+y)^-1` for SO(4).
pub fn conjecture_identity_residual(group: GroupName, t: TorusPoint) -> Result<f64> {
    measure_group(group)?;
    let g = build_subgroup(group);
    let s = if group == GroupName::Z0 {
        1.0
    } else {
        s_function(&g, varrho(&g)?).poly.evaluate(t).norm()
    };
    let j = jacobian_theta(group, t)?.norm();
    let w = if group == GroupName::D4_2 {
        let (_, y) = psi(group, t)?;
        1.0 / (1.0 + y.re)
    } else {
        1.0
    };
    Ok((4.0 * PI2 * s - w * j).abs())
}

/// `|4 pi^2 |S_varrho| (x+1)^{3/2} - |J||` for D6_1, where the unweighted identity fails.
pub fn d61_s_rho_relation_residual(t: TorusPoint) -> Result<f64> {
    let g = build_subgroup(GroupName::D6_1);
    let s = s_function(&g, varrho(&g)?).poly.evaluate(t).norm();
    let (x, _) = psi(GroupName::D6_1, t)?;
    let j = jacobian_theta(GroupName::D6_1, t)?.norm();
    Ok((4.0 * PI2 * s * (x.re + 1.0).max(0.0).powf(1.5) - j).abs())
}

#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyReport {
    pub group: GroupName,
    pub samples: usize,
    /// Largest `||J_theta| - |J_xy(Psi)|| / |J_theta|` with `Psi` and `J_xy` in MPFR.
    pub max_rel_precise: f64,
    /// The same with `Psi` rounded to doubles and `J_xy` in f64.
    pub max_rel_f64: f64,
    /// Largest `|J_theta^2 - J^2(x, y)| / (1 + |J_theta^2|)`, in f64.
    pub max_squared_identity: f64,
    pub worst_t: (f64, f64),
}

/// Compares the two routes to `|J|` at `samples` uniform points of the torus.
pub fn jacobian_consistency(group: GroupName, samples: usize, seed: u64) -> Result<ConsistencyReport> {
    use rand::{Rng, SeedableRng};
    measure_group(group)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut rep = ConsistencyReport {
        group,
        samples,
        max_rel_precise: 0.0,
        max_rel_f64: 0.0,
        max_squared_identity: 0.0,
        worst_t: (0.0, 0.0),
    };
    for _ in 0..samples {
        let t = TorusPoint::new(rng.gen(), rng.gen());
        let jt = jacobian_theta(group, t)?;
        let (x, y) = psi(group, t)?;
        let jn = jt.norm();
        if jn < 1e-6 {
            continue;
        }
        let hp = crate::precise::jacobian_xy_norm(group, t, crate::precise::DEFAULT_PREC)?;
        let rel = (hp - jn).abs() / jn;
        if rel > rep.max_rel_precise {
            rep.max_rel_precise = rel;
            rep.worst_t = (t.theta1, t.theta2);
        }
        let jf = jacobian_xy(group, x, y, 1e-6)?.norm();
        rep.max_rel_f64 = rep.max_rel_f64.max((jf - jn).abs() / jn);
        let j2 = jacobian_squared_xy(group, x, y)?;
        rep.max_squared_identity = rep
            .max_squared_identity
            .max((jt * jt - j2).norm() / (1.0 + (jt * jt).norm()));
    }
    Ok(rep)
}

/// The G2 invariants `x'`, `y'` in terms of the torus variables.
pub fn g2_invariants() -> (LaurentPoly, LaurentPoly) {
    let hexa = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];
    let xp = LaurentPoly::from_terms(
        std::iter::once(((0, 0), 1)).chain(hexa.iter().map(|e| (*e, 1))),
    );
    let extra = [(0, 0), (1, 1), (-1, -1), (2, -1), (-2, 1), (1, -2), (-1, 2)];
    let yp = &xp + &LaurentPoly::from_terms(extra.iter().map(|e| (*e, 1)));
    (xp, yp)
}

pub fn jacobian_d12(t: TorusPoint) -> Complex64 {
    let (p, q) = g2_invariants();
    det2(&p, &q, t)
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationResiduals {
    /// `J_{D4_1} - 2 Re J_{Z2_2}`.
    pub d41_z22: f64,
    /// `J_{D12} - 2 Re J_{D6_1}`.
    pub d12_d61: f64,
    /// `(2 Re J_{Z2_3} / 4pi^2)^2` against the cubic expression in `(x2, y2, z2)`.
    pub z23_squared: f64,
    /// `2 Re J_{Z2_3} / 4 pi^2` against `w1 w2^2 - w1^2 w2`, real part.
    pub z23_monomial: f64,
}

pub fn relation_residuals(t: TorusPoint) -> Result<RelationResiduals> {
    let j41 = jacobian_theta(GroupName::D4_1, t)?;
    let j22 = jacobian_theta(GroupName::Z2_2, t)?;
    let j61 = jacobian_theta(GroupName::D6_1, t)?;
    let j12 = jacobian_d12(t);
    let j23 = jacobian_theta(GroupName::Z2_3, t)?;
    let (x2, y2) = psi(GroupName::D4_2, t)?;
    let z2 = LaurentPoly::from_terms([((1, -1), 1), ((-1, 1), 1)]).evaluate(t).re;
    let (x2, y2) = (x2.re, y2.re);
    let lhs = 2.0 * j23.re / (4.0 * PI2);
    let rhs = x2 * x2 * y2 * y2 - 4.0 * x2 * x2 * y2 + 4.0 * x2 * x2 - 4.0 * y2.powi(3)
        + 12.0 * y2 * y2
        - 4.0 * z2
        - 8.0;
    let (w1, w2) = t.omega();
    let mono = w1 * w2 * w2 - w1 * w1 * w2;
    Ok(RelationResiduals {
        d41_z22: (j41 - 2.0 * j22.re).norm(),
        d12_d61: (j12 - 2.0 * j61.re).norm(),
        z23_squared: (lhs * lhs - rhs).abs(),
        z23_monomial: (lhs - 2.0 * mono.re).abs(),
    })
}

/// Boundary curve c1 (sign +1) or c2 (sign -1) of the D6_1 joint spectrum, as y(x).
pub fn d61_boundary_c12(x: f64, sign: f64) -> Complex64 {
    c(
        (x * x + 4.0 * x - 16.0) / 8.0,
        sign * (x * (8.0 - x).powi(3)).max(0.0).sqrt() / 8.0,
    )
}

/// Real-y curve `y = -2x - 1 + s (x+1)^{3/2}`: c3 for s = -1, the dashed curve for s = +1.
pub fn d61_real_curve(x: f64, s: f64) -> f64 {
    -2.0 * x - 1.0 + s * (x + 1.0).max(0.0).powf(1.5)
}

/// `x = 4p + 4p^2` for the three cube-root branches p_i(y) of the real-y curves,
/// keeping the candidates that satisfy the cubic relation to `tol`.
pub fn d61_real_curve_x(y: f64, tol: f64) -> Vec<(usize, f64)> {
    let disc = 27.0 * (27.0 * y * y - 22.0 * y - 5.0);
    let inner = c(27.0 * y - 11.0, 0.0) + c(disc, 0.0).sqrt();
    let p = inner.powf(1.0 / 3.0);
    let (k, k4) = (2f64.powf(-1.0 / 3.0), 4.0 * 2f64.powf(1.0 / 3.0));
    let mut out = Vec::new();
    for i in 0..3 {
        let eps = Complex64::from_polar(1.0, 2.0 * PI * i as f64 / 3.0);
        let pi = (c(-1.0, 0.0) + eps * p * k + eps.conj() / p * k4) / 6.0;
        if pi.im.abs() > 1e-6 {
            continue;
        }
        let pr = pi.re;
        let x = 4.0 * pr + 4.0 * pr * pr;
        // The curve is the image of cos = p: y = 8p^3 + 4p^2 - 2p with |p| <= 1.
        let back = 8.0 * pr.powi(3) + 4.0 * pr * pr - 2.0 * pr;
        if (back - y).abs() <= tol && pr.abs() <= 1.0 + tol && d61_surface_residual(x, y, 0.0).abs() <= tol * 100.0
        {
            out.push((i + 1, x));
        }
    }
    out
}

/// `det d(x, Re y)/d(theta)` for D6_1.
pub fn d61_jacobian_x_y1(t: TorusPoint) -> Result<f64> {
    let (p, q) = invariant_polys(GroupName::D6_1)?;
    let (a, b) = p.gradient(t);
    let (cc, d) = q.gradient(t);
    Ok(a.re * d.re - b.re * cc.re)
}

/// `det d(Re y, Im y)/d(theta)` for D6_1.
pub fn d61_jacobian_y1_y2(t: TorusPoint) -> Result<f64> {
    let (_, q) = invariant_polys(GroupName::D6_1)?;
    let (a, b) = q.gradient(t);
    Ok((a.conj() * b).im)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values() {
        let j = jacobian_theta(GroupName::D4_1, TorusPoint::new(0.25, 0.25)).unwrap();
        assert!((j.norm() - 16.0 * PI2).abs() < 1e-9);
        let j0 = jacobian_theta(GroupName::Z0, TorusPoint::new(0.0, 0.0)).unwrap();
        assert!((j0.norm() - 4.0 * PI2).abs() < 1e-12);
        let j = jacobian_xy(GroupName::D4_1, c(0.0, 0.0), c(0.0, 0.0), 1e-9).unwrap();
        assert!((j.re - 16.0 * PI2).abs() < 1e-9);
        assert!(jacobian_xy(GroupName::D4_2, c(0.0, 0.0), c(3.0, 0.0), 1e-9).unwrap().norm() < 1e-12);
        assert!(domain_contains(GroupName::D4_2, c(0.0, 0.0), c(-1.0, 0.0), 1e-9));
        assert!(!domain_contains(GroupName::D4_1, c(3.0, 0.0), c(0.0, 0.0), 1e-9));
    }
}
