//! Complete and incomplete elliptic integrals in the parameter convention
//! `K(m) = int_0^{pi/2} (1 - m sin^2 t)^{-1/2} dt`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        let (an, bn) = (0.5 * (a + b), (a * b).sqrt());
        if (an - bn).abs() <= 1e-16 * an {
            return an;
        }
        a = an;
        b = bn;
    }
    a
}

/// K(m) for m < 1. Negative m is fine: AGM(1, sqrt(1-m)) stays real.
pub fn ellip_k(m: f64) -> Result<f64> {
    if !(m < 1.0) {
        return Err(Error::InvalidArgument(format!("K(m) needs m < 1, got {m}")));
    }
    Ok(FRAC_PI_2 / agm(1.0, (1.0 - m).sqrt()))
}

/// K(1 - m1), accurate when m1 = 1 - m is small. Requires m1 > 0.
pub fn ellip_k_c(m1: f64) -> f64 {
    if m1 <= 0.0 {
        return f64::INFINITY;
    }
    FRAC_PI_2 / agm(1.0, m1.sqrt())
}

/// E(1 - m1) with m1 in (0, 1], from the AGM sequence with `sum 2^{n-1} c_n^2`.
pub fn ellip_e_c(m1: f64) -> f64 {
    if m1 <= 0.0 {
        return 1.0;
    }
    if m1 > 1.0 {
        // E(m) for m < 0 via the imaginary-modulus transformation.
        let m = 1.0 - m1;
        return m1.sqrt() * ellip_e(m / (m - 1.0));
    }
    let mut a = 1.0;
    let mut b = m1.sqrt();
    let mut sum = 0.5 * (1.0 - m1);
    let mut pow = 0.5;
    for _ in 0..64 {
        let c = 0.5 * (a - b);
        let (an, bn) = (0.5 * (a + b), (a * b).sqrt());
        pow *= 2.0;
        sum += pow * c * c;
        a = an;
        b = bn;
        if c.abs() <= 1e-15 * a {
            break;
        }
    }
    FRAC_PI_2 / a * (1.0 - sum)
}

/// E(m) for m <= 1.
pub fn ellip_e(m: f64) -> f64 {
    if m >= 1.0 {
        return if m == 1.0 { 1.0 } else { f64::NAN };
    }
    if m < 0.0 {
        return (1.0 - m).sqrt() * ellip_e_c(1.0 - m / (m - 1.0));
    }
    ellip_e_c(1.0 - m)
}

/// Carlson's R_F(x, y, z) by duplication.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    let (mut x, mut y, mut z) = (x, y, z);
    for _ in 0..200 {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * sy + sy * sz + sz * sx;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        let mu = (x + y + z) / 3.0;
        let (dx, dy, dz) = (1.0 - x / mu, 1.0 - y / mu, 1.0 - z / mu);
        if dx.abs().max(dy.abs()).max(dz.abs()) < 1e-4 {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / mu.sqrt();
        }
    }
    f64::NAN
}

/// Carlson's R_D(x, y, z).
pub fn carlson_rd(x: f64, y: f64, z: f64) -> f64 {
    let (mut x, mut y, mut z) = (x, y, z);
    let mut sum = 0.0;
    let mut fac = 1.0;
    for _ in 0..200 {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * sy + sy * sz + sz * sx;
        sum += fac / (sz * (z + lam));
        fac *= 0.25;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        let mu = (x + y + 3.0 * z) / 5.0;
        let (dx, dy, dz) = (1.0 - x / mu, 1.0 - y / mu, 1.0 - z / mu);
        if dx.abs().max(dy.abs()).max(dz.abs()) < 1e-4 {
            let ea = dx * dy;
            let eb = dz * dz;
            let ec = ea - eb;
            let ed = ea - 6.0 * eb;
            let ee = ed + 2.0 * ec;
            let s = 1.0 + ed * (-3.0 / 14.0 + 9.0 / 88.0 * ed - 4.5 / 26.0 * dz * ee)
                + dz * (ee / 6.0 + dz * (-9.0 / 22.0 * ec + dz * 3.0 / 26.0 * ea));
            return 3.0 * sum + fac * s / (mu * mu.sqrt());
        }
    }
    f64::NAN
}

fn check_incomplete(phi: f64, m: f64) -> Result<()> {
    let s2 = if phi.abs() >= FRAC_PI_2 { 1.0 } else { phi.sin().powi(2) };
    if 1.0 - m * s2 <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "1 - m sin^2 vanishes on [0, {phi}] for m = {m}"
        )));
    }
    Ok(())
}

/// Splits phi = k pi + r with |r| <= pi/2.
fn reduce(phi: f64) -> (f64, f64) {
    let k = (phi / std::f64::consts::PI).round();
    (k, phi - k * std::f64::consts::PI)
}

/// F(phi | m).
pub fn incomplete_f(phi: f64, m: f64) -> Result<f64> {
    check_incomplete(phi, m)?;
    let (k, r) = reduce(phi);
    let (s, c) = r.sin_cos();
    let part = s * carlson_rf(c * c, 1.0 - m * s * s, 1.0);
    Ok(if k != 0.0 { 2.0 * k * ellip_k(m)? + part } else { part })
}

/// E(phi | m).
pub fn incomplete_e(phi: f64, m: f64) -> Result<f64> {
    check_incomplete(phi, m)?;
    let (k, r) = reduce(phi);
    let (s, c) = r.sin_cos();
    let q = 1.0 - m * s * s;
    let part = s * carlson_rf(c * c, q, 1.0) - m * s * s * s / 3.0 * carlson_rd(c * c, q, 1.0);
    Ok(if k != 0.0 { 2.0 * k * ellip_e(m) + part } else { part })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints() {
        assert!((ellip_k(0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((ellip_e(0.0) - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(ellip_e(1.0), 1.0);
        assert!(ellip_k(1.0).is_err());
        // K(1/2) = Gamma(1/4)^2 / (4 sqrt(pi))
        assert!((ellip_k(0.5).unwrap() - 1.854_074_677_301_372).abs() < 1e-14);
        assert!((ellip_e(0.5) - 1.350_643_881_047_675_5).abs() < 1e-14);
        // E(-1) = sqrt(2) E(1/2)
        assert!((ellip_e(-1.0) - 1.910_098_894_513_856).abs() < 1e-13);
    }

    #[test]
    fn incomplete_reduces_to_complete() {
        for m in [-2.0, 0.0, 0.3, 0.9] {
            assert!((incomplete_f(FRAC_PI_2, m).unwrap() - ellip_k(m).unwrap()).abs() < 1e-13);
            assert!((incomplete_e(FRAC_PI_2, m).unwrap() - ellip_e(m)).abs() < 1e-13);
        }
        assert_eq!(incomplete_e(0.0, 0.5).unwrap(), 0.0);
        assert!(incomplete_f(1.2, 1.5).is_err());
    }
}
