//! Catalan-type sequences, quadrant walks and the squared-Catalan generating function.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::elliptic::{ellip_e, ellip_k};
use crate::error::{Error, Result};

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

pub fn central_binomial(n: u64) -> BigInt {
    binomial(2 * n, n)
}

pub fn catalan(n: u64) -> BigInt {
    central_binomial(n) / (n + 1)
}

pub fn squared_catalan(n: u64) -> BigInt {
    let c = catalan(n);
    &c * &c
}

/// Walks of 2n diagonal steps in the closed quadrant, from the origin back to it.
pub fn count_walks_quadrant(n: usize) -> BigInt {
    let size = n + 2;
    let mut grid = vec![vec![BigInt::zero(); size]; size];
    grid[0][0] = BigInt::one();
    for _ in 0..2 * n {
        let mut next = vec![vec![BigInt::zero(); size]; size];
        for i in 0..size {
            for j in 0..size {
                if grid[i][j].is_zero() {
                    continue;
                }
                for (di, dj) in [(-1i64, -1i64), (-1, 1), (1, -1), (1, 1)] {
                    let (a, b) = (i as i64 + di, j as i64 + dj);
                    if a < 0 || b < 0 || a as usize >= size || b as usize >= size {
                        continue;
                    }
                    next[a as usize][b as usize] += &grid[i][j];
                }
            }
        }
        grid = next;
    }
    grid[0][0].clone()
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * k)
}

/// `(m1,m2,m3,m4)! = (m1+m2+m3+m4)!/(m1! m2! m3! m4!)`.
pub fn multinomial4(m: [u64; 4]) -> BigInt {
    let total: u64 = m.iter().sum();
    m.iter().fold(factorial(total), |a, &k| a / factorial(k))
}

/// Both sides of the multinomial expression for `c_n^2`.
pub fn multinomial_identity_sides(n: u64) -> (BigInt, BigInt) {
    let mut rhs = BigInt::zero();
    for k in 0..=n {
        rhs += multinomial4([k, k, n - k, n - k]);
    }
    for k in 0..n {
        rhs += multinomial4([k, k + 2, n - k - 1, n - k - 1]);
        rhs -= multinomial4([k, k + 1, n - k - 1, n - k]) * 2;
    }
    (squared_catalan(n), rhs)
}

/// First `n` coefficients of `M(z) = sum c_k^2 z^k`.
pub fn mz_series(n: usize) -> Vec<BigInt> {
    (0..n as u64).map(squared_catalan).collect()
}

/// Coefficients of `z^2(1-16z)M'' + z(3-32z)M' + (1-4z)M - 1` for the truncated
/// series, over the powers the truncation fully determines.
pub fn mz_ode_residuals(n: usize) -> Vec<BigInt> {
    let a = mz_series(n);
    let coef = |k: usize| -> BigInt { a.get(k).cloned().unwrap_or_default() };
    (0..n)
        .map(|k| {
            let kb = BigInt::from(k as u64);
            let mut r = coef(k) * (&kb + 1u32) * (&kb + 1u32);
            if k >= 1 {
                let t = &kb * 2u32 - 1u32;
                r -= coef(k - 1) * &t * &t * 4u32;
            }
            if k == 0 {
                r -= 1u32;
            }
            r
        })
        .collect()
}

/// Largest absolute residual; zero when the recurrence holds.
pub fn mz_ode_check(n: usize) -> BigInt {
    mz_ode_residuals(n)
        .into_iter()
        .map(|r| if r < BigInt::zero() { -r } else { r })
        .max()
        .unwrap_or_default()
}

pub fn mz_series_value(z: f64, terms: usize) -> f64 {
    let mut s = 0.0;
    let mut zk = 1.0;
    for c in mz_series(terms) {
        s += c.to_f64().unwrap() * zk;
        zk *= z;
    }
    s
}

/// Closed form through complete elliptic integrals, valid for `0 < z < 1/16`.
pub fn mz_closed_form(z: f64) -> Result<f64> {
    if !(z > 0.0 && z < 1.0 / 16.0) {
        return Err(Error::InvalidArgument(format!("z = {z} outside (0, 1/16)")));
    }
    if z < 1e-4 {
        return Ok(mz_series_value(z, 12));
    }
    let pi = std::f64::consts::PI;
    let m = 16.0 * z;
    Ok(ellip_e(m) / (pi * z) - (1.0 - m) * ellip_k(m)? / (2.0 * pi * z) - 1.0 / (4.0 * z))
}
