//! Numerical integration: tanh-sinh for endpoint singularities, Gauss-Legendre
//! for smooth integrands and the trapezoid rule for periodic ones.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error: f64,
    pub nodes: usize,
}

impl QuadratureResult {
    pub fn zero() -> Self {
        QuadratureResult {
            value: 0.0,
            error: 0.0,
            nodes: 0,
        }
    }

    pub fn add(self, o: QuadratureResult) -> QuadratureResult {
        QuadratureResult {
            value: self.value + o.value,
            error: self.error + o.error,
            nodes: self.nodes + o.nodes,
        }
    }
}

const T_MAX: f64 = 4.5;
const MAX_LEVEL: u32 = 12;

/// Tanh-sinh on [a, b]. The integrand receives `(x, x - a, b - x)`, the last two
/// computed without cancellation so that endpoint singularities can be resolved.
pub fn tanh_sinh_ends<F>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64, f64, f64) -> f64,
{
    if a == b {
        return Ok(QuadratureResult::zero());
    }
    if b < a {
        let r = ts_impl(&|x, da, db| f(x, db, da), b, a, rel_tol, abs_tol)?;
        return Ok(QuadratureResult { value: -r.value, ..r });
    }
    ts_impl(&f, a, b, rel_tol, abs_tol)
}

fn ts_impl(
    f: &dyn Fn(f64, f64, f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<QuadratureResult> {
    let (v, error, nodes) = ts_vec_impl(&|x, da, db| vec![f(x, da, db)], 1, a, b, rel_tol, abs_tol)
        .map_err(|e| match e {
            VecFailure { value, error } => Error::NoConvergence { value: value[0], error },
        })?;
    Ok(QuadratureResult {
        value: v[0],
        error,
        nodes,
    })
}

struct VecFailure {
    value: Vec<f64>,
    error: f64,
}

/// Shared tanh-sinh driver for vector-valued integrands of length `dim`.
/// Convergence is judged on the largest component.
fn ts_vec_impl(
    f: &dyn Fn(f64, f64, f64) -> Vec<f64>,
    dim: usize,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> std::result::Result<(Vec<f64>, f64, usize), VecFailure> {
    let r = 0.5 * (b - a);
    let mut nodes = 0usize;
    let mut sum = vec![0.0; dim];
    let eval = |t: f64, nodes: &mut usize, sum: &mut [f64]| {
        let u = FRAC_PI_2 * t.sinh();
        let e = (2.0 * u.abs()).exp();
        let comp = 2.0 / (e + 1.0);
        // dx/dt = r * (pi/2) cosh t / cosh^2 u, with 1/cosh^2 u = 4 e / (e+1)^2.
        let w = r * FRAC_PI_2 * t.cosh() * 4.0 / (e * (1.0 + 1.0 / e).powi(2));
        let d = r * comp;
        if d == 0.0 || w == 0.0 {
            return;
        }
        *nodes += 1;
        let (x, da, db) = if t >= 0.0 {
            (b - d, 2.0 * r - d, d)
        } else {
            (a + d, d, 2.0 * r - d)
        };
        let v = f(x, da, db);
        for (s, vi) in sum.iter_mut().zip(v) {
            if !vi.is_finite() && w < 1e-200 {
                continue;
            }
            *s += vi * w;
        }
    };
    let mut h = 1.0;
    eval(0.0, &mut nodes, &mut sum);
    let mut k = 1;
    while k as f64 * h <= T_MAX {
        let t = k as f64 * h;
        eval(t, &mut nodes, &mut sum);
        eval(-t, &mut nodes, &mut sum);
        k += 1;
    }
    let scaled = |sum: &[f64], h: f64| sum.iter().map(|s| s * h).collect::<Vec<f64>>();
    let mut prev = scaled(&sum, h);
    let mut err = f64::INFINITY;
    let diff = |a: &[f64], b: &[f64]| {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    };
    let size = |a: &[f64]| a.iter().map(|x| x.abs()).fold(0.0, f64::max);
    for _ in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= T_MAX {
            let t = k as f64 * h;
            eval(t, &mut nodes, &mut sum);
            eval(-t, &mut nodes, &mut sum);
            k += 2;
        }
        let cur = scaled(&sum, h);
        err = diff(&cur, &prev);
        if cur.iter().any(|v| !v.is_finite()) {
            return Err(VecFailure { value: cur, error: err });
        }
        if err <= abs_tol.max(rel_tol * size(&cur)) && h < 0.2 {
            return Ok((cur, err, nodes));
        }
        prev = cur;
    }
    if err <= 1e3 * abs_tol.max(rel_tol * size(&prev)) {
        return Ok((prev, err, nodes));
    }
    Err(VecFailure { value: prev, error: err })
}

/// Tanh-sinh for a vector of integrands sharing the nodes, e.g. a family of moments.
pub fn tanh_sinh_vec<F>(f: F, dim: usize, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<(Vec<f64>, f64)>
where
    F: Fn(f64, f64, f64) -> Vec<f64>,
{
    if a == b {
        return Ok((vec![0.0; dim], 0.0));
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let g = |x: f64, da: f64, db: f64| if sign > 0.0 { f(x, da, db) } else { f(x, db, da) };
    match ts_vec_impl(&g, dim, lo, hi, rel_tol, abs_tol) {
        Ok((v, e, _)) => Ok((v.into_iter().map(|x| sign * x).collect(), e)),
        Err(VecFailure { value, error }) => Err(Error::NoConvergence {
            value: value.iter().map(|x| x.abs()).fold(0.0, f64::max),
            error,
        }),
    }
}

/// Like `tanh_sinh_vec_breaks` but always returns the last estimate with its error,
/// for inner integrals whose accuracy is judged by the outer rule.
pub fn tanh_sinh_vec_estimate<F>(f: F, dim: usize, breaks: &[f64], rel_tol: f64, abs_tol: f64) -> (Vec<f64>, f64)
where
    F: Fn(f64, f64, f64) -> Vec<f64>,
{
    let mut total = vec![0.0; dim];
    let mut err = 0.0;
    for w in breaks.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        let (v, e) = match ts_vec_impl(&f, dim, w[0], w[1], rel_tol, abs_tol) {
            Ok((v, e, _)) => (v, e),
            Err(VecFailure { value, error }) => (value, error),
        };
        for (t, x) in total.iter_mut().zip(v) {
            *t += x;
        }
        err += e;
    }
    (total, err)
}

/// `tanh_sinh_vec` summed over consecutive breakpoints.
pub fn tanh_sinh_vec_breaks<F>(f: F, dim: usize, breaks: &[f64], rel_tol: f64, abs_tol: f64) -> Result<(Vec<f64>, f64)>
where
    F: Fn(f64, f64, f64) -> Vec<f64>,
{
    let mut total = vec![0.0; dim];
    let mut err = 0.0;
    for w in breaks.windows(2) {
        let (v, e) = tanh_sinh_vec(&f, dim, w[0], w[1], rel_tol, abs_tol)?;
        for (t, x) in total.iter_mut().zip(v) {
            *t += x;
        }
        err += e;
    }
    Ok((total, err))
}

pub fn tanh_sinh<F>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    tanh_sinh_ends(|x, _, _| f(x), a, b, rel_tol, 1e-300)
}

/// Sum of tanh-sinh integrals over consecutive breakpoints.
pub fn tanh_sinh_breaks<F>(f: F, breaks: &[f64], rel_tol: f64, abs_tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64, f64, f64) -> f64,
{
    let mut total = QuadratureResult::zero();
    for w in breaks.windows(2) {
        total = total.add(tanh_sinh_ends(&f, w[0], w[1], rel_tol, abs_tol)?);
    }
    Ok(total)
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        xs[i] = x;
        xs[n - 1 - i] = -x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        ws[i] = w;
        ws[n - 1 - i] = w;
    }
    (xs, ws)
}

pub fn gauss_legendre_integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let (xs, ws) = gauss_legendre(n);
    let (c, r) = (0.5 * (a + b), 0.5 * (b - a));
    xs.iter().zip(&ws).map(|(x, w)| w * f(c + r * x)).sum::<f64>() * r
}

/// Trapezoid rule for a 1-periodic integrand on [0, 1).
pub fn trapezoid_periodic<F: Fn(f64) -> f64>(f: F, n: usize) -> f64 {
    (0..n).map(|k| f(k as f64 / n as f64)).sum::<f64>() / n as f64
}

/// Neumaier-compensated sum, so parallel partial results combine reproducibly.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut s = 0.0f64;
    let mut c = 0.0f64;
    for x in it {
        let t = s + x;
        if s.abs() >= x.abs() {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    s + c
}
