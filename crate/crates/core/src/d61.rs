//! PSU(3) numerics: the weights J1..J4, the cubic in `x` over a point of the
//! `y`-region, the A / B / D' classification and the region quadrature.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::elliptic::{ellip_e_c, ellip_k_c};
use crate::error::{Error, Result};
use crate::quad::{tanh_sinh_breaks, tanh_sinh_vec_breaks, tanh_sinh_vec_estimate};

const PI2: f64 = PI * PI;

/// `(x+1)^{3/2} - 1` without cancellation near `x = 0`.
fn pow32_m1(x: f64) -> f64 {
    (1.5 * x.ln_1p()).exp_m1()
}

/// `D = 8 - 20x - x^2 + 8(x+1)^{3/2}` and `8 - 20x - x^2 - 8(x+1)^{3/2}`.
fn d_pair(x: f64) -> (f64, f64) {
    let e = pow32_m1(x);
    (16.0 - 20.0 * x - x * x + 8.0 * e, -20.0 * x - x * x - 8.0 * e)
}

fn check_x(x: f64) -> Result<()> {
    if (-1.0..=8.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::OutsideDomain(x.to_string(), "-".into()))
    }
}

/// H-family weight of `x = chi_rho1` on [-1, 8]. Infinite at `x = 0`.
pub fn j1(x: f64) -> Result<f64> {
    check_x(x)?;
    if x == 0.0 {
        return Ok(f64::INFINITY);
    }
    let (d, dm) = d_pair(x);
    if x < 0.0 {
        // K(v) with 1 - v = dm / D.
        Ok(6.0 * ellip_k_c(dm / d) / (PI2 * d.sqrt()))
    } else {
        let s = (x + 1.0).powf(1.5);
        let m1 = (8.0 * pow32_m1(x) + 20.0 * x + x * x) / (16.0 * s);
        Ok(3.0 * ellip_k_c(m1) / (2.0 * PI2 * (x + 1.0).powf(0.75)))
    }
}

/// G-family weight of `x` on [-1, 8] (conjectural).
pub fn j3(x: f64) -> Result<f64> {
    check_x(x)?;
    let (d, dm) = d_pair(x);
    if x <= 0.0 {
        return Ok(d.sqrt() * ellip_e_c(dm / d) / PI2);
    }
    let q = (x + 1.0).powf(0.75);
    let m1 = (8.0 * pow32_m1(x) + 20.0 * x + x * x) / (16.0 * q * q);
    let v = (16.0 * q * ellip_e_c(m1) + dm * ellip_k_c(m1) / q) / (4.0 * PI2);
    Ok(v.max(0.0))
}

/// Limits of `y1` over which `12 / |J_{x,y1}|` is integrated to give `j1(x)`.
pub fn j1_y1_limits(x: f64) -> (f64, f64) {
    let s = (x + 1.0).powf(1.5);
    let lo = if x <= 0.0 { -2.0 * x - 1.0 - s } else { (x * x + 4.0 * x - 16.0) / 8.0 };
    (lo, -2.0 * x - 1.0 + s)
}

/// `|J_{x,y1}| / (4 pi^2)` from the gaps to the three roots in `y1`, where
/// `da`, `db` are the distances to the lower and upper limits.
fn jxy1_scaled(x: f64, y1: f64, da: f64, db: f64) -> f64 {
    let s = (x + 1.0).powf(1.5);
    let (r_lo, c1) = (-2.0 * x - 1.0 - s, (x * x + 4.0 * x - 16.0) / 8.0);
    let (g_c1, g_lo) = if x <= 0.0 { (y1 - c1, da) } else { (da, y1 - r_lo) };
    (8.0 * g_c1 * g_lo * db).abs().sqrt()
}

/// Joint weight `6 / |J_{x,y1}|` for one sign of `y2`.
pub fn joint_weight_x_y1(x: f64, y1: f64, da: f64, db: f64) -> f64 {
    6.0 / (4.0 * PI2 * jxy1_scaled(x, y1, da, db))
}

/// `(mid, half, gap)` for the `y1`-interval at `x`: `y1 = mid - half cos(phi)`, and
/// the third root of `|J_{x,y1}|^2` lies `gap` below the lower limit, so that
/// `|y1 - r| = 2 half sin^2(phi/2) + gap` without cancellation.
pub fn y1_parametrization(x: f64) -> (f64, f64, f64) {
    let (lo, hi) = j1_y1_limits(x);
    let gap = (x * x / 8.0 + 2.5 * x + pow32_m1(x)).abs();
    (0.5 * (lo + hi), 0.5 * (hi - lo), gap)
}

/// `6 / (4 pi^2 sqrt(8 |y1 - r|))`: the joint weight `6/|J_{x,y1}|` times `dy1/dphi`.
pub fn joint_weight_phi(x: f64, phi: f64) -> f64 {
    let (_, half, gap) = y1_parametrization(x);
    let d = 2.0 * half * (0.5 * phi).sin().powi(2) + gap;
    6.0 / (4.0 * PI2 * (8.0 * d).sqrt())
}

/// `12 int |J_{x,y1}|^{-1} dy1` by quadrature, the defining integral of `j1`.
///
/// With `y1 = mid - half cos(phi)` the square-root ends cancel against `dy1`. The
/// integrand stays bounded as the interval closes at `x = 8`.
pub fn j1_direct(x: f64, rel_tol: f64) -> Result<f64> {
    check_x(x)?;
    let r = tanh_sinh_breaks(|phi, _, _| 2.0 * joint_weight_phi(x, phi), &[0.0, PI], rel_tol, 1e-300)?;
    Ok(r.value)
}

/// `y2 = sqrt(x^3 - y1^2 - 4 x y1 - x^2 - 2 y1 - x)` on the joint surface.
pub fn y2_on_surface(x: f64, y1: f64) -> f64 {
    (x * x * x - y1 * y1 - 4.0 * x * y1 - x * x - 2.0 * y1 - x).max(0.0).sqrt()
}

/// Half-width `|y2| <= b(y1)` of the region, `b = sqrt((a-1)(5-a)^3)/2`, `a = sqrt(5 + 2 y1)`.
pub fn region_half_width(y1: f64) -> f64 {
    if !(-2.0..=10.0).contains(&y1) {
        return 0.0;
    }
    let a = (5.0 + 2.0 * y1).sqrt();
    0.5 * ((a - 1.0) * (5.0 - a).powi(3)).max(0.0).sqrt()
}

/// Discriminant of the cubic in `x`, up to a positive factor. Negative inside D'.
pub fn discriminant(y1: f64, y2: f64) -> f64 {
    let u = 1.0 + 3.0 * y1;
    let w = 11.0 + 90.0 * y1 + 27.0 * y1 * y1 + 27.0 * y2 * y2;
    w * w - 256.0 * u * u * u
}

/// The critical points `p-, p+ = (1 -+ 2s)/3` of the cubic, `s = sqrt(1+3y1)`, with
/// `F(p-) = (2-s)^3 (3s+2) / 27` and `F(p+) = (s+2)^3 (2-3s) / 27` in factored form,
/// so each keeps its digits where it vanishes (`y1 = 1` and `y1 = -5/27`).
fn fold_points(y1: f64) -> Option<[(f64, f64, f64); 2]> {
    let u = 1.0 + 3.0 * y1;
    if u < 0.0 {
        return None;
    }
    let s = u.sqrt();
    let two_minus_s = 3.0 * (1.0 - y1) / (2.0 + s);
    let three_s_minus_two = (5.0 + 27.0 * y1) / (3.0 * s + 2.0);
    // (p, c''(p)/2, F(p))
    Some([
        ((1.0 - 2.0 * s) / 3.0, -2.0 * s, two_minus_s.powi(3) * (3.0 * s + 2.0) / 27.0),
        ((1.0 + 2.0 * s) / 3.0, 2.0 * s, -(s + 2.0).powi(3) * three_s_minus_two / 27.0),
    ])
}

/// The two curves `27 y2^2 = -11 - 90 y1 - 27 y1^2 -+ 16 (1+3y1)^{3/2}` bounding D',
/// for `y1 >= -1/3`, as values of `27 y2^2`.
pub fn dprime_curves(y1: f64) -> Option<(f64, f64)> {
    let [(_, _, hi), (_, _, lo)] = fold_points(y1)?;
    Some((27.0 * lo, 27.0 * hi))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RegionLabel {
    A,
    B,
    Dprime,
    Boundary,
}

/// Labels a point of the `y`-region. `None` outside the region; `Boundary` within
/// `tol` of the region boundary or of a curve bounding D'.
pub fn classify_region(y1: f64, y2: f64, tol: f64) -> Option<RegionLabel> {
    let b = region_half_width(y1);
    if !(-2.0..=10.0).contains(&y1) || y2.abs() > b + tol {
        return None;
    }
    if b - y2.abs() <= tol {
        return Some(RegionLabel::Boundary);
    }
    let s = 27.0 * y2 * y2;
    if let Some((lo, hi)) = dprime_curves(y1) {
        let band = tol * (1.0 + s.abs() + hi.abs());
        let near = |c: f64| (s - c).abs() <= band;
        if (y1 < -5.0 / 27.0 && near(lo)) || (y1 <= 1.0 && near(hi)) {
            return Some(RegionLabel::Boundary);
        }
    }
    Some(if y1 < -1.0 / 3.0 {
        RegionLabel::A
    } else if y1 > 1.0 {
        RegionLabel::B
    } else {
        let (lo, hi) = dprime_curves(y1).expect("y1 >= -1/3");
        if y1 < -5.0 / 27.0 && s < lo {
            RegionLabel::A
        } else if s > hi {
            RegionLabel::B
        } else {
            RegionLabel::Dprime
        }
    })
}

/// Real roots of `x^3 + a x^2 + b x + c`, ascending, each polished by Newton steps.
pub fn real_cubic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let q = (a * a - 3.0 * b) / 9.0;
    let r = (2.0 * a * a * a - 9.0 * a * b + 27.0 * c) / 54.0;
    let mut roots = if r * r < q * q * q {
        let th = (r / (q * q * q).sqrt()).clamp(-1.0, 1.0).acos();
        let s = -2.0 * q.sqrt();
        (0..3)
            .map(|k| s * ((th + 2.0 * PI * k as f64) / 3.0).cos() - a / 3.0)
            .collect::<Vec<_>>()
    } else {
        let big = -r.signum() * (r.abs() + (r * r - q * q * q).sqrt()).cbrt();
        let small = if big == 0.0 { 0.0 } else { q / big };
        vec![big + small - a / 3.0]
    };
    polish_cubic_roots(a, b, c, &mut roots);
    roots.sort_by(|p, q| p.total_cmp(q));
    roots
}

/// A root `x` of the surface cubic over `(y1, y2)`, with `|S_varrho|` and `c'(x)` there.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SurfaceRoot {
    pub x: f64,
    pub s_abs: f64,
    pub dc: f64,
}

/// Roots of `x^3 - x^2 - (1+4y1) x - (y1^2 + 2y1 + y2^2)` with `x` in [-1, 8] and
/// `|S_varrho|^2 = 8y1 - x^2 - 4x + 16 > 0`.
pub fn surface_roots(y1: f64, y2: f64) -> Vec<SurfaceRoot> {
    surface_roots_raw(y1, y2)
        .into_iter()
        .filter_map(|(x, dc)| surface_root(y1, x, dc, 8.0 * y1 - x * x - 4.0 * x + 16.0))
        .collect()
}

/// As `surface_roots`, with the number of real roots supplied.
pub fn surface_roots_with_count(y1: f64, y2: f64, three: bool) -> Vec<SurfaceRoot> {
    surface_roots_raw_counted(y1, y2, Some(three))
        .into_iter()
        .filter_map(|(x, dc)| surface_root(y1, x, dc, 8.0 * y1 - x * x - 4.0 * x + 16.0))
        .collect()
}

/// All real roots with `c'(x)`, before the validity filter.
fn surface_roots_raw(y1: f64, y2: f64) -> Vec<(f64, f64)> {
    surface_roots_raw_counted(y1, y2, None)
}

fn surface_roots_raw_counted(y1: f64, y2: f64, three: Option<bool>) -> Vec<(f64, f64)> {
    let (a, b, c) = (-1.0, -(1.0 + 4.0 * y1), -(y1 * y1 + 2.0 * y1 + y2 * y2));
    let cubic = |x: f64| ((x + a) * x + b) * x + c;
    let found = match three {
        Some(t) => cubic_roots_counted(a, b, c, t),
        None => real_cubic_roots(a, b, c),
    };
    let mut xs: Vec<(f64, f64)> = found
        .into_iter()
        .map(|x| (x, (3.0 * x + 2.0 * a) * x + b))
        .collect();
    // A close pair straddles a critical point x_f of the cubic. Writing x = x_f + t,
    // t^2 (3 x_f - 1 + t) = -c(x_f) resolves the pair, and c'(x) = t (6 x_f - 2 + 3t),
    // to relative accuracy where the direct roots only give sqrt(eps).
    if xs.len() == 3 {
        for i in 0..2 {
            let (p, q) = (xs[i].0, xs[i + 1].0);
            if (q - p).abs() > 1e-3 {
                continue;
            }
            let disc = (4.0 + 12.0 * y1).max(0.0).sqrt();
            let mid = 0.5 * (p + q);
            let xf = [(1.0 - disc) / 3.0, (1.0 + disc) / 3.0]
                .into_iter()
                .min_by(|u, v| (u - mid).abs().total_cmp(&(v - mid).abs()))
                .unwrap();
            let (c0, c2) = (cubic(xf), 3.0 * xf - 1.0);
            if c0 * c2 > 0.0 {
                continue;
            }
            let t0 = (-c0 / c2).sqrt();
            for (k, sign) in [(i, -c2.signum()), (i + 1, c2.signum())] {
                let mut t = sign * t0;
                for _ in 0..4 {
                    let f = t * t * (c2 + t) + c0;
                    let d = t * (2.0 * c2 + 3.0 * t);
                    if d == 0.0 {
                        break;
                    }
                    t -= f / d;
                }
                xs[k] = (xf + t, t * (2.0 * c2 + 3.0 * t));
            }
        }
    }
    xs
}

/// Cardano's closed form for the three roots, `eps_j = e^{2 pi i (j-1)/3}`.
/// Kept as a cross-check of `surface_roots`.
pub fn cardano_roots(y1: f64, y2: f64) -> [Complex64; 3] {
    let w = 11.0 + 90.0 * y1 + 27.0 * y1 * y1 + 27.0 * y2 * y2;
    let p = (Complex64::new(-w, 0.0) + Complex64::new(discriminant(y1, y2), 0.0).sqrt()).powf(1.0 / 3.0);
    let (k1, k2) = (2f64.powf(2.0 / 3.0), 8.0 * 2f64.cbrt() * (1.0 + 3.0 * y1));
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for (j, o) in out.iter_mut().enumerate() {
        let eps = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / 3.0);
        *o = (Complex64::new(2.0, 0.0) - eps * p * k1 - eps.conj() * k2 / p) / 6.0;
    }
    out
}

/// Weight of `y = chi_rho2` at `y1 + i y2`. `H`: `sum_j 3 / (pi^2 |S_j| |c'(x_j)|)`.
/// `G` (conjectural): `sum_j |S_j| / (2 pi^2 |c'(x_j)|)`. The number of roots comes
/// from the A / B / D' label; zero outside the region.
pub fn region_weight(kind: RegionWeight, y1: f64, y2: f64) -> Result<f64> {
    match classify_region(y1, y2, 1e-12) {
        None => Ok(0.0),
        Some(RegionLabel::Boundary) => Err(Error::OnBoundary(format!("({y1}, {y2})"))),
        Some(label) => {
            let roots = surface_roots_with_count(y1, y2, label == RegionLabel::Dprime);
            Ok(weight_from_roots(kind, &roots))
        }
    }
}

pub fn j2(y1: f64, y2: f64) -> Result<f64> {
    region_weight(RegionWeight::H, y1, y2)
}

pub fn j4(y1: f64, y2: f64) -> Result<f64> {
    region_weight(RegionWeight::G, y1, y2)
}

/// What sits at a breakpoint of a `y1`-slice, with the point `x = p` of the surface
/// lying over it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BreakKind {
    Plain,
    /// A curve bounding D': `p` is a critical point of the cubic, where two roots
    /// merge, and `c2 = c''(p)/2`.
    Fold(f64, f64),
    /// Over the cusp of D' (`y1 < -1/3`): `y2^2 = F(1/3)`, with the inflection point
    /// `x = 1/3` of the cubic over it.
    Cusp,
    /// The region boundary, where `|S_varrho|` vanishes at `x = p`.
    Edge(f64),
}

/// Breakpoints in `y2 >= 0` for the slice at `y1`: the curves bounding D' (or the
/// point nearest its cusp when `y1 < -1/3`) and the region boundary.
///
/// Fold positions are taken as `sqrt(F(p))` at the matching critical point, so that
/// `F(p) - y2^2` is exactly `(Y - y2)(Y + y2)` for the quadrature. The edge uses the
/// closed-form half width.
pub fn slice_breaks(y1: f64) -> Vec<(f64, BreakKind)> {
    if !(-2.0..=10.0).contains(&y1) {
        return vec![(0.0, BreakKind::Plain)];
    }
    // Closed forms: F(x_e) cancels badly as the region pinches at either end.
    let xe = 2.0 * (5.0 + 2.0 * y1).sqrt() - 2.0;
    let b = region_half_width(y1);
    let b2 = b * b;
    if b2 <= 0.0 {
        return vec![(0.0, BreakKind::Plain)];
    }
    let mut cs: Vec<(f64, BreakKind)> = Vec::new();
    if let Some(mut folds) = fold_points(y1) {
        // F(p-) >= F(p+) exactly; rounding near the cusp must not swap them.
        folds[0].2 = folds[0].2.max(folds[1].2);
        for (p, c2, fp) in folds {
            if fp > 0.0 && fp < b2 {
                cs.push((fp.sqrt(), BreakKind::Fold(p, c2)));
            }
        }
    } else {
        let w = -11.0 - 90.0 * y1 - 27.0 * y1 * y1;
        if w > 0.0 && w / 27.0 < b2 {
            cs.push(((w / 27.0).sqrt(), BreakKind::Cusp));
        }
    }
    // Folds that coincide in floating point keep the lower curve (c2 > 0) first.
    let c2_of = |k: &BreakKind| if let BreakKind::Fold(_, c2) = k { -*c2 } else { 0.0 };
    cs.sort_by(|p, q| p.0.total_cmp(&q.0).then(c2_of(&p.1).total_cmp(&c2_of(&q.1))));
    let mut breaks = vec![(0.0, BreakKind::Plain)];
    breaks.extend(cs);
    breaks.push((b, BreakKind::Edge(xe)));
    breaks
}

/// For `y1 <= 1` every real root has `x > -1` (`F` is increasing left of its local
/// maximum and `F(-1) = -(1-y1)^2`), so no lower cut is applied there: a root that
/// rounds below -1 is still a genuine preimage. For `y1 > 1` roots below -1 are spurious.
fn surface_root(y1: f64, x: f64, dc: f64, s2: f64) -> Option<SurfaceRoot> {
    let lower_ok = y1 <= 1.0 || x >= -1.0;
    (lower_ok && x <= 8.0 + 1e-9 && s2 > 0.0 && dc != 0.0).then(|| SurfaceRoot {
        x,
        s_abs: s2.sqrt(),
        dc,
    })
}

/// Offsets `t` of the roots of `t^3 + c2 t^2 + cp`, i.e. of the cubic expanded about a
/// critical point, with `c'` at each. `three` gives the number of real roots, which
/// near a fold is better known from the segment than from a rounded discriminant.
fn fold_offsets(cp: f64, c2: f64, three: bool) -> Vec<(f64, f64)> {
    let g = |t: f64| cp + t * t * (c2 + t);
    let dg = |t: f64| t * (2.0 * c2 + 3.0 * t);
    let newton = |mut t: f64| {
        for _ in 0..8 {
            let d = dg(t);
            if d == 0.0 {
                break;
            }
            let step = g(t) / d;
            if !step.is_finite() {
                break;
            }
            t -= step;
            if step.abs() <= 1e-17 * t.abs() {
                break;
            }
        }
        t
    };
    let separated = cp.abs() < 1e-3 * c2.abs().powi(3);
    if three {
        let (t1, t2) = if separated {
            let r = (-cp / c2).max(0.0).sqrt();
            (newton(-r), newton(r))
        } else {
            let mut ts = cubic_roots_counted(c2, 0.0, cp, true);
            ts.sort_by(|u, v| u.abs().total_cmp(&v.abs()));
            (ts[0].min(ts[1]), ts[0].max(ts[1]))
        };
        let t3 = -c2 - t1 - t2;
        vec![
            (t1, (t1 - t2) * (t1 - t3)),
            (t2, (t2 - t1) * (t2 - t3)),
            (t3, (t3 - t1) * (t3 - t2)),
        ]
    } else {
        let t = if separated {
            newton(-c2 - cp / (c2 * c2))
        } else {
            newton(cubic_roots_counted(c2, 0.0, cp, false)[0])
        };
        vec![(t, dg(t))]
    }
}

/// Roots of `x^3 + a x^2 + b x + c` when the number of real roots is known to be
/// three (`three`) or one, so a discriminant lost in rounding cannot flip the count.
pub fn cubic_roots_counted(a: f64, b: f64, c: f64, three: bool) -> Vec<f64> {
    let q = (a * a - 3.0 * b) / 9.0;
    let r = (2.0 * a * a * a - 9.0 * a * b + 27.0 * c) / 54.0;
    let mut roots = if three {
        let q = q.max(0.0);
        let th = if q == 0.0 { 0.0 } else { (r / (q * q * q).sqrt()).clamp(-1.0, 1.0).acos() };
        let s = -2.0 * q.sqrt();
        (0..3)
            .map(|k| s * ((th + 2.0 * PI * k as f64) / 3.0).cos() - a / 3.0)
            .collect::<Vec<_>>()
    } else {
        let d = (r * r - q * q * q).max(0.0);
        let big = -r.signum() * (r.abs() + d.sqrt()).cbrt();
        let small = if big == 0.0 { 0.0 } else { q / big };
        vec![big + small - a / 3.0]
    };
    polish_cubic_roots(a, b, c, &mut roots);
    roots.sort_by(|p, q| p.total_cmp(q));
    roots
}

fn polish_cubic_roots(a: f64, b: f64, c: f64, roots: &mut [f64]) {
    for x in roots.iter_mut() {
        for _ in 0..3 {
            let f = ((*x + a) * *x + b) * *x + c;
            let d = (3.0 * *x + 2.0 * a) * *x + b;
            if d == 0.0 {
                break;
            }
            let step = f / d;
            if !step.is_finite() {
                break;
            }
            *x -= step;
            if step.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
    }
}

/// Roots over `(y1, y2)` when `y2` lies close to a Fold or Edge breakpoint `anchor`,
/// with `offset = anchor - y2` supplied exactly by the caller. The cubic is expanded
/// about the surface point `p` over the anchor, with constant term
/// `anchor^2 - y2^2 = offset (anchor + y2)`, so the roots
/// near `p` and the small quantities `c'` (Fold) or `|S|^2` (Edge) keep their
/// digits as `gap -> 0`.
///
/// `three` says whether `y2` lies in D', which the caller knows from the segment.
pub fn surface_roots_anchored(
    y1: f64,
    y2: f64,
    anchor: f64,
    offset: f64,
    kind: BreakKind,
    three: bool,
) -> Vec<SurfaceRoot> {
    let df = |x: f64| (3.0 * x - 2.0) * x - (1.0 + 4.0 * y1);
    let cp = offset * (anchor + y2);
    let s2_of = |x: f64| 8.0 * y1 - x * x - 4.0 * x + 16.0;
    match kind {
        BreakKind::Plain => surface_roots(y1, y2),
        BreakKind::Edge(p) => {
            let base = surface_roots_raw(y1, y2);
            let w = p + 2.0;
            let (d1, c2) = (df(p), 3.0 * p - 1.0);
            let mut t = -cp / d1;
            for _ in 0..4 {
                let val = cp + t * (d1 + t * (c2 + t));
                let der = d1 + t * (2.0 * c2 + 3.0 * t);
                t -= val / der;
            }
            let near = (p + t, d1 + t * (2.0 * c2 + 3.0 * t), -t * (2.0 * w + t));
            let closest = base
                .iter()
                .enumerate()
                .min_by(|(_, u), (_, v)| (u.0 - p).abs().total_cmp(&(v.0 - p).abs()))
                .map(|(i, _)| i);
            let mut out: Vec<SurfaceRoot> = Vec::new();
            let mut replaced = false;
            for (i, (x, dc)) in base.iter().enumerate() {
                if Some(i) == closest && (x - p).abs() < 1e-2 {
                    replaced = true;
                    continue;
                }
                out.extend(surface_root(y1, *x, *dc, s2_of(*x)));
            }
            if replaced || base.is_empty() {
                out.extend(surface_root(y1, near.0, near.1, near.2));
            }
            out
        }
        BreakKind::Cusp => {
            // Depressed about the inflection point: t^3 + P t + Q with Q = cp.
            let pp = -4.0 * (1.0 + 3.0 * y1) / 3.0;
            cubic_roots_counted(0.0, pp, cp, three)
                .into_iter()
                .filter_map(|t| surface_root(y1, 1.0 / 3.0 + t, 3.0 * t * t + pp, s2_of(1.0 / 3.0 + t)))
                .collect()
        }
        BreakKind::Fold(p, c2) => {
            let mut out: Vec<SurfaceRoot> = fold_offsets(cp, c2, three)
                .into_iter()
                .filter_map(|(t, dc)| surface_root(y1, p + t, dc, s2_of(p + t)))
                .collect();
            out.sort_by(|u, v| u.x.total_cmp(&v.x));
            out
        }
    }
}

/// Which weight of the `y`-region to integrate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RegionWeight {
    /// `J2`, H family.
    H,
    /// `J4`, G family.
    G,
}

pub fn weight_from_roots(kind: RegionWeight, roots: &[SurfaceRoot]) -> f64 {
    match kind {
        RegionWeight::H => roots.iter().map(|r| 3.0 / (PI2 * r.s_abs * r.dc.abs())).sum(),
        RegionWeight::G => roots.iter().map(|r| r.s_abs / (2.0 * PI2 * r.dc.abs())).sum(),
    }
}

const ANCHOR_GAP: f64 = 1e-3;

/// `int w(y1, y2) (g(y1 + i y2) + g(y1 - i y2)) dy2` over `0 <= y2 <= b(y1)`, with its error estimate.
pub fn region_slice<G>(kind: RegionWeight, g: &G, dim: usize, y1: f64, rel_tol: f64, abs_tol: f64) -> (Vec<f64>, f64)
where
    G: Fn(Complex64) -> Vec<f64>,
{
    let breaks = slice_breaks(y1);
    if breaks.len() < 2 {
        return (vec![0.0; dim], 0.0);
    }
    let mut total = vec![0.0; dim];
    let mut err = 0.0;
    for seg in breaks.windows(2) {
        let ((lo, klo), (hi, khi)) = (seg[0], seg[1]);
        // D' lies below the fold over p-, which has c2 < 0.
        let three = matches!(khi, BreakKind::Fold(_, c2) if c2 < 0.0);
        let inner = |y2: f64, da: f64, db: f64| -> Vec<f64> {
            let roots = if klo != BreakKind::Plain && da <= db && da < ANCHOR_GAP {
                surface_roots_anchored(y1, y2, lo, -da, klo, three)
            } else if khi != BreakKind::Plain && db < ANCHOR_GAP {
                surface_roots_anchored(y1, y2, hi, db, khi, three)
            } else {
                surface_roots_with_count(y1, y2, three)
            };
            let wt = weight_from_roots(kind, &roots);
            if wt == 0.0 || !wt.is_finite() {
                return vec![0.0; dim];
            }
            let up = g(Complex64::new(y1, y2));
            let dn = g(Complex64::new(y1, -y2));
            up.iter().zip(dn).map(|(u, d)| wt * (u + d)).collect()
        };
        let (v, e) = tanh_sinh_vec_estimate(inner, dim, &[lo, hi], rel_tol, abs_tol);
        for (t, x) in total.iter_mut().zip(v) {
            *t += x;
        }
        err += e;
    }
    (total, err)
}

/// `int w(y) g(y) dy1 dy2` over the region, as an iterated `y1`-outer, `y2`-inner
/// tanh-sinh integral split at the curves bounding D'. `g` returns `dim` values.
pub fn integrate_region<G>(kind: RegionWeight, g: G, dim: usize, rel_tol: f64, abs_tol: f64) -> Result<Vec<f64>>
where
    G: Fn(Complex64) -> Vec<f64>,
{
    let outer = |y1: f64, _: f64, _: f64| region_slice(kind, &g, dim, y1, rel_tol, abs_tol).0;
    let (v, _) = tanh_sinh_vec_breaks(outer, dim, &[-2.0, -1.0 / 3.0, -5.0 / 27.0, 1.0, 10.0], rel_tol, abs_tol)?;
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_roots_are_roots() {
        for (a, b, c) in [(-1.0, -3.0, 0.5), (0.0, 0.0, -8.0), (-6.0, 11.0, -6.0)] {
            for x in real_cubic_roots(a, b, c) {
                assert!((((x + a) * x + b) * x + c).abs() < 1e-12);
            }
        }
        assert_eq!(real_cubic_roots(-6.0, 11.0, -6.0).len(), 3);
    }

    #[test]
    fn j1_endpoints_finite() {
        assert!(j1(-1.0).unwrap().is_finite());
        assert!(j1(8.0).unwrap().is_finite());
        assert!(j1(0.0).unwrap().is_infinite());
        assert!(j1(9.0).is_err());
    }
}
