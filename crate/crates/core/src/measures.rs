//! Closed-form spectral densities, their quadrature, and the check against the
//! exact moments. Also the discrete measures of A^(l)* and their limits.

use std::f64::consts::PI;
use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::d61::{self, RegionWeight};
use crate::elliptic::{ellip_e_c, ellip_k_c};
use crate::error::{Error, Result};
use crate::graphs::{build_graph, Family, MomentOracle};
use crate::groups::GroupName;
use crate::orbit::fundamental_generators;
use crate::quad::{tanh_sinh_vec_breaks, QuadratureResult};
use crate::seq::catalan;

const PI2: f64 = PI * PI;
const TRAPEZOID_N: usize = 64;
const REL_TOL: f64 = 1e-11;
/// Absolute floor for components whose exact value is 0.
const ABS_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Generator {
    Rho1,
    Rho2,
    Joint,
}

/// Where a density lives, and in which coordinates `eval_density` reads a point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Support {
    /// `[lo, hi]`, point `[x]`.
    Interval { lo: f64, hi: f64 },
    /// The unit circle, point `[phi]`, density in `dphi`.
    Circle,
    /// The disc `|z| <= radius`, point `[r, phi]`, density in `dr dphi`.
    Disc { radius: f64 },
    /// The PSU(3) region of `chi_rho2`, point `[y1, y2]`.
    Region,
    /// The joint spectrum of `(chi_rho1, chi_rho2)`; coordinates per group.
    Joint,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum WeightId {
    /// `1 / (2 pi)` on the circle.
    Uniform,
    /// `1 / (pi sqrt(h^2 - (x-c)^2))`.
    Arcsine { center: f64, half: f64 },
    /// `2 sqrt(h^2 - (x-c)^2) / (pi h^2)`.
    Semicircle { center: f64, half: f64 },
    /// `1 / (pi^2 sqrt(4 - r^2))` in `dr dphi`.
    DiscArcsine,
    /// `sqrt(4 - r^2) / (2 pi^2)` in `dr dphi`.
    DiscSemicircle,
    /// `K(1 - x^2/16) / (2 pi^2)`.
    EllipticK,
    /// `((x^2+16) K(1 - x^2/16) - 32 E(1 - x^2/16)) / (8 pi^2)`.
    EllipticKE,
    /// `sqrt(3-y) / (2 pi sqrt(y+1))`.
    NuOdd,
    Psu1,
    Psu2,
    Psu3,
    Psu4,
    /// `|Gamma| / |J|` on the joint spectrum of the group.
    JointInverseJacobian,
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityEntry {
    pub id: String,
    pub group: GroupName,
    pub generator: Generator,
    pub family: Family,
    pub support: Support,
    pub weight_id: WeightId,
    pub conjectural: bool,
}

impl DensityEntry {
    /// Names of the coordinates `eval_density` expects.
    pub fn coordinates(&self) -> &'static [&'static str] {
        use GroupName::*;
        match (self.support, self.group) {
            (Support::Interval { .. }, _) => &["x"],
            (Support::Circle, _) => &["phi"],
            (Support::Disc { .. }, _) => &["r", "phi"],
            (Support::Region, _) => &["y1", "y2"],
            (Support::Joint, Z0) => &["phi1", "phi2"],
            (Support::Joint, Z2_2) => &["phi", "y"],
            (Support::Joint, Z2_3) => &["r", "phi"],
            (Support::Joint, D6_1) => &["x", "y1"],
            (Support::Joint, _) => &["x", "y"],
        }
    }
}

fn entry(group: GroupName, generator: Generator, family: Family, support: Support, weight_id: WeightId) -> DensityEntry {
    let g = match generator {
        Generator::Rho1 => "rho1",
        Generator::Rho2 => "rho2",
        Generator::Joint => "joint",
    };
    DensityEntry {
        id: format!("{group}-{g}-{family}"),
        group,
        generator,
        family,
        support,
        weight_id,
        conjectural: group == GroupName::D6_1 && family == Family::G,
    }
}

/// Every density: one per (group, generator, family), the joint `|Gamma|/|J|`
/// densities, and the two limits of A^(l)*.
pub fn catalog() -> Vec<DensityEntry> {
    use Family::{G, H};
    use Generator::*;
    use GroupName::*;
    use WeightId::*;
    let iv = |lo: f64, hi: f64| Support::Interval { lo, hi };
    let arc = |c: f64, h: f64| Arcsine { center: c, half: h };
    let semi = |c: f64, h: f64| Semicircle { center: c, half: h };
    let disc = Support::Disc { radius: 2.0 };
    let mut out = vec![
        entry(Z0, Rho1, H, Support::Circle, Uniform),
        entry(Z0, Rho1, G, Support::Circle, Uniform),
        entry(Z0, Rho2, H, Support::Circle, Uniform),
        entry(Z0, Rho2, G, Support::Circle, Uniform),
        entry(Z2_2, Rho1, H, Support::Circle, Uniform),
        entry(Z2_2, Rho1, G, Support::Circle, Uniform),
        entry(Z2_2, Rho2, H, iv(-2.0, 2.0), arc(0.0, 2.0)),
        entry(Z2_2, Rho2, G, iv(-2.0, 2.0), semi(0.0, 2.0)),
        entry(Z2_3, Rho1, H, disc, DiscArcsine),
        entry(Z2_3, Rho1, G, disc, DiscSemicircle),
        entry(Z2_3, Rho2, H, Support::Circle, Uniform),
        entry(Z2_3, Rho2, G, Support::Circle, Uniform),
        entry(D4_1, Rho1, H, iv(-2.0, 2.0), arc(0.0, 2.0)),
        entry(D4_1, Rho1, G, iv(-2.0, 2.0), semi(0.0, 2.0)),
        entry(D4_1, Rho2, H, iv(-2.0, 2.0), arc(0.0, 2.0)),
        entry(D4_1, Rho2, G, iv(-2.0, 2.0), semi(0.0, 2.0)),
        entry(D4_2, Rho1, H, iv(-4.0, 4.0), EllipticK),
        entry(D4_2, Rho1, G, iv(-4.0, 4.0), EllipticKE),
        entry(D4_2, Rho2, H, iv(-1.0, 3.0), arc(1.0, 2.0)),
        entry(D4_2, Rho2, G, iv(-1.0, 3.0), NuOdd),
        entry(D6_1, Rho1, H, iv(-1.0, 8.0), Psu1),
        entry(D6_1, Rho1, G, iv(-1.0, 8.0), Psu3),
        entry(D6_1, Rho2, H, Support::Region, Psu2),
        entry(D6_1, Rho2, G, Support::Region, Psu4),
    ];
    for g in GroupName::MEASURE {
        out.push(entry(g, Joint, H, Support::Joint, JointInverseJacobian));
    }
    let mut even = entry(D4_2, Rho2, G, iv(-1.0, 3.0), semi(1.0, 2.0));
    even.id = "Ainf-even".into();
    let mut odd = entry(D4_2, Rho2, G, iv(-1.0, 3.0), NuOdd);
    odd.id = "Ainf-odd".into();
    out.push(even);
    out.push(odd);
    out
}

pub fn find_entry(id: &str) -> Result<DensityEntry> {
    catalog().into_iter().find(|e| e.id == id).ok_or_else(|| {
        let ids: Vec<String> = catalog().into_iter().map(|e| e.id).collect();
        Error::InvalidArgument(format!("unknown density `{id}`; known: {}", ids.join(", ")))
    })
}

/// Gap-aware 1-D densities: `da = x - lo`, `db = hi - x` on the whole support.
fn interval_density(w: WeightId, x: f64, da: f64, db: f64) -> Result<f64> {
    Ok(match w {
        WeightId::Arcsine { .. } => 1.0 / (PI * (da * db).sqrt()),
        WeightId::Semicircle { half, .. } => 2.0 * (da * db).sqrt() / (PI * half * half),
        WeightId::EllipticK => {
            if x == 0.0 {
                f64::INFINITY
            } else {
                ellip_k_c(x * x / 16.0) / (2.0 * PI2)
            }
        }
        WeightId::EllipticKE => {
            let m1 = x * x / 16.0;
            if m1 == 0.0 {
                return Ok(f64::INFINITY);
            }
            (((x * x + 16.0) * ellip_k_c(m1) - 32.0 * ellip_e_c(m1)) / (8.0 * PI2)).max(0.0)
        }
        WeightId::NuOdd => db.sqrt() / (2.0 * PI * da.sqrt()),
        WeightId::Psu1 => d61::j1(x)?,
        WeightId::Psu3 => d61::j3(x)?,
        other => return Err(Error::Internal(format!("{other:?} is not an interval weight"))),
    })
}

/// The density of `e` at `point` (coordinates as in `DensityEntry::coordinates`).
/// Zero off the support, `+inf` at integrable singular points.
pub fn eval_density(e: &DensityEntry, point: &[f64]) -> Result<f64> {
    let need = e.coordinates().len();
    if point.len() != need {
        return Err(Error::InvalidArgument(format!(
            "{} takes {need} coordinate(s) ({}), got {}",
            e.id,
            e.coordinates().join(", "),
            point.len()
        )));
    }
    match e.support {
        Support::Interval { lo, hi } => {
            let x = point[0];
            if !(lo..=hi).contains(&x) {
                return Ok(0.0);
            }
            interval_density(e.weight_id, x, x - lo, hi - x)
        }
        Support::Circle => Ok(1.0 / (2.0 * PI)),
        Support::Disc { radius } => {
            let r = point[0];
            if !(0.0..=radius).contains(&r) {
                return Ok(0.0);
            }
            let q = (2.0 - r) * (2.0 + r);
            Ok(match e.weight_id {
                WeightId::DiscArcsine => 1.0 / (PI2 * q.sqrt()),
                _ => q.sqrt() / (2.0 * PI2),
            })
        }
        Support::Region => {
            let kind = if e.family == Family::H { RegionWeight::H } else { RegionWeight::G };
            d61::region_weight(kind, point[0], point[1])
        }
        Support::Joint => joint_density(e.group, point[0], point[1]),
    }
}

fn joint_density(group: GroupName, a: f64, b: f64) -> Result<f64> {
    use GroupName::*;
    let inside = |v: f64, h: f64| v.abs() <= h;
    Ok(match group {
        Z0 => 1.0 / (4.0 * PI2),
        Z2_2 => {
            if !inside(b, 2.0) {
                return Ok(0.0);
            }
            1.0 / (2.0 * PI2 * ((2.0 - b) * (2.0 + b)).sqrt())
        }
        Z2_3 => {
            if !(0.0..=2.0).contains(&a) {
                return Ok(0.0);
            }
            1.0 / (PI2 * ((2.0 - a) * (2.0 + a)).sqrt())
        }
        D4_1 => {
            if !inside(a, 2.0) || !inside(b, 2.0) {
                return Ok(0.0);
            }
            1.0 / (PI2 * ((4.0 - a * a) * (4.0 - b * b)).sqrt())
        }
        D4_2 => {
            let q = 4.0 * (b + 1.0) - a * a;
            if !(-1.0..=3.0).contains(&b) || q < 0.0 {
                return Ok(0.0);
            }
            1.0 / (PI2 * ((b + 1.0) * (3.0 - b) * q).sqrt())
        }
        D6_1 => {
            if !(-1.0..=8.0).contains(&a) {
                return Ok(0.0);
            }
            let (lo, hi) = d61::j1_y1_limits(a);
            if !(lo..=hi).contains(&b) {
                return Ok(0.0);
            }
            d61::joint_weight_x_y1(a, b, b - lo, hi - b)
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "{other} carries no joint spectral measure here"
            )))
        }
    })
}

/// `int f dmu_e` for a vector-valued `f(x, y)`. For 1-D entries the variable is
/// passed as `x`; joint entries pass `(chi_rho1, chi_rho2)`.
pub fn integrate_entry(e: &DensityEntry, f: &dyn Fn(Complex64, Complex64) -> Vec<f64>, dim: usize, rel_tol: f64) -> Result<(Vec<f64>, f64)> {
    let c0 = Complex64::new(0.0, 0.0);
    let real = |x: f64| Complex64::new(x, 0.0);
    let circle = |phi: f64| Complex64::from_polar(1.0, phi);
    let abs_tol = ABS_TOL;
    match e.support {
        Support::Interval { lo, hi } => {
            let mut breaks = vec![lo];
            if matches!(e.weight_id, WeightId::EllipticK | WeightId::EllipticKE | WeightId::Psu1 | WeightId::Psu3) {
                breaks.push(0.0);
            }
            breaks.push(hi);
            // Gaps to the ends of the support, exact on the outer segments.
            let w = e.weight_id;
            tanh_sinh_vec_breaks(
                |x, da, db| {
                    let (ga, gb) = if breaks.len() == 2 {
                        (da, db)
                    } else if x < 0.0 {
                        (da, hi - x)
                    } else {
                        (x - lo, db)
                    };
                    match interval_density(w, x, ga, gb) {
                        Ok(d) if d.is_finite() && d > 0.0 => f(real(x), c0).into_iter().map(|v| d * v).collect(),
                        _ => vec![0.0; dim],
                    }
                },
                dim,
                &breaks,
                rel_tol,
                abs_tol,
            )
        }
        Support::Circle => Ok((trapezoid_vec(|phi| f(circle(phi), c0), dim), 0.0)),
        Support::Disc { radius } => {
            let disc_arcsine = e.weight_id == WeightId::DiscArcsine;
            tanh_sinh_vec_breaks(
                |r, _, db| {
                    let q = db * (2.0 * radius - db);
                    let d = if disc_arcsine { 1.0 / (PI2 * q.sqrt()) } else { q.sqrt() / (2.0 * PI2) };
                    // Trapezoid in phi returns the mean; the density is per dphi.
                    trapezoid_vec(|phi| f(Complex64::from_polar(r, phi), circle(2.0 * phi)), dim)
                        .into_iter()
                        .map(|v| 2.0 * PI * d * v)
                        .collect()
                },
                dim,
                &[0.0, radius],
                rel_tol,
                abs_tol,
            )
        }
        Support::Region => {
            let kind = if e.family == Family::H { RegionWeight::H } else { RegionWeight::G };
            Ok((d61::integrate_region(kind, |y| f(y, c0), dim, rel_tol.max(1e-10), 1e-14)?, 0.0))
        }
        Support::Joint => integrate_joint(e.group, f, dim, rel_tol),
    }
}

/// Mean of `f(phi)` over `TRAPEZOID_N` equispaced angles.
fn trapezoid_vec<F: Fn(f64) -> Vec<f64>>(f: F, dim: usize) -> Vec<f64> {
    let mut acc = vec![0.0; dim];
    for k in 0..TRAPEZOID_N {
        for (a, v) in acc.iter_mut().zip(f(2.0 * PI * k as f64 / TRAPEZOID_N as f64)) {
            *a += v;
        }
    }
    acc.iter().map(|a| a / TRAPEZOID_N as f64).collect()
}

fn integrate_joint(group: GroupName, f: &dyn Fn(Complex64, Complex64) -> Vec<f64>, dim: usize, rel_tol: f64) -> Result<(Vec<f64>, f64)> {
    use GroupName::*;
    let real = |x: f64| Complex64::new(x, 0.0);
    let circle = |phi: f64| Complex64::from_polar(1.0, phi);
    let abs_tol = ABS_TOL;
    let scale = |v: Vec<f64>, d: f64| -> Vec<f64> { v.into_iter().map(|x| x * d).collect() };
    match group {
        Z0 => Ok((trapezoid_vec(|a| trapezoid_vec(|b| f(circle(a), circle(b)), dim), dim), 0.0)),
        Z2_2 => tanh_sinh_vec_breaks(
            |y, da, db| {
                let d = 1.0 / (PI * (da * db).sqrt());
                scale(trapezoid_vec(|phi| f(circle(phi), real(y)), dim), d)
            },
            dim,
            &[-2.0, 2.0],
            rel_tol,
            abs_tol,
        ),
        Z2_3 => {
            let e = entry(Z2_3, Generator::Rho1, Family::H, Support::Disc { radius: 2.0 }, WeightId::DiscArcsine);
            integrate_entry(&e, f, dim, rel_tol)
        }
        D4_1 => tanh_sinh_vec_breaks(
            |y, ya, yb| {
                let dy = 1.0 / (PI * (ya * yb).sqrt());
                let inner = tanh_sinh_vec_breaks(
                    |x, xa, xb| scale(f(real(x), real(y)), 1.0 / (PI * (xa * xb).sqrt())),
                    dim,
                    &[-2.0, 2.0],
                    rel_tol,
                    abs_tol,
                );
                inner.map(|(v, _)| scale(v, dy)).unwrap_or_else(|_| vec![f64::NAN; dim])
            },
            dim,
            &[-2.0, 2.0],
            rel_tol,
            abs_tol,
        ),
        D4_2 => tanh_sinh_vec_breaks(
            |y, ya, yb| {
                // 4(y+1) - x^2 = (c - x)(c + x), and the inner rule supplies both gaps.
                let c = 2.0 * ya.sqrt();
                let dy = 1.0 / (PI * (ya * yb).sqrt());
                let inner = tanh_sinh_vec_breaks(
                    |x, xa, xb| scale(f(real(x), real(y)), 1.0 / (PI * (xa * xb).sqrt())),
                    dim,
                    &[-c, c],
                    rel_tol,
                    abs_tol,
                );
                inner.map(|(v, _)| scale(v, dy)).unwrap_or_else(|_| vec![f64::NAN; dim])
            },
            dim,
            &[-1.0, 3.0],
            rel_tol,
            abs_tol,
        ),
        D6_1 => tanh_sinh_vec_breaks(
            |x, _, _| d61_joint_slice(x, f, dim, rel_tol),
            dim,
            &[-1.0, 0.0, 8.0],
            rel_tol,
            abs_tol,
        ),
        other => Err(Error::InvalidArgument(format!(
            "{other} carries no joint spectral measure here"
        ))),
    }
}

/// `int (f(x, y) + f(x, conj y)) 6/|J_{x,y1}| dy1` over the `y1`-limits at `x`,
/// with `y1 = mid - half cos(phi)` absorbing both inverse-square-root ends.
fn d61_joint_slice(x: f64, f: &dyn Fn(Complex64, Complex64) -> Vec<f64>, dim: usize, rel_tol: f64) -> Vec<f64> {
    let (mid, half, _) = d61::y1_parametrization(x);
    let xc = Complex64::new(x, 0.0);
    let r = tanh_sinh_vec_breaks(
        |phi, _, _| {
            let y1 = mid - half * phi.cos();
            let y2 = d61::y2_on_surface(x, y1);
            let w = d61::joint_weight_phi(x, phi);
            let up = f(xc, Complex64::new(y1, y2));
            let dn = f(xc, Complex64::new(y1, -y2));
            up.iter().zip(dn).map(|(u, d)| w * (u + d)).collect()
        },
        dim,
        &[0.0, PI],
        rel_tol,
        1e-300,
    );
    r.map(|(v, _)| v).unwrap_or_else(|_| vec![f64::NAN; dim])
}

/// Monomials `x^m1 conj(x)^n1 y^m2 conj(y)^n2` as interleaved (re, im) pairs.
fn monomials(powers: &[[u32; 4]]) -> impl Fn(Complex64, Complex64) -> Vec<f64> + '_ {
    let top = powers.iter().flat_map(|p| p.iter().copied()).max().unwrap_or(0) as usize;
    move |x: Complex64, y: Complex64| {
        let table = |z: Complex64| {
            let mut t = vec![Complex64::new(1.0, 0.0); top + 1];
            for k in 1..=top {
                t[k] = t[k - 1] * z;
            }
            t
        };
        let (px, pxc, py, pyc) = (table(x), table(x.conj()), table(y), table(y.conj()));
        let mut out = Vec::with_capacity(2 * powers.len());
        for p in powers {
            let v = px[p[0] as usize] * pxc[p[1] as usize] * py[p[2] as usize] * pyc[p[3] as usize];
            out.push(v.re);
            out.push(v.im);
        }
        out
    }
}

/// `int z^m conj(z)^n dmu` with `z` the entry's variable (`chi_rho1` for joint entries).
pub fn quad_moment(e: &DensityEntry, m: u32, n: u32) -> Result<QuadratureResult> {
    quad_joint_moment(e, [m, n, 0, 0])
}

/// `int x^m1 conj(x)^n1 y^m2 conj(y)^n2 dmu`; only joint entries use `y`.
pub fn quad_joint_moment(e: &DensityEntry, p: [u32; 4]) -> Result<QuadratureResult> {
    if p.iter().sum::<u32>() > 12 {
        return Err(Error::InvalidArgument("moment order above 12".into()));
    }
    let powers = [p];
    let (v, err) = integrate_entry(e, &monomials(&powers), 2, REL_TOL)?;
    Ok(QuadratureResult {
        value: v[0],
        error: err,
        nodes: 0,
    })
}

/// Exact moments of the entry from the constant-term oracle (or, for the even
/// A^(infty)* limit, from the shifted-semicircle moments `sum_k C(m,k) c_{k/2}`).
pub struct EntryOracle {
    group: Option<MomentOracle>,
    family: Family,
    generator: Generator,
    even_limit: bool,
}

impl EntryOracle {
    pub fn new(e: &DensityEntry) -> Result<Self> {
        let even_limit = e.id == "Ainf-even";
        Ok(EntryOracle {
            group: if even_limit { None } else { Some(MomentOracle::new(e.group)?.with_cap(40)) },
            family: e.family,
            generator: e.generator,
            even_limit,
        })
    }

    pub fn moment(&mut self, p: [u32; 4]) -> Result<BigInt> {
        if self.even_limit {
            let m = (p[0] + p[1]) as u64;
            let mut s = BigInt::from(0);
            for k in (0..=m).step_by(2) {
                s += crate::seq::binomial(m, k) * catalan(k / 2);
            }
            return Ok(s);
        }
        let o = self.group.as_mut().expect("group oracle");
        match self.generator {
            Generator::Rho1 => o.moment(self.family, p[0], p[1], 0, 0),
            Generator::Rho2 => o.moment(self.family, 0, 0, p[0], p[1]),
            Generator::Joint => o.moment(self.family, p[0], p[1], p[2], p[3]),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentCheck {
    pub powers: [u32; 4],
    pub exact: String,
    pub quadrature: f64,
    pub imaginary: f64,
    pub rel_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MeasureReport {
    pub id: String,
    pub conjectural: bool,
    pub max_order: u32,
    pub mass: f64,
    pub max_rel_error: f64,
    pub worst: [u32; 4],
    pub checks: Vec<MomentCheck>,
    pub seconds: f64,
}

/// All power tuples of total order `<= max_order`: `(m, n)` for 1-D entries,
/// `(m1, n1, m2, n2)` for joint ones.
pub fn moment_powers(e: &DensityEntry, max_order: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for m1 in 0..=max_order {
        for n1 in 0..=max_order - m1 {
            if e.generator != Generator::Joint {
                out.push([m1, n1, 0, 0]);
                continue;
            }
            for m2 in 0..=max_order - m1 - n1 {
                for n2 in 0..=max_order - m1 - n1 - m2 {
                    out.push([m1, n1, m2, n2]);
                }
            }
        }
    }
    out
}

/// Quadrature moments of `e` against the exact ones for every power tuple of total
/// order `<= max_order`. The error of a moment is `|q - exact| / max(1, |exact|)`.
pub fn verify_measure(e: &DensityEntry, max_order: u32) -> Result<MeasureReport> {
    let start = Instant::now();
    let powers = moment_powers(e, max_order);
    let (v, _) = integrate_entry(e, &monomials(&powers), 2 * powers.len(), REL_TOL)?;
    let mut oracle = EntryOracle::new(e)?;
    let mut checks = Vec::with_capacity(powers.len());
    let (mut max_rel_error, mut worst) = (0.0f64, [0; 4]);
    let mut mass = f64::NAN;
    for (i, p) in powers.iter().enumerate() {
        let exact = oracle.moment(*p)?;
        let ex = exact.to_f64().unwrap_or(f64::INFINITY);
        let (q, qi) = (v[2 * i], v[2 * i + 1]);
        let rel = ((q - ex).abs().max(qi.abs())) / ex.abs().max(1.0);
        if *p == [0; 4] {
            mass = q;
        }
        if !(rel <= max_rel_error) {
            max_rel_error = rel;
            worst = *p;
        }
        checks.push(MomentCheck {
            powers: *p,
            exact: exact.to_string(),
            quadrature: q,
            imaginary: qi,
            rel_error: rel,
        });
    }
    Ok(MeasureReport {
        id: e.id.clone(),
        conjectural: e.conjectural,
        max_order,
        mass,
        max_rel_error,
        worst,
        checks,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// `verify_measure` over the whole catalog, in parallel, in catalog order.
/// Conjectural entries use `conjectural_order`, joint ones `joint_order`.
pub fn verify_catalog(max_order: u32, conjectural_order: u32, joint_order: u32) -> Vec<Result<MeasureReport>> {
    catalog()
        .par_iter()
        .map(|e| {
            let k = if e.conjectural {
                conjectural_order
            } else if e.generator == Generator::Joint {
                joint_order
            } else {
                max_order
            };
            verify_measure(e, k)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscreteMeasure {
    /// `(angle in radians, weight)`.
    pub atoms: Vec<(f64, f64)>,
}

impl DiscreteMeasure {
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }

    /// `sum w_k f(u_k)`.
    pub fn integrate<F: Fn(Complex64) -> f64>(&self, f: F) -> f64 {
        self.atoms.iter().map(|(a, w)| w * f(Complex64::from_polar(1.0, *a))).sum()
    }
}

/// The spectral measure of A^(l)* at the vertex of lowest Perron-Frobenius weight:
/// mass `alpha(u) / l` at each `l`-th root of unity, `alpha = 2 Im(u)^2` for even
/// `l` and `1 - Re(u)` for odd `l`.
pub fn a_l_star_discrete(l: u32) -> Result<DiscreteMeasure> {
    if l < 3 {
        return Err(Error::InvalidArgument(format!("A^(l)* needs l >= 3, got {l}")));
    }
    let atoms = (0..l)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / l as f64;
            let alpha = if l % 2 == 0 { 2.0 * a.sin().powi(2) } else { 1.0 - a.cos() };
            (a, alpha / l as f64)
        })
        .collect();
    Ok(DiscreteMeasure { atoms })
}

/// `|int y^m dA^(l)* - int y^m dnu|` with `y = 2 Re(u) + 1` and `nu` the
/// A^(infty)* density of the same parity as `l`.
pub fn a_l_star_limit_check(l: u32, m: u32) -> Result<f64> {
    let d = a_l_star_discrete(l)?;
    let discrete = d.integrate(|u| (2.0 * u.re + 1.0).powi(m as i32));
    let id = if l % 2 == 0 { "Ainf-even" } else { "Ainf-odd" };
    let limit = quad_moment(&find_entry(id)?, m, 0)?.value;
    Ok((discrete - limit).abs())
}

/// `(m, int y^m dnu_odd, closed walks of length m at the distinguished vertex of
/// G^{D4_2}_{rho2})` for `m <= max_m`.
pub fn nu_odd_path_moments(max_m: u32) -> Result<Vec<(u32, f64, BigInt)>> {
    let rho2 = fundamental_generators(GroupName::D4_2)?.rho2;
    let e = find_entry("Ainf-odd")?;
    let probe = build_graph(Family::G, GroupName::D4_2, rho2, 0)?;
    let graph = build_graph(Family::G, GroupName::D4_2, rho2, probe.required_radius(max_m, 0))?;
    (0..=max_m)
        .map(|m| Ok((m, quad_moment(&e, m, 0)?.value, graph.moments_paths(m, 0)?)))
        .collect()
}

/// For D4_1: `int |Gamma|/|J| dy` against the arcsine weight of `x`, at `n` interior
/// abscissae. Returns the largest absolute difference.
pub fn d41_pushforward_check(n: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..n {
        let x = -2.0 + 4.0 * (i as f64 + 0.5) / n as f64;
        let (v, _) = tanh_sinh_vec_breaks(
            // The joint density, with `4 - y^2` taken from the gaps.
            |_, ya, yb| vec![1.0 / (PI2 * ((4.0 - x * x) * ya * yb).sqrt())],
            1,
            &[-2.0, 2.0],
            1e-13,
            1e-300,
        )?;
        let marginal = interval_density(WeightId::Arcsine { center: 0.0, half: 2.0 }, x, x + 2.0, 2.0 - x)?;
        worst = worst.max((v[0] - marginal).abs());
    }
    Ok(worst)
}
