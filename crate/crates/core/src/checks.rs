//! The twelve acceptance checks, each with a pass flag, a one-line detail and
//! its runtime. Shared by `verify all` and the acceptance test.

use std::f64::consts::PI;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::graphs::{build_graph, Family, MomentOracle};
use crate::groups::{build_subgroup, GroupName, Weight};
use crate::jacobian::{
    conjecture_identity_residual, d61_s_rho_relation_residual, jacobian_consistency, jacobian_theta, psi,
    relation_residuals,
};
use crate::laurent::TorusPoint;
use crate::measures::{
    a_l_star_discrete, a_l_star_limit_check, catalog, d41_pushforward_check, nu_odd_path_moments, verify_measure,
    Generator, MeasureReport,
};
use crate::orbit::{fundamental_generators, orthogonality_check, OrbitKind};
use crate::seq::{
    catalan, central_binomial, count_walks_quadrant, multinomial_identity_sides, mz_closed_form, mz_ode_check,
    mz_series, mz_series_value, squared_catalan,
};

pub const DEFAULT_SEED: u64 = 20240531;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub number: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    /// Lines that are reported but do not gate the criterion.
    pub notes: Vec<String>,
    pub seconds: f64,
}

pub const NAMES: [&str; 12] = [
    "central-binomial moments of H^{Z2_3}_{rho1}",
    "Catalan moments of G^{Z2_3}_{rho1}",
    "squared-Catalan moments of G^{D4_2}_{rho1}",
    "quadrant walks and multinomial identity",
    "M(z) series, recurrence and closed form",
    "orthogonality of C- and S-functions",
    "Jacobian consistency and relations",
    "S_varrho / Jacobian identity",
    "measure-moment matching",
    "conjectural PSU(3) G-densities",
    "A^(l)* limits",
    "D4_1 pushforward",
];

fn finish(number: u32, start: Instant, outcome: Result<(bool, String, Vec<String>)>) -> CriterionResult {
    let (passed, detail, notes) = outcome.unwrap_or_else(|e| (false, format!("error: {e}"), vec![]));
    CriterionResult {
        number,
        name: NAMES[number as usize - 1],
        passed,
        detail,
        notes,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Moments `(m, n)` for `m, n <= upto` by path counting and by constant terms,
/// checked against `expect(m)` on the diagonal and 0 off it.
fn diagonal_moments(family: Family, expect: impl Fn(u64) -> BigInt, upto: u32) -> Result<(bool, String)> {
    let rho = fundamental_generators(GroupName::Z2_3)?.rho1;
    let probe = build_graph(family, GroupName::Z2_3, rho, 0)?;
    let graph = build_graph(family, GroupName::Z2_3, rho, probe.required_radius(upto, upto))?;
    let mut oracle = MomentOracle::new(GroupName::Z2_3)?;
    let mut bad = Vec::new();
    for m in 0..=upto {
        for n in 0..=upto {
            let want = if m == n { expect(m as u64) } else { BigInt::from(0) };
            let paths = graph.moments_paths(m, n)?;
            let ct = oracle.moment(family, m, n, 0, 0)?;
            if paths != want || ct != want {
                bad.push(format!("({m},{n}): paths {paths}, constant term {ct}, want {want}"));
            }
        }
    }
    let n = (upto + 1) * (upto + 1);
    Ok(if bad.is_empty() {
        (true, format!("{n} moments exact by paths and constant terms"))
    } else {
        (false, format!("{} of {n} wrong, first {}", bad.len(), bad[0]))
    })
}

pub fn criterion_1() -> CriterionResult {
    let start = Instant::now();
    let r = diagonal_moments(Family::H, central_binomial, 10).map(|(ok, d)| (ok, d, vec![]));
    let mut out = finish(1, start, r);
    if out.seconds >= 10.0 {
        out.passed = false;
        out.detail += &format!("; {:.1} s exceeds 10 s", out.seconds);
    }
    out
}

pub fn criterion_2() -> CriterionResult {
    let start = Instant::now();
    let r = diagonal_moments(Family::G, catalan, 10).map(|(ok, d)| (ok, d, vec![]));
    let mut out = finish(2, start, r);
    if out.seconds >= 10.0 {
        out.passed = false;
        out.detail += &format!("; {:.1} s exceeds 10 s", out.seconds);
    }
    out
}

pub fn criterion_3() -> CriterionResult {
    let start = Instant::now();
    let r = (|| -> Result<(bool, String, Vec<String>)> {
        let rho = fundamental_generators(GroupName::D4_2)?.rho1;
        let probe = build_graph(Family::G, GroupName::D4_2, rho, 0)?;
        let graph = build_graph(Family::G, GroupName::D4_2, rho, probe.required_radius(20, 0))?;
        let mut oracle = MomentOracle::new(GroupName::D4_2)?;
        let mut bad = Vec::new();
        for k in 0..=20u32 {
            let want = if k % 2 == 0 { squared_catalan(k as u64 / 2) } else { BigInt::from(0) };
            let paths = graph.moments_paths(k, 0)?;
            let ct = oracle.moment(Family::G, k, 0, 0, 0)?;
            if paths != want || ct != want {
                bad.push(format!("order {k}: paths {paths}, constant term {ct}, want {want}"));
            }
        }
        Ok(match bad.first() {
            None => (true, "orders 0..20 exact by paths and constant terms".into(), vec![]),
            Some(b) => (false, format!("{} orders wrong, first {b}", bad.len()), vec![]),
        })
    })();
    let mut out = finish(3, start, r);
    if out.seconds >= 30.0 {
        out.passed = false;
        out.detail += &format!("; {:.1} s exceeds 30 s", out.seconds);
    }
    out
}

pub fn criterion_4() -> CriterionResult {
    let start = Instant::now();
    let mut bad = Vec::new();
    for n in 0..=12u64 {
        let walks = count_walks_quadrant(n as usize);
        let (lhs, rhs) = multinomial_identity_sides(n);
        if walks != squared_catalan(n) || lhs != rhs {
            bad.push(format!("n={n}: walks {walks}, identity {lhs} vs {rhs}"));
        }
    }
    let r = Ok(match bad.first() {
        None => (true, "n = 0..12 exact".to_string(), vec![]),
        Some(b) => (false, b.clone(), vec![]),
    });
    let mut out = finish(4, start, r);
    if out.seconds >= 5.0 {
        out.passed = false;
        out.detail += &format!("; {:.1} s exceeds 5 s", out.seconds);
    }
    out
}

pub fn criterion_5() -> CriterionResult {
    let start = Instant::now();
    let r = (|| -> Result<(bool, String, Vec<String>)> {
        let series_ok = mz_series(13).iter().enumerate().all(|(n, c)| *c == squared_catalan(n as u64));
        let residual = mz_ode_check(13);
        let mut worst = 0.0f64;
        for z in [0.001, 0.01, 0.05] {
            let closed = mz_closed_form(z)?;
            let series = mz_series_value(z, 200);
            worst = worst.max((closed - series).abs());
        }
        let ok = series_ok && residual == BigInt::from(0) && worst < 1e-10;
        Ok((
            ok,
            format!("coefficients {series_ok}, recurrence residual {residual}, closed vs series {worst:.3e}"),
            vec![],
        ))
    })();
    finish(5, start, r)
}

pub fn criterion_6(seed: u64) -> CriterionResult {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    let mut count = 0;
    for name in GroupName::MEASURE {
        let g = build_subgroup(name);
        let order = BigInt::from(g.order());
        let pick = |rng: &mut ChaCha8Rng| loop {
            let w = Weight::new(rng.gen_range(-6..=6), rng.gen_range(-6..=6));
            if g.in_p_plus_plus(w) {
                break w;
            }
        };
        for i in 0..20 {
            let a = pick(&mut rng);
            // Every fourth pair repeats a weight so both outcomes are exercised.
            let b = if i % 4 == 0 { a } else { pick(&mut rng) };
            for kind in [OrbitKind::C, OrbitKind::S] {
                let got = orthogonality_check(&g, a, b, kind);
                let want = if a == b { order.clone() } else { BigInt::from(0) };
                count += 1;
                if got != want {
                    bad.push(format!("{name} {kind:?} {a} {b}: {got}, want {want}"));
                }
            }
        }
    }
    let r = Ok(match bad.first() {
        None => (true, format!("{count} constant terms exact"), vec![]),
        Some(b) => (false, format!("{} wrong, first {b}", bad.len()), vec![]),
    });
    finish(6, start, r)
}

pub fn criterion_7(seed: u64) -> CriterionResult {
    let start = Instant::now();
    let r = (|| -> Result<(bool, String, Vec<String>)> {
        let mut notes = Vec::new();
        let (mut rel, mut sq, mut rel_f64) = (0.0f64, 0.0f64, 0.0f64);
        for (i, name) in GroupName::MEASURE.iter().enumerate() {
            let rep = jacobian_consistency(*name, 1000, seed + i as u64)?;
            rel = rel.max(rep.max_rel_precise);
            sq = sq.max(rep.max_squared_identity);
            rel_f64 = rel_f64.max(rep.max_rel_f64);
            notes.push(format!(
                "{name}: |J| rel {:.2e} (f64 pipeline {:.2e}), J^2 {:.2e}",
                rep.max_rel_precise, rep.max_rel_f64, rep.max_squared_identity
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mut relations = 0.0f64;
        for _ in 0..1000 {
            let t = TorusPoint::new(rng.gen(), rng.gen());
            let rr = relation_residuals(t)?;
            let scale = 4.0 * PI * PI;
            relations = relations
                .max(rr.d41_z22 / scale)
                .max(rr.d12_d61 / scale)
                .max(rr.z23_squared)
                .max(rr.z23_monomial);
        }
        let ok = rel < 1e-9 && sq < 1e-8 && relations < 1e-9;
        Ok((
            ok,
            format!("|J| rel {rel:.2e}, J^2 identities {sq:.2e}, relations {relations:.2e}"),
            notes,
        ))
    })();
    finish(7, start, r)
}

pub fn criterion_8(seed: u64) -> CriterionResult {
    let start = Instant::now();
    let r = (|| -> Result<(bool, String, Vec<String>)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc0de);
        let mut worst = 0.0f64;
        let mut notes = Vec::new();
        for name in GroupName::MEASURE {
            if name == GroupName::D6_1 {
                continue;
            }
            let mut g_worst = 0.0f64;
            for _ in 0..1000 {
                let t = TorusPoint::new(rng.gen(), rng.gen());
                // Relative to the size of the weighted term w |J|.
                let mut scale = jacobian_theta(name, t)?.norm();
                if name == GroupName::D4_2 {
                    let y = psi(name, t)?.1.re;
                    if (y + 1.0).abs() < 1e-6 {
                        continue;
                    }
                    scale /= (y + 1.0).abs();
                }
                let scale = scale.max(1.0);
                g_worst = g_worst.max(conjecture_identity_residual(name, t)? / scale);
            }
            notes.push(format!("{name}: {g_worst:.2e}"));
            worst = worst.max(g_worst);
        }
        let mut d61 = 0.0f64;
        for _ in 0..1000 {
            let t = TorusPoint::new(rng.gen(), rng.gen());
            let scale = jacobian_theta(GroupName::D6_1, t)?.norm().max(1.0);
            d61 = d61.max(d61_s_rho_relation_residual(t)? / scale);
        }
        notes.push(format!(
            "D6_1 (informational): 4 pi^2 |S| (x+1)^(3/2) = |J| to {d61:.2e}; the unweighted form does not hold"
        ));
        Ok((worst < 1e-9, format!("max relative residual {worst:.2e} over five groups"), notes))
    })();
    finish(8, start, r)
}

fn report_line(r: &MeasureReport) -> String {
    format!(
        "{}{}: order {}, mass {:.15}, max rel {:.2e} at {:?}",
        r.id,
        if r.conjectural { " [conjectural]" } else { "" },
        r.max_order,
        r.mass,
        r.max_rel_error,
        r.worst
    )
}

/// Verifies the selected catalog entries in parallel, keeping catalog order.
fn verify_entries(conjectural: bool, order: u32) -> Vec<(String, Result<MeasureReport>)> {
    use rayon::prelude::*;
    catalog()
        .into_par_iter()
        .filter(|e| e.conjectural == conjectural)
        .map(|e| (e.id.clone(), verify_measure(&e, order)))
        .collect()
}

fn measure_criterion(number: u32, conjectural: bool, order: u32) -> CriterionResult {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut failed = Vec::new();
    let mut worst = 0.0f64;
    let results = verify_entries(conjectural, order);
    for (id, r) in &results {
        match r {
            Ok(rep) => {
                worst = worst.max(rep.max_rel_error);
                if !(rep.max_rel_error < 1e-6) || rep.seconds >= 60.0 {
                    failed.push(id.clone());
                }
                notes.push(report_line(rep));
            }
            Err(e) => {
                failed.push(id.clone());
                notes.push(format!("{id}: error {e}"));
            }
        }
    }
    let detail = if failed.is_empty() {
        format!("{} entries, order {order}, max rel {worst:.2e}", results.len())
    } else {
        format!("failing: {}", failed.join(", "))
    };
    finish(number, start, Ok((failed.is_empty(), detail, notes)))
}

pub fn criterion_9() -> CriterionResult {
    measure_criterion(9, false, 8)
}

pub fn criterion_10() -> CriterionResult {
    let mut out = measure_criterion(10, true, 10);
    let flagged = catalog()
        .iter()
        .filter(|e| e.group == GroupName::D6_1 && e.family == Family::G && e.generator != Generator::Joint)
        .all(|e| e.conjectural);
    if !flagged {
        out.passed = false;
        out.detail += "; D6_1 G-entries not flagged conjectural";
    }
    out.detail += " [conjectural]";
    out
}

pub fn criterion_11() -> CriterionResult {
    let start = Instant::now();
    let r = (|| -> Result<(bool, String, Vec<String>)> {
        let mut mass_err = 0.0f64;
        for l in 3..=400 {
            mass_err = mass_err.max((a_l_star_discrete(l)?.total_mass() - 1.0).abs());
        }
        let mut limits_ok = true;
        let mut notes = Vec::new();
        for l in [100u32, 200, 400] {
            let mut dev = 0.0f64;
            for m in 0..=4 {
                dev = dev.max(a_l_star_limit_check(l, m)?);
            }
            limits_ok &= dev < 2.0 / l as f64;
            notes.push(format!("l = {l}: max moment deviation {dev:.2e} (bound {:.2e})", 2.0 / l as f64));
        }
        let mut paths_ok = true;
        for (m, q, p) in nu_odd_path_moments(8)? {
            let pf = p.to_f64().unwrap_or(f64::NAN);
            paths_ok &= (q - pf).abs() <= 1e-9 * pf.abs().max(1.0);
            notes.push(format!("nu_odd moment {m}: {q:.15} vs {p} paths"));
        }
        let ok = mass_err < 1e-12 && limits_ok && paths_ok;
        Ok((
            ok,
            format!("mass error {mass_err:.2e}, limits {limits_ok}, nu_odd vs paths {paths_ok}"),
            notes,
        ))
    })();
    finish(11, start, r)
}

pub fn criterion_12() -> CriterionResult {
    let start = Instant::now();
    let r = d41_pushforward_check(20).map(|w| (w < 1e-7, format!("max difference {w:.2e} at 20 abscissae"), vec![]));
    finish(12, start, r)
}

pub fn run(number: u32, seed: u64) -> Option<CriterionResult> {
    Some(match number {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(),
        6 => criterion_6(seed),
        7 => criterion_7(seed),
        8 => criterion_8(seed),
        9 => criterion_9(),
        10 => criterion_10(),
        11 => criterion_11(),
        12 => criterion_12(),
        _ => return None,
    })
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    (1..=12).filter_map(|n| run(n, seed)).collect()
}

impl CriterionResult {
    /// One summary line; wall time is left out so reruns compare byte for byte.
    pub fn line(&self) -> String {
        format!(
            "{} criterion {:>2} ({}): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.number,
            self.name,
            self.detail
        )
    }

    pub fn timed_line(&self) -> String {
        format!("{} [{:.2} s]", self.line(), self.seconds)
    }
}
