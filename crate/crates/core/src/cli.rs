//! Command-line front end. `run` parses arguments, writes to the given sink and
//! returns the process exit code: 0 on success, 1 when a check fails, 2 on a
//! usage error.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::checks::{self, CriterionResult};
use crate::d61;
use crate::error::{Error, Result};
use crate::graphs::{build_graph, export_graph, Family, MomentOracle};
use crate::groups::{build_subgroup, relation_checks, GroupName, Weight};
use crate::jacobian::{jacobian_consistency, psi, relation_residuals};
use crate::laurent::TorusPoint;
use crate::measures::{catalog, eval_density, find_entry, verify_measure, DensityEntry, Generator, Support};
use crate::orbit::{c_function, character, fundamental_generators, fuse, fuse_klimyk, s_function};
use crate::seq::{
    count_walks_quadrant, multinomial_identity_sides, mz_closed_form, mz_ode_residuals, mz_series,
    mz_series_value, squared_catalan,
};

/// Thread count for parallel verification; unset means one per core.
pub const THREADS_ENV: &str = "RANK2SPEC_THREADS";

#[derive(Parser, Debug)]
#[command(name = "rank2spec", version, about = "Spectral measures for the finite reflection subgroups of GL(2,Z)")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = checks::DEFAULT_SEED)]
    pub seed: u64,
    /// Include wall-clock times in the output.
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// The 13 finite subgroups.
    Groups {
        #[command(subcommand)]
        action: GroupsCmd,
    },
    /// Characters, orbit functions and fusion.
    Character {
        #[command(subcommand)]
        action: CharacterCmd,
    },
    /// Truncated fusion graphs.
    Graph {
        #[command(subcommand)]
        action: GraphCmd,
    },
    /// Moments of one generator by path counting, orders 0..=upto.
    Moments(MomentsArgs),
    /// Jacobian identities at random torus points.
    Jacobian {
        #[command(subcommand)]
        action: JacobianCmd,
    },
    /// Point clouds of the joint spectrum.
    Domain {
        #[command(subcommand)]
        action: DomainCmd,
    },
    /// Catalogued densities.
    Density {
        #[command(subcommand)]
        action: DensityCmd,
    },
    /// Verification suites.
    Verify {
        #[command(subcommand)]
        action: VerifyCmd,
    },
    /// Groups, catalog and acceptance results in one document.
    Report {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum GroupsCmd {
    List {
        #[arg(long)]
        json: bool,
    },
    Verify,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolyKind {
    Char,
    C,
    S,
}

#[derive(Subcommand, Debug)]
pub enum CharacterCmd {
    Show {
        #[arg(long)]
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
        #[arg(long, value_enum, default_value = "char")]
        kind: PolyKind,
    },
    Fuse {
        #[arg(long)]
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// Use the Klimyk formula instead of leading-term peeling.
        #[arg(long)]
        klimyk: bool,
    },
}

#[derive(Args, Debug)]
pub struct GraphArgs {
    #[arg(long, default_value = "G")]
    family: String,
    #[arg(long)]
    group: String,
    /// `rho1`, `rho2` or a weight `l1,l2`.
    #[arg(long, default_value = "rho1", allow_hyphen_values = true)]
    rho: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
pub enum GraphCmd {
    Build {
        #[command(flatten)]
        g: GraphArgs,
        #[arg(long, default_value_t = 4)]
        radius: i64,
        #[arg(long, value_enum, default_value = "json")]
        format: GraphFormat,
    },
    /// Paths of m forward then n reversed edges, against the constant term.
    Moments {
        #[command(flatten)]
        g: GraphArgs,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
pub struct MomentsArgs {
    #[command(flatten)]
    g: GraphArgs,
    #[arg(long, default_value_t = 8)]
    upto: u32,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
pub enum JacobianCmd {
    Check {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum DomainCmd {
    /// CSV of interior points and reflection-line images.
    Sample {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        /// CSV is the only format; accepted for symmetry with `density sample`.
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum DensityCmd {
    List {
        #[arg(long)]
        json: bool,
    },
    Eval {
        #[arg(long)]
        id: String,
        /// Comma-separated coordinates, as listed by `density list`.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    Sample {
        #[arg(long)]
        id: String,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// The twelve acceptance criteria.
    All {
        #[arg(long)]
        json: bool,
    },
    /// Quadrant walks against squared Catalan numbers.
    Oeis {
        #[arg(long, default_value_t = 12)]
        n: u64,
        #[arg(long)]
        json: bool,
    },
    /// The generating function M(z).
    Mz {
        #[arg(long, default_value_t = 12)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Quadrature moments of every catalog entry against exact moments.
    Measures {
        #[arg(long, default_value_t = 8)]
        max_order: u32,
        /// Restrict to one entry.
        #[arg(long)]
        id: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

/// Formats with 15 significant digits, trailing zeros dropped.
pub fn fmt15(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-5..15).contains(&mag) {
        let s = format!("{:.*}", (14 - mag).max(0) as usize, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.14e}");
        let (m, e) = s.split_once('e').unwrap_or((&s, "0"));
        let m = if m.contains('.') { m.trim_end_matches('0').trim_end_matches('.') } else { m };
        format!("{m}e{e}")
    }
}

fn parse_group(s: &str) -> Result<GroupName> {
    s.parse()
}

fn parse_rho(group: GroupName, s: &str) -> Result<Weight> {
    match s.trim() {
        "rho1" | "1" => Ok(fundamental_generators(group)?.rho1),
        "rho2" | "2" => Ok(fundamental_generators(group)?.rho2),
        w => w.parse(),
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        // A second call in the same process fails harmlessly.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::UnknownGroup(..)
        | Error::InvalidArgument(_)
        | Error::NotReflectionGroup(_)
        | Error::RadiusTooSmall { .. }
        | Error::OutsideDomain(..)
        | Error::OnBoundary(_) => 2,
        _ => 1,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    configure_threads();
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

fn io<E: std::fmt::Display>(e: E) -> Error {
    Error::Internal(format!("write failed: {e}"))
}

macro_rules! out {
    ($w:expr, $($arg:tt)*) => {
        writeln!($w, $($arg)*).map_err(io)?
    };
}

fn dispatch(cli: &Cli, w: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Groups { action } => groups_cmd(action, w),
        Command::Character { action } => character_cmd(action, w),
        Command::Graph { action } => graph_cmd(action, w),
        Command::Moments(a) => moments_cmd(a, w),
        Command::Jacobian {
            action: JacobianCmd::Check { group, samples, json },
        } => jacobian_cmd(parse_group(group)?, *samples, cli.seed, *json, w),
        Command::Domain {
            action: DomainCmd::Sample { group, n, .. },
        } => domain_cmd(parse_group(group)?, *n, cli.seed, w),
        Command::Density { action } => density_cmd(action, cli.seed, w),
        Command::Verify { action } => verify_cmd(action, cli.seed, cli.timings, w),
        Command::Report { json } => report_cmd(cli.seed, *json, cli.timings, w),
    }
}

fn groups_cmd(action: &GroupsCmd, w: &mut dyn Write) -> Result<i32> {
    match action {
        GroupsCmd::List { json } => {
            let rows: Vec<_> = GroupName::ALL
                .iter()
                .map(|&g| {
                    let gens: Vec<String> = g.generators().iter().map(|m| m.to_string()).collect();
                    (g, gens)
                })
                .collect();
            if *json {
                let v: Vec<_> = rows
                    .iter()
                    .map(|(g, gens)| {
                        json!({"name": g.as_str(), "order": g.order(), "generators": gens,
                               "lie_group": g.lie_group(), "in_G": g.is_measure_group()})
                    })
                    .collect();
                out!(w, "{}", serde_json::to_string_pretty(&v).map_err(io)?);
            } else {
                out!(w, "{:<6} {:>5}  {:<34} {:<14} {}", "name", "order", "generators", "lie group", "in G");
                for (g, gens) in rows {
                    out!(
                        w,
                        "{:<6} {:>5}  {:<34} {:<14} {}",
                        g.as_str(),
                        g.order(),
                        gens.join(" "),
                        if g.lie_group().is_empty() { "-" } else { g.lie_group() },
                        if g.is_measure_group() { "yes" } else { "no" }
                    );
                }
            }
            Ok(0)
        }
        GroupsCmd::Verify => {
            let checks = relation_checks();
            let mut failed = 0;
            for c in &checks {
                out!(w, "{} {}", if c.pass { "PASS" } else { "FAIL" }, c.name);
                failed += usize::from(!c.pass);
            }
            out!(w, "{} of {} relations hold", checks.len() - failed, checks.len());
            Ok(i32::from(failed > 0))
        }
    }
}

fn fusion_json(parts: &[(Weight, BigInt)]) -> serde_json::Value {
    json!(parts
        .iter()
        .map(|(wt, m)| json!({"weight": [wt.l1, wt.l2], "mult": m.to_string()}))
        .collect::<Vec<_>>())
}

fn character_cmd(action: &CharacterCmd, w: &mut dyn Write) -> Result<i32> {
    match action {
        CharacterCmd::Show { group, weight, kind } => {
            let g = build_subgroup(parse_group(group)?);
            let wt: Weight = weight.parse()?;
            let poly = match kind {
                PolyKind::Char => character(&g, wt)?.poly,
                PolyKind::C => c_function(&g, wt).poly,
                PolyKind::S => s_function(&g, wt).poly,
            };
            write!(w, "{}", poly.to_text()).map_err(io)?;
            Ok(0)
        }
        CharacterCmd::Fuse { group, a, b, klimyk } => {
            let g = build_subgroup(parse_group(group)?);
            let (a, b): (Weight, Weight) = (a.parse()?, b.parse()?);
            let parts = if *klimyk { fuse_klimyk(&g, a, b)? } else { fuse(&g, a, b)? };
            out!(w, "{}", serde_json::to_string(&fusion_json(&parts)).map_err(io)?);
            Ok(0)
        }
    }
}

fn graph_of(g: &GraphArgs, radius_for: Option<(u32, u32)>, radius: i64) -> Result<crate::graphs::FusionGraph> {
    let family: Family = g.family.parse()?;
    let group = parse_group(&g.group)?;
    let rho = parse_rho(group, &g.rho)?;
    let radius = match radius_for {
        Some((m, n)) => build_graph(family, group, rho, 0)?.required_radius(m, n),
        None => radius,
    };
    build_graph(family, group, rho, radius)
}

/// Constant-term moment for the generator `rho`, when it is one of the two
/// fundamental ones.
fn oracle_moment(g: &GraphArgs, m: u32, n: u32) -> Result<Option<BigInt>> {
    let family: Family = g.family.parse()?;
    let group = parse_group(&g.group)?;
    let rho = parse_rho(group, &g.rho)?;
    let table = fundamental_generators(group)?;
    let mut oracle = MomentOracle::new(group)?;
    Ok(if rho == table.rho1 {
        Some(oracle.moment(family, m, n, 0, 0)?)
    } else if rho == table.rho2 {
        Some(oracle.moment(family, 0, 0, m, n)?)
    } else {
        None
    })
}

fn graph_cmd(action: &GraphCmd, w: &mut dyn Write) -> Result<i32> {
    match action {
        GraphCmd::Build { g, radius, format } => {
            let graph = graph_of(g, None, *radius)?;
            let fmt = match format {
                GraphFormat::Json => "json",
                GraphFormat::Dot => "dot",
            };
            out!(w, "{}", export_graph(&graph, fmt)?.trim_end());
            Ok(0)
        }
        GraphCmd::Moments { g, m, n, json } => {
            let graph = graph_of(g, Some((*m, *n)), 0)?;
            let paths = graph.moments_paths(*m, *n)?;
            let ct = oracle_moment(g, *m, *n)?;
            let agree = ct.as_ref().map_or(true, |c| *c == paths);
            if *json {
                let v = json!({"m": m, "n": n, "paths": paths.to_string(),
                               "constant_term": ct.as_ref().map(|c| c.to_string()), "agree": agree});
                out!(w, "{}", serde_json::to_string(&v).map_err(io)?);
            } else {
                let ct_s = ct.map_or("-".to_string(), |c| c.to_string());
                out!(w, "m = {m}, n = {n}: paths {paths}, constant term {ct_s}");
            }
            Ok(i32::from(!agree))
        }
    }
}

fn moments_cmd(a: &MomentsArgs, w: &mut dyn Write) -> Result<i32> {
    let graph = graph_of(&a.g, Some((a.upto, 0)), 0)?;
    let values = (0..=a.upto).map(|k| graph.moments_paths(k, 0)).collect::<Result<Vec<_>>>()?;
    if a.json {
        let v: Vec<String> = values.iter().map(|x| x.to_string()).collect();
        let doc = json!({"family": a.g.family, "group": parse_group(&a.g.group)?.as_str(),
                         "rho": [graph.rho.l1, graph.rho.l2], "moments": v});
        out!(w, "{}", serde_json::to_string(&doc).map_err(io)?);
    } else {
        out!(w, "order  moment");
        for (k, v) in values.iter().enumerate() {
            out!(w, "{k:>5}  {v}");
        }
        let list: Vec<String> = values.iter().map(|x| x.to_string()).collect();
        out!(w, "{}", list.join(", "));
    }
    Ok(0)
}

fn jacobian_cmd(group: GroupName, samples: usize, seed: u64, json: bool, w: &mut dyn Write) -> Result<i32> {
    let rep = jacobian_consistency(group, samples, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut relations = [0.0f64; 4];
    for _ in 0..samples {
        let r = relation_residuals(TorusPoint::new(rng.gen(), rng.gen()))?;
        for (acc, v) in relations.iter_mut().zip([r.d41_z22, r.d12_d61, r.z23_squared, r.z23_monomial]) {
            *acc = acc.max(v);
        }
    }
    let pass = rep.max_rel_precise < 1e-9 && rep.max_squared_identity < 1e-8;
    if json {
        let v = json!({"group": group.as_str(), "samples": samples,
            "max_rel_precise": rep.max_rel_precise, "max_rel_f64": rep.max_rel_f64,
            "max_squared_identity": rep.max_squared_identity,
            "relations": {"d41_z22": relations[0], "d12_d61": relations[1],
                          "z23_squared": relations[2], "z23_monomial": relations[3]},
            "pass": pass});
        out!(w, "{}", serde_json::to_string_pretty(&v).map_err(io)?);
    } else {
        out!(w, "group {} samples {samples}", group.as_str());
        out!(w, "|J| relative residual (high precision)  {}", fmt15(rep.max_rel_precise));
        out!(w, "|J| relative residual (f64)             {}", fmt15(rep.max_rel_f64));
        out!(w, "J^2 identity residual                   {}", fmt15(rep.max_squared_identity));
        out!(w, "J(D4_1) - 2 Re J(Z2_2)                  {}", fmt15(relations[0]));
        out!(w, "J(D12) - 2 Re J(D6_1)                   {}", fmt15(relations[1]));
        out!(w, "Z2_3 squared identity                   {}", fmt15(relations[2]));
        out!(w, "Z2_3 monomial identity                  {}", fmt15(relations[3]));
        out!(w, "{}", if pass { "PASS" } else { "FAIL" });
    }
    Ok(i32::from(!pass))
}

fn domain_cmd(group: GroupName, n: usize, seed: u64, w: &mut dyn Write) -> Result<i32> {
    let g = build_subgroup(group);
    let reflections: Vec<_> = g.elements.iter().filter(|m| m.det() == -1).copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    out!(w, "kind,x_re,x_im,y_re,y_im");
    for i in 0..n {
        let t: (f64, f64) = (rng.gen(), rng.gen());
        let (kind, p) = if reflections.is_empty() || i % 2 == 0 {
            ("interior", t)
        } else {
            // (t + r t) / 2 is fixed by the reflection r, so it maps to the boundary.
            let r = reflections[rng.gen_range(0..reflections.len())];
            let rt = r.act_theta(t);
            ("boundary", ((t.0 + rt.0) / 2.0, (t.1 + rt.1) / 2.0))
        };
        let (x, y) = psi(group, TorusPoint::new(p.0, p.1))?;
        out!(w, "{kind},{:?},{:?},{:?},{:?}", x.re, x.im, y.re, y.im);
    }
    Ok(0)
}

/// Uniform point in the support box of `e`, for plotting the weight.
fn sample_point(e: &DensityEntry, rng: &mut ChaCha8Rng) -> Vec<f64> {
    use std::f64::consts::TAU;
    match e.support {
        Support::Interval { lo, hi } => vec![rng.gen_range(lo..hi)],
        Support::Circle => vec![rng.gen_range(0.0..TAU)],
        Support::Disc { radius } => vec![rng.gen_range(0.0..radius), rng.gen_range(0.0..TAU)],
        Support::Region => {
            let y1 = rng.gen_range(-2.0..10.0);
            let b = d61::region_half_width(y1);
            vec![y1, rng.gen_range(-b..=b)]
        }
        Support::Joint => match e.group {
            GroupName::Z0 => vec![rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU)],
            GroupName::Z2_2 => vec![rng.gen_range(0.0..TAU), rng.gen_range(-2.0..2.0)],
            GroupName::Z2_3 => vec![rng.gen_range(0.0..2.0), rng.gen_range(0.0..TAU)],
            GroupName::D4_2 => {
                let x = rng.gen_range(-4.0..4.0);
                vec![x, rng.gen_range(x * x / 4.0 - 1.0..3.0)]
            }
            GroupName::D6_1 => {
                let x = rng.gen_range(-1.0..8.0);
                let (mid, half, _) = d61::y1_parametrization(x);
                vec![x, rng.gen_range(mid - half..=mid + half)]
            }
            _ => vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
        },
    }
}

fn entry_json(e: &DensityEntry) -> serde_json::Value {
    json!({"id": e.id, "group": e.group.as_str(), "generator": format!("{:?}", e.generator),
           "family": e.family.to_string(), "coordinates": e.coordinates(),
           "support": format!("{:?}", e.support), "conjectural": e.conjectural})
}

fn density_cmd(action: &DensityCmd, seed: u64, w: &mut dyn Write) -> Result<i32> {
    match action {
        DensityCmd::List { json } => {
            let entries = catalog();
            if *json {
                let v: Vec<_> = entries.iter().map(entry_json).collect();
                out!(w, "{}", serde_json::to_string_pretty(&v).map_err(io)?);
            } else {
                for e in &entries {
                    out!(
                        w,
                        "{:<16} {:<12} {:?}{}",
                        e.id,
                        e.coordinates().join(","),
                        e.support,
                        if e.conjectural { "  [conjectural]" } else { "" }
                    );
                }
            }
            Ok(0)
        }
        DensityCmd::Eval { id, at } => {
            let e = find_entry(id)?;
            let point = at
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidArgument(format!("coordinate `{s}` is not a number")))
                })
                .collect::<Result<Vec<_>>>()?;
            out!(w, "{}", fmt15(eval_density(&e, &point)?));
            Ok(0)
        }
        DensityCmd::Sample { id, n, .. } => {
            let e = find_entry(id)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            out!(w, "{},weight", e.coordinates().join(","));
            let mut rows = 0;
            while rows < *n {
                let p = sample_point(&e, &mut rng);
                // Points in the numerical boundary band have no finite weight.
                let Ok(v) = eval_density(&e, &p) else { continue };
                let cols: Vec<String> = p.iter().map(|x| format!("{x:?}")).collect();
                out!(w, "{},{v:?}", cols.join(","));
                rows += 1;
            }
            Ok(0)
        }
    }
}

/// Drops `seconds` fields unless timings were asked for.
fn untimed(mut v: serde_json::Value, timings: bool) -> serde_json::Value {
    if !timings {
        if let Some(m) = v.as_object_mut() {
            m.remove("seconds");
        }
    }
    v
}

fn criterion_json(r: &CriterionResult, timings: bool) -> serde_json::Value {
    untimed(serde_json::to_value(r).unwrap_or(serde_json::Value::Null), timings)
}

fn criterion_line(r: &CriterionResult, timings: bool) -> String {
    if timings {
        r.timed_line()
    } else {
        r.line()
    }
}

fn verify_all(seed: u64, json: bool, timings: bool, w: &mut dyn Write) -> Result<i32> {
    let results = checks::run_all(seed);
    let failed: Vec<u32> = results.iter().filter(|r| !r.passed).map(|r| r.number).collect();
    if json {
        let v = json!({"criteria": results.iter().map(|r| criterion_json(r, timings)).collect::<Vec<_>>(),
                       "passed": failed.is_empty()});
        out!(w, "{}", serde_json::to_string_pretty(&v).map_err(io)?);
    } else {
        for r in &results {
            out!(w, "{}", criterion_line(r, timings));
            for note in &r.notes {
                out!(w, "    {note}");
            }
        }
        if failed.is_empty() {
            out!(w, "PASS all {} criteria", results.len());
        } else {
            let list: Vec<String> = failed.iter().map(|n| n.to_string()).collect();
            out!(w, "FAIL criteria {}", list.join(", "));
        }
    }
    Ok(i32::from(!failed.is_empty()))
}

fn verify_oeis(n: u64, json: bool, w: &mut dyn Write) -> Result<i32> {
    let mut rows = Vec::new();
    for k in 0..=n {
        let walks = count_walks_quadrant(k as usize);
        let want = squared_catalan(k);
        let (lhs, rhs) = multinomial_identity_sides(k);
        let ok = walks == want && lhs == rhs;
        rows.push((k, walks, want, lhs, rhs, ok));
    }
    let pass = rows.iter().all(|r| r.5);
    if json {
        let v: Vec<_> = rows
            .iter()
            .map(|(k, a, b, l, r, ok)| {
                json!({"n": k, "walks": a.to_string(), "catalan_squared": b.to_string(),
                       "multinomial_lhs": l.to_string(), "multinomial_rhs": r.to_string(), "pass": ok})
            })
            .collect();
        out!(w, "{}", serde_json::to_string_pretty(&json!({"rows": v, "pass": pass})).map_err(io)?);
    } else {
        out!(w, "{:>3}  {:>22}  {:>22}  {:>22}  result", "n", "walks", "c_n^2", "multinomial sum");
        for (k, a, b, l, _, ok) in &rows {
            out!(w, "{k:>3}  {a:>22}  {b:>22}  {l:>22}  {}", if *ok { "PASS" } else { "FAIL" });
        }
        out!(w, "{}", if pass { "PASS" } else { "FAIL" });
    }
    Ok(i32::from(!pass))
}

fn verify_mz(n: usize, json: bool, w: &mut dyn Write) -> Result<i32> {
    let series = mz_series(n + 1);
    let residuals = mz_ode_residuals(n + 1);
    let coeff_ok: Vec<bool> = series.iter().enumerate().map(|(k, c)| *c == squared_catalan(k as u64)).collect();
    let mut closed = Vec::new();
    for z in [0.001, 0.01, 0.05] {
        let c = mz_closed_form(z)?;
        let s = mz_series_value(z, 200);
        closed.push((z, c, s, (c - s).abs()));
    }
    let pass = coeff_ok.iter().all(|&b| b)
        && residuals.iter().all(|r| *r == BigInt::from(0))
        && closed.iter().all(|c| c.3 < 1e-10);
    if json {
        let v = json!({
            "coefficients": series.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "ode_residuals": residuals.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "closed_form": closed.iter().map(|(z, c, s, d)| json!({"z": z, "closed": c, "series": s, "diff": d})).collect::<Vec<_>>(),
            "pass": pass});
        out!(w, "{}", serde_json::to_string_pretty(&v).map_err(io)?);
    } else {
        out!(w, "{:>3}  {:>22}  {:>10}  result", "n", "coefficient", "residual");
        for (k, c) in series.iter().enumerate() {
            let r = residuals.get(k).map_or("-".to_string(), |r| r.to_string());
            out!(w, "{k:>3}  {c:>22}  {r:>10}  {}", if coeff_ok[k] { "PASS" } else { "FAIL" });
        }
        for (z, c, s, d) in &closed {
            out!(w, "z = {z}: closed {}, series {}, diff {}", fmt15(*c), fmt15(*s), fmt15(*d));
        }
        out!(w, "{}", if pass { "PASS" } else { "FAIL" });
    }
    Ok(i32::from(!pass))
}

fn verify_measures(max_order: u32, id: Option<&str>, json: bool, timings: bool, w: &mut dyn Write) -> Result<i32> {
    use rayon::prelude::*;
    let entries = match id {
        Some(id) => vec![find_entry(id)?],
        None => catalog(),
    };
    // Joint moments are tabulated up to order 12.
    let reports: Vec<_> = entries
        .par_iter()
        .map(|e| {
            let k = if e.generator == Generator::Joint { max_order.min(12) } else { max_order };
            verify_measure(e, k)
        })
        .collect();
    let mut pass = true;
    let mut docs = Vec::new();
    for (e, r) in entries.iter().zip(reports) {
        match r {
            Ok(rep) => {
                let ok = rep.max_rel_error < 1e-6;
                if !e.conjectural {
                    pass &= ok;
                }
                if json {
                    docs.push(untimed(serde_json::to_value(&rep).map_err(io)?, timings));
                } else {
                    let time = if timings { format!("  [{:.2} s]", rep.seconds) } else { String::new() };
                    out!(
                        w,
                        "{} {:<16} order {:>2}  mass {}  max rel error {}{}{time}",
                        if ok { "PASS" } else { "FAIL" },
                        rep.id,
                        rep.max_order,
                        fmt15(rep.mass),
                        fmt15(rep.max_rel_error),
                        if rep.conjectural { "  [conjectural]" } else { "" }
                    );
                }
            }
            Err(err) => {
                pass &= e.conjectural;
                if json {
                    docs.push(json!({"id": e.id, "error": err.to_string()}));
                } else {
                    out!(w, "FAIL {:<16} {err}", e.id);
                }
            }
        }
    }
    if json {
        out!(w, "{}", serde_json::to_string_pretty(&json!({"entries": docs, "pass": pass})).map_err(io)?);
    } else {
        out!(w, "{}", if pass { "PASS" } else { "FAIL" });
    }
    Ok(i32::from(!pass))
}

fn verify_cmd(action: &VerifyCmd, seed: u64, timings: bool, w: &mut dyn Write) -> Result<i32> {
    match action {
        VerifyCmd::All { json } => verify_all(seed, *json, timings, w),
        VerifyCmd::Oeis { n, json } => verify_oeis(*n, *json, w),
        VerifyCmd::Mz { n, json } => verify_mz(*n, *json, w),
        VerifyCmd::Measures { max_order, id, json } => verify_measures(*max_order, id.as_deref(), *json, timings, w),
    }
}

fn report_cmd(seed: u64, json: bool, timings: bool, w: &mut dyn Write) -> Result<i32> {
    let results = checks::run_all(seed);
    let passed = results.iter().all(|r| r.passed);
    if json {
        let groups: Vec<_> = GroupName::ALL
            .iter()
            .map(|g| json!({"name": g.as_str(), "order": g.order(), "lie_group": g.lie_group(), "in_G": g.is_measure_group()}))
            .collect();
        let v = json!({"seed": seed, "groups": groups,
                       "catalog": catalog().iter().map(entry_json).collect::<Vec<_>>(),
                       "criteria": results.iter().map(|r| criterion_json(r, timings)).collect::<Vec<_>>(),
                       "passed": passed});
        out!(w, "{}", serde_json::to_string_pretty(&v).map_err(io)?);
    } else {
        out!(w, "# rank2spec report (seed {seed})");
        out!(w, "");
        out!(w, "## Groups");
        groups_cmd(&GroupsCmd::List { json: false }, w)?;
        out!(w, "");
        out!(w, "## Densities");
        density_cmd(&DensityCmd::List { json: false }, seed, w)?;
        out!(w, "");
        out!(w, "## Acceptance");
        for r in &results {
            out!(w, "{}", criterion_line(r, timings));
        }
    }
    Ok(i32::from(!passed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_digits() {
        assert_eq!(fmt15(1.0), "1");
        assert_eq!(fmt15(0.1), "0.1");
        assert_eq!(fmt15(std::f64::consts::PI), "3.14159265358979");
        assert_eq!(fmt15(-2.5e-9), "-2.5e-9");
        assert_eq!(fmt15(0.0), "0");
    }
}
