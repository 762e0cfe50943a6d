//! The two graph families on truncated weight sets, and their moments.
//!
//! Family H has vertex set a box in Z^2 and an edge `mu -> mu + nu` for every
//! term of `chi_rho`. Family G has vertex set the dominant weights in the box
//! and fusion multiplicities as edges.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::groups::{build_subgroup, FiniteSubgroup, GroupName, Weight};
use crate::laurent::{LaurentPoly, DEFAULT_SUPPORT_CAP};
use crate::orbit::{character, fundamental_generators, fuse_klimyk, s_function, varrho};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    G,
    H,
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "G" | "g" => Ok(Family::G),
            "H" | "h" => Ok(Family::H),
            _ => Err(Error::InvalidArgument(format!("family `{s}` is not G or H"))),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::G => "G",
            Family::H => "H",
        })
    }
}

#[derive(Clone, Debug)]
pub struct FusionGraph {
    pub family: Family,
    pub group: GroupName,
    pub rho: Weight,
    pub vertices: Vec<Weight>,
    /// Vertices some of whose out-edges leave the box.
    pub boundary: Vec<bool>,
    pub adjacency: BTreeMap<(usize, usize), u64>,
    pub distinguished: usize,
    pub radius: i64,
    /// Largest coordinate step of an edge.
    pub step: i64,
}

pub const DEFAULT_POWER_CAP: u32 = 24;

fn targets(
    family: Family,
    g: &FiniteSubgroup,
    chi: &LaurentPoly,
    rho: Weight,
    v: Weight,
) -> Result<Vec<(Weight, u64)>> {
    match family {
        Family::H => Ok(chi
            .terms()
            .map(|(e, c)| (v.add(Weight::new(e.0, e.1)), c.to_u64().unwrap_or(0)))
            .collect()),
        Family::G => Ok(fuse_klimyk(g, v, rho)?
            .into_iter()
            .map(|(w, c)| (w, c.to_u64().unwrap_or(0)))
            .collect()),
    }
}

pub fn build_graph(family: Family, group: GroupName, rho: Weight, radius: i64) -> Result<FusionGraph> {
    if radius < 0 {
        return Err(Error::InvalidArgument(format!("radius {radius} must be nonnegative")));
    }
    let g = build_subgroup(group);
    if family == Family::G && group != GroupName::Z0 && !g.in_frak_g {
        return Err(Error::NotReflectionGroup(group.to_string()));
    }
    let chi = character(&g, rho)?.poly;
    let step = chi.max_abs_exponent();
    let mut vertices = Vec::new();
    for a in -radius..=radius {
        for b in -radius..=radius {
            let w = Weight::new(a, b);
            if family == Family::H || g.in_p_plus(w) {
                vertices.push(w);
            }
        }
    }
    let index: HashMap<Weight, usize> = vertices.iter().enumerate().map(|(i, w)| (*w, i)).collect();
    let mut adjacency = BTreeMap::new();
    let mut boundary = vec![false; vertices.len()];
    for (i, v) in vertices.iter().enumerate() {
        for (t, m) in targets(family, &g, &chi, rho, *v)? {
            match index.get(&t) {
                Some(&j) => {
                    *adjacency.entry((i, j)).or_insert(0) += m;
                }
                None => boundary[i] = true,
            }
        }
    }
    let distinguished = index[&Weight::ZERO];
    Ok(FusionGraph {
        family,
        group,
        rho,
        vertices,
        boundary,
        adjacency,
        distinguished,
        radius,
        step,
    })
}

impl FusionGraph {
    pub fn required_radius(&self, m: u32, n: u32) -> i64 {
        self.step * (m + n) as i64 + 1
    }

    pub fn out_edges(&self, i: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.adjacency.range((i, 0)..(i + 1, 0)).map(|(&(_, j), &m)| (j, m))
    }

    pub fn out_degree(&self, i: usize) -> u64 {
        self.out_edges(i).map(|(_, m)| m).sum()
    }

    pub fn loops(&self, i: usize) -> u64 {
        self.adjacency.get(&(i, i)).copied().unwrap_or(0)
    }

    pub fn vertex_of(&self, w: Weight) -> Option<usize> {
        self.vertices.iter().position(|v| *v == w)
    }

    /// Number of length-k walks from the distinguished vertex to every vertex.
    pub fn walk_counts(&self, k: u32) -> Vec<BigInt> {
        let mut cur = vec![BigInt::zero(); self.vertices.len()];
        cur[self.distinguished] = BigInt::from(1);
        for _ in 0..k {
            let mut next = vec![BigInt::zero(); self.vertices.len()];
            for (&(i, j), &m) in &self.adjacency {
                if !cur[i].is_zero() {
                    next[j] += &cur[i] * m;
                }
            }
            cur = next;
        }
        cur
    }

    /// Walks of m forward edges followed by n reversed edges, back at the start.
    pub fn moments_paths(&self, m: u32, n: u32) -> Result<BigInt> {
        let need = self.required_radius(m, n);
        if self.radius < need {
            return Err(Error::RadiusTooSmall {
                have: self.radius,
                need,
            });
        }
        let a = self.walk_counts(m);
        let b = if m == n { a.clone() } else { self.walk_counts(n) };
        Ok(a.iter().zip(&b).map(|(x, y)| x * y).sum())
    }

    pub fn to_json(&self) -> String {
        let vertices: Vec<_> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, w)| json!({"id": i, "label": [w.l1, w.l2], "boundary": self.boundary[i]}))
            .collect();
        let edges: Vec<_> = self
            .adjacency
            .iter()
            .map(|(&(s, d), &m)| json!({"src": s, "dst": d, "mult": m}))
            .collect();
        let v = json!({
            "family": self.family.to_string(),
            "group": self.group.as_str(),
            "rho": [self.rho.l1, self.rho.l2],
            "vertices": vertices,
            "edges": edges,
            "distinguished": self.distinguished,
        });
        serde_json::to_string_pretty(&v).expect("json")
    }

    pub fn to_dot(&self) -> String {
        let mut s = format!("digraph \"{}_{}_{}\" {{\n", self.family, self.group, self.rho);
        for (i, w) in self.vertices.iter().enumerate() {
            let shape = if i == self.distinguished { ",shape=box" } else { "" };
            let _ = writeln!(s, "  v{i} [label=\"{},{}\"{shape}];", w.l1, w.l2);
        }
        for (&(a, b), &m) in &self.adjacency {
            let _ = writeln!(s, "  v{a} -> v{b} [label=\"{m}\"];");
        }
        s.push_str("}\n");
        s
    }
}

pub fn export_graph(graph: &FusionGraph, format: &str) -> Result<String> {
    match format {
        "json" => Ok(graph.to_json()),
        "dot" => Ok(graph.to_dot()),
        _ => Err(Error::InvalidArgument(format!("unknown graph format `{format}`"))),
    }
}

/// Exact moments from constant terms, cached per group.
pub struct MomentOracle {
    pub group: FiniteSubgroup,
    pub chi1: LaurentPoly,
    pub chi2: LaurentPoly,
    s_rho: LaurentPoly,
    powers: HashMap<(u32, u32), LaurentPoly>,
    cap: u32,
}

impl MomentOracle {
    pub fn new(name: GroupName) -> Result<Self> {
        let group = build_subgroup(name);
        let t = fundamental_generators(name)?;
        let chi1 = character(&group, t.rho1)?.poly;
        let chi2 = character(&group, t.rho2)?.poly;
        let s_rho = if name == GroupName::Z0 {
            LaurentPoly::one()
        } else {
            s_function(&group, varrho(&group)?).poly
        };
        Ok(MomentOracle {
            group,
            chi1,
            chi2,
            s_rho,
            powers: HashMap::new(),
            cap: DEFAULT_POWER_CAP,
        })
    }

    pub fn with_cap(mut self, cap: u32) -> Self {
        self.cap = cap;
        self
    }

    /// `chi1^a chi2^b`.
    pub fn power(&mut self, a: u32, b: u32) -> Result<LaurentPoly> {
        if let Some(p) = self.powers.get(&(a, b)) {
            return Ok(p.clone());
        }
        let p = if a == 0 && b == 0 {
            LaurentPoly::one()
        } else if a > 0 {
            self.power(a - 1, b)?.try_mul(&self.chi1, DEFAULT_SUPPORT_CAP)?
        } else {
            self.power(0, b - 1)?.try_mul(&self.chi2, DEFAULT_SUPPORT_CAP)?
        };
        self.powers.insert((a, b), p.clone());
        Ok(p)
    }

    /// The state value of `chi1^m1 conj(chi1)^n1 chi2^m2 conj(chi2)^n2`.
    pub fn moment(&mut self, family: Family, m1: u32, n1: u32, m2: u32, n2: u32) -> Result<BigInt> {
        let total = m1 + n1 + m2 + n2;
        if total > self.cap {
            return Err(Error::InvalidArgument(format!(
                "total power {total} exceeds cap {}",
                self.cap
            )));
        }
        let a = self.power(m1, m2)?;
        let b = self.power(n1, n2)?;
        match family {
            Family::H => Ok(a.pairing(&b)),
            Family::G => {
                let sa = &a * &self.s_rho;
                let sb = if (m1, m2) == (n1, n2) { sa.clone() } else { &b * &self.s_rho };
                let raw = sa.pairing(&sb);
                let order = BigInt::from(self.group.order());
                if !(&raw % &order).is_zero() {
                    return Err(Error::Internal(format!(
                        "Weyl-density constant term {raw} not divisible by {order}"
                    )));
                }
                Ok(raw / order)
            }
        }
    }
}

pub fn moments_exact(family: Family, group: GroupName, powers: (u32, u32, u32, u32)) -> Result<BigInt> {
    let mut o = MomentOracle::new(group)?;
    o.moment(family, powers.0, powers.1, powers.2, powers.3)
}

/// All moments with `m1+n1+m2+n2 <= max_total`.
pub fn moment_table(
    family: Family,
    group: GroupName,
    max_total: u32,
) -> Result<BTreeMap<(u32, u32, u32, u32), BigInt>> {
    let mut o = MomentOracle::new(group)?;
    let mut out = BTreeMap::new();
    for m1 in 0..=max_total {
        for n1 in 0..=max_total - m1 {
            for m2 in 0..=max_total - m1 - n1 {
                for n2 in 0..=max_total - m1 - n1 - m2 {
                    out.insert((m1, n1, m2, n2), o.moment(family, m1, n1, m2, n2)?);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_z23_edges_from_origin() {
        let g = build_graph(Family::H, GroupName::Z2_3, Weight::new(1, 0), 3).unwrap();
        let out: Vec<Weight> = g.out_edges(g.distinguished).map(|(j, _)| g.vertices[j]).collect();
        assert_eq!(out, vec![Weight::new(0, 1), Weight::new(1, 0)]);
    }

    #[test]
    fn g_d41_origin_has_one_edge() {
        let g = build_graph(Family::G, GroupName::D4_1, Weight::new(1, 0), 3).unwrap();
        let out: Vec<_> = g.out_edges(g.distinguished).collect();
        assert_eq!(out.len(), 1);
        assert_eq!(g.vertices[out[0].0], Weight::new(1, 0));
    }

    #[test]
    fn z0_is_a_shift() {
        let g = build_graph(Family::H, GroupName::Z0, Weight::new(1, 0), 2).unwrap();
        for i in 0..g.vertices.len() {
            let d = g.out_degree(i);
            assert!(d == 1 || g.boundary[i] && d == 0);
        }
    }

    #[test]
    fn small_moments() {
        assert_eq!(moments_exact(Family::H, GroupName::Z2_3, (2, 2, 0, 0)).unwrap(), 6.into());
        assert_eq!(moments_exact(Family::G, GroupName::Z2_3, (3, 3, 0, 0)).unwrap(), 5.into());
        assert_eq!(moments_exact(Family::G, GroupName::D4_2, (4, 0, 0, 0)).unwrap(), 4.into());
        assert_eq!(moments_exact(Family::H, GroupName::D4_1, (2, 0, 0, 0)).unwrap(), 2.into());
        let g = build_graph(Family::H, GroupName::Z2_3, Weight::new(1, 0), 4).unwrap();
        assert_eq!(g.moments_paths(1, 1).unwrap(), 2.into());
        assert!(g.moments_paths(3, 3).is_err());
    }
}
