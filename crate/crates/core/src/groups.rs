//! The 13 finite subgroups of GL(2,Z), their actions and fundamental chambers.
//!
//! Matrices act on the torus by `theta -> g theta` (column vectors). Weights
//! transform contragrediently, `lambda -> g^T lambda`, so that
//! `<g^T lambda, theta> = <lambda, g theta>` and orbit sums are invariant
//! functions on the torus.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntMatrix2 {
    pub a11: i64,
    pub a12: i64,
    pub a21: i64,
    pub a22: i64,
}

impl IntMatrix2 {
    pub const fn new(a11: i64, a12: i64, a21: i64, a22: i64) -> Self {
        IntMatrix2 { a11, a12, a21, a22 }
    }

    pub const IDENTITY: IntMatrix2 = IntMatrix2::new(1, 0, 0, 1);

    pub fn det(&self) -> i64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn mul(&self, o: &IntMatrix2) -> IntMatrix2 {
        IntMatrix2::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }

    pub fn neg(&self) -> IntMatrix2 {
        IntMatrix2::new(-self.a11, -self.a12, -self.a21, -self.a22)
    }

    pub fn transpose(&self) -> IntMatrix2 {
        IntMatrix2::new(self.a11, self.a21, self.a12, self.a22)
    }

    /// Inverse; entries stay integral because det = +-1.
    pub fn inverse(&self) -> IntMatrix2 {
        let d = self.det();
        IntMatrix2::new(self.a22 * d, -self.a12 * d, -self.a21 * d, self.a11 * d)
    }

    /// Action on a weight: `g^T w`.
    pub fn act_weight(&self, w: Weight) -> Weight {
        Weight::new(
            self.a11 * w.l1 + self.a21 * w.l2,
            self.a12 * w.l1 + self.a22 * w.l2,
        )
    }

    /// Action on torus angles: `g theta`.
    pub fn act_theta(&self, t: (f64, f64)) -> (f64, f64) {
        (
            self.a11 as f64 * t.0 + self.a12 as f64 * t.1,
            self.a21 as f64 * t.0 + self.a22 as f64 * t.1,
        )
    }
}

impl fmt::Display for IntMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a11, self.a12, self.a21, self.a22)
    }
}

pub const T2: IntMatrix2 = IntMatrix2::new(1, 0, 0, -1);
pub const T2P: IntMatrix2 = IntMatrix2::new(0, 1, 1, 0);
pub const T3: IntMatrix2 = IntMatrix2::new(0, -1, 1, -1);
pub const T4: IntMatrix2 = IntMatrix2::new(0, -1, 1, 0);
pub const T6: IntMatrix2 = IntMatrix2::new(0, 1, -1, 1);
pub const MINUS_I: IntMatrix2 = IntMatrix2::new(-1, 0, 0, -1);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Weight {
    pub l1: i64,
    pub l2: i64,
}

impl Weight {
    pub const fn new(l1: i64, l2: i64) -> Self {
        Weight { l1, l2 }
    }
    pub const ZERO: Weight = Weight::new(0, 0);

    pub fn add(self, o: Weight) -> Weight {
        Weight::new(self.l1 + o.l1, self.l2 + o.l2)
    }
    pub fn sub(self, o: Weight) -> Weight {
        Weight::new(self.l1 - o.l1, self.l2 - o.l2)
    }
    pub fn neg(self) -> Weight {
        Weight::new(-self.l1, -self.l2)
    }
    pub fn norm2(self) -> i64 {
        self.l1 * self.l1 + self.l2 * self.l2
    }
    pub fn max_abs(self) -> i64 {
        self.l1.abs().max(self.l2.abs())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.l1, self.l2)
    }
}

impl FromStr for Weight {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = t.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err(Error::InvalidArgument(format!("weight `{s}` is not `l1,l2`")));
        }
        let p = |x: &str| {
            x.parse::<i64>()
                .map_err(|_| Error::InvalidArgument(format!("weight `{s}` is not `l1,l2`")))
        };
        Ok(Weight::new(p(parts[0])?, p(parts[1])?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupName {
    Z0,
    Z2_1,
    Z3,
    Z4,
    Z6,
    Z2_2,
    Z2_3,
    D4_1,
    D4_2,
    D6_1,
    D6_2,
    D8,
    D12,
}

impl GroupName {
    pub const ALL: [GroupName; 13] = [
        GroupName::Z0,
        GroupName::Z2_1,
        GroupName::Z3,
        GroupName::Z4,
        GroupName::Z6,
        GroupName::Z2_2,
        GroupName::Z2_3,
        GroupName::D4_1,
        GroupName::D4_2,
        GroupName::D6_1,
        GroupName::D6_2,
        GroupName::D8,
        GroupName::D12,
    ];

    /// Groups carrying the spectral measures treated here.
    pub const MEASURE: [GroupName; 6] = [
        GroupName::Z0,
        GroupName::Z2_2,
        GroupName::Z2_3,
        GroupName::D4_1,
        GroupName::D4_2,
        GroupName::D6_1,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            GroupName::Z0 => "Z0",
            GroupName::Z2_1 => "Z2_1",
            GroupName::Z3 => "Z3",
            GroupName::Z4 => "Z4",
            GroupName::Z6 => "Z6",
            GroupName::Z2_2 => "Z2_2",
            GroupName::Z2_3 => "Z2_3",
            GroupName::D4_1 => "D4_1",
            GroupName::D4_2 => "D4_2",
            GroupName::D6_1 => "D6_1",
            GroupName::D6_2 => "D6_2",
            GroupName::D8 => "D8",
            GroupName::D12 => "D12",
        }
    }

    pub fn generators(&self) -> Vec<IntMatrix2> {
        use GroupName::*;
        match self {
            Z0 => vec![IntMatrix2::IDENTITY],
            Z2_1 => vec![MINUS_I],
            Z3 => vec![T3],
            Z4 => vec![T4],
            Z6 => vec![T6],
            Z2_2 => vec![T2],
            Z2_3 => vec![T2P],
            D4_1 => vec![MINUS_I, T2],
            D4_2 => vec![MINUS_I, T2P],
            D6_1 => vec![T3, T2P],
            D6_2 => vec![T3, T2P.neg()],
            D8 => vec![T4, T2P],
            D12 => vec![T6, T2P],
        }
    }

    pub fn order(&self) -> usize {
        use GroupName::*;
        match self {
            Z0 => 1,
            Z2_1 | Z2_2 | Z2_3 => 2,
            Z3 => 3,
            Z4 | D4_1 | D4_2 => 4,
            Z6 | D6_1 | D6_2 => 6,
            D8 => 8,
            D12 => 12,
        }
    }

    pub fn lie_group(&self) -> &'static str {
        use GroupName::*;
        match self {
            Z0 => "T^2",
            Z2_2 => "U(1)xSU(2)",
            Z2_3 => "U(2)",
            D4_1 => "SU(2)xSU(2)",
            D4_2 => "SO(4)",
            D6_1 => "PSU(3)",
            D6_2 => "SU(3)",
            D8 => "Sp(2)",
            D12 => "G2",
            Z2_1 | Z3 | Z4 | Z6 => "-",
        }
    }

    pub fn is_measure_group(&self) -> bool {
        GroupName::MEASURE.contains(self)
    }
}

impl fmt::Display for GroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GroupName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().replace(['(', ')', '^'], "_").replace("__", "_");
        let key = key.trim_end_matches('_');
        for g in GroupName::ALL {
            if g.as_str().eq_ignore_ascii_case(key) {
                return Ok(g);
            }
        }
        let names: Vec<&str> = GroupName::ALL.iter().map(|g| g.as_str()).collect();
        Err(Error::UnknownGroup(s.to_string(), names.join(", ")))
    }
}

#[derive(Clone, Debug)]
pub struct FiniteSubgroup {
    pub name: GroupName,
    pub elements: Vec<IntMatrix2>,
    pub generators: Vec<IntMatrix2>,
    pub lie_group_label: &'static str,
    pub in_frak_g: bool,
    /// Positive-definite form invariant under the weight action.
    form: [i64; 3],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitResult {
    pub representative: Weight,
    pub points: BTreeSet<Weight>,
    pub stabilizer_order: usize,
}

/// Closure of a generating set under multiplication.
pub fn closure(gens: &[IntMatrix2]) -> Vec<IntMatrix2> {
    let mut set: BTreeSet<IntMatrix2> = BTreeSet::new();
    set.insert(IntMatrix2::IDENTITY);
    let mut frontier = vec![IntMatrix2::IDENTITY];
    while let Some(g) = frontier.pop() {
        for h in gens {
            let p = g.mul(h);
            if set.insert(p) {
                frontier.push(p);
            }
        }
    }
    set.into_iter().collect()
}

pub fn build_subgroup(name: GroupName) -> FiniteSubgroup {
    let generators = name.generators();
    let elements = closure(&generators);
    let in_frak_g = elements.iter().any(|g| g.det() == -1);
    // M = sum g g^T satisfies g M g^T = M, the invariance needed for g^T acting on weights.
    let mut form = [0i64; 3];
    for g in &elements {
        let m = g.mul(&g.transpose());
        form[0] += m.a11;
        form[1] += m.a12;
        form[2] += m.a22;
    }
    FiniteSubgroup {
        name,
        elements,
        generators,
        lie_group_label: name.lie_group(),
        in_frak_g,
        form,
    }
}

pub fn build_subgroup_str(name: &str) -> Result<FiniteSubgroup> {
    Ok(build_subgroup(name.parse()?))
}

impl FiniteSubgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn orbit(&self, w: Weight) -> OrbitResult {
        let points: BTreeSet<Weight> = self.elements.iter().map(|g| g.act_weight(w)).collect();
        let stabilizer_order = self.elements.iter().filter(|g| g.act_weight(w) == w).count();
        let representative = if self.in_frak_g {
            self.dominant(w)
        } else {
            *points.iter().next_back().unwrap()
        };
        OrbitResult {
            representative,
            points,
            stabilizer_order,
        }
    }

    fn score(&self, w: Weight) -> i64 {
        // Reference direction r = (2,1), generic for every group in the list.
        let [a, b, c] = self.form;
        let mw = (a * w.l1 + b * w.l2, b * w.l1 + c * w.l2);
        2 * mw.0 + mw.1
    }

    fn dominant(&self, w: Weight) -> Weight {
        self.elements
            .iter()
            .map(|g| g.act_weight(w))
            .max_by(|p, q| {
                self.score(*p)
                    .cmp(&self.score(*q))
                    .then(p.l1.cmp(&q.l1))
                    .then(p.l2.cmp(&q.l2))
            })
            .unwrap()
    }

    /// The orbit representative in P+, together with an element mapping `w` there.
    pub fn dominant_with_element(&self, w: Weight) -> (Weight, IntMatrix2) {
        let d = self.dominant(w);
        let g = *self
            .elements
            .iter()
            .find(|g| g.act_weight(w) == d)
            .unwrap();
        (d, g)
    }

    pub fn canonical_rep(&self, w: Weight) -> Result<Weight> {
        if !self.in_frak_g {
            return Err(Error::NotReflectionGroup(self.name.to_string()));
        }
        Ok(self.dominant(w))
    }

    /// Membership in P+; for Z0 every weight is dominant.
    pub fn in_p_plus(&self, w: Weight) -> bool {
        !self.in_frak_g || self.dominant(w) == w
    }

    /// Membership in P++ (trivial stabilizer).
    pub fn in_p_plus_plus(&self, w: Weight) -> bool {
        self.in_p_plus(w) && self.stabilizer_order(w) == 1
    }

    pub fn stabilizer_order(&self, w: Weight) -> usize {
        self.elements.iter().filter(|g| g.act_weight(w) == w).count()
    }

    /// True if some reflection (det -1) fixes `w`.
    pub fn fixed_by_reflection(&self, w: Weight) -> bool {
        self.elements
            .iter()
            .any(|g| g.det() == -1 && g.act_weight(w) == w)
    }

    pub fn contains(&self, g: &IntMatrix2) -> bool {
        self.elements.contains(g)
    }

    pub fn is_subgroup_of(&self, other: &FiniteSubgroup) -> bool {
        self.elements.iter().all(|g| other.contains(g))
    }

    pub fn is_normal_in(&self, other: &FiniteSubgroup) -> bool {
        self.is_subgroup_of(other)
            && other.elements.iter().all(|h| {
                let hi = h.inverse();
                self.elements.iter().all(|g| self.contains(&h.mul(g).mul(&hi)))
            })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub name: String,
    pub pass: bool,
}

/// `N x| K = G`: N normal, trivial intersection, |N||K| = |G|.
fn semidirect(n: GroupName, k: GroupName, g: GroupName) -> RelationCheck {
    let (gn, gk, gg) = (build_subgroup(n), build_subgroup(k), build_subgroup(g));
    let meet = gn.elements.iter().filter(|x| gk.contains(x)).count();
    let pass = gn.is_normal_in(&gg)
        && gk.is_subgroup_of(&gg)
        && meet == 1
        && gn.order() * gk.order() == gg.order();
    RelationCheck {
        name: format!("{n} x| {k} = {g}"),
        pass,
    }
}

/// `H A H^{-1} = B` as sets of rational matrices, tested as `H a = b H`.
fn intertwines(h: IntMatrix2, a: GroupName, b: GroupName) -> bool {
    let (ga, gb) = (build_subgroup(a), build_subgroup(b));
    ga.order() == gb.order()
        && ga
            .elements
            .iter()
            .all(|x| gb.elements.iter().any(|y| h.mul(x) == y.mul(&h)))
}

pub fn relation_checks() -> Vec<RelationCheck> {
    use GroupName::*;
    let mut out = vec![
        semidirect(Z2_1, Z2_2, D4_1),
        semidirect(Z2_1, Z2_3, D4_2),
        semidirect(Z3, Z2_3, D6_1),
        semidirect(Z4, Z2_2, D8),
        semidirect(Z4, Z2_3, D8),
        semidirect(Z6, Z2_3, D12),
    ];
    let h = IntMatrix2::new(1, 1, 1, -1);
    out.push(RelationCheck {
        name: "H T2 = T2' H".into(),
        pass: h.mul(&T2) == T2P.mul(&h),
    });
    out.push(RelationCheck {
        name: "H^2 = 2I".into(),
        pass: h.mul(&h) == IntMatrix2::new(2, 0, 0, 2),
    });
    out.push(RelationCheck {
        name: "H Z2_2 H^-1 = Z2_3".into(),
        pass: intertwines(h, Z2_2, Z2_3),
    });
    out.push(RelationCheck {
        name: "H D4_1 H^-1 = D4_2".into(),
        pass: intertwines(h, D4_1, D4_2),
    });
    let h6 = IntMatrix2::new(1, -2, 2, -1);
    out.push(RelationCheck {
        name: "H6^2 = -3I".into(),
        pass: h6.mul(&h6) == IntMatrix2::new(-3, 0, 0, -3),
    });
    out.push(RelationCheck {
        name: "H6 D6_1 H6^-1 = D6_2".into(),
        pass: intertwines(h6, D6_1, D6_2),
    });
    for (n, g) in [(Z2_2, D4_1), (Z2_3, D4_2), (Z3, D6_1), (D6_1, D12), (Z2_1, D4_1)] {
        let pass = build_subgroup(n).is_normal_in(&build_subgroup(g));
        out.push(RelationCheck {
            name: format!("{n} normal in {g}"),
            pass,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_match_names() {
        for g in GroupName::ALL {
            let s = build_subgroup(g);
            assert_eq!(s.order(), g.order(), "{g}");
            assert!(s.elements.iter().all(|e| e.det().abs() == 1));
        }
    }

    #[test]
    fn parse_rejects_unknown() {
        let e = "D5".parse::<GroupName>().unwrap_err();
        assert!(e.to_string().contains("D6_1"));
        assert_eq!("d6_1".parse::<GroupName>().unwrap(), GroupName::D6_1);
    }

    #[test]
    fn small_examples() {
        let z22 = build_subgroup(GroupName::Z2_2);
        assert!(z22.contains(&T2));
        let d41 = build_subgroup(GroupName::D4_1);
        let o = d41.orbit(Weight::new(1, 0));
        assert_eq!(o.points.len(), 2);
        assert_eq!(o.stabilizer_order, 2);
        assert_eq!(d41.canonical_rep(Weight::new(-3, 2)).unwrap(), Weight::new(3, 2));
        let z23 = build_subgroup(GroupName::Z2_3);
        assert_eq!(z23.canonical_rep(Weight::new(0, 1)).unwrap(), Weight::new(1, 0));
        assert!(build_subgroup(GroupName::Z3).canonical_rep(Weight::ZERO).is_err());
    }

    #[test]
    fn relations_hold() {
        for r in relation_checks() {
            assert!(r.pass, "{}", r.name);
        }
    }
}
