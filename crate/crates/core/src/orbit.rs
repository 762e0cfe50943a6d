//! Orbit functions C and S, the weight varrho, formal characters and fusion.

use std::collections::{BTreeMap, HashMap};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{build_subgroup, FiniteSubgroup, GroupName, Weight};
use crate::laurent::{grlex, LaurentPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrbitKind {
    C,
    S,
}

#[derive(Clone, Debug)]
pub struct OrbitFunction {
    pub kind: OrbitKind,
    pub group: GroupName,
    pub weight: Weight,
    pub poly: LaurentPoly,
}

#[derive(Clone, Debug)]
pub struct Character {
    pub group: GroupName,
    pub weight: Weight,
    pub poly: LaurentPoly,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorTable {
    pub group: GroupName,
    pub rho1: Weight,
    pub rho2: Weight,
    pub varrho: Weight,
    /// a_Gamma as numerator/denominator.
    pub a_const: (i64, i64),
    /// The SO(4) case, where the conjecture identity carries a (1+y)^-1 weight.
    pub so4_weight: bool,
}

fn mono(w: Weight) -> (i64, i64) {
    (w.l1, w.l2)
}

pub fn c_function(g: &FiniteSubgroup, w: Weight) -> OrbitFunction {
    let mut p = LaurentPoly::zero();
    for e in &g.elements {
        p.add_term(mono(e.act_weight(w)), BigInt::one());
    }
    OrbitFunction {
        kind: OrbitKind::C,
        group: g.name,
        weight: w,
        poly: p,
    }
}

pub fn s_function(g: &FiniteSubgroup, w: Weight) -> OrbitFunction {
    let mut p = LaurentPoly::zero();
    for e in &g.elements {
        p.add_term(mono(e.act_weight(w)), BigInt::from(e.det()));
    }
    OrbitFunction {
        kind: OrbitKind::S,
        group: g.name,
        weight: w,
        poly: p,
    }
}

/// The norm-minimal point of P++, found over the ball of radius 4.
/// For Z2_3 two different conventions are possible; (1,0) is used.
pub fn varrho(g: &FiniteSubgroup) -> Result<Weight> {
    if g.name == GroupName::Z0 {
        return Ok(Weight::ZERO);
    }
    if !g.in_frak_g {
        return Err(Error::NotReflectionGroup(g.name.to_string()));
    }
    if g.name == GroupName::Z2_3 {
        return Ok(Weight::new(1, 0));
    }
    let mut best: Vec<Weight> = Vec::new();
    let mut best_norm = i64::MAX;
    for a in -4..=4 {
        for b in -4..=4 {
            let w = Weight::new(a, b);
            if w.norm2() > 16 || !g.in_p_plus_plus(w) {
                continue;
            }
            match w.norm2().cmp(&best_norm) {
                std::cmp::Ordering::Less => {
                    best_norm = w.norm2();
                    best = vec![w];
                }
                std::cmp::Ordering::Equal => best.push(w),
                _ => {}
            }
        }
    }
    match best.as_slice() {
        [w] => Ok(*w),
        _ => Err(Error::Internal(format!("varrho for {} not unique: {best:?}", g.name))),
    }
}

pub fn fundamental_generators(name: GroupName) -> Result<GeneratorTable> {
    use GroupName::*;
    let (rho1, rho2) = match name {
        Z0 | Z2_2 | D4_1 => (Weight::new(1, 0), Weight::new(0, 1)),
        Z2_3 | D4_2 | D6_1 => (Weight::new(1, 0), Weight::new(1, 1)),
        D6_2 | D8 | D12 => (Weight::new(1, 0), Weight::new(1, 1)),
        _ => return Err(Error::NotReflectionGroup(name.to_string())),
    };
    let g = build_subgroup(name);
    Ok(GeneratorTable {
        group: name,
        rho1,
        rho2,
        varrho: varrho(&g)?,
        a_const: (1, 1),
        so4_weight: name == D4_2,
    })
}

type Memo = RwLock<HashMap<(GroupName, Weight), LaurentPoly>>;

fn memo() -> &'static Memo {
    static M: OnceLock<Memo> = OnceLock::new();
    M.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `chi_w = S_{w+varrho} / S_varrho`; for Z0 the character is the monomial itself.
pub fn character(g: &FiniteSubgroup, w: Weight) -> Result<Character> {
    let key = (g.name, w);
    if let Some(p) = memo().read().ok().and_then(|m| m.get(&key).cloned()) {
        return Ok(Character {
            group: g.name,
            weight: w,
            poly: p,
        });
    }
    let poly = if g.name == GroupName::Z0 {
        LaurentPoly::monomial(mono(w), 1)
    } else {
        if !g.in_p_plus(w) {
            return Err(Error::InvalidArgument(format!(
                "weight {w} is not in P+ for {}",
                g.name
            )));
        }
        let rho = varrho(g)?;
        let num = s_function(g, w.add(rho)).poly;
        if num.is_zero() {
            LaurentPoly::zero()
        } else {
            let den = s_function(g, rho).poly;
            num.exact_divide(&den)
                .map_err(|e| Error::Internal(format!("character {w} of {}: {e}", g.name)))?
        }
    };
    if let Ok(mut m) = memo().write() {
        m.insert(key, poly.clone());
    }
    Ok(Character {
        group: g.name,
        weight: w,
        poly,
    })
}

/// Decomposition of `chi_a chi_b` by repeated subtraction of leading characters.
pub fn fuse(g: &FiniteSubgroup, a: Weight, b: Weight) -> Result<Vec<(Weight, BigInt)>> {
    let pa = character(g, a)?.poly;
    let pb = character(g, b)?.poly;
    decompose(g, &(&pa * &pb))
}

/// Writes an invariant polynomial as an integer combination of characters.
pub fn decompose(g: &FiniteSubgroup, p: &LaurentPoly) -> Result<Vec<(Weight, BigInt)>> {
    let mut rem = p.clone();
    let mut out: BTreeMap<Weight, BigInt> = BTreeMap::new();
    while let Some((e, c)) = rem.leading() {
        let nu = Weight::new(e.0, e.1);
        if !g.in_p_plus(nu) || !c.is_positive() {
            return Err(Error::Decomposition(format!(
                "leading term {c} at {nu} for {}",
                g.name
            )));
        }
        let c = c.clone();
        let chi = character(g, nu)?.poly;
        rem = &rem - &chi.scale(&c);
        *out.entry(nu).or_insert_with(BigInt::zero) += c;
    }
    Ok(out.into_iter().collect())
}

/// Fusion by reflecting shifted weights into the chamber:
/// `chi_l chi_r = sum_mu n_mu det(w) chi_{dom(l+varrho+mu)-varrho}`.
pub fn fuse_klimyk(g: &FiniteSubgroup, lambda: Weight, r: Weight) -> Result<Vec<(Weight, BigInt)>> {
    if g.name == GroupName::Z0 {
        return Ok(vec![(lambda.add(r), BigInt::one())]);
    }
    let rho = varrho(g)?;
    let chi = character(g, r)?.poly;
    let mut out: BTreeMap<Weight, BigInt> = BTreeMap::new();
    for (e, n) in chi.terms() {
        let v = lambda.add(rho).add(Weight::new(e.0, e.1));
        if g.fixed_by_reflection(v) {
            continue;
        }
        let (d, el) = g.dominant_with_element(v);
        let slot = out.entry(d.sub(rho)).or_insert_with(BigInt::zero);
        *slot += n * el.det();
    }
    out.retain(|_, c| !c.is_zero());
    if out.values().any(|c| c.is_negative()) {
        return Err(Error::Decomposition(format!(
            "negative multiplicity in {lambda} x {r} for {}",
            g.name
        )));
    }
    Ok(out.into_iter().collect())
}

/// Constant term of `F_a conj(F_b)`.
pub fn orthogonality_check(g: &FiniteSubgroup, a: Weight, b: Weight, kind: OrbitKind) -> BigInt {
    let f = |w| match kind {
        OrbitKind::C => c_function(g, w).poly,
        OrbitKind::S => s_function(g, w).poly,
    };
    f(a).pairing(&f(b))
}

/// The weight whose character is the complex conjugate of `chi_w`.
pub fn conjugate_weight(g: &FiniteSubgroup, w: Weight) -> Weight {
    if g.in_frak_g {
        g.canonical_rep(w.neg()).unwrap_or(w.neg())
    } else {
        w.neg()
    }
}

pub fn is_grlex_leading(p: &LaurentPoly, w: Weight) -> bool {
    p.leading()
        .map(|(e, _)| grlex(&e, &mono(w)).is_eq())
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(s: &[((i64, i64), i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(s.iter().copied())
    }

    #[test]
    fn varrho_values() {
        use GroupName::*;
        let expect = [
            (Z0, (0, 0)),
            (Z2_2, (0, 1)),
            (Z2_3, (1, 0)),
            (D4_1, (1, 1)),
            (D4_2, (1, 0)),
            (D6_1, (1, 0)),
        ];
        for (g, (a, b)) in expect {
            assert_eq!(varrho(&build_subgroup(g)).unwrap(), Weight::new(a, b), "{g}");
        }
    }

    #[test]
    fn known_characters() {
        let d42 = build_subgroup(GroupName::D4_2);
        assert_eq!(
            character(&d42, Weight::new(1, 1)).unwrap().poly,
            lp(&[((0, 0), 1), ((1, 1), 1), ((-1, -1), 1)])
        );
        let d61 = build_subgroup(GroupName::D6_1);
        assert_eq!(
            character(&d61, Weight::new(1, 0)).unwrap().poly,
            lp(&[
                ((0, 0), 2),
                ((1, 0), 1),
                ((-1, 0), 1),
                ((0, 1), 1),
                ((0, -1), 1),
                ((1, -1), 1),
                ((-1, 1), 1)
            ])
        );
    }

    #[test]
    fn s_vanishes_on_walls() {
        let d41 = build_subgroup(GroupName::D4_1);
        assert!(s_function(&d41, Weight::new(1, 0)).poly.is_zero());
        let z22 = build_subgroup(GroupName::Z2_2);
        assert_eq!(s_function(&z22, Weight::new(0, 1)).poly, lp(&[((0, 1), 1), ((0, -1), -1)]));
    }

    #[test]
    fn small_fusions() {
        let d41 = build_subgroup(GroupName::D4_1);
        let f = fuse(&d41, Weight::new(1, 0), Weight::new(1, 0)).unwrap();
        assert_eq!(f, vec![(Weight::new(0, 0), 1.into()), (Weight::new(2, 0), 1.into())]);
        let z23 = build_subgroup(GroupName::Z2_3);
        let f = fuse(&z23, Weight::new(1, 0), Weight::new(1, 0)).unwrap();
        assert_eq!(f, vec![(Weight::new(1, 1), 1.into()), (Weight::new(2, 0), 1.into())]);
    }

    #[test]
    fn subtraction_agrees_with_klimyk() {
        for name in GroupName::MEASURE {
            let g = build_subgroup(name);
            let gens = fundamental_generators(name).unwrap();
            for a in -3..=3 {
                for b in -3..=3 {
                    let w = Weight::new(a, b);
                    if !g.in_p_plus(w) {
                        continue;
                    }
                    let c = character(&g, w).unwrap().poly;
                    assert!(is_grlex_leading(&c, w), "{name} {w}");
                    for r in [gens.rho1, gens.rho2] {
                        assert_eq!(fuse(&g, w, r).unwrap(), fuse_klimyk(&g, w, r).unwrap(), "{name} {w} {r}");
                    }
                }
            }
        }
    }
}
