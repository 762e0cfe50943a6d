use num_bigint::BigInt;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rank2spec::cli::fmt15;
use rank2spec::d61::{cardano_roots, classify_region, real_cubic_roots, region_half_width, surface_roots, RegionLabel};
use rank2spec::graphs::{build_graph, Family, MomentOracle};
use rank2spec::groups::{build_subgroup, GroupName, Weight};
use rank2spec::jacobian::{conjecture_identity_residual, jacobian_theta, psi};
use rank2spec::laurent::LaurentPoly;
use rank2spec::measures::{catalog, eval_density, Support};
use rank2spec::orbit::{character, fundamental_generators, fuse, orthogonality_check, OrbitKind};
use rank2spec::seq::{count_walks_quadrant, multinomial_identity_sides, squared_catalan};
use rank2spec::TorusPoint;

fn measure_group() -> impl Strategy<Value = GroupName> {
    prop::sample::select(GroupName::MEASURE.to_vec())
}

fn any_group() -> impl Strategy<Value = GroupName> {
    prop::sample::select(GroupName::ALL.to_vec())
}

fn weight(r: i64) -> impl Strategy<Value = Weight> {
    (-r..=r, -r..=r).prop_map(|(a, b)| Weight::new(a, b))
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(((-3i64..=3, -3i64..=3), -5i64..=5), 0..6).prop_map(LaurentPoly::from_terms)
}

fn torus() -> impl Strategy<Value = TorusPoint> {
    (0.0..1.0f64, 0.0..1.0f64).prop_map(|(a, b)| TorusPoint::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_rep_is_a_class_invariant(name in any_group(), w in weight(6)) {
        let g = build_subgroup(name);
        let rotations_only = g.elements.iter().all(|h| h.det() == 1);
        let rep = match g.canonical_rep(w) {
            Err(rank2spec::Error::NotReflectionGroup(_)) if rotations_only => return Ok(()),
            r => r.unwrap(),
        };
        prop_assert!(g.in_p_plus(rep));
        prop_assert!(g.orbit(w).points.contains(&rep));
        for h in &g.elements {
            prop_assert_eq!(g.canonical_rep(h.act_weight(w)).unwrap(), rep);
        }
        prop_assert_eq!(g.orbit(w).points.len() * g.stabilizer_order(w), g.order());
    }

    #[test]
    fn product_and_conjugation(p in poly(), q in poly(), t in torus()) {
        let pq = &p * &q;
        prop_assert!((pq.evaluate(t) - p.evaluate(t) * q.evaluate(t)).norm() < 1e-9);
        prop_assert_eq!(p.conjugate().conjugate(), p.clone());
        let norm2: BigInt = p.terms().map(|(_, c)| c * c).sum();
        prop_assert_eq!((&p * &p.conjugate()).constant_term(), norm2);
        prop_assert!((p.conjugate().evaluate(t) - p.evaluate(t).conj()).norm() < 1e-9);
    }

    #[test]
    fn exact_division_round_trip(p in poly(), q in poly()) {
        prop_assume!(!q.is_zero());
        prop_assert_eq!((&p * &q).exact_divide(&q).unwrap(), p);
    }

    #[test]
    fn text_round_trip(p in poly()) {
        prop_assert_eq!(p.to_text().parse::<LaurentPoly>().unwrap(), p);
    }

    #[test]
    fn fusion_preserves_dimension(name in measure_group(), a in weight(3), b in weight(3)) {
        let g = build_subgroup(name);
        prop_assume!(name != GroupName::Z0);
        let (a, b) = (g.canonical_rep(a).unwrap(), g.canonical_rep(b).unwrap());
        let ca = character(&g, a).unwrap().poly;
        let cb = character(&g, b).unwrap().poly;
        let prod = &ca * &cb;
        let mut sum = LaurentPoly::zero();
        for (c, m) in fuse(&g, a, b).unwrap() {
            prop_assert!(m > BigInt::from(0));
            sum = &sum + &character(&g, c).unwrap().poly.scale(&m);
        }
        prop_assert_eq!(sum, prod);
    }

    #[test]
    fn orbit_functions_are_orthogonal(name in measure_group(), a in weight(5), b in weight(5), s in any::<bool>()) {
        let g = build_subgroup(name);
        prop_assume!(g.in_p_plus_plus(a) && g.in_p_plus_plus(b));
        let kind = if s { OrbitKind::S } else { OrbitKind::C };
        let want = if a == b { BigInt::from(g.order()) } else { BigInt::from(0) };
        prop_assert_eq!(orthogonality_check(&g, a, b, kind), want);
    }

    #[test]
    fn jacobian_modulus_is_invariant(name in measure_group(), t in torus()) {
        let g = build_subgroup(name);
        let j = jacobian_theta(name, t).unwrap().norm();
        for h in &g.elements {
            let (a, b) = h.act_theta((t.theta1, t.theta2));
            let jh = jacobian_theta(name, TorusPoint::new(a, b)).unwrap().norm();
            prop_assert!((j - jh).abs() <= 1e-9 * (1.0 + j));
        }
    }

    #[test]
    fn s_varrho_identity(name in measure_group(), t in torus()) {
        prop_assume!(name != GroupName::D6_1);
        // Relative to the size of the weighted term w |J|.
        let mut scale = jacobian_theta(name, t).unwrap().norm();
        if name == GroupName::D4_2 {
            let y = psi(name, t).unwrap().1.re;
            prop_assume!((y + 1.0).abs() > 1e-6);
            scale /= (y + 1.0).abs();
        }
        let scale = scale.max(1.0);
        prop_assert!(conjecture_identity_residual(name, t).unwrap() < 1e-9 * scale);
    }

    #[test]
    fn cardano_agrees_with_the_real_solver(y1 in -2.0..10.0f64, u in -1.0..1.0f64) {
        let y2 = u * region_half_width(y1);
        let b = -(1.0 + 4.0 * y1);
        let c = -(y1 * y1 + 2.0 * y1 + y2 * y2);
        let real = real_cubic_roots(-1.0, b, c);
        for x in &real {
            let r = x * x * x - x * x + b * x + c;
            prop_assert!(r.abs() < 1e-9 * (1.0 + x.abs().powi(3) + c.abs()));
        }
        let card = cardano_roots(y1, y2);
        for x in &real {
            let best = card.iter().map(|z| (z - Complex64::new(*x, 0.0)).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(best < 1e-6 * (1.0 + x.abs()), "root {} not in {:?}", x, card);
        }
    }

    #[test]
    fn densities_are_nonnegative(idx in 0usize..32, a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let entries = catalog();
        let e = &entries[idx % entries.len()];
        let p: Vec<f64> = match e.support {
            Support::Interval { lo, hi } => vec![lo + (hi - lo) * a],
            Support::Circle => vec![a * std::f64::consts::TAU],
            Support::Disc { radius } => vec![a * radius, b * std::f64::consts::TAU],
            Support::Region => vec![-2.0 + 12.0 * a, (2.0 * b - 1.0) * region_half_width(-2.0 + 12.0 * a)],
            Support::Joint => vec![-8.0 + 16.0 * a, -8.0 + 16.0 * b],
        };
        if let Ok(v) = eval_density(e, &p) {
            prop_assert!(v >= 0.0 && !v.is_nan(), "{} at {:?}: {}", e.id, p, v);
        }
    }

    #[test]
    fn fifteen_digit_output_round_trips(x in prop::num::f64::NORMAL) {
        let back: f64 = fmt15(x).parse().unwrap();
        prop_assert!((back - x).abs() <= 1e-14 * x.abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn paths_match_constant_terms(name in measure_group(), h in any::<bool>(), second in any::<bool>(), m in 0u32..4, n in 0u32..4) {
        let family = if h { Family::H } else { Family::G };
        let t = fundamental_generators(name).unwrap();
        let rho = if second { t.rho2 } else { t.rho1 };
        let r = build_graph(family, name, rho, 0).unwrap().required_radius(m, n);
        let g = build_graph(family, name, rho, r).unwrap();
        let mut o = MomentOracle::new(name).unwrap();
        let ct = if second { o.moment(family, 0, 0, m, n) } else { o.moment(family, m, n, 0, 0) }.unwrap();
        prop_assert_eq!(g.moments_paths(m, n).unwrap(), ct);
    }
}

#[test]
fn walks_and_identity_to_fifteen() {
    for n in 0..=15u64 {
        assert_eq!(count_walks_quadrant(n as usize), squared_catalan(n));
        let (l, r) = multinomial_identity_sides(n);
        assert_eq!(l, r);
    }
}

/// Off the boundary band, D' is exactly where the surface cubic has three
/// admissible roots.
#[test]
fn region_labels_match_root_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut counted, mut dprime) = (0, 0);
    for _ in 0..100_000 {
        let y1 = rng.gen_range(-2.0..10.0);
        let y2 = rng.gen_range(-1.0..1.0) * region_half_width(y1);
        let Some(label) = classify_region(y1, y2, 1e-6) else { continue };
        if label == RegionLabel::Boundary {
            continue;
        }
        let want = if label == RegionLabel::Dprime { 3 } else { 1 };
        assert_eq!(surface_roots(y1, y2).len(), want, "({y1}, {y2}) labelled {label:?}");
        counted += 1;
        dprime += usize::from(label == RegionLabel::Dprime);
    }
    assert!(counted > 99_000 && dprime > 100, "{counted} {dprime}");
}
