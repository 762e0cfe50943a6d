use num_bigint::BigInt;
use rank2spec::graphs::{build_graph, export_graph, moments_exact, Family};
use rank2spec::groups::{build_subgroup, build_subgroup_str, relation_checks, GroupName, IntMatrix2, Weight};
use rank2spec::laurent::LaurentPoly;
use rank2spec::orbit::{c_function, character, fundamental_generators, fuse, orthogonality_check, s_function, varrho, OrbitKind};
use rank2spec::seq::{catalan, central_binomial, count_walks_quadrant, multinomial_identity_sides, mz_ode_check, mz_series};

fn lp(s: &[((i64, i64), i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(s.iter().copied())
}

fn w(a: i64, b: i64) -> Weight {
    Weight::new(a, b)
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

#[test]
fn subgroup_examples() {
    let z22 = build_subgroup_str("Z2_2").unwrap();
    assert_eq!(z22.order(), 2);
    assert!(z22.contains(&IntMatrix2::new(1, 0, 0, -1)));
    assert_eq!(build_subgroup_str("Z0").unwrap().elements, vec![IntMatrix2::IDENTITY]);
    assert_eq!(build_subgroup_str("D12").unwrap().order(), 12);
    assert_eq!(GroupName::ALL.len(), 13);
    assert!(build_subgroup_str("D5").is_err());
}

#[test]
fn orbit_examples() {
    let d41 = build_subgroup(GroupName::D4_1);
    let o = d41.orbit(w(1, 0));
    assert_eq!(o.points.iter().copied().collect::<Vec<_>>(), vec![w(-1, 0), w(1, 0)]);
    assert_eq!(o.stabilizer_order, 2);
    for name in GroupName::ALL {
        let g = build_subgroup(name);
        let o = g.orbit(Weight::ZERO);
        assert_eq!(o.points.len(), 1);
        assert_eq!(o.stabilizer_order, g.order());
    }
    let z23 = build_subgroup(GroupName::Z2_3);
    assert_eq!(z23.orbit(w(0, 1)).points.len(), 2);
    assert_eq!(z23.canonical_rep(w(0, 1)).unwrap(), w(1, 0));
    assert_eq!(d41.canonical_rep(w(-3, 2)).unwrap(), w(3, 2));
}

#[test]
fn relations() {
    for r in relation_checks() {
        assert!(r.pass, "{}", r.name);
    }
}

#[test]
fn laurent_examples() {
    let x = lp(&[((1, 0), 1), ((-1, 0), 1)]);
    assert_eq!(&x * &x, lp(&[((2, 0), 1), ((0, 0), 2), ((-2, 0), 1)]));
    assert_eq!(&x * &LaurentPoly::one(), x);
    let s = lp(&[((1, 0), 1), ((0, 1), 1)]);
    assert_eq!(s.conjugate(), lp(&[((-1, 0), 1), ((0, -1), 1)]));
    assert_eq!(x.conjugate(), x);
    let p = &s * &s.conjugate();
    assert_eq!(p.constant_term(), big(2));
    assert_eq!((&p * &p).constant_term(), big(6));
    assert_eq!(lp(&[((3, -2), 5)]).constant_term(), big(0));
}

#[test]
fn orbit_function_examples() {
    let d41 = build_subgroup(GroupName::D4_1);
    assert_eq!(c_function(&d41, w(1, 0)).poly, lp(&[((1, 0), 2), ((-1, 0), 2)]));
    assert!(s_function(&d41, w(1, 0)).poly.is_zero());
    assert_eq!(
        s_function(&d41, w(1, 1)).poly,
        lp(&[((1, 1), 1), ((-1, -1), 1), ((1, -1), -1), ((-1, 1), -1)])
    );
    let z23 = build_subgroup(GroupName::Z2_3);
    assert_eq!(c_function(&z23, w(1, 0)).poly, lp(&[((1, 0), 1), ((0, 1), 1)]));
    for name in GroupName::MEASURE {
        let g = build_subgroup(name);
        assert_eq!(c_function(&g, Weight::ZERO).poly, LaurentPoly::constant(g.order() as i64));
        assert_eq!(character(&g, Weight::ZERO).unwrap().poly, LaurentPoly::one());
    }
    assert_eq!(varrho(&z23).unwrap(), w(1, 0));
    assert_eq!(varrho(&d41).unwrap(), w(1, 1));
    assert_eq!(varrho(&build_subgroup(GroupName::Z2_2)).unwrap(), w(0, 1));
}

#[test]
fn character_and_generator_examples() {
    let d41 = build_subgroup(GroupName::D4_1);
    assert_eq!(character(&d41, w(1, 0)).unwrap().poly, lp(&[((1, 0), 1), ((-1, 0), 1)]));
    let t = fundamental_generators(GroupName::D4_2).unwrap();
    assert_eq!((t.rho1, t.rho2), (w(1, 0), w(1, 1)));
    for name in [GroupName::Z2_2, GroupName::Z0] {
        let t = fundamental_generators(name).unwrap();
        assert_eq!((t.rho1, t.rho2), (w(1, 0), w(0, 1)));
    }
}

#[test]
fn fusion_examples() {
    let d41 = build_subgroup(GroupName::D4_1);
    assert_eq!(fuse(&d41, w(1, 0), w(1, 0)).unwrap(), vec![(w(0, 0), big(1)), (w(2, 0), big(1))]);
    let z23 = build_subgroup(GroupName::Z2_3);
    assert_eq!(fuse(&z23, w(1, 0), w(1, 0)).unwrap(), vec![(w(1, 1), big(1)), (w(2, 0), big(1))]);
    let d61 = build_subgroup(GroupName::D6_1);
    assert_eq!(fuse(&d61, Weight::ZERO, w(2, 1)).unwrap(), vec![(w(2, 1), big(1))]);
}

#[test]
fn orthogonality_examples() {
    let d42 = build_subgroup(GroupName::D4_2);
    assert_eq!(orthogonality_check(&d42, w(1, 0), w(1, 0), OrbitKind::S), big(4));
    // (1,1) is fixed by the swap, so its S-function vanishes.
    assert!(s_function(&d42, w(1, 1)).poly.is_zero());
    assert_eq!(orthogonality_check(&d42, w(1, 1), w(1, 1), OrbitKind::S), big(0));
    let d61 = build_subgroup(GroupName::D6_1);
    assert_eq!(orthogonality_check(&d61, w(2, 1), w(3, 1), OrbitKind::C), big(0));
    let z22 = build_subgroup(GroupName::Z2_2);
    assert_eq!(orthogonality_check(&z22, w(1, 1), w(1, 1), OrbitKind::C), big(2));
}

#[test]
fn moment_oracle_examples() {
    assert_eq!(moments_exact(Family::H, GroupName::Z2_3, (2, 2, 0, 0)).unwrap(), big(6));
    assert_eq!(moments_exact(Family::G, GroupName::Z2_3, (3, 3, 0, 0)).unwrap(), big(5));
    assert_eq!(moments_exact(Family::G, GroupName::D4_2, (4, 0, 0, 0)).unwrap(), big(4));
    assert_eq!(moments_exact(Family::H, GroupName::D4_1, (2, 0, 0, 0)).unwrap(), big(2));
    for fam in [Family::G, Family::H] {
        for g in [GroupName::D4_1, GroupName::D4_2] {
            for k in [1, 3, 5] {
                assert_eq!(moments_exact(fam, g, (k, 0, 0, 0)).unwrap(), big(0), "{fam} {g} {k}");
            }
        }
    }
}

fn graph_for(family: Family, group: GroupName, second: bool, m: u32, n: u32) -> rank2spec::graphs::FusionGraph {
    let t = fundamental_generators(group).unwrap();
    let rho = if second { t.rho2 } else { t.rho1 };
    let r = build_graph(family, group, rho, 0).unwrap().required_radius(m, n);
    build_graph(family, group, rho, r).unwrap()
}

#[test]
fn path_examples() {
    assert_eq!(graph_for(Family::H, GroupName::Z2_3, false, 1, 1).moments_paths(1, 1).unwrap(), big(2));
    assert_eq!(graph_for(Family::G, GroupName::Z2_3, false, 2, 2).moments_paths(2, 2).unwrap(), big(2));
    let g = graph_for(Family::G, GroupName::D4_2, false, 2, 0);
    assert_eq!(g.moments_paths(2, 0).unwrap(), big(1));
    assert_eq!(g.vertices[g.distinguished], Weight::ZERO);
    let g = graph_for(Family::G, GroupName::Z2_2, true, 2, 0);
    assert_eq!(g.vertices[g.distinguished], Weight::ZERO);
}

#[test]
fn radius_is_enforced() {
    let rho = fundamental_generators(GroupName::D6_1).unwrap().rho1;
    let g = build_graph(Family::G, GroupName::D6_1, rho, 1).unwrap();
    assert!(matches!(g.moments_paths(4, 4), Err(rank2spec::Error::RadiusTooSmall { .. })));
}

#[test]
fn graph_export() {
    let rho = fundamental_generators(GroupName::Z2_3).unwrap().rho1;
    let g = build_graph(Family::G, GroupName::Z2_3, rho, 0).unwrap();
    let v: serde_json::Value = serde_json::from_str(&export_graph(&g, "json").unwrap()).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 1);
    assert_eq!(v["edges"].as_array().unwrap().len(), 0);
    assert_eq!(v["distinguished"], 0);

    let g = build_graph(Family::G, GroupName::Z2_3, rho, 2).unwrap();
    let a = export_graph(&g, "json").unwrap();
    assert_eq!(a, export_graph(&g, "json").unwrap());
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    for key in ["family", "group", "rho", "vertices", "edges", "distinguished"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let dot = export_graph(&g, "dot").unwrap();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches('{').count(), dot.matches('}').count());
    assert_eq!(dot.matches("->").count(), v["edges"].as_array().unwrap().len());
    assert!(export_graph(&g, "svg").is_err());
}

#[test]
fn sequence_examples() {
    assert_eq!(catalan(0), big(1));
    assert_eq!(catalan(3), big(5));
    assert_eq!(central_binomial(2), big(6));
    let walks: Vec<BigInt> = (0..3).map(count_walks_quadrant).collect();
    assert_eq!(walks, vec![big(1), big(1), big(4)]);
    assert_eq!(multinomial_identity_sides(0), (big(1), big(1)));
    assert_eq!(multinomial_identity_sides(1), (big(1), big(1)));
    assert_eq!(multinomial_identity_sides(4), (big(196), big(196)));
    assert_eq!(mz_series(5), vec![big(1), big(1), big(4), big(25), big(196)]);
    assert_eq!(mz_ode_check(12), big(0));
}
