mod common;

use common::{big, check_global, oracle_cells, oracle_homology};
use num_integer::Integer;
use polyglue::catalog::{self, SearchLimits, Twist};
use polyglue::{quotient, Polyhedron};

fn agrees_with_oracle(p: &Polyhedron) {
    check_global(p).unwrap();
    let cells = oracle_cells(p);
    let mut cycles: Vec<usize> = p.edge_classes().iter().map(|c| c.cycle()).collect();
    cycles.sort_unstable();
    let mut orders: Vec<usize> = p.vertex_classes().iter().map(|c| c.order()).collect();
    orders.sort_unstable();
    assert_eq!(cycles, cells.cycles, "{}", p.name());
    assert_eq!(orders, cells.orders, "{}", p.name());
    let h = quotient::homology(p).unwrap();
    let (betti, torsion) = oracle_homology(p);
    assert_eq!(h.betti, betti, "{}", p.name());
    assert_eq!(h.torsion, torsion, "{}", p.name());
}

#[test]
fn catalog_matches_the_orbit_and_homology_oracles() {
    for p in catalog::entries() {
        agrees_with_oracle(&p);
    }
}

#[test]
fn lens_homology_is_the_edge_relation() {
    // One edge class e and one face relation p·e = 0.
    for p in 1..=12 {
        for q in 0..p {
            if (p > 1 && q == 0) || p.gcd(&q) != 1 {
                continue;
            }
            let l = catalog::lens(p, q).unwrap();
            let h = quotient::homology(&l).unwrap();
            let expected = if p == 1 { vec![] } else { big(&[p as u64]) };
            assert_eq!(h.torsion, expected, "lens({p},{q})");
            assert_eq!(h.betti, [1, 0, 0, 1]);
            agrees_with_oracle(&l);
        }
    }
}

#[test]
fn cube_traces() {
    // Hand traces: the translation cube has three edge classes of cycle 4
    // and one vertex class of order 8; the quarter twist has four edge
    // classes of cycle 3 and two vertex classes of order 4; the half twist
    // pairs everything twice.
    let none = catalog::cube_twist(Twist::None);
    assert_eq!(oracle_cells(&none).cycles, vec![4, 4, 4]);
    assert_eq!(oracle_cells(&none).orders, vec![8]);
    let h = quotient::homology(&none).unwrap();
    assert_eq!(h.betti, [1, 3, 3, 1]);
    assert!(h.torsion.is_empty());

    let quarter = catalog::cube_twist(Twist::Quarter);
    assert_eq!(oracle_cells(&quarter).cycles, vec![3, 3, 3, 3]);
    assert_eq!(oracle_cells(&quarter).orders, vec![4, 4]);
    assert_eq!(quotient::homology(&quarter).unwrap().torsion, big(&[2, 2]));

    let half = catalog::cube_twist(Twist::Half);
    assert_eq!(oracle_cells(&half).cycles, vec![2; 6]);
    assert_eq!(oracle_cells(&half).orders, vec![2; 4]);
    assert_eq!(quotient::homology(&half).unwrap().torsion, big(&[2]));
}

#[test]
fn dodecahedral_trace() {
    let p = catalog::dodecahedral_space();
    let cells = oracle_cells(&p);
    assert_eq!(cells.cycles, vec![3; 10]);
    assert_eq!(cells.orders, vec![4; 5]);
    let h = quotient::homology(&p).unwrap();
    assert_eq!(h.betti, [1, 0, 0, 1]);
    assert!(h.torsion.is_empty());
}

#[test]
fn singular_octahedron_fixture() {
    let p = catalog::octahedron_singular();
    let report = quotient::is_manifold(&p).unwrap();
    assert!(!report.manifold);
    assert_eq!(report.singularities.len(), 1);
    assert_eq!(report.singularities[0].genus, 2);
    assert_eq!(quotient::chi_quotient(&p), 2);
    agrees_with_oracle(&p);
}

#[test]
fn census_schemes_match_the_oracle() {
    // Every cube scheme and a seeded sample of octahedron schemes.
    for (ball, limit) in [(catalog::cube_ball(), 100_000), (catalog::octahedron_ball(), 300)] {
        let report = catalog::search_schemes(&ball, SearchLimits { max_schemes: limit, seed: 11 }).unwrap();
        for rec in &report.records {
            let pairs: Vec<(&str, &str, usize)> = rec.pairs.iter().map(|(a, b, k)| (a.as_str(), b.as_str(), *k)).collect();
            let p = Polyhedron::new(format!("scheme-{}", rec.index), ball.clone(), &pairs).unwrap();
            let (betti, torsion) = oracle_homology(&p);
            assert_eq!(rec.h1.betti, betti, "{}", p.name());
            assert_eq!(rec.h1.torsion, torsion, "{}", p.name());
            check_global(&p).unwrap();
        }
    }
}

#[test]
fn torus_of_the_translation_cube() {
    let h = quotient::homology(&catalog::cube_twist(Twist::None)).unwrap();
    assert_eq!(h.to_string(), "H0 = Z, H1 = Z^3, H2 = Z^3, H3 = Z");
}
