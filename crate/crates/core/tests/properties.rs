mod common;

use common::{check_global, determinantal_factors};
use polyglue::catalog::{self, SearchLimits};
use polyglue::moves::{self, Outcome, RemovalOrder, Verdict};
use polyglue::{pif, quotient, smith, Polyhedron};
use proptest::prelude::*;

fn entry(i: usize) -> Polyhedron {
    let all = catalog::entries();
    all[i % all.len()].clone()
}

fn enrichment() -> impl Strategy<Value = Polyhedron> {
    (0usize..64, 0usize..6, any::<u64>())
        .prop_map(|(i, count, seed)| catalog::random_insertions(&entry(i), count, seed).unwrap())
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..5, 1usize..6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-8i64..=8, c), r))
}

proptest! {
    #[test]
    fn smith_matches_determinantal_divisors(m in small_matrix()) {
        let got = smith::invariant_factors(&m);
        prop_assert_eq!(&got, &determinantal_factors(&m));
        prop_assert_eq!(got.len(), smith::rank(&m));
    }

    #[test]
    fn parsing_arbitrary_text_never_panics(text in "[a-zA-Z0-9:+\\-# \n]{0,120}") {
        let _ = pif::parse(&text);
    }

    #[test]
    fn parsing_near_miss_documents_never_panics(p in enrichment(), cut in 0usize..400, junk in "[a-z0-9:+\\- ]{0,6}") {
        let mut text = pif::serialize(&p);
        let at = cut.min(text.len());
        text.insert_str(at, &junk);
        let _ = pif::parse(&text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn serialization_round_trips(p in enrichment()) {
        let text = pif::serialize(&p);
        let back = pif::parse(&text).unwrap();
        prop_assert_eq!(pif::serialize(&back), text);
        prop_assert!(p.standard_form().isomorphic(&back.standard_form()).unwrap());
    }

    #[test]
    fn enrichments_satisfy_the_global_invariants(p in enrichment()) {
        prop_assert!(check_global(&p).is_ok(), "{:?}", check_global(&p));
        quotient::audit(&p).unwrap();
    }

    #[test]
    fn insertions_preserve_the_produced_space(i in 0usize..64, count in 1usize..6, seed in any::<u64>()) {
        let p = entry(i);
        let q = catalog::random_insertions(&p, count, seed).unwrap();
        let (a, b) = (quotient::summarize(&p).unwrap(), quotient::summarize(&q).unwrap());
        prop_assert_eq!(quotient::chi_quotient(&p), quotient::chi_quotient(&q));
        prop_assert_eq!(a.homology, b.homology);
        prop_assert_eq!(a.manifold.manifold, b.manifold.manifold);
        prop_assert_eq!(a.components.counts(), b.components.counts());
        prop_assert_eq!(moves::alike(&p, &q).unwrap().verdict == Verdict::NotAlike, false);
    }

    #[test]
    fn random_schemes_satisfy_the_global_invariants(which in 0usize..4, seed in any::<u64>()) {
        let ball = match which {
            0 => catalog::cube_ball(),
            1 => catalog::octahedron_ball(),
            2 => catalog::dodecahedron_ball(),
            _ => catalog::lens_ball(1 + (seed % 9) as usize).unwrap(),
        };
        let report = catalog::search_schemes(&ball, SearchLimits { max_schemes: 1, seed }).unwrap();
        let rec = &report.records[0];
        let pairs: Vec<(&str, &str, usize)> = rec.pairs.iter().map(|(a, b, k)| (a.as_str(), b.as_str(), *k)).collect();
        let p = Polyhedron::new("sample", ball, &pairs).unwrap();
        prop_assert!(check_global(&p).is_ok(), "{:?}", check_global(&p));
        if rec.distinguished {
            prop_assert!(rec.manifold);
        }
    }

    #[test]
    fn minimization_does_not_depend_on_order(i in 0usize..2, count in 1usize..8, seed in any::<u64>()) {
        let p = [catalog::cube_twist(catalog::Twist::Quarter), catalog::dodecahedral_space()][i].clone();
        let q = catalog::random_insertions(&p, count, seed).unwrap();
        let a = moves::minimize_with(&q, RemovalOrder::Lexicographic);
        let b = moves::minimize_with(&q, RemovalOrder::Reversed);
        let (Outcome::Minimum(x), Outcome::Minimum(y)) = (&a.outcome, &b.outcome) else {
            return Err(TestCaseError::fail("minimization did not reach a minimum"));
        };
        prop_assert!(x.isomorphic(y).unwrap());
        prop_assert!(x.isomorphic(&p).unwrap());
    }

    #[test]
    fn standard_form_is_idempotent(p in enrichment()) {
        let s = p.standard_form();
        prop_assert!(s.is_standard());
        prop_assert_eq!(pif::serialize(&s.standard_form()), pif::serialize(&s));
    }
}
