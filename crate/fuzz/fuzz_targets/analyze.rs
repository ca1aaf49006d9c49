#![no_main]

use libfuzzer_sys::fuzz_target;
use polyglue::{moves, pif, quotient, report};

const MAX_DARTS: usize = 64;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(p) = pif::parse(text) else { return };
    if p.ball().dart_count() > MAX_DARTS {
        return;
    }
    quotient::audit(&p).expect("parsed polyhedra pass the audit");
    let c = report::classify(&p).expect("classification of a valid polyhedron");
    assert_eq!(c.chi_scar, c.chi_quotient + 1);
    let genera: usize = c.singularities.iter().map(|s| s.genus).sum();
    assert_eq!(genera as i64, c.chi_quotient);
    let m = moves::minimize(&p);
    let reduced = quotient::homology(m.outcome.polyhedron()).expect("homology");
    assert_eq!(reduced, c.homology);
});
