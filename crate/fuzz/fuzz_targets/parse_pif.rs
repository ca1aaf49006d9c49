#![no_main]

use libfuzzer_sys::fuzz_target;
use polyglue::pif;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = pif::parse(text) {
        let once = pif::serialize(&p);
        let back = pif::parse(&once).expect("serialized output parses");
        assert_eq!(pif::serialize(&back), once);
    }
});
