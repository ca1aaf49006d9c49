#![no_main]

// One face per line: `name: +a -b ...`.

use libfuzzer_sys::fuzz_target;
use polyglue::{CellDividedBall, FaceWord, Sign, SignedLabel};

fn faces(text: &str) -> Option<Vec<FaceWord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let (name, word) = line.split_once(':')?;
            let word = word
                .split_whitespace()
                .map(|t| match t.strip_prefix('-') {
                    Some(l) => SignedLabel::new(l, Sign::Minus),
                    None => SignedLabel::new(t.trim_start_matches('+'), Sign::Plus),
                })
                .collect();
            Some(FaceWord::new(name.trim(), word))
        })
        .collect()
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Some(faces) = faces(text) else { return };
    if let Ok(ball) = CellDividedBall::new(faces) {
        assert_eq!(ball.euler_characteristic(), 2);
        assert_eq!(ball.dart_count(), 2 * ball.label_count());
        let again = CellDividedBall::new(ball.face_words()).expect("a valid ball rebuilds");
        assert_eq!(again.canonical_code(), ball.canonical_code());
    }
});
