//! The PIF text format.
//!
//! ```text
//! # lens space L(3,1)
//! name lens-3-1
//! face N : +e0 +e1 +e2
//! face S : -e2 -e1 -e0
//! pair N S offset 1
//! ```
//!
//! One directive per line, `#` starts a comment. A label without sign is
//! read as `+`. The colon may touch the face name.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::error::Error;
use crate::scheme::{FacePairing, Polyhedron};
use crate::surface_map::{is_identifier, CellDividedBall, FaceWord, Sign, SignedLabel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PifErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("{0}")]
    Semantic(Error),
}

/// A parse failure with its 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct PifError {
    pub line: usize,
    pub column: usize,
    pub kind: PifErrorKind,
}

impl PifError {
    fn syntax(at: Pos, msg: impl Into<String>) -> Self {
        PifError {
            line: at.line,
            column: at.column,
            kind: PifErrorKind::Syntax(msg.into()),
        }
    }

    fn semantic(at: Pos, e: Error) -> Self {
        PifError {
            line: at.line,
            column: at.column,
            kind: PifErrorKind::Semantic(e),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    text: &'a str,
    at: Pos,
}

fn tokenize(line: &str, number: usize) -> Vec<Token<'_>> {
    let code = line.split('#').next().unwrap_or("");
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    let column = |byte: usize| code[..byte].chars().count() + 1;
    let pos = |byte| Pos {
        line: number,
        column: column(byte),
    };
    for (i, c) in code.char_indices() {
        if c.is_whitespace() || c == ':' {
            if let Some(s) = start.take() {
                tokens.push(Token {
                    text: &code[s..i],
                    at: pos(s),
                });
            }
            if c == ':' {
                tokens.push(Token {
                    text: ":",
                    at: pos(i),
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push(Token {
            text: &code[s..],
            at: pos(s),
        });
    }
    tokens
}

struct FaceDecl {
    name: String,
    at: Pos,
    word: Vec<(SignedLabel, Pos)>,
}

struct PairDecl {
    a: (String, Pos),
    b: (String, Pos),
    offset: (usize, Pos),
    at: Pos,
}

fn identifier(t: Token<'_>, what: &str) -> Result<String, PifError> {
    if is_identifier(t.text) {
        Ok(t.text.to_string())
    } else {
        Err(PifError::syntax(t.at, format!("`{}` is not a valid {what}", t.text)))
    }
}

fn letter(t: Token<'_>) -> Result<SignedLabel, PifError> {
    let (sign, rest) = match t.text.as_bytes()[0] {
        b'+' => (Sign::Plus, &t.text[1..]),
        b'-' => (Sign::Minus, &t.text[1..]),
        _ => (Sign::Plus, t.text),
    };
    if !is_identifier(rest) {
        return Err(PifError::syntax(t.at, format!("`{}` is not a signed label", t.text)));
    }
    Ok(SignedLabel::new(rest, sign))
}

pub fn parse(text: &str) -> Result<Polyhedron, PifError> {
    let mut name: Option<(String, Pos)> = None;
    let mut faces: Vec<FaceDecl> = Vec::new();
    let mut pairs: Vec<PairDecl> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let tokens = tokenize(line, i + 1);
        let Some(&head) = tokens.first() else {
            continue;
        };
        let end = Pos {
            line: i + 1,
            column: line.chars().count() + 1,
        };
        let expect = |k: usize, what: &str| -> Result<Token<'_>, PifError> {
            tokens
                .get(k)
                .copied()
                .ok_or_else(|| PifError::syntax(end, format!("expected {what}")))
        };
        match head.text {
            "name" => {
                if let Some((_, first)) = &name {
                    return Err(PifError::syntax(
                        head.at,
                        format!("second `name` directive (first on line {})", first.line),
                    ));
                }
                let id = identifier(expect(1, "a polyhedron name")?, "polyhedron name")?;
                if let Some(extra) = tokens.get(2) {
                    return Err(PifError::syntax(extra.at, "unexpected token after the name"));
                }
                name = Some((id, head.at));
            }
            "face" => {
                let id_token = expect(1, "a face name")?;
                let id = identifier(id_token, "face name")?;
                let colon = expect(2, "`:`")?;
                if colon.text != ":" {
                    return Err(PifError::syntax(colon.at, "expected `:` after the face name"));
                }
                let word = tokens[3..]
                    .iter()
                    .map(|&t| letter(t).map(|l| (l, t.at)))
                    .collect::<Result<Vec<_>, _>>()?;
                faces.push(FaceDecl {
                    name: id,
                    at: id_token.at,
                    word,
                });
            }
            "pair" => {
                let a = expect(1, "a face name")?;
                let b = expect(2, "a face name")?;
                let kw = expect(3, "`offset`")?;
                if kw.text != "offset" {
                    return Err(PifError::syntax(kw.at, "expected `offset`"));
                }
                let k = expect(4, "an offset")?;
                let offset = k
                    .text
                    .parse::<usize>()
                    .map_err(|_| PifError::syntax(k.at, format!("`{}` is not an offset", k.text)))?;
                if let Some(extra) = tokens.get(5) {
                    return Err(PifError::syntax(extra.at, "unexpected token after the offset"));
                }
                pairs.push(PairDecl {
                    a: (identifier(a, "face name")?, a.at),
                    b: (identifier(b, "face name")?, b.at),
                    offset: (offset, k.at),
                    at: head.at,
                });
            }
            other => {
                return Err(PifError::syntax(head.at, format!("unknown directive `{other}`")));
            }
        }
    }
    build(name, faces, pairs)
}

fn build(
    name: Option<(String, Pos)>,
    faces: Vec<FaceDecl>,
    pairs: Vec<PairDecl>,
) -> Result<Polyhedron, PifError> {
    let origin = Pos { line: 1, column: 1 };
    let first_face = faces.first().map_or(origin, |f| f.at);
    let mut face_at: HashMap<&str, Pos> = HashMap::new();
    let mut label_at: HashMap<&str, Pos> = HashMap::new();
    for f in &faces {
        face_at.entry(&f.name).or_insert(f.at);
        for (l, at) in &f.word {
            label_at.entry(&l.label).or_insert(*at);
        }
    }
    let words = faces
        .iter()
        .map(|f| FaceWord::new(f.name.clone(), f.word.iter().map(|(l, _)| l.clone()).collect()))
        .collect();
    let ball = CellDividedBall::new(words).map_err(|e| {
        let at = match &e {
            Error::DuplicateFace(n) => faces
                .iter()
                .filter(|f| &f.name == n)
                .nth(1)
                .map_or(first_face, |f| f.at),
            Error::EmptyFace(n) => face_at.get(n.as_str()).copied().unwrap_or(first_face),
            Error::LabelCount { label, .. } | Error::Orientation(label) => {
                label_at.get(label.as_str()).copied().unwrap_or(first_face)
            }
            _ => first_face,
        };
        PifError::semantic(at, e)
    })?;

    let mut paired: HashMap<usize, Pos> = HashMap::new();
    let mut resolved = Vec::with_capacity(pairs.len());
    for p in &pairs {
        let resolve = |(n, at): &(String, Pos)| {
            ball.face_id(n)
                .ok_or_else(|| PifError::semantic(*at, Error::UnknownFace(n.clone())))
        };
        let (fa, fb) = (resolve(&p.a)?, resolve(&p.b)?);
        if fa == fb {
            return Err(PifError::semantic(p.at, Error::SelfPairing(p.a.0.clone())));
        }
        let (len_a, len_b) = (ball.face_len(fa), ball.face_len(fb));
        if len_a != len_b {
            return Err(PifError::semantic(
                p.at,
                Error::SideCountMismatch {
                    a: p.a.0.clone(),
                    len_a,
                    b: p.b.0.clone(),
                    len_b,
                },
            ));
        }
        if p.offset.0 >= len_a {
            return Err(PifError::semantic(
                p.offset.1,
                Error::OffsetOutOfRange {
                    offset: p.offset.0,
                    sides: len_a,
                },
            ));
        }
        for (f, (n, at)) in [(fa, &p.a), (fb, &p.b)] {
            if paired.insert(f.0, *at).is_some() {
                return Err(PifError::semantic(*at, Error::PairedTwice(n.clone())));
            }
        }
        resolved.push(FacePairing {
            face_a: fa,
            face_b: fb,
            offset: p.offset.0,
        });
    }
    if let Some(f) = ball.faces().find(|f| !paired.contains_key(&f.0)) {
        let n = ball.face_name(f);
        return Err(PifError::semantic(
            face_at[n],
            Error::Unpaired(n.to_string()),
        ));
    }
    let (name, name_at) = name.unwrap_or_else(|| ("polyhedron".to_string(), origin));
    Polyhedron::from_pairings(name, ball, resolved).map_err(|e| PifError::semantic(name_at, e))
}

/// Deterministic text: faces sorted by name, each word starting at its
/// smallest signed label (`+` before `-`), pairings sorted.
pub fn serialize(p: &Polyhedron) -> String {
    let ball = p.ball();
    let mut rotation = vec![0; ball.face_count()];
    let mut faces: Vec<(String, Vec<SignedLabel>)> = ball
        .faces()
        .map(|f| {
            let word = ball.face_word(f);
            let r = (0..word.len())
                .min_by(|&i, &j| word[i].cmp(&word[j]))
                .expect("faces are nonempty");
            rotation[f.0] = r;
            let mut rotated = word[r..].to_vec();
            rotated.extend_from_slice(&word[..r]);
            (ball.face_name(f).to_string(), rotated)
        })
        .collect();
    faces.sort();
    let mut pairs: Vec<(String, String, usize)> = p
        .pairings()
        .iter()
        .map(|q| {
            let m = ball.face_len(q.face_a);
            let shift = rotation[q.face_a.0] + rotation[q.face_b.0];
            let offset = (q.offset + 2 * m - shift) % m;
            let (a, b) = (ball.face_name(q.face_a), ball.face_name(q.face_b));
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            (a.to_string(), b.to_string(), offset)
        })
        .collect();
    pairs.sort();

    let mut out = String::new();
    writeln!(out, "name {}", p.name()).expect("writing to a string");
    for (name, word) in &faces {
        let letters: Vec<String> = word.iter().map(ToString::to_string).collect();
        writeln!(out, "face {name} : {}", letters.join(" ")).expect("writing to a string");
    }
    for (a, b, k) in &pairs {
        writeln!(out, "pair {a} {b} offset {k}").expect("writing to a string");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const LENS: &str = "# lens space L(3,1)\nname lens-3-1\nface N : +e0 +e1 +e2\nface S: -e2 -e1 -e0\n\npair N S offset 1\n";

    fn err(text: &str) -> PifError {
        parse(text).unwrap_err()
    }

    #[test]
    fn parses_the_lens_document() {
        let p = parse(LENS).unwrap();
        assert_eq!(p.name(), "lens-3-1");
        assert_eq!(p.edge_classes().len(), 1);
        let again = parse(&serialize(&p)).unwrap();
        assert_eq!(serialize(&again), serialize(&p));
    }

    #[test]
    fn unsigned_labels_are_positive() {
        let p = parse("face N : a\nface S : -a\npair N S offset 0").unwrap();
        assert_eq!(p.ball().face_word(p.ball().face_id("N").unwrap())[0].sign, Sign::Plus);
        assert_eq!(p.name(), "polyhedron");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = err("name x\nfase N : a\n");
        assert_eq!((e.line, e.column), (2, 1));
        assert!(matches!(e.kind, PifErrorKind::Syntax(_)));
        let e = err("face N : a *b\n");
        assert_eq!((e.line, e.column), (1, 12));
        let e = err("face N : a\nface S : -a\npair N S offset x\n");
        assert_eq!((e.line, e.column), (3, 17));
        let e = err("face N a\n");
        assert!(matches!(e.kind, PifErrorKind::Syntax(_)));
        let e = err("name a\nname b\n");
        assert_eq!(e.line, 2);
    }

    #[test]
    fn semantic_errors_carry_positions() {
        let e = err("face N : a\nface S : -a\npair N N offset 0\n");
        assert_eq!(e.line, 3);
        assert_eq!(e.kind, PifErrorKind::Semantic(Error::SelfPairing("N".into())));
        let e = err("face N : a b\nface S : -b -a\npair N S offset 2\n");
        assert_eq!((e.line, e.column), (3, 17));
        assert!(matches!(
            e.kind,
            PifErrorKind::Semantic(Error::OffsetOutOfRange { offset: 2, sides: 2 })
        ));
        let e = err("face N : a b\nface S : a -b\npair N S offset 0\n");
        assert_eq!((e.line, e.column), (1, 10));
        let e = err("face N : a\nface S : -a\n");
        assert_eq!(e.kind, PifErrorKind::Semantic(Error::Unpaired("N".into())));
        let e = err("face N : a\nface S : -a\npair N T offset 0\n");
        assert_eq!((e.line, e.column), (3, 8));
    }

    #[test]
    fn serialization_rotates_and_adjusts_offsets() {
        let p = parse("name t\nface S : -e1 -e0\nface N : e1 e0\npair S N offset 1\n").unwrap();
        let text = serialize(&p);
        assert_eq!(
            text,
            "name t\nface N : +e0 +e1\nface S : -e0 -e1\npair N S offset 1\n"
        );
    }
}
