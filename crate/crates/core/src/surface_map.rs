//! Cell-divided balls as oriented combinatorial maps of the boundary sphere.
//!
//! A ball is given by named faces, each carrying a cyclic word of signed edge
//! labels read in the orientation induced by one fixed orientation of the
//! ball. Every occurrence of a label in a word is a *dart*. Darts are numbered
//! face by face, so dart `(f, j)` is the `j`-th side of face `f`.
//!
//! Corner `c_j` of a face is the tail of side `j`; corners and darts share the
//! same index space. Vertices are the orbits of `d ↦ iota(phi(d))` (darts
//! grouped by their head); transporting that through `phi` gives the corner
//! rotation `c ↦ phi(iota(c))`, which is what the vertex tables store.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// One letter of a boundary word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedLabel {
    pub label: String,
    pub sign: Sign,
}

impl SignedLabel {
    pub fn new(label: impl Into<String>, sign: Sign) -> Self {
        SignedLabel {
            label: label.into(),
            sign,
        }
    }

    pub fn plus(label: impl Into<String>) -> Self {
        Self::new(label, Sign::Plus)
    }

    pub fn minus(label: impl Into<String>) -> Self {
        Self::new(label, Sign::Minus)
    }

    /// The same side traversed the other way.
    pub fn reversed(&self) -> Self {
        Self::new(self.label.clone(), self.sign.flip())
    }
}

impl fmt::Display for SignedLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.sign.symbol(), self.label)
    }
}

/// A named face and its cyclic boundary word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceWord {
    pub name: String,
    pub word: Vec<SignedLabel>,
}

impl FaceWord {
    pub fn new(name: impl Into<String>, word: Vec<SignedLabel>) -> Self {
        FaceWord {
            name: name.into(),
            word,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Dart(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FaceId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LabelId(pub usize);

/// True for names usable as face, label or polyhedron identifiers.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || matches!(c, '_' | '.' | '-'))
}

/// First name of the form `base`, `base.1`, `base.2`, ... not rejected by `taken`.
pub(crate) fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> String {
    if !taken(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}.{i}"))
        .find(|c| !taken(c))
        .expect("unbounded search")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct DartInfo {
    face: usize,
    pos: usize,
    label: usize,
    sign: Sign,
}

/// A validated cell-divided ball. Immutable; every transformation returns a
/// new value.
#[derive(Clone, Debug)]
pub struct CellDividedBall {
    face_names: Vec<String>,
    face_start: Vec<usize>,
    label_names: Vec<String>,
    label_index: HashMap<String, usize>,
    darts: Vec<DartInfo>,
    iota: Vec<usize>,
    label_darts: Vec<[usize; 2]>,
    corner_vertex: Vec<usize>,
    vertices: Vec<Vec<Dart>>,
}

impl CellDividedBall {
    /// Builds and validates a ball from its face words.
    pub fn new(faces: Vec<FaceWord>) -> Result<Self> {
        if faces.is_empty() {
            return Err(Error::NoFaces);
        }
        let mut face_names = Vec::with_capacity(faces.len());
        let mut face_start = Vec::with_capacity(faces.len() + 1);
        let mut label_names: Vec<String> = Vec::new();
        let mut label_index: HashMap<String, usize> = HashMap::new();
        let mut darts = Vec::new();
        let mut seen_faces = HashMap::new();

        for (f, face) in faces.iter().enumerate() {
            if !is_identifier(&face.name) {
                return Err(Error::InvalidIdentifier(face.name.clone()));
            }
            if seen_faces.insert(face.name.clone(), f).is_some() {
                return Err(Error::DuplicateFace(face.name.clone()));
            }
            if face.word.is_empty() {
                return Err(Error::EmptyFace(face.name.clone()));
            }
            face_names.push(face.name.clone());
            face_start.push(darts.len());
            for (pos, letter) in face.word.iter().enumerate() {
                if !is_identifier(&letter.label) {
                    return Err(Error::InvalidIdentifier(letter.label.clone()));
                }
                let label = *label_index.entry(letter.label.clone()).or_insert_with(|| {
                    label_names.push(letter.label.clone());
                    label_names.len() - 1
                });
                darts.push(DartInfo {
                    face: f,
                    pos,
                    label,
                    sign: letter.sign,
                });
            }
        }
        face_start.push(darts.len());

        let mut occurrences: Vec<Vec<usize>> = vec![Vec::new(); label_names.len()];
        for (d, info) in darts.iter().enumerate() {
            occurrences[info.label].push(d);
        }
        for (l, occ) in occurrences.iter().enumerate() {
            if occ.len() != 2 {
                return Err(Error::LabelCount {
                    label: label_names[l].clone(),
                    count: occ.len(),
                });
            }
        }
        for (l, occ) in occurrences.iter().enumerate() {
            if darts[occ[0]].sign == darts[occ[1]].sign {
                return Err(Error::Orientation(label_names[l].clone()));
            }
        }
        let label_darts: Vec<[usize; 2]> = occurrences.iter().map(|o| [o[0], o[1]]).collect();
        let mut iota = vec![0; darts.len()];
        for &[a, b] in &label_darts {
            iota[a] = b;
            iota[b] = a;
        }

        let mut ball = CellDividedBall {
            face_names,
            face_start,
            label_names,
            label_index,
            darts,
            iota,
            label_darts,
            corner_vertex: Vec::new(),
            vertices: Vec::new(),
        };

        if !ball.is_connected() {
            return Err(Error::Disconnected);
        }
        ball.derive_vertices();
        let chi = ball.euler_characteristic();
        if chi != 2 {
            return Err(Error::NotSphere { chi });
        }
        Ok(ball)
    }

    fn is_connected(&self) -> bool {
        let n = self.darts.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(d) = stack.pop() {
            for next in [self.phi_raw(d), self.iota[d]] {
                if !seen[next] {
                    seen[next] = true;
                    count += 1;
                    stack.push(next);
                }
            }
        }
        count == n
    }

    fn derive_vertices(&mut self) {
        let n = self.darts.len();
        let mut corner_vertex = vec![usize::MAX; n];
        let mut vertices = Vec::new();
        for start in 0..n {
            if corner_vertex[start] != usize::MAX {
                continue;
            }
            let v = vertices.len();
            let mut orbit = Vec::new();
            let mut c = start;
            loop {
                corner_vertex[c] = v;
                orbit.push(Dart(c));
                c = self.phi_raw(self.iota[c]);
                if c == start {
                    break;
                }
            }
            vertices.push(orbit);
        }
        self.corner_vertex = corner_vertex;
        self.vertices = vertices;
    }

    #[inline]
    fn phi_raw(&self, d: usize) -> usize {
        let info = self.darts[d];
        let start = self.face_start[info.face];
        let len = self.face_start[info.face + 1] - start;
        start + (info.pos + 1) % len
    }

    #[inline]
    fn phi_inv_raw(&self, d: usize) -> usize {
        let info = self.darts[d];
        let start = self.face_start[info.face];
        let len = self.face_start[info.face + 1] - start;
        start + (info.pos + len - 1) % len
    }

    pub fn face_count(&self) -> usize {
        self.face_names.len()
    }

    pub fn label_count(&self) -> usize {
        self.label_names.len()
    }

    pub fn dart_count(&self) -> usize {
        self.darts.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// V − E + F.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.label_count() as i64 + self.face_count() as i64
    }

    pub fn face_name(&self, f: FaceId) -> &str {
        &self.face_names[f.0]
    }

    pub fn face_names(&self) -> &[String] {
        &self.face_names
    }

    pub fn face_id(&self, name: &str) -> Option<FaceId> {
        self.face_names.iter().position(|n| n == name).map(FaceId)
    }

    pub fn face_len(&self, f: FaceId) -> usize {
        self.face_start[f.0 + 1] - self.face_start[f.0]
    }

    pub fn face_darts(&self, f: FaceId) -> impl Iterator<Item = Dart> {
        (self.face_start[f.0]..self.face_start[f.0 + 1]).map(Dart)
    }

    pub fn faces(&self) -> impl Iterator<Item = FaceId> {
        (0..self.face_count()).map(FaceId)
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> {
        (0..self.dart_count()).map(Dart)
    }

    /// Dart at position `pos` (taken modulo the side count) of face `f`.
    pub fn dart(&self, f: FaceId, pos: usize) -> Dart {
        Dart(self.face_start[f.0] + pos % self.face_len(f))
    }

    pub fn face_of(&self, d: Dart) -> FaceId {
        FaceId(self.darts[d.0].face)
    }

    pub fn position(&self, d: Dart) -> usize {
        self.darts[d.0].pos
    }

    pub fn label_of(&self, d: Dart) -> LabelId {
        LabelId(self.darts[d.0].label)
    }

    pub fn sign_of(&self, d: Dart) -> Sign {
        self.darts[d.0].sign
    }

    pub fn signed_label(&self, d: Dart) -> SignedLabel {
        SignedLabel::new(self.label_names[self.darts[d.0].label].clone(), self.sign_of(d))
    }

    pub fn label_name(&self, l: LabelId) -> &str {
        &self.label_names[l.0]
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    pub fn label_id(&self, name: &str) -> Option<LabelId> {
        self.label_index.get(name).copied().map(LabelId)
    }

    /// The two darts carrying label `l`, in dart order.
    pub fn label_darts(&self, l: LabelId) -> [Dart; 2] {
        let [a, b] = self.label_darts[l.0];
        [Dart(a), Dart(b)]
    }

    /// Next dart along the face cycle.
    pub fn phi(&self, d: Dart) -> Dart {
        Dart(self.phi_raw(d.0))
    }

    pub fn phi_inv(&self, d: Dart) -> Dart {
        Dart(self.phi_inv_raw(d.0))
    }

    /// The other dart with the same label.
    pub fn iota(&self, d: Dart) -> Dart {
        Dart(self.iota[d.0])
    }

    pub fn vertices(&self) -> &[Vec<Dart>] {
        &self.vertices
    }

    /// Corners (equivalently, outgoing darts) at vertex `v`, in rotation order.
    pub fn vertex_corners(&self, v: VertexId) -> Result<&[Dart]> {
        self.vertices
            .get(v.0)
            .map(Vec::as_slice)
            .ok_or(Error::UnknownVertex(v.0))
    }

    /// Vertex at the tail of `d`, i.e. at corner `d`.
    pub fn corner_vertex(&self, d: Dart) -> VertexId {
        VertexId(self.corner_vertex[d.0])
    }

    pub fn head_vertex(&self, d: Dart) -> VertexId {
        self.corner_vertex(self.phi(d))
    }

    /// Number of edge-ends at `v`; a loop contributes two.
    pub fn vertex_degree(&self, v: VertexId) -> Result<usize> {
        self.vertex_corners(v).map(<[Dart]>::len)
    }

    /// Endpoints of `l` in its canonical direction (the direction of its `+` dart).
    pub fn label_endpoints(&self, l: LabelId) -> (VertexId, VertexId) {
        let [a, b] = self.label_darts(l);
        let plus = if self.sign_of(a) == Sign::Plus { a } else { b };
        (self.corner_vertex(plus), self.head_vertex(plus))
    }

    pub fn face_word(&self, f: FaceId) -> Vec<SignedLabel> {
        self.face_darts(f).map(|d| self.signed_label(d)).collect()
    }

    pub fn face_words(&self) -> Vec<FaceWord> {
        self.faces()
            .map(|f| FaceWord::new(self.face_name(f), self.face_word(f)))
            .collect()
    }

    pub(crate) fn fresh_label(&self, base: &str) -> String {
        fresh_name(base, |c| self.label_index.contains_key(c))
    }

    /// Splits `label` at a fresh degree-2 vertex.
    pub fn subdivide_edge(&self, label: &str) -> Result<Self> {
        let l = self
            .label_id(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
        let first = self.fresh_label(&format!("{label}_0"));
        let second = fresh_name(&format!("{label}_1"), |c| {
            c == first || self.label_index.contains_key(c)
        });
        let faces = self
            .faces()
            .map(|f| {
                let mut word = Vec::with_capacity(self.face_len(f) + 1);
                for d in self.face_darts(f) {
                    if self.label_of(d) != l {
                        word.push(self.signed_label(d));
                    } else if self.sign_of(d) == Sign::Plus {
                        word.push(SignedLabel::plus(first.clone()));
                        word.push(SignedLabel::plus(second.clone()));
                    } else {
                        word.push(SignedLabel::minus(second.clone()));
                        word.push(SignedLabel::minus(first.clone()));
                    }
                }
                FaceWord::new(self.face_name(f), word)
            })
            .collect();
        CellDividedBall::new(faces)
    }

    /// Merges the two edges at a degree-2 vertex into one.
    pub fn smooth_vertex(&self, v: VertexId) -> Result<Self> {
        let corners = self.vertex_corners(v)?;
        if corners.len() != 2 {
            return Err(Error::Degree {
                vertex: v.0,
                degree: corners.len(),
            });
        }
        if self.label_of(corners[0]) == self.label_of(corners[1]) {
            return Err(Error::Loop(v.0));
        }
        let mut removed = vec![false; self.dart_count()];
        for c in corners {
            removed[c.0] = true;
        }
        self.merge_at_corners(&removed).map(|(ball, _)| ball)
    }

    /// Deletes the marked corners, merging the sides on either side of each
    /// into one edge. Returns the new ball and, for every old dart, the
    /// position of the merged side containing it in its (unchanged) face.
    ///
    /// Every face must keep at least one corner, and each merged run must
    /// appear exactly twice (once per side) for the result to validate.
    pub(crate) fn merge_at_corners(&self, removed: &[bool]) -> Result<(Self, Vec<usize>)> {
        let mut new_pos = vec![0; self.dart_count()];
        let mut faces = Vec::with_capacity(self.face_count());
        for f in self.faces() {
            let m = self.face_len(f);
            let start = self.face_start[f.0];
            let first_kept = (0..m).find(|&p| !removed[start + p]).ok_or_else(|| {
                Error::InternalConsistency(format!(
                    "face `{}` would lose all of its corners",
                    self.face_name(f)
                ))
            })?;
            let mut runs: Vec<Vec<usize>> = Vec::new();
            for t in 0..m {
                let p = (first_kept + t) % m;
                let d = start + p;
                if t == 0 || !removed[d] {
                    runs.push(Vec::new());
                }
                new_pos[d] = runs.len() - 1;
                runs.last_mut().expect("run started").push(d);
            }
            let word = runs.iter().map(|run| self.merged_letter(run)).collect();
            faces.push(FaceWord::new(self.face_name(f), word));
        }
        Ok((CellDividedBall::new(faces)?, new_pos))
    }

    fn merged_letter(&self, run: &[usize]) -> SignedLabel {
        if let [d] = run {
            return self.signed_label(Dart(*d));
        }
        let forward: Vec<(&str, Sign)> = run
            .iter()
            .map(|&d| (self.label_names[self.darts[d].label].as_str(), self.darts[d].sign))
            .collect();
        let backward: Vec<(&str, Sign)> = forward.iter().rev().map(|&(l, s)| (l, s.flip())).collect();
        if forward <= backward {
            SignedLabel::plus(forward[0].0)
        } else {
            SignedLabel::minus(backward[0].0)
        }
    }

    /// Canonical code of the bare ball (no identification scheme), minimal
    /// over roots and both orientations.
    pub fn canonical_code(&self) -> Vec<u32> {
        let n = self.dart_count();
        let phi: Vec<usize> = (0..n).map(|d| self.phi_raw(d)).collect();
        let phi_inv: Vec<usize> = (0..n).map(|d| self.phi_inv_raw(d)).collect();
        crate::canon::minimal_code(&[&[&phi, &self.iota], &[&phi_inv, &self.iota]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(spec: &str) -> Vec<SignedLabel> {
        spec.split_whitespace()
            .map(|t| match t.strip_prefix('-') {
                Some(l) => SignedLabel::minus(l),
                None => SignedLabel::plus(t.trim_start_matches('+')),
            })
            .collect()
    }

    fn ball(faces: &[(&str, &str)]) -> Result<CellDividedBall> {
        CellDividedBall::new(faces.iter().map(|(n, w)| FaceWord::new(*n, word(w))).collect())
    }

    pub(crate) fn cube() -> CellDividedBall {
        // Vertex i sits at the bits (x, y, z) of i; label eIJ runs from i to j.
        ball(&[
            ("xm", "e04 e46 -e26 -e02"),
            ("xp", "e13 e37 -e57 -e15"),
            ("ym", "e01 e15 -e45 -e04"),
            ("yp", "e26 e67 -e37 -e23"),
            ("zm", "e02 e23 -e13 -e01"),
            ("zp", "e45 e57 -e67 -e46"),
        ])
        .unwrap()
    }

    #[test]
    fn cube_counts() {
        let b = cube();
        assert_eq!((b.vertex_count(), b.label_count(), b.face_count()), (8, 12, 6));
        assert_eq!(b.euler_characteristic(), 2);
        assert!(b.vertices().iter().all(|v| v.len() == 3));
        assert_eq!(b.dart_count(), 2 * b.label_count());
    }

    #[test]
    fn lens_ball_counts() {
        let b = ball(&[("N", "e0 e1 e2"), ("S", "-e2 -e1 -e0")]).unwrap();
        assert_eq!((b.vertex_count(), b.label_count(), b.face_count()), (3, 3, 2));
        for v in 0..3 {
            let corners = b.vertex_corners(VertexId(v)).unwrap();
            assert_eq!(corners.len(), 2);
            let faces: Vec<_> = corners.iter().map(|&c| b.face_name(b.face_of(c))).collect();
            assert!(faces.contains(&"N") && faces.contains(&"S"));
        }
    }

    #[test]
    fn one_and_two_sided_faces() {
        let b = ball(&[("N", "e0"), ("S", "-e0")]).unwrap();
        assert_eq!((b.vertex_count(), b.label_count()), (1, 1));
        assert_eq!(b.vertex_degree(VertexId(0)).unwrap(), 2);
        let b = ball(&[("N", "e0 e1"), ("S", "-e1 -e0")]).unwrap();
        assert_eq!(b.vertex_count(), 2);
    }

    #[test]
    fn orientation_error() {
        assert_eq!(
            ball(&[("N", "e0 e1"), ("S", "e0 -e1")]).unwrap_err(),
            Error::Orientation("e0".into())
        );
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            ball(&[("N", "e0 e1"), ("S", "-e1")]),
            Err(Error::LabelCount { .. })
        ));
        assert!(matches!(ball(&[("N", "")]), Err(Error::EmptyFace(_))));
        assert_eq!(CellDividedBall::new(vec![]).unwrap_err(), Error::NoFaces);
        assert!(matches!(
            ball(&[("N", "a"), ("S", "-a"), ("T", "b"), ("U", "-b")]),
            Err(Error::Disconnected)
        ));
        // A torus word: one face, a b -a -b.
        assert_eq!(
            ball(&[("T", "a b -a -b")]).unwrap_err(),
            Error::NotSphere { chi: 0 }
        );
        assert!(matches!(
            ball(&[("N", "a"), ("N", "-a")]),
            Err(Error::DuplicateFace(_))
        ));
    }

    #[test]
    fn subdivide_and_smooth() {
        let b = cube();
        let s = b.subdivide_edge("e45").unwrap();
        assert_eq!((s.vertex_count(), s.label_count(), s.face_count()), (9, 13, 6));
        let s2 = s.subdivide_edge("e45_0").unwrap();
        assert_eq!((s2.vertex_count(), s2.label_count()), (10, 14));

        let v = (0..s.vertex_count())
            .map(VertexId)
            .find(|&v| s.vertex_degree(v).unwrap() == 2)
            .unwrap();
        let back = s.smooth_vertex(v).unwrap();
        assert_eq!(back.canonical_code(), b.canonical_code());

        let corner = (0..b.vertex_count()).map(VertexId).next().unwrap();
        assert!(matches!(b.smooth_vertex(corner), Err(Error::Degree { degree: 3, .. })));
        assert!(matches!(b.subdivide_edge("zz"), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn lens_subdivision_and_smoothing() {
        let p1 = ball(&[("N", "e0"), ("S", "-e0")]).unwrap();
        let p2 = p1.subdivide_edge("e0").unwrap();
        assert_eq!((p2.vertex_count(), p2.label_count()), (2, 2));
        assert!(matches!(p1.smooth_vertex(VertexId(0)), Err(Error::Loop(0))));

        let lens2 = ball(&[("N", "e0 e1"), ("S", "-e1 -e0")]).unwrap();
        let smoothed = lens2.smooth_vertex(VertexId(0)).unwrap();
        assert_eq!(smoothed.canonical_code(), p1.canonical_code());
    }
}
