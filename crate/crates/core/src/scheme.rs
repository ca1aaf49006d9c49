//! Identification schemes: face pairings, edge cycles, vertex orders,
//! standard forms and isomorphism.
//!
//! A pairing `(A, B, k)` of two `m`-sided faces sends side `j` of `A` to side
//! `(k − j) mod m` of `B`, traversed backwards. Reading both faces in their
//! induced orientations this is the only shape an orientation-reversing,
//! cell-preserving identification can take, so the reversal is never stored.
//! The same offset describes the inverse map, read from `B`.

use serde::Serialize;

use crate::canon;
use crate::error::{Error, Result};
use crate::surface_map::{
    is_identifier, CellDividedBall, Dart, FaceId, FaceWord, LabelId, Sign, VertexId,
};
use crate::union_find::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FacePairing {
    pub face_a: FaceId,
    pub face_b: FaceId,
    pub offset: usize,
}

/// An orbit of edge labels under the scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeClass {
    /// Member labels sorted by name.
    pub labels: Vec<LabelId>,
    /// Direction of each member relative to the first one.
    pub orientations: Vec<Sign>,
}

impl EdgeClass {
    pub fn cycle(&self) -> usize {
        self.labels.len()
    }

    pub fn orientation_of(&self, l: LabelId) -> Option<Sign> {
        self.labels
            .iter()
            .position(|&x| x == l)
            .map(|i| self.orientations[i])
    }
}

/// An orbit of ball vertices under the scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexClass {
    pub vertices: Vec<VertexId>,
}

impl VertexClass {
    pub fn order(&self) -> usize {
        self.vertices.len()
    }
}

/// Canonical encoding of a standard polyhedron; equal encodings mean
/// isomorphic polyhedra (possibly through a mirror).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(pub Vec<u32>);

/// A cell-divided ball together with an identification scheme.
#[derive(Clone, Debug)]
pub struct Polyhedron {
    name: String,
    ball: CellDividedBall,
    pairings: Vec<FacePairing>,
    pairing_of_face: Vec<usize>,
}

impl Polyhedron {
    /// Builds a polyhedron from pairings given by face name.
    pub fn new(
        name: impl Into<String>,
        ball: CellDividedBall,
        pairings: &[(&str, &str, usize)],
    ) -> Result<Self> {
        let resolve = |n: &str| ball.face_id(n).ok_or_else(|| Error::UnknownFace(n.to_string()));
        let pairings = pairings
            .iter()
            .map(|&(a, b, offset)| {
                Ok(FacePairing {
                    face_a: resolve(a)?,
                    face_b: resolve(b)?,
                    offset,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_pairings(name, ball, pairings)
    }

    pub fn from_pairings(
        name: impl Into<String>,
        ball: CellDividedBall,
        pairings: Vec<FacePairing>,
    ) -> Result<Self> {
        let name = name.into();
        if !is_identifier(&name) {
            return Err(Error::InvalidIdentifier(name));
        }
        let faces = ball.face_count();
        let mut pairing_of_face = vec![usize::MAX; faces];
        for (i, p) in pairings.iter().enumerate() {
            for f in [p.face_a, p.face_b] {
                if f.0 >= faces {
                    return Err(Error::UnknownFace(format!("#{}", f.0)));
                }
            }
            if p.face_a == p.face_b {
                return Err(Error::SelfPairing(ball.face_name(p.face_a).to_string()));
            }
            let (len_a, len_b) = (ball.face_len(p.face_a), ball.face_len(p.face_b));
            if len_a != len_b {
                return Err(Error::SideCountMismatch {
                    a: ball.face_name(p.face_a).to_string(),
                    len_a,
                    b: ball.face_name(p.face_b).to_string(),
                    len_b,
                });
            }
            if p.offset >= len_a {
                return Err(Error::OffsetOutOfRange {
                    offset: p.offset,
                    sides: len_a,
                });
            }
            for f in [p.face_a, p.face_b] {
                if pairing_of_face[f.0] != usize::MAX {
                    return Err(Error::PairedTwice(ball.face_name(f).to_string()));
                }
                pairing_of_face[f.0] = i;
            }
        }
        if let Some(f) = pairing_of_face.iter().position(|&p| p == usize::MAX) {
            return Err(Error::Unpaired(ball.face_name(FaceId(f)).to_string()));
        }
        Ok(Polyhedron {
            name,
            ball,
            pairings,
            pairing_of_face,
        })
    }

    /// Rebuilds from face words and named pairings.
    pub fn from_words(
        name: impl Into<String>,
        faces: Vec<FaceWord>,
        pairings: &[(String, String, usize)],
    ) -> Result<Self> {
        let ball = CellDividedBall::new(faces)?;
        let named: Vec<(&str, &str, usize)> = pairings
            .iter()
            .map(|(a, b, k)| (a.as_str(), b.as_str(), *k))
            .collect();
        Self::new(name, ball, &named)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if !is_identifier(&name) {
            return Err(Error::InvalidIdentifier(name));
        }
        self.name = name;
        Ok(self)
    }

    pub fn ball(&self) -> &CellDividedBall {
        &self.ball
    }

    pub fn pairings(&self) -> &[FacePairing] {
        &self.pairings
    }

    pub fn pairing_of(&self, f: FaceId) -> &FacePairing {
        &self.pairings[self.pairing_of_face[f.0]]
    }

    pub fn pairing_index(&self, f: FaceId) -> usize {
        self.pairing_of_face[f.0]
    }

    pub fn partner(&self, f: FaceId) -> FaceId {
        let p = self.pairing_of(f);
        if p.face_a == f {
            p.face_b
        } else {
            p.face_a
        }
    }

    /// Pairings as `(face_a, face_b, offset)` names.
    pub fn named_pairings(&self) -> Vec<(String, String, usize)> {
        self.pairings
            .iter()
            .map(|p| {
                (
                    self.ball.face_name(p.face_a).to_string(),
                    self.ball.face_name(p.face_b).to_string(),
                    p.offset,
                )
            })
            .collect()
    }

    /// Image of a dart under its face's identification.
    pub fn side_map(&self, d: Dart) -> Dart {
        let f = self.ball.face_of(d);
        let j = self.ball.position(d);
        let p = self.pairing_of(f);
        let m = self.ball.face_len(f);
        self.ball.dart(self.partner(f), (p.offset + m - j) % m)
    }

    /// Corner `c_j` of `face` goes to corner `c_{(k − j + 1) mod m}` of its partner.
    pub fn corner_map(&self, face: FaceId, corner: usize) -> (FaceId, usize) {
        let p = self.pairing_of(face);
        let m = self.ball.face_len(face);
        (self.partner(face), (p.offset + m - corner % m + 1) % m)
    }

    /// `corner_map` on the shared dart/corner index space.
    pub fn corner_image(&self, c: Dart) -> Dart {
        let (g, j) = self.corner_map(self.ball.face_of(c), self.ball.position(c));
        self.ball.dart(g, j)
    }

    /// Orbits of edge labels, ordered by their sorted label names.
    pub fn edge_classes(&self) -> Vec<EdgeClass> {
        let ball = &self.ball;
        let n = ball.label_count();
        let mut orient: Vec<Option<Sign>> = vec![None; n];
        let mut classes: Vec<EdgeClass> = Vec::new();
        for start in 0..n {
            if orient[start].is_some() {
                continue;
            }
            orient[start] = Some(Sign::Plus);
            let mut members = vec![start];
            let mut stack = vec![start];
            while let Some(a) = stack.pop() {
                let oa = orient[a].expect("visited");
                for d in ball.label_darts(LabelId(a)) {
                    let e = self.side_map(d);
                    let b = ball.label_of(e).0;
                    // Traversal of `d` is the reverse of traversal of `e`.
                    let ob = oa.times(ball.sign_of(d).times(ball.sign_of(e)).flip());
                    match orient[b] {
                        None => {
                            orient[b] = Some(ob);
                            members.push(b);
                            stack.push(b);
                        }
                        Some(existing) => assert_eq!(
                            existing, ob,
                            "edge `{}` is identified with itself reversed",
                            ball.label_name(LabelId(b))
                        ),
                    }
                }
            }
            members.sort_by(|&x, &y| ball.label_names()[x].cmp(&ball.label_names()[y]));
            let base = orient[members[0]].expect("visited");
            classes.push(EdgeClass {
                orientations: members
                    .iter()
                    .map(|&m| orient[m].expect("visited").times(base))
                    .collect(),
                labels: members.into_iter().map(LabelId).collect(),
            });
        }
        classes.sort_by(|a, b| {
            let names = |c: &EdgeClass| -> Vec<&str> {
                c.labels.iter().map(|&l| ball.label_name(l)).collect()
            };
            names(a).cmp(&names(b))
        });
        classes
    }

    /// Orbits of vertices under `corner_map`, ordered by smallest vertex.
    pub fn vertex_classes(&self) -> Vec<VertexClass> {
        let ball = &self.ball;
        let mut uf = UnionFind::new(ball.vertex_count());
        for c in ball.darts() {
            let image = self.corner_image(c);
            uf.union(ball.corner_vertex(c).0, ball.corner_vertex(image).0);
        }
        uf.groups()
            .into_iter()
            .map(|g| VertexClass {
                vertices: g.into_iter().map(VertexId).collect(),
            })
            .collect()
    }

    /// Index of the edge class of every label.
    pub fn label_class_index(&self, classes: &[EdgeClass]) -> Vec<usize> {
        let mut index = vec![usize::MAX; self.ball.label_count()];
        for (i, c) in classes.iter().enumerate() {
            for l in &c.labels {
                index[l.0] = i;
            }
        }
        index
    }

    /// Index of the vertex class of every vertex.
    pub fn vertex_class_index(&self, classes: &[VertexClass]) -> Vec<usize> {
        let mut index = vec![usize::MAX; self.ball.vertex_count()];
        for (i, c) in classes.iter().enumerate() {
            for v in &c.vertices {
                index[v.0] = i;
            }
        }
        index
    }

    /// First vertex class whose members are all of degree 2 and which
    /// contains no edge with both endpoints in the class.
    pub fn needless_class(&self) -> Option<VertexClass> {
        let ball = &self.ball;
        let classes = self.vertex_classes();
        let class_of = self.vertex_class_index(&classes);
        let mut joined = vec![false; classes.len()];
        for l in 0..ball.label_count() {
            let (t, h) = ball.label_endpoints(LabelId(l));
            if class_of[t.0] == class_of[h.0] {
                joined[class_of[t.0]] = true;
            }
        }
        classes.into_iter().enumerate().find_map(|(i, c)| {
            let all_two = c
                .vertices
                .iter()
                .all(|&v| ball.vertex_degree(v).expect("own vertex") == 2);
            (all_two && !joined[i]).then_some(c)
        })
    }

    pub fn is_standard(&self) -> bool {
        self.needless_class().is_none()
    }

    /// Removes needless vertex classes, one whole class at a time, until
    /// none is left. Offsets are re-derived from the shortened words.
    pub fn standard_form(&self) -> Polyhedron {
        let mut current = self.clone();
        while let Some(class) = current.needless_class() {
            current = current
                .smooth_class(&class)
                .expect("smoothing a needless class yields a valid polyhedron");
        }
        current
    }

    fn smooth_class(&self, class: &VertexClass) -> Result<Polyhedron> {
        let ball = &self.ball;
        let mut removed = vec![false; ball.dart_count()];
        for &v in &class.vertices {
            for c in ball.vertex_corners(v)? {
                removed[c.0] = true;
            }
        }
        let (merged, new_pos) = ball.merge_at_corners(&removed)?;
        let pairings = self
            .pairings
            .iter()
            .map(|p| {
                let m = ball.face_len(p.face_a);
                let m_new = merged.face_len(p.face_a);
                let pos_a = |j: usize| new_pos[ball.dart(p.face_a, j).0];
                let pos_b = |j: usize| new_pos[ball.dart(p.face_b, j).0];
                let offset = (pos_a(0) + pos_b(p.offset)) % m_new;
                for j in 0..m {
                    if (pos_a(j) + pos_b((p.offset + m - j) % m)) % m_new != offset {
                        return Err(Error::InternalConsistency(
                            "smoothing broke a face pairing".into(),
                        ));
                    }
                }
                Ok(FacePairing { offset, ..*p })
            })
            .collect::<Result<Vec<_>>>()?;
        Polyhedron::from_pairings(self.name.clone(), merged, pairings)
    }

    fn generators(&self) -> [Vec<usize>; 4] {
        let ball = &self.ball;
        let phi = ball.darts().map(|d| ball.phi(d).0).collect();
        let phi_inv = ball.darts().map(|d| ball.phi_inv(d).0).collect();
        let iota = ball.darts().map(|d| ball.iota(d).0).collect();
        let side = ball.darts().map(|d| self.side_map(d).0).collect();
        [phi, phi_inv, iota, side]
    }

    /// Minimal breadth-first code over every root dart and both orientations.
    pub fn canonical_form(&self) -> Result<CanonicalForm> {
        if !self.is_standard() {
            return Err(Error::NotStandard);
        }
        let [phi, phi_inv, iota, side] = self.generators();
        Ok(CanonicalForm(canon::minimal_code(&[
            &[&phi, &iota, &side],
            &[&phi_inv, &iota, &side],
        ])))
    }

    pub fn isomorphic(&self, other: &Polyhedron) -> Result<bool> {
        let (a, b) = (self.canonical_form()?, other.canonical_form()?);
        Ok(a == b)
    }

    /// The same polyhedron seen through an orientation-reversing map of the
    /// ball: every word reversed, offsets adjusted.
    pub fn mirror(&self) -> Polyhedron {
        let ball = &self.ball;
        let faces = ball
            .faces()
            .map(|f| {
                let mut word = ball.face_word(f);
                word.reverse();
                FaceWord::new(ball.face_name(f), word)
            })
            .collect();
        // Side j becomes side m − 1 − j on both faces.
        let pairings: Vec<(String, String, usize)> = self
            .named_pairings()
            .into_iter()
            .map(|(a, b, k)| {
                let m = ball.face_len(ball.face_id(&a).expect("own face"));
                (a, b, (2 * m - 2 + m - k) % m)
            })
            .collect();
        Polyhedron::from_words(self.name.clone(), faces, &pairings)
            .expect("mirror of a valid polyhedron is valid")
    }
}
