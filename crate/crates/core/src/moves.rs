//! Insertion and removal of cycle-2 edges, minimization, the distinguished
//! predicate and alikeness.
//!
//! Every move is written as a *draft*: new face words whose letters remember
//! where they came from (an old dart, a piece of a subdivided old dart, or a
//! fresh dart). Offsets are never patched by hand; they are re-derived from
//! the old side map and checked on every side.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quotient;
use crate::scheme::{EdgeClass, Polyhedron};
use crate::surface_map::{fresh_name, Dart, FaceWord, LabelId, Sign, SignedLabel, VertexId};
use crate::union_find::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Origin {
    /// Piece `part` of `parts` of an old dart, counted along the dart.
    Old { dart: Dart, part: u8, parts: u8 },
    Fresh(usize),
}

struct Draft<'a> {
    old: &'a Polyhedron,
    faces: Vec<(String, Vec<(SignedLabel, Origin)>)>,
    pairs: Vec<(String, String)>,
    /// Side-map image of each fresh dart.
    fresh_image: Vec<usize>,
}

impl<'a> Draft<'a> {
    fn new(old: &'a Polyhedron) -> Self {
        let ball = old.ball();
        let faces = ball
            .faces()
            .map(|f| {
                let word = ball
                    .face_darts(f)
                    .map(|d| {
                        let origin = Origin::Old {
                            dart: d,
                            part: 0,
                            parts: 1,
                        };
                        (ball.signed_label(d), origin)
                    })
                    .collect();
                (ball.face_name(f).to_string(), word)
            })
            .collect();
        let pairs = old
            .named_pairings()
            .into_iter()
            .map(|(a, b, _)| (a, b))
            .collect();
        Draft {
            old,
            faces,
            pairs,
            fresh_image: Vec::new(),
        }
    }

    fn image(&self, o: Origin) -> Origin {
        match o {
            Origin::Old { dart, part, parts } => Origin::Old {
                dart: self.old.side_map(dart),
                part: parts - 1 - part,
                parts,
            },
            Origin::Fresh(i) => Origin::Fresh(self.fresh_image[i]),
        }
    }

    fn locate(&self) -> HashMap<Origin, (usize, usize)> {
        let mut at = HashMap::new();
        for (f, (_, word)) in self.faces.iter().enumerate() {
            for (t, &(_, o)) in word.iter().enumerate() {
                at.insert(o, (f, t));
            }
        }
        at
    }

    fn face_index(&self, name: &str) -> usize {
        self.faces
            .iter()
            .position(|(n, _)| n == name)
            .expect("draft face")
    }

    fn partner(&self, name: &str) -> &str {
        self.pairs
            .iter()
            .find_map(|(a, b)| {
                if a == name {
                    Some(b.as_str())
                } else if b == name {
                    Some(a.as_str())
                } else {
                    None
                }
            })
            .expect("every draft face is paired")
    }

    /// Corner of the partner face glued to corner `c` of face `f`.
    fn corner_image(&self, f: usize, c: usize) -> (usize, usize) {
        let at = self.locate();
        let (g, u) = at[&self.image(self.faces[f].1[c].1)];
        (g, (u + 1) % self.faces[g].1.len())
    }

    fn taken_label(&self, name: &str) -> bool {
        self.faces
            .iter()
            .any(|(_, w)| w.iter().any(|(l, _)| l.label == name))
    }

    fn taken_face(&self, name: &str) -> bool {
        self.faces.iter().any(|(n, _)| n == name)
    }

    /// Splits every label of `labels` in two at a fresh vertex.
    fn subdivide(&mut self, labels: &[LabelId]) {
        let ball = self.old.ball();
        let mut names: HashMap<LabelId, (String, String)> = HashMap::new();
        for &l in labels {
            let base = ball.label_name(l);
            let first = fresh_name(&format!("{base}_0"), |c| {
                self.taken_label(c) || names.values().any(|(x, y)| x == c || y == c)
            });
            let second = fresh_name(&format!("{base}_1"), |c| {
                c == first || self.taken_label(c) || names.values().any(|(x, y)| x == c || y == c)
            });
            names.insert(l, (first, second));
        }
        for (_, word) in &mut self.faces {
            let mut next = Vec::with_capacity(word.len() + 2);
            for (letter, origin) in word.drain(..) {
                let Origin::Old { dart, .. } = origin else {
                    next.push((letter, origin));
                    continue;
                };
                let Some((first, second)) = names.get(&ball.label_of(dart)) else {
                    next.push((letter, origin));
                    continue;
                };
                let piece = |part| Origin::Old {
                    dart,
                    part,
                    parts: 2,
                };
                if letter.sign == Sign::Plus {
                    next.push((SignedLabel::plus(first.clone()), piece(0)));
                    next.push((SignedLabel::plus(second.clone()), piece(1)));
                } else {
                    next.push((SignedLabel::minus(second.clone()), piece(0)));
                    next.push((SignedLabel::minus(first.clone()), piece(1)));
                }
            }
            *word = next;
        }
    }

    fn fresh(&mut self, image: usize) -> Origin {
        self.fresh_image.push(image);
        Origin::Fresh(self.fresh_image.len() - 1)
    }

    /// Derives every offset from the side map and checks it on all sides.
    fn finish(self, mismatch: impl Fn(&str) -> Error) -> Result<Polyhedron> {
        let at = self.locate();
        let mut named = Vec::with_capacity(self.pairs.len());
        for (a, b) in &self.pairs {
            let (fa, fb) = (self.face_index(a), self.face_index(b));
            let (wa, wb) = (&self.faces[fa].1, &self.faces[fb].1);
            let m = wa.len();
            if wb.len() != m {
                return Err(mismatch(a));
            }
            let target = |t: usize| at.get(&self.image(wa[t].1)).copied();
            let Some((g, u)) = target(0) else {
                return Err(mismatch(a));
            };
            if g != fb {
                return Err(mismatch(a));
            }
            let k = u % m;
            if (0..m).any(|t| target(t) != Some((fb, (k + m - t) % m))) {
                return Err(mismatch(a));
            }
            named.push((a.clone(), b.clone(), k));
        }
        let faces = self
            .faces
            .into_iter()
            .map(|(name, word)| FaceWord::new(name, word.into_iter().map(|(l, _)| l).collect()))
            .collect();
        Polyhedron::from_words(self.old.name(), faces, &named)
    }
}

fn internal(what: &'static str) -> impl Fn(&str) -> Error {
    move |face| Error::InternalConsistency(format!("{what} broke the pairing of face `{face}`"))
}

fn face_and_len(p: &Polyhedron, face: &str) -> Result<usize> {
    let f = p
        .ball()
        .face_id(face)
        .ok_or_else(|| Error::UnknownFace(face.to_string()))?;
    Ok(p.ball().face_len(f))
}

/// Cyclic run of `word` from position `from` up to, not including, `to`.
fn run<T: Clone>(word: &[T], from: usize, to: usize) -> Vec<T> {
    let m = word.len();
    let count = (to + m - from) % m;
    (0..count).map(|t| word[(from + t) % m].clone()).collect()
}

/// Splits `face` along a new edge from corner `ci` to corner `cj`, and its
/// partner along the mirrored edge.
pub fn insert_chord(p: &Polyhedron, face: &str, ci: usize, cj: usize) -> Result<Polyhedron> {
    let m = face_and_len(p, face)?;
    for c in [ci, cj] {
        if c >= m {
            return Err(Error::CornerOutOfRange {
                face: face.to_string(),
                corner: c,
            });
        }
    }
    if ci == cj {
        return Err(Error::DegenerateChord(ci));
    }
    let mut draft = Draft::new(p);
    let fa = draft.face_index(face);
    let partner = draft.partner(face).to_string();
    let (fb, bi) = draft.corner_image(fa, ci);
    let (_, bj) = draft.corner_image(fa, cj);

    let chord_a = fresh_name("chord", |c| draft.taken_label(c));
    let chord_b = fresh_name("chord", |c| c == chord_a || draft.taken_label(c));
    let a2_name = fresh_name(&format!("{face}.1"), |c| draft.taken_face(c));
    let b2_name = fresh_name(&format!("{partner}.1"), |c| c == a2_name || draft.taken_face(c));

    // Fresh darts: 0 and 1 are the chord in the two halves of `face`,
    // 2 and 3 its mirror in the halves of the partner.
    let d0 = draft.fresh(2);
    let d1 = draft.fresh(3);
    let d2 = draft.fresh(0);
    let d3 = draft.fresh(1);

    let wa = draft.faces[fa].1.clone();
    let wb = draft.faces[fb].1.clone();
    let mut a1 = run(&wa, ci, cj);
    a1.push((SignedLabel::minus(chord_a.clone()), d0));
    let mut a2 = run(&wa, cj, ci);
    a2.push((SignedLabel::plus(chord_a), d1));
    let mut b1 = run(&wb, bj, bi);
    b1.push((SignedLabel::plus(chord_b.clone()), d2));
    let mut b2 = run(&wb, bi, bj);
    b2.push((SignedLabel::minus(chord_b), d3));

    draft.faces[fa].1 = a1;
    draft.faces[fb].1 = b1;
    draft.faces.insert(fa + 1, (a2_name.clone(), a2));
    let fb = draft.face_index(&partner);
    draft.faces.insert(fb + 1, (b2_name.clone(), b2));
    draft.pairs.push((a2_name, b2_name));
    draft.finish(internal("chord insertion"))
}

/// Where a dangling edge is attached on the boundary of a face.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttachPoint {
    Corner(usize),
    /// Interior point of a side; its whole edge class is subdivided first.
    Side(usize),
}

/// Draws an edge with a free endpoint into `face`, mirrored in its partner.
pub fn insert_dangling(p: &Polyhedron, face: &str, at: AttachPoint) -> Result<Polyhedron> {
    let m = face_and_len(p, face)?;
    let mut draft = Draft::new(p);
    let fa = draft.face_index(face);
    let corner = match at {
        AttachPoint::Corner(c) if c < m => c,
        AttachPoint::Corner(c) => {
            return Err(Error::CornerOutOfRange {
                face: face.to_string(),
                corner: c,
            })
        }
        AttachPoint::Side(s) if s < m => {
            let ball = p.ball();
            let dart = ball.dart(ball.face_id(face).expect("checked"), s);
            let label = ball.label_of(dart);
            let class = p
                .edge_classes()
                .into_iter()
                .find(|c| c.labels.contains(&label))
                .expect("every label has a class");
            draft.subdivide(&class.labels);
            let second_half = Origin::Old {
                dart,
                part: 1,
                parts: 2,
            };
            draft.faces[fa]
                .1
                .iter()
                .position(|&(_, o)| o == second_half)
                .expect("subdivided side")
        }
        AttachPoint::Side(s) => {
            return Err(Error::SideOutOfRange {
                face: face.to_string(),
                side: s,
            })
        }
    };
    let (fb, bi) = draft.corner_image(fa, corner);
    let edge_a = fresh_name("stub", |c| draft.taken_label(c));
    let edge_b = fresh_name("stub", |c| c == edge_a || draft.taken_label(c));
    // The outgoing half of each stub is glued to the returning half of the other.
    let out_a = draft.fresh(3);
    let back_a = draft.fresh(2);
    let out_b = draft.fresh(1);
    let back_b = draft.fresh(0);
    let insert = |word: &mut Vec<(SignedLabel, Origin)>, at: usize, name: &str, out, back| {
        word.insert(at, (SignedLabel::minus(name), back));
        word.insert(at, (SignedLabel::plus(name), out));
    };
    insert(&mut draft.faces[fa].1, corner, &edge_a, out_a, back_a);
    insert(&mut draft.faces[fb].1, bi, &edge_b, out_b, back_b);
    draft.finish(internal("dangling insertion"))
}

fn class_of(p: &Polyhedron, label: &str) -> Result<EdgeClass> {
    let l = p
        .ball()
        .label_id(label)
        .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
    Ok(p
        .edge_classes()
        .into_iter()
        .find(|c| c.labels.contains(&l))
        .expect("every label has a class"))
}

/// Deletes the cycle-2 class containing `label`, merging the faces on either
/// side of each of its edges, then normalizes.
pub fn remove_cycle2(p: &Polyhedron, label: &str) -> Result<Polyhedron> {
    let class = class_of(p, label)?;
    if class.cycle() != 2 {
        return Err(Error::NotCycle2 {
            label: label.to_string(),
            cycle: class.cycle(),
        });
    }
    let ball = p.ball();
    let n = ball.dart_count();
    let mut removed = vec![false; n];
    for &l in &class.labels {
        for d in ball.label_darts(l) {
            removed[d.0] = true;
        }
    }
    let disconnect = || Error::Disconnect(label.to_string());
    if removed.iter().all(|&r| r) {
        return Err(disconnect());
    }
    // Next dart of the merged face: skip deleted darts by turning around
    // their tail vertex.
    let next = |d: Dart| {
        let mut y = ball.phi(d);
        while removed[y.0] {
            y = ball.phi(ball.iota(y));
        }
        y
    };
    let mut uf = UnionFind::new(n);
    for d in ball.darts().filter(|d| !removed[d.0]) {
        uf.union(d.0, next(d).0);
        uf.union(d.0, ball.iota(d).0);
    }
    let kept: Vec<Dart> = ball.darts().filter(|d| !removed[d.0]).collect();
    let root = uf.find(kept[0].0);
    if kept.iter().any(|d| uf.find(d.0) != root) {
        return Err(disconnect());
    }

    let mut draft = Draft::new(p);
    draft.faces.clear();
    draft.pairs.clear();
    let mut face_of_dart = vec![usize::MAX; n];
    for &start in &kept {
        if face_of_dart[start.0] != usize::MAX {
            continue;
        }
        let index = draft.faces.len();
        let base = ball.face_name(ball.face_of(start));
        let name = fresh_name(base, |c| draft.taken_face(c));
        let mut word = Vec::new();
        let mut d = start;
        loop {
            face_of_dart[d.0] = index;
            let origin = Origin::Old {
                dart: d,
                part: 0,
                parts: 1,
            };
            word.push((ball.signed_label(d), origin));
            d = next(d);
            if d == start {
                break;
            }
        }
        draft.faces.push((name, word));
    }
    let self_merge = || Error::SelfMerge(label.to_string());
    let mut partner = vec![usize::MAX; draft.faces.len()];
    for (f, (_, word)) in draft.faces.iter().enumerate() {
        let Origin::Old { dart, .. } = word[0].1 else {
            unreachable!("only old darts survive a removal")
        };
        let g = face_of_dart[p.side_map(dart).0];
        if g == f {
            return Err(self_merge());
        }
        partner[f] = g;
    }
    for f in 0..partner.len() {
        if partner[partner[f]] != f {
            return Err(self_merge());
        }
        if f < partner[f] {
            let pair = (draft.faces[f].0.clone(), draft.faces[partner[f]].0.clone());
            draft.pairs.push(pair);
        }
    }
    let merged = draft.finish(|_| Error::SelfMerge(label.to_string()))?;
    Ok(merged.standard_form())
}

/// Edges of cycle different from 2 and their endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EssentialGraph {
    pub labels: Vec<String>,
    pub vertices: Vec<VertexId>,
    pub connected: bool,
}

pub fn essential_graph(p: &Polyhedron) -> EssentialGraph {
    let ball = p.ball();
    let mut labels: Vec<LabelId> = p
        .edge_classes()
        .into_iter()
        .filter(|c| c.cycle() != 2)
        .flat_map(|c| c.labels)
        .collect();
    labels.sort_by(|a, b| ball.label_name(*a).cmp(ball.label_name(*b)));
    let mut uf = UnionFind::new(ball.vertex_count());
    let mut vertices = Vec::new();
    for &l in &labels {
        let (t, h) = ball.label_endpoints(l);
        uf.union(t.0, h.0);
        vertices.extend([t, h]);
    }
    vertices.sort();
    vertices.dedup();
    let connected = match vertices.first() {
        Some(v) => {
            let root = uf.find(v.0);
            vertices.iter().all(|w| uf.find(w.0) == root)
        }
        None => false,
    };
    EssentialGraph {
        labels: labels.iter().map(|&l| ball.label_name(l).to_string()).collect(),
        vertices,
        connected,
    }
}

#[derive(Clone, Debug)]
pub enum Outcome {
    /// No cycle-2 class is left.
    Minimum(Polyhedron),
    /// Every class has cycle 2 and none can be removed.
    GammaEmpty(Polyhedron),
    /// Cycle-2 classes remain and none can be removed.
    Stuck {
        polyhedron: Polyhedron,
        unremovable: Vec<Vec<String>>,
    },
}

impl Outcome {
    pub fn polyhedron(&self) -> &Polyhedron {
        match self {
            Outcome::Minimum(p) | Outcome::GammaEmpty(p) => p,
            Outcome::Stuck { polyhedron, .. } => polyhedron,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Outcome::Minimum(_) => "Minimum",
            Outcome::GammaEmpty(_) => "GammaEmpty",
            Outcome::Stuck { .. } => "Stuck",
        }
    }
}

#[derive(Clone, Debug)]
pub struct MinimizeResult {
    pub outcome: Outcome,
    /// Label names of each removed class, in removal order.
    pub removal_trace: Vec<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RemovalOrder {
    /// Smallest class first, by sorted label names.
    Lexicographic,
    Reversed,
}

pub fn minimize(p: &Polyhedron) -> MinimizeResult {
    minimize_with(p, RemovalOrder::Lexicographic)
}

pub fn minimize_with(p: &Polyhedron, order: RemovalOrder) -> MinimizeResult {
    let mut current = p.standard_form();
    let mut removal_trace = Vec::new();
    loop {
        let classes = current.edge_classes();
        let names = |c: &EdgeClass| -> Vec<String> {
            c.labels
                .iter()
                .map(|&l| current.ball().label_name(l).to_string())
                .collect()
        };
        let mut candidates: Vec<Vec<String>> =
            classes.iter().filter(|c| c.cycle() == 2).map(names).collect();
        if candidates.is_empty() {
            return MinimizeResult {
                outcome: Outcome::Minimum(current),
                removal_trace,
            };
        }
        if order == RemovalOrder::Reversed {
            candidates.reverse();
        }
        let step = candidates
            .iter()
            .find_map(|c| remove_cycle2(&current, &c[0]).ok().map(|q| (c.clone(), q)));
        match step {
            Some((class, next)) => {
                removal_trace.push(class);
                current = next;
            }
            None => {
                let outcome = if candidates.len() == classes.len() {
                    Outcome::GammaEmpty(current)
                } else {
                    candidates.sort();
                    Outcome::Stuck {
                        polyhedron: current,
                        unremovable: candidates,
                    }
                };
                return MinimizeResult {
                    outcome,
                    removal_trace,
                };
            }
        }
    }
}

/// All edges of cycle 3, all vertex classes of order 4, all vertices of
/// degree 3.
pub fn is_distinguished(p: &Polyhedron) -> Result<bool> {
    if !p.is_standard() {
        return Err(Error::NotStandard);
    }
    let ball = p.ball();
    let cycles = p.edge_classes().iter().all(|c| c.cycle() == 3);
    let orders = p.vertex_classes().iter().all(|c| c.order() == 4);
    let degrees = ball.vertices().iter().all(|v| v.len() == 3);
    if cycles && degrees && !orders {
        return Err(Error::InternalConsistency(
            "all edges have cycle 3 and all vertices degree 3, yet some vertex order is not 4".into(),
        ));
    }
    Ok(cycles && orders && degrees)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Alike,
    NotAlike,
    Undecided,
}

#[derive(Clone, Debug)]
pub struct AlikeReport {
    pub verdict: Verdict,
    pub reason: String,
    pub left: MinimizeResult,
    pub right: MinimizeResult,
}

/// Quantities no move can change.
#[derive(Clone, Debug, PartialEq, Eq)]
struct MoveInvariants {
    chi: i64,
    homology: quotient::HomologyResult,
    /// Genera of the singular links.
    genera: Vec<usize>,
    components: (usize, usize, usize),
}

fn move_invariants(p: &Polyhedron) -> Result<MoveInvariants> {
    let s = quotient::summarize(p)?;
    let mut genera: Vec<usize> = s.links.iter().map(|l| l.genus).filter(|&g| g > 0).collect();
    genera.sort_unstable();
    Ok(MoveInvariants {
        chi: quotient::chi_quotient(p),
        homology: s.homology,
        genera,
        components: s.components.counts(),
    })
}

pub fn alike(p: &Polyhedron, q: &Polyhedron) -> Result<AlikeReport> {
    let left = minimize(p);
    let right = minimize(q);
    let (a, b) = (left.outcome.polyhedron(), right.outcome.polyhedron());
    let (ia, ib) = (move_invariants(a)?, move_invariants(b)?);
    let (verdict, reason) = if ia != ib {
        let what = if ia.chi != ib.chi {
            "Euler characteristics differ"
        } else if ia.homology != ib.homology {
            "homology differs"
        } else if ia.genera != ib.genera {
            "singular link genera differ"
        } else {
            "scar component counts differ"
        };
        (Verdict::NotAlike, what.to_string())
    } else if let (Outcome::Minimum(ma), Outcome::Minimum(mb)) = (&left.outcome, &right.outcome) {
        let cycles = |m: &Polyhedron| {
            let mut c: Vec<usize> = m.edge_classes().iter().map(EdgeClass::cycle).collect();
            c.sort_unstable();
            c
        };
        let counts = |m: &Polyhedron| quotient::scar_complex(m).map(|s| s.counts());
        if counts(ma)? != counts(mb)? || cycles(ma) != cycles(mb) {
            (Verdict::NotAlike, "minimum polyhedra have different scars".to_string())
        } else if ma.isomorphic(mb)? {
            (Verdict::Alike, "minimum polyhedra are isomorphic".to_string())
        } else {
            (Verdict::NotAlike, "minimum polyhedra are not isomorphic".to_string())
        }
    } else {
        (
            Verdict::Undecided,
            format!(
                "invariants agree but minimization ended {} and {}",
                left.outcome.kind(),
                right.outcome.kind()
            ),
        )
    };
    Ok(AlikeReport {
        verdict,
        reason,
        left,
        right,
    })
}
