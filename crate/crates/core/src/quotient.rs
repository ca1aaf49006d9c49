//! The scar complex, vertex links, homology and the scar predicates.
//!
//! The produced space is the ball with its boundary collapsed by the scheme:
//! one 3-cell, one 2-cell per pairing, one 1-cell per edge class and one
//! 0-cell per vertex class. The scar is its 2-skeleton.
//!
//! The link of a vertex class is assembled from the corner triangles at its
//! ball vertices: every ball vertex contributes a polygon (a disk) whose
//! boundary alternates between arcs (corners) and points (edge-ends). Paired
//! corners glue arcs, edge-ends sharing a quotient edge end glue points.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::moves::{self, Outcome};
use crate::scheme::{EdgeClass, FacePairing, Polyhedron, VertexClass};
use crate::smith;
use crate::surface_map::{Dart, Sign};
use crate::union_find::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum End {
    Tail,
    Head,
}

impl End {
    fn flip(self) -> End {
        match self {
            End::Tail => End::Head,
            End::Head => End::Tail,
        }
    }
}

/// One end of a quotient edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgeEnd {
    pub edge_class: usize,
    pub end: End,
}

/// Orbit data shared by every quotient computation.
struct Orbits {
    edges: Vec<EdgeClass>,
    vertices: Vec<VertexClass>,
    class_of_label: Vec<usize>,
    rho: Vec<Sign>,
    class_of_vertex: Vec<usize>,
}

impl Orbits {
    fn new(p: &Polyhedron) -> Self {
        let edges = p.edge_classes();
        let vertices = p.vertex_classes();
        let class_of_label = p.label_class_index(&edges);
        let class_of_vertex = p.vertex_class_index(&vertices);
        let mut rho = vec![Sign::Plus; p.ball().label_count()];
        for c in &edges {
            for (l, s) in c.labels.iter().zip(&c.orientations) {
                rho[l.0] = *s;
            }
        }
        Orbits {
            edges,
            vertices,
            class_of_label,
            rho,
            class_of_vertex,
        }
    }

    /// Signed edge class traversed by dart `d`.
    fn letter(&self, p: &Polyhedron, d: Dart) -> (usize, Sign) {
        let l = p.ball().label_of(d).0;
        (self.class_of_label[l], p.ball().sign_of(d).times(self.rho[l]))
    }

    /// Quotient edge end at the tail (or head) of dart `d`.
    fn dart_end(&self, p: &Polyhedron, d: Dart, at_head: bool) -> EdgeEnd {
        let (class, sign) = self.letter(p, d);
        let end = if sign == Sign::Plus { End::Tail } else { End::Head };
        EdgeEnd {
            edge_class: class,
            end: if at_head { end.flip() } else { end },
        }
    }

    /// Vertex classes at the tail and head of each edge class.
    fn edge_endpoints(&self, p: &Polyhedron) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .map(|c| {
                let (t, h) = p.ball().label_endpoints(c.labels[0]);
                (self.class_of_vertex[t.0], self.class_of_vertex[h.0])
            })
            .collect()
    }
}

/// The quotient CW structure of the boundary sphere.
#[derive(Clone, Debug)]
pub struct ScarComplex {
    pub vertex_cells: Vec<VertexClass>,
    pub edge_cells: Vec<EdgeClass>,
    pub face_cells: Vec<FacePairing>,
    /// `(tail, head)` vertex cells of every edge cell.
    pub edge_ends: Vec<(usize, usize)>,
    /// Boundary of each face cell over edge cells, read along `face_a`.
    pub face_boundaries: Vec<Vec<(usize, Sign)>>,
}

impl ScarComplex {
    /// `(V_q, E_q, F_q)`.
    pub fn counts(&self) -> (usize, usize, usize) {
        (
            self.vertex_cells.len(),
            self.edge_cells.len(),
            self.face_cells.len(),
        )
    }

    pub fn euler_characteristic(&self) -> i64 {
        let (v, e, f) = self.counts();
        v as i64 - e as i64 + f as i64
    }

    /// Rows are vertex cells, columns edge cells.
    pub fn boundary1(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0; self.edge_cells.len()]; self.vertex_cells.len()];
        for (e, &(t, h)) in self.edge_ends.iter().enumerate() {
            m[h][e] += 1;
            m[t][e] -= 1;
        }
        m
    }

    /// Rows are edge cells, columns face cells.
    pub fn boundary2(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0; self.face_cells.len()]; self.edge_cells.len()];
        for (f, word) in self.face_boundaries.iter().enumerate() {
            for &(e, s) in word {
                m[e][f] += s.value();
            }
        }
        m
    }
}

pub fn scar_complex(p: &Polyhedron) -> Result<ScarComplex> {
    scar_from(p, &Orbits::new(p))
}

fn scar_from(p: &Polyhedron, o: &Orbits) -> Result<ScarComplex> {
    let ball = p.ball();
    let mut face_boundaries = Vec::with_capacity(p.pairings().len());
    for pairing in p.pairings() {
        let mut word = Vec::new();
        for d in ball.face_darts(pairing.face_a) {
            let (class, sign) = o.letter(p, d);
            let (image_class, image_sign) = o.letter(p, p.side_map(d));
            if image_class != class || image_sign != sign.flip() {
                return Err(Error::InternalConsistency(format!(
                    "faces `{}` and `{}` do not bound their cell with opposite signs",
                    ball.face_name(pairing.face_a),
                    ball.face_name(pairing.face_b)
                )));
            }
            word.push((class, sign));
        }
        face_boundaries.push(word);
    }
    Ok(ScarComplex {
        vertex_cells: o.vertices.clone(),
        edge_cells: o.edges.clone(),
        face_cells: p.pairings().to_vec(),
        edge_ends: o.edge_endpoints(p),
        face_boundaries,
    })
}

/// Euler characteristic of the produced space: `V_q − E_q + F_q − 1`.
pub fn chi_quotient(p: &Polyhedron) -> i64 {
    let f = p.pairings().len() as i64;
    p.vertex_classes().len() as i64 - p.edge_classes().len() as i64 + f - 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LinkShape {
    Circle,
    /// Two points joined by `n` arcs once degree-2 points are smoothed.
    Banana(usize),
    CompleteFour,
    Other,
}

impl fmt::Display for LinkShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkShape::Circle => write!(f, "circle"),
            LinkShape::Banana(n) => write!(f, "banana({n})"),
            LinkShape::CompleteFour => write!(f, "K4"),
            LinkShape::Other => write!(f, "other"),
        }
    }
}

/// The scar inside a vertex link: points are quotient edge-ends, edges are
/// glued corner arcs.
#[derive(Clone, Debug, Serialize)]
pub struct LinkGraph {
    pub points: Vec<EdgeEnd>,
    pub arcs: Vec<(usize, usize)>,
    pub shape: LinkShape,
}

impl LinkGraph {
    pub fn degree(&self, point: usize) -> usize {
        self.arcs
            .iter()
            .map(|&(a, b)| usize::from(a == point) + usize::from(b == point))
            .sum()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LinkSurface {
    pub class: usize,
    pub points: usize,
    pub arcs: usize,
    pub disks: usize,
    pub chi: i64,
    pub genus: usize,
    pub graph: LinkGraph,
}

pub fn vertex_link(p: &Polyhedron, class: usize) -> Result<LinkSurface> {
    let o = Orbits::new(p);
    if class >= o.vertices.len() {
        return Err(Error::UnknownVertex(class));
    }
    link_from(p, &o, class)
}

/// Links of every vertex class, in class order.
pub fn vertex_links(p: &Polyhedron) -> Result<Vec<LinkSurface>> {
    let o = Orbits::new(p);
    links_from(p, &o)
}

fn links_from(p: &Polyhedron, o: &Orbits) -> Result<Vec<LinkSurface>> {
    (0..o.vertices.len()).map(|c| link_from(p, o, c)).collect()
}

fn link_from(p: &Polyhedron, o: &Orbits, class: usize) -> Result<LinkSurface> {
    let ball = p.ball();
    let vc = &o.vertices[class];
    let mut point_index: BTreeMap<EdgeEnd, usize> = BTreeMap::new();
    let mut corners = Vec::new();
    for &v in &vc.vertices {
        corners.extend_from_slice(ball.vertex_corners(v)?);
    }
    let endpoints = o.edge_endpoints(p);
    let inconsistent =
        |what: &str| Error::InternalConsistency(format!("link of vertex class {class}: {what}"));
    // Corner c sits between the incoming side phi_inv(c) and the outgoing side c.
    let arc_of = |c: Dart| {
        let out = o.dart_end(p, c, false);
        let inc = o.dart_end(p, ball.phi_inv(c), true);
        if out <= inc {
            (out, inc)
        } else {
            (inc, out)
        }
    };
    for &c in &corners {
        let (a, b) = arc_of(c);
        for e in [a, b] {
            let (t, h) = endpoints[e.edge_class];
            let at = if e.end == End::Tail { t } else { h };
            if at != class {
                return Err(inconsistent("edge-end at a foreign vertex"));
            }
        }
    }
    let mut ends: Vec<EdgeEnd> = corners.iter().flat_map(|&c| {
        let (a, b) = arc_of(c);
        [a, b]
    }).collect();
    ends.sort();
    ends.dedup();
    for (i, e) in ends.iter().enumerate() {
        point_index.insert(*e, i);
    }

    let mut arcs = Vec::new();
    for &c in &corners {
        let image = p.corner_image(c);
        if image == c {
            return Err(inconsistent("corner glued to itself"));
        }
        if arc_of(image) != arc_of(c) {
            return Err(inconsistent("glued arcs join different points"));
        }
        if c < image {
            let (a, b) = arc_of(c);
            arcs.push((point_index[&a], point_index[&b]));
        }
    }
    if 2 * arcs.len() != corners.len() {
        return Err(inconsistent("corners do not pair up"));
    }

    let points = ends.len();
    let disks = vc.vertices.len();
    let chi = points as i64 - arcs.len() as i64 + disks as i64;
    if chi > 2 || chi % 2 != 0 {
        return Err(inconsistent("link is not a closed orientable surface"));
    }
    let shape = classify_graph(points, &arcs);
    Ok(LinkSurface {
        class,
        points,
        arcs: arcs.len(),
        disks,
        chi,
        genus: ((2 - chi) / 2) as usize,
        graph: LinkGraph {
            points: ends,
            arcs,
            shape,
        },
    })
}

/// Isomorphism type of a connected multigraph, up to subdividing edges.
fn classify_graph(n: usize, arcs: &[(usize, usize)]) -> LinkShape {
    let degree = |edges: &[(usize, usize)], v: usize| {
        edges
            .iter()
            .map(|&(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum::<usize>()
    };
    let mut edges = arcs.to_vec();
    if (0..n).all(|v| degree(&edges, v) == 2) {
        return LinkShape::Circle;
    }
    // Smooth degree-2 points away.
    while let Some(v) = (0..n).find(|&v| {
        degree(&edges, v) == 2 && !edges.iter().any(|&(a, b)| a == v && b == v)
    }) {
        let mut incident: Vec<usize> = (0..edges.len())
            .filter(|&i| edges[i].0 == v || edges[i].1 == v)
            .collect();
        let second = incident.pop().expect("degree 2");
        let first = incident.pop().expect("degree 2");
        let other = |(a, b): (usize, usize)| if a == v { b } else { a };
        let (x, y) = (other(edges[first]), other(edges[second]));
        edges[first] = (x, y);
        edges.remove(second);
    }
    let alive: Vec<usize> = (0..n).filter(|&v| degree(&edges, v) > 0).collect();
    let loops = edges.iter().any(|&(a, b)| a == b);
    if alive.len() == 2 && !loops {
        return LinkShape::Banana(edges.len());
    }
    if alive.len() == 4 && edges.len() == 6 && !loops {
        let mut pairs: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        pairs.sort();
        pairs.dedup();
        if pairs.len() == 6 && alive.iter().all(|&v| degree(&edges, v) == 3) {
            return LinkShape::CompleteFour;
        }
    }
    LinkShape::Other
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Singularity {
    pub vertex_class: usize,
    pub genus: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ManifoldReport {
    pub manifold: bool,
    pub singularities: Vec<Singularity>,
}

/// Manifold test through links, cross-checked against `chi_quotient = 0`.
pub fn is_manifold(p: &Polyhedron) -> Result<ManifoldReport> {
    let o = Orbits::new(p);
    manifold_from(p, &o, &links_from(p, &o)?)
}

fn manifold_from(p: &Polyhedron, o: &Orbits, links: &[LinkSurface]) -> Result<ManifoldReport> {
    let singularities: Vec<Singularity> = links
        .iter()
        .filter(|l| l.genus > 0)
        .map(|l| Singularity {
            vertex_class: l.class,
            genus: l.genus,
        })
        .collect();
    let manifold = singularities.is_empty();
    let chi = o.vertices.len() as i64 - o.edges.len() as i64 + p.pairings().len() as i64 - 1;
    if manifold != (chi == 0) {
        return Err(Error::InternalConsistency(format!(
            "links say manifold={manifold} but chi_quotient is {chi}"
        )));
    }
    Ok(ManifoldReport {
        manifold,
        singularities,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyResult {
    pub betti: [usize; 4],
    /// Invariant factors of H₁ greater than one.
    pub torsion: Vec<BigInt>,
    pub h2_torsion: Vec<BigInt>,
}

impl HomologyResult {
    /// Torsion of H₁ as machine integers, when they fit.
    pub fn torsion_u64(&self) -> Option<Vec<u64>> {
        self.torsion.iter().map(|t| u64::try_from(t).ok()).collect()
    }
}

impl fmt::Display for HomologyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.betti.iter().enumerate() {
            let torsion: &[BigInt] = match i {
                1 => &self.torsion,
                2 => &self.h2_torsion,
                _ => &[],
            };
            let mut parts: Vec<String> = Vec::new();
            match b {
                0 => {}
                1 => parts.push("Z".into()),
                b => parts.push(format!("Z^{b}")),
            }
            parts.extend(torsion.iter().map(|t| format!("Z/{t}")));
            if parts.is_empty() {
                parts.push("0".into());
            }
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "H{i} = {}", parts.join(" + "))?;
        }
        Ok(())
    }
}

fn big_json<S: Serializer>(values: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(values.len()))?;
    for v in values {
        match u64::try_from(v) {
            Ok(x) => seq.serialize_element(&x)?,
            Err(_) => seq.serialize_element(&v.to_string())?,
        }
    }
    seq.end()
}

impl Serialize for HomologyResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        struct Big<'a>(&'a [BigInt]);
        impl Serialize for Big<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                big_json(self.0, s)
            }
        }
        let mut st = s.serialize_struct("HomologyResult", 3)?;
        st.serialize_field("betti", &self.betti)?;
        st.serialize_field("torsion", &Big(&self.torsion))?;
        st.serialize_field("h2_torsion", &Big(&self.h2_torsion))?;
        st.end()
    }
}

pub fn homology(p: &Polyhedron) -> Result<HomologyResult> {
    let o = Orbits::new(p);
    homology_from(&scar_from(p, &o)?)
}

fn homology_from(scar: &ScarComplex) -> Result<HomologyResult> {
    let (v, e, f) = scar.counts();
    let d1 = scar.boundary1();
    let d2 = scar.boundary2();
    if !composes_to_zero(&d1, &d2, e) {
        return Err(Error::InternalConsistency("boundary of a boundary is not zero".into()));
    }
    // Each face cell meets the 3-cell twice with opposite signs.
    let d3 = vec![vec![0i64]; f];
    let s1 = smith::invariant_factors(&d1);
    let s2 = smith::invariant_factors(&d2);
    let s3 = smith::invariant_factors(&d3);
    let (r1, r2, r3) = (s1.len(), s2.len(), s3.len());
    let beyond_one = |s: Vec<BigInt>| s.into_iter().filter(|x| !x.is_one()).collect::<Vec<_>>();
    Ok(HomologyResult {
        betti: [v - r1, e - r1 - r2, f - r2 - r3, 1 - r3],
        torsion: beyond_one(s2),
        h2_torsion: beyond_one(s3),
    })
}

fn composes_to_zero(d1: &[Vec<i64>], d2: &[Vec<i64>], inner: usize) -> bool {
    let cols = d2.first().map_or(0, Vec::len);
    d1.iter().all(|row| {
        (0..cols).all(|j| (0..inner).map(|k| row[k] * d2[k][j]).sum::<i64>() == 0)
    })
}

/// Shape of a regular neighborhood of a point of a scar cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LocalModel {
    Disk,
    HalfDisks(usize),
    TripleHalfDisk,
    SpecialVertex,
    Other,
}

impl fmt::Display for LocalModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalModel::Disk => write!(f, "disk"),
            LocalModel::HalfDisks(n) => write!(f, "{n} half-disks"),
            LocalModel::TripleHalfDisk => write!(f, "triple half-disk"),
            LocalModel::SpecialVertex => write!(f, "special vertex"),
            LocalModel::Other => write!(f, "other"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Cell {
    Vertex(usize),
    Edge(usize),
    Face(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalModels {
    pub vertices: Vec<LocalModel>,
    pub edges: Vec<LocalModel>,
    pub faces: Vec<LocalModel>,
}

impl LocalModels {
    pub fn get(&self, cell: Cell) -> Option<LocalModel> {
        match cell {
            Cell::Vertex(i) => self.vertices.get(i).copied(),
            Cell::Edge(i) => self.edges.get(i).copied(),
            Cell::Face(i) => self.faces.get(i).copied(),
        }
    }

    fn all(&self) -> impl Iterator<Item = LocalModel> + '_ {
        self.vertices
            .iter()
            .chain(&self.edges)
            .chain(&self.faces)
            .copied()
    }
}

fn vertex_model(link: &LinkSurface) -> LocalModel {
    if link.genus > 0 {
        return LocalModel::Other;
    }
    match link.graph.shape {
        LinkShape::Circle => LocalModel::Disk,
        LinkShape::Banana(3) => LocalModel::TripleHalfDisk,
        LinkShape::Banana(n) => LocalModel::HalfDisks(n),
        LinkShape::CompleteFour => LocalModel::SpecialVertex,
        LinkShape::Other => LocalModel::Other,
    }
}

fn models_from(o: &Orbits, links: &[LinkSurface], faces: usize) -> LocalModels {
    LocalModels {
        vertices: links.iter().map(vertex_model).collect(),
        edges: o
            .edges
            .iter()
            .map(|c| match c.cycle() {
                2 => LocalModel::Disk,
                n => LocalModel::HalfDisks(n),
            })
            .collect(),
        faces: vec![LocalModel::Disk; faces],
    }
}

pub fn local_models(p: &Polyhedron) -> Result<LocalModels> {
    let o = Orbits::new(p);
    Ok(models_from(&o, &links_from(p, &o)?, p.pairings().len()))
}

pub fn local_model(p: &Polyhedron, cell: Cell) -> Result<LocalModel> {
    local_models(p)?
        .get(cell)
        .ok_or_else(|| Error::Parameter(format!("no scar cell {cell:?}")))
}

/// A union of scar cells.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Component {
    pub faces: Vec<usize>,
    pub edges: Vec<usize>,
    pub vertices: Vec<usize>,
    /// Whether the component is an open cell of its dimension.
    pub open_cell: bool,
}

impl Component {
    /// Cell count `#F − #E + #V`.
    pub fn euler_characteristic(&self) -> i64 {
        self.faces.len() as i64 - self.edges.len() as i64 + self.vertices.len() as i64
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Components {
    pub two: Vec<Component>,
    pub one: Vec<Component>,
    pub zero: Vec<Component>,
}

impl Components {
    /// Number of 2-, 1- and 0-components.
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.two.len(), self.one.len(), self.zero.len())
    }

    pub fn all_open_cells(&self) -> bool {
        self.two
            .iter()
            .chain(&self.one)
            .chain(&self.zero)
            .all(|c| c.open_cell)
    }
}

pub fn components(p: &Polyhedron) -> Result<Components> {
    let o = Orbits::new(p);
    let scar = scar_from(p, &o)?;
    let links = links_from(p, &o)?;
    Ok(components_from(&scar, &models_from(&o, &links, scar.face_cells.len())))
}

fn components_from(scar: &ScarComplex, models: &LocalModels) -> Components {
    let (nv, ne, nf) = scar.counts();
    // Cell numbering: faces, then edges, then vertices.
    let edge = |e: usize| nf + e;
    let vertex = |v: usize| nf + ne + v;
    let disk = |m: LocalModel| m == LocalModel::Disk;

    let mut uf = UnionFind::new(nf + ne + nv);
    for (f, word) in scar.face_boundaries.iter().enumerate() {
        for &(e, _) in word {
            if disk(models.edges[e]) {
                uf.union(f, edge(e));
            }
        }
    }
    for (e, &(t, h)) in scar.edge_ends.iter().enumerate() {
        for v in [t, h] {
            if disk(models.edges[e]) && disk(models.vertices[v]) {
                uf.union(edge(e), vertex(v));
            }
        }
    }
    let banana = |m: LocalModel| matches!(m, LocalModel::HalfDisks(_) | LocalModel::TripleHalfDisk);
    for (e, &(t, h)) in scar.edge_ends.iter().enumerate() {
        if disk(models.edges[e]) {
            continue;
        }
        for v in [t, h] {
            if banana(models.vertices[v]) {
                uf.union(edge(e), vertex(v));
            }
        }
    }

    let mut result = Components::default();
    for group in uf.groups() {
        let mut c = Component::default();
        for x in group {
            if x < nf {
                c.faces.push(x);
            } else if x < nf + ne {
                c.edges.push(x - nf);
            } else {
                c.vertices.push(x - nf - ne);
            }
        }
        if !c.faces.is_empty() {
            let frontier = has_frontier(scar, &c);
            c.open_cell = frontier && c.euler_characteristic() == 1;
            result.two.push(c);
        } else if !c.edges.is_empty() {
            c.open_cell = c.euler_characteristic() == -1;
            result.one.push(c);
        } else {
            c.open_cell = true;
            result.zero.push(c);
        }
    }
    result
}

fn has_frontier(scar: &ScarComplex, c: &Component) -> bool {
    let mut edges: Vec<usize> = c
        .faces
        .iter()
        .flat_map(|&f| scar.face_boundaries[f].iter().map(|&(e, _)| e))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    edges.iter().any(|e| !c.edges.contains(e))
        || edges.iter().any(|&e| {
            let (t, h) = scar.edge_ends[e];
            !c.vertices.contains(&t) || !c.vertices.contains(&h)
        })
}

/// Every cell's model is a disk, three half-disks, a triple half-disk or a
/// special vertex. Raises an internal error if the polyhedron satisfies the
/// combinatorial sufficient condition (cycles 2 or 3, orders at most 4,
/// exactly three cycle-3 edge-ends at every vertex) but the scar is not simple.
pub fn is_simple(p: &Polyhedron) -> Result<bool> {
    let o = Orbits::new(p);
    let links = links_from(p, &o)?;
    simple_from(p, &o, &models_from(&o, &links, p.pairings().len()))
}

fn simple_from(p: &Polyhedron, o: &Orbits, models: &LocalModels) -> Result<bool> {
    let simple = models.all().all(|m| {
        matches!(
            m,
            LocalModel::Disk
                | LocalModel::HalfDisks(3)
                | LocalModel::TripleHalfDisk
                | LocalModel::SpecialVertex
        )
    });
    if !simple && satisfies_simple_criterion(p, o) {
        return Err(Error::InternalConsistency(
            "cycles, orders and cycle-3 valences allow only simple neighborhoods, \
             yet some scar cell is not simple"
                .into(),
        ));
    }
    Ok(simple)
}

fn satisfies_simple_criterion(p: &Polyhedron, o: &Orbits) -> bool {
    let ball = p.ball();
    let cycles_ok = o.edges.iter().all(|c| matches!(c.cycle(), 2 | 3));
    let orders_ok = o.vertices.iter().all(|c| c.order() <= 4);
    let valence_ok = ball.vertices().iter().all(|corners| {
        corners
            .iter()
            .filter(|&&c| o.edges[o.class_of_label[ball.label_of(c).0]].cycle() == 3)
            .count()
            == 3
    });
    cycles_ok && orders_ok && valence_ok
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellularReport {
    pub cellular: bool,
    /// Minimization reached a polyhedron without cycle-2 edges.
    pub minimum_route: bool,
    /// Every i-component is an open i-cell.
    pub component_route: bool,
    pub diagnostic: Option<String>,
}

/// Cellularity decided by minimization and by components; both must hold.
pub fn is_cellular(p: &Polyhedron) -> Result<CellularReport> {
    let result = moves::minimize(p);
    let comps = components(p)?;
    let component_route = comps.all_open_cells();
    let (minimum_route, mut diagnostic) = match &result.outcome {
        Outcome::Minimum(m) => {
            let mc = components(m)?;
            if mc.two.iter().any(|c| c.faces.len() != 1 || !c.edges.is_empty()) {
                return Err(Error::InternalConsistency(
                    "a polyhedron without cycle-2 edges has a 2-component spanning several cells".into(),
                ));
            }
            (true, None)
        }
        Outcome::GammaEmpty(_) => (false, Some("every edge has cycle 2; no minimum exists".to_string())),
        Outcome::Stuck { unremovable, .. } => (
            false,
            Some(format!(
                "minimization is stuck on cycle-2 classes {}",
                unremovable
                    .iter()
                    .map(|c| format!("{{{}}}", c.join(", ")))
                    .collect::<Vec<_>>()
                    .join(" ")
            )),
        ),
    };
    if minimum_route && !component_route {
        let bad: Vec<String> = comps
            .two
            .iter()
            .chain(&comps.one)
            .filter(|c| !c.open_cell)
            .map(|c| {
                let dim = if c.faces.is_empty() { 1 } else { 2 };
                format!("{dim}-component with Euler characteristic {}", c.euler_characteristic())
            })
            .collect();
        diagnostic = Some(format!(
            "a minimum exists but not every component is an open cell: {}",
            bad.join("; ")
        ));
    }
    Ok(CellularReport {
        cellular: minimum_route && component_route,
        minimum_route,
        component_route,
        diagnostic,
    })
}

/// Simple and cellular. Whenever minimization reaches a minimum this must
/// agree with the minimum being distinguished.
pub fn is_special(p: &Polyhedron) -> Result<bool> {
    let special = is_simple(p)? && is_cellular(p)?.cellular;
    if let Outcome::Minimum(m) = moves::minimize(p).outcome {
        if moves::is_distinguished(&m)? != special {
            return Err(Error::InternalConsistency(format!(
                "special={special} disagrees with the minimum being distinguished"
            )));
        }
    }
    Ok(special)
}

/// Checks the global invariants every polyhedron must satisfy: involutive
/// side and corner maps, orbit partitions, `∂₁∘∂₂ = 0`, `χ(scar) = χ_q + 1`,
/// `χ_q = Σ genus` and agreement of both manifold tests.
pub fn audit(p: &Polyhedron) -> Result<()> {
    let ball = p.ball();
    let fail = |what: String| Err(Error::InternalConsistency(what));
    for d in ball.darts() {
        if p.side_map(p.side_map(d)) != d {
            return fail(format!("side map is not an involution at dart {}", d.0));
        }
        if p.corner_image(p.corner_image(d)) != d {
            return fail(format!("corner map is not an involution at corner {}", d.0));
        }
        // Tail of a side goes to the head of its image.
        if p.corner_image(d) != ball.phi(p.side_map(d)) {
            return fail(format!("corner and side maps disagree at dart {}", d.0));
        }
    }
    let o = Orbits::new(p);
    let cycles: usize = o.edges.iter().map(EdgeClass::cycle).sum();
    let orders: usize = o.vertices.iter().map(VertexClass::order).sum();
    if cycles != ball.label_count() || orders != ball.vertex_count() {
        return fail("orbits do not partition edges and vertices".into());
    }
    let scar = scar_from(p, &o)?;
    if !composes_to_zero(&scar.boundary1(), &scar.boundary2(), scar.edge_cells.len()) {
        return fail("boundary of a boundary is not zero".into());
    }
    let chi_q = chi_quotient(p);
    if scar.euler_characteristic() != chi_q + 1 {
        return fail("scar Euler characteristic is not chi_quotient + 1".into());
    }
    let links = links_from(p, &o)?;
    let genera: i64 = links.iter().map(|l| l.genus as i64).sum();
    if genera != chi_q {
        return fail(format!("chi_quotient {chi_q} differs from the sum of link genera {genera}"));
    }
    manifold_from(p, &o, &links)?;
    Ok(())
}

/// Everything the quotient module knows about one polyhedron, computed once.
#[derive(Clone, Debug)]
pub struct QuotientSummary {
    pub scar: ScarComplex,
    pub links: Vec<LinkSurface>,
    pub manifold: ManifoldReport,
    pub homology: HomologyResult,
    pub models: LocalModels,
    pub components: Components,
    pub simple: bool,
}

pub fn summarize(p: &Polyhedron) -> Result<QuotientSummary> {
    let o = Orbits::new(p);
    let scar = scar_from(p, &o)?;
    let links = links_from(p, &o)?;
    let manifold = manifold_from(p, &o, &links)?;
    let homology = homology_from(&scar)?;
    let models = models_from(&o, &links, scar.face_cells.len());
    let components = components_from(&scar, &models);
    let simple = simple_from(p, &o, &models)?;
    Ok(QuotientSummary {
        scar,
        links,
        manifold,
        homology,
        models,
        components,
        simple,
    })
}
