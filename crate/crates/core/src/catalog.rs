//! Classical polyhedra with identified faces, and exhaustive scheme search.
//!
//! Convex balls are read off coordinates: a face is the set of vertices
//! maximizing the dot product with its outward normal, listed
//! counterclockwise as seen from outside. Opposite faces are glued by
//! `g(x) = c_B + R(θ)(x − c_A)`, a right-handed rotation by `θ` about the
//! outward normal of the source face, and the offset is read back from `g`.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moves::{self, AttachPoint};
use crate::pif;
use crate::quotient::{self, HomologyResult};
use crate::scheme::{FacePairing, Polyhedron};
use crate::surface_map::{CellDividedBall, FaceId, FaceWord, SignedLabel};

const TOLERANCE: f64 = 1e-6;
const PHI: f64 = 1.618_033_988_749_895;

type Vec3 = [f64; 3];

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn unit(a: Vec3) -> Vec3 {
    scale(a, 1.0 / dot(a, a).sqrt())
}

/// Rodrigues rotation of `x` by `theta` about the unit axis `n`.
fn rotate(x: Vec3, n: Vec3, theta: f64) -> Vec3 {
    let (s, c) = theta.sin_cos();
    add(
        add(scale(x, c), scale(cross(n, x), s)),
        scale(n, dot(n, x) * (1.0 - c)),
    )
}

fn close(a: Vec3, b: Vec3) -> bool {
    let d = sub(a, b);
    dot(d, d).sqrt() < TOLERANCE
}

struct Convex {
    points: Vec<Vec3>,
    normals: Vec<Vec3>,
    names: Vec<String>,
    /// Vertex indices of each face, counterclockwise from outside.
    cycles: Vec<Vec<usize>>,
}

impl Convex {
    fn new(points: Vec<Vec3>, normals: Vec<Vec3>, names: Vec<String>) -> Self {
        let cycles = normals
            .iter()
            .map(|&n| {
                let n = unit(n);
                let top = points.iter().map(|&x| dot(x, n)).fold(f64::MIN, f64::max);
                let members: Vec<usize> =
                    (0..points.len()).filter(|&i| (dot(points[i], n) - top).abs() < TOLERANCE).collect();
                let centre = scale(
                    members.iter().fold([0.0; 3], |acc, &i| add(acc, points[i])),
                    1.0 / members.len() as f64,
                );
                let u = unit(sub(points[members[0]], centre));
                let v = cross(n, u);
                let angle = |i: usize| {
                    let r = sub(points[i], centre);
                    dot(r, v).atan2(dot(r, u))
                };
                let mut sorted = members;
                sorted.sort_by(|&a, &b| angle(a).total_cmp(&angle(b)));
                sorted
            })
            .collect();
        Convex {
            points,
            normals,
            names,
            cycles,
        }
    }

    fn label(i: usize, j: usize) -> SignedLabel {
        let name = format!("e{}_{}", i.min(j), i.max(j));
        if i < j {
            SignedLabel::plus(name)
        } else {
            SignedLabel::minus(name)
        }
    }

    fn ball(&self) -> CellDividedBall {
        let faces = self
            .cycles
            .iter()
            .zip(&self.names)
            .map(|(cycle, name)| {
                let m = cycle.len();
                let word = (0..m).map(|s| Self::label(cycle[s], cycle[(s + 1) % m])).collect();
                FaceWord::new(name.clone(), word)
            })
            .collect();
        CellDividedBall::new(faces).expect("convex polyhedra tile the sphere")
    }

    fn centre(&self, f: usize) -> Vec3 {
        let c = &self.cycles[f];
        scale(
            c.iter().fold([0.0; 3], |acc, &i| add(acc, self.points[i])),
            1.0 / c.len() as f64,
        )
    }

    fn vertex_at(&self, x: Vec3) -> Option<usize> {
        self.points.iter().position(|&y| close(x, y))
    }

    /// Offset of the pairing that carries face `a` onto face `b` by `g`.
    fn offset(&self, a: usize, b: usize, theta: f64) -> usize {
        let n = unit(self.normals[a]);
        let (ca, cb) = (self.centre(a), self.centre(b));
        let g = |i: usize| {
            let y = add(cb, rotate(sub(self.points[i], ca), n, theta));
            self.vertex_at(y).expect("the gluing map sends vertices to vertices")
        };
        let (ra, rb) = (&self.cycles[a], &self.cycles[b]);
        let m = ra.len();
        // Side s of `b` runs from rb[s] to rb[s + 1].
        let side_of_b = |from: usize, to: usize| {
            (0..m)
                .find(|&s| rb[s] == from && rb[(s + 1) % m] == to)
                .expect("the image of a side is a side")
        };
        let k = side_of_b(g(ra[1 % m]), g(ra[0]));
        for j in 0..m {
            let image = side_of_b(g(ra[(j + 1) % m]), g(ra[j]));
            assert_eq!(image, (k + m - j) % m, "gluing map is not a pairing of sides");
        }
        k
    }

    /// Pairs face `i` with the face whose normal is opposite.
    fn opposite_pairing(&self, theta: f64) -> Vec<FacePairing> {
        let mut pairs = Vec::new();
        for a in 0..self.normals.len() {
            let b = (0..self.normals.len())
                .find(|&b| close(unit(self.normals[b]), scale(unit(self.normals[a]), -1.0)))
                .expect("centrally symmetric");
            if a < b {
                pairs.push(FacePairing {
                    face_a: FaceId(a),
                    face_b: FaceId(b),
                    offset: self.offset(a, b, theta),
                });
            }
        }
        pairs
    }
}

fn cube_solid() -> Convex {
    let points = (0..8)
        .map(|i| {
            let s = |bit: usize| if i >> bit & 1 == 1 { 1.0 } else { -1.0 };
            [s(0), s(1), s(2)]
        })
        .collect();
    let normals = vec![
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ];
    let names = ["xp", "xm", "yp", "ym", "zp", "zm"].map(String::from).to_vec();
    Convex::new(points, normals, names)
}

fn octahedron_solid() -> Convex {
    let mut points = Vec::new();
    for axis in 0..3 {
        for s in [1.0, -1.0] {
            let mut x = [0.0; 3];
            x[axis] = s;
            points.push(x);
        }
    }
    let mut normals = Vec::new();
    let mut names = Vec::new();
    for i in 0..8 {
        let s = |bit: usize| if i >> bit & 1 == 0 { 1.0 } else { -1.0 };
        normals.push([s(0), s(1), s(2)]);
        let c = |bit: usize| if i >> bit & 1 == 0 { 'p' } else { 'm' };
        names.push(format!("{}{}{}", c(0), c(1), c(2)));
    }
    Convex::new(points, normals, names)
}

/// Cyclic permutations of `(0, ±a, ±b)`.
fn cyclic_family(a: f64, b: f64) -> Vec<Vec3> {
    let mut out = Vec::new();
    for shift in 0..3 {
        for sa in [1.0, -1.0] {
            for sb in [1.0, -1.0] {
                let base = [0.0, sa * a, sb * b];
                out.push([base[(3 - shift) % 3], base[(4 - shift) % 3], base[(5 - shift) % 3]]);
            }
        }
    }
    out
}

fn dodecahedron_solid() -> Convex {
    let mut points: Vec<Vec3> = (0..8)
        .map(|i| {
            let s = |bit: usize| if i >> bit & 1 == 1 { 1.0 } else { -1.0 };
            [s(0), s(1), s(2)]
        })
        .collect();
    points.extend(cyclic_family(1.0 / PHI, PHI));
    let normals = cyclic_family(PHI, 1.0);
    let names = (0..normals.len()).map(|i| format!("d{i}")).collect();
    Convex::new(points, normals, names)
}

pub fn cube_ball() -> CellDividedBall {
    cube_solid().ball()
}

pub fn octahedron_ball() -> CellDividedBall {
    octahedron_solid().ball()
}

pub fn dodecahedron_ball() -> CellDividedBall {
    dodecahedron_solid().ball()
}

/// Two `p`-gons `N` and `S` on an equator of `p` edges.
pub fn lens_ball(p: usize) -> Result<CellDividedBall> {
    if p == 0 {
        return Err(Error::Parameter("a lens ball needs p ≥ 1".into()));
    }
    let north = (0..p).map(|j| SignedLabel::plus(format!("e{j}"))).collect();
    let south = (0..p).rev().map(|j| SignedLabel::minus(format!("e{j}"))).collect();
    CellDividedBall::new(vec![FaceWord::new("N", north), FaceWord::new("S", south)])
}

/// The lens space L(p, q): edge `e_j` is glued to `e_{j+q}`.
pub fn lens(p: usize, q: usize) -> Result<Polyhedron> {
    if p == 0 || q >= p {
        return Err(Error::Parameter(format!(
            "lens({p}, {q}) needs p ≥ 1 and 0 ≤ q < p"
        )));
    }
    let offset = (2 * p - 1 - q) % p;
    Polyhedron::new(format!("lens-{p}-{q}"), lens_ball(p)?, &[("N", "S", offset)])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Twist {
    None,
    Quarter,
    Half,
}

/// The cube with opposite faces glued after a rotation of 0, π/2 or π.
pub fn cube_twist(kind: Twist) -> Polyhedron {
    let (theta, name) = match kind {
        Twist::None => (0.0, "cube-none"),
        Twist::Quarter => (std::f64::consts::FRAC_PI_2, "cube-quarter"),
        Twist::Half => (std::f64::consts::PI, "cube-half"),
    };
    let solid = cube_solid();
    Polyhedron::from_pairings(name, solid.ball(), solid.opposite_pairing(theta))
        .expect("opposite faces of a cube pair up")
}

/// The dodecahedron with opposite faces glued after a π/5 rotation.
pub fn dodecahedral_space() -> Polyhedron {
    let solid = dodecahedron_solid();
    let pairs = solid.opposite_pairing(std::f64::consts::PI / 5.0);
    Polyhedron::from_pairings("dodecahedral", solid.ball(), pairs)
        .expect("opposite faces of a dodecahedron pair up")
}

/// A loop of `n` face pairs glued consecutively along cycle-2 edges.
///
/// The ball is a capped cylinder cut by three parallel circles `C1`, `C2`,
/// `C3` of `n` edges each. Quadrilateral `X_i` lies between `C1` and `C2`,
/// `Y_j` between `C2` and `C3`; rungs `a_i` and `b_j` cross the two bands.
/// `X_i` is glued to `Y_{−i}` and the caps `T`, `U` to each other. The rung
/// classes `{a_i, b_{1−i}}` have cycle 2 and chain the glued quadrilaterals
/// into a loop.
pub fn annulus_loop(n: usize) -> Result<Polyhedron> {
    if n == 0 {
        return Err(Error::Parameter("annulus_loop needs n ≥ 1".into()));
    }
    let l = |s: &str, i: usize| SignedLabel::plus(format!("{s}_{}", i % n));
    let r = |s: &str, i: usize| SignedLabel::minus(format!("{s}_{}", i % n));
    let mut faces = vec![
        FaceWord::new("T", (0..n).map(|i| l("c1", i)).collect()),
        FaceWord::new("U", (0..n).rev().map(|i| r("c3", i)).collect()),
    ];
    let mut pairs = vec![("T".to_string(), "U".to_string(), n - 1)];
    for i in 0..n {
        faces.push(FaceWord::new(
            format!("X{i}"),
            vec![l("c2", i), r("a", i + 1), r("c1", i), l("a", i)],
        ));
        faces.push(FaceWord::new(
            format!("Y{i}"),
            vec![l("c3", i), r("b", i + 1), r("c2", i), l("b", i)],
        ));
        pairs.push((format!("X{i}"), format!("Y{}", (n - i) % n), 0));
    }
    Polyhedron::from_words(format!("annulus-{n}"), faces, &pairs)
}

const OCTAHEDRON_SINGULAR: &str = include_str!("../fixtures/octahedron-singular.pif");

/// A non-manifold gluing of the octahedron found by [`search_schemes`].
pub fn octahedron_singular() -> Polyhedron {
    pif::parse(OCTAHEDRON_SINGULAR).expect("bundled fixture parses")
}

/// Catalog entry by command-line name: `lens-P-Q`, `cube-none`,
/// `cube-quarter`, `cube-half`, `dodecahedral`, `annulus-N`,
/// `octahedron-singular`.
pub fn by_name(name: &str) -> Result<Polyhedron> {
    let number = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::Parameter(format!("`{s}` is not a number in `{name}`")))
    };
    match name {
        "cube-none" => Ok(cube_twist(Twist::None)),
        "cube-quarter" => Ok(cube_twist(Twist::Quarter)),
        "cube-half" => Ok(cube_twist(Twist::Half)),
        "dodecahedral" => Ok(dodecahedral_space()),
        "octahedron-singular" => Ok(octahedron_singular()),
        _ => {
            if let Some(rest) = name.strip_prefix("lens-") {
                let (p, q) = rest
                    .split_once('-')
                    .ok_or_else(|| Error::Parameter(format!("expected lens-P-Q, got `{name}`")))?;
                lens(number(p)?, number(q)?)
            } else if let Some(n) = name.strip_prefix("annulus-") {
                annulus_loop(number(n)?)
            } else {
                Err(Error::Parameter(format!("unknown catalog entry `{name}`")))
            }
        }
    }
}

/// Bare ball by name: `cube`, `octahedron`, `dodecahedron` or `lens-P`.
pub fn ball_by_name(name: &str) -> Result<CellDividedBall> {
    match name {
        "cube" => Ok(cube_ball()),
        "octahedron" => Ok(octahedron_ball()),
        "dodecahedron" => Ok(dodecahedron_ball()),
        _ => match name.strip_prefix("lens-").map(str::parse::<usize>) {
            Some(Ok(p)) => lens_ball(p),
            _ => Err(Error::Parameter(format!("unknown ball `{name}`"))),
        },
    }
}

/// Every catalog entry used by the test suites.
pub fn entries() -> Vec<Polyhedron> {
    let mut out = vec![
        cube_twist(Twist::None),
        cube_twist(Twist::Quarter),
        cube_twist(Twist::Half),
        dodecahedral_space(),
        octahedron_singular(),
        annulus_loop(3).expect("valid"),
    ];
    for (p, q) in [(1, 0), (2, 1), (3, 1), (5, 2), (7, 3)] {
        out.push(lens(p, q).expect("valid"));
    }
    out
}

/// Bound on the number of schemes evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_schemes: usize,
    pub seed: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_schemes: 100_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchRecord {
    pub index: u64,
    pub pairs: Vec<(String, String, usize)>,
    pub manifold: bool,
    pub distinguished: bool,
    pub chi_quotient: i64,
    pub h1: HomologyResult,
    pub singularities: Vec<quotient::Singularity>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchSummary {
    pub manifolds: usize,
    pub non_manifolds: usize,
    pub distinguished: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub ball: String,
    pub total: u64,
    pub evaluated: usize,
    pub limit_exceeded: bool,
    pub records: Vec<SearchRecord>,
    pub summary: SearchSummary,
}

fn matchings(lens: &[usize]) -> Vec<Vec<(usize, usize)>> {
    fn go(lens: &[usize], used: &mut [bool], current: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let Some(a) = used.iter().position(|&u| !u) else {
            out.push(current.clone());
            return;
        };
        used[a] = true;
        for b in a + 1..lens.len() {
            if !used[b] && lens[b] == lens[a] {
                used[b] = true;
                current.push((a, b));
                go(lens, used, current, out);
                current.pop();
                used[b] = false;
            }
        }
        used[a] = false;
    }
    let mut out = Vec::new();
    go(lens, &mut vec![false; lens.len()], &mut Vec::new(), &mut out);
    out
}

/// Enumerates every perfect matching of equal-sided faces with every offset
/// tuple, or a seeded sample of them when there are more than the limit.
pub fn search_schemes(ball: &CellDividedBall, limits: SearchLimits) -> Result<SearchReport> {
    let faces = ball.face_count();
    if !faces.is_multiple_of(2) {
        return Err(Error::OddFaceCount(faces));
    }
    let lens: Vec<usize> = ball.faces().map(|f| ball.face_len(f)).collect();
    let all = matchings(&lens);
    let sizes: Vec<u64> = all
        .iter()
        .map(|m| m.iter().map(|&(a, _)| lens[a] as u64).product())
        .collect();
    let mut starts = Vec::with_capacity(sizes.len());
    let mut total: u64 = 0;
    for s in &sizes {
        starts.push(total);
        total = total
            .checked_add(*s)
            .ok_or_else(|| Error::Parameter("scheme count overflows".into()))?;
    }
    let limit_exceeded = total > limits.max_schemes as u64;
    let indices: Vec<u64> = if limit_exceeded {
        let population = usize::try_from(total)
            .map_err(|_| Error::Parameter("scheme count exceeds the address space".into()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(limits.seed);
        let mut picked: Vec<u64> = index::sample(&mut rng, population, limits.max_schemes)
            .into_iter()
            .map(|i| i as u64)
            .collect();
        picked.sort_unstable();
        picked
    } else {
        (0..total).collect()
    };

    let decode = |i: u64| -> Vec<FacePairing> {
        let which = starts.partition_point(|&s| s <= i) - 1;
        let mut rest = i - starts[which];
        all[which]
            .iter()
            .map(|&(a, b)| {
                let m = lens[a] as u64;
                let offset = (rest % m) as usize;
                rest /= m;
                FacePairing {
                    face_a: FaceId(a),
                    face_b: FaceId(b),
                    offset,
                }
            })
            .collect()
    };
    let records = indices
        .par_iter()
        .map(|&i| evaluate(ball, i, decode(i)))
        .collect::<Result<Vec<_>>>()?;
    let manifolds = records.iter().filter(|r| r.manifold).count();
    let summary = SearchSummary {
        manifolds,
        non_manifolds: records.len() - manifolds,
        distinguished: records.iter().filter(|r| r.distinguished).count(),
    };
    Ok(SearchReport {
        ball: format!(
            "{} faces, {} edges, {} vertices",
            faces,
            ball.label_count(),
            ball.vertex_count()
        ),
        total,
        evaluated: records.len(),
        limit_exceeded,
        records,
        summary,
    })
}

fn evaluate(ball: &CellDividedBall, index: u64, pairs: Vec<FacePairing>) -> Result<SearchRecord> {
    let p = Polyhedron::from_pairings(format!("scheme-{index}"), ball.clone(), pairs)?;
    quotient::audit(&p)?;
    let manifold = quotient::is_manifold(&p)?;
    let distinguished = moves::is_distinguished(&p.standard_form())?;
    Ok(SearchRecord {
        index,
        pairs: p.named_pairings(),
        manifold: manifold.manifold,
        distinguished,
        chi_quotient: quotient::chi_quotient(&p),
        h1: quotient::homology(&p)?,
        singularities: manifold.singularities,
    })
}

/// Applies `count` seeded random cycle-2 insertions.
pub fn random_insertions(p: &Polyhedron, count: usize, seed: u64) -> Result<Polyhedron> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = p.clone();
    for _ in 0..count {
        let ball = current.ball();
        let f = FaceId(rng.gen_range(0..ball.face_count()));
        let name = ball.face_name(f).to_string();
        let m = ball.face_len(f);
        current = match rng.gen_range(0..3) {
            0 if m >= 2 => {
                let ci = rng.gen_range(0..m);
                let cj = (ci + rng.gen_range(1..m)) % m;
                moves::insert_chord(&current, &name, ci, cj)?
            }
            1 => moves::insert_dangling(&current, &name, AttachPoint::Side(rng.gen_range(0..m)))?,
            _ => moves::insert_dangling(&current, &name, AttachPoint::Corner(rng.gen_range(0..m)))?,
        };
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solids_have_the_right_counts() {
        let counts = |b: &CellDividedBall| (b.vertex_count(), b.label_count(), b.face_count());
        assert_eq!(counts(&cube_ball()), (8, 12, 6));
        assert_eq!(counts(&octahedron_ball()), (6, 12, 8));
        assert_eq!(counts(&dodecahedron_ball()), (20, 30, 12));
        assert!(dodecahedron_ball().vertices().iter().all(|v| v.len() == 3));
    }

    #[test]
    fn rotation_is_right_handed() {
        let y = rotate([1.0, 0.0, 0.0], [0.0, 0.0, 1.0], std::f64::consts::FRAC_PI_2);
        assert!(close(y, [0.0, 1.0, 0.0]));
    }

    #[test]
    fn matching_counts() {
        assert_eq!(matchings(&[4; 6]).len(), 15);
        assert_eq!(matchings(&[3; 8]).len(), 105);
        assert_eq!(matchings(&[3, 4]).len(), 0);
    }

    #[test]
    fn lens_parameters() {
        assert!(lens(0, 0).is_err());
        assert!(lens(3, 3).is_err());
        assert!(lens(1, 0).is_ok());
        assert_eq!(by_name("lens-5-2").unwrap().name(), "lens-5-2");
        assert!(by_name("tetrahedron").is_err());
        assert!(annulus_loop(0).is_err());
        assert_eq!(ball_by_name("lens-4").unwrap().vertex_count(), 4);
        assert_eq!(ball_by_name("dodecahedron").unwrap().face_count(), 12);
        assert!(ball_by_name("lens-x").is_err());
    }

    #[test]
    fn random_insertions_are_deterministic() {
        let p = cube_twist(Twist::Quarter);
        let a = random_insertions(&p, 4, 7).unwrap();
        let b = random_insertions(&p, 4, 7).unwrap();
        assert_eq!(pif::serialize(&a), pif::serialize(&b));
        assert_eq!(pif::serialize(&random_insertions(&p, 0, 7).unwrap()), pif::serialize(&p));
    }
}
