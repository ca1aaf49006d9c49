//! Shared checks and independent oracles for the integration tests.
//!
//! The oracles work from face words and named pairings only, so they share
//! no orbit or homology code with the library.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use polyglue::quotient;
use polyglue::{moves, Polyhedron, Sign};

/// Invariants every polyhedron must satisfy; returns a description of the
/// first violation.
pub fn check_global(p: &Polyhedron) -> Result<(), String> {
    let name = p.name();
    let ball = p.ball();
    for d in ball.darts() {
        if p.side_map(p.side_map(d)) != d {
            return Err(format!("{name}: side_map is not an involution at {d:?}"));
        }
    }
    let cycles: usize = p.edge_classes().iter().map(|c| c.cycle()).sum();
    if cycles != ball.label_count() {
        return Err(format!("{name}: cycles sum to {cycles}, E = {}", ball.label_count()));
    }
    let orders: usize = p.vertex_classes().iter().map(|c| c.order()).sum();
    if orders != ball.vertex_count() {
        return Err(format!("{name}: orders sum to {orders}, V = {}", ball.vertex_count()));
    }
    let scar = quotient::scar_complex(p).map_err(|e| format!("{name}: {e}"))?;
    let chi_q = quotient::chi_quotient(p);
    if scar.euler_characteristic() != chi_q + 1 {
        return Err(format!(
            "{name}: chi(scar) = {}, chi_q = {chi_q}",
            scar.euler_characteristic()
        ));
    }
    let genera: usize = quotient::vertex_links(p)
        .map_err(|e| format!("{name}: {e}"))?
        .iter()
        .map(|l| l.genus)
        .sum();
    if genera as i64 != chi_q {
        return Err(format!("{name}: link genera sum to {genera}, chi_q = {chi_q}"));
    }
    let (d1, d2) = (scar.boundary1(), scar.boundary2());
    let (_, e, f) = scar.counts();
    for row in &d1 {
        for j in 0..f {
            if d2.iter().zip(row).take(e).map(|(r, x)| x * r[j]).sum::<i64>() != 0 {
                return Err(format!("{name}: boundary of boundary is not zero"));
            }
        }
    }
    let manifold = quotient::is_manifold(p).map_err(|e| format!("{name}: {e}"))?;
    if p.is_standard() && moves::is_distinguished(p).map_err(|e| format!("{name}: {e}"))? && !manifold.manifold {
        return Err(format!("{name}: distinguished but not a manifold"));
    }
    Ok(())
}

#[derive(Clone)]
struct Dsu {
    parent: Vec<usize>,
    /// Parity relative to the parent.
    flip: Vec<bool>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
            flip: vec![false; n],
        }
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        if self.parent[x] == x {
            return (x, false);
        }
        let (root, f) = self.find(self.parent[x]);
        self.parent[x] = root;
        self.flip[x] ^= f;
        (root, self.flip[x])
    }

    fn union(&mut self, a: usize, b: usize, flip: bool) {
        let (ra, fa) = self.find(a);
        let (rb, fb) = self.find(b);
        if ra != rb {
            self.parent[ra] = rb;
            self.flip[ra] = fa ^ fb ^ flip;
        } else {
            assert_eq!(fa ^ fb, flip, "inconsistent edge orientations");
        }
    }
}

/// Quotient cell structure recomputed from words and pairings.
#[derive(Debug)]
pub struct OracleCells {
    /// Sorted edge-class sizes.
    pub cycles: Vec<usize>,
    /// Sorted vertex-class sizes, counted in ball vertices.
    pub orders: Vec<usize>,
    pub boundary1: Vec<Vec<i64>>,
    pub boundary2: Vec<Vec<i64>>,
}

pub fn oracle_cells(p: &Polyhedron) -> OracleCells {
    let ball = p.ball();
    let words: HashMap<String, Vec<(String, bool)>> = ball
        .face_words()
        .into_iter()
        .map(|w| {
            let word = w
                .word
                .iter()
                .map(|s| (s.label.clone(), s.sign == Sign::Plus))
                .collect();
            (w.name.clone(), word)
        })
        .collect();
    let mut labels: Vec<String> = words.values().flatten().map(|(l, _)| l.clone()).collect();
    labels.sort();
    labels.dedup();
    let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let n = labels.len();
    // Label ends: 2i is the tail of label i, 2i + 1 its head.
    let start = |(l, plus): &(String, bool)| 2 * index[l.as_str()] + usize::from(!*plus);
    let finish = |(l, plus): &(String, bool)| 2 * index[l.as_str()] + usize::from(*plus);

    let mut ball_vertices = Dsu::new(2 * n);
    for w in words.values() {
        let m = w.len();
        for j in 0..m {
            ball_vertices.union(start(&w[j]), finish(&w[(j + m - 1) % m]), false);
        }
    }
    let mut vertex_classes = ball_vertices.clone();
    let mut edge_classes = Dsu::new(n);
    let pairs = p.named_pairings();
    for (a, b, k) in &pairs {
        let (wa, wb) = (&words[a], &words[b]);
        let m = wa.len();
        for j in 0..m {
            let (sa, sb) = (&wa[j], &wb[(k + m - j) % m]);
            // Glued sides traverse the shared edge in opposite induced directions.
            edge_classes.union(index[sa.0.as_str()], index[sb.0.as_str()], sa.1 == sb.1);
            vertex_classes.union(start(sa), finish(sb), false);
        }
    }

    let mut edge_id = BTreeMap::new();
    let mut cycle_count: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..n {
        let (root, _) = edge_classes.find(i);
        let next = edge_id.len();
        let id = *edge_id.entry(root).or_insert(next);
        *cycle_count.entry(id).or_default() += 1;
    }
    let mut vertex_id = BTreeMap::new();
    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for end in 0..2 * n {
        let (root, _) = vertex_classes.find(end);
        let next = vertex_id.len();
        let id = *vertex_id.entry(root).or_insert(next);
        let (bv, _) = ball_vertices.find(end);
        members.entry(id).or_default().push(bv);
    }
    let mut orders: Vec<usize> = members
        .values_mut()
        .map(|m| {
            m.sort_unstable();
            m.dedup();
            m.len()
        })
        .collect();
    orders.sort_unstable();
    let mut cycles: Vec<usize> = cycle_count.values().copied().collect();
    cycles.sort_unstable();

    let (ve, ee) = (vertex_id.len(), edge_id.len());
    let mut boundary1 = vec![vec![0i64; ee]; ve];
    let mut done = vec![false; ee];
    for i in 0..n {
        let (root, flip) = edge_classes.find(i);
        let e = edge_id[&root];
        if done[e] {
            continue;
        }
        done[e] = true;
        let (tail, head) = if flip { (2 * i + 1, 2 * i) } else { (2 * i, 2 * i + 1) };
        boundary1[vertex_id[&vertex_classes.find(head).0]][e] += 1;
        boundary1[vertex_id[&vertex_classes.find(tail).0]][e] -= 1;
    }
    let mut boundary2 = vec![vec![0i64; pairs.len()]; ee];
    for (f, (a, _, _)) in pairs.iter().enumerate() {
        for (l, plus) in &words[a] {
            let (root, flip) = edge_classes.find(index[l.as_str()]);
            let sign = if *plus != flip { 1 } else { -1 };
            boundary2[edge_id[&root]][f] += sign;
        }
    }
    OracleCells {
        cycles,
        orders,
        boundary1,
        boundary2,
    }
}

fn determinant(mut m: Vec<Vec<i128>>) -> i128 {
    // Fraction-free elimination.
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Invariant factors from determinantal divisors: `d_k` is the gcd of all
/// `k × k` minors and the k-th factor is `d_k / d_{k−1}`.
pub fn determinantal_factors(matrix: &[Vec<i64>]) -> Vec<BigInt> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    let mut factors = Vec::new();
    let mut previous = BigInt::one();
    for k in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        'outer: for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| i128::from(matrix[r][c])).collect())
                    .collect();
                g = g.gcd(&BigInt::from(determinant(minor)));
                if g.is_one() {
                    break 'outer;
                }
            }
        }
        if g.is_zero() {
            break;
        }
        factors.push(&g / &previous);
        previous = g;
    }
    factors
}

/// `(betti, torsion)` of the quotient from the oracle cells.
pub fn oracle_homology(p: &Polyhedron) -> ([usize; 4], Vec<BigInt>) {
    let cells = oracle_cells(p);
    let v = cells.boundary1.len();
    let e = cells.boundary2.len();
    let f = cells.boundary2.first().map_or(0, Vec::len);
    let r1 = determinantal_factors(&cells.boundary1).len();
    let s2 = determinantal_factors(&cells.boundary2);
    let r2 = s2.len();
    let torsion = s2.into_iter().filter(|x| x.abs() != BigInt::one()).collect();
    ([v - r1, e - r1 - r2, f - r2, 1], torsion)
}

pub fn big(values: &[u64]) -> Vec<BigInt> {
    values.iter().map(|&x| BigInt::from(x)).collect()
}
