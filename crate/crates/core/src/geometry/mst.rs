//! Euclidean minimum spanning trees with exact squared-distance comparisons,
//! and the structural properties every such tree must satisfy: no crossing
//! edges, adjacent edges at angle at least π/3, and no vertex strictly
//! inside the disc spanned by an edge.

use num_traits::Signed;
use serde_json::{json, Value};

use super::{dot, segments_cross, PlanarPoint};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A spanning tree over plane points. Edges store vertex indices; the
/// certificate keeps the squared lengths in the order Kruskal accepted
/// them, so a run can be replayed and compared edge by edge.
#[derive(Debug, Clone)]
pub struct SpanningTree {
    pub vertices: Vec<PlanarPoint>,
    pub edges: Vec<(usize, usize)>,
    pub certificate: Vec<(Rational, (usize, usize))>,
    /// Whether any two candidate edges compared equal during construction.
    pub had_ties: bool,
}

impl SpanningTree {
    pub fn edge_endpoints(&self, e: usize) -> (&PlanarPoint, &PlanarPoint) {
        let (i, j) = self.edges[e];
        (&self.vertices[i], &self.vertices[j])
    }
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn root(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn unite(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.root(a), self.root(b));
        if ra == rb {
            return false;
        }
        if self.rank[ra] < self.rank[rb] {
            self.parent[ra] = rb;
        } else {
            self.parent[rb] = ra;
            if self.rank[ra] == self.rank[rb] {
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// Kruskal over all point pairs with exact squared lengths. Ties are broken
/// lexicographically on `(length², i, j)` so the result is deterministic.
pub fn euclidean_mst(points: &[PlanarPoint]) -> Result<SpanningTree> {
    if points.len() < 2 {
        return Err(Error::BadParams("need at least 2 points".into()));
    }
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if points[i] == points[j] {
                return Err(Error::DuplicatePoints);
            }
        }
    }
    let n = points.len();
    let mut candidates: Vec<(Rational, (usize, usize))> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            candidates.push((points[i].dist_sq(&points[j]), (i, j)));
        }
    }
    candidates.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    let had_ties = candidates.windows(2).any(|w| w[0].0 == w[1].0);

    let mut uf = UnionFind::new(n);
    let mut edges = Vec::with_capacity(n - 1);
    let mut certificate = Vec::with_capacity(n - 1);
    for (w, (i, j)) in candidates {
        if uf.unite(i, j) {
            edges.push((i, j));
            certificate.push((w, (i, j)));
            if edges.len() == n - 1 {
                break;
            }
        }
    }
    debug_assert_eq!(edges.len(), n - 1);
    Ok(SpanningTree {
        vertices: points.to_vec(),
        edges,
        certificate,
        had_ties,
    })
}

/// Structural report for a spanning tree. For an exact minimum spanning
/// tree all violation lists are empty; violations are reported, not thrown,
/// and carry the tie flag so degenerate-tie cases can be told apart.
#[derive(Debug, Clone)]
pub struct MstPropertyReport {
    /// Pairs of edge indices whose open segments intersect.
    pub crossings: Vec<(usize, usize)>,
    /// `(vertex, edge, edge)` triples with an adjacent angle below π/3.
    pub sharp_angles: Vec<(usize, usize, usize)>,
    /// `(edge, vertex)` pairs where the vertex lies strictly inside the
    /// open disc whose diameter is the edge.
    pub disc_violations: Vec<(usize, usize)>,
    pub had_ties: bool,
}

impl MstPropertyReport {
    pub fn passes(&self) -> bool {
        self.crossings.is_empty() && self.sharp_angles.is_empty() && self.disc_violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "crossings": self.crossings,
            "sharp_angles": self.sharp_angles,
            "disc_violations": self.disc_violations,
            "had_ties": self.had_ties,
            "passes": self.passes(),
        })
    }
}

/// Angle between direction vectors is at least π/3, decided exactly:
/// either the dot product is nonpositive (angle ≥ π/2) or
/// `4 (u·v)² ≤ |u|²|v|²` (cos² ≤ 1/4 with positive cosine).
fn angle_at_least_pi_3(u: &PlanarPoint, v: &PlanarPoint) -> bool {
    let d = dot(u, v);
    if !d.is_positive() {
        return true;
    }
    let lhs = &(&d * &d) * &Rational::from_integer(4.into());
    lhs <= dot(u, u) * dot(v, v)
}

pub fn verify_mst_properties(tree: &SpanningTree) -> MstPropertyReport {
    let mut crossings = Vec::new();
    for a in 0..tree.edges.len() {
        for b in (a + 1)..tree.edges.len() {
            let (p1, p2) = tree.edge_endpoints(a);
            let (q1, q2) = tree.edge_endpoints(b);
            if segments_cross(p1, p2, q1, q2) {
                crossings.push((a, b));
            }
        }
    }

    let mut sharp_angles = Vec::new();
    for v in 0..tree.vertices.len() {
        let incident: Vec<usize> = tree
            .edges
            .iter()
            .enumerate()
            .filter(|(_, &(i, j))| i == v || j == v)
            .map(|(e, _)| e)
            .collect();
        for x in 0..incident.len() {
            for y in (x + 1)..incident.len() {
                let dir = |e: usize| -> PlanarPoint {
                    let (i, j) = tree.edges[e];
                    let other = if i == v { j } else { i };
                    tree.vertices[other].sub(&tree.vertices[v])
                };
                if !angle_at_least_pi_3(&dir(incident[x]), &dir(incident[y])) {
                    sharp_angles.push((v, incident[x], incident[y]));
                }
            }
        }
    }

    let mut disc_violations = Vec::new();
    for (e, &(i, j)) in tree.edges.iter().enumerate() {
        for v in 0..tree.vertices.len() {
            if v == i || v == j {
                continue;
            }
            // strictly inside the disc with diameter (i, j): the angle at v
            // is obtuse, i.e. (v-i)·(v-j) < 0
            let vi = tree.vertices[v].sub(&tree.vertices[i]);
            let vj = tree.vertices[v].sub(&tree.vertices[j]);
            if dot(&vi, &vj).is_negative() {
                disc_violations.push((e, v));
            }
        }
    }

    MstPropertyReport {
        crossings,
        sharp_angles,
        disc_violations,
        had_ties: tree.had_ties,
    }
}
