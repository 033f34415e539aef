//! Plane tropical curves as corner loci, and the abstract spine map.
//!
//! Heights `c_v` enter through `x ↦ max_v (⟨v, x⟩ + c_v)`. The dual
//! subdivision uses lower hulls, so [`lower_hull_heights`] is the one place
//! where the sign flips.

mod graph;

pub use graph::{enumerate_graphs, AbstractTropicalCurve, Element, GraphEdge, ModuliPoint};

use std::collections::BTreeMap;

use num::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{convex_hull, LatticePoint, LatticePolygon};
use crate::rational::{self, q, Q};
use crate::secondary::{affine_basis, subdivide, RegularSubdivision};

pub type Heights = BTreeMap<LatticePoint, Q>;

/// Exact heights from floating-point ones.
pub fn heights_from_f64(h: &BTreeMap<LatticePoint, f64>) -> Result<Heights> {
    h.iter().map(|(&v, &c)| Ok((v, rational::from_f64(c)?))).collect()
}

/// Max-plus heights `c` to lower-hull heights `h = −c`.
pub fn lower_hull_heights(c: &[Q]) -> Vec<Q> {
    c.iter().map(|x| -x).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropEdge {
    pub a: usize,
    pub b: usize,
    /// Primitive direction from `a` to `b`.
    pub dir: LatticePoint,
    pub weight: i64,
    /// Lattice length: `x_b − x_a = length · dir`.
    pub length: Q,
    /// Endpoints of the dual segment, in increasing order.
    pub dual: (LatticePoint, LatticePoint),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ray {
    pub v: usize,
    pub dir: LatticePoint,
    pub weight: i64,
    /// Unit boundary segments of the support hull this ray is dual to, in anticlockwise order.
    pub labels: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct PlaneTropicalCurve {
    pub vertices: Vec<[Q; 2]>,
    pub edges: Vec<TropEdge>,
    pub rays: Vec<Ray>,
    pub subdivision: RegularSubdivision,
    pub heights: Vec<Q>,
}

fn vertex_of(points: &[LatticePoint], c: &[Q], cell: &[usize]) -> [Q; 2] {
    let [i, j, k] = affine_basis(points, cell);
    // ⟨v_i − v_j, x⟩ = c_j − c_i and ⟨v_i − v_k, x⟩ = c_k − c_i.
    let (p, r) = (points[i].sub(points[j]), points[i].sub(points[k]));
    let (s, t) = (&c[j] - &c[i], &c[k] - &c[i]);
    let det = q(p.x * r.y - p.y * r.x);
    let x = (&s * q(r.y) - &t * q(p.y)) / &det;
    let y = (&t * q(p.x) - &s * q(r.x)) / &det;
    [x, y]
}

/// The corner locus of `max_v (⟨v, x⟩ + c_v)`.
pub fn corner_locus(heights: &Heights) -> Result<PlaneTropicalCurve> {
    let points: Vec<LatticePoint> = heights.keys().copied().collect();
    let c: Vec<Q> = heights.values().cloned().collect();
    let sub = subdivide(&points, &lower_hull_heights(&c))?;
    let hull = LatticePolygon::from_points(&points)?;
    let boundary = hull.boundary_points();
    let nb = boundary.len();
    let vertices: Vec<[Q; 2]> = sub.facets.iter().map(|f| vertex_of(&points, &c, f)).collect();
    let mut segs: BTreeMap<(LatticePoint, LatticePoint), Vec<(usize, LatticePoint, LatticePoint)>> =
        BTreeMap::new();
    for (k, f) in sub.facets.iter().enumerate() {
        let pts: Vec<LatticePoint> = f.iter().map(|&i| points[i]).collect();
        let h = convex_hull(&pts);
        for e in 0..h.len() {
            let (p, r) = (h[e], h[(e + 1) % h.len()]);
            segs.entry((p.min(r), p.max(r))).or_default().push((k, p, r));
        }
    }
    let mut edges = Vec::new();
    let mut rays = Vec::new();
    for cells in segs.values() {
        match cells.as_slice() {
            [(a, p, r), (b, _, _)] => {
                let e = r.sub(*p);
                let dir = LatticePoint::new(-e.y, e.x).primitive();
                let d = [&vertices[*b][0] - &vertices[*a][0], &vertices[*b][1] - &vertices[*a][1]];
                let dot = &d[0] * q(dir.x) + &d[1] * q(dir.y);
                let (mut from, mut to, mut dot) = (*a, *b, dot);
                if dot.is_negative() {
                    std::mem::swap(&mut from, &mut to);
                    dot = -dot;
                }
                if dot.is_zero() {
                    return Err(Error::Numeric("coincident dual vertices".into()));
                }
                let length = dot / q(dir.dot(dir));
                let dual = ((*p).min(*r), (*p).max(*r));
                edges.push(TropEdge { a: from, b: to, dir, weight: e.content(), length, dual });
            }
            [(a, p, r)] => {
                let e = r.sub(*p);
                let dir = LatticePoint::new(e.y, -e.x).primitive();
                let start = boundary
                    .iter()
                    .position(|&b| b == *p)
                    .ok_or_else(|| Error::Numeric(format!("segment from {p} not on the boundary")))?;
                let w = e.content();
                let labels = (0..w as usize).map(|s| (start + s) % nb).collect();
                rays.push(Ray { v: *a, dir, weight: w, labels });
            }
            _ => return Err(Error::Numeric("segment shared by more than two cells".into())),
        }
    }
    edges.sort_by_key(|e| (e.a, e.b));
    rays.sort_by_key(|r| r.labels[0]);
    Ok(PlaneTropicalCurve { vertices, edges, rays, subdivision: sub, heights: c })
}

impl PlaneTropicalCurve {
    pub fn vertex_f64(&self, i: usize) -> (f64, f64) {
        (rational::to_f64(&self.vertices[i][0]), rational::to_f64(&self.vertices[i][1]))
    }

    /// Weighted primitive directions sum to zero at every vertex.
    pub fn is_balanced(&self) -> bool {
        let mut sum = vec![LatticePoint::new(0, 0); self.vertices.len()];
        for e in &self.edges {
            sum[e.a] = sum[e.a].add(e.dir.scale(e.weight));
            sum[e.b] = sum[e.b].sub(e.dir.scale(e.weight));
        }
        for r in &self.rays {
            sum[r.v] = sum[r.v].add(r.dir.scale(r.weight));
        }
        sum.iter().all(|s| *s == LatticePoint::new(0, 0))
    }

    /// Number of unit boundary segments, one leg each.
    pub fn leg_count(&self) -> usize {
        self.rays.iter().map(|r| r.labels.len()).sum()
    }

    /// The bounded edge dual to the segment `[p, q]`.
    pub fn edge_dual_to(&self, p: LatticePoint, q: LatticePoint) -> Option<&TropEdge> {
        self.edges.iter().find(|e| e.dual == (p.min(q), p.max(q)))
    }

    /// Euclidean distance from `x` to the curve.
    pub fn distance(&self, x: (f64, f64)) -> f64 {
        let mut best = f64::INFINITY;
        for e in &self.edges {
            best = best.min(seg_dist(x, self.vertex_f64(e.a), self.vertex_f64(e.b)));
        }
        for r in &self.rays {
            let a = self.vertex_f64(r.v);
            let d = (r.dir.x as f64, r.dir.y as f64);
            let s = ((x.0 - a.0) * d.0 + (x.1 - a.1) * d.1) / (d.0 * d.0 + d.1 * d.1);
            let s = s.max(0.0);
            best = best.min(((x.0 - a.0 - s * d.0).powi(2) + (x.1 - a.1 - s * d.1).powi(2)).sqrt());
        }
        if self.edges.is_empty() && self.rays.is_empty() {
            for i in 0..self.vertices.len() {
                let v = self.vertex_f64(i);
                best = best.min(((x.0 - v.0).powi(2) + (x.1 - v.1).powi(2)).sqrt());
            }
        }
        best
    }

    /// Translates vertex `i` by `(dx, dy)`; used to build wrong curves in tests.
    pub fn perturbed(&self, i: usize, dx: &Q, dy: &Q) -> Self {
        let mut c = self.clone();
        c.vertices[i][0] += dx;
        c.vertices[i][1] += dy;
        c
    }

    pub fn to_json(&self) -> Value {
        let vs: Vec<Value> = (0..self.vertices.len())
            .map(|i| {
                let (x, y) = self.vertex_f64(i);
                json!([x, y])
            })
            .collect();
        let es: Vec<Value> = self
            .edges
            .iter()
            .map(|e| {
                json!({
                    "a": e.a, "b": e.b, "dir": e.dir, "weight": e.weight,
                    "length": rational::to_f64(&e.length),
                })
            })
            .collect();
        let rs: Vec<Value> = self
            .rays
            .iter()
            .map(|r| json!({ "v": r.v, "dir": r.dir, "weight": r.weight, "labels": r.labels }))
            .collect();
        json!({ "vertices": vs, "edges": es, "rays": rs })
    }
}

fn seg_dist(x: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let d = (b.0 - a.0, b.1 - a.1);
    let l2 = d.0 * d.0 + d.1 * d.1;
    let s = if l2 == 0.0 { 0.0 } else { (((x.0 - a.0) * d.0 + (x.1 - a.1) * d.1) / l2).clamp(0.0, 1.0) };
    ((x.0 - a.0 - s * d.0).powi(2) + (x.1 - a.1 - s * d.1).powi(2)).sqrt()
}

/// Grid oracle for a claimed corner locus.
///
/// With `g(x)` the gap between the two largest terms and `d(x)` the distance
/// to the claimed curve, the true locus satisfies `m·d ≤ g ≤ L·d` where `m`
/// and `L` are the least and greatest distances between support points.
/// Every point of a `grid × grid` lattice over the padded vertex box is tested.
pub fn brute_force_corner_check(heights: &Heights, curve: &PlaneTropicalCurve, grid: usize) -> bool {
    let pts: Vec<(f64, f64, f64)> = heights
        .iter()
        .map(|(v, c)| (v.x as f64, v.y as f64, rational::to_f64(c)))
        .collect();
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let d = ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt();
            lo = lo.min(d);
            hi = hi.max(d);
        }
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..curve.vertices.len() {
        let (x, y) = curve.vertex_f64(i);
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let pad = 1.0 + 0.25 * ((x1 - x0).max(y1 - y0));
    let (x0, x1, y0, y1) = (x0 - pad, x1 + pad, y0 - pad, y1 + pad);
    let scale = pts.iter().map(|p| p.2.abs()).fold(1.0, f64::max) + (x1 - x0).abs().max((y1 - y0).abs()) * hi;
    let eps = 1e-9 * scale;
    let n = grid.max(2);
    for i in 0..n {
        for j in 0..n {
            let x = (
                x0 + (x1 - x0) * i as f64 / (n - 1) as f64,
                y0 + (y1 - y0) * j as f64 / (n - 1) as f64,
            );
            let mut top = [f64::NEG_INFINITY; 2];
            for p in &pts {
                let val = p.0 * x.0 + p.1 * x.1 + p.2;
                if val > top[0] {
                    top = [val, top[0]];
                } else if val > top[1] {
                    top[1] = val;
                }
            }
            let g = top[0] - top[1];
            let d = curve.distance(x);
            if g < lo * d - eps || g > hi * d + eps {
                return false;
            }
        }
    }
    true
}

/// The spine as an abstract graph: zero weights, lattice lengths, one leg per
/// unit boundary segment, legs numbered anticlockwise from the canonical first vertex.
pub fn abstract_from_plane(p: &PlaneTropicalCurve) -> Result<AbstractTropicalCurve> {
    if !p.is_balanced() {
        return Err(Error::InvalidInput("plane curve is not balanced".into()));
    }
    let edges = p
        .edges
        .iter()
        .map(|e| GraphEdge { u: e.a, v: e.b, len: rational::to_f64(&e.length) })
        .collect();
    let mut legs = vec![usize::MAX; p.leg_count()];
    for r in &p.rays {
        for &l in &r.labels {
            legs[l] = r.v;
        }
    }
    if legs.contains(&usize::MAX) {
        return Err(Error::Numeric("boundary segment without a ray".into()));
    }
    AbstractTropicalCurve::new(vec![0; p.vertices.len()], edges, legs)
}

/// Υ: heights to a canonical moduli point.
pub fn upsilon(heights: &Heights) -> Result<ModuliPoint> {
    let p = corner_locus(heights)?;
    Ok(abstract_from_plane(&p)?.moduli_point())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn zero_heights(p: &LatticePolygon) -> Heights {
        p.lattice_points().into_iter().map(|v| (v, Q::zero())).collect()
    }

    #[test]
    fn tropical_line() {
        let c = corner_locus(&zero_heights(&LatticePolygon::unit_triangle())).unwrap();
        assert_eq!(c.vertices, vec![[q(0), q(0)]]);
        let dirs: Vec<LatticePoint> = c.rays.iter().map(|r| r.dir).collect();
        assert_eq!(dirs, vec![LatticePoint::new(0, -1), LatticePoint::new(1, 1), LatticePoint::new(-1, 0)]);
        assert!(c.is_balanced());
        let g = abstract_from_plane(&c).unwrap();
        assert_eq!((g.weights.len(), g.edges.len(), g.legs.len(), g.genus()), (1, 0, 3, 0));
    }

    #[test]
    fn cross_polytope_cycle() {
        let mut h = zero_heights(&LatticePolygon::cross_polytope());
        h.insert(LatticePoint::new(0, 0), q(1));
        let c = corner_locus(&h).unwrap();
        assert_eq!((c.vertices.len(), c.edges.len(), c.rays.len()), (4, 4, 4));
        assert!(c.is_balanced());
        let g = abstract_from_plane(&c).unwrap();
        assert_eq!((g.genus(), g.legs.len()), (1, 4));
        assert!(g.edges.iter().all(|e| e.len == 2.0));
    }

    #[test]
    fn cross_polytope_without_center() {
        let mut h = zero_heights(&LatticePolygon::cross_polytope());
        h.insert(LatticePoint::new(0, 0), q(-1));
        let c = corner_locus(&h).unwrap();
        // Coplanar corners: one cell, a single four-valent vertex.
        assert_eq!((c.vertices.len(), c.edges.len()), (1, 0));
        h.insert(LatticePoint::new(1, 0), qf(1, 2));
        let c = corner_locus(&h).unwrap();
        assert_eq!((c.vertices.len(), c.edges.len()), (2, 1));
        assert!(c.is_balanced());
    }

    #[test]
    fn collinear_support_rejected() {
        let h: Heights = (0..3).map(|i| (LatticePoint::new(i, 0), Q::zero())).collect();
        assert!(corner_locus(&h).is_err());
    }

    #[test]
    fn oracle_accepts_true_and_rejects_perturbed() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = LatticePolygon::cross_polytope();
        for _ in 0..5 {
            let h: Heights = p.lattice_points().into_iter().map(|v| (v, qf(rng.gen_range(-20..20), 7))).collect();
            let c = corner_locus(&h).unwrap();
            assert!(brute_force_corner_check(&h, &c, 60));
            let bad = c.perturbed(0, &qf(1, 2), &qf(1, 3));
            assert!(!brute_force_corner_check(&h, &bad, 60));
        }
    }

    #[test]
    fn legs_rotate_with_the_polygon() {
        let p = LatticePolygon::cross_polytope();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let h: Heights = p.lattice_points().into_iter().map(|v| (v, qf(rng.gen_range(-9..9), 5))).collect();
        // Quarter turn; the canonical start vertex moves one segment along the boundary.
        let rot: Heights = h.iter().map(|(v, c)| (LatticePoint::new(-v.y, v.x), c.clone())).collect();
        let a = abstract_from_plane(&corner_locus(&h).unwrap()).unwrap();
        let b = abstract_from_plane(&corner_locus(&rot).unwrap()).unwrap();
        let mut shifted = a.clone();
        shifted.legs.rotate_left(1);
        assert!(b.isomorphic(&shifted).unwrap() || {
            let mut s = a.clone();
            s.legs.rotate_right(1);
            b.isomorphic(&s).unwrap()
        });
    }

    #[test]
    fn upsilon_is_translation_invariant() {
        let mut h = zero_heights(&LatticePolygon::cross_polytope());
        h.insert(LatticePoint::new(0, 0), q(2));
        let a = upsilon(&h).unwrap();
        // Adding an affine function moves the curve by a translation.
        let moved: Heights =
            h.iter().map(|(v, c)| (*v, c + qf(3, 2) * q(v.x) - qf(1, 3) * q(v.y) + q(5))).collect();
        let b = upsilon(&moved).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.curve().genus(), 1);
    }
}
