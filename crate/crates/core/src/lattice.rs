//! Exact lattice-polygon geometry.
//!
//! Polygons are stored with vertices in canonical order: the
//! lexicographically smallest vertex first, then anticlockwise.
//! Boundary unit segments are numbered the same way, starting at that vertex.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{gcd, lcm, q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl From<[i64; 2]> for LatticePoint {
    fn from(p: [i64; 2]) -> Self {
        LatticePoint { x: p[0], y: p[1] }
    }
}

impl From<LatticePoint> for [i64; 2] {
    fn from(p: LatticePoint) -> Self {
        [p.x, p.y]
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl LatticePoint {
    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }

    pub fn add(self, o: Self) -> Self {
        LatticePoint::new(self.x + o.x, self.y + o.y)
    }

    pub fn sub(self, o: Self) -> Self {
        LatticePoint::new(self.x - o.x, self.y - o.y)
    }

    pub fn scale(self, k: i64) -> Self {
        LatticePoint::new(self.x * k, self.y * k)
    }

    pub fn dot(self, o: Self) -> i64 {
        self.x * o.x + self.y * o.y
    }

    /// `self.x * o.y - self.y * o.x`.
    pub fn wedge(self, o: Self) -> i64 {
        self.x * o.y - self.y * o.x
    }

    pub fn content(self) -> i64 {
        gcd(self.x, self.y)
    }

    pub fn primitive(self) -> Self {
        let g = self.content();
        if g == 0 {
            self
        } else {
            LatticePoint::new(self.x / g, self.y / g)
        }
    }

    pub fn is_primitive(self) -> bool {
        self.content() == 1
    }
}

/// Orientation of `c` relative to the directed line `a -> b` (twice the signed area).
pub fn orient(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> i64 {
    b.sub(a).wedge(c.sub(a))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub start: LatticePoint,
    pub end: LatticePoint,
    /// Primitive inner normal.
    pub u: LatticePoint,
    /// Integer length.
    pub d: i64,
}

impl Edge {
    pub fn direction(&self) -> LatticePoint {
        self.end.sub(self.start).primitive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticePolygon {
    vertices: Vec<LatticePoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolygonStats {
    pub m: usize,
    pub n: i64,
    pub g: i64,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub area: Q,
}

impl LatticePolygon {
    /// Convex hull of the given points; fails if the hull is not two-dimensional.
    pub fn from_points(points: &[LatticePoint]) -> Result<Self> {
        let hull = convex_hull(points);
        if hull.len() < 3 {
            return Err(Error::DegeneratePolygon(format!(
                "hull of {} points has no area",
                points.len()
            )));
        }
        Ok(LatticePolygon { vertices: hull })
    }

    pub fn from_coords(coords: &[(i64, i64)]) -> Result<Self> {
        let pts: Vec<_> = coords.iter().map(|&(x, y)| LatticePoint::new(x, y)).collect();
        Self::from_points(&pts)
    }

    pub fn unit_triangle() -> Self {
        Self::from_coords(&[(0, 0), (1, 0), (0, 1)]).expect("unit triangle")
    }

    pub fn unit_square() -> Self {
        Self::from_coords(&[(0, 0), (1, 0), (1, 1), (0, 1)]).expect("unit square")
    }

    pub fn cross_polytope() -> Self {
        Self::from_coords(&[(1, 0), (0, 1), (-1, 0), (0, -1)]).expect("cross polytope")
    }

    /// `conv{(0,0),(d,0),(0,d)}`.
    pub fn dilated_triangle(d: i64) -> Result<Self> {
        Self::unit_triangle().dilate(d)
    }

    /// Builds the polygon whose anticlockwise sequence of unit-segment normals is `normals`.
    pub fn from_normal_sequence(normals: &[LatticePoint]) -> Result<Self> {
        let sum = normals.iter().fold(LatticePoint::new(0, 0), |a, &b| a.add(b));
        if sum != LatticePoint::new(0, 0) {
            return Err(Error::InvalidInput(format!("normals sum to {sum}, not zero")));
        }
        let mut p = LatticePoint::new(0, 0);
        let mut pts = vec![p];
        for &u in normals {
            // Anticlockwise edge direction e with inner normal u = (-e.y, e.x).
            p = p.add(LatticePoint::new(u.y, -u.x));
            pts.push(p);
        }
        let poly = Self::from_points(&pts)?;
        if rotation_of(&poly.normal_sequence(), normals).is_none() {
            return Err(Error::OrderingViolation(
                "normal sequence is not cyclically ordered".into(),
            ));
        }
        Ok(poly)
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn edges(&self) -> Vec<Edge> {
        let k = self.vertices.len();
        (0..k)
            .map(|i| {
                let a = self.vertices[i];
                let b = self.vertices[(i + 1) % k];
                let e = b.sub(a);
                let d = e.content();
                let dir = e.primitive();
                Edge { start: a, end: b, u: LatticePoint::new(-dir.y, dir.x), d }
            })
            .collect()
    }

    /// Twice the Euclidean area.
    pub fn twice_area(&self) -> i64 {
        let k = self.vertices.len();
        (0..k)
            .map(|i| self.vertices[i].wedge(self.vertices[(i + 1) % k]))
            .sum()
    }

    pub fn area(&self) -> Q {
        Q::new(self.twice_area().into(), 2.into())
    }

    pub fn boundary_count(&self) -> i64 {
        self.edges().iter().map(|e| e.d).sum()
    }

    pub fn interior_count(&self) -> i64 {
        // Pick: 2A = 2g + n - 2.
        (self.twice_area() - self.boundary_count() + 2) / 2
    }

    pub fn stats(&self) -> PolygonStats {
        let n = self.boundary_count();
        let g = self.interior_count();
        let area = self.area();
        debug_assert_eq!(area, q(g) + Q::new(n.into(), 2.into()) - q(1));
        PolygonStats { m: self.vertices.len(), n, g, area }
    }

    /// Boundary lattice points anticlockwise from the canonical first vertex.
    pub fn boundary_points(&self) -> Vec<LatticePoint> {
        let mut out = Vec::new();
        for e in self.edges() {
            let dir = e.direction();
            for k in 0..e.d {
                out.push(e.start.add(dir.scale(k)));
            }
        }
        out
    }

    /// Unit-segment inner normals in the same order as [`Self::boundary_points`].
    pub fn normal_sequence(&self) -> Vec<LatticePoint> {
        self.edges()
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.u, e.d as usize))
            .collect()
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        let k = self.vertices.len();
        (0..k).all(|i| orient(self.vertices[i], self.vertices[(i + 1) % k], p) >= 0)
    }

    pub fn on_boundary(&self, p: LatticePoint) -> bool {
        let k = self.vertices.len();
        self.contains(p)
            && (0..k).any(|i| orient(self.vertices[i], self.vertices[(i + 1) % k], p) == 0)
    }

    pub fn bounding_box(&self) -> (LatticePoint, LatticePoint) {
        let xs = self.vertices.iter().map(|v| v.x);
        let ys = self.vertices.iter().map(|v| v.y);
        (
            LatticePoint::new(xs.clone().min().unwrap(), ys.clone().min().unwrap()),
            LatticePoint::new(xs.max().unwrap(), ys.max().unwrap()),
        )
    }

    /// All lattice points, sorted lexicographically.
    pub fn lattice_points(&self) -> Vec<LatticePoint> {
        let (lo, hi) = self.bounding_box();
        let mut out = Vec::new();
        for x in lo.x..=hi.x {
            for y in lo.y..=hi.y {
                let p = LatticePoint::new(x, y);
                if self.contains(p) {
                    out.push(p);
                }
            }
        }
        out
    }

    pub fn interior_points(&self) -> Vec<LatticePoint> {
        self.lattice_points().into_iter().filter(|&p| !self.on_boundary(p)).collect()
    }

    pub fn is_vertex(&self, v: LatticePoint) -> bool {
        self.vertices.contains(&v)
    }

    pub fn translate(&self, by: LatticePoint) -> Self {
        let pts: Vec<_> = self.vertices.iter().map(|v| v.add(by)).collect();
        LatticePolygon { vertices: convex_hull(&pts) }
    }

    pub fn dilate(&self, d: i64) -> Result<Self> {
        if d < 1 {
            return Err(Error::InvalidInput(format!("dilation factor {d} must be at least 1")));
        }
        Ok(LatticePolygon { vertices: self.vertices.iter().map(|v| v.scale(d)).collect() })
    }

    pub fn balancing_check(&self) -> bool {
        balancing_check_edges(&self.edges())
    }

    /// `conv(boundary lattice points \ {v})`.
    pub fn cut_vertex(&self, v: LatticePoint) -> Result<Self> {
        if !self.is_vertex(v) {
            return Err(Error::NotAVertex(v.x, v.y));
        }
        let rest: Vec<_> = self.boundary_points().into_iter().filter(|&p| p != v).collect();
        Self::from_points(&rest).map_err(|_| {
            Error::DegeneratePolygon(format!("cutting {v} leaves a segment"))
        })
    }

    /// Every point of `other` lies in `self`.
    pub fn contains_polygon(&self, other: &LatticePolygon) -> bool {
        other.vertices.iter().all(|&p| self.contains(p))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "vertices": self.vertices })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let verts = v
            .get("vertices")
            .ok_or_else(|| Error::Parse("polygon needs a \"vertices\" array".into()))?;
        let pts: Vec<LatticePoint> = serde_json::from_value(verts.clone())
            .map_err(|e| Error::Parse(format!("polygon vertices: {e}")))?;
        Self::from_points(&pts)
    }
}

impl Serialize for LatticePolygon {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Smallest `r` with `b[i] == a[(i + r) % n]` for all `i`.
pub fn rotation_of<T: PartialEq>(a: &[T], b: &[T]) -> Option<usize> {
    if a.len() != b.len() {
        return None;
    }
    let n = a.len();
    (0..n.max(1)).find(|&r| (0..n).all(|i| b[i] == a[(i + r) % n]))
}

/// `Σ d·u == 0` over an arbitrary edge list.
pub fn balancing_check_edges(edges: &[Edge]) -> bool {
    let s = edges.iter().fold(LatticePoint::new(0, 0), |acc, e| acc.add(e.u.scale(e.d)));
    s == LatticePoint::new(0, 0)
}

/// Strictly convex hull, anticlockwise, starting at the lexicographic minimum.
pub fn convex_hull(points: &[LatticePoint]) -> Vec<LatticePoint> {
    let pts: Vec<LatticePoint> = points.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<LatticePoint> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && orient(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<LatticePoint> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && orient(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        // Collinear input: the chain collapses to two endpoints.
        return lower;
    }
    lower
}

/// A dilate-and-cut route from the unit triangle to a target polygon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutPlan {
    pub d1: i64,
    pub d2: i64,
    pub cuts: Vec<LatticePoint>,
    /// Replay yields `d2 · target + offset`.
    pub offset: LatticePoint,
}

impl CutPlan {
    /// Dilates the unit triangle by `d1·d2` and applies the cuts in order.
    pub fn replay(&self) -> Result<LatticePolygon> {
        let mut p = LatticePolygon::dilated_triangle(self.d1 * self.d2)?;
        for &v in &self.cuts {
            p = p.cut_vertex(v)?;
        }
        Ok(p)
    }
}

/// Plans a sequence of cuts taking `d1·d2·(unit triangle)` to a translate of `d2·target`.
pub fn cut_plan(target: &LatticePolygon) -> Result<CutPlan> {
    let (lo, _) = target.bounding_box();
    let shifted = target.translate(LatticePoint::new(-lo.x, -lo.y));
    let d1 = shifted.vertices.iter().map(|v| v.x + v.y).max().unwrap().max(1);
    let base_d2 = edge_line_denominator_lcm(&shifted, d1);
    for mult in 1..=8 {
        let d2 = base_d2 * mult;
        let goal = shifted.dilate(d2)?;
        if let Some(cuts) = greedy_cuts(d1 * d2, &goal) {
            let offset = LatticePoint::new(-lo.x * d2, -lo.y * d2);
            let plan = CutPlan { d1, d2, cuts, offset };
            debug_assert_eq!(plan.replay().ok().as_ref(), Some(&goal));
            return Ok(plan);
        }
    }
    Err(Error::Numeric("no cut sequence found".into()))
}

fn edge_line_denominator_lcm(p: &LatticePolygon, d1: i64) -> i64 {
    // Boundary lines of d1·(unit triangle): x = 0, y = 0, x + y = d1, as (a, b, c) with ax + by = c.
    let sides = [(1, 0, 0), (0, 1, 0), (1, 1, d1)];
    let mut l = 1;
    for e in p.edges() {
        // Edge line: u · X = u · start.
        let (a1, b1, c1) = (e.u.x, e.u.y, e.u.dot(e.start));
        for &(a2, b2, c2) in &sides {
            let det = a1 * b2 - a2 * b1;
            if det == 0 {
                continue;
            }
            let xn = c1 * b2 - c2 * b1;
            let yn = a1 * c2 - a2 * c1;
            l = lcm(l, det.abs() / gcd(xn, det));
            l = lcm(l, det.abs() / gcd(yn, det));
        }
    }
    l
}

fn greedy_cuts(scale: i64, goal: &LatticePolygon) -> Option<Vec<LatticePoint>> {
    let mut p = LatticePolygon::dilated_triangle(scale).ok()?;
    let mut cuts = Vec::new();
    while &p != goal {
        let next = p.vertices.iter().copied().find_map(|v| {
            if goal.contains(v) {
                return None;
            }
            let c = p.cut_vertex(v).ok()?;
            c.contains_polygon(goal).then_some((v, c))
        });
        let (v, c) = next?;
        cuts.push(v);
        p = c;
    }
    Some(cuts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    #[test]
    fn canonical_order_starts_at_lex_min() {
        let p = LatticePolygon::cross_polytope();
        assert_eq!(p.vertices(), &[pt(-1, 0), pt(0, -1), pt(1, 0), pt(0, 1)]);
    }

    #[test]
    fn hull_drops_collinear_points() {
        let p = LatticePolygon::from_coords(&[(0, 0), (1, 0), (2, 0), (0, 2), (1, 1)]).unwrap();
        assert_eq!(p.vertices(), &[pt(0, 0), pt(2, 0), pt(0, 2)]);
    }

    #[test]
    fn degenerate_input_rejected() {
        assert!(matches!(
            LatticePolygon::from_coords(&[(0, 0), (1, 1), (2, 2)]),
            Err(Error::DegeneratePolygon(_))
        ));
    }

    #[test]
    fn unit_square_normals() {
        let normals: Vec<_> = LatticePolygon::unit_square().edges().iter().map(|e| e.u).collect();
        assert_eq!(normals, vec![pt(0, 1), pt(-1, 0), pt(0, -1), pt(1, 0)]);
    }

    #[test]
    fn corrupted_edges_fail_balancing() {
        let mut edges = LatticePolygon::unit_square().edges();
        assert!(balancing_check_edges(&edges));
        edges[0].d = 2;
        assert!(!balancing_check_edges(&edges));
    }

    #[test]
    fn cut_errors() {
        let t = LatticePolygon::unit_triangle();
        assert_eq!(t.cut_vertex(pt(5, 5)), Err(Error::NotAVertex(5, 5)));
        assert!(matches!(t.cut_vertex(pt(0, 0)), Err(Error::DegeneratePolygon(_))));
        assert!(t.dilate(0).is_err());
    }

    #[test]
    fn normal_sequence_round_trip() {
        for p in [
            LatticePolygon::cross_polytope(),
            LatticePolygon::dilated_triangle(3).unwrap(),
            LatticePolygon::from_coords(&[(0, 0), (3, 1), (1, 2)]).unwrap(),
        ] {
            let back = LatticePolygon::from_normal_sequence(&p.normal_sequence()).unwrap();
            let (lo, _) = p.bounding_box();
            let (blo, _) = back.bounding_box();
            assert_eq!(back.translate(lo.sub(blo)), p);
        }
    }

    #[test]
    fn unordered_normals_rejected() {
        let n = [pt(0, 1), pt(1, 0), pt(-1, -1)];
        assert!(LatticePolygon::from_normal_sequence(&n).is_err());
    }

    #[test]
    fn cut_plan_replays_for_assorted_targets() {
        let targets = [
            LatticePolygon::unit_triangle(),
            LatticePolygon::unit_square(),
            LatticePolygon::cross_polytope(),
            LatticePolygon::from_coords(&[(0, 0), (3, 1), (1, 2)]).unwrap(),
            LatticePolygon::from_coords(&[(0, 0), (2, 0), (3, 1), (1, 3), (0, 1)]).unwrap(),
            LatticePolygon::from_coords(&[(0, 0), (1, 0), (0, 3)]).unwrap(),
        ];
        for t in &targets {
            let plan = cut_plan(t).unwrap();
            let expect = t.dilate(plan.d2).unwrap().translate(plan.offset);
            assert_eq!(plan.replay().unwrap(), expect, "target {:?}", t.vertices());
        }
        let tri = cut_plan(&LatticePolygon::unit_triangle()).unwrap();
        assert_eq!((tri.d1, tri.d2, tri.cuts.len()), (1, 1, 0));
    }
}
