//! Regular subdivisions of planar point sets and the secondary polytope.
//!
//! Heights follow the lower-hull convention: a point `v` lifted to
//! `(v, h(v))`, cells are projections of lower faces. Everything is exact.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{orient, LatticePoint, LatticePolygon};
use crate::linalg;
use crate::lp::System;
use crate::rational::{self, q, Q};

pub const MAX_POINTS: usize = 12;

pub type Triangle = [usize; 3];

/// A regular subdivision together with a height function inducing it.
#[derive(Debug, Clone)]
pub struct RegularSubdivision {
    pub points: Vec<LatticePoint>,
    /// Point-index sets of the two-dimensional cells, each sorted; the list is sorted.
    pub facets: Vec<Vec<usize>>,
    pub witness: Vec<Q>,
}

impl PartialEq for RegularSubdivision {
    fn eq(&self, o: &Self) -> bool {
        self.points == o.points && self.facets == o.facets
    }
}

impl Eq for RegularSubdivision {}

impl RegularSubdivision {
    pub fn used(&self) -> BTreeSet<usize> {
        self.facets.iter().flatten().copied().collect()
    }

    pub fn unused(&self) -> Vec<usize> {
        let u = self.used();
        (0..self.points.len()).filter(|i| !u.contains(i)).collect()
    }

    pub fn is_full(&self) -> bool {
        self.used().len() == self.points.len()
    }

    pub fn is_triangulation(&self) -> bool {
        self.facets.iter().all(|f| f.len() == 3)
    }

    pub fn triangles(&self) -> Option<Vec<Triangle>> {
        self.is_triangulation().then(|| self.facets.iter().map(|f| [f[0], f[1], f[2]]).collect())
    }

    /// Every cell of `self` lies inside a cell of `coarser`.
    pub fn refines(&self, coarser: &RegularSubdivision) -> bool {
        self.facets.iter().all(|f| {
            coarser.facets.iter().any(|g| f.iter().all(|i| g.binary_search(i).is_ok()))
        })
    }

    pub fn facet_points(&self, k: usize) -> Vec<LatticePoint> {
        self.facets[k].iter().map(|&i| self.points[i]).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "points": self.points,
            "facets": self.facets,
            "witness": { "heights": self.witness.iter().map(|h| h.to_string()).collect::<Vec<_>>() },
        })
    }

    /// Reads `points` and `witness.heights` and recomputes the cells.
    pub fn from_json(v: &Value) -> Result<Self> {
        let points: Vec<LatticePoint> = serde_json::from_value(
            v.get("points").cloned().ok_or_else(|| Error::Parse("subdivision needs \"points\"".into()))?,
        )
        .map_err(|e| Error::Parse(format!("points: {e}")))?;
        let heights = v
            .get("witness")
            .and_then(|w| w.get("heights"))
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("subdivision needs \"witness\": {\"heights\": [...]}".into()))?
            .iter()
            .map(rational::from_json)
            .collect::<Result<Vec<_>>>()?;
        let s = subdivide(&points, &heights)?;
        if let Some(f) = v.get("facets") {
            let facets: Vec<Vec<usize>> =
                serde_json::from_value(f.clone()).map_err(|e| Error::Parse(format!("facets: {e}")))?;
            let mut facets: Vec<Vec<usize>> = facets
                .into_iter()
                .map(|mut x| {
                    x.sort_unstable();
                    x
                })
                .collect();
            facets.sort();
            if facets != s.facets {
                return Err(Error::InvalidInput("facets do not match the witness heights".into()));
            }
        }
        Ok(s)
    }
}

/// `h(l) − (affine interpolation of h on i, j, k)(l)`, for non-collinear `i, j, k`.
fn height_above(pts: &[LatticePoint], h: &[Q], [i, j, k]: Triangle, l: usize) -> Q {
    let (lam_i, lam_j, lam_k) = barycentric(pts[i], pts[j], pts[k], pts[l]);
    &h[l] - (lam_i * &h[i] + lam_j * &h[j] + lam_k * &h[k])
}

/// Barycentric coordinates of `p` with respect to a non-degenerate triangle.
pub fn barycentric(a: LatticePoint, b: LatticePoint, c: LatticePoint, p: LatticePoint) -> (Q, Q, Q) {
    let d = q(orient(a, b, c));
    let lb = q(orient(a, p, c)) / &d;
    let lc = q(orient(a, b, p)) / &d;
    let la = Q::one() - &lb - &lc;
    (la, lb, lc)
}

fn check_points(points: &[LatticePoint]) -> Result<()> {
    if points.len() < 3 {
        return Err(Error::DegeneratePolygon("fewer than three points".into()));
    }
    let set: BTreeSet<_> = points.iter().collect();
    if set.len() != points.len() {
        return Err(Error::InvalidInput("repeated points".into()));
    }
    LatticePolygon::from_points(points)?;
    Ok(())
}

/// Regular subdivision induced by lower faces of the lifted points.
pub fn subdivide(points: &[LatticePoint], h: &[Q]) -> Result<RegularSubdivision> {
    check_points(points)?;
    if h.len() != points.len() {
        return Err(Error::InvalidInput(format!("{} heights for {} points", h.len(), points.len())));
    }
    let n = points.len();
    let mut cells: BTreeSet<Vec<usize>> = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if orient(points[i], points[j], points[k]) == 0 {
                    continue;
                }
                let mut on = Vec::new();
                let mut lower = true;
                for l in 0..n {
                    let d = height_above(points, h, [i, j, k], l);
                    if d.is_negative() {
                        lower = false;
                        break;
                    }
                    if d.is_zero() {
                        on.push(l);
                    }
                }
                if lower {
                    cells.insert(on);
                }
            }
        }
    }
    Ok(RegularSubdivision { points: points.to_vec(), facets: cells.into_iter().collect(), witness: h.to_vec() })
}

/// Heights that make `tri` regular, or `None` if it is not a regular triangulation.
///
/// Requires a strict fold across every interior edge and every unused point
/// strictly above the triangle containing it.
pub fn regularity_witness(points: &[LatticePoint], tri: &[Triangle]) -> Option<Vec<Q>> {
    let n = points.len();
    let mut sys = System::new(n);
    let mut edge_apex: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for t in tri {
        for (a, b, c) in [(t[0], t[1], t[2]), (t[1], t[2], t[0]), (t[0], t[2], t[1])] {
            edge_apex.entry((a.min(b), a.max(b))).or_default().push(c);
        }
    }
    let row = |t: Triangle, l: usize| -> Vec<Q> {
        let (la, lb, lc) = barycentric(points[t[0]], points[t[1]], points[t[2]], points[l]);
        let mut r = vec![Q::zero(); n];
        r[l] += Q::one();
        r[t[0]] -= la;
        r[t[1]] -= lb;
        r[t[2]] -= lc;
        r
    };
    for (&(a, b), apex) in &edge_apex {
        if apex.len() == 2 {
            sys.add_ge(row([a, b, apex[0]], apex[1]), Q::one());
        }
    }
    let used: BTreeSet<usize> = tri.iter().flatten().copied().collect();
    for p in (0..n).filter(|p| !used.contains(p)) {
        let t = tri.iter().find(|t| {
            let (x, y, z) = (points[t[0]], points[t[1]], points[t[2]]);
            let s = orient(x, y, z).signum();
            [orient(x, y, points[p]), orient(y, z, points[p]), orient(z, x, points[p])]
                .iter()
                .all(|&o| o * s >= 0)
        })?;
        sys.add_ge(row(*t, p), Q::one());
    }
    let h = sys.solve()?;
    let s = subdivide(points, &h).ok()?;
    let mut want: Vec<Vec<usize>> = tri
        .iter()
        .map(|t| {
            let mut v = t.to_vec();
            v.sort_unstable();
            v
        })
        .collect();
    want.sort();
    (s.facets == want).then_some(h)
}

fn normalize(tri: impl IntoIterator<Item = Triangle>) -> BTreeSet<Triangle> {
    tri.into_iter()
        .map(|mut t| {
            t.sort_unstable();
            t
        })
        .collect()
}

/// Between `a` and `b`, strictly.
fn strictly_between(a: LatticePoint, m: LatticePoint, b: LatticePoint) -> bool {
    orient(a, m, b) == 0 && m.sub(a).dot(b.sub(m)) > 0
}

/// All triangulations reachable by one bistellar flip.
pub fn flip_neighbors(points: &[LatticePoint], tri: &BTreeSet<Triangle>) -> Vec<BTreeSet<Triangle>> {
    let n = points.len();
    let mut out = Vec::new();
    let has = |t: Triangle| tri.contains(&normalize([t]).into_iter().next().unwrap());
    let apexes = |a: usize, b: usize| -> Vec<usize> {
        tri.iter()
            .filter(|t| t.contains(&a) && t.contains(&b))
            .map(|t| *t.iter().find(|&&x| x != a && x != b).unwrap())
            .collect()
    };
    // Collinear circuits.
    for a in 0..n {
        for b in a + 1..n {
            for m in 0..n {
                if !strictly_between(points[a], points[m], points[b]) {
                    continue;
                }
                let link = apexes(a, b);
                if !link.is_empty() {
                    let mut t = tri.clone();
                    for &c in &link {
                        t.remove(&normalize([[a, b, c]]).into_iter().next().unwrap());
                        t.extend(normalize([[a, m, c], [m, b, c]]));
                    }
                    out.push(t);
                }
                let mut l1 = apexes(a, m);
                let mut l2 = apexes(m, b);
                l1.sort_unstable();
                l2.sort_unstable();
                let star = tri.iter().filter(|t| t.contains(&m)).count();
                if !l1.is_empty() && l1 == l2 && star == 2 * l1.len() {
                    let mut t = tri.clone();
                    for &c in &l1 {
                        t.remove(&normalize([[a, m, c]]).into_iter().next().unwrap());
                        t.remove(&normalize([[m, b, c]]).into_iter().next().unwrap());
                        t.extend(normalize([[a, b, c]]));
                    }
                    out.push(t);
                }
            }
        }
    }
    // Circuits of four points in general position.
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let z = [a, b, c, d];
                    let collinear = [[a, b, c], [a, b, d], [a, c, d], [b, c, d]]
                        .iter()
                        .any(|t| orient(points[t[0]], points[t[1]], points[t[2]]) == 0);
                    if collinear {
                        continue;
                    }
                    for (plus, minus) in circuit_triangulations(points, z) {
                        if plus.iter().all(|&t| has(t)) {
                            let mut t = tri.clone();
                            for p in normalize(plus.clone()) {
                                t.remove(&p);
                            }
                            t.extend(normalize(minus.clone()));
                            out.push(t);
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// The two triangulations of a 4-point circuit, in both directions.
fn circuit_triangulations(points: &[LatticePoint], z: [usize; 4]) -> Vec<(Vec<Triangle>, Vec<Triangle>)> {
    let pts: Vec<LatticePoint> = z.iter().map(|&i| points[i]).collect();
    let hull = crate::lattice::convex_hull(&pts);
    let idx = |p: LatticePoint| z[pts.iter().position(|&x| x == p).unwrap()];
    let (one, two) = if hull.len() == 4 {
        let h: Vec<usize> = hull.iter().map(|&p| idx(p)).collect();
        (vec![[h[0], h[1], h[2]], [h[0], h[2], h[3]]], vec![[h[0], h[1], h[3]], [h[1], h[2], h[3]]])
    } else {
        let h: Vec<usize> = hull.iter().map(|&p| idx(p)).collect();
        let inner = *z.iter().find(|i| !h.contains(i)).unwrap();
        (
            vec![[h[0], h[1], inner], [h[1], h[2], inner], [h[2], h[0], inner]],
            vec![[h[0], h[1], h[2]]],
        )
    };
    vec![(one.clone(), two.clone()), (two, one)]
}

/// A regular triangulation from lexicographic placing heights.
fn initial_triangulation(points: &[LatticePoint]) -> Result<RegularSubdivision> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by_key(|&i| points[i]);
    let mut h = vec![Q::zero(); points.len()];
    let mut w = Q::one();
    for &i in &order {
        h[i] = w.clone();
        w *= q(1000);
    }
    let s = subdivide(points, &h)?;
    if s.is_triangulation() {
        return Ok(s);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ec);
    for _ in 0..64 {
        let h: Vec<Q> = (0..points.len()).map(|_| q(rng.gen_range(0..1_000_000))).collect();
        let s = subdivide(points, &h)?;
        if s.is_triangulation() {
            return Ok(s);
        }
    }
    Err(Error::Numeric("no generic height found".into()))
}

/// All regular triangulations, by breadth-first search over regular flips.
pub fn enumerate_regular_triangulations(points: &[LatticePoint]) -> Result<Vec<RegularSubdivision>> {
    check_points(points)?;
    if points.len() > MAX_POINTS {
        return Err(Error::CapExceeded(format!("{} points, cap is {MAX_POINTS}", points.len())));
    }
    let start = initial_triangulation(points)?;
    let key = |s: &RegularSubdivision| normalize(s.triangles().unwrap());
    let mut seen: BTreeMap<BTreeSet<Triangle>, Option<RegularSubdivision>> = BTreeMap::new();
    let mut queue = VecDeque::new();
    seen.insert(key(&start), Some(start.clone()));
    queue.push_back(key(&start));
    while let Some(t) = queue.pop_front() {
        for nb in flip_neighbors(points, &t) {
            if seen.contains_key(&nb) {
                continue;
            }
            let tris: Vec<Triangle> = nb.iter().copied().collect();
            let found = regularity_witness(points, &tris).map(|h| RegularSubdivision {
                points: points.to_vec(),
                facets: tris.iter().map(|t| t.to_vec()).collect(),
                witness: h,
            });
            if found.is_some() {
                queue.push_back(nb.clone());
            }
            seen.insert(nb, found);
        }
    }
    Ok(seen.into_values().flatten().collect())
}

/// `φ_T(v)` = total normalized area of the triangles of `T` containing `v`.
pub fn gkz_vector(points: &[LatticePoint], tri: &[Triangle]) -> Result<Vec<i64>> {
    let hull = LatticePolygon::from_points(points)?;
    let mut phi = vec![0i64; points.len()];
    let mut total = 0;
    for t in tri {
        let a = orient(points[t[0]], points[t[1]], points[t[2]]).abs();
        if a == 0 {
            return Err(Error::InvalidInput(format!("triangle {t:?} is degenerate")));
        }
        total += a;
        for &v in t {
            phi[v] += a;
        }
    }
    if total != hull.twice_area() {
        return Err(Error::InvalidInput("triangles do not cover the hull".into()));
    }
    for (x, t1) in tri.iter().enumerate() {
        for t2 in &tri[x + 1..] {
            if interiors_overlap(points, t1, t2) {
                return Err(Error::InvalidInput(format!("triangles {t1:?} and {t2:?} overlap")));
            }
        }
    }
    Ok(phi)
}

fn interiors_overlap(points: &[LatticePoint], t1: &Triangle, t2: &Triangle) -> bool {
    // Separating-axis test over the edges of both triangles.
    let p1: Vec<LatticePoint> = t1.iter().map(|&i| points[i]).collect();
    let p2: Vec<LatticePoint> = t2.iter().map(|&i| points[i]).collect();
    for (poly, other) in [(&p1, &p2), (&p2, &p1)] {
        let s = orient(poly[0], poly[1], poly[2]).signum();
        for e in 0..3 {
            let (a, b) = (poly[e], poly[(e + 1) % 3]);
            if other.iter().all(|&p| orient(a, b, p) * s <= 0) {
                return false;
            }
        }
    }
    true
}

/// Dimension of the cone of heights inducing `s`, modulo affine functions.
pub fn cone_dim(s: &RegularSubdivision) -> usize {
    let n = s.points.len();
    let used = s.used();
    let mut rows: linalg::Matrix = Vec::new();
    for f in &s.facets {
        let basis = affine_basis(&s.points, f);
        for &p in f.iter().filter(|p| !basis.contains(p)) {
            let (la, lb, lc) =
                barycentric(s.points[basis[0]], s.points[basis[1]], s.points[basis[2]], s.points[p]);
            let mut r = vec![Q::zero(); n];
            r[p] = Q::one();
            r[basis[0]] -= la;
            r[basis[1]] -= lb;
            r[basis[2]] -= lc;
            rows.push(r);
        }
    }
    let rank = if rows.is_empty() { 0 } else { linalg::rank(&rows) };
    used.len() - rank + (n - used.len()) - 3
}

/// Three affinely independent members of a cell.
pub fn affine_basis(points: &[LatticePoint], cell: &[usize]) -> [usize; 3] {
    for (x, &i) in cell.iter().enumerate() {
        for (y, &j) in cell.iter().enumerate().skip(x + 1) {
            for &k in &cell[y + 1..] {
                if orient(points[i], points[j], points[k]) != 0 {
                    return [i, j, k];
                }
            }
        }
    }
    unreachable!("cells are two-dimensional")
}

/// A face of the secondary polytope.
#[derive(Debug, Clone)]
pub struct Face {
    /// Indices into [`SecondaryComplex::triangulations`].
    pub vertices: Vec<usize>,
    pub dim: usize,
    pub subdivision: RegularSubdivision,
}

#[derive(Debug, Clone)]
pub struct SecondaryComplex {
    pub points: Vec<LatticePoint>,
    pub triangulations: Vec<RegularSubdivision>,
    pub gkz: Vec<Vec<i64>>,
    /// Sorted by dimension, then vertex set.
    pub faces: Vec<Face>,
    /// `(lower, upper)` face indices with `dim(upper) = dim(lower) + 1`.
    pub covers: Vec<(usize, usize)>,
}

impl SecondaryComplex {
    pub fn dimension(&self) -> usize {
        self.faces.iter().map(|f| f.dim).max().unwrap_or(0)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let d = self.dimension();
        (0..=d).map(|k| self.faces.iter().filter(|f| f.dim == k).count()).collect()
    }

    pub fn to_json(&self) -> Value {
        let faces: Vec<Value> = self
            .faces
            .iter()
            .map(|f| {
                json!({
                    "dim": f.dim,
                    "vertices": f.vertices,
                    "subdivision": f.subdivision.to_json(),
                })
            })
            .collect();
        json!({
            "points": self.points,
            "dimension": self.dimension(),
            "f_vector": self.f_vector(),
            "gkz": self.gkz,
            "faces": faces,
            "covers": self.covers,
        })
    }
}

/// Smallest face containing `set`: the vertices no supporting functional of
/// `set` can separate. Each feasible solve separates at least one more vertex.
fn face_closure(gkz: &[Vec<i64>], set: &[usize]) -> Vec<usize> {
    let n = gkz[0].len();
    let row = |v: &[i64]| -> Vec<Q> {
        let mut r: Vec<Q> = v.iter().map(|&x| q(x)).collect();
        r.push(-Q::one());
        r
    };
    let mut open: Vec<usize> = (0..gkz.len()).filter(|t| !set.contains(t)).collect();
    while !open.is_empty() {
        let mut sys = System::new(n + 1);
        for &s in set {
            sys.add_eq(row(&gkz[s]), Q::zero());
        }
        let mut total = vec![Q::zero(); n + 1];
        for (t, g) in gkz.iter().enumerate().filter(|(t, _)| !set.contains(t)) {
            let r = row(g);
            if open.contains(&t) {
                for (a, b) in total.iter_mut().zip(&r) {
                    *a += b;
                }
            }
            sys.add_ge(r, Q::zero());
        }
        sys.add_ge(total, Q::one());
        let Some(h) = sys.solve() else { break };
        open.retain(|&t| row(&gkz[t]).iter().zip(&h).map(|(a, b)| a * b).sum::<Q>().is_zero());
    }
    let mut out: Vec<usize> = set.iter().copied().chain(open).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Heights in the relative interior of the normal cone of a face.
fn face_heights(gkz: &[Vec<i64>], face: &[usize]) -> Vec<Q> {
    let n = gkz[0].len();
    let mut sys = System::new(n + 1);
    for (t, g) in gkz.iter().enumerate() {
        let mut r: Vec<Q> = g.iter().map(|&x| q(x)).collect();
        r.push(-Q::one());
        if face.contains(&t) {
            sys.add_eq(r, Q::zero());
        } else {
            sys.add_ge(r, Q::one());
        }
    }
    let mut h = sys.solve().expect("faces have supporting functionals");
    h.pop();
    h
}

fn face_dim(gkz: &[Vec<i64>], vs: &[usize]) -> usize {
    let pts: Vec<Vec<Q>> = vs.iter().map(|&v| gkz[v].iter().map(|&x| q(x)).collect()).collect();
    linalg::affine_rank(&pts)
}

pub fn secondary_complex(points: &[LatticePoint]) -> Result<SecondaryComplex> {
    let tris = enumerate_regular_triangulations(points)?;
    let gkz: Vec<Vec<i64>> = tris
        .iter()
        .map(|t| gkz_vector(points, &t.triangles().unwrap()))
        .collect::<Result<_>>()?;
    // Edges of the secondary polytope are the flips between regular
    // triangulations; a face grows by a flip neighbour of one of its vertices.
    let index: BTreeMap<BTreeSet<Triangle>, usize> =
        tris.iter().enumerate().map(|(i, t)| (normalize(t.triangles().unwrap()), i)).collect();
    let adjacent: Vec<BTreeSet<usize>> = tris
        .iter()
        .map(|t| {
            flip_neighbors(points, &normalize(t.triangles().unwrap()))
                .iter()
                .filter_map(|nb| index.get(nb).copied())
                .collect()
        })
        .collect();
    let mut faces: BTreeSet<Vec<usize>> = (0..tris.len()).map(|v| vec![v]).collect();
    let mut queue: VecDeque<Vec<usize>> = faces.iter().cloned().collect();
    while let Some(f) = queue.pop_front() {
        let candidates: BTreeSet<usize> = f.iter().flat_map(|&v| adjacent[v].iter().copied()).collect();
        // A vertex inside a cover of `f` already found yields that same cover.
        let mut covered: BTreeSet<usize> = f.iter().copied().collect();
        let dim = face_dim(&gkz, &f);
        for w in candidates {
            if covered.contains(&w) {
                continue;
            }
            let mut g = f.clone();
            g.push(w);
            let c = face_closure(&gkz, &g);
            if face_dim(&gkz, &c) == dim + 1 {
                covered.extend(c.iter().copied());
            }
            if faces.insert(c.clone()) {
                queue.push_back(c);
            }
        }
    }
    let mut out: Vec<Face> = faces
        .into_iter()
        .map(|vs| {
            let dim = face_dim(&gkz, &vs);
            let h = face_heights(&gkz, &vs);
            let subdivision = subdivide(points, &h).expect("valid point set");
            Face { vertices: vs, dim, subdivision }
        })
        .collect();
    out.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));
    let mut covers = Vec::new();
    for (i, lo) in out.iter().enumerate() {
        for (j, hi) in out.iter().enumerate() {
            if hi.dim == lo.dim + 1 && lo.vertices.iter().all(|v| hi.vertices.contains(v)) {
                covers.push((i, j));
            }
        }
    }
    Ok(SecondaryComplex { points: points.to_vec(), triangulations: tris, gkz, faces: out, covers })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cross() -> Vec<LatticePoint> {
        LatticePolygon::cross_polytope().lattice_points()
    }

    fn idx(points: &[LatticePoint], x: i64, y: i64) -> usize {
        points.iter().position(|&p| p == LatticePoint::new(x, y)).unwrap()
    }

    #[test]
    fn trivial_star_and_center_above() {
        let p = cross();
        let c = idx(&p, 0, 0);
        let zero = vec![Q::zero(); 5];
        assert_eq!(subdivide(&p, &zero).unwrap().facets, vec![vec![0, 1, 2, 3, 4]]);
        let mut h = zero.clone();
        h[c] = q(-1);
        let star = subdivide(&p, &h).unwrap();
        assert_eq!(star.facets.len(), 4);
        assert!(star.facets.iter().all(|f| f.contains(&c)));
        h[c] = q(1);
        let above = subdivide(&p, &h).unwrap();
        // The four corners are coplanar at height 0, so they form one cell.
        assert_eq!(above.facets.len(), 1);
        assert_eq!(above.unused(), vec![c]);
    }

    #[test]
    fn diagonal_subdivision_uses_center() {
        let p = cross();
        let mut h = vec![Q::zero(); 5];
        h[idx(&p, 0, 1)] = q(1);
        h[idx(&p, 0, -1)] = q(1);
        let s = subdivide(&p, &h).unwrap();
        assert_eq!(s.facets.len(), 2);
        assert!(s.is_full());
        assert_eq!(cone_dim(&s), 1);
    }

    #[test]
    fn collinear_points_rejected() {
        let p: Vec<_> = (0..3).map(|i| LatticePoint::new(i, i)).collect();
        assert!(subdivide(&p, &[Q::zero(), Q::zero(), Q::zero()]).is_err());
    }

    #[test]
    fn triangulation_counts() {
        let tri = LatticePolygon::unit_triangle().lattice_points();
        assert_eq!(enumerate_regular_triangulations(&tri).unwrap().len(), 1);
        let sq = LatticePolygon::unit_square().lattice_points();
        assert_eq!(enumerate_regular_triangulations(&sq).unwrap().len(), 2);
        assert_eq!(enumerate_regular_triangulations(&cross()).unwrap().len(), 3);
        // Two-dilated triangle: 14 triangulations, all regular.
        let t2 = LatticePolygon::dilated_triangle(2).unwrap().lattice_points();
        assert_eq!(enumerate_regular_triangulations(&t2).unwrap().len(), 14);
    }

    #[test]
    fn cap_is_enforced() {
        let big = LatticePolygon::dilated_triangle(4).unwrap().lattice_points();
        assert!(matches!(enumerate_regular_triangulations(&big), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn gkz_of_star_and_square() {
        let p = cross();
        let c = idx(&p, 0, 0);
        let mut h = vec![Q::zero(); 5];
        h[c] = q(-1);
        let star = subdivide(&p, &h).unwrap();
        let phi = gkz_vector(&p, &star.triangles().unwrap()).unwrap();
        assert_eq!(phi[c], 4);
        assert_eq!(phi.iter().sum::<i64>(), 12);
        let sq = LatticePolygon::unit_square().lattice_points();
        let diag = [[0, 1, 3], [0, 2, 3]];
        let phi = gkz_vector(&sq, &diag).unwrap();
        assert_eq!(phi, vec![2, 1, 1, 2]);
        assert!(gkz_vector(&sq, &[[0, 1, 3]]).is_err());
        assert!(gkz_vector(&sq, &[[0, 1, 3], [0, 1, 2], [0, 2, 3]]).is_err());
    }

    #[test]
    fn cross_polytope_secondary_is_a_triangle() {
        let sc = secondary_complex(&cross()).unwrap();
        assert_eq!(sc.f_vector(), vec![3, 3, 1]);
        assert_eq!(sc.faces.len(), 7);
    }

    #[test]
    fn square_secondary_is_a_segment() {
        let sc = secondary_complex(&LatticePolygon::unit_square().lattice_points()).unwrap();
        assert_eq!(sc.f_vector(), vec![2, 1]);
    }
}
