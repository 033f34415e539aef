//! Harnack meshes: one Harnack curve per cell of a regular subdivision,
//! agreeing on shared sides, and their patchworks.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::amoeba::{default_window, harnack_area_check, spine_heights, AreaCheck, DEFAULT_PAD};
use crate::error::{Error, Result};
use crate::harnack::{implicitize, sample_harnack};
use crate::lattice::{orient, LatticePoint, LatticePolygon};
use crate::poly::{LaurentPolynomial, RationalPolynomial};
use crate::rational::{self, Q};
use crate::roots::roots;
use crate::secondary::{cone_dim, subdivide, RegularSubdivision};
use crate::tropical::{corner_locus, heights_from_f64, AbstractTropicalCurve, GraphEdge, ModuliPoint, PlaneTropicalCurve};

/// Successive length changes must at least halve, up to this absolute slack.
pub const CONVERGENCE_SLACK: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq)]
pub struct HarnackMesh {
    pub subdivision: RegularSubdivision,
    /// One curve per facet, in the order of `subdivision.facets`.
    pub curves: Vec<LaurentPolynomial>,
}

fn facet_polygon(s: &RegularSubdivision, k: usize) -> Result<LatticePolygon> {
    LatticePolygon::from_points(&s.facet_points(k))
}

impl HarnackMesh {
    /// Each curve must have the convex hull of its facet as Newton polygon.
    pub fn new(subdivision: RegularSubdivision, curves: Vec<LaurentPolynomial>) -> Result<Self> {
        if curves.len() != subdivision.facets.len() {
            return Err(Error::InvalidInput(format!(
                "{} curves for {} facets",
                curves.len(),
                subdivision.facets.len()
            )));
        }
        for (k, f) in curves.iter().enumerate() {
            let cell = facet_polygon(&subdivision, k)?;
            if f.newton_polygon()? != cell {
                return Err(Error::InvalidInput(format!("curve {k} does not have facet {k} as Newton polygon")));
            }
        }
        Ok(HarnackMesh { subdivision, curves })
    }

    pub fn polygon(&self) -> Result<LatticePolygon> {
        LatticePolygon::from_points(&self.subdivision.points)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "subdivision": self.subdivision.to_json(),
            "curves": self.curves.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let s = RegularSubdivision::from_json(
            v.get("subdivision").ok_or_else(|| Error::Parse("mesh needs \"subdivision\"".into()))?,
        )?;
        let curves = v
            .get("curves")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("mesh needs \"curves\": [...]".into()))?
            .iter()
            .map(LaurentPolynomial::from_json)
            .collect::<Result<Vec<_>>>()?;
        Self::new(s, curves)
    }

    /// Coefficient at every used point, taken from the first facet containing it.
    pub fn coefficients(&self) -> BTreeMap<LatticePoint, f64> {
        let mut out = BTreeMap::new();
        for (k, f) in self.subdivision.facets.iter().enumerate() {
            for &i in f {
                let v = self.subdivision.points[i];
                out.entry(v).or_insert_with(|| self.curves[k].coeff(v));
            }
        }
        out
    }

    /// First lattice point where two facet curves sharing it disagree.
    pub fn disagreement(&self) -> Result<Option<Disagreement>> {
        let cells: Vec<LatticePolygon> =
            (0..self.curves.len()).map(|k| facet_polygon(&self.subdivision, k)).collect::<Result<_>>()?;
        for &v in &self.subdivision.points {
            let holders: Vec<usize> = (0..cells.len()).filter(|&k| cells[k].contains(v)).collect();
            for (x, &i) in holders.iter().enumerate() {
                for &j in &holders[x + 1..] {
                    let (a, b) = (self.curves[i].coeff(v), self.curves[j].coeff(v));
                    if a != b {
                        return Ok(Some(Disagreement { point: v, facets: (i, j), values: (a, b) }));
                    }
                }
            }
        }
        Ok(None)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Disagreement {
    pub point: LatticePoint,
    pub facets: (usize, usize),
    pub values: (f64, f64),
}

impl Disagreement {
    pub fn to_error(&self) -> Error {
        Error::MeshDisagreement(
            self.point.x,
            self.point.y,
            format!(
                "facet {} has {} and facet {} has {}",
                self.facets.0, self.values.0, self.facets.1, self.values.1
            ),
        )
    }
}

/// Pairs of facets sharing a side, with the lattice points on that side in order.
fn shared_sides(s: &RegularSubdivision) -> Vec<(usize, usize, Vec<LatticePoint>)> {
    let mut out = Vec::new();
    for i in 0..s.facets.len() {
        for j in i + 1..s.facets.len() {
            let common: Vec<LatticePoint> =
                s.facets[i].iter().filter(|p| s.facets[j].contains(p)).map(|&p| s.points[p]).collect();
            if common.len() >= 2 {
                let mut pts = common;
                pts.sort();
                out.push((i, j, pts));
            }
        }
    }
    out
}

/// Log-distances between consecutive tentacles along a side.
fn tentacle_gaps(f: &LaurentPolynomial, side: &[LatticePoint]) -> Result<Vec<f64>> {
    let coeffs: Vec<num::complex::Complex64> =
        side.iter().map(|&v| num::complex::Complex64::new(f.coeff(v), 0.0)).collect();
    let mut logs: Vec<f64> = roots(&coeffs, None)?.iter().map(|r| r.norm().ln()).collect();
    logs.sort_by(f64::total_cmp);
    Ok(logs.windows(2).map(|w| w[1] - w[0]).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct FacetReport {
    pub area: AreaCheck,
    /// Lattice points of the facet hull without a complement component.
    pub missing: Vec<LatticePoint>,
    /// Hull points outside the facet, which must be exactly the missing ones.
    pub expected_missing: Vec<LatticePoint>,
}

impl FacetReport {
    pub fn pass(&self) -> bool {
        self.area.pass && self.missing == self.expected_missing
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeshReport {
    pub disagreement: Option<Disagreement>,
    pub facets: Vec<FacetReport>,
    /// Largest difference of tentacle spacing across a shared side.
    pub tentacle_mismatch: f64,
}

impl MeshReport {
    pub fn valid(&self) -> bool {
        self.disagreement.is_none() && self.facets.iter().all(FacetReport::pass)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "valid": self.valid(),
            "disagreement": self.disagreement.as_ref().map(|d| json!({
                "point": d.point,
                "facets": [d.facets.0, d.facets.1],
                "values": [d.values.0, d.values.1],
            })),
            "facets": self.facets.iter().map(|f| json!({
                "pass": f.pass(),
                "area": f.area.to_json(),
                "missing": f.missing,
                "expected_missing": f.expected_missing,
            })).collect::<Vec<_>>(),
            "tentacle_mismatch": self.tentacle_mismatch,
        })
    }
}

/// Checks coefficient agreement on shared points, then every facet curve
/// by area and by which complement components it has.
pub fn mesh_validate(m: &HarnackMesh, res: usize, phases: usize, tol: f64) -> Result<MeshReport> {
    let disagreement = m.disagreement()?;
    let mut facets = Vec::new();
    for (k, f) in m.curves.iter().enumerate() {
        let window = default_window(f, DEFAULT_PAD)?;
        let area = harnack_area_check(f, window, res, phases, tol)?;
        let sh = spine_heights(f, window, res, phases)?;
        let cell: BTreeSet<LatticePoint> = m.subdivision.facet_points(k).into_iter().collect();
        let expected_missing =
            facet_polygon(&m.subdivision, k)?.lattice_points().into_iter().filter(|v| !cell.contains(v)).collect();
        facets.push(FacetReport { area, missing: sh.missing, expected_missing });
    }
    let mut tentacle_mismatch: f64 = 0.0;
    for (i, j, side) in shared_sides(&m.subdivision) {
        let (a, b) = (tentacle_gaps(&m.curves[i], &side)?, tentacle_gaps(&m.curves[j], &side)?);
        for (x, y) in a.iter().zip(&b) {
            tentacle_mismatch = tentacle_mismatch.max((x - y).abs());
        }
    }
    Ok(MeshReport { disagreement, facets, tentacle_mismatch })
}

/// `s, t` with `a·s + b·t = gcd(a, b)`.
fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.signum(), 0, a.abs())
    } else {
        let (s, t, g) = egcd(b, a.rem_euclid(b));
        (t, s - a.div_euclid(b) * t, g)
    }
}

/// Assembles a mesh from exact facet curves, rescaling each by a constant
/// and a torus action so it agrees with facets already placed.
pub fn build_mesh(s: RegularSubdivision, mut polys: Vec<RationalPolynomial>) -> Result<HarnackMesh> {
    let nf = s.facets.len();
    if polys.len() != nf {
        return Err(Error::InvalidInput(format!("{} curves for {nf} facets", polys.len())));
    }
    let sides = shared_sides(&s);
    let mut table: BTreeMap<LatticePoint, Q> = BTreeMap::new();
    let mut placed = vec![false; nf];
    let mut queue = VecDeque::from([(0usize, None::<Vec<LatticePoint>>)]);
    while let Some((k, side)) = queue.pop_front() {
        if placed[k] {
            continue;
        }
        let cell = facet_polygon(&s, k)?;
        if let Some(side) = side {
            let (p, e) = (side[0], side[1].sub(side[0]));
            let (ap, ae) = (polys[k].coeff(p), polys[k].coeff(side[1]));
            if ap.is_zero() || ae.is_zero() {
                return Err(Error::InvalidInput(format!("curve {k} vanishes on a shared side")));
            }
            let lambda = &table[&p] / ap;
            let mu = (&table[&side[1]] / ae) / &lambda;
            // f with e.x·f.y − e.y·f.x = 1, so v − p = α·e + β·f with α = (v − p) ∧ f.
            let (sx, ty, _) = egcd(e.x, -e.y);
            let f = LatticePoint::new(ty, sx);
            let scaled = RationalPolynomial::from_terms(polys[k].terms().map(|(v, c)| {
                let alpha = v.sub(p).wedge(f) as i32;
                let w = if alpha >= 0 { num::pow::pow(mu.clone(), alpha as usize) } else {
                    num::pow::pow(mu.recip(), (-alpha) as usize)
                };
                (*v, c * &lambda * w)
            }));
            polys[k] = scaled;
        }
        for v in cell.lattice_points() {
            let c = polys[k].coeff(v);
            match table.get(&v) {
                Some(t) if *t != c => {
                    return Err(Error::MeshDisagreement(v.x, v.y, format!("facet {k} cannot be rescaled to agree")))
                }
                Some(_) => {}
                None => {
                    table.insert(v, c);
                }
            }
        }
        placed[k] = true;
        for (i, j, pts) in &sides {
            let other = if *i == k { *j } else if *j == k { *i } else { continue };
            if !placed[other] {
                queue.push_back((other, Some(pts.clone())));
            }
        }
    }
    if placed.contains(&false) {
        return Err(Error::InvalidInput("facets are not connected through shared sides".into()));
    }
    HarnackMesh::new(s, polys.iter().map(RationalPolynomial::to_laurent).collect())
}

/// Mesh whose facet curves are the restrictions of one coefficient table.
pub fn mesh_from_coefficients(s: RegularSubdivision, coeffs: &BTreeMap<LatticePoint, f64>) -> Result<HarnackMesh> {
    let curves = (0..s.facets.len())
        .map(|k| {
            LaurentPolynomial::from_terms(
                s.facet_points(k).into_iter().map(|v| (v, coeffs.get(&v).copied().unwrap_or(0.0))),
            )
        })
        .collect();
    HarnackMesh::new(s, curves)
}

/// `f_t = Σ t^{h(v)} a_v x^v` with the witness heights of the subdivision.
pub fn patchwork(m: &HarnackMesh, t: f64) -> Result<LaurentPolynomial> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(format!("patchwork parameter must be positive, got {t}")));
    }
    let s = &m.subdivision;
    let h: Vec<f64> = s.witness.iter().map(rational::to_f64).collect();
    let used = s.used();
    let h0 = used.iter().map(|&i| h[i]).fold(f64::INFINITY, f64::min);
    let coeffs = m.coefficients();
    Ok(LaurentPolynomial::from_terms(
        used.iter().map(|&i| (s.points[i], t.powf(h[i] - h0) * coeffs[&s.points[i]])),
    ))
}

/// The Harnack sign distribution `(−1)^{v₁v₂}` on a unimodular triangulation.
pub fn harnack_signs(s: &RegularSubdivision) -> Result<BTreeMap<LatticePoint, f64>> {
    for f in &s.facets {
        if f.len() != 3 || orient(s.points[f[0]], s.points[f[1]], s.points[f[2]]).abs() != 1 {
            return Err(Error::InvalidInput("harnack signs need a unimodular triangulation".into()));
        }
    }
    Ok(s.points.iter().map(|v| (*v, if (v.x * v.y).rem_euclid(2) == 0 { 1.0 } else { -1.0 })).collect())
}

/// Mesh of lines on a unimodular triangulation with the Harnack signs.
pub fn t_curve_mesh(s: RegularSubdivision) -> Result<HarnackMesh> {
    let signs = harnack_signs(&s)?;
    mesh_from_coefficients(s, &signs)
}

/// Lattice points of the cross polytope, subdivided by its horizontal diagonal.
pub fn cross_diagonal_subdivision() -> Result<RegularSubdivision> {
    let points = LatticePolygon::cross_polytope().lattice_points();
    let h: Vec<Q> = points.iter().map(|v| if v.y != 0 { Q::one() } else { Q::zero() }).collect();
    subdivide(&points, &h)
}

/// Two-triangle mesh on the cross polytope: a sampled rational curve on the
/// upper triangle and its reflection `w ↦ c/w` on the lower one.
pub fn cross_diagonal_mesh(seed: u64, c: &Q) -> Result<HarnackMesh> {
    if !c.is_positive() {
        return Err(Error::InvalidInput("reflection scale must be positive".into()));
    }
    let s = cross_diagonal_subdivision()?;
    let upper = LatticePolygon::from_coords(&[(-1, 0), (1, 0), (0, 1)])?;
    let f = implicitize(&sample_harnack(&upper, seed))?;
    let g = RationalPolynomial::from_terms(
        f.terms().map(|(v, a)| (LatticePoint::new(v.x, -v.y), a * num::pow::pow(c.clone(), v.y as usize))),
    );
    let polys = (0..s.facets.len())
        .map(|k| if s.facet_points(k).iter().any(|v| v.y > 0) { f.clone() } else { g.clone() })
        .collect();
    build_mesh(s, polys)
}

/// Star triangulation of the cross polytope with all-positive lines and
/// centre coefficient `centre`.
pub fn cross_star_mesh(centre: f64) -> Result<HarnackMesh> {
    let points = LatticePolygon::cross_polytope().lattice_points();
    let h: Vec<Q> = points.iter().map(|v| if *v == LatticePoint::new(0, 0) { -Q::one() } else { Q::zero() }).collect();
    let s = subdivide(&points, &h)?;
    let coeffs = points.iter().map(|v| (*v, if *v == LatticePoint::new(0, 0) { centre } else { 1.0 })).collect();
    mesh_from_coefficients(s, &coeffs)
}

/// Spine of a facet curve as a plane tropical curve.
pub fn facet_spine(f: &LaurentPolynomial, res: usize, phases: usize) -> Result<PlaneTropicalCurve> {
    let sh = spine_heights(f, default_window(f, DEFAULT_PAD)?, res, phases)?;
    corner_locus(&heights_from_f64(&sh.heights)?)
}

/// The glued spine `Υ_S`, with the dual segment of every edge.
#[derive(Debug, Clone)]
pub struct MeshSpine {
    pub curve: AbstractTropicalCurve,
    /// Per edge of `curve`: the dual segment, whose glued edges have infinite length.
    pub duals: Vec<(LatticePoint, LatticePoint)>,
    pub facets: Vec<PlaneTropicalCurve>,
}

impl MeshSpine {
    pub fn moduli_point(&self) -> ModuliPoint {
        self.curve.moduli_point()
    }

    pub fn finite_edges(&self) -> impl Iterator<Item = (usize, &GraphEdge)> {
        self.curve.edges.iter().enumerate().filter(|(_, e)| e.len.is_finite())
    }

    pub fn glued_edges(&self) -> impl Iterator<Item = (usize, &GraphEdge)> {
        self.curve.edges.iter().enumerate().filter(|(_, e)| e.len.is_infinite())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "curve": self.curve.to_json(),
            "duals": self.duals.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
            "genus": self.curve.genus(),
            "legs": self.curve.legs.len(),
        })
    }
}

/// Glues facet spines: legs on a shared unit segment become one edge of
/// infinite length, the rest are labelled by the boundary segments of the polygon.
pub fn upsilon_s(m: &HarnackMesh, res: usize, phases: usize) -> Result<MeshSpine> {
    let outer = m.polygon()?.boundary_points();
    let nb = outer.len();
    let mut weights = Vec::new();
    let mut edges = Vec::new();
    let mut duals = Vec::new();
    let mut legs = vec![usize::MAX; nb];
    let mut inner: BTreeMap<(LatticePoint, LatticePoint), Vec<usize>> = BTreeMap::new();
    let mut facets = Vec::new();
    for f in &m.curves {
        let pc = facet_spine(f, res, phases)?;
        let off = weights.len();
        weights.extend(std::iter::repeat_n(0, pc.vertices.len()));
        for e in &pc.edges {
            edges.push(GraphEdge { u: off + e.a, v: off + e.b, len: rational::to_f64(&e.length) });
            duals.push(e.dual);
        }
        let bd = f.newton_polygon()?.boundary_points();
        for r in &pc.rays {
            for &l in &r.labels {
                let (a, b) = (bd[l], bd[(l + 1) % bd.len()]);
                let glob = (0..nb).find(|&i| outer[i] == a && outer[(i + 1) % nb] == b);
                match glob {
                    Some(i) => legs[i] = off + r.v,
                    None => inner.entry((a.min(b), a.max(b))).or_default().push(off + r.v),
                }
            }
        }
        facets.push(pc);
    }
    for (seg, ends) in inner {
        match ends.as_slice() {
            [u, v] => {
                edges.push(GraphEdge { u: *u, v: *v, len: f64::INFINITY });
                duals.push(seg);
            }
            _ => return Err(Error::Numeric(format!("segment {}–{} is not shared by two legs", seg.0, seg.1))),
        }
    }
    if legs.contains(&usize::MAX) {
        return Err(Error::Numeric("boundary segment without a leg".into()));
    }
    Ok(MeshSpine { curve: AbstractTropicalCurve::new(weights, edges, legs)?, duals, facets })
}

#[derive(Debug, Clone)]
pub struct LimitRow {
    pub t: f64,
    /// Lengths of the edges dual to the finite edges of `Υ_S`, in its order;
    /// `None` where the spine at this `t` has no such edge.
    pub finite: Vec<Option<f64>>,
    /// Lengths of the edges dual to the glued segments.
    pub glued: Vec<Option<f64>>,
    pub area: AreaCheck,
}

#[derive(Debug, Clone)]
pub struct LimitReport {
    pub limit: MeshSpine,
    pub rows: Vec<LimitRow>,
}

impl LimitReport {
    fn column(&self, pick: impl Fn(&LimitRow) -> &Vec<Option<f64>>, k: usize) -> Option<Vec<f64>> {
        self.rows.iter().map(|r| pick(r)[k]).collect()
    }

    /// Each successive change of every finite length is at most half the previous one.
    pub fn finite_converge(&self) -> bool {
        let n = self.rows.first().map_or(0, |r| r.finite.len());
        (0..n).all(|k| {
            let Some(col) = self.column(|r| &r.finite, k) else { return false };
            let d: Vec<f64> = col.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
            d.windows(2).all(|w| w[1] <= 0.5 * w[0] + CONVERGENCE_SLACK)
        })
    }

    /// Glued lengths grow at least linearly in `|log t|`: every increment per
    /// unit of `log(1/t)` is positive and at least half the first one.
    pub fn glued_diverge(&self) -> bool {
        let n = self.rows.first().map_or(0, |r| r.glued.len());
        n > 0
            && (0..n).all(|k| {
                let Some(col) = self.column(|r| &r.glued, k) else { return false };
                let slopes: Vec<f64> = col
                    .windows(2)
                    .zip(self.rows.windows(2))
                    .map(|(l, r)| (l[1] - l[0]) / (r[0].t / r[1].t).ln())
                    .collect();
                !slopes.is_empty() && slopes[0] > 0.0 && slopes.iter().all(|s| *s >= 0.5 * slopes[0])
            })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "limit": self.limit.to_json(),
            "rows": self.rows.iter().map(|r| json!({
                "t": r.t, "finite": r.finite, "glued": r.glued, "area": r.area.to_json(),
            })).collect::<Vec<_>>(),
            "finite_converge": self.finite_converge(),
            "glued_diverge": self.glued_diverge(),
        })
    }
}

/// Spines of the patchworks `f_t` against the glued facet spines.
pub fn spine_limit_check(m: &HarnackMesh, ts: &[f64], res: usize, phases: usize, tol: f64) -> Result<LimitReport> {
    if !m.subdivision.is_full() {
        return Err(Error::InvalidInput("spine limits need a full subdivision".into()));
    }
    let mut ts = ts.to_vec();
    ts.sort_by(|a, b| b.total_cmp(a));
    let limit = upsilon_s(m, res, phases)?;
    let mut rows = Vec::new();
    for &t in &ts {
        let f = patchwork(m, t)?;
        let window = default_window(&f, DEFAULT_PAD)?;
        let area = harnack_area_check(&f, window, res, phases, tol)?;
        let sh = spine_heights(&f, window, res, phases)?;
        let pc = corner_locus(&heights_from_f64(&sh.heights)?)?;
        let length = |k: usize| {
            let (a, b) = limit.duals[k];
            pc.edge_dual_to(a, b).map(|e| rational::to_f64(&e.length))
        };
        let finite = limit.finite_edges().map(|(k, _)| length(k)).collect();
        let glued = limit.glued_edges().map(|(k, _)| length(k)).collect();
        rows.push(LimitRow { t, finite, glued, area });
    }
    Ok(LimitReport { limit, rows })
}

/// `n + g − 3 − dim σ(S)`.
pub fn cell_dimension(s: &RegularSubdivision) -> Result<i64> {
    let poly = LatticePolygon::from_points(&s.points)?;
    let ng = poly.boundary_count() + poly.interior_count();
    Ok(ng - 3 - cone_dim(s) as i64)
}

/// Counts free parameters facet by facet: heights on the first facet are
/// fixed, a facet with three affinely independent known points is forced,
/// and otherwise one new point of a neighbouring facet is chosen freely.
/// The result is `|∪S| − 3 − (number of free choices)`.
pub fn chain_dimension(s: &RegularSubdivision) -> i64 {
    let pts = &s.points;
    let mut known: BTreeSet<usize> = s.facets[0].iter().copied().collect();
    let mut free = 0i64;
    loop {
        let mut changed = true;
        while changed {
            changed = false;
            for f in &s.facets {
                if f.iter().all(|i| known.contains(i)) {
                    continue;
                }
                let k: Vec<usize> = f.iter().copied().filter(|i| known.contains(i)).collect();
                if spans_plane(pts, &k) {
                    known.extend(f.iter().copied());
                    changed = true;
                }
            }
        }
        let next = s
            .facets
            .iter()
            .filter(|f| !f.iter().all(|i| known.contains(i)))
            .max_by_key(|f| f.iter().filter(|i| known.contains(i)).count());
        match next {
            None => break,
            Some(f) => {
                let v = *f.iter().find(|i| !known.contains(i)).unwrap();
                known.insert(v);
                free += 1;
            }
        }
    }
    s.used().len() as i64 - 3 - free
}

fn spans_plane(pts: &[LatticePoint], idx: &[usize]) -> bool {
    idx.len() >= 3
        && idx.iter().enumerate().any(|(x, &i)| {
            idx[x + 1..].iter().enumerate().any(|(y, &j)| {
                idx[x + y + 2..].iter().any(|&k| orient(pts[i], pts[j], pts[k]) != 0)
            })
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::secondary::secondary_complex;

    #[test]
    fn diagonal_mesh_agrees_exactly() {
        let m = cross_diagonal_mesh(3, &q(2)).unwrap();
        assert_eq!(m.curves.len(), 2);
        assert!(m.disagreement().unwrap().is_none());
        let json = m.to_json();
        assert_eq!(HarnackMesh::from_json(&json).unwrap(), m);
    }

    #[test]
    fn flipped_sign_is_pinpointed() {
        let mut m = cross_diagonal_mesh(3, &q(2)).unwrap();
        let v = LatticePoint::new(1, 0);
        m.curves[1] = m.curves[1].map_coeffs(|p, c| if p == v { -c } else { c });
        let d = m.disagreement().unwrap().unwrap();
        assert_eq!(d.point, v);
        assert_eq!(d.to_error().kind(), "mesh_disagreement");
    }

    #[test]
    fn patchwork_at_one_is_the_table() {
        let m = cross_star_mesh(6.0).unwrap();
        let f = patchwork(&m, 1.0).unwrap();
        assert_eq!(f.coeff(LatticePoint::new(0, 0)), 6.0);
        assert!(patchwork(&m, 0.0).is_err());
        assert!(patchwork(&m, -1.0).is_err());
    }

    #[test]
    fn harnack_signs_reject_coarse_cells() {
        let s = cross_diagonal_subdivision().unwrap();
        assert!(harnack_signs(&s).is_err());
    }

    #[test]
    fn dimensions_of_cross_cells() {
        let s = cross_diagonal_subdivision().unwrap();
        assert_eq!(cell_dimension(&s).unwrap(), 1);
        assert_eq!(chain_dimension(&s), 1);
        let sc = secondary_complex(&LatticePolygon::cross_polytope().lattice_points()).unwrap();
        for face in &sc.faces {
            assert_eq!(cell_dimension(&face.subdivision).unwrap(), face.dim as i64);
            assert_eq!(chain_dimension(&face.subdivision), face.dim as i64);
        }
    }

    #[test]
    fn star_mesh_spine_is_a_cycle_of_glued_edges() {
        let m = cross_star_mesh(6.0).unwrap();
        let sp = upsilon_s(&m, 128, 64).unwrap();
        assert_eq!(sp.curve.genus(), 1);
        assert_eq!(sp.glued_edges().count(), 4);
        assert_eq!(sp.finite_edges().count(), 0);
        assert_eq!(sp.curve.legs.len(), 4);
    }
}
