//! The verification battery: one check per acceptance criterion.
//!
//! Each check returns a pass flag and a JSON detail object; a check that
//! errors counts as a failure with the error in its detail.

use std::f64::consts::PI;
use std::time::Instant;

use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::amoeba::{default_window, harnack_area_check, spine_heights, DEFAULT_PAD};
use crate::error::{Error, Result};
use crate::harnack::{
    chart, eigenvalues, finite_difference_jacobian, implicitize, mobius_covariance_check, sample_harnack,
    t_decompose, verify_t_decomposition, RootConfig,
};
use crate::lattice::{LatticePoint, LatticePolygon};
use crate::linalg;
use crate::mesh::{cell_dimension, chain_dimension, cross_diagonal_mesh, spine_limit_check};
use crate::poly::LaurentPolynomial;
use crate::rational::{q, qf, to_f64, Q};
use crate::secondary::{enumerate_regular_triangulations, secondary_complex};
use crate::tropical::{
    brute_force_corner_check, corner_locus, enumerate_graphs, heights_from_f64, AbstractTropicalCurve, Element,
    GraphEdge, Heights,
};

pub const AREA_TOL: f64 = 0.05;
pub const AREA_RES: usize = 512;
pub const AREA_PHASES: usize = 256;
pub const EIGEN_GUARD: f64 = 1e-10;
pub const FD_TOL: f64 = 1e-5;
pub const FD_STEP: f64 = 1e-6;
pub const COVARIANCE_TOL: f64 = 1e-9;
pub const RHO_SUM_TOL: f64 = 1e-12;
pub const LINE_HEIGHT_TOL: f64 = 1e-3;
pub const LINE_AREA_TOL: f64 = 0.03;
pub const LIMIT_SWEEP: [f64; 3] = [1e-1, 1e-2, 1e-3];
/// Seed and reflection scale of the two-triangle mesh used for spine limits.
pub const LIMIT_MESH_SEED: u64 = 50;
pub const ORACLE_GRID: usize = 60;

#[derive(Debug, Clone)]
pub struct Check {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: Value,
    pub seconds: f64,
}

impl Check {
    pub fn to_json(&self) -> Value {
        json!({ "id": self.id, "name": self.name, "pass": self.pass, "detail": self.detail })
    }

    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {} {} ({:.2}s) {}",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.seconds,
            self.detail
        )
    }
}

fn run(id: usize, name: &'static str, f: impl FnOnce() -> Result<(bool, Value)>) -> Check {
    let t = Instant::now();
    let (pass, detail) = match f() {
        Ok(x) => x,
        Err(e) => (false, json!({ "error": e.to_string(), "kind": e.kind() })),
    };
    Check { id, name, pass, detail, seconds: t.elapsed().as_secs_f64() }
}

/// Unit triangle, unit square, cross polytope, and the 2- and 3-dilated triangles.
pub fn test_polygons() -> Vec<(&'static str, LatticePolygon)> {
    vec![
        ("unit_triangle", LatticePolygon::unit_triangle()),
        ("unit_square", LatticePolygon::unit_square()),
        ("cross_polytope", LatticePolygon::cross_polytope()),
        ("triangle_2", LatticePolygon::dilated_triangle(2).expect("valid")),
        ("triangle_3", LatticePolygon::dilated_triangle(3).expect("valid")),
    ]
}

pub fn criterion(id: usize) -> Option<Check> {
    Some(match id {
        1 => run(1, "cross polytope secondary structure", cross_polytope_end_to_end),
        2 => run(2, "moduli dimensions", moduli_dimensions_check),
        3 => run(3, "maximal area certification", maximal_area),
        4 => run(4, "jacobian suite", jacobian_suite),
        5 => run(5, "t-decomposition", t_decomposition_suite),
        6 => run(6, "rho covariance", rho_covariance),
        7 => run(7, "spine duality oracle", spine_duality),
        8 => run(8, "patchworking limit", patchworking_limit),
        9 => run(9, "line spine sanity", line_spine),
        10 => run(10, "tropical moduli bookkeeping", moduli_bookkeeping),
        _ => return None,
    })
}

pub fn acceptance_suite() -> Vec<Check> {
    (1..=10).filter_map(criterion).collect()
}

/// Checks specific to one polygon: dimensions, a sampled curve's area, and the spine oracle.
pub fn polygon_suite(p: &LatticePolygon, seed: u64) -> Vec<Check> {
    vec![
        run(101, "polygon moduli dimensions", || {
            let s = p.stats();
            let ch = chart(&sample_harnack(p, seed))?;
            let expect = (s.m - 3) + (s.n as usize - s.m);
            Ok((ch.dimension() == expect, json!({ "chart": ch.dimension(), "expected": expect, "full": s.n + s.g - 3 })))
        }),
        run(102, "polygon sampled curve area", || {
            let f = implicitize(&sample_harnack(p, seed))?.to_laurent();
            let a = harnack_area_check(&f, default_window(&f, DEFAULT_PAD)?, AREA_RES, AREA_PHASES, AREA_TOL)?;
            Ok((a.pass, a.to_json()))
        }),
        run(103, "polygon spine oracle", || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut ok = true;
            for _ in 0..20 {
                let h = random_heights(p, &mut rng);
                let c = corner_locus(&h)?;
                ok &= c.is_balanced() && brute_force_corner_check(&h, &c, ORACLE_GRID);
            }
            Ok((ok, json!({ "trials": 20 })))
        }),
    ]
}

fn cross_polytope_end_to_end() -> Result<(bool, Value)> {
    let pts = LatticePolygon::cross_polytope().lattice_points();
    let tri = enumerate_regular_triangulations(&pts)?;
    let sc = secondary_complex(&pts)?;
    let mut dims = Vec::new();
    let mut ok = tri.len() == 3 && sc.f_vector() == vec![3, 3, 1] && sc.faces.len() == 7;
    for f in &sc.faces {
        let c = cell_dimension(&f.subdivision)?;
        ok &= c == f.dim as i64 && chain_dimension(&f.subdivision) == c;
        dims.push(c);
    }
    dims.sort_unstable_by(|a, b| b.cmp(a));
    ok &= dims == vec![2, 1, 1, 1, 0, 0, 0];
    Ok((ok, json!({ "triangulations": tri.len(), "f_vector": sc.f_vector(), "cell_dimensions": dims })))
}

fn moduli_dimensions_check() -> Result<(bool, Value)> {
    // (m − 3) + (n − m) and n + g − 3, counted by hand.
    let expected = [(0usize, 0i64), (1, 1), (1, 2), (3, 3), (6, 7)];
    let mut ok = true;
    let mut rows = Vec::new();
    for ((name, p), (chart_dim, full)) in test_polygons().into_iter().zip(expected) {
        let s = p.stats();
        let ch = chart(&sample_harnack(&p, 11))?;
        let row_ok = ch.dimension() == chart_dim && (s.m - 3) + (s.n as usize - s.m) == chart_dim && s.n + s.g - 3 == full;
        ok &= row_ok;
        rows.push(json!({ "polygon": name, "chart": ch.dimension(), "full": s.n + s.g - 3, "pass": row_ok }));
    }
    Ok((ok, Value::Array(rows)))
}

fn maximal_area() -> Result<(bool, Value)> {
    let polys = test_polygons();
    let mut ok = true;
    let mut ratios = Vec::new();
    for seed in 0..10u64 {
        let p = &polys[seed as usize % polys.len()].1;
        let f = implicitize(&sample_harnack(p, seed))?.to_laurent();
        let a = harnack_area_check(&f, default_window(&f, DEFAULT_PAD)?, AREA_RES, AREA_PHASES, AREA_TOL)?;
        ok &= a.pass;
        ratios.push(a.ratio);
    }
    let o = LatticePoint::new;
    let reducible = LaurentPolynomial::from_terms([(o(0, 0), 1.0), (o(1, 0), 1.0), (o(0, 1), 1.0), (o(1, 1), 1.0)]);
    let control = harnack_area_check(
        &reducible,
        default_window(&reducible, DEFAULT_PAD)?,
        AREA_RES,
        AREA_PHASES,
        AREA_TOL,
    )?;
    ok &= !control.pass;
    Ok((ok, json!({ "ratios": ratios, "control_ratio": control.ratio })))
}

/// Polygons with at most eight boundary points, for configuration suites.
fn small_polygons() -> Vec<LatticePolygon> {
    let mut v: Vec<LatticePolygon> = test_polygons().into_iter().map(|x| x.1).filter(|p| p.boundary_count() <= 8).collect();
    v.push(LatticePolygon::from_coords(&[(0, 0), (2, 0), (3, 1), (1, 3), (0, 1)]).expect("valid"));
    v.push(LatticePolygon::from_coords(&[(0, 0), (1, 0), (2, 1), (2, 2), (1, 2), (0, 1)]).expect("valid"));
    v
}

fn configs(count: u64, seed0: u64) -> Vec<RootConfig> {
    let polys = small_polygons();
    (0..count).map(|k| sample_harnack(&polys[k as usize % polys.len()], seed0 + k)).collect()
}

fn jacobian_suite() -> Result<(bool, Value)> {
    let mut worst_fd: f64 = 0.0;
    let mut min_pos = f64::INFINITY;
    let mut failures = Vec::new();
    for (k, c) in configs(100, 1000).iter().enumerate() {
        let d = c.jacobian()?;
        let n = d.len();
        let a = c.values();
        let ones = vec![Q::one(); n];
        let symmetric = (0..n).all(|i| (0..n).all(|j| d[i][j] == d[j][i]));
        let kernel = linalg::mat_vec(&d, &ones).iter().all(Q::is_zero) && linalg::mat_vec(&d, &a).iter().all(Q::is_zero);
        let rank = linalg::rank(&d);
        let ev = eigenvalues(&d);
        let psd = ev.iter().all(|&x| x >= -EIGEN_GUARD);
        let pos = ev.get(2).copied().unwrap_or(f64::INFINITY);
        min_pos = min_pos.min(pos);
        let fd = finite_difference_jacobian(c, FD_STEP);
        let err = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| (fd[i][j] - to_f64(&d[i][j])).abs() / (1.0 + to_f64(&d[i][j]).abs()))
            .fold(0.0, f64::max);
        worst_fd = worst_fd.max(err);
        if !(symmetric && kernel && rank + 2 == n && psd && pos > 0.0 && err <= FD_TOL) {
            failures.push(k);
        }
    }
    Ok((
        failures.is_empty(),
        json!({ "configs": 100, "failures": failures, "min_nonkernel_eigenvalue": min_pos, "max_fd_error": worst_fd }),
    ))
}

fn t_decomposition_suite() -> Result<(bool, Value)> {
    let polys = [
        ("triangle_1", LatticePolygon::unit_triangle()),
        ("triangle_2", LatticePolygon::dilated_triangle(2)?),
        ("unit_square", LatticePolygon::unit_square()),
        ("cross_polytope", LatticePolygon::cross_polytope()),
    ];
    let mut ok = true;
    let mut rows = Vec::new();
    for (name, p) in polys {
        let u = p.normal_sequence();
        let dec = t_decompose(&u)?;
        let positive = dec.terms.iter().all(|t| t.coef.is_positive());
        let exact = verify_t_decomposition(&u, &dec, 0x5eed, 5).is_ok();
        ok &= positive && exact;
        rows.push(json!({ "polygon": name, "terms": dec.terms.len(), "positive": positive, "exact": exact }));
    }
    Ok((ok, Value::Array(rows)))
}

fn rho_covariance() -> Result<(bool, Value)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0fa);
    let (mut affine_err, mut mobius_err, mut sum_err): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for c in configs(50, 2000) {
        let rho = c.rho()?;
        sum_err = sum_err.max(rho.iter().sum::<f64>().abs());
        let alpha = qf(rng.gen_range(1..=9), rng.gen_range(1..=5));
        let beta = qf(rng.gen_range(-20..=20), rng.gen_range(1..=5));
        let moved: Vec<Q> = c.values().iter().map(|a| &alpha * a + &beta).collect();
        let rho2 = c.with_values(&moved)?.rho()?;
        affine_err = affine_err.max(rho.iter().zip(&rho2).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
        // Keep every 1 − c·a positive so the cyclic order is preserved.
        let amax = c.values().iter().map(|a| to_f64(a).abs()).fold(1.0, f64::max);
        let cc = qf(1, (4.0 * amax).ceil() as i64 * rng.gen_range(1..=3)) * q(if rng.gen_bool(0.5) { 1 } else { -1 });
        mobius_err = mobius_err.max(mobius_covariance_check(&c, &cc)?.max_error);
    }
    let ok = affine_err <= COVARIANCE_TOL && mobius_err <= COVARIANCE_TOL && sum_err <= RHO_SUM_TOL;
    Ok((ok, json!({ "configs": 50, "affine_error": affine_err, "mobius_error": mobius_err, "sum_error": sum_err })))
}

fn random_heights(p: &LatticePolygon, rng: &mut impl Rng) -> Heights {
    p.lattice_points().into_iter().map(|v| (v, qf(rng.gen_range(-40..=40), rng.gen_range(1..=6)))).collect()
}

fn spine_duality() -> Result<(bool, Value)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd0a1);
    let mut ok = true;
    let mut rows = Vec::new();
    for (name, p) in test_polygons() {
        let mut good = 0;
        for _ in 0..20 {
            let h = random_heights(&p, &mut rng);
            let c = corner_locus(&h)?;
            if c.is_balanced() && brute_force_corner_check(&h, &c, ORACLE_GRID) {
                good += 1;
            }
        }
        ok &= good == 20;
        rows.push(json!({ "polygon": name, "agreeing": good, "trials": 20 }));
    }
    Ok((ok, Value::Array(rows)))
}

fn patchworking_limit() -> Result<(bool, Value)> {
    let m = cross_diagonal_mesh(LIMIT_MESH_SEED, &Q::one())?;
    let r = spine_limit_check(&m, &LIMIT_SWEEP, AREA_RES, AREA_PHASES, AREA_TOL)?;
    let area_ok = r.rows.iter().filter(|row| row.t <= 1e-2 * (1.0 + 1e-9)).all(|row| row.area.pass);
    let ok = r.finite_converge() && r.glued_diverge() && area_ok;
    Ok((ok, r.to_json()))
}

fn line_spine() -> Result<(bool, Value)> {
    let o = LatticePoint::new;
    let f = LaurentPolynomial::from_terms([(o(0, 0), 1.0), (o(1, 0), 1.0), (o(0, 1), 1.0)]);
    let w = default_window(&f, DEFAULT_PAD)?;
    let sh = spine_heights(&f, w, AREA_RES, AREA_PHASES)?;
    let hs: Vec<f64> = sh.heights.values().copied().collect();
    let spread = hs.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b)) - hs.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let curve = corner_locus(&heights_from_f64(&sh.heights)?)?;
    let mut dirs: Vec<LatticePoint> = curve.rays.iter().map(|r| r.dir).collect();
    dirs.sort();
    let mut want = vec![o(-1, 0), o(0, -1), o(1, 1)];
    want.sort();
    let area = harnack_area_check(&f, w, AREA_RES, AREA_PHASES, LINE_AREA_TOL)?;
    let ok = hs.len() == 3 && spread <= LINE_HEIGHT_TOL && dirs == want && curve.vertices.len() == 1 && area.pass;
    Ok((
        ok,
        json!({ "heights": hs, "spread": spread, "rays": dirs, "area_ratio": area.ratio, "expected_area": PI * PI / 2.0 }),
    ))
}

fn curve(weights: Vec<u32>, edges: &[(usize, usize, f64)], legs: Vec<usize>) -> Result<AbstractTropicalCurve> {
    let e = edges.iter().map(|&(u, v, len)| GraphEdge { u, v, len }).collect();
    AbstractTropicalCurve::new(weights, e, legs)
}

/// Small graphs with stability decided by hand.
pub fn stability_labels() -> Result<Vec<(AbstractTropicalCurve, bool)>> {
    Ok(vec![
        (curve(vec![0], &[], vec![0, 0, 0])?, true),
        (curve(vec![0], &[], vec![0, 0])?, false),
        (curve(vec![1], &[], vec![])?, false),
        (curve(vec![1], &[], vec![0])?, true),
        (curve(vec![2], &[], vec![])?, true),
        (curve(vec![0], &[(0, 0, 1.0)], vec![0])?, true),
        (curve(vec![0], &[(0, 0, 1.0)], vec![])?, false),
        (curve(vec![0, 0], &[(0, 1, 1.0)], vec![0, 0, 1, 1])?, true),
        (curve(vec![0, 0], &[(0, 1, 1.0)], vec![0, 0, 1])?, false),
        (curve(vec![0, 0], &[(0, 1, 1.0), (0, 1, 2.0), (0, 1, 3.0)], vec![])?, true),
        (curve(vec![1, 0], &[(0, 1, 1.0)], vec![1, 1])?, true),
        (curve(vec![0, 1], &[(0, 1, 1.0)], vec![0])?, false),
    ])
}

fn moduli_bookkeeping() -> Result<(bool, Value)> {
    let graphs: Vec<AbstractTropicalCurve> =
        enumerate_graphs(4, 4, 1, 2).into_iter().filter(AbstractTropicalCurve::is_stable).collect();
    let mut contractions = 0;
    let mut genus_ok = true;
    for g in &graphs {
        for e in 0..g.edges.len() {
            let h = g.contract(Element::Edge(e))?;
            genus_ok &= h.genus() == g.genus();
            contractions += 1;
        }
    }
    let labels = stability_labels()?;
    let labels_ok = labels.iter().all(|(g, s)| g.is_stable() == *s);
    let tree = curve(vec![0, 0], &[(0, 1, 1.0)], vec![0, 0, 1, 1])?;
    let relabelled = curve(vec![0, 0], &[(0, 1, 1.0)], vec![0, 1, 0, 1])?;
    let swapped = curve(vec![0, 0], &[(1, 0, 1.0)], vec![1, 1, 0, 0])?;
    let iso_ok = !tree.isomorphic(&relabelled)? && tree.isomorphic(&swapped)?;
    if graphs.is_empty() {
        return Err(Error::VerificationFailed("no stable graphs enumerated".into()));
    }
    Ok((
        genus_ok && labels_ok && iso_ok,
        json!({
            "stable_graphs": graphs.len(),
            "contractions": contractions,
            "genus_invariant": genus_ok,
            "labels": labels_ok,
            "leg_relabelling_detected": iso_ok,
        }),
    ))
}
