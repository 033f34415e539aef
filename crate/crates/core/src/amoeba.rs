//! Numerical amoebas, component orders and Ronkin heights.
//!
//! A column at `X` is swept over phases `θ`; the roots `w` of `f(e^{X+iθ}, ·)`
//! are continued from one phase to the next and each root path is filled
//! between consecutive samples. A pixel is occupied when its centre lies on a
//! filled path, so pixel counts are midpoint-rule area estimates.

use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::PI;

use num::complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, LatticePolygon};
use crate::poly::LaurentPolynomial;
use crate::roots::roots;
use crate::tropical::{corner_locus, heights_from_f64};

pub const DEFAULT_RES: usize = 512;
pub const DEFAULT_PHASES: usize = 256;
pub const DEFAULT_PAD: f64 = 6.0;
pub const DEFAULT_TOL: f64 = 0.05;
/// Relative band around `e^Y` inside which a fiber root counts as on the circle.
pub const MEMBERSHIP_BAND: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Window {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        if !(x0 < x1 && y0 < y1) || ![x0, x1, y0, y1].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput(format!("bad window {x0},{x1},{y0},{y1}")));
        }
        Ok(Window { x0, x1, y0, y1 })
    }

    pub fn square(r: f64) -> Self {
        Window { x0: -r, x1: r, y0: -r, y1: r }
    }

    pub fn area(&self) -> f64 {
        (self.x1 - self.x0) * (self.y1 - self.y0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmoebaRaster {
    pub window: Window,
    pub res: usize,
    pub phases: usize,
    /// Row-major, `occupancy[j * res + i]` for column `i` and row `j` (row 0 at `y0`).
    pub occupancy: Vec<bool>,
    /// Fibers where the root finder failed.
    pub skipped: usize,
}

impl AmoebaRaster {
    pub fn dx(&self) -> f64 {
        (self.window.x1 - self.window.x0) / self.res as f64
    }

    pub fn dy(&self) -> f64 {
        (self.window.y1 - self.window.y0) / self.res as f64
    }

    pub fn center(&self, i: usize, j: usize) -> (f64, f64) {
        (
            self.window.x0 + (i as f64 + 0.5) * self.dx(),
            self.window.y0 + (j as f64 + 0.5) * self.dy(),
        )
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.occupancy[j * self.res + i]
    }

    pub fn count(&self) -> usize {
        self.occupancy.iter().filter(|&&b| b).count()
    }

    /// Occupied pixels on the outer frame of the window.
    pub fn frame_count(&self) -> usize {
        let n = self.res;
        (0..n)
            .flat_map(|k| [(k, 0), (k, n - 1), (0, k), (n - 1, k)])
            .filter(|&(i, j)| self.get(i, j))
            .count()
    }

    /// Run-length encoding per row: alternating lengths starting with an empty run.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<usize>> = (0..self.res)
            .map(|j| {
                let mut runs = Vec::new();
                let mut cur = false;
                let mut len = 0;
                for i in 0..self.res {
                    if self.get(i, j) == cur {
                        len += 1;
                    } else {
                        runs.push(len);
                        cur = !cur;
                        len = 1;
                    }
                }
                runs.push(len);
                runs
            })
            .collect();
        let w = self.window;
        json!({
            "window": [w.x0, w.x1, w.y0, w.y1],
            "res": self.res,
            "phases": self.phases,
            "skipped": self.skipped,
            "area": area(self),
            "rows": rows,
        })
    }
}

/// Bounding box of the tropical approximation `c_v = log|a_v|`, padded.
pub fn default_window(f: &LaurentPolynomial, pad: f64) -> Result<Window> {
    let h: BTreeMap<LatticePoint, f64> = f.terms().map(|(v, c)| (*v, c.abs().ln())).collect();
    let curve = corner_locus(&heights_from_f64(&h)?)?;
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..curve.vertices.len() {
        let (x, y) = curve.vertex_f64(i);
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    Window::new(x0 - pad, x1 + pad, y0 - pad, y1 + pad)
}

fn check_bivariate(f: &LaurentPolynomial) -> Result<()> {
    let (sx, sy) = f.degree_spread();
    if sx == 0 || sy == 0 {
        return Err(Error::InvalidInput("polynomial must depend on both variables".into()));
    }
    Ok(())
}

/// `ln(w1 / w2)` as a distance between roots.
fn log_dist(a: Complex64, b: Complex64) -> f64 {
    if a == b {
        return 0.0;
    }
    if a.norm() == 0.0 || b.norm() == 0.0 {
        return f64::INFINITY;
    }
    (a / b).ln().norm()
}

fn log_abs(w: Complex64) -> f64 {
    w.norm().ln()
}

/// Rows whose centres lie in `[lo, hi]`.
fn row_span(lo: f64, hi: f64, y0: f64, dy: f64, res: usize) -> Option<(usize, usize)> {
    let a = ((lo - y0) / dy - 0.5).ceil().max(0.0);
    let b = ((hi - y0) / dy - 0.5).floor().min(res as f64 - 1.0);
    (a <= b).then_some((a as usize, b as usize))
}

struct Column {
    spans: Vec<(usize, usize)>,
    skipped: usize,
}

fn sweep_column(f: &LaurentPolynomial, x: f64, w: &Window, res: usize, phases: usize) -> Column {
    let dy = (w.y1 - w.y0) / res as f64;
    let mut spans = Vec::new();
    let mut skipped = 0;
    let mut samples: Vec<Option<Vec<Complex64>>> = Vec::with_capacity(phases);
    let mut prev: Option<Vec<Complex64>> = None;
    for k in 0..phases {
        let theta = 2.0 * PI * k as f64 / phases as f64;
        let z = Complex64::from_polar(x.exp(), theta);
        let (c, _) = f.fiber_in_w(z);
        let scale = c.iter().fold(0.0f64, |m, a| m.max(a.norm()));
        if c.iter().all(|a| a.norm() <= 1e-14 * f.max_abs_coeff() * (x.abs().exp())) || scale == 0.0 {
            // The whole fiber lies on the curve.
            spans.push((0, res - 1));
            samples.push(None);
            prev = None;
            continue;
        }
        match roots(&c, prev.as_deref()) {
            Ok(r) => {
                prev = Some(r.clone());
                samples.push(Some(r));
            }
            Err(_) => {
                skipped += 1;
                prev = None;
                samples.push(None);
            }
        }
    }
    let mark = |a: f64, b: f64, spans: &mut Vec<(usize, usize)>| {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        if let Some(s) = row_span(lo, hi, w.y0, dy, res) {
            spans.push(s);
        }
    };
    for k in 0..phases {
        let Some(cur) = &samples[k] else { continue };
        let next = &samples[(k + 1) % phases];
        match next {
            Some(nx) if phases > 1 => {
                let mut used = vec![false; nx.len()];
                for &r in cur {
                    let best = (0..nx.len())
                        .filter(|&j| !used[j])
                        .min_by(|&a, &b| log_dist(r, nx[a]).total_cmp(&log_dist(r, nx[b])));
                    match best {
                        Some(j) => {
                            used[j] = true;
                            mark(log_abs(r), log_abs(nx[j]), &mut spans);
                        }
                        // A root escaped to infinity.
                        None => mark(log_abs(r), f64::INFINITY, &mut spans),
                    }
                }
                for (j, &r) in nx.iter().enumerate() {
                    if !used[j] {
                        mark(log_abs(r), f64::INFINITY, &mut spans);
                    }
                }
            }
            _ => {
                for &r in cur {
                    mark(log_abs(r), log_abs(r), &mut spans);
                }
            }
        }
    }
    Column { spans, skipped }
}

pub fn raster(f: &LaurentPolynomial, window: Window, res: usize, phases: usize) -> Result<AmoebaRaster> {
    check_bivariate(f)?;
    if res == 0 || phases == 0 {
        return Err(Error::InvalidInput("resolution and phases must be positive".into()));
    }
    let dx = (window.x1 - window.x0) / res as f64;
    let cols: Vec<Column> = (0..res)
        .into_par_iter()
        .map(|i| sweep_column(f, window.x0 + (i as f64 + 0.5) * dx, &window, res, phases))
        .collect();
    let mut occupancy = vec![false; res * res];
    let mut skipped = 0;
    for (i, c) in cols.iter().enumerate() {
        skipped += c.skipped;
        for &(a, b) in &c.spans {
            for j in a..=b {
                occupancy[j * res + i] = true;
            }
        }
    }
    Ok(AmoebaRaster { window, res, phases, occupancy, skipped })
}

/// Pixel count times pixel area.
pub fn area(r: &AmoebaRaster) -> f64 {
    r.count() as f64 * r.dx() * r.dy()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AreaCheck {
    pub area: f64,
    pub expected: f64,
    pub ratio: f64,
    pub pass: bool,
    /// Set when the window frame is heavily occupied.
    pub window_warning: bool,
    pub skipped: usize,
}

impl AreaCheck {
    pub fn to_json(&self) -> Value {
        json!({
            "area": self.area,
            "expected": self.expected,
            "ratio": self.ratio,
            "pass": self.pass,
            "window_warning": self.window_warning,
            "skipped": self.skipped,
        })
    }
}

/// Compares the amoeba area with `π² · area(Δ)`.
pub fn harnack_area_check(
    f: &LaurentPolynomial,
    window: Window,
    res: usize,
    phases: usize,
    tol: f64,
) -> Result<AreaCheck> {
    let poly = f.newton_polygon()?;
    let r = raster(f, window, res, phases)?;
    let a = area(&r);
    let expected = PI * PI * crate::rational::to_f64(&poly.area());
    let ratio = a / expected;
    // Tentacles cross the frame in a few pixels each; much more means the window is too small.
    let window_warning = r.frame_count() > 4 * poly.boundary_count() as usize + 8;
    Ok(AreaCheck {
        area: a,
        expected,
        ratio,
        pass: (ratio - 1.0).abs() <= tol,
        window_warning,
        skipped: r.skipped,
    })
}

/// Roots counted inside `|w| < e^y` across several phases, plus the `w`-valuation.
fn fiber_count(f: &LaurentPolynomial, x: f64, y: f64, probes: &[f64]) -> Result<i64> {
    let mut count = None;
    for &theta in probes {
        let z = Complex64::from_polar(x.exp(), theta);
        let (c, lo) = f.fiber_in_w(z);
        let rs = roots(&c, None)?;
        let r = y.exp();
        if rs.iter().any(|w| (w.norm() / r - 1.0).abs() <= MEMBERSHIP_BAND) {
            return Err(Error::InsideAmoeba("a fiber root lies on the torus".into()));
        }
        let k = rs.iter().filter(|w| w.norm() < r).count() as i64 + lo;
        match count {
            None => count = Some(k),
            Some(c) if c != k => {
                return Err(Error::InsideAmoeba("root count changes with phase".into()))
            }
            _ => {}
        }
    }
    Ok(count.unwrap())
}

const PROBES: [f64; 5] = [0.1234, 1.3579, 2.4681, 3.9753, 5.1357];

/// Order of the complement component containing `(x, y)`, by counting fiber roots.
pub fn component_order(f: &LaurentPolynomial, x: f64, y: f64) -> Result<LatticePoint> {
    check_bivariate(f)?;
    let at = |e: Error| match e {
        Error::InsideAmoeba(m) => Error::InsideAmoeba(format!("{m} at ({x}, {y})")),
        e => e,
    };
    let nu2 = fiber_count(f, x, y, &PROBES).map_err(at)?;
    let nu1 = fiber_count(&f.transpose(), y, x, &PROBES).map_err(at)?;
    Ok(LatticePoint::new(nu1, nu2))
}

/// Mean of `log|f|` over the fiber `|z| = e^x` at phase `θ`, exact in `w` by Jensen's formula.
fn jensen(f: &LaurentPolynomial, x: f64, y: f64, theta: f64) -> Result<f64> {
    let z = Complex64::from_polar(x.exp(), theta);
    let (c, lo) = f.fiber_in_w(z);
    let hi = c
        .iter()
        .rposition(|a| a.norm() > 0.0)
        .ok_or_else(|| Error::InsideAmoeba("fiber polynomial vanishes".into()))?;
    let rs = roots(&c, None)?;
    let lead = c[hi].norm().ln();
    let sum: f64 = rs.iter().map(|w| if w.norm() == 0.0 { y } else { y.max(log_abs(*w)) }).sum();
    Ok(lead + sum + lo as f64 * y)
}

/// Ronkin function at `(x, y)`: trapezoid rule in `θ`, doubled until the change is below `1e-6`.
pub fn ronkin_height(f: &LaurentPolynomial, x: f64, y: f64) -> Result<f64> {
    check_bivariate(f)?;
    component_order(f, x, y)?;
    let mut n = 16;
    let mut prev = trapezoid(f, x, y, n)?;
    while n < 1 << 14 {
        n *= 2;
        let cur = trapezoid(f, x, y, n)?;
        if (cur - prev).abs() < 1e-6 {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Numeric(format!("Ronkin average did not converge at ({x}, {y})")))
}

fn trapezoid(f: &LaurentPolynomial, x: f64, y: f64, n: usize) -> Result<f64> {
    let vals: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|k| jensen(f, x, y, 2.0 * PI * (k as f64 + 0.5) / n as f64))
        .collect::<Result<_>>()?;
    Ok(vals.iter().sum::<f64>() / n as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub order: LatticePoint,
    pub representative: (f64, f64),
    pub pixels: usize,
    /// `None` for components touching the window frame.
    pub area: Option<f64>,
    pub ronkin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpineHeights {
    pub heights: BTreeMap<LatticePoint, f64>,
    pub missing: Vec<LatticePoint>,
    pub components: Vec<Component>,
}

impl SpineHeights {
    pub fn to_json(&self) -> Value {
        let comps: Vec<Value> = self
            .components
            .iter()
            .map(|c| {
                json!({
                    "order": c.order,
                    "representative": [c.representative.0, c.representative.1],
                    "area": c.area,
                    "ronkin": c.ronkin,
                })
            })
            .collect();
        let h: Vec<Value> = self.heights.iter().map(|(v, c)| json!({ "v": v, "c": c })).collect();
        json!({ "heights": h, "missing": self.missing, "components": comps })
    }
}

struct Labels {
    /// Chessboard distance to the nearest occupied pixel.
    dist: Vec<usize>,
    label: Vec<usize>,
    /// Pixel count and frame contact per component.
    comps: Vec<(usize, bool)>,
}

fn label_complement(r: &AmoebaRaster) -> Labels {
    let n = r.res;
    let mut dist = vec![usize::MAX; n * n];
    let mut q = VecDeque::new();
    for (k, &o) in r.occupancy.iter().enumerate() {
        if o {
            dist[k] = 0;
            q.push_back(k);
        }
    }
    while let Some(k) = q.pop_front() {
        let (i, j) = ((k % n) as i64, (k / n) as i64);
        for di in -1..=1 {
            for dj in -1..=1 {
                let (a, b) = (i + di, j + dj);
                if a < 0 || b < 0 || a >= n as i64 || b >= n as i64 {
                    continue;
                }
                let m = b as usize * n + a as usize;
                if dist[m] == usize::MAX {
                    dist[m] = dist[k] + 1;
                    q.push_back(m);
                }
            }
        }
    }
    let mut label = vec![usize::MAX; n * n];
    let mut comps = Vec::new();
    for s in 0..n * n {
        if r.occupancy[s] || label[s] != usize::MAX {
            continue;
        }
        let id = comps.len();
        label[s] = id;
        let mut stack = vec![s];
        let (mut size, mut frame) = (0, false);
        while let Some(k) = stack.pop() {
            size += 1;
            let (i, j) = (k % n, k / n);
            if i == 0 || j == 0 || i == n - 1 || j == n - 1 {
                frame = true;
            }
            let nbrs = [
                (i > 0).then(|| k - 1),
                (i + 1 < n).then(|| k + 1),
                (j > 0).then(|| k - n),
                (j + 1 < n).then(|| k + n),
            ];
            for m in nbrs.into_iter().flatten() {
                if !r.occupancy[m] && label[m] == usize::MAX {
                    label[m] = id;
                    stack.push(m);
                }
            }
        }
        comps.push((size, frame));
    }
    Labels { dist, label, comps }
}

/// Heights `c_v` of the affine pieces of the Ronkin function, one per complement component.
pub fn spine_heights(f: &LaurentPolynomial, window: Window, res: usize, phases: usize) -> Result<SpineHeights> {
    let r = raster(f, window, res, phases)?;
    spine_heights_from_raster(f, &r)
}

/// Probes the deepest pixel of every complement region and a coarse grid of
/// complement pixels; thin tentacles can merge regions in the raster, so the
/// order of each probe is computed rather than inferred from connectivity.
pub fn spine_heights_from_raster(f: &LaurentPolynomial, r: &AmoebaRaster) -> Result<SpineHeights> {
    let poly = f.newton_polygon()?;
    let n = r.res;
    let lab = label_complement(r);
    let mut probes: Vec<usize> = Vec::new();
    let mut deepest = vec![None::<usize>; lab.comps.len()];
    for k in 0..n * n {
        if r.occupancy[k] {
            continue;
        }
        let c = lab.label[k];
        if deepest[c].is_none_or(|d| lab.dist[k] > lab.dist[d]) {
            deepest[c] = Some(k);
        }
    }
    probes.extend(deepest.into_iter().flatten());
    let stride = (n / 32).max(1);
    for j in (stride / 2..n).step_by(stride) {
        for i in (stride / 2..n).step_by(stride) {
            let k = j * n + i;
            if !r.occupancy[k] && lab.dist[k] >= 2 {
                probes.push(k);
            }
        }
    }
    let classified: Vec<Option<LatticePoint>> = probes
        .par_iter()
        .map(|&k| {
            let (x, y) = r.center(k % n, k / n);
            component_order(f, x, y).ok()
        })
        .collect();
    let mut best: BTreeMap<LatticePoint, usize> = BTreeMap::new();
    for (&k, o) in probes.iter().zip(&classified) {
        let Some(o) = o else { continue };
        if best.get(o).is_none_or(|&b| (lab.dist[k], std::cmp::Reverse(k)) > (lab.dist[b], std::cmp::Reverse(b))) {
            best.insert(*o, k);
        }
    }
    let cell = r.dx() * r.dy();
    let mut reps: BTreeMap<LatticePoint, ((f64, f64), usize, Option<f64>)> = best
        .iter()
        .map(|(&order, &k)| {
            let (size, frame) = lab.comps[lab.label[k]];
            (order, (r.center(k % n, k / n), size, (!frame).then_some(size as f64 * cell)))
        })
        .collect();
    for p in side_probes(f, &r.window)? {
        if let Ok(o) = component_order(f, p.0, p.1) {
            reps.entry(o).or_insert((p, 0, None));
        }
    }
    for v in poly.lattice_points() {
        if reps.contains_key(&v) {
            continue;
        }
        for p in tropical_probes(f, v, &r.window) {
            if let Ok(o) = component_order(f, p.0, p.1) {
                reps.entry(o).or_insert((p, 0, None));
                if o == v {
                    break;
                }
            }
        }
    }
    let components = reps
        .iter()
        .map(|(&order, &((x, y), pixels, area))| {
            Ok(Component { order, representative: (x, y), pixels, area, ronkin: ronkin_height(f, x, y)? })
        })
        .collect::<Result<Vec<_>>>()?;
    let heights = components
        .iter()
        .map(|c| (c.order, c.ronkin - c.order.x as f64 * c.representative.0 - c.order.y as f64 * c.representative.1))
        .collect();
    let missing = poly.lattice_points().into_iter().filter(|v| !reps.contains_key(v)).collect();
    Ok(SpineHeights { heights, missing, components })
}

/// Candidates for a thin component of order `v`: the point of the window where
/// the term `⟨v, X⟩ + ln|a_v|` exceeds all others by the widest margin, and a
/// small ring around it.
fn tropical_probes(f: &LaurentPolynomial, v: LatticePoint, w: &Window) -> Vec<(f64, f64)> {
    let av = f.coeff(v);
    if av == 0.0 {
        return Vec::new();
    }
    let terms: Vec<(f64, f64, f64)> = f
        .terms()
        .filter(|(u, _)| **u != v)
        .map(|(u, c)| (u.x as f64, u.y as f64, c.abs().ln()))
        .collect();
    let margin = |x: f64, y: f64| {
        let own = v.x as f64 * x + v.y as f64 * y + av.abs().ln();
        own - terms.iter().map(|(a, b, c)| a * x + b * y + c).fold(f64::NEG_INFINITY, f64::max)
    };
    const N: usize = 96;
    let (mut cx, mut cy) = ((w.x0 + w.x1) / 2.0, (w.y0 + w.y1) / 2.0);
    let (mut hx, mut hy) = ((w.x1 - w.x0) / 2.0, (w.y1 - w.y0) / 2.0);
    // The margin is concave, so its near-maximal set is convex and contains its centroid.
    for _ in 0..4 {
        let grid: Vec<(f64, f64, f64)> = (0..=N)
            .flat_map(|j| (0..=N).map(move |i| (i, j)))
            .map(|(i, j)| {
                let x = cx - hx + 2.0 * hx * i as f64 / N as f64;
                let y = cy - hy + 2.0 * hy * j as f64 / N as f64;
                (margin(x, y), x, y)
            })
            .collect();
        let top = grid.iter().map(|g| g.0).fold(f64::NEG_INFINITY, f64::max);
        let near: Vec<&(f64, f64, f64)> = grid.iter().filter(|g| g.0 >= top - 1e-9 * (1.0 + top.abs())).collect();
        cx = near.iter().map(|g| g.1).sum::<f64>() / near.len() as f64;
        cy = near.iter().map(|g| g.2).sum::<f64>() / near.len() as f64;
        hx *= 8.0 / N as f64;
        hy *= 8.0 / N as f64;
    }
    let rad = 0.02 * (w.x1 - w.x0).min(w.y1 - w.y0);
    let mut out = vec![(cx, cy)];
    out.extend((0..8).map(|k| {
        let a = k as f64 * PI / 4.0;
        (cx + rad * a.cos(), cy + rad * a.sin())
    }));
    out
}

/// Points far out along each side's outer normal, between consecutive tentacles.
///
/// Tentacles dual to a side sit asymptotically at `⟨e, X⟩ = ln|r|` for the
/// roots `r` of the side polynomial `Σ b_k u^k` along the primitive side
/// direction `e`; strips between them are unbounded complement components.
pub fn side_probes(f: &LaurentPolynomial, window: &Window) -> Result<Vec<(f64, f64)>> {
    let poly = f.newton_polygon()?;
    let (cx, cy) = ((window.x0 + window.x1) / 2.0, (window.y0 + window.y1) / 2.0);
    let reach = 0.5 * ((window.x1 - window.x0).powi(2) + (window.y1 - window.y0).powi(2)).sqrt() + 3.0;
    let mut out = Vec::new();
    for e in poly.edges() {
        let dir = e.direction();
        let b: Vec<Complex64> = (0..=e.d).map(|k| Complex64::new(f.coeff(e.start.add(dir.scale(k))), 0.0)).collect();
        let mut logs: Vec<f64> = roots(&b, None)?.iter().map(|r| log_abs(*r)).collect();
        logs.sort_by(f64::total_cmp);
        let mut zetas = vec![logs[0] - 2.0, logs[logs.len() - 1] + 2.0];
        zetas.extend(logs.windows(2).filter(|w| w[1] - w[0] > 1e-9).map(|w| 0.5 * (w[0] + w[1])));
        let nrm = (-(e.u.x as f64), -(e.u.y as f64));
        let nl = (nrm.0 * nrm.0 + nrm.1 * nrm.1).sqrt();
        let base = (cx + reach * nrm.0 / nl, cy + reach * nrm.1 / nl);
        let (ex, ey) = (dir.x as f64, dir.y as f64);
        let el2 = ex * ex + ey * ey;
        for z in zetas {
            let shift = (z - (ex * base.0 + ey * base.1)) / el2;
            out.push((base.0 + shift * ex, base.1 + shift * ey));
        }
    }
    Ok(out)
}

/// Newton polygon stretched by `d`: exponents multiplied, coefficients kept.
pub fn dilate_exponents(f: &LaurentPolynomial, d: i64) -> LaurentPolynomial {
    LaurentPolynomial::from_terms(f.terms().map(|(v, c)| (v.scale(d), *c)))
}

/// Newton polygon of `f`, as a convenience for callers holding only numerics.
pub fn newton_polygon(f: &LaurentPolynomial) -> Result<LatticePolygon> {
    f.newton_polygon()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> LaurentPolynomial {
        LaurentPolynomial::from_terms([
            (LatticePoint::new(0, 0), 1.0),
            (LatticePoint::new(1, 0), 1.0),
            (LatticePoint::new(0, 1), 1.0),
        ])
    }

    #[test]
    fn univariate_rejected() {
        let f = LaurentPolynomial::from_terms([(LatticePoint::new(1, 0), 1.0), (LatticePoint::new(0, 0), -1.0)]);
        assert!(raster(&f, Window::square(3.0), 64, 16).is_err());
    }

    #[test]
    fn line_orders() {
        let f = line();
        assert_eq!(component_order(&f, -5.0, -5.0).unwrap(), LatticePoint::new(0, 0));
        assert_eq!(component_order(&f, 5.0, 0.0).unwrap(), LatticePoint::new(1, 0));
        assert_eq!(component_order(&f, 0.0, 5.0).unwrap(), LatticePoint::new(0, 1));
        assert!(matches!(component_order(&f, 0.0, 0.0), Err(Error::InsideAmoeba(_))));
    }

    #[test]
    fn line_ronkin() {
        let f = line();
        assert!(ronkin_height(&f, -10.0, -10.0).unwrap().abs() < 1e-4);
        assert!((ronkin_height(&f, 10.0, 0.0).unwrap() - 10.0).abs() < 1e-4);
        let r: Vec<f64> = [4.0, 6.0, 8.0].iter().map(|&x| ronkin_height(&f, x, 0.5).unwrap()).collect();
        assert!((r[0] - 2.0 * r[1] + r[2]).abs() < 1e-4);
    }

    #[test]
    fn line_area_and_window() {
        let f = line();
        let w = default_window(&f, DEFAULT_PAD).unwrap();
        assert_eq!(w, Window::square(6.0));
        let r = raster(&f, w, 256, 128).unwrap();
        let a = area(&r);
        assert!((a / (PI * PI / 2.0) - 1.0).abs() < 0.05, "area {a}");
        assert_eq!(r.skipped, 0);
        assert_eq!(area(&AmoebaRaster { occupancy: vec![false; 4], res: 2, ..r }), 0.0);
    }

    #[test]
    fn raster_is_deterministic() {
        let f = line();
        let a = raster(&f, Window::square(3.0), 64, 32).unwrap();
        let b = raster(&f, Window::square(3.0), 64, 32).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn line_spine_heights() {
        let f = line();
        let s = spine_heights(&f, Window::square(6.0), 128, 64).unwrap();
        assert!(s.missing.is_empty(), "{s:?}");
        for c in s.heights.values() {
            assert!(c.abs() < 1e-3);
        }
    }
}
