//! Rational Harnack curves as cyclically ordered root configurations.
//!
//! A configuration pairs each unit boundary segment of a polygon with a
//! real root `a_i`; the curve is the image of `t ↦ ∏ (t − a_i)^{u_i}` where
//! `u_i` is the inner normal of the segment's side. Multiplicative
//! parameters are fixed to 1.

mod chart;
mod implicit;
mod tdecomp;

pub use chart::{arc_positions, chart, moduli_dimensions, unchart, ModuliChart};
pub use implicit::implicitize;
pub use tdecomp::{t_decompose, verify_t_decomposition, TDecomposition, TTerm, MAX_DILATION};

use nalgebra::{DMatrix, SymmetricEigen};
use num::complex::Complex64;
use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, LatticePolygon};
use crate::linalg::{self, Matrix};
use crate::rational::{self, q, qf, to_f64, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    pub a: Q,
    /// Index of the polygon edge, in canonical order.
    pub side: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootConfig {
    polygon: LatticePolygon,
    roots: Vec<Root>,
    degenerate: bool,
}

/// A point of the parameter line `RP¹`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Param {
    Finite(Complex64),
    Infinity,
}

/// A torus coordinate, with exact hits on zeros and poles flagged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coord {
    Finite(Complex64),
    Zero,
    Infinity,
}

impl Coord {
    pub fn value(self) -> Option<Complex64> {
        match self {
            Coord::Finite(z) => Some(z),
            _ => None,
        }
    }
}

impl RootConfig {
    /// Validates counts per side, cyclic order, and collisions.
    ///
    /// Roots are given in cyclic order; the stored list is rotated so that
    /// side 0 comes first. Equal roots on different sides are accepted only
    /// when `allow_degenerate` is set.
    pub fn new(polygon: LatticePolygon, roots: Vec<Root>, allow_degenerate: bool) -> Result<Self> {
        let edges = polygon.edges();
        let m = edges.len();
        let n = polygon.boundary_count() as usize;
        if roots.len() != n {
            return Err(Error::InvalidInput(format!("expected {n} roots, got {}", roots.len())));
        }
        let mut counts = vec![0i64; m];
        for r in &roots {
            if r.side >= m {
                return Err(Error::InvalidInput(format!("side {} out of range", r.side)));
            }
            counts[r.side] += 1;
        }
        for (i, e) in edges.iter().enumerate() {
            if counts[i] != e.d {
                return Err(Error::InvalidInput(format!(
                    "side {i} has integer length {} but {} roots",
                    e.d, counts[i]
                )));
            }
        }
        // Rotate so the list starts at the first root of side 0.
        let start = (0..n)
            .find(|&i| roots[i].side == 0 && roots[(i + n - 1) % n].side != 0)
            .ok_or_else(|| Error::OrderingViolation("side 0 roots are not contiguous".into()))?;
        let roots: Vec<Root> = (0..n).map(|i| roots[(start + i) % n].clone()).collect();
        if roots.windows(2).any(|w| w[1].side < w[0].side) {
            return Err(Error::OrderingViolation("sides are not in anticlockwise order".into()));
        }
        let descents = (0..n).filter(|&i| roots[(i + 1) % n].a < roots[i].a).count();
        if descents > 1 {
            return Err(Error::OrderingViolation(
                "roots are not cyclically weakly increasing".into(),
            ));
        }
        let mut degenerate = false;
        for i in 0..n {
            let j = (i + 1) % n;
            if i != j && roots[i].a == roots[j].a && roots[i].side != roots[j].side {
                degenerate = true;
            }
        }
        if degenerate && !allow_degenerate {
            return Err(Error::SingularConfiguration(
                "roots on different sides coincide".into(),
            ));
        }
        Ok(RootConfig { polygon, roots, degenerate })
    }

    /// Builds a configuration from `(a, normal)` pairs in cyclic order.
    pub fn from_normals(
        polygon: LatticePolygon,
        pairs: &[(Q, LatticePoint)],
        allow_degenerate: bool,
    ) -> Result<Self> {
        let edges = polygon.edges();
        let roots = pairs
            .iter()
            .map(|(a, u)| {
                let side = edges.iter().position(|e| e.u == *u).ok_or_else(|| {
                    Error::InvalidInput(format!("normal {u} is not a side normal"))
                })?;
                Ok(Root { a: a.clone(), side })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(polygon, roots, allow_degenerate)
    }

    pub fn polygon(&self) -> &LatticePolygon {
        &self.polygon
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn n(&self) -> usize {
        self.roots.len()
    }

    pub fn values(&self) -> Vec<Q> {
        self.roots.iter().map(|r| r.a.clone()).collect()
    }

    pub fn normals(&self) -> Vec<LatticePoint> {
        let edges = self.polygon.edges();
        self.roots.iter().map(|r| edges[r.side].u).collect()
    }

    /// Same curve class with new root values, validated again.
    pub fn with_values(&self, values: &[Q]) -> Result<Self> {
        let roots = self
            .roots
            .iter()
            .zip(values)
            .map(|(r, a)| Root { a: a.clone(), side: r.side })
            .collect();
        Self::new(self.polygon.clone(), roots, self.degenerate)
    }

    pub fn evaluate_torus(&self, t: Param) -> (Coord, Coord) {
        let t = match t {
            // Σ u_i = 0, so both coordinates tend to 1.
            Param::Infinity => {
                return (Coord::Finite(Complex64::new(1.0, 0.0)), Coord::Finite(Complex64::new(1.0, 0.0)))
            }
            Param::Finite(t) => t,
        };
        let normals = self.normals();
        let mut groups: Vec<(Q, LatticePoint)> = Vec::new();
        for (r, u) in self.roots.iter().zip(&normals) {
            match groups.iter_mut().find(|(a, _)| *a == r.a) {
                Some((_, e)) => *e = e.add(*u),
                None => groups.push((r.a.clone(), *u)),
            }
        }
        let mut x = Complex64::new(1.0, 0.0);
        let mut y = Complex64::new(1.0, 0.0);
        let (mut xo, mut yo) = (0i64, 0i64);
        for (a, e) in &groups {
            let d = t - Complex64::new(to_f64(a), 0.0);
            if d.is_zero() {
                xo += e.x;
                yo += e.y;
            } else {
                x *= d.powi(e.x as i32);
                y *= d.powi(e.y as i32);
            }
        }
        let flag = |v: Complex64, o: i64| match o.signum() {
            1 => Coord::Zero,
            -1 => Coord::Infinity,
            _ => Coord::Finite(v),
        };
        (flag(x, xo), flag(y, yo))
    }

    /// Tentacle positions `ρ_i = Σ_j (u_j ∧ u_i) log|a_i − a_j|`.
    pub fn rho(&self) -> Result<Vec<f64>> {
        let a: Vec<f64> = self.roots.iter().map(|r| to_f64(&r.a)).collect();
        let u = self.normals();
        self.check_collisions()?;
        Ok(rho_f64(&a, &u))
    }

    fn check_collisions(&self) -> Result<()> {
        let u = self.normals();
        for i in 0..self.n() {
            for j in 0..i {
                if self.roots[i].a == self.roots[j].a && u[i].wedge(u[j]) != 0 {
                    return Err(Error::SingularConfiguration(format!(
                        "roots {j} and {i} coincide on non-parallel sides"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Exact Jacobian of ρ.
    pub fn jacobian(&self) -> Result<Matrix> {
        self.check_collisions()?;
        Ok(d_matrix(&self.values(), &self.normals()))
    }

    /// Möbius action `a ↦ a / (1 − c a)`, kept in the configuration's list order.
    pub fn mobius(&self, c: &Q) -> Result<Vec<Q>> {
        self.roots
            .iter()
            .map(|r| {
                let den = Q::from_integer(1.into()) - c * &r.a;
                if den.is_zero() {
                    Err(Error::SingularConfiguration(format!("root {} is sent to infinity", r.a)))
                } else {
                    Ok(&r.a / den)
                }
            })
            .collect()
    }

    /// Merges the last root of `side` with the first root of the next side.
    pub fn cut_config(&self, side: usize) -> Result<Self> {
        let edges = self.polygon.edges();
        let m = edges.len();
        if side >= m {
            return Err(Error::InvalidInput(format!("side {side} out of range")));
        }
        let next = (side + 1) % m;
        let v = edges[side].end;
        let cut = self.polygon.cut_vertex(v)?;
        let n = self.n();
        let normals = self.normals();
        let last = (0..n).rev().find(|&i| self.roots[i].side == side).unwrap();
        let first = (0..n).find(|&i| self.roots[i].side == next).unwrap();
        let sum = normals[last].add(normals[first]);
        let h = sum.content();
        let u = sum.primitive();
        let a = self.roots[last].a.clone();
        let mut pairs: Vec<(Q, LatticePoint)> = Vec::with_capacity(n - 2 + h as usize);
        // `last` immediately precedes `first` cyclically.
        for k in 0..n {
            let i = (first + 1 + k) % n;
            if i == last || i == first {
                continue;
            }
            pairs.push((self.roots[i].a.clone(), normals[i]));
        }
        for _ in 0..h {
            pairs.push((a.clone(), u));
        }
        Self::from_normals(cut, &pairs, true)
    }

    /// The `d`-th dilation: every root repeated `d` times.
    pub fn dilate(&self, d: i64) -> Result<Self> {
        let poly = self.polygon.dilate(d)?;
        let roots = self
            .roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.clone(), d as usize))
            .collect();
        Self::new(poly, roots, self.degenerate)
    }

    pub fn to_json(&self) -> Value {
        let roots: Vec<Value> = self
            .roots
            .iter()
            .map(|r| json!({ "a": r.a.to_string(), "side": r.side }))
            .collect();
        json!({ "polygon": self.polygon.to_json(), "roots": roots })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let polygon = LatticePolygon::from_json(
            v.get("polygon").ok_or_else(|| Error::Parse("curve needs \"polygon\"".into()))?,
        )?;
        let roots = v
            .get("roots")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("curve needs a \"roots\" array".into()))?
            .iter()
            .map(|r| {
                let a = rational::from_json(r.get("a").ok_or_else(|| Error::Parse("root without \"a\"".into()))?)?;
                let side = r
                    .get("side")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::Parse("root without integer \"side\"".into()))?;
                Ok(Root { a, side: side as usize })
            })
            .collect::<Result<Vec<_>>>()?;
        let allow = v.get("degenerate").and_then(Value::as_bool).unwrap_or(false);
        Self::new(polygon, roots, allow)
    }
}

/// ρ for floating root values; terms with parallel normals are skipped.
pub fn rho_f64(a: &[f64], u: &[LatticePoint]) -> Vec<f64> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i && u[j].wedge(u[i]) != 0)
                .map(|j| u[j].wedge(u[i]) as f64 * (a[i] - a[j]).abs().ln())
                .sum()
        })
        .collect()
}

/// `D_ij = (u_i ∧ u_j)/(a_i − a_j)` off the diagonal, negative row sums on it.
pub fn d_matrix(a: &[Q], u: &[LatticePoint]) -> Matrix {
    let n = a.len();
    let mut d = linalg::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let w = u[i].wedge(u[j]);
            if i != j && w != 0 {
                d[i][j] = q(w) / (&a[i] - &a[j]);
            }
        }
    }
    for i in 0..n {
        let s: Q = d[i].iter().sum();
        d[i][i] = -s;
    }
    d
}

/// Inner normals of the unit triangle in canonical order.
pub fn unit_triangle_normals() -> [LatticePoint; 3] {
    [LatticePoint::new(0, 1), LatticePoint::new(-1, -1), LatticePoint::new(1, 0)]
}

pub fn t_matrix(a: &Q, b: &Q, c: &Q) -> Result<Matrix> {
    if a == b || b == c || a == c {
        return Err(Error::InvalidInput("T(a,b,c) needs distinct arguments".into()));
    }
    Ok(d_matrix(&[a.clone(), b.clone(), c.clone()], &unit_triangle_normals()))
}

/// `((a−b)² + (b−c)² + (c−a)²) / ((a−b)(b−c)(c−a))`.
pub fn t_eigenvalue(a: &Q, b: &Q, c: &Q) -> Q {
    let (x, y, z) = (a - b, b - c, c - a);
    (&x * &x + &y * &y + &z * &z) / (x * y * z)
}

/// Eigenvalues of a symmetric rational matrix, ascending.
pub fn eigenvalues(m: &Matrix) -> Vec<f64> {
    let n = m.len();
    let dm = DMatrix::from_fn(n, n, |i, j| to_f64(&m[i][j]));
    let mut ev: Vec<f64> = SymmetricEigen::new(dm).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Central finite-difference Jacobian of ρ.
pub fn finite_difference_jacobian(c: &RootConfig, step: f64) -> Vec<Vec<f64>> {
    let a: Vec<f64> = c.roots.iter().map(|r| to_f64(&r.a)).collect();
    let u = c.normals();
    let n = a.len();
    let mut out = vec![vec![0.0; n]; n];
    for j in 0..n {
        let mut ap = a.clone();
        let mut am = a.clone();
        ap[j] += step;
        am[j] -= step;
        let rp = rho_f64(&ap, &u);
        let rm = rho_f64(&am, &u);
        for i in 0..n {
            out[i][j] = (rp[i] - rm[i]) / (2.0 * step);
        }
    }
    out
}

/// Outcome of the Möbius covariance law for ρ.
#[derive(Debug, Clone)]
pub struct MobiusReport {
    pub rho_before: Vec<f64>,
    pub rho_after: Vec<f64>,
    pub translation: [f64; 2],
    pub max_error: f64,
}

/// Checks `ρ(a/(1−ca)) − ρ(a) = (x ∧ u_i)` with `x = −Σ log|1 − c a_j| u_j`.
pub fn mobius_covariance_check(cfg: &RootConfig, c: &Q) -> Result<MobiusReport> {
    let moved = cfg.mobius(c)?;
    let u = cfg.normals();
    let before = cfg.rho()?;
    let af: Vec<f64> = moved.iter().map(to_f64).collect();
    let after = rho_f64(&af, &u);
    let cf = to_f64(c);
    let mut x = [0.0, 0.0];
    for (r, ui) in cfg.roots.iter().zip(&u) {
        let l = (1.0 - cf * to_f64(&r.a)).abs().ln();
        x[0] -= l * ui.x as f64;
        x[1] -= l * ui.y as f64;
    }
    let max_error = u
        .iter()
        .enumerate()
        .map(|(i, ui)| {
            let pred = x[0] * ui.y as f64 - x[1] * ui.x as f64;
            (after[i] - before[i] - pred).abs()
        })
        .fold(0.0, f64::max);
    Ok(MobiusReport { rho_before: before, rho_after: after, translation: x, max_error })
}

/// Random nondegenerate configuration with strictly increasing rational roots.
pub fn sample_harnack(polygon: &LatticePolygon, seed: u64) -> RootConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = polygon.edges();
    let mut a = qf(rng.gen_range(-20..=0), rng.gen_range(1..=4));
    let mut roots = Vec::new();
    for (side, e) in edges.iter().enumerate() {
        for _ in 0..e.d {
            roots.push(Root { a: a.clone(), side });
            a += qf(rng.gen_range(1..=12), rng.gen_range(1..=4));
        }
    }
    RootConfig::new(polygon.clone(), roots, false).expect("sampled roots are strictly increasing")
}

/// Random rationals with pairwise distinct values.
pub fn random_distinct_rationals(rng: &mut impl Rng, n: usize) -> Vec<Q> {
    let mut out: Vec<Q> = Vec::with_capacity(n);
    while out.len() < n {
        let x = qf(rng.gen_range(-60..=60), rng.gen_range(1..=7));
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

pub fn is_psd_with_tolerance(ev: &[f64], guard: f64) -> bool {
    ev.iter().all(|&x| x >= -guard)
}

pub fn max_abs(m: &Matrix) -> Q {
    m.iter().flatten().map(|x| x.abs()).fold(Q::zero(), |a, b| if b > a { b } else { a })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn line_config() -> RootConfig {
        let p = LatticePolygon::unit_triangle();
        let roots = (0..3).map(|i| Root { a: q(i as i64), side: i }).collect();
        RootConfig::new(p, roots, false).unwrap()
    }

    #[test]
    fn evaluation_matches_hand_computation() {
        let c = line_config();
        let (x, y) = c.evaluate_torus(Param::Finite(Complex64::new(3.0, 0.0)));
        assert!((x.value().unwrap() - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((y.value().unwrap() - Complex64::new(1.5, 0.0)).norm() < 1e-15);
        let (x, y) = c.evaluate_torus(Param::Infinity);
        assert_eq!((x, y), (Coord::Finite(1.0.into()), Coord::Finite(1.0.into())));
    }

    #[test]
    fn poles_and_zeros_are_flagged() {
        let c = line_config();
        // t = 1 carries u = (-1,-1): both coordinates blow up.
        assert_eq!(c.evaluate_torus(Param::Finite(1.0.into())), (Coord::Infinity, Coord::Infinity));
        // t = 0 carries u = (0,1): y vanishes, x finite.
        let (x, y) = c.evaluate_torus(Param::Finite(0.0.into()));
        assert_eq!(y, Coord::Zero);
        assert!(matches!(x, Coord::Finite(_)));
    }

    #[test]
    fn rho_of_the_line() {
        let r = line_config().rho().unwrap();
        let l2 = 2f64.ln();
        assert!((r[0] - l2).abs() < 1e-15 && r[1].abs() < 1e-15 && (r[2] + l2).abs() < 1e-15);
    }

    #[test]
    fn t_matrix_entries() {
        let t = t_matrix(&q(0), &q(1), &q(2)).unwrap();
        assert_eq!(t[0][1], q(-1));
        assert_eq!(t[0][2], qf(1, 2));
        assert_eq!(t[1][2], q(-1));
        assert_eq!((t[0][0].clone(), t[1][1].clone(), t[2][2].clone()), (qf(1, 2), q(2), qf(1, 2)));
        assert_eq!(t_eigenvalue(&q(0), &q(1), &q(2)), q(3));
        assert!(t_matrix(&q(0), &q(0), &q(2)).is_err());
    }

    #[test]
    fn ordering_and_collision_errors() {
        let p = LatticePolygon::unit_triangle();
        let bad = vec![
            Root { a: q(0), side: 0 },
            Root { a: q(2), side: 1 },
            Root { a: q(1), side: 2 },
        ];
        assert!(matches!(RootConfig::new(p.clone(), bad, false), Err(Error::OrderingViolation(_))));
        let wrapped = vec![
            Root { a: q(5), side: 0 },
            Root { a: q(-1), side: 1 },
            Root { a: q(1), side: 2 },
        ];
        assert!(RootConfig::new(p.clone(), wrapped, false).is_ok());
        let coll = vec![
            Root { a: q(0), side: 0 },
            Root { a: q(0), side: 1 },
            Root { a: q(2), side: 2 },
        ];
        assert!(matches!(
            RootConfig::new(p.clone(), coll.clone(), false),
            Err(Error::SingularConfiguration(_))
        ));
        let c = RootConfig::new(p.clone(), coll, true).unwrap();
        assert!(c.is_degenerate());
        assert!(c.rho().is_err());
        let sq = LatticePolygon::unit_square();
        let unordered = vec![
            Root { a: q(0), side: 0 },
            Root { a: q(2), side: 1 },
            Root { a: q(1), side: 2 },
            Root { a: q(3), side: 3 },
        ];
        assert!(matches!(RootConfig::new(sq, unordered, false), Err(Error::OrderingViolation(_))));
    }

    #[test]
    fn cut_config_on_square() {
        let sq = LatticePolygon::unit_square();
        let roots = (0..4).map(|i| Root { a: q(i as i64), side: i }).collect();
        let c = RootConfig::new(sq, roots, false).unwrap();
        let cut = c.cut_config(0).unwrap();
        assert_eq!(cut.n(), 3);
        assert!(cut.normals().contains(&LatticePoint::new(-1, 1)));
        assert!(cut.cut_config(0).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let p = LatticePolygon::cross_polytope();
        assert_eq!(sample_harnack(&p, 7), sample_harnack(&p, 7));
        assert_ne!(sample_harnack(&p, 7), sample_harnack(&p, 8));
    }
}
