//! Global coordinates on rational Harnack curves modulo the torus and Möbius actions.
//!
//! The Möbius gauge sends the first roots of sides 0, 1, 2 to 0, 1, 2. Later
//! roots may then pass through ∞, so positions are read through the arc
//! coordinate `Φ`, which is the identity on `[0, 2]` and `y ↦ 3 − 2/y` on the
//! arc from 2 through ∞ back to 0. `Φ` is monotone along the cyclic order, so
//! every coordinate is a finite rational.

use num::{One, Signed, Zero};
use serde_json::{json, Value};

use super::{Root, RootConfig};
use crate::error::{Error, Result};
use crate::lattice::LatticePolygon;
use crate::rational::{self, q, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuliChart {
    /// Positions of the first roots of sides 3, 4, ….
    pub free: Vec<Q>,
    /// Gaps between consecutive roots on the same side.
    pub nonneg: Vec<Q>,
}

impl ModuliChart {
    pub fn dimension(&self) -> usize {
        self.free.len() + self.nonneg.len()
    }

    pub fn to_json(&self) -> Value {
        let s = |v: &[Q]| v.iter().map(|x| Value::String(x.to_string())).collect::<Vec<_>>();
        json!({ "free": s(&self.free), "nonneg": s(&self.nonneg) })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let read = |k: &str| -> Result<Vec<Q>> {
            v.get(k)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("chart needs \"{k}\"")))?
                .iter()
                .map(rational::from_json)
                .collect()
        };
        Ok(ModuliChart { free: read("free")?, nonneg: read("nonneg")? })
    }
}

/// Homogeneous image `(num, den)` of `t` under `[[a, b], [c, d]]`.
fn apply(m: &[[Q; 2]; 2], t: &Q) -> (Q, Q) {
    (&m[0][0] * t + &m[0][1], &m[1][0] * t + &m[1][1])
}

fn phi(num: &Q, den: &Q) -> Q {
    if den.is_zero() {
        return q(3);
    }
    let y = num / den;
    if !y.is_negative() && y <= q(2) {
        y
    } else {
        q(3) - q(2) / y
    }
}

/// Inverse of `Φ` as a homogeneous pair.
fn phi_inv(theta: &Q) -> (Q, Q) {
    if theta <= &q(2) {
        (theta.clone(), Q::one())
    } else {
        (q(2), q(3) - theta)
    }
}

/// Möbius map sending `p0, p1, p2` to `0, 1, 2`.
fn gauge(p0: &Q, p1: &Q, p2: &Q) -> [[Q; 2]; 2] {
    // S: p0 -> 0, p1 -> 1, p2 -> ∞, then R: s -> 2s / (s + 1).
    let s = [
        [p1 - p2, -(p0 * (p1 - p2))],
        [p1 - p0, -(p2 * (p1 - p0))],
    ];
    let r = [[q(2), Q::zero()], [Q::one(), Q::one()]];
    let mut m: [[Q; 2]; 2] = Default::default();
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = &r[i][0] * &s[0][j] + &r[i][1] * &s[1][j];
        }
    }
    m
}

/// Arc coordinates of every root in list order.
pub fn arc_positions(c: &RootConfig) -> Result<Vec<Q>> {
    if c.is_degenerate() {
        return Err(Error::SingularConfiguration("chart needs a nondegenerate configuration".into()));
    }
    let roots = c.roots();
    let first = |s: usize| roots.iter().find(|r| r.side == s).map(|r| r.a.clone()).unwrap();
    let m = gauge(&first(0), &first(1), &first(2));
    let theta: Vec<Q> = roots
        .iter()
        .map(|r| {
            let (n, d) = apply(&m, &r.a);
            phi(&n, &d)
        })
        .collect();
    if theta.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::OrderingViolation("roots are not cyclically ordered".into()));
    }
    Ok(theta)
}

pub fn chart(c: &RootConfig) -> Result<ModuliChart> {
    let theta = arc_positions(c)?;
    let roots = c.roots();
    let m = c.polygon().edges().len();
    let mut free = Vec::with_capacity(m.saturating_sub(3));
    let mut nonneg = Vec::new();
    for (i, r) in roots.iter().enumerate() {
        let first_of_side = i == 0 || roots[i - 1].side != r.side;
        if first_of_side {
            if r.side >= 3 {
                free.push(theta[i].clone());
            }
        } else {
            nonneg.push(&theta[i] - &theta[i - 1]);
        }
    }
    Ok(ModuliChart { free, nonneg })
}

/// A configuration with the given chart coordinates, all roots finite.
pub fn unchart(ch: &ModuliChart, polygon: &LatticePolygon) -> Result<RootConfig> {
    let edges = polygon.edges();
    let m = edges.len();
    let n = polygon.boundary_count() as usize;
    if ch.free.len() != m - 3 || ch.nonneg.len() != n - m {
        return Err(Error::InvalidInput(format!(
            "chart for this polygon needs {} free and {} nonnegative coordinates",
            m - 3,
            n - m
        )));
    }
    if ch.nonneg.iter().any(|g| g.is_negative()) {
        return Err(Error::OrderingViolation("gap coordinates must be nonnegative".into()));
    }
    let mut theta: Vec<(Q, usize)> = Vec::with_capacity(n);
    let mut gaps = ch.nonneg.iter();
    for (s, e) in edges.iter().enumerate() {
        let start = if s < 3 { q(s as i64) } else { ch.free[s - 3].clone() };
        if let Some((prev, _)) = theta.last() {
            if &start <= prev {
                return Err(Error::OrderingViolation(format!(
                    "side {s} starts at {start}, not after {prev}"
                )));
            }
        }
        let mut x = start;
        theta.push((x.clone(), s));
        for _ in 1..e.d {
            x += gaps.next().unwrap();
            theta.push((x.clone(), s));
        }
    }
    // Send a point just past the last root to ∞ so that every root is finite.
    let last = theta.last().unwrap().0.clone();
    let (zn, zd) = phi_inv(&(last + Q::one()));
    let roots = theta
        .into_iter()
        .map(|(t, side)| {
            let (yn, yd) = phi_inv(&t);
            let a = if zd.is_zero() {
                yn / yd
            } else if yd.is_zero() {
                Q::zero()
            } else {
                // τ(y) = 1 / (z − y).
                let diff = &zn / &zd - &yn / &yd;
                Q::one() / diff
            };
            Root { a, side }
        })
        .collect();
    RootConfig::new(polygon.clone(), roots, false)
}

/// `(m − 3, n − m, n + g − 3)` for a polygon.
pub fn moduli_dimensions(polygon: &LatticePolygon) -> (usize, usize, i64) {
    let s = polygon.stats();
    (s.m - 3, s.n as usize - s.m, s.n + s.g - 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harnack::sample_harnack;

    #[test]
    fn triangle_chart_is_a_point() {
        let c = sample_harnack(&LatticePolygon::unit_triangle(), 3);
        assert_eq!(chart(&c).unwrap().dimension(), 0);
    }

    #[test]
    fn cross_polytope_has_one_free_coordinate() {
        let c = sample_harnack(&LatticePolygon::cross_polytope(), 3);
        let ch = chart(&c).unwrap();
        assert_eq!((ch.free.len(), ch.nonneg.len()), (1, 0));
        assert!(ch.free[0] > q(2));
    }

    #[test]
    fn round_trip_is_exact() {
        for p in [
            LatticePolygon::unit_square(),
            LatticePolygon::dilated_triangle(3).unwrap(),
            LatticePolygon::from_coords(&[(0, 0), (2, 0), (3, 1), (1, 3), (0, 1)]).unwrap(),
        ] {
            for seed in 0..10 {
                let c = sample_harnack(&p, seed);
                let ch = chart(&c).unwrap();
                let back = unchart(&ch, &p).unwrap();
                assert_eq!(chart(&back).unwrap(), ch);
            }
        }
    }

    #[test]
    fn unchart_rejects_bad_coordinates() {
        let sq = LatticePolygon::unit_square();
        let bad = ModuliChart { free: vec![q(1)], nonneg: vec![] };
        assert!(matches!(unchart(&bad, &sq), Err(Error::OrderingViolation(_))));
        let wrong_len = ModuliChart { free: vec![], nonneg: vec![] };
        assert!(unchart(&wrong_len, &sq).is_err());
        let tri = LatticePolygon::dilated_triangle(2).unwrap();
        let neg = ModuliChart { free: vec![], nonneg: vec![q(-1), q(0), q(0)] };
        assert!(matches!(unchart(&neg, &tri), Err(Error::OrderingViolation(_))));
    }

    #[test]
    fn dimensions() {
        assert_eq!(moduli_dimensions(&LatticePolygon::cross_polytope()), (1, 0, 2));
        assert_eq!(moduli_dimensions(&LatticePolygon::dilated_triangle(3).unwrap()), (0, 6, 7));
    }
}
