//! Positive decompositions of the tentacle Jacobian into T-matrices.
//!
//! The construction follows the dilate-and-cut route. The base case
//! `D(a,b,c; De₁,De₂,De₃) = D²·T(a,b,c)` is spread over the unit segments
//! of the dilated triangle. Each cut then merges two adjacent segments, and
//! the final merge collapses the `d2` copies of every target segment before
//! rescaling by `1/d2²`. Symbols are tracked by the start point of their
//! boundary segment.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{d_matrix, random_distinct_rationals, t_matrix};
use crate::error::{Error, Result};
use crate::lattice::{cut_plan, rotation_of, LatticePoint, LatticePolygon};
use crate::linalg::{self, Matrix};
use crate::rational::{self, q, Q};

/// Largest `d1·d2` accepted; the base case alone holds `(d1·d2)³` terms.
pub const MAX_DILATION: i64 = 48;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TTerm {
    pub ijk: [usize; 3],
    pub coef: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TDecomposition {
    pub terms: Vec<TTerm>,
}

impl TDecomposition {
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|t| json!({ "ijk": t.ijk, "coef": t.coef.to_string() }))
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("decomposition must be an array".into()))?;
        let terms = arr
            .iter()
            .map(|t| {
                let ijk: [usize; 3] = serde_json::from_value(t.get("ijk").cloned().unwrap_or(Value::Null))
                    .map_err(|e| Error::Parse(format!("ijk: {e}")))?;
                let coef = rational::from_json(t.get("coef").unwrap_or(&Value::Null))?;
                Ok(TTerm { ijk, coef })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TDecomposition { terms })
    }

    /// `Σ coef · T(a_i, a_j, a_k)` embedded in an `n × n` matrix.
    pub fn evaluate(&self, a: &[Q]) -> Result<Matrix> {
        let n = a.len();
        let mut m = linalg::zeros(n, n);
        for t in &self.terms {
            let [i, j, k] = t.ijk;
            let tm = t_matrix(&a[i], &a[j], &a[k])?;
            let idx = [i, j, k];
            for r in 0..3 {
                for c in 0..3 {
                    m[idx[r]][idx[c]] += &t.coef * &tm[r][c];
                }
            }
        }
        Ok(m)
    }
}

#[derive(Debug, Clone)]
struct Seg {
    id: usize,
    start: LatticePoint,
    u: LatticePoint,
}

/// Boundary segments in cyclic order, with terms keyed by segment ids so
/// that rotations are free and a merge touches only the merged segments.
struct State {
    segs: Vec<Seg>,
    next_id: usize,
    terms: BTreeMap<[usize; 3], Q>,
    by_id: HashMap<usize, BTreeSet<[usize; 3]>>,
}

fn sorted(mut t: [usize; 3]) -> [usize; 3] {
    t.sort_unstable();
    t
}

impl State {
    fn new(segs: Vec<(LatticePoint, LatticePoint)>) -> Self {
        let segs: Vec<Seg> = segs.into_iter().enumerate().map(|(id, (start, u))| Seg { id, start, u }).collect();
        State { next_id: segs.len(), segs, terms: BTreeMap::new(), by_id: HashMap::new() }
    }

    fn add(&mut self, key: [usize; 3], c: Q) {
        let key = sorted(key);
        let e = self.terms.entry(key).or_insert_with(Q::zero);
        *e += c;
        for i in key {
            self.by_id.entry(i).or_default().insert(key);
        }
    }

    fn remove(&mut self, key: [usize; 3]) -> Option<Q> {
        let c = self.terms.remove(&key)?;
        for i in key {
            if let Some(s) = self.by_id.get_mut(&i) {
                s.remove(&key);
            }
        }
        Some(c)
    }

    fn rotate(&mut self, r: usize) {
        let n = self.segs.len();
        self.segs.rotate_left(r % n);
    }

    /// Replaces positions `0..len` by segments with the given starts and normal.
    ///
    /// Terms touching two merged segments vanish after the substitution;
    /// terms touching one are shared equally among the new copies.
    fn merge_front(&mut self, len: usize, starts: Vec<LatticePoint>, u: LatticePoint) {
        let gone: Vec<usize> = self.segs[..len].iter().map(|s| s.id).collect();
        let new: Vec<Seg> = starts
            .into_iter()
            .enumerate()
            .map(|(k, start)| Seg { id: self.next_id + k, start, u })
            .collect();
        self.next_id += new.len();
        let keys: BTreeSet<[usize; 3]> =
            gone.iter().flat_map(|i| self.by_id.remove(i).unwrap_or_default()).collect();
        let share_of = |c: &Q| c / q(new.len() as i64);
        for key in keys {
            let Some(c) = self.remove(key) else { continue };
            let inside = key.iter().filter(|i| gone.contains(i)).count();
            if inside == 1 {
                let share = share_of(&c);
                for s in &new {
                    self.add(key.map(|i| if gone.contains(&i) { s.id } else { i }), share.clone());
                }
            }
        }
        self.segs.splice(0..len, new);
    }

    fn position_of(&self, p: LatticePoint) -> Option<usize> {
        self.segs.iter().position(|s| s.start == p)
    }

    fn cut(&mut self, v: LatticePoint) -> Result<()> {
        let n = self.segs.len();
        let k = self
            .position_of(v)
            .ok_or_else(|| Error::VerificationFailed(format!("cut vertex {v} not on the boundary")))?;
        self.rotate((k + n - 1) % n);
        let (a, b) = (self.segs[0].clone(), self.segs[1].clone());
        let after = self.segs[2 % self.segs.len()].start;
        let sum = a.u.add(b.u);
        let h = sum.content();
        let step = after.sub(a.start);
        let dir = LatticePoint::new(step.x / h, step.y / h);
        self.merge_front(2, (0..h).map(|i| a.start.add(dir.scale(i))).collect(), sum.primitive());
        Ok(())
    }
}

/// T-decomposition of `D(a; u)` for a cyclically ordered normal sequence.
///
/// Indices in the result refer to positions in `normals`; every coefficient
/// is positive. The result is verified by exact substitution before return.
pub fn t_decompose(normals: &[LatticePoint]) -> Result<TDecomposition> {
    if let Some(u) = normals.iter().find(|u| !u.is_primitive()) {
        return Err(Error::InvalidInput(format!("normal {u} is not primitive")));
    }
    let target = LatticePolygon::from_normal_sequence(normals)?;
    let plan = cut_plan(&target)?;
    let big = plan.d1 * plan.d2;
    if big > MAX_DILATION {
        return Err(Error::CapExceeded(format!("cut plan dilates by {big}, cap is {MAX_DILATION}")));
    }
    let base = LatticePolygon::dilated_triangle(big)?;
    let mut st = State::new(base.boundary_points().into_iter().zip(base.normal_sequence()).collect());
    let b = big as usize;
    let share = Q::one() / q(big);
    for i in 0..b {
        for j in b..2 * b {
            for k in 2 * b..3 * b {
                st.add([i, j, k], share.clone());
            }
        }
    }
    for &v in &plan.cuts {
        st.cut(v)?;
    }
    // Collapse the d2 copies of each target segment.
    let d2 = plan.d2 as usize;
    let target_starts = target.boundary_points();
    let first = target_starts[0].scale(plan.d2).add(plan.offset);
    let k0 = st
        .position_of(first)
        .ok_or_else(|| Error::VerificationFailed("dilated target not reached".into()))?;
    st.rotate(k0);
    if st.segs.len() != d2 * target_starts.len() {
        return Err(Error::VerificationFailed("segment count mismatch after cuts".into()));
    }
    for _ in 0..target_starts.len() {
        let u = st.segs[0].u;
        if st.segs[..d2].iter().any(|s| s.u != u) {
            return Err(Error::VerificationFailed("block normals differ".into()));
        }
        let start = st.segs[0].start;
        st.merge_front(d2, vec![start], u.scale(plan.d2));
        st.rotate(1);
    }
    // Back to the first target segment at position 0.
    let position: HashMap<usize, usize> = st.segs.iter().enumerate().map(|(p, s)| (s.id, p)).collect();
    let scale = Q::one() / q(plan.d2 * plan.d2);
    let canon = target.normal_sequence();
    let r = rotation_of(&canon, normals)
        .ok_or_else(|| Error::OrderingViolation("normals are not cyclically ordered".into()))?;
    let n = normals.len();
    let mut terms: BTreeMap<[usize; 3], Q> = BTreeMap::new();
    for (key, c) in st.terms {
        if c.is_zero() {
            continue;
        }
        let mapped = sorted(key.map(|id| (position[&id] + n - r) % n));
        *terms.entry(mapped).or_insert_with(Q::zero) += c * &scale;
    }
    let dec = TDecomposition {
        terms: terms.into_iter().map(|(ijk, coef)| TTerm { ijk, coef }).collect(),
    };
    if let Some(t) = dec.terms.iter().find(|t| !t.coef.is_positive()) {
        return Err(Error::VerificationFailed(format!("non-positive coefficient at {:?}", t.ijk)));
    }
    verify_t_decomposition(normals, &dec, 0x7d_ec, 5)?;
    Ok(dec)
}

/// Checks `Σ coef·T = D` exactly at `trials` random rational root tuples.
pub fn verify_t_decomposition(
    normals: &[LatticePoint],
    dec: &TDecomposition,
    seed: u64,
    trials: usize,
) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let a = random_distinct_rationals(&mut rng, normals.len());
        let d = d_matrix(&a, normals);
        let s = dec.evaluate(&a)?;
        if d != s {
            let (i, j) = (0..d.len())
                .flat_map(|i| (0..d.len()).map(move |j| (i, j)))
                .find(|&(i, j)| d[i][j] != s[i][j])
                .unwrap();
            return Err(Error::VerificationFailed(format!(
                "trial {trial}: entry ({i},{j}) is {} but D has {}",
                s[i][j], d[i][j]
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_triangle_is_a_single_term() {
        let u = LatticePolygon::unit_triangle().normal_sequence();
        let dec = t_decompose(&u).unwrap();
        assert_eq!(dec.terms, vec![TTerm { ijk: [0, 1, 2], coef: Q::one() }]);
    }

    #[test]
    fn assorted_polygons_decompose() {
        for p in [
            LatticePolygon::dilated_triangle(2).unwrap(),
            LatticePolygon::unit_square(),
            LatticePolygon::cross_polytope(),
            LatticePolygon::from_coords(&[(0, 0), (3, 1), (1, 2)]).unwrap(),
            LatticePolygon::from_coords(&[(0, 0), (2, 0), (3, 1), (1, 3), (0, 1)]).unwrap(),
        ] {
            let u = p.normal_sequence();
            let dec = t_decompose(&u).unwrap();
            assert!(dec.terms.iter().all(|t| t.coef.is_positive()));
            verify_t_decomposition(&u, &dec, 99, 5).unwrap();
        }
    }

    #[test]
    fn rotated_input_order_is_respected() {
        let mut u = LatticePolygon::cross_polytope().normal_sequence();
        u.rotate_left(1);
        let dec = t_decompose(&u).unwrap();
        verify_t_decomposition(&u, &dec, 5, 5).unwrap();
    }

    #[test]
    fn corrupted_decomposition_is_rejected() {
        let u = LatticePolygon::unit_square().normal_sequence();
        let mut dec = t_decompose(&u).unwrap();
        dec.terms[0].coef *= q(2);
        assert!(verify_t_decomposition(&u, &dec, 1, 5).is_err());
    }

    #[test]
    fn json_round_trip() {
        let u = LatticePolygon::unit_square().normal_sequence();
        let dec = t_decompose(&u).unwrap();
        assert_eq!(TDecomposition::from_json(&dec.to_json()).unwrap(), dec);
    }
}
