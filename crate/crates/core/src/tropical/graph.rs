//! Weighted graphs with legs and (possibly infinite) edge lengths.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 12;
const LENGTH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct GraphEdge {
    pub u: usize,
    pub v: usize,
    /// Positive, zero before contraction, or `f64::INFINITY`.
    pub len: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbstractTropicalCurve {
    pub weights: Vec<u32>,
    pub edges: Vec<GraphEdge>,
    /// `legs[i]` is the vertex carrying leg `i`.
    pub legs: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Element {
    Edge(usize),
    Leg(usize),
}

impl AbstractTropicalCurve {
    pub fn new(weights: Vec<u32>, edges: Vec<GraphEdge>, legs: Vec<usize>) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            return Err(Error::InvalidInput("graph has no vertices".into()));
        }
        for e in &edges {
            if e.u >= n || e.v >= n {
                return Err(Error::InvalidInput(format!("edge ({}, {}) out of range", e.u, e.v)));
            }
            if e.len.is_nan() || e.len < 0.0 {
                return Err(Error::InvalidInput(format!("edge length {} is negative", e.len)));
            }
        }
        if let Some(l) = legs.iter().find(|&&l| l >= n) {
            return Err(Error::InvalidInput(format!("leg at missing vertex {l}")));
        }
        let g = AbstractTropicalCurve { weights, edges, legs };
        if !g.is_connected() {
            return Err(Error::InvalidInput("graph is disconnected".into()));
        }
        Ok(g)
    }

    fn is_connected(&self) -> bool {
        let n = self.weights.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for e in &self.edges {
                for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                    if a == x && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// `Σ w − |V| + |E| + 1`.
    pub fn genus(&self) -> i64 {
        self.weights.iter().map(|&w| w as i64).sum::<i64>() - self.weights.len() as i64
            + self.edges.len() as i64
            + 1
    }

    /// Edge ends plus legs; a loop counts twice.
    pub fn degree(&self, x: usize) -> usize {
        let e: usize = self.edges.iter().map(|e| (e.u == x) as usize + (e.v == x) as usize).sum();
        e + self.legs.iter().filter(|&&l| l == x).count()
    }

    /// Weight-0 vertices have degree at least 3, weight-1 vertices at least 1.
    pub fn is_stable(&self) -> bool {
        (0..self.weights.len()).all(|x| match self.weights[x] {
            0 => self.degree(x) >= 3,
            1 => self.degree(x) >= 1,
            _ => true,
        })
    }

    pub fn contract(&self, el: Element) -> Result<Self> {
        let e = match el {
            Element::Leg(i) => return Err(Error::InvalidInput(format!("leg {i} cannot be contracted"))),
            Element::Edge(e) => e,
        };
        let edge = self
            .edges
            .get(e)
            .ok_or_else(|| Error::InvalidInput(format!("no edge {e}")))?
            .clone();
        let mut g = self.clone();
        g.edges.remove(e);
        if edge.u == edge.v {
            g.weights[edge.u] += 1;
            return Ok(g);
        }
        let (keep, gone) = (edge.u.min(edge.v), edge.u.max(edge.v));
        g.weights[keep] += g.weights[gone];
        g.weights.remove(gone);
        let re = |x: usize| match x.cmp(&gone) {
            std::cmp::Ordering::Equal => keep,
            std::cmp::Ordering::Greater => x - 1,
            std::cmp::Ordering::Less => x,
        };
        for f in &mut g.edges {
            f.u = re(f.u);
            f.v = re(f.v);
        }
        for l in &mut g.legs {
            *l = re(*l);
        }
        Ok(g)
    }

    pub fn contract_zero_edges(&self) -> Self {
        let mut g = self.clone();
        while let Some(e) = g.edges.iter().position(|e| e.len == 0.0) {
            g = g.contract(Element::Edge(e)).expect("edge index is valid");
        }
        g
    }

    fn relabel(&self, perm: &[usize]) -> Self {
        let n = self.weights.len();
        let mut weights = vec![0; n];
        for x in 0..n {
            weights[perm[x]] = self.weights[x];
        }
        let mut edges: Vec<GraphEdge> = self
            .edges
            .iter()
            .map(|e| {
                let (a, b) = (perm[e.u], perm[e.v]);
                GraphEdge { u: a.min(b), v: a.max(b), len: e.len }
            })
            .collect();
        edges.sort_by_key(|x| (x.u, x.v, x.len.to_bits()));
        AbstractTropicalCurve { weights, edges, legs: self.legs.iter().map(|&l| perm[l]).collect() }
    }

    fn encoding(&self) -> (Vec<u32>, Vec<(usize, usize, u64)>) {
        (self.weights.clone(), self.edges.iter().map(|e| (e.u, e.v, e.len.to_bits())).collect())
    }

    /// Canonical representative after contracting zero-length edges.
    ///
    /// Vertices carrying legs are ordered by their least leg; the remaining
    /// vertices take the ordering with the least encoding.
    pub fn moduli_point(&self) -> ModuliPoint {
        let g = self.contract_zero_edges();
        let n = g.weights.len();
        let mut first_leg: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, &l) in g.legs.iter().enumerate() {
            first_leg.entry(l).or_insert(i);
        }
        let mut legged: Vec<usize> = first_leg.keys().copied().collect();
        legged.sort_by_key(|x| first_leg[x]);
        let free: Vec<usize> = (0..n).filter(|x| !first_leg.contains_key(x)).collect();
        let mut best: Option<AbstractTropicalCurve> = None;
        for_each_permutation(free.len(), &mut |order| {
            let mut perm = vec![0; n];
            for (k, &x) in legged.iter().enumerate() {
                perm[x] = k;
            }
            for (k, &o) in order.iter().enumerate() {
                perm[free[o]] = legged.len() + k;
            }
            let cand = g.relabel(&perm);
            if best.as_ref().is_none_or(|b| cand.encoding() < b.encoding()) {
                best = Some(cand);
            }
        });
        ModuliPoint(best.expect("at least one ordering"))
    }

    /// Weight-, leg- and length-preserving isomorphism after contracting
    /// zero-length edges; lengths match to a relative `1e-9`.
    pub fn isomorphic(&self, other: &Self) -> Result<bool> {
        let (a, b) = (self.contract_zero_edges(), other.contract_zero_edges());
        if a.weights.len() > MAX_VERTICES || b.weights.len() > MAX_VERTICES {
            return Err(Error::CapExceeded(format!("isomorphism search is capped at {MAX_VERTICES} vertices")));
        }
        if a.weights.len() != b.weights.len() || a.edges.len() != b.edges.len() || a.legs.len() != b.legs.len() {
            return Ok(false);
        }
        let n = a.weights.len();
        let mut map = vec![usize::MAX; n];
        for (&la, &lb) in a.legs.iter().zip(&b.legs) {
            if map[la] == usize::MAX {
                map[la] = lb;
            } else if map[la] != lb {
                return Ok(false);
            }
        }
        let mut used = vec![false; n];
        for &m in map.iter().filter(|&&m| m != usize::MAX) {
            if used[m] {
                return Ok(false);
            }
            used[m] = true;
        }
        let ea = a.pair_lengths();
        let eb = b.pair_lengths();
        Ok(extend(&a, &b, &ea, &eb, &mut map, &mut used, 0))
    }

    fn pair_lengths(&self) -> BTreeMap<(usize, usize), Vec<f64>> {
        let mut m: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
        for e in &self.edges {
            m.entry((e.u.min(e.v), e.u.max(e.v))).or_default().push(e.len);
        }
        for v in m.values_mut() {
            v.sort_by(f64::total_cmp);
        }
        m
    }

    pub fn to_json(&self) -> Value {
        let len = |l: f64| if l.is_infinite() { json!("inf") } else { json!(l) };
        json!({
            "vertices": self.weights.iter().map(|w| json!({ "w": w })).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| json!({ "u": e.u, "v": e.v, "len": len(e.len) })).collect::<Vec<_>>(),
            "legs": self.legs,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("graph: {m}"));
        let weights = v
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing vertices"))?
            .iter()
            .map(|x| x.get("w").and_then(Value::as_u64).map(|w| w as u32).ok_or_else(|| bad("vertex needs \"w\"")))
            .collect::<Result<Vec<_>>>()?;
        let edges = v
            .get("edges")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing edges"))?
            .iter()
            .map(|e| {
                let idx = |k: &str| e.get(k).and_then(Value::as_u64).map(|x| x as usize).ok_or_else(|| bad("edge needs u, v"));
                let len = match e.get("len") {
                    Some(Value::String(s)) if s == "inf" => f64::INFINITY,
                    Some(x) => x.as_f64().ok_or_else(|| bad("len must be a number or \"inf\""))?,
                    None => return Err(bad("edge needs len")),
                };
                Ok(GraphEdge { u: idx("u")?, v: idx("v")?, len })
            })
            .collect::<Result<Vec<_>>>()?;
        let legs = v
            .get("legs")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing legs"))?
            .iter()
            .map(|l| l.as_u64().map(|x| x as usize).ok_or_else(|| bad("leg must be a vertex index")))
            .collect::<Result<Vec<_>>>()?;
        AbstractTropicalCurve::new(weights, edges, legs)
    }
}

fn lengths_match(x: &[f64], y: &[f64]) -> bool {
    x.len() == y.len()
        && x.iter().zip(y).all(|(a, b)| {
            if a.is_infinite() || b.is_infinite() {
                a == b
            } else {
                (a - b).abs() <= LENGTH_TOL * a.abs().max(b.abs()).max(1.0)
            }
        })
}

fn consistent(
    ea: &BTreeMap<(usize, usize), Vec<f64>>,
    eb: &BTreeMap<(usize, usize), Vec<f64>>,
    map: &[usize],
) -> bool {
    let empty = Vec::new();
    for (&(x, y), la) in ea {
        let (mx, my) = (map[x], map[y]);
        if mx == usize::MAX || my == usize::MAX {
            continue;
        }
        let lb = eb.get(&(mx.min(my), mx.max(my))).unwrap_or(&empty);
        if !lengths_match(la, lb) {
            return false;
        }
    }
    // Pairs of `b` whose preimages are both assigned must also be accounted for.
    let count_a: usize = ea
        .iter()
        .filter(|((x, y), _)| map[*x] != usize::MAX && map[*y] != usize::MAX)
        .map(|(_, l)| l.len())
        .sum();
    let image: Vec<bool> = {
        let mut im = vec![false; map.len()];
        for &m in map.iter().filter(|&&m| m != usize::MAX) {
            im[m] = true;
        }
        im
    };
    let count_b: usize = eb.iter().filter(|((x, y), _)| image[*x] && image[*y]).map(|(_, l)| l.len()).sum();
    count_a == count_b
}

fn extend(
    a: &AbstractTropicalCurve,
    b: &AbstractTropicalCurve,
    ea: &BTreeMap<(usize, usize), Vec<f64>>,
    eb: &BTreeMap<(usize, usize), Vec<f64>>,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
    from: usize,
) -> bool {
    if !consistent(ea, eb, map) {
        return false;
    }
    let Some(x) = (from..map.len()).find(|&x| map[x] == usize::MAX) else {
        return (0..map.len()).all(|x| a.weights[x] == b.weights[map[x]] && a.degree(x) == b.degree(map[x]));
    };
    for y in 0..map.len() {
        if used[y] || a.weights[x] != b.weights[y] || a.degree(x) != b.degree(y) {
            continue;
        }
        map[x] = y;
        used[y] = true;
        if extend(a, b, ea, eb, map, used, x + 1) {
            return true;
        }
        map[x] = usize::MAX;
        used[y] = false;
    }
    false
}

fn for_each_permutation(n: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(p, k + 1, f);
            p.swap(k, i);
        }
    }
    let mut p: Vec<usize> = (0..n).collect();
    rec(&mut p, 0, f);
}

/// Canonical representative of an isomorphism class, no zero-length edges.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuliPoint(AbstractTropicalCurve);

impl ModuliPoint {
    pub fn curve(&self) -> &AbstractTropicalCurve {
        &self.0
    }

    pub fn to_json(&self) -> Value {
        self.0.to_json()
    }
}

/// All connected graphs up to the given sizes, with legs numbered in vertex order.
///
/// Edges are multisets of vertex pairs (loops included); weights range over
/// `0..=max_weight` and leg counts per vertex over `0..=max_legs` in total.
pub fn enumerate_graphs(
    max_vertices: usize,
    max_edges: usize,
    max_weight: u32,
    max_legs: usize,
) -> Vec<AbstractTropicalCurve> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let mut edge_sets = Vec::new();
        multisets(&pairs, max_edges, 0, &mut Vec::new(), &mut edge_sets);
        let mut weight_sets = Vec::new();
        tuples(n, max_weight as usize + 1, &mut Vec::new(), &mut weight_sets);
        let mut leg_sets = Vec::new();
        tuples(n, max_legs + 1, &mut Vec::new(), &mut leg_sets);
        leg_sets.retain(|l| l.iter().sum::<usize>() <= max_legs);
        for es in &edge_sets {
            for ws in &weight_sets {
                for ls in &leg_sets {
                    let edges = es.iter().enumerate().map(|(k, &(u, v))| GraphEdge { u, v, len: 1.0 + k as f64 }).collect();
                    let legs = ls.iter().enumerate().flat_map(|(x, &c)| std::iter::repeat_n(x, c)).collect();
                    let weights = ws.iter().map(|&w| w as u32).collect();
                    if let Ok(g) = AbstractTropicalCurve::new(weights, edges, legs) {
                        out.push(g);
                    }
                }
            }
        }
    }
    out
}

fn multisets(
    items: &[(usize, usize)],
    max: usize,
    start: usize,
    cur: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    out.push(cur.clone());
    if cur.len() == max {
        return;
    }
    for i in start..items.len() {
        cur.push(items[i]);
        multisets(items, max, i, cur, out);
        cur.pop();
    }
}

fn tuples(n: usize, base: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == n {
        out.push(cur.clone());
        return;
    }
    for x in 0..base {
        cur.push(x);
        tuples(n, base, cur, out);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(weights: Vec<u32>, edges: &[(usize, usize, f64)], legs: Vec<usize>) -> AbstractTropicalCurve {
        let e = edges.iter().map(|&(u, v, len)| GraphEdge { u, v, len }).collect();
        AbstractTropicalCurve::new(weights, e, legs).unwrap()
    }

    #[test]
    fn loop_with_leg() {
        let x = g(vec![0], &[(0, 0, 1.0)], vec![0]);
        assert_eq!(x.genus(), 1);
        assert!(x.is_stable());
        let y = x.contract(Element::Edge(0)).unwrap();
        assert_eq!((y.weights.clone(), y.genus()), (vec![1], 1));
        assert!(x.contract(Element::Leg(0)).is_err());
    }

    #[test]
    fn theta_graph() {
        let x = g(vec![0, 0], &[(0, 1, 1.0), (0, 1, 2.0), (0, 1, 3.0)], vec![]);
        assert_eq!(x.genus(), 2);
        assert!(x.is_stable());
    }

    #[test]
    fn two_legs_is_unstable() {
        assert!(!g(vec![0], &[], vec![0, 0]).is_stable());
        assert!(!g(vec![1], &[], vec![]).is_stable());
        assert!(g(vec![1], &[], vec![0]).is_stable());
    }

    #[test]
    fn isomorphism_cases() {
        let x = g(vec![0, 0], &[(0, 1, 1.0), (0, 1, 2.0)], vec![0, 1, 0, 1]);
        assert!(x.isomorphic(&x).unwrap());
        let mut y = x.clone();
        y.edges[0].len = 1.5;
        assert!(!x.isomorphic(&y).unwrap());
        // Subdivide an edge with a zero-length piece.
        let z = g(vec![0, 0, 0], &[(0, 2, 0.0), (2, 1, 1.0), (0, 1, 2.0)], vec![0, 1, 0, 1]);
        assert!(x.isomorphic(&z).unwrap());
        let swapped = g(vec![0, 0], &[(0, 1, 1.0), (0, 1, 2.0)], vec![1, 0, 0, 1]);
        assert!(!x.isomorphic(&swapped).unwrap());
    }

    #[test]
    fn canonical_form_ignores_labels() {
        let x = g(vec![0, 0, 0, 0], &[(0, 1, 1.0), (1, 2, 2.0), (2, 3, 3.0), (3, 0, 4.0), (1, 3, 5.0)], vec![]);
        let y = x.relabel(&[2, 0, 3, 1]);
        assert_eq!(x.moduli_point(), y.moduli_point());
    }

    #[test]
    fn json_round_trip_with_infinity() {
        let x = g(vec![0, 1], &[(0, 1, f64::INFINITY), (0, 0, 2.5)], vec![0, 1]);
        assert_eq!(AbstractTropicalCurve::from_json(&x.to_json()).unwrap(), x);
    }

    #[test]
    fn disconnected_rejected() {
        assert!(AbstractTropicalCurve::new(vec![0, 0], vec![], vec![]).is_err());
    }
}
