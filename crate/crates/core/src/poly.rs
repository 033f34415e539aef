//! Bivariate Laurent polynomials, exact and floating.

use std::collections::BTreeMap;

use num::complex::Complex64;
use num::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, LatticePolygon};
use crate::rational::{self, Q};

/// Laurent polynomial with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RationalPolynomial {
    terms: BTreeMap<LatticePoint, Q>,
}

impl RationalPolynomial {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (LatticePoint, Q)>) -> Self {
        let mut p = Self::new();
        for (v, c) in terms {
            p.add_term(v, c);
        }
        p
    }

    pub fn add_term(&mut self, v: LatticePoint, c: Q) {
        let e = self.terms.entry(v).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&v);
        }
    }

    pub fn coeff(&self, v: LatticePoint) -> Q {
        self.terms.get(&v).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticePoint, &Q)> {
        self.terms.iter()
    }

    pub fn support(&self) -> Vec<LatticePoint> {
        self.terms.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn newton_polygon(&self) -> Result<LatticePolygon> {
        LatticePolygon::from_points(&self.support())
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self::from_terms(self.terms.iter().map(|(v, c)| (*v, c * k)))
    }

    /// Exact value at a rational point of the torus.
    pub fn eval(&self, x: &Q, y: &Q) -> Result<Q> {
        if x.is_zero() || y.is_zero() {
            return Err(Error::InvalidInput("evaluation off the torus".into()));
        }
        Ok(self.terms.iter().fold(Q::zero(), |acc, (v, c)| {
            acc + c * num::pow::Pow::pow(x, v.x as i32) * num::pow::Pow::pow(y, v.y as i32)
        }))
    }

    pub fn to_laurent(&self) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(self.terms.iter().map(|(v, c)| (*v, rational::to_f64(c))))
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(v, c)| json!({ "v": [v.x, v.y], "c": c.to_string() }))
            .collect();
        json!({ "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let mut p = Self::new();
        for (pt, c) in parse_terms(v)? {
            p.add_term(pt, rational::from_json(c)?);
        }
        Ok(p)
    }
}

fn parse_terms(v: &Value) -> Result<Vec<(LatticePoint, &Value)>> {
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("polynomial needs a \"terms\" array".into()))?;
    terms
        .iter()
        .map(|t| {
            let pt: LatticePoint = serde_json::from_value(
                t.get("v").cloned().ok_or_else(|| Error::Parse("term without \"v\"".into()))?,
            )
            .map_err(|e| Error::Parse(format!("term exponent: {e}")))?;
            let c = t.get("c").ok_or_else(|| Error::Parse("term without \"c\"".into()))?;
            Ok((pt, c))
        })
        .collect()
}

/// Laurent polynomial with real coefficients, used for numerics.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentPolynomial {
    terms: BTreeMap<LatticePoint, f64>,
}

impl LaurentPolynomial {
    pub fn from_terms(terms: impl IntoIterator<Item = (LatticePoint, f64)>) -> Self {
        let mut map = BTreeMap::new();
        for (v, c) in terms {
            *map.entry(v).or_insert(0.0) += c;
        }
        map.retain(|_, c| *c != 0.0);
        LaurentPolynomial { terms: map }
    }

    /// Parses `{"terms":[{"v":[i,j],"c":..}]}`; coefficients may be floats or `"p/q"` strings.
    pub fn from_json(v: &Value) -> Result<Self> {
        let mut out = Vec::new();
        for (pt, c) in parse_terms(v)? {
            let x = match c {
                Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse("bad coefficient".into()))?,
                _ => rational::to_f64(&rational::from_json(c)?),
            };
            if !x.is_finite() {
                return Err(Error::Parse("non-finite coefficient".into()));
            }
            out.push((pt, x));
        }
        Ok(Self::from_terms(out))
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> =
            self.terms.iter().map(|(v, c)| json!({ "v": [v.x, v.y], "c": c })).collect();
        json!({ "terms": terms })
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticePoint, &f64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, v: LatticePoint) -> f64 {
        self.terms.get(&v).copied().unwrap_or(0.0)
    }

    pub fn support(&self) -> Vec<LatticePoint> {
        self.terms.keys().copied().collect()
    }

    pub fn newton_polygon(&self) -> Result<LatticePolygon> {
        LatticePolygon::from_points(&self.support())
    }

    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(v, c)| *c * z.powi(v.x as i32) * w.powi(v.y as i32))
            .sum()
    }

    /// Substitutes `x -> x · e^{⟨v,p⟩}` style weights: multiplies each coefficient by `weight(v)`.
    pub fn map_coeffs(&self, mut weight: impl FnMut(LatticePoint, f64) -> f64) -> Self {
        Self::from_terms(self.terms.iter().map(|(v, c)| (*v, weight(*v, *c))))
    }

    /// Swaps the roles of the two variables.
    pub fn transpose(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(v, c)| (LatticePoint::new(v.y, v.x), *c)))
    }

    fn y_range(&self) -> (i64, i64) {
        let lo = self.terms.keys().map(|v| v.y).min().unwrap_or(0);
        let hi = self.terms.keys().map(|v| v.y).max().unwrap_or(0);
        (lo, hi)
    }

    /// Coefficients in ascending powers of `w` of `w^{-min} f(z, w)`, and `min`.
    pub fn fiber_in_w(&self, z: Complex64) -> (Vec<Complex64>, i64) {
        let (lo, hi) = self.y_range();
        let mut c = vec![Complex64::zero(); (hi - lo + 1) as usize];
        for (v, a) in &self.terms {
            c[(v.y - lo) as usize] += *a * z.powi(v.x as i32);
        }
        (c, lo)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn degree_spread(&self) -> (i64, i64) {
        let (lo, hi) = self.y_range();
        let xlo = self.terms.keys().map(|v| v.x).min().unwrap_or(0);
        let xhi = self.terms.keys().map(|v| v.x).max().unwrap_or(0);
        (xhi - xlo, hi - lo)
    }

    /// True when every coefficient is strictly positive or strictly negative.
    pub fn is_sign_constant(&self) -> bool {
        let pos = self.terms.values().all(|c| c.is_positive());
        let neg = self.terms.values().all(|c| c.is_negative());
        pos || neg
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn pt(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    #[test]
    fn zero_terms_are_dropped() {
        let mut p = RationalPolynomial::new();
        p.add_term(pt(1, 0), q(2));
        p.add_term(pt(1, 0), q(-2));
        assert!(p.is_zero());
    }

    #[test]
    fn json_round_trip_and_eval() {
        let p = RationalPolynomial::from_terms([(pt(0, 0), q(1)), (pt(1, 0), qf(1, 2)), (pt(-1, 2), q(3))]);
        let back = RationalPolynomial::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
        assert_eq!(p.eval(&q(2), &q(1)).unwrap(), q(1) + q(1) + qf(3, 2));
        let f = LaurentPolynomial::from_json(&p.to_json()).unwrap();
        let z = f.eval(Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0));
        assert!((z.re - 3.5).abs() < 1e-15);
    }

    #[test]
    fn fiber_shifts_negative_powers() {
        let f = LaurentPolynomial::from_terms([(pt(0, -1), 1.0), (pt(0, 1), 1.0), (pt(1, 0), 1.0)]);
        let (c, lo) = f.fiber_in_w(Complex64::new(2.0, 0.0));
        assert_eq!(lo, -1);
        assert_eq!(c.len(), 3);
        assert_eq!(c[1], Complex64::new(2.0, 0.0));
    }

    #[test]
    fn malformed_json_is_a_parse_error() {
        assert!(matches!(
            LaurentPolynomial::from_json(&json!({"terms": [{"v": [0], "c": 1}]})),
            Err(Error::Parse(_))
        ));
        assert!(matches!(LaurentPolynomial::from_json(&json!({})), Err(Error::Parse(_))));
    }
}
