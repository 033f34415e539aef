//! Exact rational helpers shared by every module.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Huge numerators/denominators: fall back to a ratio of logs.
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Exact binary value of a finite float.
pub fn from_f64(x: f64) -> Result<Q> {
    Q::from_float(x).ok_or_else(|| Error::InvalidInput(format!("non-finite value {x}")))
}

/// Parses `"p/q"`, `"p"`, or a decimal string such as `"0.25"`.
pub fn parse(s: &str) -> Result<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        let d: BigInt = d.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Q::new(n, d));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Ok(Q::from_integer(n));
    }
    // Decimal literal, read exactly in base ten.
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    if let Some((int, frac)) = body.split_once('.') {
        if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || (int.is_empty() && frac.is_empty()) {
            return Err(Error::Parse(format!("bad number {s:?}")));
        }
        let digits = format!("{int}{frac}");
        let n: BigInt = digits.parse().map_err(|_| Error::Parse(format!("bad number {s:?}")))?;
        let d = num::pow(BigInt::from(10), frac.len());
        return Ok(Q::new(n * sign, d));
    }
    Err(Error::Parse(format!("bad number {s:?}")))
}

/// Reads a JSON number or string as an exact rational.
pub fn from_json(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(q(i))
            } else {
                from_f64(n.as_f64().ok_or_else(|| Error::Parse("bad number".into()))?)
            }
        }
        _ => Err(Error::Parse(format!("expected number or string, got {v}"))),
    }
}

pub fn to_json(x: &Q) -> Value {
    Value::String(x.to_string())
}

pub fn serialize<S: serde::Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        return 0;
    }
    (a / gcd(a, b) * b).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_integer_and_decimal() {
        assert_eq!(parse("3/6").unwrap(), qf(1, 2));
        assert_eq!(parse("-7").unwrap(), q(-7));
        assert_eq!(parse("0.25").unwrap(), qf(1, 4));
        assert_eq!(parse("-1.5").unwrap(), qf(-3, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
    }

    #[test]
    fn json_round_trip() {
        let x = qf(-22, 7);
        assert_eq!(from_json(&to_json(&x)).unwrap(), x);
        assert_eq!(from_json(&serde_json::json!(0.5)).unwrap(), qf(1, 2));
    }
}
