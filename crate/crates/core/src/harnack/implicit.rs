//! Implicit equations of rational curves by exact linear algebra.
//!
//! Clearing the poles of `x^v = ∏ (t − a_i)^{⟨v,u_i⟩}` with the side minima
//! `m_i = min ⟨·, u_i⟩` turns every monomial into a polynomial of the same
//! degree `N = −Σ m_i`. The defining polynomial spans the kernel of the
//! resulting `(N+1) × |Δ_M|` coefficient matrix.

use num::{BigInt, Integer, One, Signed, Zero};

use super::RootConfig;
use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::RationalPolynomial;
use crate::rational::Q;

pub fn implicitize(c: &RootConfig) -> Result<RationalPolynomial> {
    let c = reduce_degenerate(c)?;
    let poly = c.polygon();
    let points = poly.lattice_points();
    let normals = c.normals();
    let mins: Vec<i64> = normals
        .iter()
        .map(|u| poly.vertices().iter().map(|v| v.dot(*u)).min().unwrap())
        .collect();
    let big_n: i64 = -mins.iter().sum::<i64>();
    // Group equal roots so repeated factors are raised once.
    let mut groups: Vec<(Q, Vec<usize>)> = Vec::new();
    for (i, r) in c.roots().iter().enumerate() {
        match groups.iter_mut().find(|(a, _)| *a == r.a) {
            Some((_, idx)) => idx.push(i),
            None => groups.push((r.a.clone(), vec![i])),
        }
    }
    let mut cols: Vec<Vec<Q>> = Vec::with_capacity(points.len());
    for v in &points {
        let mut p = vec![Q::one()];
        for (a, idx) in &groups {
            let e: i64 = idx.iter().map(|&i| v.dot(normals[i]) - mins[i]).sum();
            debug_assert!(e >= 0);
            p = mul(&p, &linear_power(a, e as usize));
        }
        debug_assert_eq!(p.len() as i64, big_n + 1);
        cols.push(p);
    }
    let rows = (big_n + 1) as usize;
    let m: linalg::Matrix = (0..rows).map(|r| cols.iter().map(|col| col[r].clone()).collect()).collect();
    let ker = linalg::kernel(&m, points.len());
    if ker.len() != 1 {
        return Err(Error::Numeric(format!(
            "implicit equation is not unique: kernel dimension {}",
            ker.len()
        )));
    }
    let coeffs = primitive_integer(&ker[0]);
    let mut f = RationalPolynomial::from_terms(points.iter().copied().zip(coeffs));
    let first = poly.vertices()[0];
    if f.coeff(first).is_negative() {
        f = f.scale(&-Q::one());
    }
    let newton = f.newton_polygon()?;
    if &newton != poly {
        return Err(Error::VerificationFailed(format!(
            "Newton polygon {:?} differs from {:?}",
            newton.vertices(),
            poly.vertices()
        )));
    }
    Ok(f)
}

/// Applies cuts until no two roots on different sides coincide.
pub(crate) fn reduce_degenerate(c: &RootConfig) -> Result<RootConfig> {
    let mut cur = c.clone();
    loop {
        let n = cur.n();
        let roots = cur.roots();
        let hit = (0..n).find(|&i| {
            let j = (i + 1) % n;
            roots[i].a == roots[j].a && roots[i].side != roots[j].side
        });
        match hit {
            None => return Ok(cur),
            Some(i) => cur = cur.cut_config(roots[i].side)?,
        }
    }
}

fn mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Ascending coefficients of `(t − a)^e`.
fn linear_power(a: &Q, e: usize) -> Vec<Q> {
    let mut p = vec![Q::one()];
    let lin = [-a.clone(), Q::one()];
    for _ in 0..e {
        p = mul(&p, &lin);
    }
    p
}

/// Scales a rational vector to coprime integers.
fn primitive_integer(v: &[Q]) -> Vec<Q> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter().map(|x| Q::from_integer(x / &g)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harnack::tests::line_config;
    use crate::harnack::{sample_harnack, Coord, Param, Root};
    use crate::lattice::{LatticePoint, LatticePolygon};
    use crate::rational::q;
    use num::complex::Complex64;

    #[test]
    fn line_gives_x_plus_y_minus_two() {
        let f = implicitize(&line_config()).unwrap();
        let expect = RationalPolynomial::from_terms([
            (LatticePoint::new(0, 0), q(2)),
            (LatticePoint::new(1, 0), q(-1)),
            (LatticePoint::new(0, 1), q(-1)),
        ]);
        assert_eq!(f, expect);
    }

    #[test]
    fn sampled_curves_vanish_on_their_parametrization() {
        for (k, p) in [
            LatticePolygon::unit_square(),
            LatticePolygon::cross_polytope(),
            LatticePolygon::dilated_triangle(2).unwrap(),
        ]
        .iter()
        .enumerate()
        {
            let c = sample_harnack(p, 11 + k as u64);
            let f = implicitize(&c).unwrap();
            assert_eq!(f.newton_polygon().unwrap(), *p);
            let fl = f.to_laurent();
            let scale: f64 = fl.terms().map(|(_, c)| c.abs()).sum();
            for s in 0..20 {
                let t = Complex64::new(0.37 * s as f64 - 3.1, 0.21 * (s % 5) as f64 + 0.05);
                let (Coord::Finite(x), Coord::Finite(y)) = c.evaluate_torus(Param::Finite(t)) else {
                    panic!("generic parameter hit a root");
                };
                let mag = fl.terms().map(|(v, c)| c.abs() * x.norm().powi(v.x as i32) * y.norm().powi(v.y as i32)).sum::<f64>();
                assert!(fl.eval(x, y).norm() <= 1e-9 * mag.max(scale));
            }
        }
    }

    #[test]
    fn degenerate_config_has_cut_newton_polygon() {
        let sq = LatticePolygon::unit_square();
        // Last root of side 0 equals first root of side 1.
        let roots = vec![
            Root { a: q(0), side: 0 },
            Root { a: q(0), side: 1 },
            Root { a: q(2), side: 2 },
            Root { a: q(3), side: 3 },
        ];
        let c = RootConfig::new(sq.clone(), roots, true).unwrap();
        let f = implicitize(&c).unwrap();
        let v = sq.edges()[0].end;
        assert_eq!(f.newton_polygon().unwrap(), sq.cut_vertex(v).unwrap());
    }
}
