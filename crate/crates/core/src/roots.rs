//! Simultaneous root finding for univariate complex polynomials (Aberth–Ehrlich).

use num::complex::Complex64;
use num::Zero;

use crate::error::{Error, Result};

pub const MAX_ITER: usize = 200;
pub const TOL: f64 = 1e-12;

/// All roots of `Σ c[k] x^k`, with leading and trailing zero coefficients handled.
///
/// `init` warm-starts the iteration when it has the right length. Convergence
/// is declared when every correction is below `TOL` relative to the root, or
/// the backward error of every root is below `TOL`.
pub fn roots(c: &[Complex64], init: Option<&[Complex64]>) -> Result<Vec<Complex64>> {
    let hi = match c.iter().rposition(|x| !x.is_zero()) {
        Some(h) => h,
        None => return Err(Error::Numeric("zero polynomial".into())),
    };
    let lo = c.iter().position(|x| !x.is_zero()).unwrap();
    let mut out = vec![Complex64::zero(); lo];
    let p = &c[lo..=hi];
    let deg = p.len() - 1;
    if deg == 0 {
        return Ok(out);
    }
    if deg == 1 {
        out.push(-p[0] / p[1]);
        return Ok(out);
    }
    let mut z: Vec<Complex64> = match init {
        Some(s) if s.len() == deg && s.iter().all(|x| x.is_finite() && !x.is_zero()) => s.to_vec(),
        _ => initial_guesses(p),
    };
    perturb_duplicates(&mut z);
    let abs: Vec<f64> = p.iter().map(|x| x.norm()).collect();
    for _ in 0..MAX_ITER {
        let mut done = true;
        for i in 0..deg {
            let (v, dv) = horner(p, z[i]);
            let scale = horner_abs(&abs, z[i].norm());
            if v.norm() <= TOL * scale {
                continue;
            }
            let ratio = v / dv;
            let s: Complex64 = (0..deg).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            if !w.is_finite() {
                return Err(Error::Numeric("root iteration diverged".into()));
            }
            z[i] -= w;
            if w.norm() > TOL * z[i].norm().max(TOL) {
                done = false;
            }
        }
        if done {
            out.extend(z);
            return Ok(out);
        }
    }
    // Accept if the backward error is small even without correction convergence.
    let ok = z.iter().all(|&x| {
        let (v, _) = horner(p, x);
        v.norm() <= 1e-9 * horner_abs(&abs, x.norm())
    });
    if ok {
        out.extend(z);
        Ok(out)
    } else {
        Err(Error::Numeric(format!("root finder did not converge in {MAX_ITER} iterations")))
    }
}

fn horner(p: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::zero();
    let mut dv = Complex64::zero();
    for &a in p.iter().rev() {
        dv = dv * x + v;
        v = v * x + a;
    }
    (v, dv)
}

fn horner_abs(a: &[f64], r: f64) -> f64 {
    a.iter().rev().fold(0.0, |acc, &c| acc * r + c)
}

/// Starting points on circles whose radii come from the upper hull of `(k, log|c_k|)`.
fn initial_guesses(p: &[Complex64]) -> Vec<Complex64> {
    let deg = p.len() - 1;
    let pts: Vec<(usize, f64)> = p
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, c.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &q in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (q.1 - a.1) - (b.1 - a.1) * (q.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(q);
    }
    let mut z = Vec::with_capacity(deg);
    let sigma = 0.7;
    for win in hull.windows(2) {
        let (k1, l1) = win[0];
        let (k2, l2) = win[1];
        let m = k2 - k1;
        let r = ((l1 - l2) / m as f64).exp();
        for j in 0..m {
            let ang = 2.0 * std::f64::consts::PI * (j as f64) / (m as f64)
                + 2.0 * std::f64::consts::PI * (k1 as f64) / (deg as f64)
                + sigma;
            z.push(Complex64::from_polar(r, ang));
        }
    }
    z
}

fn perturb_duplicates(z: &mut [Complex64]) {
    for i in 0..z.len() {
        for j in 0..i {
            if (z[i] - z[j]).norm() <= 1e-14 * z[i].norm().max(1.0) {
                z[i] *= Complex64::from_polar(1.0 + 1e-7 * (i as f64 + 1.0), 1e-3 * (i as f64 + 1.0));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn sorted_re(mut v: Vec<Complex64>) -> Vec<f64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        v.iter().map(|x| x.re).collect()
    }

    #[test]
    fn cubic_with_known_roots() {
        // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6.
        let r = roots(&[c(-6.0), c(11.0), c(-6.0), c(1.0)], None).unwrap();
        for (a, b) in sorted_re(r).iter().zip([1.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn widely_scaled_roots() {
        // (x - 1e-4)(x - 1e4).
        let r = roots(&[c(1.0), c(-(1e4 + 1e-4)), c(1.0)], None).unwrap();
        let s = sorted_re(r);
        assert!((s[0] / 1e-4 - 1.0).abs() < 1e-9);
        assert!((s[1] / 1e4 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_roots_and_degenerate_input() {
        let r = roots(&[c(0.0), c(0.0), c(-1.0), c(1.0)], None).unwrap();
        assert_eq!(r.iter().filter(|x| x.is_zero()).count(), 2);
        assert!(roots(&[c(0.0)], None).is_err());
        assert!(roots(&[c(5.0)], None).unwrap().is_empty());
    }

    #[test]
    fn double_root_accepted_by_backward_error() {
        // (x-1)^2 (x+2).
        let r = roots(&[c(2.0), c(-3.0), c(0.0), c(1.0)], None).unwrap();
        assert_eq!(r.len(), 3);
        for x in r {
            let v = (x - 1.0) * (x - 1.0) * (x + 2.0);
            assert!(v.norm() < 1e-8);
        }
    }
}
