//! Exact feasibility for small systems of linear equalities and inequalities.
//!
//! Phase-one simplex over the rationals with Bland's rule, so it always
//! terminates. Variables are free; they are split as `x = p - q` internally.

use num::{One, Signed, Zero};

use crate::rational::Q;

/// A system `eq · x = b` and `ge · x ≥ b` over free variables.
#[derive(Debug, Clone, Default)]
pub struct System {
    pub vars: usize,
    pub eq: Vec<(Vec<Q>, Q)>,
    pub ge: Vec<(Vec<Q>, Q)>,
}

impl System {
    pub fn new(vars: usize) -> Self {
        System { vars, eq: Vec::new(), ge: Vec::new() }
    }

    pub fn add_eq(&mut self, row: Vec<Q>, rhs: Q) {
        debug_assert_eq!(row.len(), self.vars);
        self.eq.push((row, rhs));
    }

    pub fn add_ge(&mut self, row: Vec<Q>, rhs: Q) {
        debug_assert_eq!(row.len(), self.vars);
        self.ge.push((row, rhs));
    }

    /// A feasible point, or `None` if the system is infeasible.
    pub fn solve(&self) -> Option<Vec<Q>> {
        let n = self.vars;
        let rows: Vec<(&Vec<Q>, &Q, bool)> = self
            .eq
            .iter()
            .map(|(r, b)| (r, b, false))
            .chain(self.ge.iter().map(|(r, b)| (r, b, true)))
            .collect();
        let m = rows.len();
        if m == 0 {
            return Some(vec![Q::zero(); n]);
        }
        let n_slack = self.ge.len();
        // Columns: p (n), q (n), slacks, artificials, rhs.
        let n_struct = 2 * n + n_slack;
        let total = n_struct + m;
        let mut t: Vec<Vec<Q>> = Vec::with_capacity(m + 1);
        let mut slack = 0;
        for (i, (row, b, is_ge)) in rows.iter().enumerate() {
            let mut line = vec![Q::zero(); total + 1];
            for j in 0..n {
                line[j] = row[j].clone();
                line[n + j] = -row[j].clone();
            }
            if *is_ge {
                line[2 * n + slack] = -Q::one();
                slack += 1;
            }
            line[total] = (*b).clone();
            if line[total].is_negative() {
                for x in line.iter_mut() {
                    *x = -x.clone();
                }
            }
            line[n_struct + i] = Q::one();
            t.push(line);
        }
        // Objective: minimise the sum of artificials, expressed in reduced form.
        let mut obj = vec![Q::zero(); total + 1];
        for line in &t {
            for j in 0..n_struct {
                obj[j] -= &line[j];
            }
            obj[total] -= &line[total];
        }
        t.push(obj);
        let mut basis: Vec<usize> = (n_struct..total).collect();

        loop {
            let obj = &t[m];
            let Some(enter) = (0..total).find(|&j| obj[j].is_negative()) else {
                break;
            };
            let mut leave: Option<(usize, Q)> = None;
            for i in 0..m {
                if t[i][enter].is_positive() {
                    let ratio = &t[i][total] / &t[i][enter];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else {
                // Unbounded below cannot happen for a sum of nonnegatives.
                return None;
            };
            pivot(&mut t, r, enter);
            basis[r] = enter;
        }
        if !t[m][total].is_zero() {
            return None;
        }
        let mut val = vec![Q::zero(); total];
        for (i, &b) in basis.iter().enumerate() {
            val[b] = t[i][total].clone();
        }
        Some((0..n).map(|j| &val[j] - &val[n + j]).collect())
    }
}

fn pivot(t: &mut [Vec<Q>], r: usize, c: usize) {
    let inv = Q::one() / &t[r][c];
    for x in t[r].iter_mut() {
        *x = &*x * &inv;
    }
    let pivot_row = t[r].clone();
    for (i, line) in t.iter_mut().enumerate() {
        if i == r || line[c].is_zero() {
            continue;
        }
        let f = line[c].clone();
        for (x, p) in line.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *x -= &f * p;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn check(sys: &System, x: &[Q]) {
        for (row, b) in &sys.eq {
            let lhs: Q = row.iter().zip(x).map(|(a, v)| a * v).sum();
            assert_eq!(&lhs, b);
        }
        for (row, b) in &sys.ge {
            let lhs: Q = row.iter().zip(x).map(|(a, v)| a * v).sum();
            assert!(&lhs >= b);
        }
    }

    #[test]
    fn feasible_box_with_negative_values() {
        let mut s = System::new(2);
        s.add_ge(vec![q(1), q(0)], q(-5));
        s.add_ge(vec![q(-1), q(0)], q(3));
        s.add_eq(vec![q(1), q(1)], q(0));
        let x = s.solve().unwrap();
        check(&s, &x);
    }

    #[test]
    fn infeasible_strict_pair() {
        let mut s = System::new(1);
        s.add_ge(vec![q(1)], q(1));
        s.add_ge(vec![q(-1)], q(0));
        assert!(s.solve().is_none());
    }

    #[test]
    fn empty_system_is_feasible() {
        assert_eq!(System::new(3).solve().unwrap().len(), 3);
    }
}
