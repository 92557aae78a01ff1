//! Exact two-phase simplex over Q with Bland's anti-cycling rule.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

type Q = BigRational;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<Q>, value: Q },
}

struct Tableau {
    rows: Vec<Vec<Q>>, // each row: coefficients followed by the right-hand side
    basis: Vec<usize>,
}

impl Tableau {
    fn cols(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len() - 1)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(prow.iter()) {
                    *x = &*x - &f * y;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Minimizes cost·x over the columns `active`; false when unbounded.
    fn minimize(&mut self, cost: &[Q], active: usize) -> bool {
        loop {
            // reduced cost of column j: c_j − Σ_i c_{B(i)} a_ij
            let entering = (0..active).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut rc = cost[j].clone();
                for (i, row) in self.rows.iter().enumerate() {
                    rc -= &cost[self.basis[i]] * &row[j];
                }
                rc.is_negative()
            });
            let Some(c) = entering else { return true };
            let rhs = self.cols();
            let mut best: Option<(Q, usize)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[rhs] / &row[c];
                    let better = match &best {
                        None => true,
                        Some((b, bi)) => ratio < *b || (ratio == *b && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((ratio, i));
                    }
                }
            }
            let Some((_, r)) = best else { return false };
            self.pivot(r, c);
        }
    }
}

/// Maximizes c·x subject to A·x = b, x ≥ 0.
pub fn maximize(a: &[Vec<Q>], b: &[Q], c: &[Q]) -> LpOutcome {
    let m = a.len();
    let nv = c.len();
    let mut rows = Vec::with_capacity(m);
    for (i, (ai, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut row: Vec<Q> = ai.iter().map(|x| if flip { -x } else { x.clone() }).collect();
        row.extend((0..m).map(|k| if k == i { Q::from_integer(1.into()) } else { Q::zero() }));
        row.push(if flip { -bi } else { bi.clone() });
        rows.push(row);
    }
    let mut t = Tableau { rows, basis: (nv..nv + m).collect() };
    let mut phase1 = vec![Q::zero(); nv + m];
    for x in phase1.iter_mut().skip(nv) {
        *x = Q::from_integer(1.into());
    }
    t.minimize(&phase1, nv + m);
    let rhs = nv + m;
    let infeas: Q = t.rows.iter().zip(&t.basis).filter(|(_, &bv)| bv >= nv).map(|(r, _)| r[rhs].clone()).sum();
    if infeas.is_positive() {
        return LpOutcome::Infeasible;
    }
    // drive zero-level artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= nv {
            match (0..nv).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => {
                    t.pivot(i, j);
                    i += 1;
                }
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }
    for row in t.rows.iter_mut() {
        let r = row[rhs].clone();
        row.truncate(nv);
        row.push(r);
    }
    let neg: Vec<Q> = c.iter().map(|x| -x).collect();
    if !t.minimize(&neg, nv) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Q::zero(); nv];
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        x[bv] = row[nv].clone();
    }
    let value = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    LpOutcome::Optimal { x, value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(p: i64) -> Q {
        Q::from_integer(BigInt::from(p))
    }

    #[test]
    fn small_lp() {
        // max x + y s.t. x + 2y + s = 4, 3x + y + u = 6
        let a = vec![vec![q(1), q(2), q(1), q(0)], vec![q(3), q(1), q(0), q(1)]];
        let out = maximize(&a, &[q(4), q(6)], &[q(1), q(1), q(0), q(0)]);
        match out {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, Q::new(BigInt::from(14), BigInt::from(5))),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = vec![vec![q(1), q(1)]];
        assert_eq!(maximize(&a, &[q(-1)], &[q(1), q(0)]), LpOutcome::Infeasible);
        let a = vec![vec![q(1), q(-1)]];
        assert_eq!(maximize(&a, &[q(1)], &[q(1), q(0)]), LpOutcome::Unbounded);
    }
}
