//! Dense exact-rational primal simplex.
//!
//! Solves `max c·x` subject to `A x <= b` (with `b >= 0`), homogeneous
//! equality rows `E x = 0`, and `x >= 0`. The origin is always feasible, so
//! phase one only has to pivot the equality artificials out of the basis.
//!
//! Entering columns are picked by largest reduced cost. After a long run of
//! degenerate pivots the method switches to Bland's rule until the objective
//! moves again, which keeps it cycling-free.

mod num;

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::Rational;
use num::Num;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("linear program is unbounded (entering column {0})")]
    Unbounded(usize),
    #[error("row {0} has negative right-hand side")]
    NegativeRhs(usize),
    #[error("variable index {index} out of range for {num_vars} variables")]
    BadIndex { index: usize, num_vars: usize },
}

/// A sparse row: `(variable index, coefficient)` pairs.
pub type SparseRow = Vec<(usize, Rational)>;

#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<Rational>,
    pub le_rows: Vec<(SparseRow, Rational)>,
    pub eq_zero_rows: Vec<SparseRow>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<Rational>,
    pub value: Rational,
    /// Optimal dual value of every `<=` row, in input order.
    pub le_duals: Vec<Rational>,
    pub pivots: usize,
    pub degenerate_pivots: usize,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram { num_vars, objective: vec![Rational::zero(); num_vars], le_rows: Vec::new(), eq_zero_rows: Vec::new() }
    }

    pub fn add_le(&mut self, row: SparseRow, rhs: Rational) {
        self.le_rows.push((row, rhs));
    }

    pub fn add_eq_zero(&mut self, row: SparseRow) {
        self.eq_zero_rows.push(row);
    }

    pub fn solve(&self) -> Result<LpSolution, LpError> {
        Tableau::build(self)?.run(self)
    }
}

/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const STALL_LIMIT: usize = 1000;

struct Tableau {
    rows: Vec<Vec<Num>>,
    rhs: Vec<Num>,
    obj: Vec<Num>,
    obj_value: Num,
    basis: Vec<usize>,
    /// Columns that may never enter (artificials after phase one).
    blocked: Vec<bool>,
    live: Vec<bool>,
    pivots: usize,
    degenerate: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Result<Self, LpError> {
        let n = lp.num_vars;
        let le = lp.le_rows.len();
        let eq = lp.eq_zero_rows.len();
        let cols = n + le + eq;
        let mut rows = Vec::with_capacity(le + eq);
        let mut rhs = Vec::with_capacity(le + eq);
        let mut basis = Vec::with_capacity(le + eq);
        let dense = |row: &SparseRow| -> Result<Vec<Num>, LpError> {
            let mut acc = vec![Rational::zero(); cols];
            for (j, a) in row {
                if *j >= n {
                    return Err(LpError::BadIndex { index: *j, num_vars: n });
                }
                acc[*j] += a;
            }
            Ok(acc.iter().map(Num::from_rational).collect())
        };
        for (i, (row, b)) in lp.le_rows.iter().enumerate() {
            if b.is_negative() {
                return Err(LpError::NegativeRhs(i));
            }
            let mut d = dense(row)?;
            d[n + i] = Num::one();
            rows.push(d);
            rhs.push(Num::from_rational(b));
            basis.push(n + i);
        }
        for (k, row) in lp.eq_zero_rows.iter().enumerate() {
            let mut d = dense(row)?;
            d[n + le + k] = Num::one();
            rows.push(d);
            rhs.push(Num::zero());
            basis.push(n + le + k);
        }
        let mut obj = vec![Num::zero(); cols];
        for (j, c) in lp.objective.iter().enumerate() {
            obj[j] = Num::from_rational(&-c.clone());
        }
        let mut blocked = vec![false; cols];
        for b in blocked.iter_mut().skip(n + le) {
            *b = true;
        }
        let live = vec![true; rows.len()];
        Ok(Tableau { rows, rhs, obj, obj_value: Num::zero(), basis, blocked, live, pivots: 0, degenerate: 0 })
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        let nz: Vec<usize> = (0..self.rows[r].len()).filter(|&j| !self.rows[r][j].is_zero()).collect();
        for &j in &nz {
            self.rows[r][j] = self.rows[r][j].mul(&inv);
        }
        self.rhs[r] = self.rhs[r].mul(&inv);
        let pivot_row: Vec<(usize, Num)> = nz.iter().map(|&j| (j, self.rows[r][j].clone())).collect();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || !self.live[i] || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            let row = &mut self.rows[i];
            for (j, a) in &pivot_row {
                row[*j] = row[*j].sub(&f.mul(a));
            }
            if !pivot_rhs.is_zero() {
                self.rhs[i] = self.rhs[i].sub(&f.mul(&pivot_rhs));
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (j, a) in &pivot_row {
                self.obj[*j] = self.obj[*j].sub(&f.mul(a));
            }
            self.obj_value = self.obj_value.sub(&f.mul(&pivot_rhs));
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    fn run(mut self, lp: &LinearProgram) -> Result<LpSolution, LpError> {
        let n = lp.num_vars;
        let le = lp.le_rows.len();
        // Phase one: every artificial sits at zero; pivot each out or drop its row.
        for r in le..self.rows.len() {
            if self.basis[r] < n + le {
                continue;
            }
            match (0..n + le).find(|&j| !self.rows[r][j].is_zero()) {
                Some(j) => self.pivot(r, j),
                None => self.live[r] = false,
            }
        }

        let mut stalled = 0usize;
        loop {
            let bland = stalled >= STALL_LIMIT;
            let entering = if bland {
                (0..self.obj.len()).find(|&j| !self.blocked[j] && self.obj[j].is_negative())
            } else {
                let mut best: Option<usize> = None;
                for j in 0..self.obj.len() {
                    if self.blocked[j] || !self.obj[j].is_negative() {
                        continue;
                    }
                    if best.map_or(true, |b| self.obj[j].cmp(&self.obj[b]) == Ordering::Less) {
                        best = Some(j);
                    }
                }
                best
            };
            let Some(c) = entering else { break };
            let mut leave: Option<(usize, Num)> = None;
            for r in 0..self.rows.len() {
                if !self.live[r] || !self.rows[r][c].is_positive() {
                    continue;
                }
                let ratio = self.rhs[r].div(&self.rows[r][c]);
                let better = match &leave {
                    None => true,
                    Some((lr, lv)) => match ratio.cmp(lv) {
                        Ordering::Less => true,
                        Ordering::Equal => self.basis[r] < self.basis[*lr],
                        Ordering::Greater => false,
                    },
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, step)) = leave else { return Err(LpError::Unbounded(c)) };
            if step.is_zero() {
                self.degenerate += 1;
                stalled += 1;
            } else {
                stalled = 0;
            }
            self.pivot(r, c);
        }

        let mut x = vec![Rational::zero(); n];
        for (r, &b) in self.basis.iter().enumerate() {
            if self.live[r] && b < n {
                x[b] = self.rhs[r].to_rational();
            }
        }
        let le_duals = (0..le).map(|i| self.obj[n + i].to_rational()).collect();
        Ok(LpSolution { x, value: self.obj_value.to_rational(), le_duals, pivots: self.pivots, degenerate_pivots: self.degenerate })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn small_max() {
        // max 3x + 2y, x + y <= 4, x + 3y <= 6, x <= 3
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![int(3), int(2)];
        lp.add_le(vec![(0, int(1)), (1, int(1))], int(4));
        lp.add_le(vec![(0, int(1)), (1, int(3))], int(6));
        lp.add_le(vec![(0, int(1))], int(3));
        let s = lp.solve().unwrap();
        assert_eq!(s.value, int(11));
        assert_eq!(s.x, vec![int(3), int(1)]);
        // strong duality
        let dual: Rational = s.le_duals.iter().zip([4, 6, 3]).map(|(y, b)| y * int(b)).sum();
        assert_eq!(dual, int(11));
    }

    #[test]
    fn fractional_vertex() {
        // max x + y, 2x + y <= 1, x + 2y <= 1
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![int(1), int(1)];
        lp.add_le(vec![(0, int(2)), (1, int(1))], int(1));
        lp.add_le(vec![(0, int(1)), (1, int(2))], int(1));
        let s = lp.solve().unwrap();
        assert_eq!(s.value, ratio(2, 3));
    }

    #[test]
    fn equality_rows() {
        // max z, x - z = 0, y - z = 0, x <= 2, y <= 5, plus a redundant row
        let mut lp = LinearProgram::new(3);
        lp.objective = vec![int(0), int(0), int(1)];
        lp.add_le(vec![(0, int(1))], int(2));
        lp.add_le(vec![(1, int(1))], int(5));
        lp.add_eq_zero(vec![(0, int(1)), (2, int(-1))]);
        lp.add_eq_zero(vec![(1, int(1)), (2, int(-1))]);
        lp.add_eq_zero(vec![(0, int(1)), (1, int(-1))]);
        let s = lp.solve().unwrap();
        assert_eq!(s.value, int(2));
    }

    #[test]
    fn unbounded_detected() {
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![int(1), int(0)];
        lp.add_le(vec![(1, int(1))], int(1));
        assert!(matches!(lp.solve(), Err(LpError::Unbounded(_))));
    }

    #[test]
    fn negative_rhs_rejected() {
        let mut lp = LinearProgram::new(1);
        lp.add_le(vec![(0, int(1))], int(-1));
        assert_eq!(lp.solve().unwrap_err(), LpError::NegativeRhs(0));
    }
}
