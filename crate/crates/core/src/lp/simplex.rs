//! Dense two-phase primal simplex for `min c'x` subject to linear rows and
//! box bounds `0 <= x <= u`. Nonbasic variables sit at either bound; the
//! ratio test includes bound flips. Dantzig pricing switches to Bland's
//! rule after a run of degenerate pivots.

use thiserror::Error;

/// Feasibility and pricing tolerance.
pub const TAU: f64 = 1e-7;
const PIVOT_TOL: f64 = 1e-9;
const DEGENERATE_RUN: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimplexError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("iteration limit {0} reached")]
    IterationLimit(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinearProgram {
    pub cost: Vec<f64>,
    /// Upper bound per variable (`f64::INFINITY` for none).
    pub upper: Vec<f64>,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

impl LinearProgram {
    pub fn new(cost: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(cost.len(), upper.len());
        LinearProgram {
            cost,
            upper,
            rows: Vec::new(),
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, f64)>, sense: Sense, rhs: f64) {
        self.rows.push(Row { coeffs, sense, rhs });
    }

    /// Largest violation of any row or bound by `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (j, &v) in x.iter().enumerate() {
            worst = worst.max(-v).max(v - self.upper[j]);
        }
        for row in &self.rows {
            let lhs: f64 = row.coeffs.iter().map(|&(j, a)| a * x[j]).sum();
            let gap = match row.sense {
                Sense::Le => lhs - row.rhs,
                Sense::Ge => row.rhs - lhs,
                Sense::Eq => (lhs - row.rhs).abs(),
            };
            worst = worst.max(gap);
        }
        worst
    }

    pub fn solve(&self) -> Result<SimplexSolution, SimplexError> {
        Tableau::build(self).run(self)
    }
}

struct Tableau {
    m: usize,
    cols: usize,
    t: Vec<Vec<f64>>,
    beta: Vec<f64>,
    basis: Vec<usize>,
    at_upper: Vec<bool>,
    upper: Vec<f64>,
    artificial_from: usize,
    iterations: usize,
}

enum Step {
    Optimal,
    Moved,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.cost.len();
        let m = lp.rows.len();
        let mut slack_count = 0;
        for row in &lp.rows {
            if row.sense != Sense::Eq {
                slack_count += 1;
            }
        }
        let artificial_from = n + slack_count;
        // Worst case one artificial per row.
        let cols = artificial_from + m;
        let mut t = vec![vec![0.0; cols]; m];
        let mut beta = vec![0.0; m];
        let mut basis = vec![0; m];
        let mut upper = lp.upper.clone();
        upper.resize(cols, f64::INFINITY);
        let mut next_slack = n;
        for (i, row) in lp.rows.iter().enumerate() {
            let flip = row.rhs < 0.0;
            let sign = if flip { -1.0 } else { 1.0 };
            for &(j, a) in &row.coeffs {
                t[i][j] += sign * a;
            }
            beta[i] = sign * row.rhs;
            let sense = match (row.sense, flip) {
                (Sense::Le, true) => Sense::Ge,
                (Sense::Ge, true) => Sense::Le,
                (s, _) => s,
            };
            match sense {
                Sense::Le => {
                    t[i][next_slack] = 1.0;
                    basis[i] = next_slack;
                    next_slack += 1;
                }
                Sense::Ge => {
                    t[i][next_slack] = -1.0;
                    next_slack += 1;
                    t[i][artificial_from + i] = 1.0;
                    basis[i] = artificial_from + i;
                }
                Sense::Eq => {
                    t[i][artificial_from + i] = 1.0;
                    basis[i] = artificial_from + i;
                }
            }
        }
        // Unused artificial columns are fixed at zero.
        for i in 0..m {
            if basis[i] != artificial_from + i {
                upper[artificial_from + i] = 0.0;
            }
        }
        Tableau {
            m,
            cols,
            t,
            beta,
            basis,
            at_upper: vec![false; cols],
            upper,
            artificial_from,
            iterations: 0,
        }
    }

    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut d = cost.to_vec();
        for i in 0..self.m {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                for (dj, &tij) in d.iter_mut().zip(&self.t[i]) {
                    *dj -= cb * tij;
                }
            }
        }
        for i in 0..self.m {
            d[self.basis[i]] = 0.0;
        }
        d
    }

    fn is_basic(&self) -> Vec<bool> {
        let mut b = vec![false; self.cols];
        for &j in &self.basis {
            b[j] = true;
        }
        b
    }

    fn value(&self, j: usize, basic_row: &[Option<usize>]) -> f64 {
        match basic_row[j] {
            Some(i) => self.beta[i],
            None if self.at_upper[j] => self.upper[j],
            None => 0.0,
        }
    }

    fn pivot(&mut self, r: usize, j: usize, d: &mut [f64]) {
        let p = self.t[r][j];
        for v in self.t[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.t[r].clone();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.t[i][j];
            if f != 0.0 {
                for (v, &pr) in self.t[i].iter_mut().zip(&pivot_row) {
                    *v -= f * pr;
                }
                self.t[i][j] = 0.0;
            }
        }
        let f = d[j];
        if f != 0.0 {
            for (v, &pr) in d.iter_mut().zip(&pivot_row) {
                *v -= f * pr;
            }
        }
        d[j] = 0.0;
        self.basis[r] = j;
    }

    /// One pricing + ratio-test step over the columns allowed by `allowed`.
    fn step(&mut self, d: &mut [f64], allowed: usize, bland: bool) -> Result<(Step, bool), SimplexError> {
        let basic = self.is_basic();
        let mut enter: Option<(usize, f64)> = None;
        for j in 0..allowed {
            if basic[j] || self.upper[j] <= 0.0 {
                continue;
            }
            let score = if self.at_upper[j] { d[j] } else { -d[j] };
            if score > TAU && enter.is_none_or(|(_, s)| !bland && score > s) {
                enter = Some((j, score));
            }
        }
        let Some((j, _)) = enter else {
            return Ok((Step::Optimal, false));
        };
        let dir = if self.at_upper[j] { -1.0 } else { 1.0 };

        // (limit, row, leaving goes to upper)
        let mut leave: Option<(f64, usize, bool)> = None;
        for i in 0..self.m {
            let a = self.t[i][j] * dir;
            let (lim, to_upper) = if a > PIVOT_TOL {
                (self.beta[i].max(0.0) / a, false)
            } else if a < -PIVOT_TOL && self.upper[self.basis[i]].is_finite() {
                ((self.upper[self.basis[i]] - self.beta[i]).max(0.0) / -a, true)
            } else {
                continue;
            };
            let replace = match leave {
                None => true,
                Some((best, r, _)) => {
                    if lim < best - PIVOT_TOL {
                        true
                    } else if lim <= best + PIVOT_TOL {
                        if bland {
                            self.basis[i] < self.basis[r]
                        } else {
                            self.t[i][j].abs() > self.t[r][j].abs()
                        }
                    } else {
                        false
                    }
                }
            };
            if replace {
                leave = Some((lim, i, to_upper));
            }
        }

        let flip = self.upper[j];
        match leave {
            None if flip.is_infinite() => Err(SimplexError::Unbounded),
            Some((lim, _, _)) if lim >= flip => {
                self.apply_move(j, dir, flip);
                self.at_upper[j] = !self.at_upper[j];
                Ok((Step::Moved, flip <= PIVOT_TOL))
            }
            None => {
                self.apply_move(j, dir, flip);
                self.at_upper[j] = !self.at_upper[j];
                Ok((Step::Moved, false))
            }
            Some((lim, r, to_upper)) => {
                let start = if self.at_upper[j] { self.upper[j] } else { 0.0 };
                self.apply_move(j, dir, lim);
                let leaving = self.basis[r];
                self.beta[r] = start + dir * lim;
                self.at_upper[leaving] = to_upper;
                self.at_upper[j] = false;
                self.pivot(r, j, d);
                Ok((Step::Moved, lim <= PIVOT_TOL))
            }
        }
    }

    fn apply_move(&mut self, j: usize, dir: f64, t: f64) {
        if t == 0.0 {
            return;
        }
        for i in 0..self.m {
            self.beta[i] -= self.t[i][j] * dir * t;
            if self.beta[i].abs() < 1e-13 {
                self.beta[i] = 0.0;
            }
        }
    }

    fn optimize(&mut self, d: &mut [f64], allowed: usize, limit: usize) -> Result<(), SimplexError> {
        let mut degenerate = 0;
        let mut bland = false;
        loop {
            if self.iterations >= limit {
                return Err(SimplexError::IterationLimit(limit));
            }
            self.iterations += 1;
            let (step, was_degenerate) = self.step(d, allowed, bland)?;
            if let Step::Optimal = step {
                return Ok(());
            }
            if was_degenerate {
                degenerate += 1;
                if degenerate > DEGENERATE_RUN {
                    bland = true;
                }
            } else {
                degenerate = 0;
            }
        }
    }

    fn run(mut self, lp: &LinearProgram) -> Result<SimplexSolution, SimplexError> {
        let n = lp.cost.len();
        let limit = 50_000 + 50 * (self.m + self.cols);

        // Phase 1: minimise the sum of artificials.
        let mut phase1 = vec![0.0; self.cols];
        for c in phase1.iter_mut().skip(self.artificial_from) {
            *c = 1.0;
        }
        let mut d = self.reduced_costs(&phase1);
        self.optimize(&mut d, self.cols, limit)?;
        let infeasibility: f64 = (0..self.m)
            .filter(|&i| self.basis[i] >= self.artificial_from)
            .map(|i| self.beta[i])
            .sum();
        let scale = 1.0 + lp.rows.iter().map(|r| r.rhs.abs()).sum::<f64>();
        if infeasibility > TAU * scale {
            return Err(SimplexError::Infeasible);
        }

        // Drive remaining artificials out of the basis where possible.
        for r in 0..self.m {
            if self.basis[r] < self.artificial_from {
                continue;
            }
            let basic = self.is_basic();
            let col = (0..self.artificial_from).find(|&j| !basic[j] && self.t[r][j].abs() > PIVOT_TOL);
            if let Some(j) = col {
                let value = if self.at_upper[j] { self.upper[j] } else { 0.0 };
                let leaving = self.basis[r];
                self.at_upper[leaving] = false;
                self.at_upper[j] = false;
                self.beta[r] = value;
                self.pivot(r, j, &mut d);
            }
        }
        for j in self.artificial_from..self.cols {
            self.upper[j] = 0.0;
            self.at_upper[j] = false;
        }

        // Phase 2.
        let mut cost = lp.cost.clone();
        cost.resize(self.cols, 0.0);
        let mut d = self.reduced_costs(&cost);
        self.optimize(&mut d, self.artificial_from, limit)?;

        let mut basic_row = vec![None; self.cols];
        for (i, &j) in self.basis.iter().enumerate() {
            basic_row[j] = Some(i);
        }
        let x: Vec<f64> = (0..n).map(|j| self.value(j, &basic_row).clamp(0.0, lp.upper[j])).collect();
        let objective = x.iter().zip(&lp.cost).map(|(a, b)| a * b).sum();
        Ok(SimplexSolution {
            x,
            objective,
            iterations: self.iterations,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_max_problem() {
        // max 3x + 2y  s.t. x + y <= 4, x + 3y <= 6, x <= 3
        let mut lp = LinearProgram::new(vec![-3.0, -2.0], vec![3.0, f64::INFINITY]);
        lp.add_row(vec![(0, 1.0), (1, 1.0)], Sense::Le, 4.0);
        lp.add_row(vec![(0, 1.0), (1, 3.0)], Sense::Le, 6.0);
        let s = lp.solve().unwrap();
        assert!((s.objective + 11.0).abs() < 1e-9);
        assert!((s.x[0] - 3.0).abs() < 1e-9 && (s.x[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn equality_and_ge() {
        // min x + 2y + 3z s.t. x + y + z = 2, y + z >= 1.5, all <= 1
        let mut lp = LinearProgram::new(vec![1.0, 2.0, 3.0], vec![1.0; 3]);
        lp.add_row(vec![(0, 1.0), (1, 1.0), (2, 1.0)], Sense::Eq, 2.0);
        lp.add_row(vec![(1, 1.0), (2, 1.0)], Sense::Ge, 1.5);
        let s = lp.solve().unwrap();
        assert!((s.objective - 4.0).abs() < 1e-9, "{s:?}");
        assert!(lp.max_violation(&s.x) < 1e-9);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(vec![1.0], vec![1.0]);
        lp.add_row(vec![(0, 1.0)], Sense::Ge, 2.0);
        assert_eq!(lp.solve().unwrap_err(), SimplexError::Infeasible);
        let mut lp = LinearProgram::new(vec![-1.0], vec![f64::INFINITY]);
        lp.add_row(vec![(0, -1.0)], Sense::Le, 0.0);
        assert_eq!(lp.solve().unwrap_err(), SimplexError::Unbounded);
    }

    #[test]
    fn negative_rhs_rows() {
        // min x s.t. -x <= -0.5
        let mut lp = LinearProgram::new(vec![1.0], vec![1.0]);
        lp.add_row(vec![(0, -1.0)], Sense::Le, -0.5);
        let s = lp.solve().unwrap();
        assert!((s.x[0] - 0.5).abs() < 1e-12);
    }
}
