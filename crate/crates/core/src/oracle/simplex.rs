//! Dense bounded-variable primal simplex with Bland's rule.
//!
//! Every row `a x {<=,>=,=} b` is turned into `a x + s = b` with a slack whose
//! bounds encode the sense. Phase one starts from an all-artificial basis and
//! minimises the artificial sum; artificial columns are never stored because
//! an artificial that leaves the basis is never allowed back. The full
//! tableau `B^-1 [A | I]` is kept explicitly, which is fine for the few
//! hundred columns the in-repo models produce.

use super::lp::{LinearProgram, Sense};

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    /// Values of the structural variables.
    pub values: Vec<f64>,
    pub objective: f64,
    /// Row duals `y` such that the reduced cost of column `j` is `c_j - y^T A_j`.
    pub duals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
    /// Pivot budget exhausted; never observed on the in-repo models.
    IterationLimit,
}

impl LpOutcome {
    pub fn solution(&self) -> Option<&LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }

    pub fn objective(&self) -> Option<f64> {
        self.solution().map(|s| s.objective)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Step {
    Optimal,
    Unbounded,
    Pivoted,
}

struct Tableau {
    rows: usize,
    cols: usize,
    /// Row-major `rows x cols` matrix `B^-1 [A | I]`.
    t: Vec<f64>,
    /// Current value of every column variable (structural and slack).
    x: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    /// Variable index basic in each row; `>= cols` marks an artificial.
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    /// Values of basic artificials, indexed by row.
    art: Vec<f64>,
    /// Upper bound of artificials: free to grow in phase one, pinned to zero after.
    art_hi: f64,
    /// Reduced costs of the column variables.
    d: Vec<f64>,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.t[r * self.cols + c]
    }

    fn basic_value(&self, r: usize) -> f64 {
        let b = self.basis[r];
        if b >= self.cols {
            self.art[r]
        } else {
            self.x[b]
        }
    }

    fn basic_bounds(&self, r: usize) -> (f64, f64) {
        let b = self.basis[r];
        if b >= self.cols {
            (0.0, self.art_hi)
        } else {
            (self.lo[b], self.hi[b])
        }
    }

    fn set_basic_value(&mut self, r: usize, v: f64) {
        let b = self.basis[r];
        if b >= self.cols {
            self.art[r] = v;
        } else {
            self.x[b] = v;
        }
    }

    fn reprice(&mut self, cost: &[f64], art_cost: f64) {
        let mut d = cost.to_vec();
        for r in 0..self.rows {
            let b = self.basis[r];
            let cb = if b >= self.cols { art_cost } else { cost[b] };
            if cb != 0.0 {
                let row = &self.t[r * self.cols..(r + 1) * self.cols];
                for (dj, a) in d.iter_mut().zip(row) {
                    *dj -= cb * a;
                }
            }
        }
        for (j, dj) in d.iter_mut().enumerate() {
            if self.is_basic[j] {
                *dj = 0.0;
            }
        }
        self.d = d;
    }

    // Bland: lowest-index column whose move improves the objective.
    fn entering(&self) -> Option<(usize, f64)> {
        (0..self.cols).find_map(|j| {
            if self.is_basic[j] || self.hi[j] - self.lo[j] <= 0.0 {
                return None;
            }
            let dj = self.d[j];
            let can_up = self.x[j] < self.hi[j];
            let can_down = self.x[j] > self.lo[j];
            if dj < -COST_TOL && can_up {
                Some((j, 1.0))
            } else if dj > COST_TOL && can_down {
                Some((j, -1.0))
            } else {
                None
            }
        })
    }

    fn iterate(&mut self) -> Step {
        let Some((q, dir)) = self.entering() else {
            return Step::Optimal;
        };
        let mut best = f64::INFINITY;
        let mut leave: Option<(usize, usize)> = None; // (row, variable)
        // distance to the entering variable's own bound in the direction of travel
        let flip = if dir > 0.0 {
            self.hi[q] - self.x[q]
        } else {
            self.x[q] - self.lo[q]
        };
        for r in 0..self.rows {
            let a = self.at(r, q) * dir;
            if a.abs() <= PIVOT_TOL {
                continue;
            }
            let (lo, hi) = self.basic_bounds(r);
            let v = self.basic_value(r);
            let lim = if a > 0.0 {
                if lo == f64::NEG_INFINITY {
                    continue;
                }
                (v - lo) / a
            } else {
                if hi == f64::INFINITY {
                    continue;
                }
                (hi - v) / -a
            };
            let lim = lim.max(0.0);
            let var = self.basis[r];
            let better = match leave {
                None => true,
                Some((_, lv)) => lim < best - PIVOT_TOL || (lim <= best + PIVOT_TOL && var < lv),
            };
            if better {
                best = lim;
                leave = Some((r, var));
            }
        }
        if flip.is_finite() && (leave.is_none() || flip <= best) {
            self.shift(q, dir * flip);
            self.x[q] = if dir > 0.0 { self.hi[q] } else { self.lo[q] };
            return Step::Pivoted;
        }
        let Some((p, _)) = leave else {
            return Step::Unbounded;
        };
        self.shift(q, dir * best);
        self.pivot(p, q);
        Step::Pivoted
    }

    // Moves nonbasic `q` by `delta` and updates the basic values.
    fn shift(&mut self, q: usize, delta: f64) {
        for r in 0..self.rows {
            let a = self.at(r, q);
            if a != 0.0 {
                let v = self.basic_value(r) - a * delta;
                self.set_basic_value(r, v);
            }
        }
        self.x[q] += delta;
    }

    fn pivot(&mut self, p: usize, q: usize) {
        let cols = self.cols;
        let leaving = self.basis[p];
        let leaving_value = self.basic_value(p);
        if leaving < cols {
            // snap to the bound it reached
            let (lo, hi) = (self.lo[leaving], self.hi[leaving]);
            self.x[leaving] = if (leaving_value - lo).abs() <= (hi - leaving_value).abs() {
                lo
            } else {
                hi
            };
            self.is_basic[leaving] = false;
        }
        let piv = self.at(p, q);
        {
            let row = &mut self.t[p * cols..(p + 1) * cols];
            row.iter_mut().for_each(|v| *v /= piv);
            row[q] = 1.0;
        }
        let prow: Vec<f64> = self.t[p * cols..(p + 1) * cols].to_vec();
        for r in 0..self.rows {
            if r == p {
                continue;
            }
            let f = self.at(r, q);
            if f == 0.0 {
                continue;
            }
            let row = &mut self.t[r * cols..(r + 1) * cols];
            for (v, pv) in row.iter_mut().zip(&prow) {
                *v -= f * pv;
            }
            row[q] = 0.0;
        }
        let fd = self.d[q];
        if fd != 0.0 {
            for (dj, pv) in self.d.iter_mut().zip(&prow) {
                *dj -= fd * pv;
            }
            self.d[q] = 0.0;
        }
        self.basis[p] = q;
        self.is_basic[q] = true;
        self.art[p] = 0.0;
    }

    fn run(&mut self, budget: &mut usize) -> Option<Step> {
        loop {
            if *budget == 0 {
                return None;
            }
            *budget -= 1;
            match self.iterate() {
                Step::Pivoted => continue,
                other => return Some(other),
            }
        }
    }
}

/// Solves `lp` to optimality.
pub fn solve(lp: &LinearProgram) -> LpOutcome {
    let n = lp.num_vars();
    let m = lp.rows.len();
    let cols = n + m;

    let mut lo = lp.lower.clone();
    let mut hi = lp.upper.clone();
    for row in &lp.rows {
        let (l, h) = match row.sense {
            Sense::Le => (0.0, f64::INFINITY),
            Sense::Ge => (f64::NEG_INFINITY, 0.0),
            Sense::Eq => (0.0, 0.0),
        };
        lo.push(l);
        hi.push(h);
    }
    let mut x: Vec<f64> = (0..n)
        .map(|j| {
            if lo[j].is_finite() {
                lo[j]
            } else if hi[j].is_finite() {
                hi[j]
            } else {
                0.0
            }
        })
        .collect();
    x.extend(std::iter::repeat(0.0).take(m));

    let mut t = vec![0.0; m * cols];
    let mut art = vec![0.0; m];
    for (r, row) in lp.rows.iter().enumerate() {
        let mut activity = 0.0;
        for &(j, a) in &row.coeffs {
            t[r * cols + j] += a;
            activity += a * x[j];
        }
        t[r * cols + n + r] = 1.0;
        let residual = row.rhs - activity;
        let s = residual.clamp(lo[n + r], hi[n + r]);
        x[n + r] = s;
        let gap = residual - s;
        // row: a x + s + sigma * art = b, basis entry sigma, so B^-1 row = sigma * row
        if gap < 0.0 {
            t[r * cols..(r + 1) * cols].iter_mut().for_each(|v| *v = -*v);
        }
        art[r] = gap.abs();
    }

    let mut tab = Tableau {
        rows: m,
        cols,
        t,
        x,
        lo,
        hi,
        basis: (cols..cols + m).collect(),
        is_basic: vec![false; cols],
        art,
        art_hi: f64::INFINITY,
        d: vec![0.0; cols],
    };

    let mut budget = 50_000 + 200 * (m + cols);
    let zero = vec![0.0; cols];
    tab.reprice(&zero, 1.0);
    match tab.run(&mut budget) {
        None => return LpOutcome::IterationLimit,
        // phase one is bounded below; this only happens on numerical trouble
        Some(Step::Unbounded) => return LpOutcome::IterationLimit,
        _ => {}
    }
    let infeasibility: f64 = (0..m)
        .filter(|&r| tab.basis[r] >= cols)
        .map(|r| tab.art[r])
        .sum();
    if infeasibility > FEAS_TOL {
        return LpOutcome::Infeasible;
    }
    // Remaining artificials are pinned at zero for phase two.
    for r in 0..m {
        if tab.basis[r] >= cols {
            tab.art[r] = 0.0;
        }
    }
    tab.art_hi = 0.0;

    let mut cost = lp.objective.clone();
    cost.extend(std::iter::repeat(0.0).take(m));
    tab.reprice(&cost, 0.0);
    match tab.run(&mut budget) {
        None => return LpOutcome::IterationLimit,
        Some(Step::Unbounded) => return LpOutcome::Unbounded,
        Some(_) => {}
    }

    let values = tab.x[..n].to_vec();
    let objective = lp.objective_offset
        + values
            .iter()
            .zip(&lp.objective)
            .map(|(v, c)| v * c)
            .sum::<f64>();
    // The slack of row k has column e_k, so its reduced cost is -y_k.
    let duals = (0..m).map(|k| -tab.d[n + k]).collect();
    LpOutcome::Optimal(LpSolution {
        values,
        objective,
        duals,
    })
}
