//! Two-phase primal simplex for standard-form linear programs
//!
//! ```text
//! minimize cᵗx  subject to  Ax = b,  x ≥ 0
//! ```
//!
//! The tableau is dense. The entering variable follows Bland's
//! smallest-index rule; the leaving variable prefers large pivots and falls
//! back to the smallest-index rule on long degenerate runs, so the method
//! terminates on degenerate problems (transportation polytopes are highly
//! degenerate). Phase 1 starts from an
//! all-artificial basis; artificial columns are never allowed to re-enter,
//! so they are not stored.

use crate::error::{FrameError, Result};

/// Entries with magnitude at or below this are not used as pivots.
const PIVOT_TOL: f64 = 1e-7;

/// Right-hand-side relaxation in the first pass of the ratio test.
const RATIO_RELAX: f64 = 1e-11;

/// Maximum number of reinversions per phase.
const REFRESH_ROUNDS: usize = 4;

/// Zero-length steps tolerated before switching to the smallest-index rule.
const DEGENERATE_STREAK: usize = 50;

/// Reduced costs must be below `-COST_TOL` to enter the basis.
const COST_TOL: f64 = 1e-12;

/// Threshold for pivoting a zero-level artificial variable out of the basis.
const DRIVE_OUT_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    num_vars: usize,
    objective: Vec<f64>,
    constraints: Vec<Vec<f64>>,
    rhs: Vec<f64>,
}

impl LpProblem {
    /// Equality-constrained problem over nonnegative variables.
    pub fn new(objective: Vec<f64>, constraints: Vec<Vec<f64>>, rhs: Vec<f64>) -> Result<Self> {
        let num_vars = objective.len();
        if constraints.len() != rhs.len() {
            return Err(FrameError::InvalidProblem(format!(
                "{} constraint rows but {} right-hand sides",
                constraints.len(),
                rhs.len()
            )));
        }
        if let Some(row) = constraints.iter().find(|r| r.len() != num_vars) {
            return Err(FrameError::InvalidProblem(format!(
                "constraint row has {} columns, expected {num_vars}",
                row.len()
            )));
        }
        let finite = objective
            .iter()
            .chain(constraints.iter().flatten())
            .chain(&rhs)
            .all(|v| v.is_finite());
        if !finite {
            return Err(FrameError::InvalidProblem("non-finite coefficient".into()));
        }
        Ok(LpProblem {
            num_vars,
            objective,
            constraints,
            rhs,
        })
    }

    /// Pure feasibility problem (zero objective).
    pub fn feasibility(constraints: Vec<Vec<f64>>, rhs: Vec<f64>) -> Result<Self> {
        let n = constraints.first().map_or(0, |r| r.len());
        LpProblem::new(vec![0.0; n], constraints, rhs)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_constraints(&self) -> usize {
        self.rhs.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    /// `max(1, ‖b‖_max)`.
    pub fn scale(&self) -> f64 {
        self.rhs.iter().fold(1.0f64, |m, v| m.max(v.abs()))
    }

    /// `‖Ax − b‖_max`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        self.constraints
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| (crate::linalg::dot(row, x) - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn objective_at(&self, x: &[f64]) -> f64 {
        crate::linalg::dot(&self.objective, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Vertex solution; empty unless `status` is `Optimal`.
    pub point: Vec<f64>,
    pub objective_value: f64,
    pub max_constraint_violation: f64,
    /// Sum of artificial variables at the end of phase 1 (row-equilibrated units).
    pub phase_one_objective: f64,
    pub pivots: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct LpOptions {
    /// Phase-1 optimum above `feasibility_tol·scale` means infeasible; an
    /// optimal point must satisfy `‖Ax − b‖_max ≤ feasibility_tol·scale`.
    pub feasibility_tol: f64,
    pub max_pivots: Option<usize>,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            feasibility_tol: 1e-9,
            max_pivots: None,
        }
    }
}

pub fn solve(problem: &LpProblem) -> Result<LpSolution> {
    solve_with(problem, &LpOptions::default())
}

pub fn solve_with(problem: &LpProblem, options: &LpOptions) -> Result<LpSolution> {
    let n = problem.num_vars;
    let scale = problem.scale();
    let tol = options.feasibility_tol * scale;

    // Row equilibration and sign normalization (b ≥ 0).
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(problem.rhs.len());
    let mut rhs: Vec<f64> = Vec::with_capacity(problem.rhs.len());
    for (row, &b) in problem.constraints.iter().zip(&problem.rhs) {
        let big = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if big == 0.0 {
            if b.abs() > tol {
                return Ok(infeasible(b.abs(), 0));
            }
            continue;
        }
        let s = if b < 0.0 { -1.0 / big } else { 1.0 / big };
        rows.push(row.iter().map(|v| v * s).collect());
        rhs.push(b * s);
    }

    let mut tab = Tableau::new(&rows, &rhs, n);
    let max_pivots = options
        .max_pivots
        .unwrap_or(20_000 + 200 * (n + rows.len()));
    // original (equilibrated) constraint behind each artificial index n + k
    let mut active: Vec<usize> = (0..rows.len()).collect();

    // Phase 1: minimize the sum of artificials.
    for _ in 0..REFRESH_ROUNDS {
        tab.set_phase_one_costs();
        if tab.run(max_pivots)? == PhaseEnd::Unbounded {
            return Err(FrameError::NumericalBreakdown(
                "phase 1 reported an unbounded direction".into(),
            ));
        }
        if !tab.refresh(&rows, &rhs, &active) {
            break;
        }
        tab.set_phase_one_costs();
        if !tab.can_improve() {
            break;
        }
    }
    let phase_one = (-tab.cost_rhs).max(0.0);
    if phase_one > options.feasibility_tol * row_scale(&rhs) {
        return Ok(infeasible(phase_one, tab.pivots));
    }

    // Drive zero-level artificials out; rows where that is impossible are redundant.
    let mut redundant = Vec::new();
    for i in 0..tab.m {
        if tab.basis[i] < n {
            continue;
        }
        // the level is below tolerance; pivoting on it must not move other rows
        tab.set_rhs(i, 0.0);
        let col = (0..n)
            .filter(|&j| !tab.is_basic(j))
            .max_by(|&a, &b| tab.at(i, a).abs().total_cmp(&tab.at(i, b).abs()))
            .filter(|&j| tab.at(i, j).abs() > DRIVE_OUT_TOL);
        match col {
            Some(j) => tab.pivot(i, j),
            None => redundant.push(i),
        }
    }
    let dropped: Vec<usize> = redundant.iter().map(|&i| tab.basis[i] - n).collect();
    active.retain(|k| !dropped.contains(k));
    tab.remove_rows(&redundant);

    // Phase 2.
    let mut end = PhaseEnd::Optimal;
    for _ in 0..REFRESH_ROUNDS {
        tab.set_costs(&problem.objective);
        end = tab.run(max_pivots)?;
        if end == PhaseEnd::Unbounded || !tab.refresh(&rows, &rhs, &active) {
            break;
        }
        tab.set_costs(&problem.objective);
        if !tab.can_improve() {
            break;
        }
    }
    if end == PhaseEnd::Unbounded {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            point: Vec::new(),
            objective_value: f64::NEG_INFINITY,
            max_constraint_violation: f64::NAN,
            phase_one_objective: phase_one,
            pivots: tab.pivots,
        });
    }

    let mut point = vec![0.0; n];
    for i in 0..tab.m {
        point[tab.basis[i]] = tab.rhs(i).max(0.0);
    }
    let violation = problem.max_violation(&point);
    if violation > tol {
        return Err(FrameError::NumericalBreakdown(format!(
            "solution violates constraints by {violation:e}"
        )));
    }
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective_value: problem.objective_at(&point),
        point,
        max_constraint_violation: violation,
        phase_one_objective: phase_one,
        pivots: tab.pivots,
    })
}

fn row_scale(rhs: &[f64]) -> f64 {
    rhs.iter().fold(1.0f64, |m, v| m.max(v.abs()))
}

fn infeasible(phase_one: f64, pivots: usize) -> LpSolution {
    LpSolution {
        status: LpStatus::Infeasible,
        point: Vec::new(),
        objective_value: f64::NAN,
        max_constraint_violation: f64::NAN,
        phase_one_objective: phase_one,
        pivots,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PhaseEnd {
    Optimal,
    Unbounded,
}

/// Constraint rows `[A | b]` (width n+1) plus a reduced-cost row.
struct Tableau {
    m: usize,
    n: usize,
    data: Vec<f64>,
    cost: Vec<f64>,
    cost_rhs: f64,
    /// Basic variable per row; indices `>= n` are artificials.
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    pivots: usize,
}

impl Tableau {
    fn new(rows: &[Vec<f64>], rhs: &[f64], n: usize) -> Self {
        let m = rows.len();
        let w = n + 1;
        let mut data = vec![0.0; m * w];
        for (i, (row, b)) in rows.iter().zip(rhs).enumerate() {
            data[i * w..i * w + n].copy_from_slice(row);
            data[i * w + n] = *b;
        }
        Tableau {
            m,
            n,
            data,
            cost: vec![0.0; n],
            cost_rhs: 0.0,
            basis: (n..n + m).collect(),
            in_basis: vec![false; n],
            pivots: 0,
        }
    }

    fn width(&self) -> usize {
        self.n + 1
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.width() + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.data[i * self.width() + self.n]
    }

    /// Phase-1 reduced costs: artificials cost 1, structural columns 0.
    fn set_phase_one_costs(&mut self) {
        let n = self.n;
        self.cost.fill(0.0);
        self.cost_rhs = 0.0;
        for i in 0..self.m {
            if self.basis[i] < n {
                continue;
            }
            for j in 0..n {
                self.cost[j] -= self.at(i, j);
            }
            self.cost_rhs -= self.rhs(i);
        }
        for j in 0..n {
            if self.in_basis[j] {
                self.cost[j] = 0.0;
            }
        }
    }

    /// Reduced costs for `objective`; the basis must be free of artificials.
    fn set_costs(&mut self, objective: &[f64]) {
        let n = self.n;
        self.cost.copy_from_slice(objective);
        self.cost_rhs = 0.0;
        for i in 0..self.m {
            let cb = objective[self.basis[i]];
            if cb == 0.0 {
                continue;
            }
            for j in 0..n {
                self.cost[j] -= cb * self.at(i, j);
            }
            self.cost_rhs -= cb * self.rhs(i);
        }
        for j in 0..n {
            if self.in_basis[j] {
                self.cost[j] = 0.0;
            }
        }
    }

    fn can_improve(&self) -> bool {
        (0..self.n).any(|j| !self.in_basis[j] && self.cost[j] < -COST_TOL)
    }

    /// Recomputes `B⁻¹[A | b]` from the original constraints for the current
    /// basis, discarding accumulated round-off. `active[r]` is the original
    /// row behind tableau row `r`'s constraint set. Returns false (leaving
    /// the tableau untouched) if the basis matrix is numerically singular.
    fn refresh(&mut self, rows: &[Vec<f64>], rhs: &[f64], active: &[usize]) -> bool {
        let (m, n) = (self.m, self.n);
        if active.len() != m {
            return false;
        }
        let w = m + n + 1;
        let mut aug = vec![0.0; m * w];
        for (r, &k) in active.iter().enumerate() {
            for (p, &b) in self.basis.iter().enumerate() {
                aug[r * w + p] = if b < n {
                    rows[k][b]
                } else if b - n == k {
                    1.0
                } else {
                    0.0
                };
            }
            aug[r * w + m..r * w + m + n].copy_from_slice(&rows[k]);
            aug[r * w + m + n] = rhs[k];
        }
        // Gauss-Jordan with partial pivoting on the basis block.
        for c in 0..m {
            let piv = (c..m)
                .max_by(|&a, &b| aug[a * w + c].abs().total_cmp(&aug[b * w + c].abs()))
                .expect("nonempty range");
            if aug[piv * w + c].abs() < 1e-12 {
                return false;
            }
            if piv != c {
                for t in 0..w {
                    aug.swap(piv * w + t, c * w + t);
                }
            }
            let d = aug[c * w + c];
            for t in 0..w {
                aug[c * w + t] /= d;
            }
            for r in 0..m {
                if r == c {
                    continue;
                }
                let f = aug[r * w + c];
                if f == 0.0 {
                    continue;
                }
                for t in 0..w {
                    aug[r * w + t] -= f * aug[c * w + t];
                }
            }
        }
        let tw = self.width();
        for p in 0..m {
            let dst = &mut self.data[p * tw..(p + 1) * tw];
            dst.copy_from_slice(&aug[p * w + m..(p + 1) * w]);
            if dst[n] < 0.0 && dst[n] > -1e-9 {
                dst[n] = 0.0;
            }
        }
        for p in 0..m {
            let b = self.basis[p];
            if b < n {
                for r in 0..m {
                    self.data[r * tw + b] = if r == p { 1.0 } else { 0.0 };
                }
            }
        }
        true
    }

    fn set_rhs(&mut self, i: usize, v: f64) {
        let k = i * self.width() + self.n;
        self.data[k] = v;
    }

    fn is_basic(&self, j: usize) -> bool {
        self.in_basis[j]
    }

    /// Runs simplex pivots until optimality or unboundedness.
    ///
    /// The entering column is the lowest-index improving one. The leaving
    /// row uses a two-pass ratio test: the step is bounded by the smallest
    /// ratio with right-hand sides relaxed by `RATIO_RELAX`, and among rows
    /// within that bound the largest pivot entry wins. After
    /// `DEGENERATE_STREAK` consecutive zero-length steps the strict
    /// smallest-index rule takes over until progress resumes.
    fn run(&mut self, max_pivots: usize) -> Result<PhaseEnd> {
        let mut streak = 0usize;
        loop {
            let entering = (0..self.n).find(|&j| !self.in_basis[j] && self.cost[j] < -COST_TOL);
            let Some(col) = entering else {
                return Ok(PhaseEnd::Optimal);
            };
            let candidates: Vec<(usize, f64, f64)> = (0..self.m)
                .filter_map(|i| {
                    let a = self.at(i, col);
                    (a > PIVOT_TOL).then(|| (i, a, self.rhs(i).max(0.0)))
                })
                .collect();
            if candidates.is_empty() {
                return Ok(PhaseEnd::Unbounded);
            }
            let row = if streak < DEGENERATE_STREAK {
                let bound = candidates
                    .iter()
                    .map(|&(_, a, b)| (b + RATIO_RELAX) / a)
                    .fold(f64::INFINITY, f64::min);
                candidates
                    .iter()
                    .filter(|&&(_, a, b)| b / a <= bound)
                    .max_by(|x, y| {
                        x.1.total_cmp(&y.1)
                            .then(self.basis[y.0].cmp(&self.basis[x.0]))
                    })
                    .map(|c| c.0)
            } else {
                let best = candidates
                    .iter()
                    .map(|&(_, a, b)| b / a)
                    .fold(f64::INFINITY, f64::min);
                let slack = 1e-12 * (1.0 + best);
                candidates
                    .iter()
                    .filter(|&&(_, a, b)| b / a <= best + slack)
                    .min_by_key(|c| self.basis[c.0])
                    .map(|c| c.0)
            }
            .expect("candidate set is nonempty");
            if self.pivots >= max_pivots {
                return Err(FrameError::NumericalBreakdown(format!(
                    "pivot limit {max_pivots} reached"
                )));
            }
            let step = self.rhs(row).max(0.0) / self.at(row, col);
            streak = if step > 0.0 { 0 } else { streak + 1 };
            self.pivot(row, col);
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.width();
        let p = self.at(row, col);
        {
            let r = &mut self.data[row * w..(row + 1) * w];
            for v in r.iter_mut() {
                *v /= p;
            }
            r[col] = 1.0;
        }
        let pivot_row: Vec<f64> = self.data[row * w..(row + 1) * w].to_vec();
        for i in 0..self.m {
            if i == row {
                continue;
            }
            let f = self.data[i * w + col];
            if f == 0.0 {
                continue;
            }
            let r = &mut self.data[i * w..(i + 1) * w];
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            r[col] = 0.0;
            if r[self.n] < 0.0 && r[self.n] > -1e-9 {
                r[self.n] = 0.0;
            }
        }
        let f = self.cost[col];
        if f != 0.0 {
            for (c, pv) in self.cost.iter_mut().zip(&pivot_row[..self.n]) {
                *c -= f * pv;
            }
            self.cost[col] = 0.0;
            self.cost_rhs -= f * pivot_row[self.n];
        }
        let old = self.basis[row];
        if old < self.n {
            self.in_basis[old] = false;
        }
        self.basis[row] = col;
        self.in_basis[col] = true;
        self.pivots += 1;
    }

    fn remove_rows(&mut self, rows: &[usize]) {
        if rows.is_empty() {
            return;
        }
        let w = self.width();
        let mut data = Vec::with_capacity(self.data.len());
        let mut basis = Vec::with_capacity(self.m);
        for i in 0..self.m {
            if rows.contains(&i) {
                continue;
            }
            data.extend_from_slice(&self.data[i * w..(i + 1) * w]);
            basis.push(self.basis[i]);
        }
        self.data = data;
        self.basis = basis;
        self.m = self.basis.len();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_variable() {
        let p = LpProblem::new(vec![1.0], vec![vec![1.0]], vec![1.0]).unwrap();
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.point[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_system() {
        let p =
            LpProblem::feasibility(vec![vec![1.0, 1.0], vec![1.0, -1.0]], vec![1.0, 3.0]).unwrap();
        assert_eq!(solve(&p).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn two_by_two_transport() {
        // x = (x11, x12, x21, x22)
        let p = LpProblem::new(
            vec![0.0, 1.0, 1.0, 0.0],
            vec![
                vec![1.0, 1.0, 0.0, 0.0],
                vec![0.0, 0.0, 1.0, 1.0],
                vec![1.0, 0.0, 1.0, 0.0],
                vec![0.0, 1.0, 0.0, 1.0],
            ],
            vec![0.5, 0.5, 0.5, 0.5],
        )
        .unwrap();
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!(s.objective_value.abs() < 1e-12);
        assert!((s.point[0] - 0.5).abs() < 1e-12 && (s.point[3] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn unbounded_and_shape_errors() {
        // min -x1 s.t. x1 - x2 = 0
        let p = LpProblem::new(vec![-1.0, 0.0], vec![vec![1.0, -1.0]], vec![0.0]).unwrap();
        assert_eq!(solve(&p).unwrap().status, LpStatus::Unbounded);
        assert!(LpProblem::new(vec![1.0], vec![vec![1.0, 2.0]], vec![1.0]).is_err());
        assert!(LpProblem::new(vec![1.0], vec![vec![1.0]], vec![1.0, 2.0]).is_err());
        assert!(LpProblem::new(vec![f64::NAN], vec![vec![1.0]], vec![1.0]).is_err());
    }

    #[test]
    fn negative_rhs_and_zero_rows() {
        // -x1 = -2, 0 = 0
        let p = LpProblem::new(
            vec![1.0, 1.0],
            vec![vec![-1.0, 0.0], vec![0.0, 0.0]],
            vec![-2.0, 0.0],
        )
        .unwrap();
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.point[0] - 2.0).abs() < 1e-12);
        let p = LpProblem::new(vec![1.0], vec![vec![0.0]], vec![1.0]).unwrap();
        assert_eq!(solve(&p).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn redundant_constraints_are_tolerated() {
        let p = LpProblem::new(
            vec![1.0, 2.0],
            vec![vec![1.0, 1.0], vec![2.0, 2.0]],
            vec![1.0, 2.0],
        )
        .unwrap();
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective_value - 1.0).abs() < 1e-12);
    }

    /// Random LP built around a known feasible point `x0`.
    fn lp_with_point() -> impl Strategy<Value = (LpProblem, Vec<f64>, Vec<Vec<f64>>)> {
        (2usize..7, 1usize..5).prop_flat_map(|(n, m)| {
            let m = m.min(n);
            (
                prop::collection::vec(prop::collection::vec(-2.0f64..2.0, n), m),
                prop::collection::vec(0.0f64..1.0, n),
                prop::collection::vec(0.0f64..3.0, n),
                prop::collection::vec(prop::collection::vec(0.0f64..1.0, n), 4),
            )
                .prop_map(|(a, x0, c, dirs)| {
                    let b: Vec<f64> = a.iter().map(|r| crate::linalg::dot(r, &x0)).collect();
                    let p = LpProblem::new(c, a, b).unwrap();
                    (p, x0, dirs)
                })
        })
    }

    proptest! {
        #[test]
        fn optimum_beats_known_feasible_point((p, x0, _dirs) in lp_with_point()) {
            // costs are nonnegative so the problem is bounded below
            let s = solve(&p).unwrap();
            prop_assert_eq!(s.status, LpStatus::Optimal);
            prop_assert!(s.objective_value <= p.objective_at(&x0) + 1e-9);
            prop_assert!(s.max_constraint_violation <= 1e-9 * p.scale());
            prop_assert!(s.point.iter().all(|&v| v >= -1e-12));
        }

        #[test]
        fn solve_is_deterministic((p, _x0, _dirs) in lp_with_point()) {
            let a = solve(&p).unwrap();
            let b = solve(&p).unwrap();
            prop_assert_eq!(a.point.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
                            b.point.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
        }
    }
}
