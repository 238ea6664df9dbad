//! Dense linear programming.
//!
//! [`solve`] is a two-phase primal simplex on a dense tableau with bounded
//! variables. Pricing is Dantzig's rule until a run of degenerate pivots
//! trips a counter, after which Bland's rule is used for the remainder of
//! the phase. [`vertex_oracle`] enumerates basic points and is only meant
//! for cross-checking tiny problems.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::solve_dense;

/// `min c.w` subject to `eq_rows`, `le_rows` and per-variable bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub eq_rows: Vec<(Vec<f64>, f64)>,
    pub le_rows: Vec<(Vec<f64>, f64)>,
    pub bounds: Vec<(f64, f64)>,
}

impl LpProblem {
    /// Problem with a zero objective, no rows and free variables.
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            objective: vec![0.0; num_vars],
            eq_rows: Vec::new(),
            le_rows: Vec::new(),
            bounds: vec![(f64::NEG_INFINITY, f64::INFINITY); num_vars],
        }
    }

    pub fn set_objective(&mut self, c: Vec<f64>) -> &mut Self {
        self.objective = c;
        self
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) -> &mut Self {
        self.bounds[var] = (lower, upper);
        self
    }

    pub fn add_eq(&mut self, coeffs: Vec<f64>, rhs: f64) -> &mut Self {
        self.eq_rows.push((coeffs, rhs));
        self
    }

    pub fn add_le(&mut self, coeffs: Vec<f64>, rhs: f64) -> &mut Self {
        self.le_rows.push((coeffs, rhs));
        self
    }

    /// `coeffs.w >= rhs`, stored as its negated `<=` row.
    pub fn add_ge(&mut self, coeffs: Vec<f64>, rhs: f64) -> &mut Self {
        self.le_rows
            .push((coeffs.into_iter().map(|a| -a).collect(), -rhs));
        self
    }

    pub fn num_rows(&self) -> usize {
        self.eq_rows.len() + self.le_rows.len()
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.num_vars;
        if self.objective.len() != d || self.bounds.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "objective/bounds must have length {d}"
            )));
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("objective".into()));
        }
        for (i, (row, rhs)) in self.eq_rows.iter().chain(&self.le_rows).enumerate() {
            if row.len() != d {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} coefficients, expected {d}",
                    row.len()
                )));
            }
            if !rhs.is_finite() || row.iter().any(|a| !a.is_finite()) {
                return Err(Error::NonFinite(format!("row {i}")));
            }
        }
        for (i, &(lo, hi)) in self.bounds.iter().enumerate() {
            if lo.is_nan()
                || hi.is_nan()
                || lo > hi
                || lo == f64::INFINITY
                || hi == f64::NEG_INFINITY
            {
                return Err(Error::InvalidArgument(format!(
                    "variable {i} has bounds [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }

    /// Largest violation of any row or bound at `w`.
    pub fn max_violation(&self, w: &[f64]) -> f64 {
        let dot = |a: &[f64]| a.iter().zip(w).map(|(x, y)| x * y).sum::<f64>();
        let eq = self.eq_rows.iter().map(|(a, b)| (dot(a) - b).abs());
        let le = self.le_rows.iter().map(|(a, b)| (dot(a) - b).max(0.0));
        let bd = self
            .bounds
            .iter()
            .zip(w)
            .map(|(&(lo, hi), &x)| (lo - x).max(x - hi).max(0.0));
        eq.chain(le).chain(bd).fold(0.0, f64::max)
    }

    pub fn objective_at(&self, w: &[f64]) -> f64 {
        self.objective.iter().zip(w).map(|(c, x)| c * x).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

impl LpStatus {
    pub fn name(self) -> &'static str {
        match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
            LpStatus::IterationLimit => "iteration_limit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Present iff `status == Optimal`.
    pub point: Option<Vec<f64>>,
    pub objective: f64,
    pub iterations: usize,
}

impl LpSolution {
    fn without_point(status: LpStatus, iterations: usize) -> Self {
        let objective = match status {
            LpStatus::Unbounded => f64::NEG_INFINITY,
            LpStatus::Infeasible => f64::INFINITY,
            LpStatus::Optimal | LpStatus::IterationLimit => f64::NAN,
        };
        Self {
            status,
            point: None,
            objective,
            iterations,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub feas_tol: f64,
    pub pivot_tol: f64,
    /// Reduced-cost threshold for declaring optimality.
    pub opt_tol: f64,
    /// Defaults to `50 * (d + rows)` when `None`.
    pub max_iters: Option<usize>,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub degeneracy_limit: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            feas_tol: 1e-9,
            pivot_tol: 1e-10,
            opt_tol: 1e-10,
            max_iters: None,
            degeneracy_limit: 50,
        }
    }
}

pub fn solve(p: &LpProblem, opts: &SolveOptions) -> Result<LpSolution> {
    p.validate()?;
    let max_iters = opts
        .max_iters
        .unwrap_or(50 * (p.num_vars + p.num_rows()).max(1));
    let mut sf = StandardForm::build(p);
    Ok(sf.run(p, opts, max_iters))
}

/// How an original variable is recovered from standard-form columns.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    /// `w = offset + x`
    Shift(usize, f64),
    /// `w = offset - x`
    Flip(usize, f64),
    /// `w = x_plus - x_minus`
    Split(usize, usize),
}

/// `A x = b`, `0 <= x <= upper`, `b >= 0`.
struct StandardForm {
    m: usize,
    n: usize,
    /// Original column data, row-major `m x n`.
    a: Vec<f64>,
    b: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>,
    artificial: Vec<bool>,
    map: Vec<VarMap>,
    initial_basis: Vec<usize>,
}

impl StandardForm {
    fn build(p: &LpProblem) -> Self {
        let d = p.num_vars;
        let mut map = Vec::with_capacity(d);
        let mut upper = Vec::new();
        let mut cost = Vec::new();
        // per original variable: list of (column, sign), plus constant offset
        let mut cols_of: Vec<(Vec<(usize, f64)>, f64)> = Vec::with_capacity(d);
        for (i, &(lo, hi)) in p.bounds.iter().enumerate() {
            let c = p.objective[i];
            if lo.is_finite() {
                let j = upper.len();
                upper.push(hi - lo);
                cost.push(c);
                map.push(VarMap::Shift(j, lo));
                cols_of.push((vec![(j, 1.0)], lo));
            } else if hi.is_finite() {
                let j = upper.len();
                upper.push(f64::INFINITY);
                cost.push(-c);
                map.push(VarMap::Flip(j, hi));
                cols_of.push((vec![(j, -1.0)], hi));
            } else {
                let j = upper.len();
                upper.extend([f64::INFINITY, f64::INFINITY]);
                cost.extend([c, -c]);
                map.push(VarMap::Split(j, j + 1));
                cols_of.push((vec![(j, 1.0), (j + 1, -1.0)], 0.0));
            }
        }
        let n_struct = upper.len();
        let n_eq = p.eq_rows.len();
        let n_le = p.le_rows.len();
        let m = n_eq + n_le;

        // structural part of each row and its shifted rhs
        let mut rows: Vec<(Vec<f64>, f64)> = Vec::with_capacity(m);
        for (coeffs, rhs) in p.eq_rows.iter().chain(&p.le_rows) {
            let mut row = vec![0.0; n_struct];
            let mut b = *rhs;
            for (i, &a) in coeffs.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let (ref cols, offset) = cols_of[i];
                b -= a * offset;
                for &(j, s) in cols {
                    row[j] += a * s;
                }
            }
            rows.push((row, b));
        }

        // slacks for le rows, then artificials where no slack can start basic
        let n_slack = n_le;
        let mut needs_art = Vec::with_capacity(m);
        let mut sign = Vec::with_capacity(m);
        for (r, (_, b)) in rows.iter().enumerate() {
            let s = if *b < 0.0 { -1.0 } else { 1.0 };
            sign.push(s);
            needs_art.push(r < n_eq || s < 0.0);
        }
        let n_art = needs_art.iter().filter(|&&x| x).count();
        let n = n_struct + n_slack + n_art;
        let mut a = vec![0.0; m * n];
        let mut bvec = vec![0.0; m];
        let mut initial_basis = vec![0; m];
        let mut artificial = vec![false; n];
        let mut next_art = n_struct + n_slack;
        for (r, (row, b)) in rows.iter().enumerate() {
            let s = sign[r];
            for (j, &v) in row.iter().enumerate() {
                a[r * n + j] = s * v;
            }
            bvec[r] = s * b;
            if r >= n_eq {
                let slack = n_struct + (r - n_eq);
                a[r * n + slack] = s;
                if !needs_art[r] {
                    initial_basis[r] = slack;
                }
            }
            if needs_art[r] {
                a[r * n + next_art] = 1.0;
                artificial[next_art] = true;
                initial_basis[r] = next_art;
                next_art += 1;
            }
        }
        upper.extend(std::iter::repeat_n(f64::INFINITY, n_slack + n_art));
        cost.extend(std::iter::repeat_n(0.0, n_slack + n_art));
        Self {
            m,
            n,
            a,
            b: bvec,
            upper,
            cost,
            artificial,
            map,
            initial_basis,
        }
    }

    fn run(&mut self, p: &LpProblem, opts: &SolveOptions, max_iters: usize) -> LpSolution {
        let mut tab = Tableau::new(self);
        let mut iterations = 0;

        if self.artificial.iter().any(|&x| x) {
            let phase1: Vec<f64> = self
                .artificial
                .iter()
                .map(|&art| if art { 1.0 } else { 0.0 })
                .collect();
            match tab.optimize(self, &phase1, opts, max_iters, &mut iterations) {
                PhaseOutcome::Optimal => {}
                PhaseOutcome::IterationLimit => {
                    return LpSolution::without_point(LpStatus::IterationLimit, iterations)
                }
                // phase one is bounded below by zero
                PhaseOutcome::Unbounded => {
                    return LpSolution::without_point(LpStatus::IterationLimit, iterations)
                }
            }
            tab.refresh_values(self, opts.pivot_tol);
            let infeasibility: f64 = (0..self.n)
                .filter(|&j| self.artificial[j])
                .map(|j| tab.value[j].max(0.0))
                .sum();
            let scale = 1.0 + self.b.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            if infeasibility > opts.feas_tol * scale {
                return LpSolution::without_point(LpStatus::Infeasible, iterations);
            }
            tab.evict_artificials(self, opts.pivot_tol);
            for j in 0..self.n {
                if self.artificial[j] {
                    self.upper[j] = 0.0;
                }
            }
            tab.refresh_values(self, opts.pivot_tol);
        }

        let cost = self.cost.clone();
        match tab.optimize(self, &cost, opts, max_iters, &mut iterations) {
            PhaseOutcome::Optimal => {}
            PhaseOutcome::Unbounded => {
                return LpSolution::without_point(LpStatus::Unbounded, iterations)
            }
            PhaseOutcome::IterationLimit => {
                return LpSolution::without_point(LpStatus::IterationLimit, iterations)
            }
        }
        tab.refresh_values(self, opts.pivot_tol);

        let x: Vec<f64> = (0..self.n)
            .map(|j| tab.value[j].clamp(0.0, self.upper[j]))
            .collect();
        let w: Vec<f64> = self
            .map
            .iter()
            .zip(&p.bounds)
            .map(|(vm, &(lo, hi))| {
                let v = match *vm {
                    VarMap::Shift(j, off) => off + x[j],
                    VarMap::Flip(j, off) => off - x[j],
                    VarMap::Split(j, k) => x[j] - x[k],
                };
                v.clamp(lo, hi)
            })
            .collect();
        LpSolution {
            status: LpStatus::Optimal,
            objective: p.objective_at(&w),
            point: Some(w),
            iterations,
        }
    }
}

enum PhaseOutcome {
    Optimal,
    Unbounded,
    IterationLimit,
}

/// `B^{-1} A` with the current basis, and the value of every column.
struct Tableau {
    t: Vec<f64>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    at_upper: Vec<bool>,
    value: Vec<f64>,
}

impl Tableau {
    fn new(sf: &StandardForm) -> Self {
        let mut is_basic = vec![false; sf.n];
        let mut value = vec![0.0; sf.n];
        for (r, &j) in sf.initial_basis.iter().enumerate() {
            is_basic[j] = true;
            value[j] = sf.b[r];
        }
        // the initial basis columns are unit vectors, so B^{-1} A = A
        Self {
            t: sf.a.clone(),
            basis: sf.initial_basis.clone(),
            is_basic,
            at_upper: vec![false; sf.n],
            value,
        }
    }

    fn pivot(&mut self, n: usize, r: usize, q: usize) {
        let m = self.basis.len();
        let piv = self.t[r * n + q];
        for c in 0..n {
            self.t[r * n + c] /= piv;
        }
        for i in 0..m {
            if i == r {
                continue;
            }
            let f = self.t[i * n + q];
            if f == 0.0 {
                continue;
            }
            for c in 0..n {
                self.t[i * n + c] -= f * self.t[r * n + c];
            }
            self.t[i * n + q] = 0.0;
        }
        let leaving = self.basis[r];
        self.is_basic[leaving] = false;
        self.is_basic[q] = true;
        self.at_upper[q] = false;
        self.basis[r] = q;
    }

    /// Recompute basic values from the original data: `B x_B = b - N x_N`.
    fn refresh_values(&mut self, sf: &StandardForm, pivot_tol: f64) {
        let (m, n) = (sf.m, sf.n);
        if m == 0 {
            return;
        }
        let mut rhs = sf.b.clone();
        for j in 0..n {
            if self.is_basic[j] || self.value[j] == 0.0 {
                continue;
            }
            for (r, v) in rhs.iter_mut().enumerate() {
                *v -= sf.a[r * n + j] * self.value[j];
            }
        }
        let mut bmat = vec![0.0; m * m];
        for r in 0..m {
            for (k, &j) in self.basis.iter().enumerate() {
                bmat[r * m + k] = sf.a[r * n + j];
            }
        }
        if let Some(xb) = solve_dense(&bmat, &rhs, m, pivot_tol * 1e-3) {
            for (k, &j) in self.basis.iter().enumerate() {
                self.value[j] = xb[k];
            }
        }
    }

    /// Pivot zero-valued artificials out of the basis where possible.
    fn evict_artificials(&mut self, sf: &StandardForm, pivot_tol: f64) {
        let n = sf.n;
        for r in 0..sf.m {
            if !sf.artificial[self.basis[r]] {
                continue;
            }
            let best = (0..n)
                .filter(|&j| !self.is_basic[j] && !sf.artificial[j])
                .map(|j| (j, self.t[r * n + j].abs()))
                .filter(|&(_, a)| a > pivot_tol)
                .max_by(|x, y| x.1.total_cmp(&y.1));
            if let Some((q, _)) = best {
                let leaving = self.basis[r];
                self.pivot(n, r, q);
                self.value[leaving] = 0.0;
            }
        }
    }

    fn reduced_costs(&self, n: usize, cost: &[f64]) -> Vec<f64> {
        let mut d = cost.to_vec();
        for (r, &j) in self.basis.iter().enumerate() {
            let cb = cost[j];
            if cb == 0.0 {
                continue;
            }
            for (c, dc) in d.iter_mut().enumerate() {
                *dc -= cb * self.t[r * n + c];
            }
        }
        d
    }

    fn optimize(
        &mut self,
        sf: &StandardForm,
        cost: &[f64],
        opts: &SolveOptions,
        max_iters: usize,
        iterations: &mut usize,
    ) -> PhaseOutcome {
        let n = sf.n;
        let mut bland = false;
        let mut degenerate_run = 0usize;
        loop {
            let d = self.reduced_costs(n, cost);
            let eligible = |j: usize| -> Option<f64> {
                if self.is_basic[j] || sf.upper[j] <= 0.0 {
                    return None;
                }
                let gain = if self.at_upper[j] { d[j] } else { -d[j] };
                (gain > opts.opt_tol).then_some(gain)
            };
            let entering = if bland {
                (0..n).find(|&j| eligible(j).is_some())
            } else {
                (0..n)
                    .filter_map(|j| eligible(j).map(|g| (j, g)))
                    .fold(None, |best: Option<(usize, f64)>, (j, g)| match best {
                        Some((_, bg)) if bg >= g => best,
                        _ => Some((j, g)),
                    })
                    .map(|(j, _)| j)
            };
            let Some(q) = entering else {
                return PhaseOutcome::Optimal;
            };
            if *iterations >= max_iters {
                return PhaseOutcome::IterationLimit;
            }
            *iterations += 1;

            let dir = if self.at_upper[q] { -1.0 } else { 1.0 };
            // (row, rate, step limit) of the blocking basic variable
            let mut block: Option<(usize, f64, f64)> = None;
            for r in 0..sf.m {
                let rate = self.t[r * n + q] * dir;
                let j = self.basis[r];
                let limit = if rate > opts.pivot_tol {
                    self.value[j].max(0.0) / rate
                } else if rate < -opts.pivot_tol && sf.upper[j].is_finite() {
                    (sf.upper[j] - self.value[j]).max(0.0) / -rate
                } else {
                    continue;
                };
                block = match block {
                    None => Some((r, rate, limit)),
                    Some((br, brate, bl)) => {
                        if limit < bl - 1e-12 {
                            Some((r, rate, limit))
                        } else if limit <= bl + 1e-12 {
                            let prefer_new = if bland {
                                j < self.basis[br]
                            } else {
                                rate.abs() > brate.abs()
                            };
                            if prefer_new {
                                Some((r, rate, limit.min(bl)))
                            } else {
                                Some((br, brate, bl.min(limit)))
                            }
                        } else {
                            block
                        }
                    }
                };
            }
            let (theta, leave) = match block {
                Some((r, rate, limit)) if limit <= sf.upper[q] => (limit, Some((r, rate))),
                _ => (sf.upper[q], None),
            };
            if theta.is_infinite() {
                return PhaseOutcome::Unbounded;
            }

            if theta <= 1e-12 {
                degenerate_run += 1;
                if degenerate_run >= opts.degeneracy_limit {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
            }

            for r in 0..sf.m {
                let rate = self.t[r * n + q] * dir;
                if rate != 0.0 {
                    let j = self.basis[r];
                    self.value[j] -= theta * rate;
                }
            }
            self.value[q] += dir * theta;

            match leave {
                None => {
                    // bound flip
                    self.at_upper[q] = !self.at_upper[q];
                    self.value[q] = if self.at_upper[q] { sf.upper[q] } else { 0.0 };
                }
                Some((r, rate)) => {
                    let leaving = self.basis[r];
                    let to_upper = rate < 0.0;
                    self.value[leaving] = if to_upper { sf.upper[leaving] } else { 0.0 };
                    self.pivot(n, r, q);
                    self.at_upper[leaving] = to_upper;
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum RowKind {
    Eq,
    Le,
}

/// Exact optimum of a tiny problem by enumerating every point where `d`
/// linearly independent constraints or bounds are active.
///
/// Unboundedness is detected by boxing every infinite bound at `1e6` and
/// `2e6`: a bounded problem has the same optimum in both boxes.
pub fn vertex_oracle(p: &LpProblem) -> Result<LpSolution> {
    p.validate()?;
    let d = p.num_vars;
    let finite_bounds = p
        .bounds
        .iter()
        .map(|&(lo, hi)| lo.is_finite() as usize + hi.is_finite() as usize)
        .sum::<usize>();
    if d > 6 || p.num_rows() + finite_bounds > 14 {
        return Err(Error::SizeGuard(format!(
            "vertex oracle needs d <= 6 and rows + finite bounds <= 14, got d = {d}, {}",
            p.num_rows() + finite_bounds
        )));
    }
    let near = enumerate_vertices(p, 1e6);
    if near.status != LpStatus::Optimal {
        return Ok(near);
    }
    let far = enumerate_vertices(p, 2e6);
    if far.objective < near.objective - 1e-9 * (1.0 + near.objective.abs()) {
        return Ok(LpSolution::without_point(LpStatus::Unbounded, 0));
    }
    Ok(near)
}

fn enumerate_vertices(p: &LpProblem, bigm: f64) -> LpSolution {
    let d = p.num_vars;
    let mut rows: Vec<(Vec<f64>, f64, RowKind)> = Vec::new();
    for (a, b) in &p.eq_rows {
        rows.push((a.clone(), *b, RowKind::Eq));
    }
    for (a, b) in &p.le_rows {
        rows.push((a.clone(), *b, RowKind::Le));
    }
    for (i, &(lo, hi)) in p.bounds.iter().enumerate() {
        let mut e = vec![0.0; d];
        e[i] = -1.0;
        rows.push((
            e.clone(),
            if lo.is_finite() { -lo } else { bigm },
            RowKind::Le,
        ));
        e[i] = 1.0;
        rows.push((e, if hi.is_finite() { hi } else { bigm }, RowKind::Le));
    }
    let scale = 1.0
        + rows
            .iter()
            .flat_map(|(a, b, _)| a.iter().chain(std::iter::once(b)))
            .fold(0.0f64, |m, x| m.max(x.abs()));
    let tol = 1e-9 * scale;

    let feasible = |w: &[f64]| {
        rows.iter().all(|(a, b, kind)| {
            let lhs: f64 = a.iter().zip(w).map(|(x, y)| x * y).sum();
            match kind {
                RowKind::Eq => (lhs - b).abs() <= tol,
                RowKind::Le => lhs <= b + tol,
            }
        })
    };

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut consider = |w: Vec<f64>| {
        if !feasible(&w) {
            return;
        }
        let obj = p.objective_at(&w);
        if best.as_ref().is_none_or(|(bo, _)| obj < *bo - 1e-12) {
            best = Some((obj, w));
        }
    };

    if d == 0 {
        consider(Vec::new());
    } else {
        let k = rows.len();
        let mut idx: Vec<usize> = (0..d).collect();
        loop {
            let mut mat = Vec::with_capacity(d * d);
            let mut rhs = Vec::with_capacity(d);
            for &i in &idx {
                mat.extend_from_slice(&rows[i].0);
                rhs.push(rows[i].1);
            }
            if let Some(w) = solve_dense(&mat, &rhs, d, 1e-12) {
                consider(w);
            }
            // next combination
            let mut i = d;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if idx[i] < k - d + i {
                    idx[i] += 1;
                    for j in i + 1..d {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
                if i == 0 {
                    idx.clear();
                    break;
                }
            }
            if idx.is_empty() {
                break;
            }
        }
    }

    match best {
        Some((obj, w)) => LpSolution {
            status: LpStatus::Optimal,
            point: Some(w),
            objective: obj,
            iterations: 0,
        },
        None => LpSolution::without_point(LpStatus::Infeasible, 0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> SolveOptions {
        SolveOptions::default()
    }

    fn single_var_lower_one() -> LpProblem {
        let mut p = LpProblem::new(1);
        p.set_objective(vec![1.0]).add_ge(vec![1.0], 1.0);
        p
    }

    fn infeasible_pair() -> LpProblem {
        let mut p = LpProblem::new(1);
        p.add_ge(vec![1.0], 1.0).add_le(vec![1.0], 0.0);
        p
    }

    fn polygon() -> LpProblem {
        let mut p = LpProblem::new(2);
        p.set_objective(vec![-1.0, -1.0])
            .add_le(vec![1.0, 2.0], 4.0)
            .set_bounds(0, 0.0, 3.0)
            .set_bounds(1, 0.0, 3.0);
        p
    }

    #[test]
    fn simple_lower_bound() {
        for sol in [
            solve(&single_var_lower_one(), &opts()).unwrap(),
            vertex_oracle(&single_var_lower_one()).unwrap(),
        ] {
            assert_eq!(sol.status, LpStatus::Optimal);
            assert!((sol.point.unwrap()[0] - 1.0).abs() < 1e-12);
            assert!((sol.objective - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        assert_eq!(
            solve(&infeasible_pair(), &opts()).unwrap().status,
            LpStatus::Infeasible
        );
        assert_eq!(
            vertex_oracle(&infeasible_pair()).unwrap().status,
            LpStatus::Infeasible
        );
    }

    #[test]
    fn polygon_optimum() {
        // vertices of {w1 + 2 w2 <= 4, 0 <= w <= 3}:
        // (0,0) (3,0) (3,0.5) (0,2); the objective -w1-w2 is smallest at (3,0.5)
        let verts = [[0.0, 0.0], [3.0, 0.0], [3.0, 0.5], [0.0, 2.0]];
        let best = verts
            .iter()
            .map(|v| -v[0] - v[1])
            .fold(f64::INFINITY, f64::min);
        assert_eq!(best, -3.5);
        for sol in [
            solve(&polygon(), &opts()).unwrap(),
            vertex_oracle(&polygon()).unwrap(),
        ] {
            assert_eq!(sol.status, LpStatus::Optimal);
            let w = sol.point.unwrap();
            assert!((w[0] - 3.0).abs() < 1e-12 && (w[1] - 0.5).abs() < 1e-12);
            assert!((sol.objective - best).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_duplicate_rows() {
        let mut p = LpProblem::new(1);
        p.set_objective(vec![1.0])
            .add_ge(vec![1.0], 0.0)
            .add_ge(vec![1.0], 0.0);
        for sol in [solve(&p, &opts()).unwrap(), vertex_oracle(&p).unwrap()] {
            assert_eq!(sol.status, LpStatus::Optimal);
            assert!(sol.objective.abs() < 1e-12);
        }
    }

    #[test]
    fn unbounded_ray() {
        let mut p = LpProblem::new(1);
        p.set_objective(vec![-1.0])
            .set_bounds(0, 0.0, f64::INFINITY);
        assert_eq!(solve(&p, &opts()).unwrap().status, LpStatus::Unbounded);
        assert_eq!(vertex_oracle(&p).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn free_and_upper_only_variables() {
        // min w0 - w1, w0 free with w0 >= -2 as a row, w1 <= 5 only
        let mut p = LpProblem::new(2);
        p.set_objective(vec![1.0, -1.0])
            .add_ge(vec![1.0, 0.0], -2.0)
            .set_bounds(1, f64::NEG_INFINITY, 5.0);
        let sol = solve(&p, &opts()).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective + 7.0).abs() < 1e-12);
        let w = sol.point.unwrap();
        assert!((w[0] + 2.0).abs() < 1e-12 && (w[1] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn equality_rows_and_redundancy() {
        // duplicated equality row leaves an artificial in a redundant row
        let mut p = LpProblem::new(3);
        p.set_objective(vec![1.0, 2.0, 3.0])
            .add_eq(vec![1.0, 1.0, 1.0], 1.0)
            .add_eq(vec![2.0, 2.0, 2.0], 2.0);
        for i in 0..3 {
            p.set_bounds(i, 0.0, f64::INFINITY);
        }
        let sol = solve(&p, &opts()).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 1.0).abs() < 1e-12);
        assert!(p.max_violation(&sol.point.unwrap()) < 1e-9);
    }

    #[test]
    fn fixed_variables() {
        let mut p = LpProblem::new(2);
        p.set_objective(vec![1.0, 1.0])
            .set_bounds(0, 2.0, 2.0)
            .set_bounds(1, -1.0, 4.0)
            .add_ge(vec![1.0, 1.0], 3.0);
        let sol = solve(&p, &opts()).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 3.0).abs() < 1e-12);
    }

    #[test]
    fn iteration_limit_is_reported() {
        let mut o = opts();
        o.max_iters = Some(0);
        let sol = solve(&polygon(), &o).unwrap();
        assert_eq!(sol.status, LpStatus::IterationLimit);
        assert!(sol.point.is_none());
    }

    #[test]
    fn rejects_malformed_problems() {
        let mut p = LpProblem::new(2);
        p.add_le(vec![1.0], 1.0);
        assert!(solve(&p, &opts()).is_err());
        let mut p = LpProblem::new(1);
        p.set_bounds(0, 1.0, 0.0);
        assert!(solve(&p, &opts()).is_err());
        let mut p = LpProblem::new(1);
        p.add_le(vec![1.0], f64::INFINITY);
        assert!(solve(&p, &opts()).is_err());
    }

    #[test]
    fn oracle_size_guard() {
        let p = LpProblem::new(7);
        assert!(matches!(vertex_oracle(&p), Err(Error::SizeGuard(_))));
    }

    #[test]
    fn deterministic() {
        let a = solve(&polygon(), &opts()).unwrap();
        let b = solve(&polygon(), &opts()).unwrap();
        assert_eq!(a, b);
    }
}
