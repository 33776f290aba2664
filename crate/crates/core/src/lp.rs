//! Revised primal simplex for small and medium dense-basis linear programs.
//!
//! The basis inverse is held explicitly and updated by rank-one eta
//! transformations; it is rebuilt by Gauss-Jordan elimination when the
//! primal residual drifts and once more before optimality is declared.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowKind {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    Singular,
}

#[derive(Debug, Clone)]
pub struct SimplexOptions {
    pub feasibility_tol: f64,
    pub optimality_tol: f64,
    pub pivot_tol: f64,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub bland_after: usize,
    pub max_iterations: Option<usize>,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            feasibility_tol: 1e-9,
            optimality_tol: 1e-9,
            pivot_tol: 1e-9,
            bland_after: 50,
            max_iterations: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective: f64,
    /// Values of the structural variables.
    pub x: Vec<f64>,
    /// Row duals of the final basis, in the caller's row orientation.
    pub duals: Vec<f64>,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
struct Row {
    coefs: Vec<(usize, f64)>,
    kind: RowKind,
    rhs: f64,
}

/// `maximize c·x  subject to  rows,  x >= 0`.
#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    obj: Vec<f64>,
    rows: Vec<Row>,
    hint: Vec<Option<usize>>,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, obj: f64) -> usize {
        self.obj.push(obj);
        self.obj.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.obj.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn add_row(&mut self, coefs: Vec<(usize, f64)>, kind: RowKind, rhs: f64) -> usize {
        debug_assert!(coefs.iter().all(|&(j, _)| j < self.obj.len()));
        self.rows.push(Row { coefs, kind, rhs });
        self.hint.push(None);
        self.rows.len() - 1
    }

    /// Suggests a structural variable to start basic in `row`. Hints that do
    /// not form a nonsingular primal-feasible basis are discarded.
    pub fn hint_basic(&mut self, row: usize, var: usize) {
        self.hint[row] = Some(var);
    }

    pub fn solve(&self, opts: &SimplexOptions) -> LpSolution {
        Simplex::build(self, opts).run()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ColKind {
    Structural,
    Slack,
    Artificial,
}

struct Simplex<'a> {
    opts: &'a SimplexOptions,
    m: usize,
    nstruct: usize,
    /// Sparse columns: structurals, then one slack per inequality row, then
    /// one artificial per row.
    cols: Vec<Vec<(usize, f64)>>,
    kinds: Vec<ColKind>,
    b: Vec<f64>,
    flipped: Vec<bool>,
    cost: Vec<f64>,
    basis: Vec<usize>,
    in_basis: Vec<Option<usize>>,
    /// Row-major explicit basis inverse.
    binv: Vec<f64>,
    xb: Vec<f64>,
    y: Vec<f64>,
    iterations: usize,
    /// Artificials that have left the basis may never return; in phase 2
    /// none may enter.
    art_banned: Vec<bool>,
    phase2: bool,
}

enum Step {
    Optimal,
    Unbounded,
    Pivoted,
}

impl<'a> Simplex<'a> {
    fn build(lp: &LinearProgram, opts: &'a SimplexOptions) -> Self {
        let m = lp.rows.len();
        let nstruct = lp.obj.len();
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nstruct];
        let mut kinds = vec![ColKind::Structural; nstruct];
        let mut b = Vec::with_capacity(m);
        let mut flipped = Vec::with_capacity(m);
        let mut slack_of = vec![None; m];
        for (i, row) in lp.rows.iter().enumerate() {
            let flip = row.rhs < 0.0;
            let s = if flip { -1.0 } else { 1.0 };
            for &(j, v) in &row.coefs {
                if v != 0.0 {
                    cols[j].push((i, s * v));
                }
            }
            b.push(s * row.rhs);
            flipped.push(flip);
            let kind = match (row.kind, flip) {
                (RowKind::Eq, _) => RowKind::Eq,
                (RowKind::Le, false) | (RowKind::Ge, true) => RowKind::Le,
                _ => RowKind::Ge,
            };
            match kind {
                RowKind::Le => {
                    slack_of[i] = Some(cols.len());
                    cols.push(vec![(i, 1.0)]);
                    kinds.push(ColKind::Slack);
                }
                RowKind::Ge => {
                    cols.push(vec![(i, -1.0)]);
                    kinds.push(ColKind::Slack);
                }
                RowKind::Eq => {}
            }
        }
        // Duplicate entries within a column would break the sparse algebra.
        for col in cols.iter_mut().take(nstruct) {
            col.sort_by_key(|e| e.0);
            col.dedup_by(|a, b| {
                if a.0 == b.0 {
                    b.1 += a.1;
                    true
                } else {
                    false
                }
            });
        }
        let art0 = cols.len();
        for i in 0..m {
            cols.push(vec![(i, 1.0)]);
            kinds.push(ColKind::Artificial);
        }
        let ncols = cols.len();
        let mut s = Simplex {
            opts,
            m,
            nstruct,
            cols,
            kinds,
            b,
            flipped,
            cost: vec![0.0; ncols],
            basis: Vec::new(),
            in_basis: vec![None; ncols],
            binv: Vec::new(),
            xb: Vec::new(),
            y: vec![0.0; m],
            iterations: 0,
            art_banned: vec![false; ncols],
            phase2: false,
        };
        let default_basis: Vec<usize> = (0..m)
            .map(|i| match slack_of[i] {
                Some(c) => c,
                None => art0 + i,
            })
            .collect();
        let hinted: Vec<usize> = (0..m)
            .map(|i| match lp.hint[i] {
                Some(v) if v < nstruct => v,
                _ => default_basis[i],
            })
            .collect();
        let use_hint = lp.hint.iter().any(|h| h.is_some()) && s.try_basis(&hinted);
        if !use_hint {
            let ok = s.try_basis(&default_basis);
            debug_assert!(ok, "slack/artificial basis is always feasible");
        }
        s.cost = lp.obj.clone();
        s.cost.resize(ncols, 0.0);
        s
    }

    /// Installs `basis` if it is nonsingular and primal feasible.
    fn try_basis(&mut self, basis: &[usize]) -> bool {
        let mut seen = vec![false; self.cols.len()];
        if basis.iter().any(|&c| std::mem::replace(&mut seen[c], true)) {
            return false;
        }
        let Some(binv) = invert(&self.dense_basis(basis), self.m) else {
            return false;
        };
        let xb = self.mul_binv(&binv, &self.b);
        if xb.iter().any(|&v| v < -self.opts.feasibility_tol) {
            return false;
        }
        self.basis = basis.to_vec();
        self.in_basis.iter_mut().for_each(|p| *p = None);
        for (r, &c) in basis.iter().enumerate() {
            self.in_basis[c] = Some(r);
        }
        self.binv = binv;
        self.xb = xb.into_iter().map(|v| v.max(0.0)).collect();
        true
    }

    fn dense_basis(&self, basis: &[usize]) -> Vec<f64> {
        let m = self.m;
        let mut dense = vec![0.0; m * m];
        for (k, &c) in basis.iter().enumerate() {
            for &(i, v) in &self.cols[c] {
                dense[i * m + k] = v;
            }
        }
        dense
    }

    fn mul_binv(&self, binv: &[f64], v: &[f64]) -> Vec<f64> {
        let m = self.m;
        (0..m).map(|i| binv[i * m..(i + 1) * m].iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    fn refactor(&mut self) -> bool {
        let Some(binv) = invert(&self.dense_basis(&self.basis), self.m) else {
            return false;
        };
        self.binv = binv;
        self.xb = self.mul_binv(&self.binv, &self.b);
        for v in &mut self.xb {
            if *v < 0.0 && *v > -self.opts.feasibility_tol {
                *v = 0.0;
            }
        }
        self.recompute_duals();
        true
    }

    fn recompute_duals(&mut self) {
        let m = self.m;
        let mut y = vec![0.0; m];
        for (k, &c) in self.basis.iter().enumerate() {
            let cb = self.cost[c];
            if cb != 0.0 {
                let row = &self.binv[k * m..(k + 1) * m];
                for (yi, &v) in y.iter_mut().zip(row) {
                    *yi += cb * v;
                }
            }
        }
        self.y = y;
    }

    fn reduced_cost(&self, j: usize) -> f64 {
        self.cost[j] - self.cols[j].iter().map(|&(i, v)| self.y[i] * v).sum::<f64>()
    }

    fn eligible(&self, j: usize) -> bool {
        self.in_basis[j].is_none() && !(self.kinds[j] == ColKind::Artificial && (self.phase2 || self.art_banned[j]))
    }

    fn residual_ok(&self) -> bool {
        let mut r = self.b.clone();
        for (k, &c) in self.basis.iter().enumerate() {
            for &(i, v) in &self.cols[c] {
                r[i] -= v * self.xb[k];
            }
        }
        let scale = 1.0 + self.b.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        r.iter().all(|v| v.abs() <= 1e-9 * scale)
    }

    fn ftran(&self, j: usize) -> Vec<f64> {
        let m = self.m;
        let mut alpha = vec![0.0; m];
        for &(i, v) in &self.cols[j] {
            for (k, a) in alpha.iter_mut().enumerate() {
                *a += self.binv[k * m + i] * v;
            }
        }
        alpha
    }

    fn step(&mut self, bland: bool) -> (Step, bool) {
        let tol = self.opts.optimality_tol;
        let ncols = self.cols.len();
        let mut q = None;
        let mut best = tol;
        for j in 0..ncols {
            if !self.eligible(j) {
                continue;
            }
            let d = self.reduced_cost(j);
            if d > best {
                q = Some((j, d));
                if bland {
                    break;
                }
                best = d;
            }
        }
        let Some((q, dq)) = q else {
            return (Step::Optimal, false);
        };
        let alpha = self.ftran(q);
        let ptol = self.opts.pivot_tol;
        let mut leave: Option<(usize, f64)> = None;
        for (i, &a) in alpha.iter().enumerate() {
            let c = self.basis[i];
            let pinned = self.phase2 && self.kinds[c] == ColKind::Artificial;
            let ratio = if pinned && a.abs() > ptol {
                0.0
            } else if a > ptol {
                self.xb[i].max(0.0) / a
            } else {
                continue;
            };
            let better = match leave {
                None => true,
                Some((r, t)) => {
                    let slack = 1e-12 * (1.0 + t.abs());
                    if ratio < t - slack {
                        true
                    } else if ratio <= t + slack {
                        if bland {
                            c < self.basis[r]
                        } else {
                            a.abs() > alpha[r].abs()
                        }
                    } else {
                        false
                    }
                }
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((r, t)) = leave else {
            return (Step::Unbounded, false);
        };
        self.pivot(q, r, t, &alpha, dq);
        (Step::Pivoted, t <= 1e-14)
    }

    fn pivot(&mut self, q: usize, r: usize, t: f64, alpha: &[f64], dq: f64) {
        let m = self.m;
        let ar = alpha[r];
        // Duals use the pre-update pivot row.
        let row_r: Vec<f64> = self.binv[r * m..(r + 1) * m].iter().map(|v| v / ar).collect();
        for (yi, &v) in self.y.iter_mut().zip(&row_r) {
            *yi += dq * v;
        }
        for (i, &a) in alpha.iter().enumerate() {
            if i == r || a == 0.0 {
                continue;
            }
            let row = &mut self.binv[i * m..(i + 1) * m];
            for (x, &p) in row.iter_mut().zip(&row_r) {
                *x -= a * p;
            }
            self.xb[i] -= a * t;
            if self.xb[i] < 0.0 && self.xb[i] > -self.opts.feasibility_tol {
                self.xb[i] = 0.0;
            }
        }
        self.binv[r * m..(r + 1) * m].copy_from_slice(&row_r);
        self.xb[r] = t;
        let old = self.basis[r];
        if self.kinds[old] == ColKind::Artificial {
            self.art_banned[old] = true;
        }
        self.in_basis[old] = None;
        self.basis[r] = q;
        self.in_basis[q] = Some(r);
        self.iterations += 1;
    }

    /// Runs simplex iterations on the current cost vector.
    fn optimize(&mut self, max_iter: usize) -> Result<(), LpStatus> {
        self.recompute_duals();
        let mut degenerate_run = 0usize;
        let mut since_check = 0usize;
        let mut final_checks = 0;
        loop {
            if self.iterations >= max_iter {
                return Err(LpStatus::IterationLimit);
            }
            let bland = degenerate_run >= self.opts.bland_after;
            let (step, degenerate) = self.step(bland);
            match step {
                Step::Pivoted => {
                    degenerate_run = if degenerate { degenerate_run + 1 } else { 0 };
                    since_check += 1;
                    if since_check >= 64 {
                        since_check = 0;
                        if !self.residual_ok() && !self.refactor() {
                            return Err(LpStatus::Singular);
                        }
                    }
                }
                Step::Unbounded => return Err(LpStatus::Unbounded),
                Step::Optimal => {
                    if !self.refactor() {
                        return Err(LpStatus::Singular);
                    }
                    final_checks += 1;
                    let still_optimal = (0..self.cols.len())
                        .filter(|&j| self.eligible(j))
                        .all(|j| self.reduced_cost(j) <= self.opts.optimality_tol);
                    let feasible = self.xb.iter().all(|&v| v >= -self.opts.feasibility_tol);
                    if (still_optimal && feasible) || final_checks > 5 {
                        return Ok(());
                    }
                    if !feasible {
                        return Err(LpStatus::Singular);
                    }
                }
            }
        }
    }

    fn run(mut self) -> LpSolution {
        let max_iter = self.opts.max_iterations.unwrap_or(20 * (self.m + self.cols.len()) + 10_000);
        let needs_phase1 = self
            .basis
            .iter()
            .zip(&self.xb)
            .any(|(&c, &v)| self.kinds[c] == ColKind::Artificial && v > self.opts.feasibility_tol);
        let objective_cost = std::mem::take(&mut self.cost);
        if needs_phase1 {
            self.cost = self.kinds.iter().map(|k| if *k == ColKind::Artificial { -1.0 } else { 0.0 }).collect();
            if let Err(status) = self.optimize(max_iter) {
                return self.finish(status, &objective_cost);
            }
            let infeas: f64 = self
                .basis
                .iter()
                .zip(&self.xb)
                .filter(|(&c, _)| self.kinds[c] == ColKind::Artificial)
                .map(|(_, &v)| v)
                .sum();
            let scale = 1.0 + self.b.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            if infeas > 1e-8 * scale {
                return self.finish(LpStatus::Infeasible, &objective_cost);
            }
        }
        self.phase2 = true;
        self.cost = objective_cost.clone();
        let status = match self.optimize(max_iter) {
            Ok(()) => LpStatus::Optimal,
            Err(s) => s,
        };
        self.finish(status, &objective_cost)
    }

    fn finish(&mut self, status: LpStatus, cost: &[f64]) -> LpSolution {
        let mut x = vec![0.0; self.nstruct];
        for (k, &c) in self.basis.iter().enumerate() {
            if c < self.nstruct {
                x[c] = self.xb[k].max(0.0);
            }
        }
        let objective = x.iter().zip(cost).map(|(a, b)| a * b).sum();
        let duals = self.y.iter().zip(&self.flipped).map(|(&v, &f)| if f { -v } else { v }).collect();
        LpSolution { status, objective, x, duals, iterations: self.iterations }
    }
}

/// Gauss-Jordan inverse of a row-major `m x m` matrix with partial pivoting.
fn invert(a: &[f64], m: usize) -> Option<Vec<f64>> {
    let mut a = a.to_vec();
    let mut inv = vec![0.0; m * m];
    for i in 0..m {
        inv[i * m + i] = 1.0;
    }
    let scale = a.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(1.0);
    for col in 0..m {
        let (p, pv) =
            (col..m)
                .map(|r| (r, a[r * m + col].abs()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pv <= 1e-11 * scale {
            return None;
        }
        if p != col {
            for k in 0..m {
                a.swap(p * m + k, col * m + k);
                inv.swap(p * m + k, col * m + k);
            }
        }
        let d = a[col * m + col];
        let (pa, pi): (Vec<f64>, Vec<f64>) = (
            a[col * m..(col + 1) * m].iter().map(|v| v / d).collect(),
            inv[col * m..(col + 1) * m].iter().map(|v| v / d).collect(),
        );
        // Nonzero pattern of the pivot rows keeps sparse bases cheap.
        let nz_a: Vec<usize> = (0..m).filter(|&k| pa[k] != 0.0).collect();
        let nz_i: Vec<usize> = (0..m).filter(|&k| pi[k] != 0.0).collect();
        for r in 0..m {
            if r == col {
                continue;
            }
            let f = a[r * m + col];
            if f == 0.0 {
                continue;
            }
            for &k in &nz_a {
                a[r * m + k] -= f * pa[k];
            }
            for &k in &nz_i {
                inv[r * m + k] -= f * pi[k];
            }
            a[r * m + col] = 0.0;
        }
        a[col * m..(col + 1) * m].copy_from_slice(&pa);
        inv[col * m..(col + 1) * m].copy_from_slice(&pi);
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(lp: &LinearProgram) -> LpSolution {
        lp.solve(&SimplexOptions::default())
    }

    #[test]
    fn textbook_max() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6).
        let mut lp = LinearProgram::new();
        let x = lp.add_var(3.0);
        let y = lp.add_var(5.0);
        lp.add_row(vec![(x, 1.0)], RowKind::Le, 4.0);
        lp.add_row(vec![(y, 2.0)], RowKind::Le, 12.0);
        lp.add_row(vec![(x, 3.0), (y, 2.0)], RowKind::Le, 18.0);
        let s = solve(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective - 36.0).abs() < 1e-9);
        assert!((s.x[0] - 2.0).abs() < 1e-9 && (s.x[1] - 6.0).abs() < 1e-9);
        assert!((s.duals[1] - 1.5).abs() < 1e-9 && (s.duals[2] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn equality_and_ge_rows() {
        // max -x - y, x + y = 2, x >= 0.5 -> -2.
        let mut lp = LinearProgram::new();
        let x = lp.add_var(-1.0);
        let y = lp.add_var(-1.0);
        lp.add_row(vec![(x, 1.0), (y, 1.0)], RowKind::Eq, 2.0);
        lp.add_row(vec![(x, 1.0)], RowKind::Ge, 0.5);
        let s = solve(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective + 2.0).abs() < 1e-9);
        assert!(s.x[0] >= 0.5 - 1e-9);
    }

    #[test]
    fn negative_rhs_rows() {
        // max x, -x >= -3 -> 3.
        let mut lp = LinearProgram::new();
        let x = lp.add_var(1.0);
        lp.add_row(vec![(x, -1.0)], RowKind::Ge, -3.0);
        let s = solve(&lp);
        assert!((s.objective - 3.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var(1.0);
        lp.add_row(vec![(x, 1.0)], RowKind::Le, 1.0);
        lp.add_row(vec![(x, 1.0)], RowKind::Ge, 2.0);
        assert_eq!(solve(&lp).status, LpStatus::Infeasible);

        let mut lp = LinearProgram::new();
        let x = lp.add_var(1.0);
        let y = lp.add_var(0.0);
        lp.add_row(vec![(x, 1.0), (y, -1.0)], RowKind::Le, 1.0);
        assert_eq!(solve(&lp).status, LpStatus::Unbounded);
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example cycles under Dantzig pricing without a safeguard.
        let mut lp = LinearProgram::new();
        let v: Vec<usize> = [0.75, -150.0, 0.02, -6.0].iter().map(|&c| lp.add_var(c)).collect();
        lp.add_row(vec![(v[0], 0.25), (v[1], -60.0), (v[2], -0.04), (v[3], 9.0)], RowKind::Le, 0.0);
        lp.add_row(vec![(v[0], 0.5), (v[1], -90.0), (v[2], -0.02), (v[3], 3.0)], RowKind::Le, 0.0);
        lp.add_row(vec![(v[2], 1.0)], RowKind::Le, 1.0);
        let s = solve(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective - 0.05).abs() < 1e-9, "{}", s.objective);
    }

    #[test]
    fn invert_round_trip() {
        let a = [4.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 2.0];
        let inv = invert(&a, 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let v: f64 = (0..3).map(|k| a[i * 3 + k] * inv[k * 3 + j]).sum();
                assert!((v - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
        assert!(invert(&[1.0, 2.0, 2.0, 4.0], 2).is_none());
    }
}
