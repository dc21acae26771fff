//! Dense two-phase simplex.
//!
//! Pivoting uses Dantzig's rule and falls back to Bland's rule after a run of
//! degenerate pivots, which rules out cycling.

/// Termination status of a linear program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

/// Domain of a structural variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VarDomain {
    Free,
    AtLeast(f64),
    AtMost(f64),
}

/// One sparse constraint row: `Σ coeffs ≤ rhs` or `Σ coeffs = rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpRow {
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
    pub is_eq: bool,
}

/// Minimize `objective·x` subject to `rows`, with `x_j` in `domains[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub rows: Vec<LpRow>,
    pub domains: Vec<VarDomain>,
    /// Tolerance on the phase-one residual, relative to the largest right-hand side.
    pub feasibility_tol: f64,
}

/// Result of [`LpSolver::solve`]. `x` and `value` are present iff optimal.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub value: Option<f64>,
    pub x: Option<Vec<f64>>,
}

impl LpSolution {
    fn status_only(status: LpStatus) -> Self {
        Self {
            status,
            value: None,
            x: None,
        }
    }
}

/// A linear programming backend.
pub trait LpSolver: Send + Sync {
    fn solve(&self, problem: &LpProblem) -> LpSolution;
}

/// The built-in dense tableau solver.
#[derive(Debug, Clone, Copy)]
pub struct DenseSimplex {
    /// Consecutive degenerate pivots tolerated before switching to Bland's rule.
    pub degenerate_limit: usize,
}

impl Default for DenseSimplex {
    fn default() -> Self {
        Self {
            degenerate_limit: 20,
        }
    }
}

const PIVOT_EPS: f64 = 1e-9;
const COST_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy)]
enum ColumnMap {
    Shift { col: usize, lo: f64 },
    Flip { col: usize, hi: f64 },
    Split { pos: usize, neg: usize },
}

struct Tableau {
    rows: usize,
    width: usize,
    data: Vec<f64>,
    cost: Vec<f64>,
    basis: Vec<usize>,
    first_artificial: usize,
    bland: bool,
    degenerate_run: usize,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.data[r * self.width + self.width - 1]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let p = self.data[r * w + c];
        for k in 0..w {
            self.data[r * w + k] /= p;
        }
        self.data[r * w + c] = 1.0;
        let (before, rest) = self.data.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        for row in before.chunks_exact_mut(w).chain(after.chunks_exact_mut(w)) {
            let f = row[c];
            if f != 0.0 {
                for (x, y) in row.iter_mut().zip(prow.iter()) {
                    *x -= f * y;
                }
                row[c] = 0.0;
            }
        }
        let f = self.cost[c];
        if f != 0.0 {
            for (x, y) in self.cost.iter_mut().zip(prow.iter()) {
                *x -= f * y;
            }
            self.cost[c] = 0.0;
        }
        self.basis[r] = c;
    }

    fn entering(&self, allow_artificial: bool) -> Option<usize> {
        let limit = if allow_artificial {
            self.width - 1
        } else {
            self.first_artificial
        };
        if self.bland {
            (0..limit).find(|&j| self.cost[j] < -COST_EPS)
        } else {
            let mut best = None;
            let mut best_val = -COST_EPS;
            for j in 0..limit {
                if self.cost[j] < best_val {
                    best_val = self.cost[j];
                    best = Some(j);
                }
            }
            best
        }
    }

    fn leaving(&self, c: usize) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for r in 0..self.rows {
            let a = self.at(r, c);
            if a <= PIVOT_EPS {
                continue;
            }
            let ratio = self.rhs(r).max(0.0) / a;
            best = match best {
                None => Some((r, ratio)),
                Some((br, bratio)) => {
                    let tie = (ratio - bratio).abs() <= 1e-12 * (1.0 + bratio.abs());
                    if ratio < bratio && !tie {
                        Some((r, ratio))
                    } else if tie {
                        let better = if self.bland {
                            self.basis[r] < self.basis[br]
                        } else {
                            a > self.at(br, c)
                        };
                        if better {
                            Some((r, ratio))
                        } else {
                            Some((br, bratio))
                        }
                    } else {
                        Some((br, bratio))
                    }
                }
            };
        }
        best.map(|(r, _)| r)
    }

    /// Runs simplex iterations on the current cost row. Returns false on unboundedness.
    fn optimize(&mut self, allow_artificial: bool, degenerate_limit: usize) -> bool {
        let cap = 50 * (self.rows + self.width) + 10_000;
        for _ in 0..cap {
            let Some(c) = self.entering(allow_artificial) else {
                return true;
            };
            let Some(r) = self.leaving(c) else {
                return false;
            };
            let step = self.rhs(r).max(0.0) / self.at(r, c);
            if step <= 1e-12 {
                self.degenerate_run += 1;
                if self.degenerate_run > degenerate_limit {
                    self.bland = true;
                }
            } else {
                self.degenerate_run = 0;
            }
            self.pivot(r, c);
        }
        // Bland's rule terminates; reaching the cap means numerical trouble.
        if !self.bland {
            self.bland = true;
            return self.optimize(allow_artificial, degenerate_limit);
        }
        panic!("simplex iteration limit reached under Bland's rule");
    }
}

impl LpSolver for DenseSimplex {
    fn solve(&self, problem: &LpProblem) -> LpSolution {
        let n = problem.domains.len();
        let mut maps = Vec::with_capacity(n);
        let mut structural = 0;
        for d in &problem.domains {
            maps.push(match *d {
                VarDomain::AtLeast(lo) => {
                    structural += 1;
                    ColumnMap::Shift {
                        col: structural - 1,
                        lo,
                    }
                }
                VarDomain::AtMost(hi) => {
                    structural += 1;
                    ColumnMap::Flip {
                        col: structural - 1,
                        hi,
                    }
                }
                VarDomain::Free => {
                    structural += 2;
                    ColumnMap::Split {
                        pos: structural - 2,
                        neg: structural - 1,
                    }
                }
            });
        }

        // Rows in the transformed columns, scaled so the largest coefficient is 1.
        let mut dense_rows: Vec<(Vec<f64>, f64, bool)> = Vec::with_capacity(problem.rows.len());
        for row in &problem.rows {
            let mut a = vec![0.0; structural];
            let mut rhs = row.rhs;
            for &(j, c) in &row.coeffs {
                match maps[j] {
                    ColumnMap::Shift { col, lo } => {
                        a[col] += c;
                        rhs -= c * lo;
                    }
                    ColumnMap::Flip { col, hi } => {
                        a[col] -= c;
                        rhs -= c * hi;
                    }
                    ColumnMap::Split { pos, neg } => {
                        a[pos] += c;
                        a[neg] -= c;
                    }
                }
            }
            let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            if scale == 0.0 {
                let violated = if row.is_eq {
                    rhs.abs() > problem.feasibility_tol * rhs.abs().max(1.0)
                } else {
                    rhs < -problem.feasibility_tol * rhs.abs().max(1.0)
                };
                if violated {
                    return LpSolution::status_only(LpStatus::Infeasible);
                }
                continue;
            }
            for x in &mut a {
                *x /= scale;
            }
            dense_rows.push((a, rhs / scale, row.is_eq));
        }

        let mut cost = vec![0.0; structural];
        for (j, &c) in problem.objective.iter().enumerate() {
            match maps[j] {
                ColumnMap::Shift { col, .. } => cost[col] += c,
                ColumnMap::Flip { col, .. } => cost[col] -= c,
                ColumnMap::Split { pos, neg } => {
                    cost[pos] += c;
                    cost[neg] -= c;
                }
            }
        }

        let m = dense_rows.len();
        let slacks = dense_rows.iter().filter(|r| !r.2).count();
        let needs_artificial: Vec<bool> = dense_rows
            .iter()
            .map(|(_, rhs, eq)| *eq || *rhs < 0.0)
            .collect();
        let artificials = needs_artificial.iter().filter(|&&x| x).count();
        let first_artificial = structural + slacks;
        let width = structural + slacks + artificials + 1;

        let mut t = Tableau {
            rows: m,
            width,
            data: vec![0.0; m * width],
            cost: vec![0.0; width],
            basis: vec![0; m],
            first_artificial,
            bland: false,
            degenerate_run: 0,
        };
        let mut slack_col = structural;
        let mut art_col = first_artificial;
        let mut max_rhs = 1.0f64;
        for (r, (a, rhs, eq)) in dense_rows.iter().enumerate() {
            let sign = if *rhs < 0.0 { -1.0 } else { 1.0 };
            let base = r * width;
            for (j, x) in a.iter().enumerate() {
                t.data[base + j] = sign * x;
            }
            if !eq {
                t.data[base + slack_col] = sign;
                if !needs_artificial[r] {
                    t.basis[r] = slack_col;
                }
                slack_col += 1;
            }
            if needs_artificial[r] {
                t.data[base + art_col] = 1.0;
                t.basis[r] = art_col;
                art_col += 1;
            }
            t.data[base + width - 1] = sign * rhs;
            max_rhs = max_rhs.max(rhs.abs());
        }

        // Phase one: minimize the sum of artificials.
        if artificials > 0 {
            for r in 0..m {
                if t.basis[r] >= first_artificial {
                    for j in 0..width {
                        if j < first_artificial || j == width - 1 {
                            t.cost[j] -= t.at(r, j);
                        }
                    }
                }
            }
            t.optimize(true, self.degenerate_limit);
            let residual: f64 = (0..m)
                .filter(|&r| t.basis[r] >= first_artificial)
                .map(|r| t.rhs(r).max(0.0))
                .sum();
            if residual > problem.feasibility_tol * max_rhs {
                return LpSolution::status_only(LpStatus::Infeasible);
            }
            for r in 0..m {
                if t.basis[r] >= first_artificial {
                    if let Some(j) = (0..first_artificial).find(|&j| t.at(r, j).abs() > PIVOT_EPS) {
                        t.pivot(r, j);
                    }
                }
            }
        }

        // Phase two.
        t.cost.iter_mut().for_each(|x| *x = 0.0);
        t.cost[..structural].copy_from_slice(&cost);
        for r in 0..m {
            let cb = if t.basis[r] < structural {
                cost[t.basis[r]]
            } else {
                0.0
            };
            if cb != 0.0 {
                for j in 0..width {
                    t.cost[j] -= cb * t.at(r, j);
                }
            }
        }
        t.degenerate_run = 0;
        if !t.optimize(false, self.degenerate_limit) {
            return LpSolution::status_only(LpStatus::Unbounded);
        }

        let mut y = vec![0.0; structural];
        for r in 0..m {
            if t.basis[r] < structural {
                y[t.basis[r]] = t.rhs(r).max(0.0);
            }
        }
        let x: Vec<f64> = maps
            .iter()
            .map(|map| match *map {
                ColumnMap::Shift { col, lo } => lo + y[col],
                ColumnMap::Flip { col, hi } => hi - y[col],
                ColumnMap::Split { pos, neg } => y[pos] - y[neg],
            })
            .collect();
        let value = problem
            .objective
            .iter()
            .zip(&x)
            .map(|(c, v)| c * v)
            .sum::<f64>();
        LpSolution {
            status: LpStatus::Optimal,
            value: Some(value),
            x: Some(x),
        }
    }
}
