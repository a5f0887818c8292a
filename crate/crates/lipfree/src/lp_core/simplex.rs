//! Dense two-phase primal simplex.
//!
//! Bland's rule on both phases (anti-cycling), artificial variables kept in
//! the tableau so row duals can be read off the final reduced costs.
//! Statuses are data, never panics. Deterministic: ties break by lowest
//! index, no randomization, no parallelism.

/// Pivot-eligibility threshold: entries and reduced costs below this are
/// treated as zero.
pub const PIVOT_TOL: f64 = 1e-10;
/// Feasibility threshold: phase-1 residuals below this count as feasible.
pub const FEAS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct LpRow {
    pub coeffs: Vec<f64>,
    pub rel: Rel,
    pub rhs: f64,
}

/// `maximize c.x  s.t.  rows, bounds[j].0 <= x_j <= bounds[j].1`.
///
/// Bounds default to `[0, +inf)`; any combination of finite/infinite ends is
/// accepted (infinite = `f64::INFINITY` / `NEG_INFINITY`).
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub maximize: Vec<f64>,
    pub rows: Vec<LpRow>,
    pub bounds: Vec<(f64, f64)>,
}

impl LpProblem {
    pub fn new(maximize: Vec<f64>) -> Self {
        let n = maximize.len();
        LpProblem {
            maximize,
            rows: Vec::new(),
            bounds: vec![(0.0, f64::INFINITY); n],
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<f64>, rel: Rel, rhs: f64) {
        assert_eq!(coeffs.len(), self.maximize.len(), "row length mismatch");
        self.rows.push(LpRow { coeffs, rel, rhs });
    }

    pub fn set_bounds(&mut self, var: usize, lo: f64, hi: f64) {
        self.bounds[var] = (lo, hi);
    }

    pub fn free_var(&mut self, var: usize) {
        self.bounds[var] = (f64::NEG_INFINITY, f64::INFINITY);
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
    /// Objective value (meaningful only when `status == Optimal`).
    pub value: f64,
    /// Primal point in the original variables.
    pub x: Vec<f64>,
    /// Dual value per original row. Sign convention: for a maximization,
    /// binding `<=` rows carry `y >= 0`, binding `>=` rows `y <= 0`.
    /// For problems whose variables all have bounds `[0, inf)`,
    /// `value == y.b` at optimum.
    pub y: Vec<f64>,
}

impl LpSolution {
    fn non_optimal(status: LpStatus, nvars: usize, nrows: usize) -> Self {
        LpSolution {
            status,
            value: f64::NAN,
            x: vec![f64::NAN; nvars],
            y: vec![f64::NAN; nrows],
        }
    }
}

/// How an original variable maps onto the nonnegative internal variables.
#[derive(Clone, Copy)]
enum VarMap {
    /// `x = sign * xhat[col] + offset`.
    Shifted { col: usize, sign: f64, offset: f64 },
    /// `x = xhat[pos] - xhat[neg]` (free variable).
    Split { pos: usize, neg: usize },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ColKind {
    Structural,
    Slack,
    Surplus,
    Artificial,
}

pub fn lp_solve(p: &LpProblem) -> LpSolution {
    let nvars = p.maximize.len();
    let n_orig_rows = p.rows.len();
    assert_eq!(p.bounds.len(), nvars, "bounds length mismatch");

    // --- map original variables to nonnegative internal columns ---
    let mut var_map = Vec::with_capacity(nvars);
    let mut ncols = 0usize;
    // extra `xhat <= hi - lo` rows for doubly bounded variables
    let mut bound_rows: Vec<(usize, f64)> = Vec::new();
    for (j, &(lo, hi)) in p.bounds.iter().enumerate() {
        if lo.is_finite() {
            if hi.is_finite() && hi < lo {
                return LpSolution::non_optimal(LpStatus::Infeasible, nvars, n_orig_rows);
            }
            var_map.push(VarMap::Shifted { col: ncols, sign: 1.0, offset: lo });
            if hi.is_finite() {
                bound_rows.push((ncols, hi - lo));
            }
            ncols += 1;
        } else if hi.is_finite() {
            var_map.push(VarMap::Shifted { col: ncols, sign: -1.0, offset: hi });
            ncols += 1;
        } else {
            var_map.push(VarMap::Split { pos: ncols, neg: ncols + 1 });
            ncols += 2;
        }
        let _ = j;
    }

    // --- internal rows: originals (transformed), then bound rows ---
    struct IntRow {
        coeffs: Vec<f64>,
        rel: Rel,
        rhs: f64,
        sign: f64, // +1 kept, -1 negated to make rhs >= 0
    }
    let mut int_rows: Vec<IntRow> = Vec::with_capacity(n_orig_rows + bound_rows.len());
    for row in &p.rows {
        let mut coeffs = vec![0.0; ncols];
        let mut rhs = row.rhs;
        for (j, &a) in row.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            match var_map[j] {
                VarMap::Shifted { col, sign, offset } => {
                    coeffs[col] += a * sign;
                    rhs -= a * offset;
                }
                VarMap::Split { pos, neg } => {
                    coeffs[pos] += a;
                    coeffs[neg] -= a;
                }
            }
        }
        let (rel, sign) = if rhs < 0.0 {
            for c in coeffs.iter_mut() {
                *c = -*c;
            }
            rhs = -rhs;
            let flipped = match row.rel {
                Rel::Le => Rel::Ge,
                Rel::Ge => Rel::Le,
                Rel::Eq => Rel::Eq,
            };
            (flipped, -1.0)
        } else {
            (row.rel, 1.0)
        };
        int_rows.push(IntRow { coeffs, rel, rhs, sign });
    }
    for &(col, ub) in &bound_rows {
        let mut coeffs = vec![0.0; ncols];
        coeffs[col] = 1.0;
        // hi - lo >= 0 was checked above
        int_rows.push(IntRow { coeffs, rel: Rel::Le, rhs: ub, sign: 1.0 });
    }

    let m = int_rows.len();

    // --- assemble the tableau ---
    // column layout: structural, then one slack/surplus per inequality row,
    // then one artificial per Ge/Eq row.
    let mut col_kind = vec![ColKind::Structural; ncols];
    let mut slack_col = vec![usize::MAX; m];
    let mut art_col = vec![usize::MAX; m];
    let mut total = ncols;
    for (i, r) in int_rows.iter().enumerate() {
        if r.rel != Rel::Eq {
            slack_col[i] = total;
            col_kind.push(if r.rel == Rel::Le { ColKind::Slack } else { ColKind::Surplus });
            total += 1;
        }
    }
    for (i, r) in int_rows.iter().enumerate() {
        if r.rel != Rel::Le {
            art_col[i] = total;
            col_kind.push(ColKind::Artificial);
            total += 1;
        }
    }

    let mut tab: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut rhs: Vec<f64> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    for (i, r) in int_rows.iter().enumerate() {
        let mut row = vec![0.0; total];
        row[..ncols].copy_from_slice(&r.coeffs);
        match r.rel {
            Rel::Le => {
                row[slack_col[i]] = 1.0;
                basis.push(slack_col[i]);
            }
            Rel::Ge => {
                row[slack_col[i]] = -1.0;
                row[art_col[i]] = 1.0;
                basis.push(art_col[i]);
            }
            Rel::Eq => {
                row[art_col[i]] = 1.0;
                basis.push(art_col[i]);
            }
        }
        tab.push(row);
        rhs.push(r.rhs);
    }

    // phase-1 objective: maximize -(sum of artificials); phase-2: internal c.
    let mut c2 = vec![0.0; total];
    let mut const_shift = 0.0;
    for (j, &c) in p.maximize.iter().enumerate() {
        match var_map[j] {
            VarMap::Shifted { col, sign, offset } => {
                c2[col] += c * sign;
                const_shift += c * offset;
            }
            VarMap::Split { pos, neg } => {
                c2[pos] += c;
                c2[neg] -= c;
            }
        }
    }
    // reduced-cost rows for both phases, kept consistent through all pivots
    let mut obj1 = vec![0.0; total];
    let mut val1 = 0.0;
    for (i, &b) in basis.iter().enumerate() {
        if col_kind[b] == ColKind::Artificial {
            // c1[b] = -1; fold the basic contribution into the reduced costs
            for (j, v) in obj1.iter_mut().enumerate() {
                *v += tab[i][j];
            }
            val1 -= rhs[i];
        }
    }
    for (j, v) in obj1.iter_mut().enumerate() {
        if col_kind[j] == ColKind::Artificial {
            *v -= 1.0;
        }
    }
    let mut obj2 = c2.clone(); // initial basis has zero phase-2 cost

    let pivot = |tab: &mut Vec<Vec<f64>>,
                 rhs: &mut Vec<f64>,
                 basis: &mut Vec<usize>,
                 obj1: &mut Vec<f64>,
                 val1: &mut f64,
                 obj2: &mut Vec<f64>,
                 r: usize,
                 c: usize| {
        let piv = tab[r][c];
        let inv = 1.0 / piv;
        for v in tab[r].iter_mut() {
            *v *= inv;
        }
        rhs[r] *= inv;
        tab[r][c] = 1.0; // kill roundoff on the pivot itself
        let (pr, prhs) = (tab[r].clone(), rhs[r]);
        for i in 0..tab.len() {
            if i == r {
                continue;
            }
            let f = tab[i][c];
            if f != 0.0 {
                for (v, pv) in tab[i].iter_mut().zip(pr.iter()) {
                    *v -= f * pv;
                }
                tab[i][c] = 0.0;
                rhs[i] -= f * prhs;
            }
        }
        let f1 = obj1[c];
        if f1 != 0.0 {
            for (v, pv) in obj1.iter_mut().zip(pr.iter()) {
                *v -= f1 * pv;
            }
            obj1[c] = 0.0;
            *val1 += f1 * prhs;
        }
        let f2 = obj2[c];
        if f2 != 0.0 {
            for (v, pv) in obj2.iter_mut().zip(pr.iter()) {
                *v -= f2 * pv;
            }
            obj2[c] = 0.0;
        }
        basis[r] = c;
    };

    // Bland: entering = lowest-index eligible column; leaving = min ratio,
    // ties by lowest basis-variable index.
    let max_pivots = 200_000 + 200 * (m + total);
    let run_phase = |tab: &mut Vec<Vec<f64>>,
                         rhs: &mut Vec<f64>,
                         basis: &mut Vec<usize>,
                         obj1: &mut Vec<f64>,
                         val1: &mut f64,
                         obj2: &mut Vec<f64>,
                         phase1: bool|
     -> Option<LpStatus> {
        for _ in 0..max_pivots {
            let obj: &Vec<f64> = if phase1 { obj1 } else { obj2 };
            let mut entering = None;
            for (j, &cj) in obj.iter().enumerate() {
                if col_kind[j] == ColKind::Artificial {
                    continue;
                }
                if cj > PIVOT_TOL {
                    entering = Some(j);
                    break;
                }
            }
            let c = match entering {
                Some(c) => c,
                None => return None, // phase optimal
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..tab.len() {
                let a = tab[i][c];
                if a > PIVOT_TOL {
                    let ratio = rhs[i].max(0.0) / a;
                    match leave {
                        None => leave = Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr - 1e-12
                                || (ratio < lr + 1e-12 && basis[i] < basis[li])
                            {
                                leave = Some((i, ratio));
                            }
                        }
                    }
                }
            }
            match leave {
                Some((r, _)) => pivot(tab, rhs, basis, obj1, val1, obj2, r, c),
                None => return Some(LpStatus::Unbounded),
            }
        }
        Some(LpStatus::Infeasible) // pivot-limit safety net; unreachable with Bland
    };

    // --- phase 1 ---
    if let Some(st) = run_phase(&mut tab, &mut rhs, &mut basis, &mut obj1, &mut val1, &mut obj2, true)
    {
        // phase-1 objective is bounded (>= -sum rhs), so Unbounded cannot
        // legitimately occur; treat any early exit as infeasible.
        let _ = st;
        return LpSolution::non_optimal(LpStatus::Infeasible, nvars, n_orig_rows);
    }
    if val1 < -FEAS_TOL {
        return LpSolution::non_optimal(LpStatus::Infeasible, nvars, n_orig_rows);
    }
    // best-effort removal of basic artificials (redundant rows keep theirs,
    // with all non-artificial entries ~0, and never interfere again)
    for r in 0..m {
        if col_kind[basis[r]] != ColKind::Artificial {
            continue;
        }
        let mut best: Option<(usize, f64)> = None;
        for j in 0..total {
            if col_kind[j] == ColKind::Artificial {
                continue;
            }
            let a = tab[r][j].abs();
            if a > PIVOT_TOL && best.map_or(true, |(_, ba)| a > ba) {
                best = Some((j, a));
            }
        }
        if let Some((j, _)) = best {
            pivot(&mut tab, &mut rhs, &mut basis, &mut obj1, &mut val1, &mut obj2, r, j);
        }
    }

    // --- phase 2 ---
    if let Some(st) =
        run_phase(&mut tab, &mut rhs, &mut basis, &mut obj1, &mut val1, &mut obj2, false)
    {
        return LpSolution::non_optimal(st, nvars, n_orig_rows);
    }

    // --- extract primal ---
    let mut xhat = vec![0.0; total];
    for (i, &b) in basis.iter().enumerate() {
        xhat[b] = rhs[i].max(0.0);
    }
    let mut x = vec![0.0; nvars];
    for (j, vm) in var_map.iter().enumerate() {
        x[j] = match *vm {
            VarMap::Shifted { col, sign, offset } => sign * xhat[col] + offset,
            VarMap::Split { pos, neg } => xhat[pos] - xhat[neg],
        };
    }
    let mut value = const_shift;
    for (j, &c) in c2.iter().enumerate() {
        if c != 0.0 {
            value += c * xhat[j];
        }
    }

    // --- extract duals from the final reduced costs ---
    // slack (+e_i): rc = -y_i;  surplus (-e_i): rc = +y_i;  artificial (+e_i,
    // zero phase-2 cost, barred from entering): rc = -y_i.
    let mut y = vec![0.0; n_orig_rows];
    for i in 0..n_orig_rows {
        let yi = match int_rows[i].rel {
            Rel::Le => -obj2[slack_col[i]],
            Rel::Ge => {
                // both surplus and artificial witness the row; the artificial
                // is never touched by entering pivots, prefer it.
                -obj2[art_col[i]]
            }
            Rel::Eq => -obj2[art_col[i]],
        };
        y[i] = int_rows[i].sign * yi;
    }

    LpSolution { status: LpStatus::Optimal, value, x, y }
}
