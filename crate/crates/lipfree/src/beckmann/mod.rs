//! Minimal-flux (Beckmann) problems on a grid.
//!
//! The free norm of a molecule, read through the field identification, is
//! the least total flux cost over vector fields whose divergence matches
//! the molecule's source: mass `sum_i a_i` leaves the base point's cell and
//! `a_i` arrives at each atom's cell. Fields live on the staggered grid —
//! one value per interior face, interpreted as the flux component of the
//! face's lower cell — and the discrete divergence is the per-cell net
//! outflow divided by `h`. Adding any discretely divergence-free field (a
//! combination of plaquette curls) leaves every divergence unchanged, which
//! is exactly the coset structure of the continuum quotient.
//!
//! Three backends, all certified: the 1-norm cost (and everything in 1D) is
//! an exact min-cost-flow; planar costs built from a dual-ball polygon run
//! through the first-order solver with feasible-primal/dual-bound
//! certificates; small instances in any dimension can go through the dense
//! LP, which also cross-validates the other two.

mod pdhg;
mod polygon;

pub use polygon::{facet_directions, DualBall};

use std::fmt::Write as _;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::freenorm::{kr_norm, Molecule};
use crate::geometry::{build_grid, Alignment, ConvexDomain, Grid, NormSpec};
use crate::lp_core::{
    lp_solve, mcf_solve, FlowArc, FlowNetwork, LpProblem, LpStatus, McfStatus, Rel,
};

/// A discrete vector field on a grid, in one of two layouts: one value per
/// interior face (`PerEdge`, the solver's native layout) or one vector per
/// cell whose component `k` is the value on the cell's `+k` face (`PerCell`;
/// components whose `+k` neighbor is missing must vanish — those faces
/// carry no flux).
#[derive(Debug, Clone, PartialEq)]
pub enum GridField {
    PerEdge(Vec<f64>),
    PerCell(Vec<Vec<f64>>),
}

impl GridField {
    pub fn zero(grid: &Grid) -> Self {
        GridField::PerEdge(vec![0.0; grid.edges.len()])
    }

    /// The per-face values, validated against the grid.
    pub fn as_peredge(&self, grid: &Grid) -> Result<Vec<f64>> {
        match self {
            GridField::PerEdge(v) => {
                if v.len() != grid.edges.len() {
                    return Err(Error::invalid("per-edge field length must match the grid"));
                }
                Ok(v.clone())
            }
            GridField::PerCell(cells) => {
                if cells.len() != grid.num_cells() {
                    return Err(Error::invalid("per-cell field length must match the grid"));
                }
                let mut out = vec![0.0; grid.edges.len()];
                for (c, vc) in cells.iter().enumerate() {
                    if vc.len() != grid.dim {
                        return Err(Error::invalid("per-cell vectors must match the dimension"));
                    }
                    for k in 0..grid.dim {
                        match grid.up_edge[c][k] {
                            Some(e) => out[e] = vc[k],
                            None => {
                                if vc[k] != 0.0 {
                                    return Err(Error::invalid(
                                        "per-cell components on boundary faces must vanish",
                                    ));
                                }
                            }
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    /// One vector per cell (boundary-face components are zeros).
    pub fn as_percell(&self, grid: &Grid) -> Result<Vec<Vec<f64>>> {
        let m = self.as_peredge(grid)?;
        let mut out = vec![vec![0.0; grid.dim]; grid.num_cells()];
        for (c, vc) in out.iter_mut().enumerate() {
            for k in 0..grid.dim {
                if let Some(e) = grid.up_edge[c][k] {
                    vc[k] = m[e];
                }
            }
        }
        Ok(out)
    }
}

/// Staggered divergence: `div(c) = sum_k (m_{+k face} - m_{-k face}) / h`,
/// with missing (boundary) faces contributing nothing. Sums to zero against
/// the cell volume for every field.
pub fn discrete_divergence(field: &GridField, grid: &Grid) -> Result<Vec<f64>> {
    let m = field.as_peredge(grid)?;
    let mut div = vec![0.0; grid.num_cells()];
    for (c, d) in div.iter_mut().enumerate() {
        let mut acc = 0.0;
        for k in 0..grid.dim {
            if let Some(e) = grid.up_edge[c][k] {
                acc += m[e];
            }
            if let Some(nb) = grid.down_nbr[c][k] {
                acc -= m[grid.up_edge[nb][k].expect("edge to the up-neighbor exists")];
            }
        }
        *d = acc / grid.h;
    }
    Ok(div)
}

/// Max cell imbalance `|div(field) - source|`, in mass units (scaled by the
/// cell volume): the feasibility residual of a candidate solution.
pub fn mass_residual(field: &GridField, grid: &Grid, source: &[f64]) -> Result<f64> {
    if source.len() != grid.num_cells() {
        return Err(Error::invalid("source length must match the grid"));
    }
    let div = discrete_divergence(field, grid)?;
    let voln = grid.h.powi(grid.dim as i32);
    Ok(div
        .iter()
        .zip(source)
        .fold(0.0_f64, |a, (d, s)| a.max(((d - s) * voln).abs())))
}

/// True when every cell's divergence vanishes to within `tol` (mass units).
pub fn divergence_free(field: &GridField, grid: &Grid, tol: f64) -> Result<bool> {
    let zero = vec![0.0; grid.num_cells()];
    Ok(mass_residual(field, grid, &zero)? <= tol)
}

/// Per-cell source densities for a molecule: `sum_i a_i / h^n` enters at the
/// base point's cell and `a_i / h^n` leaves at each atom's cell. Cancels to
/// the zero source when everything lands in one cell (the molecule is below
/// the grid's resolution).
pub fn assemble_source(mol: &Molecule, grid: &Grid) -> Result<Vec<f64>> {
    if mol.dim() != grid.dim {
        return Err(Error::invalid("molecule and grid dimensions differ"));
    }
    let voln = grid.h.powi(grid.dim as i32);
    let origin = vec![0.0; grid.dim];
    let c0 = grid
        .cell_of(&origin)
        .ok_or(Error::AtomUnresolved { point: origin })?;
    let mut b = vec![0.0; grid.num_cells()];
    b[c0] += mol.total_weight() / voln;
    for (a, &w) in mol.atoms.iter().zip(&mol.weights) {
        let c = grid
            .cell_of(a)
            .ok_or_else(|| Error::AtomUnresolved { point: a.clone() })?;
        b[c] -= w / voln;
    }
    Ok(b)
}

/// Tuning for the flux solvers. `facets` is the direction count of the
/// Euclidean cost's facet family (planar; even, >= 4). The first-order
/// solver stops at `rel_gap` relative (certified) optimality; `check_every`
/// is the base cadence of its certification passes (the cadence then grows
/// geometrically).
#[derive(Debug, Clone)]
pub struct BeckmannOptions {
    pub facets: usize,
    pub rel_gap: f64,
    pub max_iter: usize,
    pub check_every: usize,
}

impl Default for BeckmannOptions {
    fn default() -> Self {
        BeckmannOptions {
            facets: 32,
            rel_gap: 2e-4,
            max_iter: 300_000,
            check_every: 500,
        }
    }
}

/// A solved flux problem. `value` is always the objective of the returned
/// (feasible) field — a true upper bound — and `dual_bound` a true lower
/// bound, so `gap` brackets the distance to the discrete optimum. The exact
/// backends report a zero gap.
#[derive(Debug, Clone)]
pub struct BeckmannSolution {
    pub value: f64,
    pub dual_bound: f64,
    pub gap: f64,
    pub field: GridField,
    pub iterations: usize,
    pub backend: &'static str,
    /// Set when the source cancelled below resolution: the zero field is
    /// optimal and the molecule was invisible to this grid.
    pub degenerate: bool,
}

fn dual_ball_for(norm: &NormSpec, dim: usize, facets: usize) -> Result<DualBall> {
    match norm {
        NormSpec::L1 => DualBall::l1(dim),
        NormSpec::L2 => DualBall::l2_facets(dim, facets),
        NormSpec::Linf => DualBall::linf(dim),
        NormSpec::Polyhedral { directions } => DualBall::polyhedral(directions),
    }
}

/// Minimal-flux solve for a per-cell source density vector.
///
/// Backend dispatch: 1D problems and the 1-norm cost go through the exact
/// min-cost flow; other planar costs through the first-order solver; higher
/// dimensions through the dense LP (size permitting).
pub fn solve(
    grid: &Grid,
    source: &[f64],
    norm: &NormSpec,
    opts: &BeckmannOptions,
) -> Result<BeckmannSolution> {
    if source.len() != grid.num_cells() {
        return Err(Error::invalid("source length must match the grid"));
    }
    let voln = grid.h.powi(grid.dim as i32);
    let masses: Vec<f64> = source.iter().map(|b| b * voln).collect();
    let scale: f64 = masses.iter().map(|m| m.abs()).sum();
    if scale <= 1e-15 {
        return Ok(BeckmannSolution {
            value: 0.0,
            dual_bound: 0.0,
            gap: 0.0,
            field: GridField::zero(grid),
            iterations: 0,
            backend: "degenerate",
            degenerate: true,
        });
    }
    let total: f64 = masses.iter().sum();
    if total.abs() > 1e-9 * scale {
        return Err(Error::UnbalancedSource { total });
    }
    let labels = grid.component_labels();
    let ncomp = labels.iter().copied().max().unwrap_or(0) + 1;
    if ncomp > 1 {
        let mut comp_sum = vec![0.0; ncomp];
        for (m, &l) in masses.iter().zip(&labels) {
            comp_sum[l] += m;
        }
        if comp_sum.iter().any(|s| s.abs() > 1e-9 * scale) {
            return Err(Error::DisconnectedGrid);
        }
    }

    if grid.dim == 1 || matches!(norm, NormSpec::L1) {
        return solve_mcf(grid, &masses);
    }
    if grid.dim == 2 {
        let ball = dual_ball_for(norm, 2, opts.facets)?;
        let face_masses: Vec<f64> = source.iter().map(|b| b * grid.h).collect();
        let out = pdhg::solve_pdhg(
            grid,
            &ball,
            &face_masses,
            &labels,
            ncomp,
            opts.rel_gap,
            opts.max_iter,
            opts.check_every,
        )?;
        return Ok(BeckmannSolution {
            value: out.value,
            dual_bound: out.dual_bound,
            gap: out.gap,
            field: GridField::PerEdge(out.flux),
            iterations: out.iterations,
            backend: "pdhg",
            degenerate: false,
        });
    }
    solve_lp_reference(grid, source, norm, opts)
}

/// Assemble the molecule's source and solve.
pub fn solve_molecule(
    grid: &Grid,
    mol: &Molecule,
    norm: &NormSpec,
    opts: &BeckmannOptions,
) -> Result<BeckmannSolution> {
    let b = assemble_source(mol, grid)?;
    solve(grid, &b, norm, opts)
}

/// Exact min-cost-flow backend: two opposite arcs per face, cost `h`, true
/// masses as supplies. The network-simplex potentials certify optimality,
/// so the reported gap is zero.
fn solve_mcf(grid: &Grid, masses: &[f64]) -> Result<BeckmannSolution> {
    let mut arcs = Vec::with_capacity(2 * grid.edges.len());
    for e in &grid.edges {
        arcs.push(FlowArc { tail: e.a, head: e.b, cost: grid.h });
        arcs.push(FlowArc { tail: e.b, head: e.a, cost: grid.h });
    }
    let net = FlowNetwork {
        num_nodes: grid.num_cells(),
        arcs,
        supplies: masses.to_vec(),
    };
    let sol = mcf_solve(&net)?;
    if sol.status != McfStatus::Optimal {
        return Err(Error::DisconnectedGrid);
    }
    let face_area = grid.h.powi(grid.dim as i32 - 1);
    let mut flux = vec![0.0; grid.edges.len()];
    for (i, f) in flux.iter_mut().enumerate() {
        *f = (sol.flows[2 * i] - sol.flows[2 * i + 1]) / face_area;
    }
    Ok(BeckmannSolution {
        value: sol.value,
        dual_bound: sol.value,
        gap: 0.0,
        field: GridField::PerEdge(flux),
        iterations: 0,
        backend: "network-simplex",
        degenerate: false,
    })
}

/// Dense-LP backend (any dimension up to the size guard): edge variables,
/// one epigraph variable per cell bounding the support function through
/// `Q`'s vertices. Exact up to simplex tolerances; used as the reference
/// for cross-validating the other backends and for 3D instances.
pub fn solve_lp_reference(
    grid: &Grid,
    source: &[f64],
    norm: &NormSpec,
    opts: &BeckmannOptions,
) -> Result<BeckmannSolution> {
    if source.len() != grid.num_cells() {
        return Err(Error::invalid("source length must match the grid"));
    }
    let ball = dual_ball_for(norm, grid.dim, opts.facets)?;
    let nc = grid.num_cells();
    let ne = grid.edges.len();
    let nv = ball.vertices.len();
    let rows = nc + nc * nv;
    let cols = ne + nc;
    if rows.saturating_mul(cols) > 25_000_000 {
        return Err(Error::TooLarge {
            backend: "dense-lp",
            detail: format!("{rows} rows x {cols} columns"),
        });
    }
    let voln = grid.h.powi(grid.dim as i32);
    // maximize -(sum of epigraph variables)
    let mut obj = vec![0.0; cols];
    for t in obj.iter_mut().skip(ne) {
        *t = -1.0;
    }
    let mut p = LpProblem::new(obj);
    for e in 0..ne {
        p.free_var(e);
    }
    for c in 0..nc {
        let mut row = vec![0.0; cols];
        for k in 0..grid.dim {
            if let Some(e) = grid.up_edge[c][k] {
                row[e] += 1.0;
            }
            if let Some(nb) = grid.down_nbr[c][k] {
                row[grid.up_edge[nb][k].expect("edge to the up-neighbor exists")] -= 1.0;
            }
        }
        p.add_row(row, Rel::Eq, source[c] * grid.h);
    }
    for c in 0..nc {
        for q in &ball.vertices {
            let mut row = vec![0.0; cols];
            for k in 0..grid.dim {
                if let Some(e) = grid.up_edge[c][k] {
                    row[e] = q[k];
                }
            }
            row[ne + c] = -1.0;
            p.add_row(row, Rel::Le, 0.0);
        }
    }
    let sol = lp_solve(&p);
    if sol.status != LpStatus::Optimal {
        return Err(Error::Infeasible(
            "flux LP did not reach an optimum on a balanced source".into(),
        ));
    }
    let value = -sol.value * voln;
    Ok(BeckmannSolution {
        value,
        dual_bound: value,
        gap: 0.0,
        field: GridField::PerEdge(sol.x[..ne].to_vec()),
        iterations: 0,
        backend: "dense-lp",
        degenerate: false,
    })
}

/// Distance between the cosets of two fields in the discrete quotient:
/// the least flux cost of a field with divergence `div(a) - div(b)`. Zero
/// exactly when the fields differ by a divergence-free field.
pub fn coset_distance(
    a: &GridField,
    b: &GridField,
    grid: &Grid,
    norm: &NormSpec,
    opts: &BeckmannOptions,
) -> Result<f64> {
    let da = discrete_divergence(a, grid)?;
    let db = discrete_divergence(b, grid)?;
    let source: Vec<f64> = da.iter().zip(&db).map(|(x, y)| x - y).collect();
    Ok(solve(grid, &source, norm, opts)?.value)
}

/// One row of a refinement study. `dual` is the molecule's free norm from
/// the point-mass dual program — the grid-independent reference — and
/// `gap = primal - dual` is the signed distance of the grid value to it
/// (negative only within the facet family's deficit for the Euclidean
/// cost).
#[derive(Debug, Clone)]
pub struct StudyRow {
    pub h: f64,
    pub k: usize,
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
    pub seconds: f64,
}

/// Solves the molecule across a grid-spacing x facet-count grid of settings
/// (facet counts apply to the planar Euclidean cost only; other costs emit
/// one row per spacing with `k = 0`). The reference `dual` is computed once
/// up front; rows are sorted by `h` descending with `k` ascending inside,
/// so refinement reads top to bottom. An empty spacing list yields an empty
/// table.
pub fn refine_study(
    domain: &ConvexDomain,
    mol: &Molecule,
    norm: &NormSpec,
    h_list: &[f64],
    k_list: &[usize],
    alignment: Alignment,
    opts: &BeckmannOptions,
) -> Result<Vec<StudyRow>> {
    if h_list.iter().any(|h| !h.is_finite() || *h <= 0.0) {
        return Err(Error::invalid("grid spacings must be positive"));
    }
    let mut hs = h_list.to_vec();
    hs.sort_by(|a, b| b.partial_cmp(a).expect("finite spacings"));
    hs.dedup();
    if hs.is_empty() {
        return Ok(Vec::new());
    }
    let ks: Vec<usize> = match norm {
        NormSpec::L2 if domain.dim() >= 2 => {
            if k_list.is_empty() {
                return Err(Error::invalid("Euclidean study needs facet counts"));
            }
            let mut ks = k_list.to_vec();
            ks.sort_unstable();
            ks.dedup();
            ks
        }
        _ => vec![0],
    };
    let (reference, _) = kr_norm(mol, norm)?;
    let mut rows = Vec::with_capacity(hs.len() * ks.len());
    for &h in &hs {
        let grid = build_grid(domain, h, alignment)?;
        let b = assemble_source(mol, &grid)?;
        for &k in &ks {
            let mut o = opts.clone();
            if k > 0 {
                o.facets = k;
            }
            let start = Instant::now();
            let sol = solve(&grid, &b, norm, &o)?;
            let seconds = start.elapsed().as_secs_f64();
            rows.push(StudyRow {
                h,
                k,
                primal: sol.value,
                dual: reference,
                gap: sol.value - reference,
                seconds,
            });
        }
    }
    Ok(rows)
}

/// Study rows as CSV: `h,k,primal,dual,gap,seconds`, nine decimals.
pub fn study_csv_string(rows: &[StudyRow]) -> String {
    let mut s = String::from("h,k,primal,dual,gap,seconds\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{:.9},{},{:.9},{:.9},{:.9},{:.9}",
            r.h, r.k, r.primal, r.dual, r.gap, r.seconds
        );
    }
    s
}

/// Field as CSV: cell-center coordinates then per-cell components, nine
/// decimals. Headers name axes `x, y, z` (dimension at most 3 on grids we
/// build in practice; higher dimensions use indexed names).
pub fn field_csv_string(field: &GridField, grid: &Grid) -> Result<String> {
    let cells = field.as_percell(grid)?;
    let names = ["x", "y", "z"];
    let mut s = String::new();
    for k in 0..grid.dim {
        if k > 0 {
            s.push(',');
        }
        if grid.dim <= 3 {
            s.push_str(names[k]);
        } else {
            let _ = write!(s, "x{k}");
        }
    }
    for k in 0..grid.dim {
        if grid.dim == 1 {
            s.push_str(",f");
        } else if grid.dim <= 3 {
            let _ = write!(s, ",f{}", names[k]);
        } else {
            let _ = write!(s, ",f{k}");
        }
    }
    s.push('\n');
    for (center, vc) in grid.centers.iter().zip(&cells) {
        for (k, x) in center.iter().enumerate() {
            if k > 0 {
                s.push(',');
            }
            let _ = write!(s, "{x:.9}");
        }
        for v in vc {
            let _ = write!(s, ",{v:.9}");
        }
        s.push('\n');
    }
    Ok(s)
}

pub fn write_study_csv(rows: &[StudyRow], path: &std::path::Path) -> Result<()> {
    std::fs::write(path, study_csv_string(rows)).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_field_csv(field: &GridField, grid: &Grid, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, field_csv_string(field, grid)?).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}
