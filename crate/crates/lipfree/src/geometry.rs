//! Domains, norms, and grids.
//!
//! `ConvexDomain` models the open convex sets the function spaces live on
//! (always containing the base point 0). `NormSpec` carries the norm on the
//! ambient space together with its dual. `Grid` is the uniform Cartesian mesh
//! used by the discrete flow solvers: cells are kept when their centers lie
//! inside the domain.

use std::collections::HashMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::lp_core::{lp_solve, LpProblem, LpStatus, Rel};

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// An open convex domain in R^n with 0 in its interior.
#[derive(Debug, Clone)]
pub enum ConvexDomain {
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    /// Intersection of open halfspaces `{x : normals[j] . x < offsets[j]}`.
    Polytope { normals: Vec<Vec<f64>>, offsets: Vec<f64> },
}

impl ConvexDomain {
    pub fn make_box(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::invalid("box bounds must be nonempty and equal length"));
        }
        for (l, h) in lo.iter().zip(&hi) {
            if !(l < h) {
                return Err(Error::invalid("box needs lo < hi in every coordinate"));
            }
            if !(*l < 0.0 && 0.0 < *h) {
                return Err(Error::invalid("box must contain the base point 0"));
            }
        }
        Ok(ConvexDomain::Box { lo, hi })
    }

    pub fn make_ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.is_empty() || !(radius > 0.0) {
            return Err(Error::invalid("ball needs a nonempty center and radius > 0"));
        }
        let c2 = dot(&center, &center);
        if !(c2 < radius * radius) {
            return Err(Error::invalid("ball must contain the base point 0"));
        }
        Ok(ConvexDomain::Ball { center, radius })
    }

    /// Halfspace intersection; must be bounded, with 0 interior. Boundedness
    /// is decided by maximizing each +-coordinate over the closure.
    pub fn make_polytope(normals: Vec<Vec<f64>>, offsets: Vec<f64>) -> Result<Self> {
        if normals.is_empty() || normals.len() != offsets.len() {
            return Err(Error::invalid("polytope needs matching normals and offsets"));
        }
        let dim = normals[0].len();
        if dim == 0 || normals.iter().any(|n| n.len() != dim) {
            return Err(Error::invalid("polytope normals must share a dimension"));
        }
        if normals.iter().any(|n| dot(n, n) == 0.0) {
            return Err(Error::invalid("polytope normals must be nonzero"));
        }
        if offsets.iter().any(|&c| !(c > 0.0)) {
            return Err(Error::invalid("polytope must contain 0 strictly (offsets > 0)"));
        }
        let dom = ConvexDomain::Polytope { normals, offsets };
        dom.polytope_bbox()?; // errors if unbounded
        Ok(dom)
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexDomain::Box { lo, .. } => lo.len(),
            ConvexDomain::Ball { center, .. } => center.len(),
            ConvexDomain::Polytope { normals, .. } => normals[0].len(),
        }
    }

    /// Strict membership (the domain is open).
    pub fn contains(&self, p: &[f64]) -> bool {
        match self {
            ConvexDomain::Box { lo, hi } => {
                p.iter().zip(lo).zip(hi).all(|((x, l), h)| l < x && x < h)
            }
            ConvexDomain::Ball { center, radius } => {
                let d = sub(p, center);
                dot(&d, &d) < radius * radius
            }
            ConvexDomain::Polytope { normals, offsets } => {
                normals.iter().zip(offsets).all(|(n, c)| dot(n, p) < *c)
            }
        }
    }

    /// Euclidean distance from an interior point to the boundary.
    pub fn distance_to_boundary(&self, p: &[f64]) -> f64 {
        match self {
            ConvexDomain::Box { lo, hi } => p
                .iter()
                .zip(lo)
                .zip(hi)
                .map(|((x, l), h)| (x - l).min(h - x))
                .fold(f64::INFINITY, f64::min),
            ConvexDomain::Ball { center, radius } => {
                let d = sub(p, center);
                radius - dot(&d, &d).sqrt()
            }
            ConvexDomain::Polytope { normals, offsets } => normals
                .iter()
                .zip(offsets)
                .map(|(n, c)| (c - dot(n, p)) / dot(n, n).sqrt())
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Axis-aligned bounding box of the domain.
    pub fn bounding_box(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        match self {
            ConvexDomain::Box { lo, hi } => Ok((lo.clone(), hi.clone())),
            ConvexDomain::Ball { center, radius } => Ok((
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            )),
            ConvexDomain::Polytope { .. } => self.polytope_bbox(),
        }
    }

    fn polytope_bbox(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let (normals, offsets) = match self {
            ConvexDomain::Polytope { normals, offsets } => (normals, offsets),
            _ => unreachable!(),
        };
        let dim = normals[0].len();
        let mut lo = vec![0.0; dim];
        let mut hi = vec![0.0; dim];
        for axis in 0..dim {
            for (dir, out) in [(1.0, &mut hi), (-1.0, &mut lo)] {
                let mut obj = vec![0.0; dim];
                obj[axis] = dir;
                let mut p = LpProblem::new(obj);
                for v in 0..dim {
                    p.free_var(v);
                }
                for (n, c) in normals.iter().zip(offsets) {
                    p.add_row(n.clone(), Rel::Le, *c);
                }
                let s = lp_solve(&p);
                match s.status {
                    LpStatus::Optimal => out[axis] = dir * s.value,
                    LpStatus::Unbounded => {
                        return Err(Error::invalid("polytope domain is unbounded"))
                    }
                    LpStatus::Infeasible => {
                        return Err(Error::invalid("polytope domain is empty"))
                    }
                }
            }
        }
        Ok((lo, hi))
    }

    /// Uniform sample by rejection from the bounding box.
    pub fn sample(&self, rng: &mut impl Rng) -> Vec<f64> {
        let (lo, hi) = self.bounding_box().expect("validated at construction");
        loop {
            let p: Vec<f64> = lo.iter().zip(&hi).map(|(l, h)| rng.gen_range(*l..*h)).collect();
            if self.contains(&p) {
                return p;
            }
        }
    }
}

/// A norm on R^n together with its dual.
#[derive(Debug, Clone, PartialEq)]
pub enum NormSpec {
    L1,
    L2,
    Linf,
    /// Gauge of the convex hull of a symmetric, spanning set of unit
    /// directions. The dual norm is the support function of that hull.
    Polyhedral { directions: Vec<Vec<f64>> },
}

impl NormSpec {
    /// Normalizes the directions, closes the set under negation, and checks
    /// that it spans (otherwise the gauge is infinite off the span).
    pub fn polyhedral(directions: Vec<Vec<f64>>) -> Result<Self> {
        if directions.is_empty() {
            return Err(Error::invalid("polyhedral norm needs at least one direction"));
        }
        let dim = directions[0].len();
        if dim == 0 || directions.iter().any(|d| d.len() != dim) {
            return Err(Error::invalid("polyhedral directions must share a dimension"));
        }
        let mut dirs: Vec<Vec<f64>> = Vec::new();
        let push_unique = |d: Vec<f64>, dirs: &mut Vec<Vec<f64>>| {
            let dup = dirs.iter().any(|e| {
                e.iter().zip(&d).all(|(a, b)| (a - b).abs() <= 1e-12)
            });
            if !dup {
                dirs.push(d);
            }
        };
        for d in &directions {
            let len = dot(d, d).sqrt();
            if len == 0.0 {
                return Err(Error::invalid("polyhedral directions must be nonzero"));
            }
            let unit: Vec<f64> = d.iter().map(|x| x / len).collect();
            let neg: Vec<f64> = unit.iter().map(|x| -x).collect();
            push_unique(unit, &mut dirs);
            push_unique(neg, &mut dirs);
        }
        // rank check by Gaussian elimination
        let mut mat: Vec<Vec<f64>> = dirs.clone();
        let mut rank = 0;
        for col in 0..dim {
            let piv = (rank..mat.len()).max_by(|&a, &b| {
                mat[a][col].abs().partial_cmp(&mat[b][col].abs()).unwrap()
            });
            let piv = match piv {
                Some(p) if mat[p][col].abs() > 1e-12 => p,
                _ => continue,
            };
            mat.swap(rank, piv);
            for r in 0..mat.len() {
                if r != rank && mat[r][col].abs() > 0.0 {
                    let f = mat[r][col] / mat[rank][col];
                    for c in 0..dim {
                        mat[r][c] -= f * mat[rank][c];
                    }
                }
            }
            rank += 1;
        }
        if rank < dim {
            return Err(Error::invalid("polyhedral directions must span the space"));
        }
        Ok(NormSpec::Polyhedral { directions: dirs })
    }

    pub fn norm_eval(&self, v: &[f64]) -> f64 {
        match self {
            NormSpec::L1 => v.iter().map(|x| x.abs()).sum(),
            NormSpec::L2 => dot(v, v).sqrt(),
            NormSpec::Linf => v.iter().fold(0.0, |a: f64, &x| a.max(x.abs())),
            NormSpec::Polyhedral { directions } => {
                // gauge of conv(directions): least total weight writing v as
                // a nonnegative combination of the directions
                if v.iter().all(|&x| x == 0.0) {
                    return 0.0;
                }
                let k = directions.len();
                let dim = v.len();
                let mut p = LpProblem::new(vec![-1.0; k]);
                for i in 0..dim {
                    let row: Vec<f64> = directions.iter().map(|d| d[i]).collect();
                    p.add_row(row, Rel::Eq, v[i]);
                }
                let s = lp_solve(&p);
                debug_assert_eq!(s.status, LpStatus::Optimal, "spanning set absorbs all of R^n");
                -s.value
            }
        }
    }

    pub fn dual_norm_eval(&self, u: &[f64]) -> f64 {
        match self {
            NormSpec::L1 => NormSpec::Linf.norm_eval(u),
            NormSpec::L2 => NormSpec::L2.norm_eval(u),
            NormSpec::Linf => NormSpec::L1.norm_eval(u),
            NormSpec::Polyhedral { directions } => {
                // support function of conv(directions)
                directions.iter().map(|d| dot(d, u)).fold(f64::NEG_INFINITY, f64::max)
            }
        }
    }

    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        self.norm_eval(&sub(a, b))
    }
}

/// Which lattice the cell centers sit on: `Offset` centers at `(k+1/2)h`
/// (cells tile `[kh, (k+1)h)`), `Centered` centers at `kh`. Halving `h`
/// nests the center sets only for `Centered`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Alignment {
    #[default]
    Offset,
    Centered,
}

impl Alignment {
    fn offset(self) -> f64 {
        match self {
            Alignment::Offset => 0.5,
            Alignment::Centered => 0.0,
        }
    }
}

/// An axis edge between two adjacent kept cells, oriented low to high:
/// `b` is `a`'s neighbor in the `+axis` direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridEdge {
    pub a: usize,
    pub b: usize,
    pub axis: usize,
}

/// Uniform Cartesian mesh over a domain: the cells whose centers lie in the
/// domain, in lexicographic multi-index order, with adjacency edges.
#[derive(Debug, Clone)]
pub struct Grid {
    pub dim: usize,
    pub h: f64,
    pub alignment: Alignment,
    /// Integer multi-index per cell (center = (idx + offset) * h).
    pub indices: Vec<Vec<i64>>,
    pub centers: Vec<Vec<f64>>,
    pub edges: Vec<GridEdge>,
    /// `up_edge[cell][axis]`: edge to the `+axis` neighbor, if kept.
    pub up_edge: Vec<Vec<Option<usize>>>,
    /// `down_nbr[cell][axis]`: the `-axis` neighbor cell, if kept.
    pub down_nbr: Vec<Vec<Option<usize>>>,
    lookup: HashMap<Vec<i64>, usize>,
}

pub fn build_grid(domain: &ConvexDomain, h: f64, alignment: Alignment) -> Result<Grid> {
    if !(h > 0.0) {
        return Err(Error::invalid("grid spacing must be positive"));
    }
    let dim = domain.dim();
    let (lo, hi) = domain.bounding_box()?;
    let off = alignment.offset();
    let ranges: Vec<(i64, i64)> = (0..dim)
        .map(|i| {
            let kmin = ((lo[i] / h) - off).floor() as i64 - 1;
            let kmax = ((hi[i] / h) - off).ceil() as i64 + 1;
            (kmin, kmax)
        })
        .collect();
    let count_est: i128 = ranges.iter().map(|(a, b)| (b - a + 1) as i128).product();
    if count_est > 40_000_000 {
        return Err(Error::TooLarge {
            backend: "grid",
            detail: format!("{count_est} candidate cells"),
        });
    }

    let mut indices = Vec::new();
    let mut centers = Vec::new();
    let mut idx = vec![0i64; dim];
    // lexicographic scan of the candidate box
    fn scan(
        axis: usize,
        dim: usize,
        ranges: &[(i64, i64)],
        idx: &mut Vec<i64>,
        f: &mut impl FnMut(&[i64]),
    ) {
        if axis == dim {
            f(idx);
            return;
        }
        for k in ranges[axis].0..=ranges[axis].1 {
            idx[axis] = k;
            scan(axis + 1, dim, ranges, idx, f);
        }
    }
    scan(0, dim, &ranges, &mut idx, &mut |idx: &[i64]| {
        let center: Vec<f64> = idx.iter().map(|&k| (k as f64 + off) * h).collect();
        if domain.contains(&center) {
            indices.push(idx.to_vec());
            centers.push(center);
        }
    });
    if indices.is_empty() {
        return Err(Error::invalid("grid spacing too coarse: no cell center lies in the domain"));
    }

    let lookup: HashMap<Vec<i64>, usize> =
        indices.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let mut edges = Vec::new();
    let mut up_edge = vec![vec![None; dim]; indices.len()];
    let mut down_nbr = vec![vec![None; dim]; indices.len()];
    for (a, ka) in indices.iter().enumerate() {
        for axis in 0..dim {
            let mut kb = ka.clone();
            kb[axis] += 1;
            if let Some(&b) = lookup.get(&kb) {
                up_edge[a][axis] = Some(edges.len());
                edges.push(GridEdge { a, b, axis });
                down_nbr[b][axis] = Some(a);
            }
        }
    }

    Ok(Grid {
        dim,
        h,
        alignment,
        indices,
        centers,
        edges,
        up_edge,
        down_nbr,
        lookup,
    })
}

impl Grid {
    pub fn num_cells(&self) -> usize {
        self.indices.len()
    }

    /// The kept cell containing `p`, if any. Points on a face belong to the
    /// higher cell (`Offset`) / round to the nearest center (`Centered`).
    pub fn cell_of(&self, p: &[f64]) -> Option<usize> {
        assert_eq!(p.len(), self.dim, "point dimension mismatch");
        let key: Vec<i64> = match self.alignment {
            Alignment::Offset => p.iter().map(|x| (x / self.h).floor() as i64).collect(),
            Alignment::Centered => p.iter().map(|x| (x / self.h).round() as i64).collect(),
        };
        self.lookup.get(&key).copied()
    }

    /// Connected components of the cell adjacency graph (union-find).
    pub fn component_labels(&self) -> Vec<usize> {
        let n = self.num_cells();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in &self.edges {
            let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut label = vec![0usize; n];
        let mut next = 0usize;
        let mut seen: HashMap<usize, usize> = HashMap::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            let l = *seen.entry(r).or_insert_with(|| {
                let l = next;
                next += 1;
                l
            });
            label[i] = l;
        }
        label
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit_box2() -> ConvexDomain {
        ConvexDomain::make_box(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap()
    }

    #[test]
    fn box_grid_h1_has_four_cells() {
        let g = build_grid(&unit_box2(), 1.0, Alignment::Offset).unwrap();
        assert_eq!(g.num_cells(), 4);
        let mut centers = g.centers.clone();
        centers.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(
            centers,
            vec![
                vec![-0.5, -0.5],
                vec![-0.5, 0.5],
                vec![0.5, -0.5],
                vec![0.5, 0.5]
            ]
        );
        assert_eq!(g.edges.len(), 4);
    }

    #[test]
    fn interval_grid_cells_and_edges() {
        let d = ConvexDomain::make_box(vec![-2.0], vec![2.0]).unwrap();
        let g = build_grid(&d, 1.0, Alignment::Offset).unwrap();
        assert_eq!(g.num_cells(), 4);
        assert_eq!(g.edges.len(), 3);
        let centers: Vec<f64> = g.centers.iter().map(|c| c[0]).collect();
        assert_eq!(centers, vec![-1.5, -0.5, 0.5, 1.5]);
    }

    #[test]
    fn ball_grid_matches_enumeration() {
        let d = ConvexDomain::make_ball(vec![0.0, 0.0], 1.0).unwrap();
        let g = build_grid(&d, 0.5, Alignment::Offset).unwrap();
        // oracle: enumerate candidate centers directly
        let mut expect = 0;
        for i in -4i64..=4 {
            for j in -4i64..=4 {
                let c = [(i as f64 + 0.5) * 0.5, (j as f64 + 0.5) * 0.5];
                if c[0] * c[0] + c[1] * c[1] < 1.0 {
                    expect += 1;
                }
            }
        }
        assert_eq!(g.num_cells(), expect);
        assert_eq!(expect, 12);
    }

    #[test]
    fn cell_of_inverts_centers() {
        for al in [Alignment::Offset, Alignment::Centered] {
            let g = build_grid(&unit_box2(), 0.25, al).unwrap();
            for (i, c) in g.centers.iter().enumerate() {
                assert_eq!(g.cell_of(c), Some(i));
            }
            assert!(g.cell_of(&[5.0, 5.0]).is_none());
        }
    }

    #[test]
    fn base_point_resolves_in_offset_alignment() {
        let g = build_grid(&unit_box2(), 0.5, Alignment::Offset).unwrap();
        let cell = g.cell_of(&[0.0, 0.0]).unwrap();
        assert_eq!(g.centers[cell], vec![0.25, 0.25]);
    }

    #[test]
    fn centered_alignment_nests_under_halving() {
        let d = ConvexDomain::make_box(vec![-2.0, -2.0], vec![2.0, 2.0]).unwrap();
        let coarse = build_grid(&d, 0.25, Alignment::Centered).unwrap();
        let fine = build_grid(&d, 0.125, Alignment::Centered).unwrap();
        for c in &coarse.centers {
            let cell = fine.cell_of(c).expect("coarse center must be a fine center");
            for (a, b) in fine.centers[cell].iter().zip(c) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn edges_connect_adjacent_cells_only() {
        let d = ConvexDomain::make_ball(vec![0.1, 0.0], 1.3).unwrap();
        let g = build_grid(&d, 0.3, Alignment::Offset).unwrap();
        for e in &g.edges {
            let (ka, kb) = (&g.indices[e.a], &g.indices[e.b]);
            let diff: Vec<i64> = kb.iter().zip(ka).map(|(b, a)| b - a).collect();
            assert_eq!(diff.iter().map(|d| d.abs()).sum::<i64>(), 1);
            assert_eq!(diff[e.axis], 1);
        }
    }

    #[test]
    fn norms_and_duals_basics() {
        let v = [3.0, -4.0];
        assert_eq!(NormSpec::L1.norm_eval(&v), 7.0);
        assert_eq!(NormSpec::L2.norm_eval(&v), 5.0);
        assert_eq!(NormSpec::Linf.norm_eval(&v), 4.0);
        assert_eq!(NormSpec::L1.dual_norm_eval(&v), 4.0);
        assert_eq!(NormSpec::Linf.dual_norm_eval(&v), 7.0);
    }

    #[test]
    fn polyhedral_axis_directions_recover_l1() {
        let n = NormSpec::polyhedral(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!((n.norm_eval(&[1.0, 1.0]) - 2.0).abs() < 1e-9);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let v = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
            assert!((n.norm_eval(&v) - NormSpec::L1.norm_eval(&v)).abs() < 1e-8);
            assert!((n.dual_norm_eval(&v) - NormSpec::Linf.norm_eval(&v)).abs() < 1e-12);
        }
    }

    #[test]
    fn norm_axioms_on_random_vectors() {
        let octagon = NormSpec::polyhedral(
            (0..8)
                .map(|j| {
                    let t = std::f64::consts::PI * (j as f64) / 4.0;
                    vec![t.cos(), t.sin()]
                })
                .collect(),
        )
        .unwrap();
        let kinds = [NormSpec::L1, NormSpec::L2, NormSpec::Linf, octagon];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for kind in &kinds {
            for _ in 0..40 {
                let a = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
                let b = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
                let t: f64 = rng.gen_range(-3.0..3.0);
                let na = kind.norm_eval(&a);
                let nb = kind.norm_eval(&b);
                let sum = [a[0] + b[0], a[1] + b[1]];
                let ta = [t * a[0], t * a[1]];
                assert!(kind.norm_eval(&sum) <= na + nb + 1e-9);
                assert!((kind.norm_eval(&ta) - t.abs() * na).abs() < 1e-8);
                let neg = [-a[0], -a[1]];
                assert!((kind.norm_eval(&neg) - na).abs() < 1e-9);
                // dual pairing
                assert!(dot(&a, &b) <= kind.dual_norm_eval(&a) * nb + 1e-9);
            }
        }
    }

    #[test]
    fn dual_pairing_is_tight_for_named_norms() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for kind in [NormSpec::L1, NormSpec::L2, NormSpec::Linf] {
            for _ in 0..25 {
                let u: [f64; 3] =
                    [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
                // maximizer of <u, v> over the unit ball of the norm
                let v: Vec<f64> = match kind {
                    NormSpec::L1 => {
                        // dual is linf: the l1-ball maximizer is a signed
                        // basis vector at the largest |u_i|
                        let (mut best, mut arg) = (0.0, 0);
                        for (i, x) in u.iter().enumerate() {
                            if x.abs() > best {
                                best = x.abs();
                                arg = i;
                            }
                        }
                        let mut v = vec![0.0; 3];
                        v[arg] = u[arg].signum();
                        v
                    }
                    NormSpec::L2 => {
                        let n = dot(&u, &u).sqrt().max(1e-300);
                        u.iter().map(|x| x / n).collect()
                    }
                    NormSpec::Linf => {
                        // dual is l1: the linf-ball maximizer is sign(u)
                        u.iter().map(|x| x.signum()).collect()
                    }
                    NormSpec::Polyhedral { .. } => unreachable!(),
                };
                assert!(kind.norm_eval(&v) <= 1.0 + 1e-12);
                assert!((dot(&u, &v) - kind.dual_norm_eval(&u)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn samples_land_inside() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let doms = [
            unit_box2(),
            ConvexDomain::make_ball(vec![0.2, -0.1], 0.9).unwrap(),
            ConvexDomain::make_polytope(
                vec![vec![1.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]],
                vec![1.0, 1.0, 1.0],
            )
            .unwrap(),
        ];
        for d in &doms {
            for _ in 0..200 {
                let p = d.sample(&mut rng);
                assert!(d.contains(&p));
                assert!(d.distance_to_boundary(&p) > 0.0);
            }
        }
    }

    #[test]
    fn unbounded_polytope_rejected() {
        // only two halfspaces in 2D cannot bound
        let r = ConvexDomain::make_polytope(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![1.0, 1.0]);
        assert!(r.is_err());
    }
}
