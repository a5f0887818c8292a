//! Dual balls of the per-cell flux cost, as explicit convex bodies.
//!
//! Every supported cost `N` is a support function `N(v) = max_q <q, v>` of a
//! symmetric polytope `Q` with 0 in its interior — the unit ball of the dual
//! norm. One body drives everything: the objective is `support`, the
//! proximal step projects onto a scaled copy of `Q` (`project`), and dual
//! feasibility is the gauge of `Q` (`gauge`). In the plane `Q` is kept as a
//! counter-clockwise vertex list with precomputed facets; regular polygons
//! get O(1) sector projection.

use crate::error::{Error, Result};
use crate::geometry::dot;

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// `k` equally spaced unit directions, the facet family approximating the
/// Euclidean cost: 1D gives the exact `{-1, +1}`, 2D the vertices of a
/// regular k-gon (k even, so the family is symmetric), 3D the icosahedron.
pub fn facet_directions(dim: usize, k: usize) -> Result<Vec<Vec<f64>>> {
    match dim {
        1 => Ok(vec![vec![1.0], vec![-1.0]]),
        2 => {
            if k < 4 || k % 2 != 0 || k > 4096 {
                return Err(Error::invalid(
                    "planar facet count must be even, at least 4, at most 4096",
                ));
            }
            Ok((0..k)
                .map(|j| {
                    let a = TAU * j as f64 / k as f64;
                    vec![a.cos(), a.sin()]
                })
                .collect())
        }
        3 => {
            let p = (1.0 + 5.0_f64.sqrt()) / 2.0;
            let s = (1.0 + p * p).sqrt();
            let mut dirs = Vec::with_capacity(12);
            for &(a, b) in &[(1.0, p), (1.0, -p), (-1.0, p), (-1.0, -p)] {
                dirs.push(vec![0.0, a / s, b / s]);
                dirs.push(vec![a / s, b / s, 0.0]);
                dirs.push(vec![b / s, 0.0, a / s]);
            }
            Ok(dirs)
        }
        _ => Err(Error::invalid("facet directions cover dimensions 1 to 3")),
    }
}

/// A symmetric polytope `Q` (the dual unit ball) with the operations the
/// solvers need. 2D vertices are stored counter-clockwise.
#[derive(Debug, Clone)]
pub struct DualBall {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
    /// 2D facets as `(outward normal, offset)`: `Q = {x : <n_i, x> <= c_i}`.
    facets: Vec<(Vec<f64>, f64)>,
    /// Set when the 2D vertices form a regular polygon of this radius with
    /// vertex 0 on the positive x-axis: unlocks O(1) projection.
    regular: Option<(usize, f64)>,
    /// Per-axis half-width `max_j |q_{j,axis}|`: the shadow of `Q` on an
    /// axis, which is what boundary cells with one free component see.
    extents: Vec<f64>,
    /// Largest disc inside `Q` (2D): cheap certain-inside test before any
    /// facet work — in the solver's steady state most cells pass it.
    inradius: f64,
}

fn facets_of_ring(vertices: &[Vec<f64>]) -> Vec<(Vec<f64>, f64)> {
    let k = vertices.len();
    let mut facets = Vec::with_capacity(k);
    for i in 0..k {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % k];
        // outward normal of the ccw edge a -> b
        let n = vec![b[1] - a[1], a[0] - b[0]];
        let c = dot(&n, a);
        debug_assert!(c > 0.0, "origin must be interior");
        facets.push((n, c));
    }
    facets
}

fn extents_of(dim: usize, vertices: &[Vec<f64>]) -> Vec<f64> {
    (0..dim)
        .map(|k| vertices.iter().fold(0.0, |m: f64, v| m.max(v[k].abs())))
        .collect()
}

impl DualBall {
    fn from_ring(vertices: Vec<Vec<f64>>, regular: Option<(usize, f64)>) -> Self {
        let facets = facets_of_ring(&vertices);
        let extents = extents_of(2, &vertices);
        let inradius = facets
            .iter()
            .map(|(n, c)| c / dot(n, n).sqrt())
            .fold(f64::INFINITY, f64::min);
        DualBall { dim: 2, vertices, facets, regular, extents, inradius }
    }

    fn interval(half_width: f64) -> Self {
        DualBall {
            dim: 1,
            vertices: vec![vec![-half_width], vec![half_width]],
            facets: Vec::new(),
            regular: None,
            extents: vec![half_width],
            inradius: half_width,
        }
    }

    fn cloud(dim: usize, vertices: Vec<Vec<f64>>) -> Self {
        let extents = extents_of(dim, &vertices);
        DualBall { dim, vertices, facets: Vec::new(), regular: None, extents, inradius: 0.0 }
    }

    /// Euclidean cost through `k` facet directions: `Q` is the inscribed
    /// polytope spanned by them, so the support function undershoots the
    /// Euclidean norm by at most the factor `cos(pi/k)` in the plane.
    pub fn l2_facets(dim: usize, k: usize) -> Result<Self> {
        let dirs = facet_directions(dim, k)?;
        Ok(match dim {
            1 => DualBall::interval(1.0),
            2 => DualBall::from_ring(dirs, Some((k, 1.0))),
            _ => DualBall::cloud(dim, dirs),
        })
    }

    /// Max-norm cost: `Q` is the cross-polytope `conv(+-e_k)` (exact).
    pub fn linf(dim: usize) -> Result<Self> {
        match dim {
            1 => Ok(DualBall::interval(1.0)),
            2 => Ok(DualBall::from_ring(
                vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]],
                Some((4, 1.0)),
            )),
            3 => Ok(DualBall::cloud(
                3,
                vec![
                    vec![1.0, 0.0, 0.0],
                    vec![-1.0, 0.0, 0.0],
                    vec![0.0, 1.0, 0.0],
                    vec![0.0, -1.0, 0.0],
                    vec![0.0, 0.0, 1.0],
                    vec![0.0, 0.0, -1.0],
                ],
            )),
            _ => Err(Error::invalid("max-norm cost covers dimensions 1 to 3")),
        }
    }

    /// 1-norm cost: `Q` is the cube `[-1, 1]^n` (exact). The flow solver is
    /// the preferred route for this cost; this body backs the LP reference.
    pub fn l1(dim: usize) -> Result<Self> {
        match dim {
            1 => Ok(DualBall::interval(1.0)),
            2 => Ok(DualBall::from_ring(
                vec![vec![1.0, 1.0], vec![-1.0, 1.0], vec![-1.0, -1.0], vec![1.0, -1.0]],
                None,
            )),
            3 => {
                let mut v = Vec::with_capacity(8);
                for &x in &[1.0, -1.0] {
                    for &y in &[1.0, -1.0] {
                        for &z in &[1.0, -1.0] {
                            v.push(vec![x, y, z]);
                        }
                    }
                }
                Ok(DualBall::cloud(3, v))
            }
            _ => Err(Error::invalid("1-norm cost covers dimensions 1 to 3")),
        }
    }

    /// Cost = gauge of `conv(directions)` (a polyhedral norm): `Q` is the
    /// polar polytope. Planar only — the polar's vertices come from
    /// consecutive hull facets.
    pub fn polyhedral(directions: &[Vec<f64>]) -> Result<Self> {
        let dim = directions.first().map_or(0, |d| d.len());
        match dim {
            1 => {
                let d = directions.iter().fold(0.0, |m: f64, v| m.max(v[0].abs()));
                if d <= 0.0 {
                    return Err(Error::invalid("polyhedral directions must be nonzero"));
                }
                Ok(DualBall::interval(1.0 / d))
            }
            2 => {
                let hull = convex_hull_ccw(directions)?;
                let k = hull.len();
                let mut polar = Vec::with_capacity(k);
                for i in 0..k {
                    let a = &hull[i];
                    let b = &hull[(i + 1) % k];
                    // the polar vertex dual to facet [a, b]: <u,a> = <u,b> = 1
                    let det = a[0] * b[1] - a[1] * b[0];
                    if det.abs() < 1e-12 {
                        return Err(Error::invalid(
                            "polyhedral directions have a facet through the origin",
                        ));
                    }
                    polar.push(vec![(b[1] - a[1]) / det, (a[0] - b[0]) / det]);
                }
                Ok(DualBall::from_ring(polar, None))
            }
            _ => Err(Error::invalid("polyhedral flux cost is planar (or 1D) only")),
        }
    }

    /// Objective: the support function `max_j <q_j, v>`. Missing (boundary)
    /// components enter as zeros, which matches the support function of the
    /// shadow of `Q` on the free coordinates.
    pub fn support(&self, v: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|q| dot(q, v))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Dual feasibility: `min { t >= 0 : g in t Q }` via the facet form.
    pub fn gauge(&self, g: &[f64]) -> f64 {
        match self.dim {
            1 => g[0].abs() / self.extents[0],
            2 => self
                .facets
                .iter()
                .map(|(n, c)| dot(n, g) / c)
                .fold(0.0, f64::max),
            _ => unreachable!("gauge is used by the planar/1D first-order path only"),
        }
    }

    /// Half-width of the shadow of `Q` on one axis.
    pub fn extent(&self, axis: usize) -> f64 {
        self.extents[axis]
    }

    /// Euclidean projection of `v` onto `scale * Q` (planar).
    pub fn project(&self, v: &[f64], scale: f64) -> Vec<f64> {
        let (x, y) = self.project2(v[0], v[1], scale);
        vec![x, y]
    }

    /// Scalar form of [`project`](Self::project): the solver's innermost
    /// loop, so no allocation. A point inside the inscribed disc returns
    /// immediately; a regular ring then locates its sector by angle and
    /// touches three facets; only irregular rings scan every facet.
    pub fn project2(&self, vx: f64, vy: f64, scale: f64) -> (f64, f64) {
        debug_assert_eq!(self.dim, 2);
        let rin = self.inradius * scale;
        if vx * vx + vy * vy <= rin * rin {
            return (vx, vy);
        }
        if let Some((k, _)) = self.regular {
            // vertex j sits at angle TAU j / k; only the sector's facet (and
            // its neighbors, guarding rounding) can separate v from Q
            let sector = TAU / k as f64;
            let j = (vy.atan2(vx).rem_euclid(TAU) / sector) as usize % k;
            let mut inside = true;
            for dj in [k - 1, 0, 1] {
                let (n, c) = &self.facets[(j + dj) % k];
                if n[0] * vx + n[1] * vy > c * scale {
                    inside = false;
                    break;
                }
            }
            if inside {
                return (vx, vy);
            }
            let mut best = (f64::INFINITY, (0.0, 0.0));
            for dj in [k - 1, 0, 1] {
                let i = (j + dj) % k;
                self.consider_edge(i, vx, vy, scale, &mut best);
            }
            best.1
        } else {
            if self
                .facets
                .iter()
                .all(|(n, c)| n[0] * vx + n[1] * vy <= c * scale)
            {
                return (vx, vy);
            }
            let mut best = (f64::INFINITY, (0.0, 0.0));
            for i in 0..self.vertices.len() {
                self.consider_edge(i, vx, vy, scale, &mut best);
            }
            best.1
        }
    }

    /// Projection of `(vx, vy)` onto the scaled edge `i`; keeps the closest.
    fn consider_edge(&self, i: usize, vx: f64, vy: f64, scale: f64, best: &mut (f64, (f64, f64))) {
        let a = &self.vertices[i];
        let b = &self.vertices[(i + 1) % self.vertices.len()];
        let (ax, ay) = (a[0] * scale, a[1] * scale);
        let (abx, aby) = (b[0] * scale - ax, b[1] * scale - ay);
        let len2 = abx * abx + aby * aby;
        let t = if len2 > 0.0 {
            (((vx - ax) * abx + (vy - ay) * aby) / len2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let (px, py) = (ax + t * abx, ay + t * aby);
        let d2 = (vx - px) * (vx - px) + (vy - py) * (vy - py);
        if d2 < best.0 {
            *best = (d2, (px, py));
        }
    }
}

/// Andrew's monotone chain, counter-clockwise, for small planar point sets.
fn convex_hull_ccw(points: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let mut pts: Vec<Vec<f64>> = points.to_vec();
    pts.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap().then(a[1].partial_cmp(&b[1]).unwrap()));
    pts.dedup_by(|a, b| a == b);
    if pts.len() < 3 {
        return Err(Error::invalid("polyhedral hull needs at least 3 distinct directions"));
    }
    let cross = |o: &[f64], a: &[f64], b: &[f64]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut lower: Vec<Vec<f64>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 1e-14
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<f64>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 1e-14
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return Err(Error::invalid("polyhedral directions are collinear"));
    }
    Ok(lower)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn support_of_facet_ring_sandwiches_the_euclidean_norm() {
        let q = DualBall::l2_facets(2, 16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cos = (std::f64::consts::PI / 16.0).cos();
        for _ in 0..200 {
            let v: [f64; 2] = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let l2 = (v[0] * v[0] + v[1] * v[1]).sqrt();
            let s = q.support(&v);
            assert!(s <= l2 + 1e-12);
            assert!(s >= cos * l2 - 1e-12);
        }
    }

    #[test]
    fn cross_polytope_support_is_the_max_norm() {
        let q = DualBall::linf(2).unwrap();
        assert!((q.support(&[3.0, -4.0]) - 4.0).abs() < 1e-15);
        let q = DualBall::linf(3).unwrap();
        assert!((q.support(&[1.0, -5.0, 2.0]) - 5.0).abs() < 1e-15);
    }

    #[test]
    fn cube_support_is_the_one_norm() {
        let q = DualBall::l1(2).unwrap();
        assert!((q.support(&[3.0, -4.0]) - 7.0).abs() < 1e-15);
    }

    #[test]
    fn polar_of_axis_directions_is_the_unit_square() {
        // gauge of conv(+-e1, +-e2) is the 1-norm; its dual ball is the
        // max-norm ball, the square with corners (+-1, +-1)
        let dirs = vec![
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, -1.0],
        ];
        let q = DualBall::polyhedral(&dirs).unwrap();
        assert_eq!(q.vertices.len(), 4);
        assert!((q.support(&[1.0, 1.0]) - 2.0).abs() < 1e-12);
        assert!((q.support(&[1.0, 0.0]) - 1.0).abs() < 1e-12);
        assert!((q.gauge(&[0.5, 0.5]) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn projection_agrees_with_a_grid_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let bodies = vec![
            DualBall::l2_facets(2, 8).unwrap(),
            DualBall::linf(2).unwrap(),
            DualBall::polyhedral(&[
                vec![1.0, 0.2],
                vec![-0.3, 1.0],
                vec![-1.0, -0.1],
                vec![0.4, -1.0],
            ])
            .unwrap(),
        ];
        for q in &bodies {
            for _ in 0..120 {
                let v = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
                let scale = rng.gen_range(0.25..2.0);
                let p = q.project(&v, scale);
                // inside, up to rounding
                assert!(q.gauge(&p) <= scale * (1.0 + 1e-9) + 1e-12);
                let d2 = (v[0] - p[0]).powi(2) + (v[1] - p[1]).powi(2);
                // no boundary or interior sample is closer
                for i in 0..q.vertices.len() {
                    for t in 0..=20 {
                        let t = t as f64 / 20.0;
                        let a = &q.vertices[i];
                        let b = &q.vertices[(i + 1) % q.vertices.len()];
                        for shrink in [1.0, 0.5] {
                            let c = [
                                scale * shrink * (a[0] + t * (b[0] - a[0])),
                                scale * shrink * (a[1] + t * (b[1] - a[1])),
                            ];
                            let dc = (v[0] - c[0]).powi(2) + (v[1] - c[1]).powi(2);
                            assert!(d2 <= dc + 1e-9);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn projection_is_identity_inside() {
        let q = DualBall::l2_facets(2, 32).unwrap();
        let v = [0.1, -0.05];
        assert_eq!(q.project(&v, 1.0), v.to_vec());
    }

    #[test]
    fn gauge_and_support_are_mutually_dual() {
        // <g, v> <= gauge(g) * support(v) with equality for aligned pairs
        let q = DualBall::l2_facets(2, 12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let g = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            assert!(dot(&g, &v) <= q.gauge(&g) * q.support(&v) + 1e-12);
        }
        // aligned: g on a vertex of Q
        let g = &q.vertices[3];
        assert!((q.gauge(g) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn icosahedral_directions_are_unit_and_symmetric() {
        let dirs = facet_directions(3, 0).unwrap();
        assert_eq!(dirs.len(), 12);
        for d in &dirs {
            assert!((dot(d, d) - 1.0).abs() < 1e-12);
            assert!(dirs
                .iter()
                .any(|e| e.iter().zip(d).all(|(a, b)| (a + b).abs() < 1e-12)));
        }
    }

    #[test]
    fn facet_count_validation() {
        assert!(facet_directions(2, 7).is_err());
        assert!(facet_directions(2, 2).is_err());
        assert!(facet_directions(4, 8).is_err());
    }
}
