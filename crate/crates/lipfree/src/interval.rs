//! Exact piecewise calculus on an interval containing 0.
//!
//! In one dimension the correspondence between essentially bounded densities
//! and Lipschitz functions vanishing at 0 is computable without quadrature:
//! a piecewise-constant density integrates to a piecewise-linear function
//! anchored at 0, the Lipschitz constant of the integral equals the sup norm
//! of the density, and differentiation recovers the density exactly. These
//! types carry that calculus with plain float arithmetic (errors stay at
//! rounding level, well under 1e-12 for sane piece widths).

use crate::error::{Error, Result};

/// Piecewise-constant density on `(lo, hi)`: `values[i]` on the i-th piece
/// delimited by the interior `breakpoints` (right-continuous at breaks).
#[derive(Debug, Clone)]
pub struct PiecewiseConstant {
    pub lo: f64,
    pub hi: f64,
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
}

impl PiecewiseConstant {
    pub fn new(lo: f64, hi: f64, breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if !(lo < 0.0 && 0.0 < hi) {
            return Err(Error::invalid("interval must contain the base point 0"));
        }
        if values.len() != breakpoints.len() + 1 {
            return Err(Error::invalid("need exactly one more value than breakpoints"));
        }
        let mut prev = lo;
        for &b in &breakpoints {
            if !(prev < b && b < hi) {
                return Err(Error::invalid("breakpoints must increase strictly inside (lo, hi)"));
            }
            prev = b;
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("density values must be finite"));
        }
        Ok(PiecewiseConstant { lo, hi, breakpoints, values })
    }

    pub fn constant(lo: f64, hi: f64, value: f64) -> Result<Self> {
        PiecewiseConstant::new(lo, hi, vec![], vec![value])
    }

    /// Node list including both endpoints.
    pub fn nodes(&self) -> Vec<f64> {
        let mut n = Vec::with_capacity(self.breakpoints.len() + 2);
        n.push(self.lo);
        n.extend_from_slice(&self.breakpoints);
        n.push(self.hi);
        n
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut i = 0;
        while i < self.breakpoints.len() && x >= self.breakpoints[i] {
            i += 1;
        }
        self.values[i]
    }

    /// Essential sup norm.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |a: f64, &v| a.max(v.abs()))
    }

    /// `F(x) = integral of the density from 0 to x`, exact piecewise-linear.
    pub fn integrate_from_zero(&self) -> PiecewiseLinear {
        let nodes = self.nodes();
        let n = nodes.len();
        let mut vals = vec![0.0; n];
        // piece q contains 0: nodes[q] <= 0 < nodes[q+1]
        let mut q = 0;
        while q + 2 < n && nodes[q + 1] <= 0.0 {
            q += 1;
        }
        vals[q + 1] = self.values[q] * nodes[q + 1];
        for j in q + 1..n - 1 {
            vals[j + 1] = vals[j] + self.values[j] * (nodes[j + 1] - nodes[j]);
        }
        vals[q] = self.values[q] * nodes[q];
        for j in (0..q).rev() {
            vals[j] = vals[j + 1] - self.values[j] * (nodes[j + 1] - nodes[j]);
        }
        PiecewiseLinear { nodes, values: vals }
    }

    /// Max pointwise gap against another density, measured at midpoints of
    /// the merged piece partition (where both are constant).
    pub fn sup_distance(&self, other: &PiecewiseConstant) -> f64 {
        let mut cuts = self.nodes();
        cuts.extend(other.nodes());
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup_by(|a, b| (*a - *b).abs() <= 0.0);
        let mut worst = 0.0_f64;
        for w in cuts.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            worst = worst.max((self.eval(mid) - other.eval(mid)).abs());
        }
        worst
    }
}

/// Continuous piecewise-linear function given by values at increasing nodes
/// (the first and last nodes are the interval endpoints).
#[derive(Debug, Clone)]
pub struct PiecewiseLinear {
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 || nodes.len() != values.len() {
            return Err(Error::invalid("need >= 2 nodes and matching values"));
        }
        if nodes.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("nodes must increase strictly"));
        }
        Ok(PiecewiseLinear { nodes, values })
    }

    /// Linear interpolation; outside the node range the end segments extend.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.nodes.len();
        let i = match self.nodes.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => return self.values[i],
            Err(0) => 0,
            Err(i) if i >= n => n - 2,
            Err(i) => i - 1,
        };
        let (x0, x1) = (self.nodes[i], self.nodes[i + 1]);
        let t = (x - x0) / (x1 - x0);
        self.values[i] + t * (self.values[i + 1] - self.values[i])
    }

    pub fn value_at_zero(&self) -> f64 {
        self.eval(0.0)
    }

    /// Largest absolute slope = the Lipschitz constant.
    pub fn lipschitz_constant(&self) -> f64 {
        self.slopes().iter().fold(0.0, |a: f64, &s| a.max(s.abs()))
    }

    fn slopes(&self) -> Vec<f64> {
        self.nodes
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, v)| (v[1] - v[0]) / (x[1] - x[0]))
            .collect()
    }

    /// Almost-everywhere derivative: the slope on each piece.
    pub fn derivative(&self) -> PiecewiseConstant {
        let nodes = &self.nodes;
        PiecewiseConstant {
            lo: nodes[0],
            hi: nodes[nodes.len() - 1],
            breakpoints: nodes[1..nodes.len() - 1].to_vec(),
            values: self.slopes(),
        }
    }

    /// Max pointwise gap; both functions are linear between merged nodes, so
    /// the max is attained at a node.
    pub fn sup_distance(&self, other: &PiecewiseLinear) -> f64 {
        let mut cuts = self.nodes.clone();
        cuts.extend_from_slice(&other.nodes);
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup();
        cuts.iter().fold(0.0, |a: f64, &x| a.max((self.eval(x) - other.eval(x)).abs()))
    }
}

/// Random density on (-2, 2) with up to `max_pieces` pieces and piece
/// widths >= 0.05 (keeps slope recovery well inside 1e-12).
pub fn random_density(rng: &mut impl rand::Rng, max_pieces: usize) -> PiecewiseConstant {
    let pieces = rng.gen_range(1..=max_pieces);
    let mut bps: Vec<f64> = Vec::new();
    let mut guard = 0;
    while bps.len() + 1 < pieces && guard < 1000 {
        guard += 1;
        let b: f64 = rng.gen_range(-1.95..1.95);
        if bps.iter().all(|&x: &f64| (x - b).abs() >= 0.05) {
            bps.push(b);
        }
    }
    bps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let values: Vec<f64> = (0..bps.len() + 1).map(|_| rng.gen_range(-3.0..3.0)).collect();
    PiecewiseConstant::new(-2.0, 2.0, bps, values).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn step_density_integrates_to_tent() {
        // 1 on (0,1), -1 elsewhere on (-2,2)
        let g = PiecewiseConstant::new(-2.0, 2.0, vec![0.0, 1.0], vec![-1.0, 1.0, -1.0]).unwrap();
        let f = g.integrate_from_zero();
        assert_eq!(f.value_at_zero(), 0.0);
        assert!((f.eval(1.0) - 1.0).abs() < 1e-15);
        assert!((f.eval(2.0) - 0.0).abs() < 1e-15);
        assert!((f.eval(-2.0) - 2.0).abs() < 1e-15);
        assert!((f.lipschitz_constant() - 1.0).abs() < 1e-15);
        assert!((f.lipschitz_constant() - g.sup_norm()).abs() < 1e-15);
    }

    #[test]
    fn integral_is_anchored_and_exact_on_constants() {
        let g = PiecewiseConstant::constant(-1.0, 3.0, 2.5).unwrap();
        let f = g.integrate_from_zero();
        assert_eq!(f.value_at_zero(), 0.0);
        assert!((f.eval(2.0) - 5.0).abs() < 1e-15);
        assert!((f.eval(-1.0) + 2.5).abs() < 1e-15);
    }

    #[test]
    fn roundtrip_is_exact_to_rounding() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let g = random_density(&mut rng, 10);
            let f = g.integrate_from_zero();
            // isometry: Lipschitz constant equals the sup norm
            assert!((f.lipschitz_constant() - g.sup_norm()).abs() <= 1e-12);
            // inversion: differentiating the integral recovers the density
            let back = f.derivative();
            assert!(g.sup_distance(&back) <= 1e-12);
            // and integrating again reproduces the function
            assert!(f.sup_distance(&back.integrate_from_zero()) <= 1e-12);
        }
    }

    #[test]
    fn zero_on_a_breakpoint_is_fine() {
        let g = PiecewiseConstant::new(-1.0, 1.0, vec![0.0], vec![2.0, 3.0]).unwrap();
        let f = g.integrate_from_zero();
        assert_eq!(f.value_at_zero(), 0.0);
        assert!((f.eval(0.5) - 1.5).abs() < 1e-15);
        assert!((f.eval(-0.5) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn constructor_validation() {
        assert!(PiecewiseConstant::new(0.5, 1.0, vec![], vec![1.0]).is_err());
        assert!(PiecewiseConstant::new(-1.0, 1.0, vec![0.3, 0.2], vec![1.0, 2.0, 3.0]).is_err());
        assert!(PiecewiseConstant::new(-1.0, 1.0, vec![0.2], vec![1.0]).is_err());
        assert!(PiecewiseLinear::new(vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
    }
}
