//! Molecules and the free-space norm.
//!
//! A molecule is a finite weighted sum of point evaluations
//! `sum_i a_i delta(x_i)` over a pointed domain (base point 0, with
//! `delta(0) = 0`). Its norm in the free space is the dual pairing against
//! 1-Lipschitz functions vanishing at 0,
//!
//! ```text
//! ||mu|| = sup { sum_i a_i f(x_i) : Lip(f) <= 1, f(0) = 0 },
//! ```
//!
//! which is a finite linear program once `f` is restricted to the atoms
//! (Kantorovich-Rubinstein). The same value is the least cost of
//! transporting the positive weights onto the negative ones with the base
//! point as a free source/sink for the imbalance; `transport_norm` computes
//! that side on the complete atom graph and is the independent cross-check.
//! Both sides see only pairwise distances, so the norm does not depend on
//! the convex domain the atoms live in.

use crate::error::{Error, Result};
use crate::geometry::{ConvexDomain, NormSpec};
use crate::lipcalc::PointData;
use crate::lp_core::{lp_solve, mcf_solve, FlowArc, FlowNetwork, LpProblem, LpStatus, Rel};

/// Largest atom count the dense Kantorovich-Rubinstein LP accepts.
const MAX_ATOMS: usize = 64;

/// A finite weighted combination of point evaluations.
///
/// The constructor normalizes: atoms at the base point are dropped
/// (`delta(0) = 0`), exact duplicates are merged by summing weights, and
/// atoms whose merged weight is 0 are removed. Atom order is first
/// occurrence, so equal inputs build identical molecules.
#[derive(Debug, Clone, PartialEq)]
pub struct Molecule {
    pub atoms: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    dim: usize,
}

impl Molecule {
    pub fn new(atoms: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        if atoms.len() != weights.len() {
            return Err(Error::invalid("molecule needs one weight per atom"));
        }
        let dim = match atoms.first() {
            Some(a) => a.len(),
            None => return Err(Error::invalid("molecule needs at least one atom")),
        };
        if dim == 0 {
            return Err(Error::invalid("atoms must have nonzero dimension"));
        }
        for a in &atoms {
            if a.len() != dim {
                return Err(Error::invalid("atoms must share one dimension"));
            }
            if a.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid("atom coordinates must be finite"));
            }
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::invalid("weights must be finite"));
        }
        let mut kept: Vec<Vec<f64>> = Vec::new();
        let mut merged: Vec<f64> = Vec::new();
        for (a, &w) in atoms.iter().zip(&weights) {
            if a.iter().all(|&v| v == 0.0) {
                continue;
            }
            match kept.iter().position(|k| k == a) {
                Some(i) => merged[i] += w,
                None => {
                    kept.push(a.clone());
                    merged.push(w);
                }
            }
        }
        let (atoms, weights) = kept
            .into_iter()
            .zip(merged)
            .filter(|(_, w)| *w != 0.0)
            .unzip();
        Ok(Molecule { atoms, weights, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    /// True when normalization cancelled everything: the zero molecule.
    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Total weight; the base point absorbs `-total` in transport terms.
    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Checks every atom lies in the (open) domain.
    pub fn validate_in(&self, domain: &ConvexDomain) -> Result<()> {
        if self.dim != domain.dim() {
            return Err(Error::invalid("molecule and domain dimensions differ"));
        }
        for a in &self.atoms {
            if !domain.contains(a) {
                return Err(Error::OutsideDomain { point: a.clone() });
            }
        }
        Ok(())
    }
}

/// Free-space norm by the Kantorovich-Rubinstein dual LP, with the optimal
/// potential as a witness: point data on {0} and the atoms whose Lipschitz
/// constant is at most 1 and whose pairing with the weights is the norm.
///
/// Deterministic: the LP rows are laid out in a fixed order and the simplex
/// pivots by Bland's rule, so equal molecules yield identical witnesses.
pub fn kr_norm(mol: &Molecule, norm: &NormSpec) -> Result<(f64, PointData)> {
    let n = mol.len();
    if n == 0 {
        let origin = vec![vec![0.0; mol.dim()]];
        return Ok((0.0, PointData::new(origin, vec![0.0])?));
    }
    if n > MAX_ATOMS {
        return Err(Error::TooLarge {
            backend: "kr-lp",
            detail: format!("{n} atoms (max {MAX_ATOMS})"),
        });
    }
    let origin = vec![0.0; mol.dim()];
    // variables: f(x_i), free; f(0) = 0 is implicit
    let mut p = LpProblem::new(mol.weights.clone());
    for i in 0..n {
        p.free_var(i);
    }
    let mut row = |i: Option<usize>, j: usize, d: f64| {
        let mut c = vec![0.0; n];
        if let Some(i) = i {
            c[i] = 1.0;
        }
        c[j] -= 1.0;
        p.add_row(c.clone(), Rel::Le, d);
        for v in c.iter_mut() {
            *v = -*v;
        }
        p.add_row(c, Rel::Le, d);
    };
    for j in 0..n {
        row(None, j, norm.distance(&origin, &mol.atoms[j]));
    }
    for i in 0..n {
        for j in i + 1..n {
            row(Some(i), j, norm.distance(&mol.atoms[i], &mol.atoms[j]));
        }
    }
    let sol = lp_solve(&p);
    if sol.status != LpStatus::Optimal {
        // the feasible set is a nonempty compact polytope; anything else
        // means the distances were corrupt
        return Err(Error::Infeasible(
            "Kantorovich-Rubinstein LP did not reach an optimum".into(),
        ));
    }
    let mut points = Vec::with_capacity(n + 1);
    let mut values = Vec::with_capacity(n + 1);
    points.push(origin);
    values.push(0.0);
    points.extend(mol.atoms.iter().cloned());
    values.extend(sol.x.iter().copied());
    Ok((sol.value, PointData::new(points, values)?))
}

/// Free-space norm from the transport side: min-cost flow on the complete
/// graph over the atoms and the base point, the base point absorbing the
/// weight imbalance. Solved by the network simplex — independent of the
/// dense LP in both formulation and algorithm.
pub fn transport_norm(mol: &Molecule, norm: &NormSpec) -> Result<f64> {
    let n = mol.len();
    if n == 0 {
        return Ok(0.0);
    }
    let origin = vec![0.0; mol.dim()];
    let mut nodes = Vec::with_capacity(n + 1);
    nodes.push(origin);
    nodes.extend(mol.atoms.iter().cloned());
    let mut supplies = Vec::with_capacity(n + 1);
    supplies.push(-mol.total_weight());
    supplies.extend(mol.weights.iter().copied());
    let mut arcs = Vec::new();
    for i in 0..nodes.len() {
        for j in 0..nodes.len() {
            if i != j {
                arcs.push(FlowArc {
                    tail: i,
                    head: j,
                    cost: norm.distance(&nodes[i], &nodes[j]),
                });
            }
        }
    }
    let net = FlowNetwork { num_nodes: nodes.len(), arcs, supplies };
    Ok(mcf_solve(&net)?.value)
}

/// Closed form for a two-atom dipole `a(delta(x) - delta(y))`: carry `|a|`
/// either directly or through the base point, whichever is shorter.
pub fn dipole_norm(a: f64, x: &[f64], y: &[f64], norm: &NormSpec) -> f64 {
    let origin = vec![0.0; x.len()];
    let direct = norm.distance(x, y);
    let via_base = norm.distance(&origin, x) + norm.distance(&origin, y);
    a.abs() * direct.min(via_base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lipcalc::finite_lipschitz_constant;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn single(x: Vec<f64>, a: f64) -> Molecule {
        Molecule::new(vec![x], vec![a]).unwrap()
    }

    #[test]
    fn single_atom_norm_is_weighted_distance_to_base() {
        let (v, _) = kr_norm(&single(vec![3.0, 4.0], 1.0), &NormSpec::L2).unwrap();
        assert!((v - 5.0).abs() < 1e-9);
        let (v, _) = kr_norm(&single(vec![1.0, 1.0], 1.0), &NormSpec::L1).unwrap();
        assert!((v - 2.0).abs() < 1e-9);
        let (v, _) = kr_norm(&single(vec![1.0, 1.0], 1.0), &NormSpec::L2).unwrap();
        assert!((v - 2.0_f64.sqrt()).abs() < 1e-9);
        // negative weight: same norm
        let (v, _) = kr_norm(&single(vec![3.0, 4.0], -2.0), &NormSpec::L2).unwrap();
        assert!((v - 10.0).abs() < 1e-9);
    }

    #[test]
    fn normalization_merges_drops_and_cancels() {
        let m = Molecule::new(
            vec![vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 0.0], vec![2.0, 0.0]],
            vec![0.5, 0.5, 7.0, 0.0],
        )
        .unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.atoms[0], vec![1.0, 0.0]);
        assert_eq!(m.weights[0], 1.0);

        let z = Molecule::new(vec![vec![1.0], vec![1.0]], vec![2.0, -2.0]).unwrap();
        assert!(z.is_empty());
        let (v, w) = kr_norm(&z, &NormSpec::L2).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn dipole_closed_form_picks_the_cheaper_route() {
        let norm = NormSpec::L2;
        // nearby pair far from the base: direct transport wins
        let x = vec![10.0, 0.0];
        let y = vec![10.0, 1.0];
        let m = Molecule::new(vec![x.clone(), y.clone()], vec![2.0, -2.0]).unwrap();
        let (v, _) = kr_norm(&m, &norm).unwrap();
        assert!((v - 2.0).abs() < 1e-9);
        assert!((dipole_norm(2.0, &x, &y, &norm) - 2.0).abs() < 1e-12);
        // pair on opposite sides of the base: through the base is cheaper
        let x = vec![1.0, 0.0];
        let y = vec![-1.0, 0.0];
        let m = Molecule::new(vec![x.clone(), y.clone()], vec![1.0, -1.0]).unwrap();
        let (v, _) = kr_norm(&m, &norm).unwrap();
        assert!((v - 2.0).abs() < 1e-9);
        assert_eq!(dipole_norm(1.0, &x, &y, &norm), 2.0);
    }

    #[test]
    fn witness_is_one_lipschitz_and_attains_the_value() {
        let m = Molecule::new(
            vec![vec![1.0, 0.0], vec![0.0, 2.0], vec![-1.0, -1.0]],
            vec![1.0, -0.5, 0.25],
        )
        .unwrap();
        for norm in [NormSpec::L1, NormSpec::L2, NormSpec::Linf] {
            let (v, w) = kr_norm(&m, &norm).unwrap();
            assert!(finite_lipschitz_constant(&w, &norm) <= 1.0 + 1e-9);
            assert!((w.values[0]).abs() < 1e-12, "witness vanishes at the base");
            let pairing: f64 = m
                .weights
                .iter()
                .zip(&w.values[1..])
                .map(|(a, f)| a * f)
                .sum();
            assert!((pairing - v).abs() < 1e-9);
        }
    }

    #[test]
    fn lp_and_transport_sides_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for trial in 0..60 {
            let n = rng.gen_range(1..=5);
            let atoms: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..2).map(|_| rng.gen_range(-3.0..3.0)).collect())
                .collect();
            let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let m = Molecule::new(atoms, weights).unwrap();
            let norm = match trial % 3 {
                0 => NormSpec::L1,
                1 => NormSpec::L2,
                _ => NormSpec::Linf,
            };
            let (lp, _) = kr_norm(&m, &norm).unwrap();
            let tr = transport_norm(&m, &norm).unwrap();
            assert!(
                (lp - tr).abs() <= 1e-9 * (1.0 + lp.abs()),
                "trial {trial}: LP {lp} vs transport {tr}"
            );
        }
    }

    #[test]
    fn norm_scales_with_the_weights() {
        let m = Molecule::new(vec![vec![1.5, -0.5], vec![0.5, 1.0]], vec![1.0, -1.0]).unwrap();
        let m3 = Molecule::new(vec![vec![1.5, -0.5], vec![0.5, 1.0]], vec![3.0, -3.0]).unwrap();
        let (v, _) = kr_norm(&m, &NormSpec::L2).unwrap();
        let (v3, _) = kr_norm(&m3, &NormSpec::L2).unwrap();
        assert!((v3 - 3.0 * v).abs() < 1e-9);
    }

    #[test]
    fn triangle_inequality_on_random_molecules() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let mk = |rng: &mut ChaCha8Rng| {
                let n = rng.gen_range(1..=3);
                let atoms: Vec<Vec<f64>> = (0..n)
                    .map(|_| (0..2).map(|_| rng.gen_range(-2.0..2.0)).collect())
                    .collect();
                let weights = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                Molecule::new(atoms, weights).unwrap()
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let mut atoms = a.atoms.clone();
            atoms.extend(b.atoms.iter().cloned());
            let mut weights = a.weights.clone();
            weights.extend(b.weights.iter().copied());
            let sum = Molecule::new(atoms, weights).unwrap();
            let (va, _) = kr_norm(&a, &NormSpec::L2).unwrap();
            let (vb, _) = kr_norm(&b, &NormSpec::L2).unwrap();
            let (vs, _) = kr_norm(&sum, &NormSpec::L2).unwrap();
            assert!(vs <= va + vb + 1e-9);
        }
    }

    #[test]
    fn witness_is_deterministic() {
        let m = Molecule::new(
            vec![vec![0.5, 0.5], vec![-1.0, 0.25], vec![0.75, -0.75]],
            vec![1.0, 2.0, -1.5],
        )
        .unwrap();
        let (v1, w1) = kr_norm(&m, &NormSpec::L2).unwrap();
        let (v2, w2) = kr_norm(&m, &NormSpec::L2).unwrap();
        assert_eq!(v1.to_bits(), v2.to_bits());
        for (a, b) in w1.values.iter().zip(&w2.values) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn validate_in_rejects_outside_atoms() {
        let dom = ConvexDomain::make_ball(vec![0.0, 0.0], 2.0).unwrap();
        let inside = single(vec![1.0, 0.5], 1.0);
        assert!(inside.validate_in(&dom).is_ok());
        let outside = single(vec![3.0, 0.0], 1.0);
        assert!(matches!(
            outside.validate_in(&dom),
            Err(Error::OutsideDomain { .. })
        ));
    }

    #[test]
    fn atom_count_guard() {
        let atoms: Vec<Vec<f64>> = (0..65).map(|i| vec![i as f64 + 1.0, 0.0]).collect();
        let weights = vec![1.0; 65];
        let m = Molecule::new(atoms, weights).unwrap();
        assert!(matches!(
            kr_norm(&m, &NormSpec::L2),
            Err(Error::TooLarge { .. })
        ));
    }
}
