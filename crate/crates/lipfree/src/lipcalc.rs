//! Lipschitz calculus on finite data and sampled functions: the least
//! Lipschitz constant of finite data, McShane's minimal extension formula,
//! and Monte Carlo estimates of essential Lipschitz constants.

use std::rc::Rc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{sub, ConvexDomain, NormSpec};

/// A scalar function of `dim` variables, evaluable anywhere (callers keep
/// track of the domain it is meaningful on).
#[derive(Clone)]
pub struct ScalarField {
    dim: usize,
    f: Rc<dyn Fn(&[f64]) -> f64>,
}

impl ScalarField {
    pub fn from_fn(dim: usize, f: impl Fn(&[f64]) -> f64 + 'static) -> Self {
        ScalarField { dim, f: Rc::new(f) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, p: &[f64]) -> f64 {
        debug_assert_eq!(p.len(), self.dim, "point dimension mismatch");
        (self.f)(p)
    }
}

impl std::fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ScalarField(dim={})", self.dim)
    }
}

/// Finite point data `x_i -> f_i`.
#[derive(Debug, Clone)]
pub struct PointData {
    pub points: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

impl PointData {
    pub fn new(points: Vec<Vec<f64>>, values: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != values.len() {
            return Err(Error::invalid("point data needs matching nonempty points and values"));
        }
        let dim = points[0].len();
        if dim == 0 || points.iter().any(|p| p.len() != dim) {
            return Err(Error::invalid("points must share a nonzero dimension"));
        }
        if points.iter().flatten().any(|v| !v.is_finite())
            || values.iter().any(|v| !v.is_finite())
        {
            return Err(Error::invalid("point data must be finite"));
        }
        Ok(PointData { points, values })
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Least Lipschitz constant of the data under the given norm: the max slope
/// over pairs. Duplicated points with different values give `INFINITY`.
pub fn finite_lipschitz_constant(data: &PointData, norm: &NormSpec) -> f64 {
    let mut best = 0.0_f64;
    for i in 0..data.len() {
        for j in i + 1..data.len() {
            let d = norm.distance(&data.points[i], &data.points[j]);
            let df = (data.values[i] - data.values[j]).abs();
            if d == 0.0 {
                if df > 0.0 {
                    return f64::INFINITY;
                }
            } else {
                best = best.max(df / d);
            }
        }
    }
    best
}

/// McShane's minimal L-Lipschitz extension `h(y) = min_i (f_i + L |y - x_i|)`.
/// Errors when `L` is smaller than the least constant of the data (then no
/// L-Lipschitz extension interpolates).
pub fn mcshane_extension(data: &PointData, lip: f64, norm: &NormSpec) -> Result<ScalarField> {
    let need = finite_lipschitz_constant(data, norm);
    if !(lip >= need - 1e-12) || !lip.is_finite() {
        return Err(Error::invalid(format!(
            "Lipschitz bound {lip} is below the least data constant {need}"
        )));
    }
    let data = data.clone();
    let norm = norm.clone();
    Ok(ScalarField::from_fn(data.dim(), move |y| {
        data.points
            .iter()
            .zip(&data.values)
            .map(|(x, &fx)| fx + lip * norm.norm_eval(&sub(y, x)))
            .fold(f64::INFINITY, f64::min)
    }))
}

/// Monte Carlo lower estimate of the essential Lipschitz constant: the max
/// difference quotient over `samples` random pairs from the domain. Always a
/// lower bound (up to evaluation error) and approaches the essential constant
/// for continuous functions as `samples` grows.
pub fn essential_lipschitz_estimate(
    f: &ScalarField,
    domain: &ConvexDomain,
    norm: &NormSpec,
    samples: usize,
    rng: &mut impl Rng,
) -> f64 {
    let mut best = 0.0_f64;
    for _ in 0..samples {
        let x = domain.sample(rng);
        let y = domain.sample(rng);
        let d = norm.distance(&x, &y);
        if d <= 1e-12 {
            continue;
        }
        best = best.max((f.eval(&x) - f.eval(&y)).abs() / d);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn corner_data() -> PointData {
        PointData::new(
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0]],
            vec![0.0, 1.0, 2.0],
        )
        .unwrap()
    }

    #[test]
    fn finite_constant_depends_on_norm() {
        let data = corner_data();
        assert!((finite_lipschitz_constant(&data, &NormSpec::L1) - 1.0).abs() < 1e-15);
        let l2 = finite_lipschitz_constant(&data, &NormSpec::L2);
        assert!((l2 - 2.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn duplicate_points_with_clash_are_unliftable() {
        let data =
            PointData::new(vec![vec![0.0], vec![0.0]], vec![0.0, 1.0]).unwrap();
        assert!(finite_lipschitz_constant(&data, &NormSpec::L2).is_infinite());
    }

    #[test]
    fn mcshane_matches_hand_values() {
        let data = PointData::new(vec![vec![0.0, 0.0], vec![3.0, 4.0]], vec![0.0, 5.0]).unwrap();
        let h = mcshane_extension(&data, 1.0, &NormSpec::L2).unwrap();
        assert!((h.eval(&[3.0, 4.0]) - 5.0).abs() < 1e-12);
        assert!((h.eval(&[2.0, 0.0]) - 2.0).abs() < 1e-12);
        assert!((h.eval(&[0.0, 1.0]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mcshane_interpolates_and_is_lipschitz() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let norm = NormSpec::L2;
        for _ in 0..20 {
            let pts: Vec<Vec<f64>> = (0..5)
                .map(|_| vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
                .collect();
            let vals: Vec<f64> = (0..5).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let data = PointData::new(pts, vals).unwrap();
            let need = finite_lipschitz_constant(&data, &norm);
            if !need.is_finite() {
                continue;
            }
            let lip = need * 1.25 + 0.1;
            let h = mcshane_extension(&data, lip, &norm).unwrap();
            for (x, &fx) in data.points.iter().zip(&data.values) {
                assert!((h.eval(x) - fx).abs() < 1e-12);
            }
            for _ in 0..200 {
                let a = vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
                let b = vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
                let bound = lip * norm.distance(&a, &b) + 1e-12;
                assert!((h.eval(&a) - h.eval(&b)).abs() <= bound);
            }
        }
    }

    #[test]
    fn mcshane_rejects_too_small_bound() {
        let data = corner_data();
        assert!(mcshane_extension(&data, 0.5, &NormSpec::L1).is_err());
    }

    #[test]
    fn adding_consistent_point_changes_nothing_at_old_points() {
        let data = corner_data();
        let lip = 1.0; // the l1 least constant
        let norm = NormSpec::L1;
        let h = mcshane_extension(&data, lip, &norm).unwrap();
        let z = vec![0.25, 0.75];
        let mut pts = data.points.clone();
        let mut vals = data.values.clone();
        pts.push(z.clone());
        vals.push(h.eval(&z)); // exactly consistent with L
        let extended = PointData::new(pts, vals).unwrap();
        let h2 = mcshane_extension(&extended, lip, &norm).unwrap();
        for (x, _) in data.points.iter().zip(&data.values) {
            assert!((h.eval(x) - h2.eval(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn essential_estimate_of_linear_function() {
        let dom = ConvexDomain::make_box(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap();
        let f = ScalarField::from_fn(2, |p| p[0] + 2.0 * p[1]);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let est = essential_lipschitz_estimate(&f, &dom, &NormSpec::L2, 100_000, &mut rng);
        let exact = 5.0_f64.sqrt();
        assert!(est <= exact + 1e-12, "estimate overshoots: {est} > {exact}");
        assert!(est >= exact - 0.05, "estimate too loose: {est} vs {exact}");
    }

    #[test]
    fn essential_estimate_of_norm_function_never_exceeds_one() {
        let dom = ConvexDomain::make_box(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap();
        let f = ScalarField::from_fn(2, |p| (p[0] * p[0] + p[1] * p[1]).sqrt());
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let est = essential_lipschitz_estimate(&f, &dom, &NormSpec::L2, 20_000, &mut rng);
        assert!(est <= 1.0 + 1e-12);
        assert!(est > 0.9);
    }

    #[test]
    fn mcshane_essential_constant_stays_under_declared_bound() {
        let dom = ConvexDomain::make_box(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap();
        let data = corner_data();
        let h = mcshane_extension(&data, 2.0, &NormSpec::L2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let est = essential_lipschitz_estimate(&h, &dom, &NormSpec::L2, 20_000, &mut rng);
        assert!(est <= 2.0 + 1e-12);
    }
}
