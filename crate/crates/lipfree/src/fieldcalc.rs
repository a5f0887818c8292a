//! Calculus between scalar functions and vector fields on a domain.
//!
//! The segment integral `(x, y) -> integral over [0,1] of <g(x + t(y-x)),
//! y-x> dt` turns a bounded field `g` into increments of a Lipschitz
//! function; anchoring at the base point (`base_integral`) produces the
//! function itself, and almost-everywhere gradients go the other way. A
//! field is *compatible* when its base integral's increments reproduce every
//! segment integral — gradient fields are, generic fields (e.g. rotations)
//! are not, and `compatibility_residual` measures the defect per unit
//! length. Mollification smooths a Lipschitz function by a fixed
//! polynomial-bump kernel while keeping it anchored at 0.
//!
//! Quadratures are composite midpoint rules: exact whenever the integrand is
//! affine along the segment, with O(1/m^2) error otherwise.

use std::rc::Rc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{dot, sub, ConvexDomain};
use crate::lipcalc::ScalarField;

/// A vector field with an optional declared bound: a promised sup over the
/// domain of the dual norm of its values (callers pick the norm pairing).
#[derive(Clone)]
pub struct VectorField {
    dim: usize,
    f: Rc<dyn Fn(&[f64]) -> Vec<f64>>,
    bound: Option<f64>,
}

impl VectorField {
    pub fn from_fn(dim: usize, f: impl Fn(&[f64]) -> Vec<f64> + 'static) -> Self {
        VectorField { dim, f: Rc::new(f), bound: None }
    }

    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound = Some(bound);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bound(&self) -> Option<f64> {
        self.bound
    }

    pub fn eval(&self, p: &[f64]) -> Vec<f64> {
        debug_assert_eq!(p.len(), self.dim, "point dimension mismatch");
        (self.f)(p)
    }
}

impl std::fmt::Debug for VectorField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "VectorField(dim={}, bound={:?})", self.dim, self.bound)
    }
}

/// Composite midpoint quadrature of `t -> <g(x + t(y-x)), y-x>` on [0,1].
pub fn segment_integral(g: &VectorField, x: &[f64], y: &[f64], m: usize) -> f64 {
    assert!(m > 0, "need at least one quadrature node");
    let d = sub(y, x);
    let mut acc = 0.0;
    let mut p = vec![0.0; x.len()];
    for j in 0..m {
        let t = (j as f64 + 0.5) / m as f64;
        for (pi, (xi, di)) in p.iter_mut().zip(x.iter().zip(&d)) {
            *pi = xi + t * di;
        }
        acc += dot(&g.eval(&p), &d);
    }
    acc / m as f64
}

/// Segment integral anchored at the base point 0.
pub fn base_integral(g: &VectorField, y: &[f64], m: usize) -> f64 {
    let zero = vec![0.0; y.len()];
    segment_integral(g, &zero, y, m)
}

/// The anchored integral as a function: the scalar function a bounded field
/// induces. Increments of this function match segment integrals exactly when
/// the field is compatible.
pub fn scalar_from_field(g: &VectorField, m: usize) -> ScalarField {
    let g = g.clone();
    ScalarField::from_fn(g.dim(), move |y| base_integral(&g, y, m))
}

/// Finite-difference gradient: central stencils of width `2*step`, falling
/// back to one-sided near the boundary of the domain.
pub fn gradient(f: &ScalarField, domain: &ConvexDomain, step: f64) -> VectorField {
    assert!(step > 0.0, "step must be positive");
    let f = f.clone();
    let domain = domain.clone();
    let dim = f.dim();
    VectorField::from_fn(dim, move |p| {
        let mut g = vec![0.0; dim];
        let mut hi = p.to_vec();
        let mut lo = p.to_vec();
        for k in 0..dim {
            hi[k] = p[k] + step;
            lo[k] = p[k] - step;
            let up_ok = domain.contains(&hi);
            let dn_ok = domain.contains(&lo);
            g[k] = if up_ok && dn_ok {
                (f.eval(&hi) - f.eval(&lo)) / (2.0 * step)
            } else if up_ok {
                (f.eval(&hi) - f.eval(p)) / step
            } else if dn_ok {
                (f.eval(p) - f.eval(&lo)) / step
            } else {
                0.0
            };
            hi[k] = p[k];
            lo[k] = p[k];
        }
        g
    })
}

/// Defect of the increment identity `base(y) - base(x) = segment(x, y)`,
/// normalized by the Euclidean length of `y - x` (0 for coincident points).
/// Vanishes (up to quadrature error) exactly for compatible fields.
pub fn compatibility_residual(g: &VectorField, x: &[f64], y: &[f64], m: usize) -> f64 {
    let d = sub(y, x);
    let len = dot(&d, &d).sqrt();
    if len == 0.0 {
        return 0.0;
    }
    let defect = base_integral(g, y, m) - base_integral(g, x, m) - segment_integral(g, x, y, m);
    defect.abs() / len
}

/// Max over random probes of `|base_integral(gradient f)(y) - (f(y)-f(0))|`:
/// how well differentiating then re-integrating reproduces the function.
pub fn roundtrip_error(
    f: &ScalarField,
    domain: &ConvexDomain,
    step: f64,
    m: usize,
    probes: usize,
    rng: &mut impl Rng,
) -> f64 {
    let g = gradient(f, domain, step);
    let zero = vec![0.0; f.dim()];
    let f0 = f.eval(&zero);
    let mut worst = 0.0_f64;
    for _ in 0..probes {
        let y = domain.sample(rng);
        let err = (base_integral(&g, &y, m) - (f.eval(&y) - f0)).abs();
        worst = worst.max(err);
    }
    worst
}

/// Nodes per axis of the mollifier quadrature.
const MOLLIFY_NODES: usize = 16;

/// Midpoint nodes and weights for the bump kernel `(1 - (t/eps)^2)^2` on
/// `[-eps, eps]`: `w` are value weights normalized to sum 1 (exact on
/// constants), `v` are derivative weights normalized so `sum(v_i t_i) = -1`
/// (gradients exact on affine functions).
fn kernel_weights(eps: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let m = MOLLIFY_NODES;
    let dt = 2.0 * eps / m as f64;
    let mut nodes = Vec::with_capacity(m);
    let mut w = Vec::with_capacity(m);
    let mut v = Vec::with_capacity(m);
    for i in 0..m {
        let t = -eps + (i as f64 + 0.5) * dt;
        let u = t / eps;
        let k = (1.0 - u * u).powi(2);
        let kp = -4.0 * u * (1.0 - u * u) / eps;
        nodes.push(t);
        w.push(k);
        v.push(kp);
    }
    let wsum: f64 = w.iter().sum();
    for x in w.iter_mut() {
        *x /= wsum;
    }
    let s: f64 = v.iter().zip(&nodes).map(|(a, t)| a * t).sum();
    for x in v.iter_mut() {
        *x /= -s;
    }
    (nodes, w, v)
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::invalid("mollifier width must be positive and finite"));
    }
    Ok(())
}

/// Tensor-product mollification re-anchored at the base point:
/// `(rho_eps * f)(y) - (rho_eps * f)(0)`. Exact on affine functions.
/// Evaluation points must stay at distance > eps from wherever `f` stops
/// being meaningful.
pub fn mollify(f: &ScalarField, eps: f64) -> Result<ScalarField> {
    check_eps(eps)?;
    let (nodes, w, _) = kernel_weights(eps);
    let dim = f.dim();
    let f = f.clone();
    let smooth = move |y: &[f64]| -> f64 {
        let mut acc = 0.0;
        let mut q = vec![0usize; dim];
        let mut p = vec![0.0; dim];
        loop {
            let mut weight = 1.0;
            for k in 0..dim {
                weight *= w[q[k]];
                p[k] = y[k] + nodes[q[k]];
            }
            acc += weight * f.eval(&p);
            // odometer over the tensor grid
            let mut k = 0;
            loop {
                if k == dim {
                    return acc;
                }
                q[k] += 1;
                if q[k] < nodes.len() {
                    break;
                }
                q[k] = 0;
                k += 1;
            }
        }
    };
    let zero = vec![0.0; dim];
    let at0 = smooth(&zero);
    Ok(ScalarField::from_fn(dim, move |y| smooth(y) - at0))
}

/// Gradient of the mollification, computed with kernel-derivative weights
/// (no finite differences, so no step-size error amplification).
pub fn mollify_gradient(f: &ScalarField, eps: f64) -> Result<VectorField> {
    check_eps(eps)?;
    let (nodes, w, v) = kernel_weights(eps);
    let dim = f.dim();
    let f = f.clone();
    Ok(VectorField::from_fn(dim, move |y| {
        let mut grad = vec![0.0; dim];
        let mut q = vec![0usize; dim];
        let mut p = vec![0.0; dim];
        loop {
            for k in 0..dim {
                p[k] = y[k] + nodes[q[k]];
            }
            let fv = f.eval(&p);
            for a in 0..dim {
                let mut weight = 1.0;
                for k in 0..dim {
                    weight *= if k == a { v[q[k]] } else { w[q[k]] };
                }
                // integration by parts flips the sign of the kernel derivative
                grad[a] -= weight * fv;
            }
            let mut k = 0;
            loop {
                if k == dim {
                    return grad;
                }
                q[k] += 1;
                if q[k] < nodes.len() {
                    break;
                }
                q[k] = 0;
                k += 1;
            }
        }
    }))
}

/// Discrete pairing of the mollified gradient against a per-cell vector
/// field on a grid: `sum_c <grad(rho_eps * f)(center_c), field_c> h^n`.
pub fn mollify_pairing(
    f: &ScalarField,
    grid: &crate::geometry::Grid,
    percell: &[Vec<f64>],
    eps: f64,
) -> Result<f64> {
    if percell.len() != grid.num_cells() {
        return Err(Error::invalid("per-cell field length must match the grid"));
    }
    let g = mollify_gradient(f, eps)?;
    let volume = grid.h.powi(grid.dim as i32);
    let mut acc = 0.0;
    for (center, fc) in grid.centers.iter().zip(percell) {
        if fc.iter().all(|&x| x == 0.0) {
            continue;
        }
        acc += dot(&g.eval(center), fc) * volume;
    }
    Ok(acc)
}
