//! Named property batteries: fixed suites of checks behind the `check`
//! subcommand, each returning structured pass/fail assertions instead of
//! panicking. The acceptance tests reuse them, so a battery's thresholds
//! are the product's published guarantees.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fieldcalc::{
    compatibility_residual, mollify_pairing, roundtrip_error, VectorField,
};
use crate::geometry::{build_grid, Alignment, ConvexDomain};
use crate::interval::{random_density, PiecewiseConstant};
use crate::lipcalc::ScalarField;

/// One checked statement: what was asserted, whether it held, and the
/// measured number behind the verdict.
#[derive(Debug, Clone)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Assertion {
    fn maximum(name: &str, measured: f64, limit: f64) -> Self {
        Assertion {
            name: name.to_string(),
            passed: measured <= limit,
            detail: format!("measured {measured:.3e}, limit {limit:.3e}"),
        }
    }

    fn minimum(name: &str, measured: f64, floor: f64) -> Self {
        Assertion {
            name: name.to_string(),
            passed: measured >= floor,
            detail: format!("measured {measured:.6}, floor {floor:.6}"),
        }
    }
}

/// The outcome of one battery run.
#[derive(Debug, Clone)]
pub struct BatteryReport {
    pub battery: String,
    pub assertions: Vec<Assertion>,
}

impl BatteryReport {
    pub fn all_passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    /// One line per assertion, `pass`/`FAIL` first so failures stand out.
    pub fn render(&self) -> String {
        let mut s = format!("battery {}\n", self.battery);
        for a in &self.assertions {
            let verdict = if a.passed { "pass" } else { "FAIL" };
            s.push_str(&format!("{verdict}  {} ({})\n", a.name, a.detail));
        }
        s
    }
}

/// Shared knobs: quadrature nodes `m`, finite-difference `step`, probe
/// count, and the RNG seed that fixes every random draw.
#[derive(Debug, Clone)]
pub struct BatterySettings {
    pub m: usize,
    pub step: f64,
    pub probes: usize,
    pub seed: u64,
}

impl Default for BatterySettings {
    fn default() -> Self {
        BatterySettings { m: 256, step: 1e-4, probes: 1000, seed: 7 }
    }
}

pub fn run_battery(name: &str, settings: &BatterySettings) -> Result<BatteryReport> {
    match name {
        "roundtrip" => Ok(roundtrip_battery(settings)),
        "compat" => Ok(compat_battery(settings)),
        "mollify" => mollify_battery(),
        "isometry1d" => Ok(isometry1d_battery(settings)),
        _ => Err(Error::invalid(format!(
            "unknown battery {name:?} (expected roundtrip, compat, mollify, or isometry1d)"
        ))),
    }
}

fn unit_box2() -> ConvexDomain {
    ConvexDomain::make_box(vec![-1.0, -1.0], vec![1.0, 1.0]).expect("static domain")
}

/// Integrate-then-differentiate identity on planar test functions: the
/// base-point integral of the gradient must reproduce `f - f(0)` at every
/// probe.
pub fn roundtrip_battery(s: &BatterySettings) -> BatteryReport {
    let dom = unit_box2();
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let affine = ScalarField::from_fn(2, |y| 1.5 * y[0] - 0.25 * y[1]);
    let quadratic = ScalarField::from_fn(2, |y| 0.5 * (y[0] * y[0] + y[1] * y[1]) + y[0]);
    let euclid = ScalarField::from_fn(2, |y| y[0].hypot(y[1]));
    let mut assertions = Vec::new();
    for (name, f, tol) in [
        ("round trip, affine", &affine, 1e-12),
        ("round trip, quadratic", &quadratic, 1e-6),
        ("round trip, Euclidean norm", &euclid, 1e-3),
    ] {
        let err = roundtrip_error(f, &dom, s.step, s.m, s.probes, &mut rng);
        assertions.push(Assertion::maximum(name, err, tol));
    }
    BatteryReport { battery: "roundtrip".into(), assertions }
}

/// Compatibility discrimination: gradient fields pass the segment-increment
/// test everywhere; the rotation field fails it loudly on the canonical
/// pair.
pub fn compat_battery(s: &BatterySettings) -> BatteryReport {
    let dom = unit_box2();
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let gradients: Vec<(&str, VectorField)> = vec![
        ("constant gradient", VectorField::from_fn(2, |_| vec![0.75, -0.5])),
        ("linear gradient", VectorField::from_fn(2, |y| vec![y[0], y[1]])),
        (
            "smooth gradient",
            VectorField::from_fn(2, |y| vec![y[1].cos(), -y[0] * y[1].sin() + 2.0 * y[1]]),
        ),
    ];
    let mut assertions = Vec::new();
    for (name, g) in &gradients {
        let mut worst = 0.0_f64;
        for _ in 0..s.probes.clamp(1, 200) {
            let x = dom.sample(&mut rng);
            let y = dom.sample(&mut rng);
            worst = worst.max(compatibility_residual(g, &x, &y, s.m));
        }
        assertions.push(Assertion::maximum(
            &format!("compatible: {name}"),
            worst,
            1e-4,
        ));
    }
    let rotation = VectorField::from_fn(2, |p| vec![-p[1], p[0]]);
    let r = compatibility_residual(&rotation, &[1.0, 0.0], &[0.0, 1.0], s.m);
    assertions.push(Assertion::minimum(
        "incompatible: rotation field on the canonical pair",
        r,
        0.5,
    ));
    BatteryReport { battery: "compat".into(), assertions }
}

/// Pairing convergence under mollification: for `f(y) = |y|` against the
/// indicator field of `(0, 1)`, the smoothed-gradient pairing approaches 1
/// as the kernel width shrinks toward the grid spacing.
pub fn mollify_battery() -> Result<BatteryReport> {
    let dom = ConvexDomain::make_box(vec![-2.0], vec![2.0])?;
    let h = 1.0 / 2048.0;
    let grid = build_grid(&dom, h, Alignment::Offset)?;
    let field: Vec<Vec<f64>> = grid
        .centers
        .iter()
        .map(|c| vec![if c[0] > 0.0 && c[0] < 1.0 { 1.0 } else { 0.0 }])
        .collect();
    let abs = ScalarField::from_fn(1, |y| y[0].abs());
    let affine = ScalarField::from_fn(1, |y| 0.5 * y[0]);
    let zero = ScalarField::from_fn(1, |_| 0.0);
    let eps_list = [32.0 * h, 16.0 * h, 8.0 * h, 4.0 * h, 2.0 * h];

    let mut assertions = Vec::new();
    let mut prev = f64::INFINITY;
    let mut monotone = true;
    let mut last_err = f64::INFINITY;
    for &eps in &eps_list {
        let p = mollify_pairing(&abs, &grid, &field, eps)?;
        last_err = (p - 1.0).abs();
        monotone &= last_err <= prev + 1e-12;
        prev = last_err;
    }
    assertions.push(Assertion {
        name: "pairing of |y| against the unit-interval field approaches 1".into(),
        passed: monotone && last_err <= 1e-3,
        detail: format!("final error {last_err:.3e} (limit 1e-3), errors non-increasing: {monotone}"),
    });

    let base = mollify_pairing(&affine, &grid, &field, eps_list[0])?;
    let mut spread = 0.0_f64;
    for &eps in &eps_list[1..] {
        spread = spread.max((mollify_pairing(&affine, &grid, &field, eps)? - base).abs());
    }
    assertions.push(Assertion::maximum(
        "affine pairing is independent of the kernel width",
        spread,
        1e-12,
    ));

    let z = mollify_pairing(&zero, &grid, &field, eps_list[2])?.abs();
    assertions.push(Assertion::maximum("zero function pairs to zero", z, 1e-15));
    Ok(BatteryReport { battery: "mollify".into(), assertions })
}

/// Exact piecewise arithmetic on an interval: integrating a step density
/// from the base point gives a Lipschitz function of the same norm, and
/// differentiating recovers the density.
pub fn isometry1d_battery(s: &BatterySettings) -> BatteryReport {
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut worst_norm = 0.0_f64;
    let mut worst_inverse = 0.0_f64;
    for _ in 0..100 {
        let g = random_density(&mut rng, 10);
        let t = g.integrate_from_zero();
        worst_norm = worst_norm.max((t.lipschitz_constant() - g.sup_norm()).abs());
        worst_inverse = worst_inverse.max(t.derivative().sup_distance(&g));
    }
    // a designed example on (-2, 2): the indicator-style step with values
    // 1 on (0, 1) and -1 elsewhere integrates to a zigzag of slope 1
    let step = PiecewiseConstant::new(-2.0, 2.0, vec![0.0, 1.0], vec![-1.0, 1.0, -1.0])
        .expect("static density");
    let t = step.integrate_from_zero();
    let zigzag = (t.lipschitz_constant() - 1.0).abs();

    let _ = s; // the battery is exact; probe counts do not apply
    BatteryReport {
        battery: "isometry1d".into(),
        assertions: vec![
            Assertion::maximum(
                "norm preserved: Lipschitz constant of the integral equals the sup norm",
                worst_norm,
                1e-12,
            ),
            Assertion::maximum(
                "inverse: differentiating the integral recovers the density",
                worst_inverse,
                1e-12,
            ),
            Assertion::maximum("step density on (0,1) integrates to norm 1", zigzag, 1e-12),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_named_batteries_pass() {
        let s = BatterySettings::default();
        for name in ["roundtrip", "compat", "mollify", "isometry1d"] {
            let report = run_battery(name, &s).unwrap();
            assert!(
                report.all_passed(),
                "{name} failed:\n{}",
                report.render()
            );
        }
    }

    #[test]
    fn unknown_battery_is_rejected() {
        assert!(run_battery("nope", &BatterySettings::default()).is_err());
    }

    #[test]
    fn reports_render_one_line_per_assertion() {
        let report = isometry1d_battery(&BatterySettings::default());
        let text = report.render();
        assert_eq!(text.lines().count(), 1 + report.assertions.len());
        assert!(text.lines().skip(1).all(|l| l.starts_with("pass") || l.starts_with("FAIL")));
    }

    #[test]
    fn failed_assertions_are_visible() {
        let mut report = isometry1d_battery(&BatterySettings::default());
        report.assertions[0].passed = false;
        assert!(!report.all_passed());
        assert!(report.render().contains("FAIL"));
    }
}
