//! Subcommand logic for the `lipfree` binary: resolve a parsed problem
//! file plus command-line overrides into solver calls, and render the
//! stdout payloads. Kept separate from argument parsing so the behavior is
//! testable in-process.
//!
//! Exit-code contract (enforced by the binary via [`Error::exit_code`]):
//! 0 success, 1 failed check or other error, 2 malformed problem file,
//! 3 infeasible/disconnected/unresolved instance.

use std::str::FromStr;

use crate::battery::{run_battery, BatterySettings};
use crate::beckmann::{refine_study, solve_molecule, study_csv_string, BeckmannOptions};
use crate::error::{Error, Result};
use crate::freenorm::kr_norm;
use crate::geometry::build_grid;
use crate::problem::ProblemSpec;

/// How `norm` computes its value: the point-mass dual LP, the grid flow
/// solver, or both (reporting their gap).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Dual,
    Beckmann,
    Both,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        match s {
            "dual" => Ok(Method::Dual),
            "beckmann" => Ok(Method::Beckmann),
            "both" => Ok(Method::Both),
            other => Err(Error::invalid(format!(
                "unknown method {other:?} (expected dual, beckmann, or both)"
            ))),
        }
    }
}

/// Command-line flag overrides; `None` defers to the problem file (and
/// then to built-in defaults).
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub grid_h: Option<f64>,
    pub facets: Option<usize>,
    pub seed: Option<u64>,
    pub battery: Option<String>,
}

fn flow_options(spec: &ProblemSpec, ov: &Overrides) -> BeckmannOptions {
    let mut opts = BeckmannOptions::default();
    if let Some(k) = ov.facets.or_else(|| spec.facets()) {
        opts.facets = k;
    }
    opts
}

fn solve_flow(spec: &ProblemSpec, ov: &Overrides) -> Result<crate::beckmann::BeckmannSolution> {
    let domain = spec.domain()?;
    let mol = spec.molecule()?;
    let norm = spec.norm()?;
    let h = match ov.grid_h {
        Some(h) => h,
        None => spec.grid_h()?,
    };
    let grid = build_grid(&domain, h, spec.alignment())?;
    solve_molecule(&grid, &mol, &norm, &flow_options(spec, ov))
}

/// The `norm` payload: a bare `.9f` value for a single method, labeled
/// `dual`/`beckmann`/`gap` lines for `both`.
pub fn run_norm(spec: &ProblemSpec, method: Method, ov: &Overrides) -> Result<String> {
    match method {
        Method::Dual => {
            let (value, _) = kr_norm(&spec.molecule()?, &spec.norm()?)?;
            Ok(format!("{value:.9}\n"))
        }
        Method::Beckmann => {
            let sol = solve_flow(spec, ov)?;
            Ok(format!("{:.9}\n", sol.value))
        }
        Method::Both => {
            let (dual, _) = kr_norm(&spec.molecule()?, &spec.norm()?)?;
            let sol = solve_flow(spec, ov)?;
            Ok(format!(
                "dual {dual:.9}\nbeckmann {:.9}\ngap {:.9}\n",
                sol.value,
                sol.value - dual
            ))
        }
    }
}

/// The `converge` payload: the refinement-study CSV (`h,k,primal,dual,gap,
/// seconds` header always present, one row per grid/facet setting).
pub fn run_converge(spec: &ProblemSpec, ov: &Overrides) -> Result<String> {
    let domain = spec.domain()?;
    let mol = spec.molecule()?;
    let norm = spec.norm()?;
    let rows = refine_study(
        &domain,
        &mol,
        &norm,
        &spec.h_list(),
        &spec.k_list(),
        spec.alignment(),
        &flow_options(spec, ov),
    )?;
    Ok(study_csv_string(&rows))
}

/// The `check` payload plus the overall verdict (false exits 1).
pub fn run_check(spec: &ProblemSpec, ov: &Overrides) -> Result<(String, bool)> {
    let section = spec.battery.as_ref();
    let name = ov
        .battery
        .clone()
        .or_else(|| section.map(|b| b.name.clone()))
        .ok_or_else(|| {
            Error::invalid("no battery selected: pass --battery or add a battery section")
        })?;

    let mut settings = BatterySettings::default();
    if let Some(b) = section {
        if let Some(m) = b.m {
            settings.m = m;
        }
        if let Some(s) = b.step {
            settings.step = s;
        }
        if let Some(p) = b.probes {
            settings.probes = p;
        }
        if let Some(s) = b.seed {
            settings.seed = s;
        }
    }
    if let Some(s) = ov.seed {
        settings.seed = s;
    }

    let randomized = matches!(name.as_str(), "roundtrip" | "compat" | "isometry1d");
    let seeded = ov.seed.is_some() || section.and_then(|b| b.seed).is_some();
    if randomized && !seeded {
        return Err(Error::invalid(format!(
            "battery {name:?} is randomized: provide a seed (--seed or battery.seed)"
        )));
    }

    let report = run_battery(&name, &settings)?;
    Ok((report.render(), report.all_passed()))
}
