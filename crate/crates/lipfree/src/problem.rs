//! Problem files: a fixed JSON schema describing a domain, a norm, a
//! molecule, grid settings, point data, and a check battery. Every section
//! is optional — each subcommand demands only what it uses — and parsing
//! then serializing then parsing again yields an identical spec, so golden
//! files stay faithful.
//!
//! Schema (all sections optional, unknown sections rejected):
//!
//! ```json
//! {
//!   "domain":   {"shape": "box", "lo": [-2.0, -2.0], "hi": [2.0, 2.0]},
//!   "norm":     {"kind": "l2", "facets": 32},
//!   "molecule": [{"point": [1.0, 0.0], "weight": 1.0}],
//!   "grid":     {"h": 0.25, "alignment": "centered",
//!                "h_list": [0.25, 0.125], "k_list": [8, 16]},
//!   "data":     [{"point": [0.0, 0.0], "value": 0.0}],
//!   "battery":  {"name": "roundtrip", "m": 256, "step": 1e-4,
//!                "probes": 1000, "seed": 7}
//! }
//! ```
//!
//! `domain.shape` is `box` (`lo`/`hi`), `ball` (`center`/`radius`), or
//! `polytope` (`normals`/`offsets`); `norm.kind` is `l1`, `l2` (optional
//! `facets` for the planar solver), `linf`, or `polyhedral` (`directions`).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freenorm::Molecule;
use crate::geometry::{Alignment, ConvexDomain, NormSpec};
use crate::lipcalc::PointData;

/// A parsed problem file. Sections are kept in file form (plain data) and
/// converted to module inputs on demand by the accessor methods, so a file
/// mentioning only what one subcommand needs stays valid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<NormSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub molecule: Option<Vec<AtomEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<Vec<DataEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub battery: Option<BatterySection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum DomainSection {
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    Polytope { normals: Vec<Vec<f64>>, offsets: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NormSection {
    L1,
    L2 {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        facets: Option<usize>,
    },
    Linf,
    Polyhedral { directions: Vec<Vec<f64>> },
}

/// One atom of a molecule: a point of the domain and its weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomEntry {
    pub point: Vec<f64>,
    pub weight: f64,
}

/// One sampled function value, the file form of [`PointData`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataEntry {
    pub point: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alignment: Option<AlignmentName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_list: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_list: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlignmentName {
    Offset,
    Centered,
}

impl From<AlignmentName> for Alignment {
    fn from(a: AlignmentName) -> Alignment {
        match a {
            AlignmentName::Offset => Alignment::Offset,
            AlignmentName::Centered => Alignment::Centered,
        }
    }
}

/// Battery selection plus its numeric settings; missing settings fall back
/// to the battery defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatterySection {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ProblemSpec {
    fn missing(section: &str) -> Error {
        Error::invalid(format!("problem file has no {section} section"))
    }

    pub fn domain(&self) -> Result<ConvexDomain> {
        match self.domain.as_ref().ok_or_else(|| Self::missing("domain"))? {
            DomainSection::Box { lo, hi } => ConvexDomain::make_box(lo.clone(), hi.clone()),
            DomainSection::Ball { center, radius } => {
                ConvexDomain::make_ball(center.clone(), *radius)
            }
            DomainSection::Polytope { normals, offsets } => {
                ConvexDomain::make_polytope(normals.clone(), offsets.clone())
            }
        }
    }

    pub fn norm(&self) -> Result<NormSpec> {
        match self.norm.as_ref().ok_or_else(|| Self::missing("norm"))? {
            NormSection::L1 => Ok(NormSpec::L1),
            NormSection::L2 { .. } => Ok(NormSpec::L2),
            NormSection::Linf => Ok(NormSpec::Linf),
            NormSection::Polyhedral { directions } => NormSpec::polyhedral(directions.clone()),
        }
    }

    /// Facet count requested by the norm section, if any (`l2` only).
    pub fn facets(&self) -> Option<usize> {
        match self.norm.as_ref() {
            Some(NormSection::L2 { facets }) => *facets,
            _ => None,
        }
    }

    pub fn molecule(&self) -> Result<Molecule> {
        let entries = self.molecule.as_ref().ok_or_else(|| Self::missing("molecule"))?;
        let atoms = entries.iter().map(|e| e.point.clone()).collect();
        let weights = entries.iter().map(|e| e.weight).collect();
        Molecule::new(atoms, weights)
    }

    pub fn point_data(&self) -> Result<PointData> {
        let entries = self.data.as_ref().ok_or_else(|| Self::missing("data"))?;
        let points = entries.iter().map(|e| e.point.clone()).collect();
        let values = entries.iter().map(|e| e.value).collect();
        PointData::new(points, values)
    }

    /// Grid alignment, defaulting to `Offset` when unspecified.
    pub fn alignment(&self) -> Alignment {
        self.grid
            .as_ref()
            .and_then(|g| g.alignment)
            .map(Alignment::from)
            .unwrap_or(Alignment::Offset)
    }

    pub fn grid_h(&self) -> Result<f64> {
        self.grid
            .as_ref()
            .and_then(|g| g.h)
            .ok_or_else(|| Self::missing("grid.h"))
    }

    pub fn h_list(&self) -> Vec<f64> {
        self.grid.as_ref().and_then(|g| g.h_list.clone()).unwrap_or_default()
    }

    pub fn k_list(&self) -> Vec<usize> {
        self.grid.as_ref().and_then(|g| g.k_list.clone()).unwrap_or_default()
    }
}

/// serde_json repeats the position inside its message; keep only the prose.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

pub fn parse_problem(text: &str) -> Result<ProblemSpec> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })
}

pub fn read_problem(path: &Path) -> Result<ProblemSpec> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_problem(&text)
}

pub fn to_json_string(spec: &ProblemSpec) -> Result<String> {
    serde_json::to_string_pretty(spec)
        .map_err(|e| Error::invalid(format!("cannot serialize problem: {e}")))
}
