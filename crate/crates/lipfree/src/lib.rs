//! Lipschitz function spaces and Lipschitz-free norms over open convex
//! domains, computationally.
//!
//! The crate revolves around a chain of identifications: scalar Lipschitz
//! functions vanishing at 0 correspond to bounded vector fields through
//! segment integration (and back through almost-everywhere gradients), and
//! the free-space norm of a finite molecule can be computed either as a
//! Kantorovich-Rubinstein linear program or as a minimal-flux (Beckmann)
//! flow problem on a grid. Each module realizes one layer:
//!
//! - [`geometry`]: domains, norms and their duals, Cartesian grids;
//! - [`interval`]: exact piecewise calculus on an interval (the 1D picture);
//! - [`lipcalc`]: Lipschitz constants, McShane extension, essential bounds;
//! - [`fieldcalc`]: segment integrals, gradients, compatibility, mollifiers;
//! - [`freenorm`]: molecules and the Kantorovich-Rubinstein dual LP;
//! - [`beckmann`]: grid flow problems with divergence constraints;
//! - [`lp_core`]: the in-crate simplex and network-simplex kernels;
//! - [`problem`], [`battery`], [`cli`]: the problem-file format, the check
//!   batteries, and the thin command-line front end.

pub mod battery;
pub mod beckmann;
pub mod cli;
pub mod error;
pub mod fieldcalc;
pub mod freenorm;
pub mod geometry;
pub mod interval;
pub mod lipcalc;
pub mod lp_core;
pub mod problem;

pub use error::{Error, Result};
