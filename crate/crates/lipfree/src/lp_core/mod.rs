//! Self-contained linear programming kernels: a dense two-phase simplex for
//! general small LPs (with duals) and a network simplex for min-cost flow on
//! grids. No external solver dependencies; everything is deterministic.

pub mod network;
pub mod simplex;

pub use network::{mcf_solve, FlowArc, FlowNetwork, McfSolution, McfStatus};
pub use simplex::{lp_solve, LpProblem, LpRow, LpSolution, LpStatus, Rel};
