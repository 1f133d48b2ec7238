//! Axisymmetric surfaces with prescribed mean curvature.
//!
//! A graph `u(r)` of revolution on the disk `0 <= r <= c` whose mean
//! curvature equals a prescribed profile `f` satisfies
//!
//! ```text
//! (r u' / sqrt(1 + u'^2))' = r f
//! ```
//!
//! with `u'(0) = 0` at the axis. This crate solves that equation (direct
//! quadrature for radial profiles, adaptive integration plus shooting
//! when `f` depends on the height or slope), builds the two comparison
//! circular arcs that sandwich the solution when `f` is admissible
//! (nonnegative at the axis, nondecreasing, convex), and certifies the
//! sandwich and the inequalities behind it a posteriori.
//!
//! Modules:
//!
//! * [`profiles`]: the curvature profile families and admissibility checks.
//! * [`solver`]: quadrature, adaptive initial-value, and shooting solvers.
//! * [`geometry`]: comparison arcs and volumes of revolution.
//! * [`verify`]: a-posteriori certification of bounds and inequalities.
//! * [`cli`]: the `meancurve` command-line tool.

pub mod cli;
pub mod error;
pub mod geometry;
pub mod profiles;
pub mod solver;
pub mod verify;

pub use error::Error;
pub use geometry::{lower_circle, upper_circle, volume_of_revolution_grid, ComparisonCircle};
pub use profiles::{AssumptionReport, Dependence, Profile, RadialTable};
pub use solver::{
    shoot_for_gamma, solve_ivp, solve_radial_quadrature, SolutionGrid, SolveMethod,
};
pub use verify::{
    counterexample_scan, default_tolerance, verify_curvature_monotone, verify_efe,
    verify_sandwich, BoundsReport, CounterexampleReport, CurvatureReport, EfeReport,
};
