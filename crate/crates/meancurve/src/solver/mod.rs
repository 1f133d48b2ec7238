//! Solvers for the radial prescribed-curvature initial-value problem.
//!
//! Writing `s = sin psi = u' / sqrt(1 + u'^2)` for the sine of the
//! inclination angle, the radial equation
//!
//! ```text
//! (1/r) (r u' / sqrt(1 + u'^2))' = f,      u(0) = u0,  u'(0) = 0,
//! ```
//!
//! is `(r s)' = r f`, which integrates once to
//!
//! ```text
//! s(r) = (1/r) * integral_0^r t f(t) dt,
//! ```
//!
//! and differentiating the product form gives the curvature identity
//! `s' = f - s/r`, whose right side is the planar curvature `kappa` of the
//! profile curve. Radial-only profiles are therefore solved by cumulative
//! quadrature alone ([`solve_radial_quadrature`]): one pass for `s`, one
//! pass for `u` from `u' = s / sqrt(1 - s^2)`. Profiles that couple `f`
//! to `u` or `u'` are integrated as a first-order system in `(u, s)` by an
//! adaptive embedded Runge-Kutta pair ([`solve_ivp`]) started just off the
//! coordinate singularity at `r = 0` with the series
//! `u = u0 + f(0) r^2 / 4`, `s = f(0) r / 2`. A prescribed contact angle
//! is met by shooting on `u0` ([`shoot_for_gamma`]).
//!
//! All solvers stop early when the profile forces `|s|` against 1 (the
//! graph develops a vertical tangent); the grid is then truncated at the
//! last admissible node and flagged, never extrapolated.

mod ivp;
mod quadrature;
mod shooting;

pub use ivp::solve_ivp;
pub use quadrature::solve_radial_quadrature;
pub use shooting::shoot_for_gamma;

use crate::error::Error;

/// Truncation guard: integration stops once `1 - |sin psi| <= VERTICAL_GUARD`.
pub const VERTICAL_GUARD: f64 = 1e-9;

/// Smallest accepted interval count for the quadrature solver.
pub const MIN_INTERVALS: usize = 16;

/// Accepted tolerance range for the adaptive integrator.
pub const IVP_TOL_RANGE: (f64, f64) = (1e-12, 1e-4);

/// Which solver produced a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolveMethod {
    /// Cumulative interpolatory quadrature with `n` uniform intervals.
    Quadrature { n: usize },
    /// Adaptive embedded Runge-Kutta pair at the given tolerance.
    AdaptiveIvp { tol: f64 },
    /// Reconstructed from an emitted solution CSV.
    Parsed,
}

impl SolveMethod {
    pub fn name(&self) -> &'static str {
        match self {
            SolveMethod::Quadrature { .. } => "quadrature",
            SolveMethod::AdaptiveIvp { .. } => "adaptive-ivp",
            SolveMethod::Parsed => "parsed",
        }
    }
}

/// A solved radial profile on `[0, c_eff]`.
///
/// All per-node vectors have equal length `>= 3`; `nodes[0] = 0`, the nodes
/// are strictly increasing, and at every node
/// `sin_psi = du / sqrt(1 + du^2)` and `kappa = f - sin_psi / r` (with the
/// axis limit `kappa[0] = f(0) / 2`).
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionGrid {
    /// Radial nodes, first node 0.
    pub nodes: Vec<f64>,
    /// Height `u` at the nodes.
    pub u: Vec<f64>,
    /// Slope `u'` at the nodes.
    pub du: Vec<f64>,
    /// `sin psi = du / sqrt(1 + du^2)` at the nodes.
    pub sin_psi: Vec<f64>,
    /// Planar curvature `kappa = (sin psi)'` at the nodes.
    pub kappa: Vec<f64>,
    /// Height at the axis.
    pub u0: f64,
    /// Outer radius the caller asked for.
    pub c_requested: f64,
    /// Outer radius actually reached (`< c_requested` when truncated).
    pub c_eff: f64,
    /// Contact angle `arctan(du(c_eff))`; `pi/2` when truncated.
    pub gamma: f64,
    /// True when the solve stopped early at the vertical-tangent guard.
    pub truncated_vertical: bool,
    /// True when `sin psi` went negative somewhere (the profile pulled the
    /// surface downward); not an error, but the circle bounds need not hold.
    pub negative_sin_psi: bool,
    pub method: SolveMethod,
}

impl SolutionGrid {
    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Height at the outer radius.
    pub fn u_end(&self) -> f64 {
        *self.u.last().expect("grid has nodes")
    }

    /// Slope at the outer radius.
    pub fn du_end(&self) -> f64 {
        *self.du.last().expect("grid has nodes")
    }

    /// Cubic Hermite interpolation of `(u, du, sin_psi)` at `r in [0, c_eff]`.
    ///
    /// Uses the stored node slopes, so the interpolant is C^1 and fourth
    /// order accurate between nodes; `sin_psi` is derived from the
    /// interpolated slope, preserving the `du`/`sin_psi` identity off-node.
    pub fn sample(&self, r: f64) -> Result<(f64, f64, f64), Error> {
        let slack = 1e-12 * (1.0 + self.c_eff);
        if !r.is_finite() || r < -slack || r > self.c_eff + slack {
            return Err(Error::InvalidArgument(format!(
                "sample radius {r} outside the grid range [0, {}]",
                self.c_eff
            )));
        }
        let r = r.clamp(0.0, self.c_eff);
        let i = match self.nodes.partition_point(|&t| t <= r) {
            0 => 0,
            j if j >= self.nodes.len() => self.nodes.len() - 2,
            j => j - 1,
        };
        let (r0, r1) = (self.nodes[i], self.nodes[i + 1]);
        let h = r1 - r0;
        let t = (r - r0) / h;
        let (u0, u1, d0, d1) = (self.u[i], self.u[i + 1], self.du[i], self.du[i + 1]);
        let t2 = t * t;
        let t3 = t2 * t;
        let u = u0 * (2.0 * t3 - 3.0 * t2 + 1.0)
            + h * d0 * (t3 - 2.0 * t2 + t)
            + u1 * (-2.0 * t3 + 3.0 * t2)
            + h * d1 * (t3 - t2);
        let du = u0 * (6.0 * t2 - 6.0 * t) / h
            + d0 * (3.0 * t2 - 4.0 * t + 1.0)
            + u1 * (6.0 * t - 6.0 * t2) / h
            + d1 * (3.0 * t2 - 2.0 * t);
        let s = du / (1.0 + du * du).sqrt();
        Ok((u, du, s))
    }
}

/// Maps `sin psi` to the slope `u' = s / sqrt(1 - s^2)`.
///
/// Callers guarantee `|s| <= 1 - VERTICAL_GUARD`, which keeps the result
/// finite (about 2.2e4 at the guard).
pub(crate) fn slope_from_sin(s: f64) -> f64 {
    s / (1.0 - s * s).sqrt()
}

pub(crate) fn check_window(c: f64) -> Result<(), Error> {
    if !c.is_finite() || c <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "outer radius c must be positive and finite, got {c}"
        )));
    }
    Ok(())
}
