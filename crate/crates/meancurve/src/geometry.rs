//! Comparison circles and solids of revolution.
//!
//! For a solved grid with positive contact slope `du(c) > 0` the upper
//! comparison arc is the circle through `(0, u0)` that meets the contact
//! slope at the outer radius:
//!
//! ```text
//! R = c sqrt(1 + du(c)^2) / du(c),      y(r) = R + u0 - sqrt(R^2 - r^2),
//! ```
//!
//! so `y(0) = u0`, `y'(c) = du(c)`, and the arc has `sin psi = r / R` and
//! constant curvature `1/R`. The lower arc is the same circle shifted down
//! to match the solution height at the outer radius:
//! `w(r) = y(r) - y(c) + u(c)`. Under the admissibility clauses the
//! solution is sandwiched between the two arcs, which also orders the
//! volumes of revolution `V(w) <= V(u) <= V(y)`.
//!
//! Volumes are signed volumes between the graph and the plane `z = 0`:
//! `V = integral 2 pi r z(r) dr`. Circles use the closed form
//! `pi r^2 z_c + (2 pi / 3) (R^2 - r^2)^(3/2)` evaluated between the
//! limits; grids resample through the C^1 Hermite interpolant onto a
//! uniform mesh and apply composite Simpson pairs.

use crate::error::Error;
use crate::solver::SolutionGrid;

/// Contact slopes at or below this are degenerate: the comparison circle
/// becomes the horizontal line `z = u0`.
pub const SLOPE_TOL: f64 = 1e-12;

/// Relative slack for radius-range checks.
const RANGE_SLACK: f64 = 1e-12;

/// Intervals used when a grid volume is resampled for quadrature.
const VOLUME_INTERVALS: usize = 2000;

/// Which side of the sandwich an arc bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircleKind {
    /// Touches the solution at the axis and bounds it from above.
    Upper,
    /// Touches the solution at the outer radius and bounds it from below.
    Lower,
}

/// A comparison arc `z(r) = center_height - sqrt(radius^2 - r^2)` on
/// `[0, r_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonCircle {
    pub kind: CircleKind,
    pub radius: f64,
    /// Height of the circle center above the plane `z = 0`.
    pub center_height: f64,
    /// Domain end; equals the grid's `c_eff` by construction.
    pub r_max: f64,
}

impl ComparisonCircle {
    /// Height, slope and `sin psi` of the arc at `r in [0, r_max]`.
    pub fn eval(&self, r: f64) -> Result<(f64, f64, f64), Error> {
        let slack = RANGE_SLACK * (1.0 + self.r_max);
        if !r.is_finite() || r < -slack || r > self.r_max + slack {
            return Err(Error::CircleRange {
                r,
                r_max: self.r_max,
            });
        }
        let r = r.clamp(0.0, self.r_max);
        let root = (self.radius * self.radius - r * r).sqrt();
        Ok((self.center_height - root, r / root, r / self.radius))
    }

    /// Signed volume of revolution of the arc between `r_lo` and `r_hi`,
    /// by the closed form.
    pub fn volume_of_revolution(&self, r_lo: f64, r_hi: f64) -> Result<f64, Error> {
        check_volume_range(r_lo, r_hi, self.r_max)?;
        let anti = |r: f64| {
            let rr = self.radius * self.radius - r * r;
            std::f64::consts::PI * r * r * self.center_height
                + 2.0 * std::f64::consts::PI / 3.0 * rr.powf(1.5)
        };
        Ok(anti(r_hi) - anti(r_lo))
    }
}

fn check_volume_range(r_lo: f64, r_hi: f64, r_max: f64) -> Result<(), Error> {
    let slack = RANGE_SLACK * (1.0 + r_max);
    if !r_lo.is_finite() || !r_hi.is_finite() || r_lo < -slack || r_hi > r_max + slack {
        return Err(Error::InvalidArgument(format!(
            "volume limits [{r_lo}, {r_hi}] outside the domain [0, {r_max}]"
        )));
    }
    if r_lo >= r_hi {
        return Err(Error::InvalidArgument(format!(
            "volume limits must satisfy r_lo < r_hi, got [{r_lo}, {r_hi}]"
        )));
    }
    Ok(())
}

/// Builds the upper comparison arc of a grid.
///
/// Fails with [`Error::DegenerateSlope`] when the contact slope is not
/// positive; the bound then degenerates to the horizontal line `z = u0`
/// (carried in the error).
pub fn upper_circle(grid: &SolutionGrid) -> Result<ComparisonCircle, Error> {
    let du_c = grid.du_end();
    if du_c <= SLOPE_TOL {
        return Err(Error::DegenerateSlope {
            slope: du_c,
            height: grid.u0,
        });
    }
    let radius = grid.c_eff * (1.0 + du_c * du_c).sqrt() / du_c;
    Ok(ComparisonCircle {
        kind: CircleKind::Upper,
        radius,
        center_height: radius + grid.u0,
        r_max: grid.c_eff,
    })
}

/// Builds the lower comparison arc: the upper arc shifted down to match
/// the solution height at the outer radius, so `w(c_eff) = u(c_eff)`.
pub fn lower_circle(grid: &SolutionGrid, upper: &ComparisonCircle) -> Result<ComparisonCircle, Error> {
    if upper.kind != CircleKind::Upper {
        return Err(Error::GridCircleMismatch(
            "lower_circle needs the grid's upper arc".into(),
        ));
    }
    check_circle_is_from_grid(grid, upper)?;
    let (y_c, _, _) = upper.eval(grid.c_eff)?;
    Ok(ComparisonCircle {
        kind: CircleKind::Lower,
        radius: upper.radius,
        center_height: upper.center_height - y_c + grid.u_end(),
        r_max: upper.r_max,
    })
}

/// Verifies construction identities tying an upper arc to a grid: matching
/// domain end, radius recomputed from the contact slope, and center height
/// `R + u0`. Rejects arcs built from a different grid.
pub(crate) fn check_circle_is_from_grid(
    grid: &SolutionGrid,
    upper: &ComparisonCircle,
) -> Result<(), Error> {
    let rel = |x: f64, scale: f64| x.abs() / (1.0 + scale.abs());
    if rel(upper.r_max - grid.c_eff, grid.c_eff) > 1e-9 {
        return Err(Error::GridCircleMismatch(format!(
            "arc ends at r = {}, grid at c_eff = {}",
            upper.r_max, grid.c_eff
        )));
    }
    let du_c = grid.du_end();
    if du_c <= SLOPE_TOL {
        return Err(Error::DegenerateSlope {
            slope: du_c,
            height: grid.u0,
        });
    }
    let radius = grid.c_eff * (1.0 + du_c * du_c).sqrt() / du_c;
    if rel(upper.radius - radius, radius) > 1e-9 {
        return Err(Error::GridCircleMismatch(format!(
            "arc radius {} but the grid's contact slope gives {radius}",
            upper.radius
        )));
    }
    if rel(upper.center_height - (upper.radius + grid.u0), upper.center_height) > 1e-9 {
        return Err(Error::GridCircleMismatch(format!(
            "arc center height {} but R + u0 = {}",
            upper.center_height,
            upper.radius + grid.u0
        )));
    }
    Ok(())
}

/// Signed volume of revolution of a solved grid between `r_lo` and `r_hi`:
/// Hermite-resampled Simpson quadrature of `2 pi r u(r)`.
pub fn volume_of_revolution_grid(
    grid: &SolutionGrid,
    r_lo: f64,
    r_hi: f64,
) -> Result<f64, Error> {
    check_volume_range(r_lo, r_hi, grid.c_eff)?;
    let r_lo = r_lo.max(0.0);
    let r_hi = r_hi.min(grid.c_eff);
    let n = VOLUME_INTERVALS;
    let h = (r_hi - r_lo) / n as f64;
    let mut acc = 0.0;
    let integrand = |r: f64| -> Result<f64, Error> {
        let (u, _, _) = grid.sample(r)?;
        Ok(2.0 * std::f64::consts::PI * r * u)
    };
    let mut g0 = integrand(r_lo)?;
    for i in (0..n).step_by(2) {
        let g1 = integrand(r_lo + (i + 1) as f64 * h)?;
        let g2 = if i + 2 == n {
            integrand(r_hi)?
        } else {
            integrand(r_lo + (i + 2) as f64 * h)?
        };
        acc += h * (g0 + 4.0 * g1 + g2) / 3.0;
        g0 = g2;
    }
    Ok(acc)
}
