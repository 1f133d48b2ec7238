//! Adaptive initial-value integrator for general profiles.
//!
//! The system in `(u, s)` with `s = sin psi` is
//!
//! ```text
//! u' = s / sqrt(1 - s^2),        s' = f(r, u, u') - s / r,
//! ```
//!
//! integrated by the Dormand-Prince embedded 5(4) pair with standard
//! step control (RMS error norm weighted by `1 + |y|`, accepted against
//! `tol`, safety factor 0.9, step scale clamped to [0.2, 5]). The `s/r`
//! term is singular at the axis, so integration starts at
//! `r_start = 1e-4 * c` from the series `u = u0 + f0 r^2 / 4`,
//! `s = f0 r / 2` with `f0 = f(0, u0, 0)`; the `r = 0` node is prepended
//! exactly. The step size is capped at `c / 64` so the returned grid is
//! dense enough for the downstream difference-based diagnostics.

use super::{slope_from_sin, SolutionGrid, SolveMethod, IVP_TOL_RANGE, VERTICAL_GUARD};
use crate::error::Error;
use crate::profiles::Profile;

/// Relative offset of the series start from the axis.
const START_OFFSET: f64 = 1e-4;
/// Step cap as a fraction of the window, for grid density.
const MAX_STEP_FRACTION: f64 = 1.0 / 64.0;
/// Steps below `c * STEP_UNDERFLOW` abort as stiffness.
const STEP_UNDERFLOW: f64 = 1e-14;
const MAX_STEPS: usize = 1_000_000;
const SAFETY: f64 = 0.9;
const SCALE_MIN: f64 = 0.2;
const SCALE_MAX: f64 = 5.0;

/// Dormand-Prince 5(4) tableau. The last row of `A` is the fifth-order
/// weight vector, so the seventh stage sits at the new solution (FSAL).
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Error weights: fifth-order minus embedded fourth-order coefficients.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

type State = [f64; 2]; // (u, s)

/// Right-hand side; `Ok(None)` signals a stage drove `|s|` against 1,
/// which rejects the step instead of erroring.
fn rhs(p: &Profile, r: f64, y: State) -> Result<Option<State>, Error> {
    let s = y[1];
    if 1.0 - s * s <= 1e-18 {
        return Ok(None);
    }
    let du = slope_from_sin(s);
    let f = p.eval(r, y[0], du)?;
    Ok(Some([du, f - s / r]))
}

struct Attempt {
    y_new: State,
    /// FSAL stage: the derivative at `(r + h, y_new)`.
    k_last: State,
    err_norm: f64,
}

/// One embedded step from `(r, y)` with `k1` already evaluated there.
fn try_step(p: &Profile, r: f64, y: State, k1: State, h: f64) -> Result<Option<Attempt>, Error> {
    let mut k = [[0.0f64; 2]; 7];
    k[0] = k1;
    let mut y_new = y;
    for stage in 1..7 {
        let mut yi = y;
        for (j, kj) in k.iter().enumerate().take(stage) {
            let a = A[stage - 1][j];
            if a != 0.0 {
                yi[0] += h * a * kj[0];
                yi[1] += h * a * kj[1];
            }
        }
        match rhs(p, r + C[stage] * h, yi)? {
            Some(v) => k[stage] = v,
            None => return Ok(None),
        }
        if stage == 6 {
            y_new = yi;
        }
    }
    let mut err_norm = 0.0;
    for i in 0..2 {
        let mut e = 0.0;
        for (j, kj) in k.iter().enumerate() {
            e += E[j] * kj[i];
        }
        let w = 1.0 + y[i].abs().max(y_new[i].abs());
        let scaled = h * e / w;
        err_norm += scaled * scaled;
    }
    err_norm = (err_norm / 2.0).sqrt();
    Ok(Some(Attempt {
        y_new,
        k_last: k[6],
        err_norm,
    }))
}

/// Solves the radial problem for any profile on `[0, c]` with the adaptive
/// embedded pair at tolerance `tol` (within `[1e-12, 1e-4]`).
///
/// Truncates at the vertical-tangent guard like the quadrature solver,
/// bisecting the final step so the last node sits on the guard.
pub fn solve_ivp(p: &Profile, c: f64, u0: f64, tol: f64) -> Result<SolutionGrid, Error> {
    super::check_window(c)?;
    if !u0.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "axis height u0 must be finite, got {u0}"
        )));
    }
    if !(tol >= IVP_TOL_RANGE.0 && tol <= IVP_TOL_RANGE.1) {
        return Err(Error::InvalidArgument(format!(
            "tolerance {tol} outside [{}, {}]",
            IVP_TOL_RANGE.0, IVP_TOL_RANGE.1
        )));
    }

    let f0 = p.eval(0.0, u0, 0.0)?;
    let r_start = START_OFFSET * c;
    let mut r = r_start;
    let mut y: State = [u0 + f0 * r * r / 4.0, f0 * r / 2.0];

    let guard = 1.0 - VERTICAL_GUARD;
    if y[1].abs() > guard {
        return Err(Error::ImmediateTruncation { r, sin_psi: y[1] });
    }

    let mut grid = GridBuilder::new(p, u0, c, tol, f0);
    grid.push_axis();
    grid.push(r, y)?;

    let h_max = c * MAX_STEP_FRACTION;
    let mut h = (1e-3 * c).min(h_max).min(c - r);
    let mut k1 = match rhs(p, r, y)? {
        Some(v) => v,
        None => unreachable!("start state is inside the guard"),
    };
    let mut truncated = false;

    for _ in 0..MAX_STEPS {
        if r >= c - 1e-15 * c {
            break;
        }
        h = h.min(h_max).min(c - r);
        if h < STEP_UNDERFLOW * c {
            return Err(Error::StepUnderflow { r, step: h });
        }
        let attempt = match try_step(p, r, y, k1, h)? {
            Some(a) => a,
            None => {
                // A stage left the admissible band; retry shorter.
                h *= 0.5;
                continue;
            }
        };
        let quality = tol / attempt.err_norm.max(1e-300);
        if attempt.err_norm > tol {
            h *= (SAFETY * quality.powf(0.2)).clamp(SCALE_MIN, 1.0);
            continue;
        }
        if attempt.y_new[1].abs() > guard {
            // The surface turns vertical inside this step: land on the
            // guard, record the node, and stop.
            let (r_t, y_t) = locate_guard(p, r, y, k1, h, guard)?;
            if r_t > r {
                grid.push(r_t, y_t)?;
            }
            truncated = true;
            break;
        }
        r += h;
        y = attempt.y_new;
        k1 = attempt.k_last;
        grid.push(r, y)?;
        h *= (SAFETY * quality.powf(0.2)).clamp(SCALE_MIN, SCALE_MAX);
    }
    if !truncated && r < c - 1e-15 * c {
        return Err(Error::NoConvergence {
            iterations: MAX_STEPS,
        });
    }

    Ok(grid.finish(truncated))
}

/// Largest sub-step of `(0, h]` keeping `|s| <= guard`, by bisection on
/// single fifth-order steps from `(r, y)`.
fn locate_guard(
    p: &Profile,
    r: f64,
    y: State,
    k1: State,
    h: f64,
    guard: f64,
) -> Result<(f64, State), Error> {
    let mut lo = 0.0f64;
    let mut y_lo = y;
    let mut hi = h;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match try_step(p, r, y, k1, mid)? {
            Some(a) if a.y_new[1].abs() <= guard => {
                lo = mid;
                y_lo = a.y_new;
            }
            _ => hi = mid,
        }
    }
    Ok((r + lo, y_lo))
}

struct GridBuilder<'a> {
    p: &'a Profile,
    nodes: Vec<f64>,
    u: Vec<f64>,
    du: Vec<f64>,
    sin_psi: Vec<f64>,
    kappa: Vec<f64>,
    u0: f64,
    c: f64,
    tol: f64,
    f0: f64,
    negative: bool,
}

impl<'a> GridBuilder<'a> {
    fn new(p: &'a Profile, u0: f64, c: f64, tol: f64, f0: f64) -> Self {
        GridBuilder {
            p,
            nodes: Vec::new(),
            u: Vec::new(),
            du: Vec::new(),
            sin_psi: Vec::new(),
            kappa: Vec::new(),
            u0,
            c,
            tol,
            f0,
            negative: false,
        }
    }

    fn push_axis(&mut self) {
        self.nodes.push(0.0);
        self.u.push(self.u0);
        self.du.push(0.0);
        self.sin_psi.push(0.0);
        self.kappa.push(self.f0 / 2.0);
    }

    fn push(&mut self, r: f64, y: State) -> Result<(), Error> {
        let s = y[1];
        let du = slope_from_sin(s);
        let f = self.p.eval(r, y[0], du)?;
        self.nodes.push(r);
        self.u.push(y[0]);
        self.du.push(du);
        self.sin_psi.push(s);
        self.kappa.push(f - s / r);
        if s < 0.0 {
            self.negative = true;
        }
        Ok(())
    }

    fn finish(self, truncated: bool) -> SolutionGrid {
        let c_eff = *self.nodes.last().unwrap();
        let gamma = if truncated {
            std::f64::consts::FRAC_PI_2.copysign(*self.sin_psi.last().unwrap())
        } else {
            self.du.last().unwrap().atan()
        };
        SolutionGrid {
            nodes: self.nodes,
            u: self.u,
            du: self.du,
            sin_psi: self.sin_psi,
            kappa: self.kappa,
            u0: self.u0,
            c_requested: self.c,
            c_eff,
            gamma,
            truncated_vertical: truncated,
            negative_sin_psi: self.negative,
            method: SolveMethod::AdaptiveIvp { tol: self.tol },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_6;

    #[test]
    fn constant_profile_matches_spherical_cap() {
        let p = Profile::Constant { k: 1.0 };
        let grid = solve_ivp(&p, 1.0, 0.0, 1e-10).unwrap();
        let mut worst = 0.0f64;
        for (i, &r) in grid.nodes.iter().enumerate() {
            let exact = 2.0 - (4.0 - r * r).sqrt();
            worst = worst.max((grid.u[i] - exact).abs());
        }
        assert!(worst < 1e-8, "cap deviation {worst}");
        assert!((grid.gamma - FRAC_PI_6).abs() < 1e-9);
        assert!(grid.len() >= 64, "step cap keeps the grid dense");
        assert_eq!(grid.nodes[0], 0.0);
        assert!((grid.c_eff - 1.0).abs() < 1e-14);
        assert!(!grid.truncated_vertical);
    }

    #[test]
    fn flat_capillary_solution_stays_flat() {
        let p = Profile::Capillary { bond: 1.0 };
        let grid = solve_ivp(&p, 0.5, 0.0, 1e-10).unwrap();
        assert!(grid.u.iter().all(|&u| u.abs() < 1e-12));
        assert!(grid.gamma.abs() < 1e-12);
    }

    #[test]
    fn capillary_curvature_exceeds_half_axis_value() {
        let p = Profile::Capillary { bond: 1.0 };
        let grid = solve_ivp(&p, 1.0, 0.5, 1e-10).unwrap();
        assert_eq!(grid.kappa[0], 0.25);
        for (i, &k) in grid.kappa.iter().enumerate().skip(1) {
            assert!(k > 0.25, "kappa[{i}] = {k} at r = {}", grid.nodes[i]);
        }
    }

    #[test]
    fn truncates_when_the_surface_turns_vertical() {
        // f = 2.5 is a cap of radius 0.8 < c: the guard must trip.
        let p = Profile::Constant { k: 2.5 };
        let grid = solve_ivp(&p, 1.0, 0.0, 1e-10).unwrap();
        assert!(grid.truncated_vertical);
        assert!(grid.c_eff < 0.8 + 1e-3);
        assert_eq!(grid.gamma, std::f64::consts::FRAC_PI_2);
        let s_end = *grid.sin_psi.last().unwrap();
        assert!(s_end <= 1.0 - VERTICAL_GUARD);
        assert!(
            s_end > 1.0 - 20.0 * VERTICAL_GUARD,
            "guard localized, got {s_end}"
        );
    }

    #[test]
    fn rejects_tolerance_outside_range() {
        let p = Profile::Constant { k: 1.0 };
        assert!(matches!(
            solve_ivp(&p, 1.0, 0.0, 1e-2),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            solve_ivp(&p, 1.0, 0.0, 1e-13),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn immediate_truncation_for_huge_curvature() {
        let p = Profile::Constant { k: 1e9 };
        assert!(matches!(
            solve_ivp(&p, 1.0, 0.0, 1e-10),
            Err(Error::ImmediateTruncation { .. })
        ));
    }

    #[test]
    fn negative_profile_sets_flag_and_descends() {
        // f(0, 0, 0) = -0.5: the surface dips and sin psi goes negative.
        let p = Profile::Compressible {
            a: 1.0,
            b: 1.0,
            c3: -0.5,
        };
        let grid = solve_ivp(&p, 0.8, 0.0, 1e-9).unwrap();
        assert!(grid.negative_sin_psi);
        assert!(grid.u_end() < 0.0);
    }
}
