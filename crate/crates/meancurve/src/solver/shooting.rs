//! Shooting on the axis height to meet a prescribed contact angle.
//!
//! For height-dependent profiles the contact angle
//! `gamma = arctan(u'(c))` varies with the axis height `u0`, so a Neumann
//! condition `u'(c) = tan gamma` is met by root-finding on
//! `g(u0) = gamma(u0) - gamma_target` inside a user bracket. The iteration
//! is bisection with a secant proposal when it falls safely inside the
//! bracket, which keeps convergence guaranteed and usually superlinear.

use super::{solve_ivp, SolutionGrid, IVP_TOL_RANGE};
use crate::error::Error;
use crate::profiles::{Dependence, Profile};

const MAX_ITERATIONS: usize = 200;

/// Finds `u0` in `bracket` such that the solve on `[0, c]` meets the
/// contact angle `gamma` (radians, in `[0, pi/2)`) to within `tol`, and
/// returns that solve.
///
/// The inner integrations run two orders tighter than `tol` (floored at
/// the integrator minimum) so the achieved angle is resolved well below
/// the matching tolerance.
pub fn shoot_for_gamma(
    p: &Profile,
    c: f64,
    gamma: f64,
    bracket: (f64, f64),
    tol: f64,
) -> Result<SolutionGrid, Error> {
    if p.dependence() == Dependence::RadialOnly {
        return Err(Error::ShootingUnderdetermined);
    }
    super::check_window(c)?;
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&gamma) {
        return Err(Error::InvalidArgument(format!(
            "target contact angle must lie in [0, pi/2), got {gamma}"
        )));
    }
    if !(tol >= IVP_TOL_RANGE.0 && tol <= IVP_TOL_RANGE.1) {
        return Err(Error::InvalidArgument(format!(
            "tolerance {tol} outside [{}, {}]",
            IVP_TOL_RANGE.0, IVP_TOL_RANGE.1
        )));
    }
    let (lo, hi) = bracket;
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Error::InvalidArgument(format!(
            "bracket ({lo}, {hi}) must be finite with lo < hi"
        )));
    }

    let inner_tol = (tol * 1e-2).clamp(IVP_TOL_RANGE.0, IVP_TOL_RANGE.1);
    let shot = |u0: f64| -> Result<(SolutionGrid, f64), Error> {
        let grid = solve_ivp(p, c, u0, inner_tol)?;
        let g = grid.gamma - gamma;
        Ok((grid, g))
    };

    let (grid_lo, g_lo) = shot(lo)?;
    if g_lo.abs() <= tol {
        return Ok(grid_lo);
    }
    let (grid_hi, g_hi) = shot(hi)?;
    if g_hi.abs() <= tol {
        return Ok(grid_hi);
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::Bracket {
            lo,
            hi,
            g_lo,
            g_hi,
        });
    }

    let (mut a, mut ga) = (lo, g_lo);
    let (mut b, mut gb) = (hi, g_hi);
    for _ in 0..MAX_ITERATIONS {
        // Secant proposal, accepted only when comfortably interior.
        let width = b - a;
        let secant = b - gb * width / (gb - ga);
        let pad = 1e-3 * width;
        let mid = if secant.is_finite() && secant > a + pad && secant < b - pad {
            secant
        } else {
            0.5 * (a + b)
        };
        let (grid_mid, g_mid) = shot(mid)?;
        if g_mid.abs() <= tol {
            return Ok(grid_mid);
        }
        if g_mid.signum() == ga.signum() {
            a = mid;
            ga = g_mid;
        } else {
            b = mid;
            gb = g_mid;
        }
        if b - a < 1e-15 * (1.0 + a.abs()) {
            break;
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_angle_converges_to_flat_solution() {
        // u0 = 0 gives f = B u = 0 and a flat surface with gamma = 0, so
        // the low bracket end already matches.
        let p = Profile::Capillary { bond: 1.0 };
        let grid = shoot_for_gamma(&p, 0.5, 0.0, (0.0, 1.0), 1e-10).unwrap();
        assert_eq!(grid.u0, 0.0);
        assert!(grid.gamma.abs() <= 1e-10);
    }

    #[test]
    fn round_trips_the_forward_angle() {
        let p = Profile::Capillary { bond: 1.0 };
        let forward = solve_ivp(&p, 0.5, 0.5, 1e-12).unwrap();
        let grid = shoot_for_gamma(&p, 0.5, forward.gamma, (0.0, 2.0), 1e-10).unwrap();
        assert!(
            (grid.u0 - 0.5).abs() < 1e-6,
            "recovered u0 = {}, want 0.5",
            grid.u0
        );
        assert!((grid.gamma - forward.gamma).abs() <= 1e-10);
    }

    #[test]
    fn rejects_radial_only_profiles() {
        let p = Profile::Linear { a: 1.0, b: 0.0 };
        assert!(matches!(
            shoot_for_gamma(&p, 1.0, 0.3, (0.0, 1.0), 1e-10),
            Err(Error::ShootingUnderdetermined)
        ));
    }

    #[test]
    fn rejects_non_straddling_bracket() {
        // Both ends give angles well below 1 radian.
        let p = Profile::Capillary { bond: 1.0 };
        assert!(matches!(
            shoot_for_gamma(&p, 0.5, 1.0, (0.1, 0.2), 1e-10),
            Err(Error::Bracket { .. })
        ));
    }

    #[test]
    fn rejects_angle_outside_range() {
        let p = Profile::Capillary { bond: 1.0 };
        assert!(matches!(
            shoot_for_gamma(&p, 0.5, 1.6, (0.0, 1.0), 1e-10),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            shoot_for_gamma(&p, 0.5, -0.1, (0.0, 1.0), 1e-10),
            Err(Error::InvalidArgument(_))
        ));
    }
}
