//! A-posteriori certification of the circle bounds and the inequalities
//! they rest on.
//!
//! For an admissible radial profile (nonnegative at the axis,
//! nondecreasing, convex) the solved surface is strictly sandwiched,
//! `w(r) < u(r) < y(r)` away from the respective contact points, and two
//! further inequalities hold:
//!
//! * the flux bound `r f(0) / 2 <= sin psi(r) <= r f(r) / 2` (equalities
//!   only for constant profiles), and
//! * monotonicity of the profile curvature `kappa = f - sin psi / r`.
//!
//! The checks here recompute all of this from a grid at machine-level
//! tolerances and return verdicts, never errors: a failed bound is a
//! result. Convexity of the profile is sufficient but not necessary;
//! [`counterexample_scan`] documents this with `f = sin r`, which is
//! concave on the whole window yet keeps `kappa` increasing up to
//! `r = sqrt(2)`.
//!
//! [`BoundsReport`] is a deterministic function of (grid, arcs,
//! tolerance): its flux check recovers `f` from the stored curvature
//! identity instead of re-evaluating the profile, so a grid parsed back
//! from a solution CSV certifies identically to the original.

use crate::error::Error;
use crate::geometry::{check_circle_is_from_grid, CircleKind, ComparisonCircle};
use crate::profiles::{AssumptionReport, Dependence, Profile, RadialTable};
use crate::solver::{solve_radial_quadrature, SolutionGrid};

/// Relative floor for the machine-level check tolerances.
const CHECK_TOL: f64 = 1e-9;

/// Default sandwich tolerance for a grid: `1e-9 * (1 + |u(c_eff)|)`.
pub fn default_tolerance(grid: &SolutionGrid) -> f64 {
    CHECK_TOL * (1.0 + grid.u_end().abs())
}

/// Sandwich margins and verdicts for one grid and its two arcs.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    /// `y - u` at every node.
    pub margin_upper: Vec<f64>,
    /// `u - w` at every node.
    pub margin_lower: Vec<f64>,
    /// Minimum of `y - u` over nodes with `r > 0` (the bound is strict
    /// away from the axis contact).
    pub min_margin_upper: f64,
    /// Minimum of `u - w` over nodes with `r < c_eff` (strict away from
    /// the outer contact).
    pub min_margin_lower: f64,
    /// `|y(0) - u(0)|`: the upper arc touches at the axis.
    pub endpoint_residual_upper: f64,
    /// `|w(c_eff) - u(c_eff)|`: the lower arc touches at the outer radius.
    pub endpoint_residual_lower: f64,
    pub sandwich_ok: bool,
    /// Grid-intrinsic flux bound verdict (see [`verify_efe`]).
    pub efe_ok: bool,
    /// Verdict of [`verify_curvature_monotone`] on the grid.
    pub curvature_monotone_ok: bool,
    /// Tolerance the sandwich verdict used.
    pub tolerance: f64,
}

/// Checks `w <= u <= y` at every node with tolerance `tol`:
/// interior margins must stay above `-tol f` and the two contact residuals
/// below `tol`. Also fills the grid-intrinsic flux and curvature verdicts.
///
/// The arcs must be the grid's own (as built by
/// [`crate::geometry::upper_circle`] / [`crate::geometry::lower_circle`]);
/// arcs from another grid are rejected.
pub fn verify_sandwich(
    grid: &SolutionGrid,
    y: &ComparisonCircle,
    w: &ComparisonCircle,
    tol: f64,
) -> Result<BoundsReport, Error> {
    if !tol.is_finite() || tol < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be finite and nonnegative, got {tol}"
        )));
    }
    if y.kind != CircleKind::Upper || w.kind != CircleKind::Lower {
        return Err(Error::GridCircleMismatch(
            "need the grid's upper and lower arcs, in that order".into(),
        ));
    }
    check_circle_is_from_grid(grid, y)?;
    let rel = |x: f64, scale: f64| x.abs() / (1.0 + scale.abs());
    if rel(w.radius - y.radius, y.radius) > 1e-9 || rel(w.r_max - y.r_max, y.r_max) > 1e-9 {
        return Err(Error::GridCircleMismatch(
            "lower arc is not a shift of the upper arc".into(),
        ));
    }
    let shift = grid.u_end() - y.eval(grid.c_eff)?.0;
    if rel(w.center_height - (y.center_height + shift), y.center_height) > 1e-9 {
        return Err(Error::GridCircleMismatch(format!(
            "lower arc center {} does not match the grid's contact shift {}",
            w.center_height,
            y.center_height + shift
        )));
    }

    let n = grid.len();
    let mut margin_upper = Vec::with_capacity(n);
    let mut margin_lower = Vec::with_capacity(n);
    for i in 0..n {
        let r = grid.nodes[i];
        margin_upper.push(y.eval(r)?.0 - grid.u[i]);
        margin_lower.push(grid.u[i] - w.eval(r)?.0);
    }
    let min_margin_upper = margin_upper[1..]
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let min_margin_lower = margin_lower[..n - 1]
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let endpoint_residual_upper = margin_upper[0].abs();
    let endpoint_residual_lower = margin_lower[n - 1].abs();
    let sandwich_ok = min_margin_upper > -tol
        && min_margin_lower > -tol
        && endpoint_residual_upper <= tol
        && endpoint_residual_lower <= tol;

    Ok(BoundsReport {
        margin_upper,
        margin_lower,
        min_margin_upper,
        min_margin_lower,
        endpoint_residual_upper,
        endpoint_residual_lower,
        sandwich_ok,
        efe_ok: intrinsic_flux_ok(grid),
        curvature_monotone_ok: verify_curvature_monotone(grid).ok,
        tolerance: tol,
    })
}

/// Grid-intrinsic form of the flux bound. The stored curvature identity
/// gives `f(r) = kappa + sin psi / r` and `f(0) = 2 kappa(0)` back without
/// the profile, so the two-sided bound becomes
/// `r kappa(0) <= sin psi <= r kappa + sin psi` ... reduced:
/// lower `sin_psi >= r * kappa[0]`, upper `sin_psi <= r * kappa`.
fn intrinsic_flux_ok(grid: &SolutionGrid) -> bool {
    let k0 = grid.kappa[0];
    for i in 1..grid.len() {
        let r = grid.nodes[i];
        let s = grid.sin_psi[i];
        let tol = CHECK_TOL * (1.0 + s.abs());
        if s < r * k0 - tol || s > r * grid.kappa[i] + tol {
            return false;
        }
    }
    true
}

/// Flux-bound report against an explicitly evaluated profile.
#[derive(Debug, Clone, PartialEq)]
pub struct EfeReport {
    pub ok: bool,
    /// Worst slack of `sin psi - r f(0) / 2` (negative = violation).
    pub min_lower_slack: f64,
    pub worst_r_lower: f64,
    /// Worst slack of `r f(r) / 2 - sin psi` (negative = violation).
    pub min_upper_slack: f64,
    pub worst_r_upper: f64,
}

/// Checks `r f(0) / 2 <= sin psi(r) <= r f(r) / 2` at every node with
/// `r > 0`, evaluating `f` from the profile along the grid (so
/// height-dependent profiles are checked through their solved heights).
pub fn verify_efe(grid: &SolutionGrid, p: &Profile) -> Result<EfeReport, Error> {
    let f0 = p.eval(0.0, grid.u0, 0.0)?;
    let mut rep = EfeReport {
        ok: true,
        min_lower_slack: f64::INFINITY,
        worst_r_lower: 0.0,
        min_upper_slack: f64::INFINITY,
        worst_r_upper: 0.0,
    };
    for i in 1..grid.len() {
        let r = grid.nodes[i];
        let s = grid.sin_psi[i];
        let f = p.eval(r, grid.u[i], grid.du[i])?;
        let lower = s - r * f0 / 2.0;
        let upper = r * f / 2.0 - s;
        if lower < rep.min_lower_slack {
            rep.min_lower_slack = lower;
            rep.worst_r_lower = r;
        }
        if upper < rep.min_upper_slack {
            rep.min_upper_slack = upper;
            rep.worst_r_upper = r;
        }
        let tol = CHECK_TOL * (1.0 + s.abs());
        if lower < -tol || upper < -tol {
            rep.ok = false;
        }
    }
    Ok(rep)
}

/// Curvature monotonicity report.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureReport {
    pub ok: bool,
    /// Largest decrease `kappa[i] - kappa[i+1]` observed (0 if none).
    pub max_drop: f64,
    /// Radius where the first tolerated-threshold violation starts.
    pub first_violation_r: Option<f64>,
}

/// Checks `kappa[i+1] >= kappa[i] - tol` across the grid, with a relative
/// machine-level tolerance.
pub fn verify_curvature_monotone(grid: &SolutionGrid) -> CurvatureReport {
    let scale = grid.kappa.iter().fold(0.0f64, |m, k| m.max(k.abs()));
    let tol = CHECK_TOL * (1.0 + scale);
    let mut rep = CurvatureReport {
        ok: true,
        max_drop: 0.0,
        first_violation_r: None,
    };
    for i in 0..grid.len() - 1 {
        let drop = grid.kappa[i] - grid.kappa[i + 1];
        if drop > rep.max_drop {
            rep.max_drop = drop;
        }
        if drop > tol && rep.first_violation_r.is_none() {
            rep.ok = false;
            rep.first_violation_r = Some(grid.nodes[i]);
        }
    }
    rep
}

/// Re-checks the admissibility clauses along a computed solution by
/// treating `r -> f(r, u(r), u'(r))` as an effective radial profile
/// (tabulated at the grid nodes). Radial-only profiles delegate to the
/// analytic check on `[0, c_eff]`.
pub fn check_assumptions_along(
    grid: &SolutionGrid,
    p: &Profile,
    n: usize,
) -> Result<AssumptionReport, Error> {
    if p.dependence() == Dependence::RadialOnly {
        return p.check_assumptions(grid.c_eff, n);
    }
    let mut pts = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        pts.push((
            grid.nodes[i],
            p.eval(grid.nodes[i], grid.u[i], grid.du[i])?,
        ));
    }
    let effective = Profile::CustomRadial {
        table: RadialTable::new(pts)?,
    };
    effective.check_assumptions(grid.c_eff, n)
}

/// Closed-form curvature rate `kappa'(r)` of the solved `f = sin r`
/// profile: `((r^2 - 2) / r^3) (r cos r - sin r)`.
pub fn sine_kappa_prime(r: f64) -> f64 {
    (r * r - 2.0) / (r * r * r) * (r * r.cos() - r.sin())
}

/// Weighted convexity integral of `f = sin r`:
/// `integral_0^r t f''(t) dt = r cos r - sin r` (negative on `(0, pi)`).
pub fn sine_convexity_moment(r: f64) -> f64 {
    r * r.cos() - r.sin()
}

/// Report of [`counterexample_scan`].
#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleReport {
    pub c_max: f64,
    /// Sample count of the scan (also the solver intervals for the
    /// cross-check).
    pub nodes: usize,
    /// Largest scanned radius up to which `kappa' > 0` held at every
    /// sample (the closed form predicts `sqrt(2)`).
    pub kappa_prime_positive_until: f64,
    /// True when `kappa' > 0` at every sampled radius in `(0, c_max)`.
    pub positive_on_full_range: bool,
    /// True when the convexity integral stayed negative at every sampled
    /// radius below `sqrt(2)`.
    pub moment_negative_below_sqrt2: bool,
    /// Worst deviation between the closed-form `kappa'` and second
    /// differences of the solved `sin psi`.
    pub max_cross_check_error: f64,
}

/// Documents the convexity counterexample `f = sin r` on `(0, c_max]`
/// (`c_max <= pi`): scans the closed-form curvature rate for its positive
/// range, records the sign of the convexity integral, and cross-checks
/// the closed form against second differences of a solved grid.
pub fn counterexample_scan(c_max: f64) -> Result<CounterexampleReport, Error> {
    counterexample_scan_with_resolution(c_max, 2000)
}

/// [`counterexample_scan`] with an explicit sample/interval count, for
/// refinement studies.
pub fn counterexample_scan_with_resolution(
    c_max: f64,
    n: usize,
) -> Result<CounterexampleReport, Error> {
    if !(c_max > 0.0 && c_max <= std::f64::consts::PI) {
        return Err(Error::InvalidArgument(format!(
            "scan window must lie in (0, pi], got {c_max}"
        )));
    }
    if n < 16 {
        return Err(Error::InvalidArgument(format!(
            "need at least 16 scan samples, got {n}"
        )));
    }

    let h = c_max / n as f64;
    let mut positive_until = 0.0;
    let mut positive_prefix = true;
    let mut positive_everywhere = true;
    let mut moment_negative = true;
    for i in 1..=n {
        let r = i as f64 * h;
        if sine_kappa_prime(r) > 0.0 {
            if positive_prefix {
                positive_until = r;
            }
        } else {
            positive_prefix = false;
            positive_everywhere = false;
        }
        if r < std::f64::consts::SQRT_2 && sine_convexity_moment(r) >= 0.0 {
            moment_negative = false;
        }
    }

    // Cross-check against a solved grid: kappa' = (sin psi)'' at interior
    // nodes by centered second differences.
    let grid = solve_radial_quadrature(&Profile::Sine, c_max, 0.0, n)?;
    let hg = grid.nodes[1] - grid.nodes[0];
    let mut max_err = 0.0f64;
    for i in 1..grid.len() - 1 {
        let second =
            (grid.sin_psi[i + 1] - 2.0 * grid.sin_psi[i] + grid.sin_psi[i - 1]) / (hg * hg);
        max_err = max_err.max((second - sine_kappa_prime(grid.nodes[i])).abs());
    }

    Ok(CounterexampleReport {
        c_max,
        nodes: n,
        kappa_prime_positive_until: positive_until,
        positive_on_full_range: positive_everywhere,
        moment_negative_below_sqrt2: moment_negative,
        max_cross_check_error: max_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{lower_circle, upper_circle};
    use crate::solver::solve_ivp;

    fn solve(p: &Profile, c: f64, u0: f64) -> SolutionGrid {
        solve_radial_quadrature(p, c, u0, 2000).unwrap()
    }

    fn certify(grid: &SolutionGrid) -> BoundsReport {
        let y = upper_circle(grid).unwrap();
        let w = lower_circle(grid, &y).unwrap();
        verify_sandwich(grid, &y, &w, default_tolerance(grid)).unwrap()
    }

    #[test]
    fn constant_profile_sits_on_both_arcs() {
        let grid = solve(&Profile::Constant { k: 1.0 }, 1.0, 0.0);
        let rep = certify(&grid);
        assert!(rep.sandwich_ok);
        assert!(rep.efe_ok, "flux bound holds with equality for constants");
        assert!(rep.curvature_monotone_ok);
        // The solution is its own comparison circle: margins vanish.
        assert!(rep.min_margin_upper.abs() < 1e-9);
        assert!(rep.min_margin_lower.abs() < 1e-9);
    }

    #[test]
    fn linear_profile_is_strictly_sandwiched() {
        let grid = solve(&Profile::Linear { a: 1.0, b: 0.0 }, 1.0, 0.0);
        let rep = certify(&grid);
        assert!(rep.sandwich_ok && rep.efe_ok && rep.curvature_monotone_ok);
        assert!(rep.min_margin_upper > 0.0);
        assert!(rep.min_margin_lower > 0.0);
        assert!(rep.endpoint_residual_upper < 1e-12);
        assert!(rep.endpoint_residual_lower < 1e-12);
        // Outer margin vs the oracle value of y(1) - u(1).
        let outer = rep.margin_upper.last().unwrap();
        assert!(
            (outer - 0.057_665_646_382_407_77).abs() < 1e-8,
            "outer margin {outer}"
        );
    }

    #[test]
    fn sine_profile_certifies_despite_concavity() {
        let grid = solve(&Profile::Sine, 1.2, 0.0);
        let rep = certify(&grid);
        assert!(rep.sandwich_ok && rep.efe_ok && rep.curvature_monotone_ok);
        assert!(rep.min_margin_upper > 0.0 && rep.min_margin_lower > 0.0);
    }

    #[test]
    fn efe_slacks_for_linear_profile() {
        // sin psi = r^2 / 3, f = r: lower slack r^2/3, upper r^2/6.
        let p = Profile::Linear { a: 1.0, b: 0.0 };
        let grid = solve(&p, 1.0, 0.0);
        let rep = verify_efe(&grid, &p).unwrap();
        assert!(rep.ok);
        assert!((rep.min_lower_slack - grid.nodes[1].powi(2) / 3.0).abs() < 1e-12);
        assert!((rep.min_upper_slack - grid.nodes[1].powi(2) / 6.0).abs() < 1e-12);
    }

    #[test]
    fn efe_catches_decreasing_profile() {
        // f decreasing: sin psi lags r f(r) / 2 on the outside ... the
        // upper bound fails.
        let p = Profile::CustomRadial {
            table: RadialTable::new(vec![(0.0, 1.0), (1.0, 0.2)]).unwrap(),
        };
        let grid = solve(&p, 1.0, 0.0);
        let rep = verify_efe(&grid, &p).unwrap();
        assert!(!rep.ok);
        assert!(rep.min_upper_slack < 0.0);
        assert!(rep.worst_r_upper > 0.5, "violation shows up outside");
    }

    #[test]
    fn curvature_monotone_for_quadratic_not_for_decreasing_table() {
        let grid = solve(&Profile::Quadratic { a: 1.0, b: 0.5 }, 1.0, 0.0);
        assert!(verify_curvature_monotone(&grid).ok);

        let p = Profile::CustomRadial {
            table: RadialTable::new(vec![(0.0, 1.0), (1.0, 0.2)]).unwrap(),
        };
        let grid = solve(&p, 1.0, 0.0);
        let rep = verify_curvature_monotone(&grid);
        assert!(!rep.ok);
        assert!(rep.max_drop > 0.0);
        assert!(rep.first_violation_r.is_some());
    }

    #[test]
    fn sandwich_rejects_arcs_from_another_grid() {
        let grid = solve(&Profile::Linear { a: 1.0, b: 0.0 }, 1.0, 0.0);
        let other = solve(&Profile::Quadratic { a: 1.0, b: 0.2 }, 1.0, 0.0);
        let y = upper_circle(&other).unwrap();
        let w = lower_circle(&other, &y).unwrap();
        assert!(matches!(
            verify_sandwich(&grid, &y, &w, 1e-9),
            Err(Error::GridCircleMismatch(_))
        ));
    }

    #[test]
    fn report_is_deterministic() {
        let grid = solve(&Profile::Linear { a: 1.0, b: 0.0 }, 1.0, 0.0);
        let a = certify(&grid);
        let b = certify(&grid);
        assert_eq!(a, b);
    }

    #[test]
    fn capillary_assumptions_hold_along_solution() {
        let p = Profile::Capillary { bond: 1.0 };
        let grid = solve_ivp(&p, 1.0, 0.5, 1e-10).unwrap();
        let rep = check_assumptions_along(&grid, &p, 256).unwrap();
        assert!(
            rep.all_hold(),
            "B u(r) is positive, increasing and convex in r along the solve: {rep:?}"
        );
    }

    #[test]
    fn scan_confirms_positive_curvature_rate_below_sqrt2() {
        let rep = counterexample_scan(1.4).unwrap();
        assert!(rep.positive_on_full_range);
        assert!((rep.kappa_prime_positive_until - 1.4).abs() < 1e-12);
        assert!(rep.moment_negative_below_sqrt2);
        assert!(rep.max_cross_check_error < 1e-5);
    }

    #[test]
    fn scan_detects_sign_change_past_sqrt2() {
        let rep = counterexample_scan(2.0).unwrap();
        assert!(!rep.positive_on_full_range);
        assert!(
            (rep.kappa_prime_positive_until - std::f64::consts::SQRT_2).abs() < 1e-2,
            "positive until {}",
            rep.kappa_prime_positive_until
        );
    }

    #[test]
    fn scan_closed_forms_at_unit_radius() {
        assert!((sine_kappa_prime(1.0) - 0.301_168_678_939_756_8).abs() < 1e-12);
        assert!((sine_convexity_moment(1.0) + 0.301_168_678_939_756_8).abs() < 1e-12);
    }

    #[test]
    fn scan_rejects_window_outside_pi() {
        assert!(counterexample_scan(4.0).is_err());
        assert!(counterexample_scan(-1.0).is_err());
    }
}
