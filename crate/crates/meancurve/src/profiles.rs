//! Curvature profiles `f` and the admissibility checks the comparison
//! bounds rest on.
//!
//! The radial equation prescribes twice the mean curvature of the rotating
//! graph `u(r)` as a function `f`, which may depend on the radius alone,
//! on the height `u`, or on height and slope together. Radial-only
//! profiles admit a direct quadrature solver; the others need the adaptive
//! initial-value integrator (see [`crate::solver`]).
//!
//! The circle bounds are certified under three clauses on a radial-only
//! profile over the solve window `[0, c]`:
//!
//! 1. `f(0) >= 0`,
//! 2. `f` nondecreasing on `[0, c]`,
//! 3. `f` convex on `[0, c]` (`f'' >= 0`).
//!
//! [`Profile::check_assumptions`] evaluates the clauses numerically:
//! analytically for the closed-form presets, by centered finite
//! differences for tabulated profiles. Height-dependent profiles are
//! checked along a computed solution instead (see
//! [`crate::verify::check_assumptions_along`]).

use crate::error::Error;

/// Default number of sample points for [`Profile::check_assumptions`].
pub const DEFAULT_ASSUMPTION_SAMPLES: usize = 512;

/// Relative slack granted to each admissibility clause: a clause passes if
/// its quantity stays above `-CLAUSE_TOL * (1 + scale)` where `scale` is
/// the largest magnitude the quantity attains on the sample set. Absorbs
/// roundoff on exact-zero clauses (constant profiles, linear convexity).
pub const CLAUSE_TOL: f64 = 1e-12;

/// Argument dependence of a profile, deciding which solvers apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dependence {
    /// `f = f(r)`: solvable by cumulative quadrature.
    RadialOnly,
    /// `f = f(r, u)`: needs the initial-value integrator.
    HeightDependent,
    /// `f = f(r, u, u')`: needs the initial-value integrator.
    SlopeAndHeightDependent,
}

impl Dependence {
    /// Short lowercase name used in CLI output.
    pub fn name(self) -> &'static str {
        match self {
            Dependence::RadialOnly => "radial-only",
            Dependence::HeightDependent => "height-dependent",
            Dependence::SlopeAndHeightDependent => "slope-and-height-dependent",
        }
    }
}

/// Prescribed curvature profile `f(r, u, u')`.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    /// `f = k`. The exact solution is a spherical cap of radius `2/k`.
    Constant { k: f64 },
    /// `f = a r + b`.
    Linear { a: f64, b: f64 },
    /// `f = a r^2 + b`.
    Quadratic { a: f64, b: f64 },
    /// `f = a e^r`.
    Exponential { a: f64 },
    /// `f = sin r`: increasing but concave on `(0, pi/2)`, the stress test
    /// showing the convexity clause is not necessary for the bounds.
    Sine,
    /// `f = B u`: linearized capillary source with capillary constant `B`.
    Capillary { bond: f64 },
    /// `f = -a / sqrt(1 + u'^2) + b e^{a u} + c3`: pressure balance of a
    /// compressible column.
    Compressible { a: f64, b: f64, c3: f64 },
    /// Tabulated radial profile, evaluated by linear interpolation.
    CustomRadial { table: RadialTable },
}

/// Strictly increasing `(r, f)` sample table backing [`Profile::CustomRadial`].
#[derive(Debug, Clone, PartialEq)]
pub struct RadialTable {
    points: Vec<(f64, f64)>,
}

impl RadialTable {
    /// Validates and wraps samples: at least two points, strictly
    /// increasing finite radii, finite values.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, Error> {
        if points.len() < 2 {
            return Err(Error::InvalidTable(format!(
                "need at least two points, got {}",
                points.len()
            )));
        }
        for (i, &(r, f)) in points.iter().enumerate() {
            if !r.is_finite() || !f.is_finite() {
                return Err(Error::InvalidTable(format!(
                    "non-finite entry ({r}, {f}) at index {i}"
                )));
            }
            if i > 0 && r <= points[i - 1].0 {
                return Err(Error::InvalidTable(format!(
                    "radii must be strictly increasing, r[{}] = {} after r[{}] = {}",
                    i,
                    r,
                    i - 1,
                    points[i - 1].0
                )));
            }
        }
        Ok(RadialTable { points })
    }

    pub fn r_min(&self) -> f64 {
        self.points[0].0
    }

    pub fn r_max(&self) -> f64 {
        self.points[self.points.len() - 1].0
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Index `i` of the segment `[r_i, r_{i+1}]` containing `r` (clamped).
    fn segment(&self, r: f64) -> usize {
        let n = self.points.len();
        match self.points.partition_point(|&(t, _)| t <= r) {
            0 => 0,
            i if i >= n => n - 2,
            i => i - 1,
        }
    }

    /// Linear interpolation; `r` must lie inside the table range.
    fn eval(&self, r: f64) -> Result<f64, Error> {
        if !(r >= self.r_min() && r <= self.r_max()) {
            return Err(Error::ProfileRange {
                r,
                lo: self.r_min(),
                hi: self.r_max(),
            });
        }
        let i = self.segment(r);
        let (r0, f0) = self.points[i];
        let (r1, f1) = self.points[i + 1];
        let t = (r - r0) / (r1 - r0);
        Ok(f0 + t * (f1 - f0))
    }

    /// Width of the segment containing `r`; sets the finite-difference step.
    fn local_spacing(&self, r: f64) -> f64 {
        let i = self.segment(r);
        self.points[i + 1].0 - self.points[i].0
    }

    /// Centered-difference step used at `r`.
    fn fd_step(&self, r: f64) -> f64 {
        (self.local_spacing(r) / 8.0).max(1e-6)
    }

    /// Largest absolute tabulated value; scales difference roundoff.
    fn value_scale(&self) -> f64 {
        self.points.iter().fold(0.0f64, |m, &(_, f)| m.max(f.abs()))
    }
}

impl Profile {
    pub fn dependence(&self) -> Dependence {
        match self {
            Profile::Constant { .. }
            | Profile::Linear { .. }
            | Profile::Quadratic { .. }
            | Profile::Exponential { .. }
            | Profile::Sine
            | Profile::CustomRadial { .. } => Dependence::RadialOnly,
            Profile::Capillary { .. } => Dependence::HeightDependent,
            Profile::Compressible { .. } => Dependence::SlopeAndHeightDependent,
        }
    }

    /// Short lowercase family name (matches the CLI `profile` key).
    pub fn kind_name(&self) -> &'static str {
        match self {
            Profile::Constant { .. } => "constant",
            Profile::Linear { .. } => "linear",
            Profile::Quadratic { .. } => "quadratic",
            Profile::Exponential { .. } => "exponential",
            Profile::Sine => "sine",
            Profile::Capillary { .. } => "capillary",
            Profile::Compressible { .. } => "compressible",
            Profile::CustomRadial { .. } => "custom",
        }
    }

    /// Evaluates `f(r, u, du)`. Radial-only profiles ignore `u` and `du`.
    ///
    /// `r` must be finite and nonnegative (and inside the table range for
    /// tabulated profiles).
    pub fn eval(&self, r: f64, u: f64, du: f64) -> Result<f64, Error> {
        if !r.is_finite() || r < 0.0 {
            return Err(Error::ProfileRange {
                r,
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
        Ok(match *self {
            Profile::Constant { k } => k,
            Profile::Linear { a, b } => a * r + b,
            Profile::Quadratic { a, b } => a * r * r + b,
            Profile::Exponential { a } => a * r.exp(),
            Profile::Sine => r.sin(),
            Profile::Capillary { bond } => bond * u,
            Profile::Compressible { a, b, c3 } => {
                -a / (1.0 + du * du).sqrt() + b * (a * u).exp() + c3
            }
            Profile::CustomRadial { ref table } => table.eval(r)?,
        })
    }

    /// Radial derivatives `(f'(r), f''(r))` of a radial-only profile.
    ///
    /// Closed-form presets are differentiated analytically; tabulated
    /// profiles by centered differences with step
    /// `h = max(1e-6, local spacing / 8)` (stencil shifted inward at the
    /// table ends). Height-dependent profiles are rejected.
    pub fn derivatives(&self, r: f64) -> Result<(f64, f64), Error> {
        if !r.is_finite() || r < 0.0 {
            return Err(Error::ProfileRange {
                r,
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
        match *self {
            Profile::Constant { .. } => Ok((0.0, 0.0)),
            Profile::Linear { a, .. } => Ok((a, 0.0)),
            Profile::Quadratic { a, .. } => Ok((2.0 * a * r, 2.0 * a)),
            Profile::Exponential { a } => {
                let v = a * r.exp();
                Ok((v, v))
            }
            Profile::Sine => Ok((r.cos(), -r.sin())),
            Profile::Capillary { .. } | Profile::Compressible { .. } => {
                Err(Error::UnsupportedDependence {
                    got: self.dependence().name(),
                    required: Dependence::RadialOnly.name(),
                })
            }
            Profile::CustomRadial { ref table } => {
                let h = table.fd_step(r);
                let (lo, hi) = (table.r_min(), table.r_max());
                if lo + h > hi - h {
                    return Err(Error::InvalidTable(format!(
                        "table range [{lo}, {hi}] is too narrow for difference step {h}"
                    )));
                }
                let rc = r.clamp(lo + h, hi - h);
                let fm = table.eval(rc - h)?;
                let f0 = table.eval(rc)?;
                let fp = table.eval(rc + h)?;
                Ok(((fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)))
            }
        }
    }

    /// Checks the three admissibility clauses on `[0, c]` at `n` sample
    /// points. Radial-only profiles only; `c > 0`, `n >= 3`.
    pub fn check_assumptions(&self, c: f64, n: usize) -> Result<AssumptionReport, Error> {
        if self.dependence() != Dependence::RadialOnly {
            return Err(Error::UnsupportedDependence {
                got: self.dependence().name(),
                required: Dependence::RadialOnly.name(),
            });
        }
        if !c.is_finite() || c <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "assumption window c must be positive and finite, got {c}"
            )));
        }
        if n < 3 {
            return Err(Error::InvalidArgument(format!(
                "need at least 3 sample points, got {n}"
            )));
        }

        let f0 = self.eval(0.0, 0.0, 0.0)?;
        let rs: Vec<f64> = (0..n).map(|i| c * i as f64 / (n - 1) as f64).collect();
        let mut d1 = Vec::with_capacity(n);
        let mut d2 = Vec::with_capacity(n);
        for &r in &rs {
            let (fp, fpp) = self.derivatives(r)?;
            d1.push(fp);
            d2.push(fpp);
        }

        let scale = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let tol1 = CLAUSE_TOL * (1.0 + scale(&d1));
        let tol2 = CLAUSE_TOL * (1.0 + scale(&d2));
        // Tabulated profiles estimate derivatives by centered differences;
        // their clause tolerances carry the roundoff floor eps * |f| / h^k,
        // below which a sign is not resolvable. Analytic profiles are exact.
        let floors = |r: f64| -> (f64, f64) {
            if let Profile::CustomRadial { ref table } = *self {
                let h = table.fd_step(r);
                let base = 32.0 * f64::EPSILON * (1.0 + table.value_scale());
                (base / (2.0 * h), base / (h * h))
            } else {
                (0.0, 0.0)
            }
        };
        let first_below = |v: &[f64], tol: f64, which: usize| {
            v.iter()
                .zip(&rs)
                .find(|(x, r)| {
                    let fl = floors(**r);
                    **x < -(tol + if which == 1 { fl.0 } else { fl.1 })
                })
                .map(|(_, r)| *r)
        };
        let first_decrease_r = first_below(&d1, tol1, 1);
        let first_concavity_r = first_below(&d2, tol2, 2);

        Ok(AssumptionReport {
            c,
            samples: n,
            f0,
            f0_nonnegative: f0 >= -CLAUSE_TOL * (1.0 + f0.abs()),
            nondecreasing: first_decrease_r.is_none(),
            first_decrease_r,
            convex: first_concavity_r.is_none(),
            first_concavity_r,
        })
    }
}

/// Per-clause admissibility verdicts with the first violating radius.
#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionReport {
    /// Window the clauses were checked on.
    pub c: f64,
    /// Number of sample points used.
    pub samples: usize,
    /// Profile value at the axis.
    pub f0: f64,
    pub f0_nonnegative: bool,
    pub nondecreasing: bool,
    /// Smallest sampled radius where `f' < -tol`, if any.
    pub first_decrease_r: Option<f64>,
    pub convex: bool,
    /// Smallest sampled radius where `f'' < -tol`, if any.
    pub first_concavity_r: Option<f64>,
}

impl AssumptionReport {
    /// True when every clause holds on the window.
    pub fn all_hold(&self) -> bool {
        self.f0_nonnegative && self.nondecreasing && self.convex
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_linear_at_half() {
        let p = Profile::Linear { a: 1.0, b: 0.0 };
        assert_eq!(p.eval(0.5, 0.0, 0.0).unwrap(), 0.5);
    }

    #[test]
    fn eval_sine_matches_std() {
        let p = Profile::Sine;
        assert_eq!(p.eval(1.0, 0.0, 0.0).unwrap(), 1.0f64.sin());
    }

    #[test]
    fn eval_compressible_balances_at_rest() {
        // -1/sqrt(1) + 1*e^0 + 0 = 0 at u = 0, du = 0.
        let p = Profile::Compressible {
            a: 1.0,
            b: 1.0,
            c3: 0.0,
        };
        assert_eq!(p.eval(0.3, 0.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn eval_rejects_negative_radius() {
        let p = Profile::Sine;
        assert!(matches!(
            p.eval(-0.1, 0.0, 0.0),
            Err(Error::ProfileRange { .. })
        ));
    }

    #[test]
    fn derivatives_quadratic() {
        let p = Profile::Quadratic { a: 2.0, b: 1.0 };
        assert_eq!(p.derivatives(3.0).unwrap(), (12.0, 4.0));
    }

    #[test]
    fn derivatives_sine() {
        let (d1, d2) = Profile::Sine.derivatives(1.0).unwrap();
        assert_eq!(d1, 1.0f64.cos());
        assert_eq!(d2, -(1.0f64.sin()));
    }

    #[test]
    fn derivatives_linear_constant_slope() {
        let p = Profile::Linear { a: 5.0, b: 7.0 };
        assert_eq!(p.derivatives(0.25).unwrap(), (5.0, 0.0));
    }

    #[test]
    fn derivatives_reject_height_dependence() {
        let p = Profile::Capillary { bond: 1.0 };
        assert!(matches!(
            p.derivatives(0.5),
            Err(Error::UnsupportedDependence { .. })
        ));
    }

    #[test]
    fn assumptions_hold_for_increasing_linear() {
        let p = Profile::Linear { a: 1.0, b: 0.0 };
        let rep = p.check_assumptions(1.0, 64).unwrap();
        assert!(rep.f0_nonnegative && rep.nondecreasing && rep.convex);
        assert!(rep.all_hold());
    }

    #[test]
    fn assumptions_catch_sine_concavity() {
        let rep = Profile::Sine.check_assumptions(1.2, 128).unwrap();
        assert!(rep.f0_nonnegative);
        assert!(rep.nondecreasing, "sin is increasing below pi/2");
        assert!(!rep.convex);
        let witness = rep.first_concavity_r.expect("concavity witness");
        assert!(witness > 0.0 && witness <= 1.2);
        assert!(!rep.all_hold());
    }

    #[test]
    fn assumptions_catch_negative_axis_value() {
        let p = Profile::Quadratic { a: 1.0, b: -1.0 };
        let rep = p.check_assumptions(1.0, 64).unwrap();
        assert!(!rep.f0_nonnegative);
        assert_eq!(rep.f0, -1.0);
        assert!(rep.nondecreasing && rep.convex);
    }

    #[test]
    fn assumptions_reject_height_dependent() {
        let p = Profile::Capillary { bond: 1.0 };
        assert!(matches!(
            p.check_assumptions(1.0, 64),
            Err(Error::UnsupportedDependence { .. })
        ));
    }

    #[test]
    fn assumptions_pass_for_zero_constant() {
        // All clauses sit exactly at zero; the relative slack must absorb it.
        let rep = Profile::Constant { k: 0.0 }.check_assumptions(2.0, 32).unwrap();
        assert!(rep.all_hold());
    }

    #[test]
    fn table_requires_two_points() {
        assert!(matches!(
            RadialTable::new(vec![(0.0, 1.0)]),
            Err(Error::InvalidTable(_))
        ));
    }

    #[test]
    fn table_requires_increasing_radii() {
        assert!(matches!(
            RadialTable::new(vec![(0.0, 1.0), (0.5, 2.0), (0.5, 3.0)]),
            Err(Error::InvalidTable(_))
        ));
    }

    #[test]
    fn table_interpolates_linearly_and_rejects_outside() {
        let table = RadialTable::new(vec![(0.0, 0.0), (1.0, 2.0)]).unwrap();
        let p = Profile::CustomRadial { table };
        assert_eq!(p.eval(0.25, 0.0, 0.0).unwrap(), 0.5);
        assert!(matches!(
            p.eval(1.5, 0.0, 0.0),
            Err(Error::ProfileRange { .. })
        ));
    }

    #[test]
    fn table_derivatives_recover_linear_data() {
        let table = RadialTable::new(vec![(0.0, 1.0), (0.5, 2.0), (1.0, 3.0)]).unwrap();
        let p = Profile::CustomRadial { table };
        let (d1, d2) = p.derivatives(0.3).unwrap();
        assert!((d1 - 2.0).abs() < 1e-9, "slope of the table is 2, got {d1}");
        assert!(d2.abs() < 1e-6, "linear data has no curvature, got {d2}");
    }

    #[test]
    fn table_assumptions_on_convex_samples() {
        // Samples of r^2 + 0.1: nondecreasing and convex.
        let pts: Vec<(f64, f64)> = (0..=20)
            .map(|i| {
                let r = i as f64 / 20.0;
                (r, r * r + 0.1)
            })
            .collect();
        let p = Profile::CustomRadial {
            table: RadialTable::new(pts).unwrap(),
        };
        let rep = p.check_assumptions(1.0, 64).unwrap();
        assert!(rep.f0_nonnegative && rep.nondecreasing);
    }
}
