//! Shared helpers for the integration suites: an independent quadrature
//! oracle and randomized admissible-case generation.
#![allow(dead_code)]

use meancurve::Profile;
use rand::{Rng, RngExt};

/// Abscissae of the 10-point Gauss-Legendre rule on [-1, 1] (positive half).
const GL_X: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];

/// Weights paired with `GL_X`.
const GL_W: [f64; 5] = [
    0.295_524_224_714_752_87,
    0.269_266_719_309_996_35,
    0.219_086_362_515_982_04,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_14,
];

/// Composite 10-point Gauss-Legendre quadrature of `f` over `[a, b]`.
///
/// Deliberately a different rule family from anything the solver uses, so
/// it can serve as an independent oracle; a few dozen panels resolve
/// smooth integrands to machine precision.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (&x, &w) in GL_X.iter().zip(&GL_W) {
            sum += w * (f(mid - 0.5 * h * x) + f(mid + 0.5 * h * x));
        }
    }
    0.5 * h * sum
}

/// Which profile families a random case may draw from.
#[derive(Clone, Copy)]
pub enum DrawSet {
    /// Linear, quadratic, exponential: admissible for any nonnegative
    /// parameters.
    Parametric,
    /// Parametric plus constant and sine. Sine is not admissible (concave)
    /// but still radial-only; useful for cross-method comparisons.
    AllRadial,
}

/// Random radial case `(profile, c, u0)` with the endpoint slope bounded
/// away from vertical: parameters are rescaled so that `sin psi(c)` lands
/// in [0.05, 0.9], which keeps every draw solvable without truncation.
/// `c` stays in (0.2, 1.5) and `u0` in [0, 1].
pub fn draw_radial_case(rng: &mut impl Rng, set: DrawSet) -> (Profile, f64, f64) {
    let kinds = match set {
        DrawSet::Parametric => 3,
        DrawSet::AllRadial => 5,
    };
    let kind = rng.random_range(0..kinds);
    // Sine has no amplitude to rescale; cap its window instead
    // (sin psi(1.3) ~ 0.47, well short of vertical).
    let c = if kind == 4 {
        rng.random_range(0.201..1.3)
    } else {
        rng.random_range(0.201..1.499)
    };
    let u0 = rng.random_range(0.0..1.0);
    let s_target = rng.random_range(0.05..0.9);
    let profile = match kind {
        0 | 1 => {
            let mut a = rng.random_range(0.0..1.0);
            let mut b = rng.random_range(0.0..1.0);
            if a + b < 1e-3 {
                b = 1.0;
            }
            // sin psi(c) for unit-scale parameters: a c^2/3 + b c/2
            // (linear) or a c^3/4 + b c/2 (quadratic).
            let s_unit = if kind == 0 {
                a * c * c / 3.0 + b * c / 2.0
            } else {
                a * c * c * c / 4.0 + b * c / 2.0
            };
            let scale = s_target / s_unit;
            a *= scale;
            b *= scale;
            if kind == 0 {
                Profile::Linear { a, b }
            } else {
                Profile::Quadratic { a, b }
            }
        }
        // sin psi(c) = a ((c-1) e^c + 1)/c.
        2 => Profile::Exponential {
            a: s_target * c / ((c - 1.0) * c.exp() + 1.0),
        },
        // sin psi(c) = k c/2.
        3 => Profile::Constant {
            k: 2.0 * s_target / c,
        },
        _ => Profile::Sine,
    };
    (profile, c, u0)
}
