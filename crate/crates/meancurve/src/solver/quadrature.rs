//! Direct quadrature solver for radial-only profiles.
//!
//! Both cumulative integrals (`s` from `t f(t)`, then `u` from the slope)
//! are evaluated by four-point interpolatory rules per interval on a
//! uniform grid, so every node carries a fourth-order, cubic-exact
//! cumulative value; near the axis this keeps the division by `r` from
//! amplifying the local error.

use super::{slope_from_sin, SolutionGrid, SolveMethod, MIN_INTERVALS, VERTICAL_GUARD};
use crate::error::Error;
use crate::profiles::{Dependence, Profile};

/// Solves the radial problem for a radial-only profile on `[0, c]` with
/// `n` uniform intervals (`n >= 16`, rounded up to even).
///
/// Truncates at the vertical-tangent guard when `|sin psi|` reaches
/// `1 - VERTICAL_GUARD` before `c`; errors only when not even the first
/// interior node is admissible.
pub fn solve_radial_quadrature(
    p: &Profile,
    c: f64,
    u0: f64,
    n: usize,
) -> Result<SolutionGrid, Error> {
    if p.dependence() != Dependence::RadialOnly {
        return Err(Error::UnsupportedDependence {
            got: p.dependence().name(),
            required: Dependence::RadialOnly.name(),
        });
    }
    super::check_window(c)?;
    if !u0.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "axis height u0 must be finite, got {u0}"
        )));
    }
    if n < MIN_INTERVALS {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_INTERVALS} intervals, got {n}"
        )));
    }
    let n = n + n % 2;
    let h = c / n as f64;

    let nodes: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
    let mut f = Vec::with_capacity(n + 1);
    for &r in &nodes {
        f.push(p.eval(r, 0.0, 0.0)?);
    }

    // First pass: s(r) = (1/r) * integral of t f(t).
    let g: Vec<f64> = nodes.iter().zip(&f).map(|(&r, &v)| r * v).collect();
    let moment = cumulative_integral(&g, h);
    let mut sin_psi = vec![0.0];
    sin_psi.extend((1..=n).map(|i| moment[i] / nodes[i]));

    // Truncate at the vertical-tangent guard.
    let cap = 1.0 - VERTICAL_GUARD;
    let cut = sin_psi.iter().position(|s| s.abs() > cap);
    let truncated = cut.is_some();
    if let Some(i) = cut {
        if i <= 2 {
            return Err(Error::ImmediateTruncation {
                r: nodes[i],
                sin_psi: sin_psi[i],
            });
        }
    }
    let len = cut.unwrap_or(n + 1);
    let nodes = nodes[..len].to_vec();
    let sin_psi = sin_psi[..len].to_vec();
    let f = &f[..len];

    // Second pass: u from the slope.
    let du: Vec<f64> = sin_psi.iter().map(|&s| slope_from_sin(s)).collect();
    let heights = cumulative_integral(&du, h);
    let u: Vec<f64> = heights.iter().map(|v| u0 + v).collect();

    let kappa: Vec<f64> = (0..len)
        .map(|i| {
            if i == 0 {
                f[0] / 2.0
            } else {
                f[i] - sin_psi[i] / nodes[i]
            }
        })
        .collect();

    let c_eff = *nodes.last().unwrap();
    let gamma = if truncated {
        std::f64::consts::FRAC_PI_2.copysign(*sin_psi.last().unwrap())
    } else {
        du.last().unwrap().atan()
    };
    let negative_sin_psi = sin_psi.iter().any(|&s| s < 0.0);

    Ok(SolutionGrid {
        nodes,
        u,
        du,
        sin_psi,
        kappa,
        u0,
        c_requested: c,
        c_eff,
        gamma,
        truncated_vertical: truncated,
        negative_sin_psi,
        method: SolveMethod::Quadrature { n },
    })
}

/// Cumulative integral of uniformly spaced samples, cubic-exact at every
/// node: each interval gets a four-point interpolatory rule (forward on
/// the first, centered inside, backward on the last), so the running sum
/// is fourth order throughout. Short inputs fall back to the highest
/// order their length allows.
fn cumulative_integral(g: &[f64], h: f64) -> Vec<f64> {
    debug_assert!(g.len() >= 2);
    let n = g.len() - 1;
    let mut acc = vec![0.0; g.len()];
    if n == 1 {
        acc[1] = h * (g[0] + g[1]) / 2.0;
        return acc;
    }
    if n == 2 {
        acc[1] = h * (5.0 * g[0] + 8.0 * g[1] - g[2]) / 12.0;
        acc[2] = h * (g[0] + 4.0 * g[1] + g[2]) / 3.0;
        return acc;
    }
    for i in 0..n {
        let seg = if i == 0 {
            h * (9.0 * g[0] + 19.0 * g[1] - 5.0 * g[2] + g[3]) / 24.0
        } else if i + 2 <= n {
            h * (-g[i - 1] + 13.0 * g[i] + 13.0 * g[i + 1] - g[i + 2]) / 24.0
        } else {
            h * (g[i - 2] - 5.0 * g[i - 1] + 19.0 * g[i] + 9.0 * g[i + 1]) / 24.0
        };
        acc[i + 1] = acc[i] + seg;
    }
    acc
}
