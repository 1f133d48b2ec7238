//! Crate-wide error type and the process exit codes the CLI maps it to.

use thiserror::Error;

/// Errors from profile evaluation, solving, geometry, verification and the CLI.
///
/// Bound-check failures are never errors; they are verdicts carried by the
/// report types in [`crate::verify`].
#[derive(Debug, Error)]
pub enum Error {
    /// Evaluation radius outside the supported range of the profile.
    #[error("profile evaluation at r = {r} is outside the supported range [{lo}, {hi}]")]
    ProfileRange { r: f64, lo: f64, hi: f64 },

    /// Operation needs a different argument dependence than the profile has.
    #[error("operation requires a {required} profile, got a {got} one")]
    UnsupportedDependence {
        got: &'static str,
        required: &'static str,
    },

    /// Tabulated profile data failed validation.
    #[error("invalid radial table: {0}")]
    InvalidTable(String),

    /// A caller-supplied argument violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The prescribed curvature forces a vertical tangent already at the
    /// first interior node; no graph solution exists on any subinterval.
    #[error(
        "prescribed curvature is too large near the axis: sin psi = {sin_psi} \
         at the first interior node r = {r}"
    )]
    ImmediateTruncation { r: f64, sin_psi: f64 },

    /// Adaptive integrator drove the step size below the resolvable scale.
    #[error("step size underflow at r = {r} (step {step:.3e}); integration cannot continue")]
    StepUnderflow { r: f64, step: f64 },

    /// An iteration failed to converge within its cap.
    #[error("no convergence after {iterations} iterations")]
    NoConvergence { iterations: usize },

    /// The contact slope vanishes (or is negative), so the comparison circle
    /// degenerates to the horizontal line z = height.
    #[error(
        "contact slope {slope:.3e} at the outer radius is not positive; the comparison \
         circle degenerates to the horizontal line z = {height}"
    )]
    DegenerateSlope { slope: f64, height: f64 },

    /// Circle evaluated outside its arc.
    #[error("r = {r} is outside the circle domain [0, {r_max}]")]
    CircleRange { r: f64, r_max: f64 },

    /// A circle handed to verification was not built from the given grid.
    #[error("circle does not belong to this grid: {0}")]
    GridCircleMismatch(String),

    /// Prescribing a contact angle needs a height-dependent profile; for a
    /// radial-only profile the angle is already determined by f alone.
    #[error(
        "boundary-angle shooting requires a height-dependent profile; a radial-only \
         profile fixes the contact angle independently of u0"
    )]
    ShootingUnderdetermined,

    /// Shooting bracket endpoints do not straddle the target angle.
    #[error(
        "bracket [{lo}, {hi}] does not straddle the target angle \
         (residual {g_lo:.3e} at lo, {g_hi:.3e} at hi)"
    )]
    Bracket {
        lo: f64,
        hi: f64,
        g_lo: f64,
        g_hi: f64,
    },

    /// CLI configuration problem (bad key, bad value, missing parameter).
    #[error("config: {0}")]
    Config(String),

    /// A solution CSV could not be parsed back.
    #[error("csv: {0}")]
    CsvParse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code the CLI uses for this error.
    ///
    /// 2 = configuration / input, 3 = solver or numeric failure,
    /// 4 = degenerate comparison geometry. (0 = success and 5 =
    /// verification failed are produced by the commands themselves.)
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::CsvParse(_) => 2,
            Error::DegenerateSlope { .. } => 4,
            _ => 3,
        }
    }
}
