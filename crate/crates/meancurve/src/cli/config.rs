//! Argument and configuration handling.
//!
//! Every run is described by the same flat key set, given as command-line
//! flags, as `key = value` lines in a `--config` file, or both; flags
//! override file values. Validation turns the merged keys into a
//! [`RunConfig`] and reports problems as [`Error::Config`] naming the
//! offending key.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::profiles::{Profile, RadialTable};

/// Default interval count for the radial quadrature solver.
pub const DEFAULT_INTERVALS: usize = 2000;
/// Default tolerance for the adaptive solver.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Parser, Debug)]
#[command(
    name = "meancurve",
    version,
    about = "Solve the axisymmetric prescribed-mean-curvature equation and \
             certify its circle bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve the profile equation and write the solution CSV.
    Solve(SolveArgs),
    /// Solve, verify bounds and inequalities, and print a report.
    Check(CheckArgs),
    /// Solve and render the solution with its bounding arcs as SVG.
    Plot(PlotArgs),
    /// Sweep one scalar parameter and tabulate per-value results.
    Sweep(SweepArgs),
    /// List the built-in profile families and when their bounds are certified.
    Presets,
}

/// Keys shared by all solving subcommands. Each one can also be given in
/// the `--config` file under the same name (`B` for the capillary
/// coefficient); flags win.
#[derive(Args, Debug, Default, Clone)]
pub struct CommonArgs {
    /// Profile family: constant | linear | quadratic | exponential | sine |
    /// capillary | compressible | custom.
    #[arg(long)]
    pub profile: Option<String>,

    /// Constant profile value (profile `constant`).
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<f64>,

    /// First coefficient (profiles `linear`, `quadratic`, `exponential`,
    /// `compressible`).
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,

    /// Second coefficient (profiles `linear`, `quadratic`, `compressible`).
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,

    /// Height coupling coefficient of the capillary profile (f = B u).
    #[arg(long = "B", allow_negative_numbers = true)]
    pub bond: Option<f64>,

    /// Constant offset of the compressible profile.
    #[arg(long, allow_negative_numbers = true)]
    pub c3: Option<f64>,

    /// Tabulated radial profile: a file with one `r,f` pair per line
    /// (profile `custom`).
    #[arg(long)]
    pub table: Option<PathBuf>,

    /// Outer radius of the solve window.
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,

    /// Height at the axis.
    #[arg(long, allow_negative_numbers = true)]
    pub u0: Option<f64>,

    /// Target inclination angle at r = c, solved for by shooting on u0.
    /// Radians by default; append `deg` for degrees.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,

    /// Shooting search bracket for u0, as `lo,hi`.
    #[arg(long, allow_hyphen_values = true)]
    pub bracket: Option<String>,

    /// Interval count for the radial quadrature solver (rounded up to even).
    #[arg(long)]
    pub n: Option<usize>,

    /// Local error tolerance for the adaptive solver.
    #[arg(long, allow_negative_numbers = true)]
    pub tol: Option<f64>,

    /// Flat `key = value` config file; explicit flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Output path (CSV or SVG depending on the subcommand).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Verify the circle bounds after solving and fail (exit 5) when any
    /// verdict is negative.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Verify a previously emitted solution CSV instead of solving;
    /// profile-independent checks only.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["profile", "gamma"])]
    pub from_csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Sweep descriptor `param,from,to,steps`: solve once per value of the
    /// named scalar (a profile parameter or `u0`) on a uniform grid.
    #[arg(long)]
    pub sweep: Option<String>,
}

/// How the solve is anchored at the axis.
#[derive(Debug, Clone, PartialEq)]
pub enum Start {
    /// `u(0)` given directly.
    Height(f64),
    /// Endpoint angle given; shooting recovers `u(0)` inside the bracket.
    Angle { gamma: f64, bracket: (f64, f64) },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl SweepSpec {
    /// The i-th swept value on the uniform grid.
    pub fn value(&self, i: usize) -> f64 {
        self.from + (self.to - self.from) * i as f64 / (self.steps - 1) as f64
    }
}

/// A validated run description.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub profile: Profile,
    pub c: f64,
    pub start: Start,
    pub n: usize,
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub strict: bool,
    pub sweep: Option<SweepSpec>,
}

/// Merged but not yet validated key values.
#[derive(Debug, Default)]
struct Raw {
    profile: Option<String>,
    k: Option<f64>,
    a: Option<f64>,
    b: Option<f64>,
    bond: Option<f64>,
    c3: Option<f64>,
    table: Option<PathBuf>,
    c: Option<f64>,
    u0: Option<f64>,
    gamma: Option<String>,
    bracket: Option<String>,
    n: Option<usize>,
    tol: Option<f64>,
    out: Option<PathBuf>,
    strict: bool,
    sweep: Option<String>,
}

/// Builds the validated [`RunConfig`] for a subcommand from its common
/// flags plus the subcommand-specific ones.
pub fn build_config(
    common: &CommonArgs,
    strict: bool,
    sweep: Option<&str>,
) -> Result<RunConfig, Error> {
    let file = match &common.config {
        Some(path) => parse_config_file(path)?,
        None => HashMap::new(),
    };
    let raw = merge(common, strict, sweep, &file)?;
    validate(raw)
}

/// Parses a flat `key = value` file. `#` starts a comment; blank lines are
/// skipped; keys may not repeat.
fn parse_config_file(path: &Path) -> Result<HashMap<String, String>, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("config file `{}`: {e}", path.display())))?;
    let mut map = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Config(format!(
                "config file `{}` line {}: expected `key = value`, got `{line}`",
                path.display(),
                lineno + 1
            )));
        };
        let (key, value) = (key.trim().to_string(), value.trim().to_string());
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(Error::Config(format!(
                "config file `{}` line {}: unknown key `{key}`",
                path.display(),
                lineno + 1
            )));
        }
        if map.insert(key.clone(), value).is_some() {
            return Err(Error::Config(format!(
                "config file `{}` line {}: duplicate key `{key}`",
                path.display(),
                lineno + 1
            )));
        }
    }
    Ok(map)
}

const KNOWN_KEYS: &[&str] = &[
    "profile", "k", "a", "b", "B", "c3", "table", "c", "u0", "gamma", "bracket", "n", "tol",
    "out", "strict", "sweep",
];

fn merge(
    common: &CommonArgs,
    strict: bool,
    sweep: Option<&str>,
    file: &HashMap<String, String>,
) -> Result<Raw, Error> {
    let str_key = |flag: &Option<String>, key: &str| -> Option<String> {
        flag.clone().or_else(|| file.get(key).cloned())
    };
    let path_key = |flag: &Option<PathBuf>, key: &str| -> Option<PathBuf> {
        flag.clone().or_else(|| file.get(key).map(PathBuf::from))
    };
    let f64_key = |flag: Option<f64>, key: &str| -> Result<Option<f64>, Error> {
        match (flag, file.get(key)) {
            (Some(v), _) => Ok(Some(v)),
            (None, None) => Ok(None),
            (None, Some(s)) => s
                .parse()
                .map(Some)
                .map_err(|_| Error::Config(format!("key `{key}`: expected a number, got `{s}`"))),
        }
    };
    let usize_key = |flag: Option<usize>, key: &str| -> Result<Option<usize>, Error> {
        match (flag, file.get(key)) {
            (Some(v), _) => Ok(Some(v)),
            (None, None) => Ok(None),
            (None, Some(s)) => s.parse().map(Some).map_err(|_| {
                Error::Config(format!("key `{key}`: expected a positive integer, got `{s}`"))
            }),
        }
    };
    let strict = if strict {
        true
    } else {
        match file.get("strict").map(String::as_str) {
            None => false,
            Some("true") | Some("1") => true,
            Some("false") | Some("0") => false,
            Some(other) => {
                return Err(Error::Config(format!(
                    "key `strict`: expected true or false, got `{other}`"
                )))
            }
        }
    };

    Ok(Raw {
        profile: str_key(&common.profile, "profile"),
        k: f64_key(common.k, "k")?,
        a: f64_key(common.a, "a")?,
        b: f64_key(common.b, "b")?,
        bond: f64_key(common.bond, "B")?,
        c3: f64_key(common.c3, "c3")?,
        table: path_key(&common.table, "table"),
        c: f64_key(common.c, "c")?,
        u0: f64_key(common.u0, "u0")?,
        gamma: str_key(&common.gamma, "gamma"),
        bracket: str_key(&common.bracket, "bracket"),
        n: usize_key(common.n, "n")?,
        tol: f64_key(common.tol, "tol")?,
        out: path_key(&common.out, "out"),
        strict,
        sweep: sweep.map(str::to_string).or_else(|| file.get("sweep").cloned()),
    })
}

fn validate(mut raw: Raw) -> Result<RunConfig, Error> {
    // The swept parameter needs no base value: the sweep's start value
    // stands in while the profile is assembled, and each row replaces it.
    let sweep_parts = match &raw.sweep {
        None => None,
        Some(descr) => Some(parse_sweep_parts(descr)?),
    };
    if let Some(spec) = &sweep_parts {
        let slot = match spec.param.as_str() {
            "k" => Some(&mut raw.k),
            "a" => Some(&mut raw.a),
            "b" => Some(&mut raw.b),
            "B" => Some(&mut raw.bond),
            "c3" => Some(&mut raw.c3),
            "u0" if raw.gamma.is_none() => Some(&mut raw.u0),
            _ => None,
        };
        if let Some(slot) = slot {
            slot.get_or_insert(spec.from);
        }
    }

    let profile = build_profile(&raw)?;

    let c = raw
        .c
        .ok_or_else(|| Error::Config("missing key `c` (outer radius)".into()))?;
    if !c.is_finite() || c <= 0.0 {
        return Err(Error::Config(format!(
            "key `c`: outer radius must be positive and finite, got {c}"
        )));
    }

    let radial = !matches!(
        profile,
        Profile::Capillary { .. } | Profile::Compressible { .. }
    );
    let start = match (raw.u0, &raw.gamma) {
        (Some(_), Some(_)) => {
            return Err(Error::Config(
                "keys `u0` and `gamma` are mutually exclusive".into(),
            ))
        }
        (Some(u0), None) => {
            if raw.bracket.is_some() {
                return Err(Error::Config("key `bracket` requires `gamma`".into()));
            }
            Start::Height(u0)
        }
        (None, Some(gamma)) => {
            if radial {
                return Err(Error::Config(format!(
                    "key `gamma` is not valid for the radial profile `{}`; \
                     its endpoint angle follows from `u0`",
                    profile.kind_name()
                )));
            }
            let gamma = parse_angle(gamma)?;
            let bracket = match &raw.bracket {
                Some(b) => parse_bracket(b)?,
                None => {
                    return Err(Error::Config(
                        "key `bracket` is required when `gamma` is given".into(),
                    ))
                }
            };
            Start::Angle { gamma, bracket }
        }
        (None, None) => {
            return Err(Error::Config(format!(
                "profile `{}` needs `u0`{}",
                profile.kind_name(),
                if radial { "" } else { " or `gamma`" }
            )))
        }
    };

    let n = raw.n.unwrap_or(DEFAULT_INTERVALS);
    if n < crate::solver::MIN_INTERVALS {
        return Err(Error::Config(format!(
            "key `n`: need at least {} intervals, got {n}",
            crate::solver::MIN_INTERVALS
        )));
    }
    let tol = raw.tol.unwrap_or(DEFAULT_TOL);
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Config(format!(
            "key `tol`: tolerance must be positive and finite, got {tol}"
        )));
    }

    let sweep = match sweep_parts {
        None => None,
        Some(spec) => {
            validate_sweep(&spec, &profile, &start)?;
            Some(spec)
        }
    };

    Ok(RunConfig {
        profile,
        c,
        start,
        n,
        tol,
        out: raw.out,
        strict: raw.strict,
        sweep,
    })
}

fn build_profile(raw: &Raw) -> Result<Profile, Error> {
    let kind = raw
        .profile
        .as_deref()
        .ok_or_else(|| Error::Config("missing key `profile`".into()))?;

    // Parameters each family accepts; anything else present is a typo.
    let (profile, used): (Profile, &[&str]) = match kind {
        "constant" => (
            Profile::Constant {
                k: require(raw.k, "k", kind)?,
            },
            &["k"],
        ),
        "linear" => (
            Profile::Linear {
                a: require(raw.a, "a", kind)?,
                b: require(raw.b, "b", kind)?,
            },
            &["a", "b"],
        ),
        "quadratic" => (
            Profile::Quadratic {
                a: require(raw.a, "a", kind)?,
                b: require(raw.b, "b", kind)?,
            },
            &["a", "b"],
        ),
        "exponential" => (
            Profile::Exponential {
                a: require(raw.a, "a", kind)?,
            },
            &["a"],
        ),
        "sine" => (Profile::Sine, &[]),
        "capillary" => (
            Profile::Capillary {
                bond: require(raw.bond, "B", kind)?,
            },
            &["B"],
        ),
        "compressible" => (
            Profile::Compressible {
                a: require(raw.a, "a", kind)?,
                b: require(raw.b, "b", kind)?,
                c3: require(raw.c3, "c3", kind)?,
            },
            &["a", "b", "c3"],
        ),
        "custom" => {
            let path = raw.table.as_ref().ok_or_else(|| {
                Error::Config("missing key `table` for profile `custom`".into())
            })?;
            (
                Profile::CustomRadial {
                    table: load_table(path)?,
                },
                &["table"],
            )
        }
        other => {
            return Err(Error::Config(format!(
                "key `profile`: unknown family `{other}` (see `presets`)"
            )))
        }
    };

    let given: &[(&str, bool)] = &[
        ("k", raw.k.is_some()),
        ("a", raw.a.is_some()),
        ("b", raw.b.is_some()),
        ("B", raw.bond.is_some()),
        ("c3", raw.c3.is_some()),
        ("table", raw.table.is_some()),
    ];
    for (key, present) in given {
        if *present && !used.contains(key) {
            return Err(Error::Config(format!(
                "key `{key}` is not a parameter of profile `{kind}`"
            )));
        }
    }
    Ok(profile)
}

fn require(v: Option<f64>, key: &str, kind: &str) -> Result<f64, Error> {
    v.ok_or_else(|| Error::Config(format!("missing key `{key}` for profile `{kind}`")))
}

/// Reads a tabulated profile: one `r,f` (or whitespace-separated) pair per
/// line, `#` comments allowed.
fn load_table(path: &Path) -> Result<RadialTable, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("key `table`: `{}`: {e}", path.display())))?;
    let mut points = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split(|ch: char| ch == ',' || ch.is_whitespace());
        let mut next = |what: &str| -> Result<f64, Error> {
            parts
                .by_ref()
                .find(|s| !s.is_empty())
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| {
                    Error::Config(format!(
                        "key `table`: `{}` line {}: expected {what} in `{line}`",
                        path.display(),
                        lineno + 1
                    ))
                })
        };
        let r = next("a radius")?;
        let f = next("a profile value")?;
        points.push((r, f));
    }
    RadialTable::new(points)
        .map_err(|e| Error::Config(format!("key `table`: `{}`: {e}", path.display())))
}

/// Parses an angle: radians by default, degrees with a `deg` suffix.
fn parse_angle(s: &str) -> Result<f64, Error> {
    let t = s.trim();
    let (body, degrees) = match t.strip_suffix("deg") {
        Some(body) => (body.trim_end(), true),
        None => (t, false),
    };
    let v: f64 = body
        .parse()
        .map_err(|_| Error::Config(format!("key `gamma`: expected an angle, got `{s}`")))?;
    Ok(if degrees { v.to_radians() } else { v })
}

fn parse_bracket(s: &str) -> Result<(f64, f64), Error> {
    let bad = || Error::Config(format!("key `bracket`: expected `lo,hi`, got `{s}`"));
    let (lo, hi) = s.split_once(',').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Config(format!(
            "key `bracket`: need lo < hi, got {lo},{hi}"
        )));
    }
    Ok((lo, hi))
}

/// Syntactic half of sweep parsing: `param,from,to,steps`.
fn parse_sweep_parts(descr: &str) -> Result<SweepSpec, Error> {
    let bad = || {
        Error::Config(format!(
            "key `sweep`: expected `param,from,to,steps`, got `{descr}`"
        ))
    };
    let parts: Vec<&str> = descr.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(bad());
    }
    let param = parts[0].to_string();
    let from: f64 = parts[1].parse().map_err(|_| bad())?;
    let to: f64 = parts[2].parse().map_err(|_| bad())?;
    let steps: usize = parts[3].parse().map_err(|_| bad())?;
    if steps < 2 {
        return Err(Error::Config(format!(
            "key `sweep`: need at least 2 steps, got {steps}"
        )));
    }
    if !(from.is_finite() && to.is_finite()) || from == to {
        return Err(Error::Config(format!(
            "key `sweep`: need distinct finite endpoints, got {from} and {to}"
        )));
    }
    Ok(SweepSpec {
        param,
        from,
        to,
        steps,
    })
}

/// Semantic half: the swept name must be a scalar of this profile (or
/// `u0`), and sweeping `u0` makes no sense under a `gamma` start.
fn validate_sweep(spec: &SweepSpec, profile: &Profile, start: &Start) -> Result<(), Error> {
    let param = &spec.param;
    let allowed: &[&str] = match profile {
        Profile::Constant { .. } => &["k", "u0"],
        Profile::Linear { .. } | Profile::Quadratic { .. } => &["a", "b", "u0"],
        Profile::Exponential { .. } => &["a", "u0"],
        Profile::Sine => &["u0"],
        Profile::Capillary { .. } => &["B", "u0"],
        Profile::Compressible { .. } => &["a", "b", "c3", "u0"],
        Profile::CustomRadial { .. } => &["u0"],
    };
    if !allowed.contains(&param.as_str()) {
        return Err(Error::Config(format!(
            "key `sweep`: `{param}` is not a sweepable scalar of profile `{}` \
             (one of: {})",
            profile.kind_name(),
            allowed.join(", ")
        )));
    }
    if param == "u0" && !matches!(start, Start::Height(_)) {
        return Err(Error::Config(
            "key `sweep`: sweeping `u0` conflicts with `gamma`".into(),
        ));
    }
    Ok(())
}

/// Returns the run config with the swept parameter set to `value`.
pub fn with_swept_value(cfg: &RunConfig, param: &str, value: f64) -> (Profile, Start) {
    let mut profile = cfg.profile.clone();
    let mut start = cfg.start.clone();
    match (&mut profile, param) {
        (_, "u0") => start = Start::Height(value),
        (Profile::Constant { k }, "k") => *k = value,
        (Profile::Linear { a, .. }, "a") | (Profile::Quadratic { a, .. }, "a") => *a = value,
        (Profile::Linear { b, .. }, "b") | (Profile::Quadratic { b, .. }, "b") => *b = value,
        (Profile::Exponential { a }, "a") => *a = value,
        (Profile::Capillary { bond }, "B") => *bond = value,
        (Profile::Compressible { a, .. }, "a") => *a = value,
        (Profile::Compressible { b, .. }, "b") => *b = value,
        (Profile::Compressible { c3, .. }, "c3") => *c3 = value,
        _ => unreachable!("sweep parameter validated against the profile"),
    }
    (profile, start)
}
