//! Solution and sweep CSV emission, and the solution parser used for
//! round-trip re-verification.
//!
//! Numbers are written with the shortest representation that parses back
//! to the identical float (at most 17 significant digits), so an emitted
//! file re-read through [`parse_solution_csv`] reproduces every column
//! bit for bit and identical runs produce byte-identical files.

use crate::error::Error;
use crate::geometry::ComparisonCircle;
use crate::solver::{SolutionGrid, SolveMethod, VERTICAL_GUARD};

pub const SOLUTION_HEADER: &str = "r,u,du,sin_psi,kappa,y,w,margin_upper,margin_lower";

/// Renders the solution CSV: one row per node, the circle columns filled
/// when the arcs exist and left empty in the degenerate-slope case.
pub fn solution_csv(
    grid: &SolutionGrid,
    arcs: Option<(&ComparisonCircle, &ComparisonCircle)>,
) -> Result<String, Error> {
    use std::fmt::Write;
    let mut out = String::with_capacity(64 * (grid.len() + 1));
    out.push_str(SOLUTION_HEADER);
    out.push('\n');
    for i in 0..grid.len() {
        let (r, u) = (grid.nodes[i], grid.u[i]);
        write!(
            out,
            "{r},{u},{},{},{}",
            grid.du[i], grid.sin_psi[i], grid.kappa[i]
        )
        .expect("string write");
        match arcs {
            Some((y, w)) => {
                let yv = y.eval(r)?.0;
                let wv = w.eval(r)?.0;
                write!(out, ",{yv},{wv},{},{}", yv - u, u - wv).expect("string write");
            }
            None => out.push_str(",,,,"),
        }
        out.push('\n');
    }
    Ok(out)
}

/// Rebuilds a [`SolutionGrid`] from an emitted solution CSV. Only the five
/// grid columns are read; the circle columns, when present, are recomputed
/// from the grid by the caller so verification cannot be fed tampered
/// margins.
pub fn parse_solution_csv(text: &str) -> Result<SolutionGrid, Error> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == SOLUTION_HEADER => {}
        other => {
            return Err(Error::CsvParse(format!(
                "expected header `{SOLUTION_HEADER}`, got `{}`",
                other.map(|(_, h)| h).unwrap_or("")
            )))
        }
    }

    let mut nodes = Vec::new();
    let mut u = Vec::new();
    let mut du = Vec::new();
    let mut sin_psi = Vec::new();
    let mut kappa = Vec::new();
    for (lineno, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(Error::CsvParse(format!(
                "line {}: expected 9 fields, got {}",
                lineno + 1,
                fields.len()
            )));
        }
        let num = |idx: usize, name: &str| -> Result<f64, Error> {
            fields[idx].parse().map_err(|_| {
                Error::CsvParse(format!(
                    "line {}: column `{name}`: expected a number, got `{}`",
                    lineno + 1,
                    fields[idx]
                ))
            })
        };
        nodes.push(num(0, "r")?);
        u.push(num(1, "u")?);
        du.push(num(2, "du")?);
        sin_psi.push(num(3, "sin_psi")?);
        kappa.push(num(4, "kappa")?);
    }

    if nodes.len() < 3 {
        return Err(Error::CsvParse(format!(
            "need at least 3 rows, got {}",
            nodes.len()
        )));
    }
    if nodes[0] != 0.0 {
        return Err(Error::CsvParse(format!(
            "first row must be the axis node r = 0, got r = {}",
            nodes[0]
        )));
    }
    // partial_cmp also rejects NaN radii.
    if nodes
        .windows(2)
        .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
    {
        return Err(Error::CsvParse("radii must be strictly increasing".into()));
    }

    let c_eff = *nodes.last().expect("nonempty");
    let s_end = *sin_psi.last().expect("nonempty");
    let truncated = s_end.abs() > 1.0 - 2.0 * VERTICAL_GUARD;
    let gamma = if truncated {
        std::f64::consts::FRAC_PI_2.copysign(s_end)
    } else {
        du.last().expect("nonempty").atan()
    };
    let negative_sin_psi = sin_psi.iter().any(|&s| s < 0.0);
    Ok(SolutionGrid {
        u0: u[0],
        nodes,
        u,
        du,
        sin_psi,
        kappa,
        c_requested: c_eff,
        c_eff,
        gamma,
        truncated_vertical: truncated,
        negative_sin_psi,
        method: SolveMethod::Parsed,
    })
}

pub const SWEEP_HEADER: &str =
    "param,value,status,gamma,R,u_end,vol_y,vol_u,vol_w,min_margin_upper,min_margin_lower";

/// One computed sweep row; `Err`-like outcomes carry a status word and
/// empty numeric cells so a sweep never aborts half way.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub param: String,
    pub value: f64,
    pub status: &'static str,
    pub numbers: Option<SweepNumbers>,
}

#[derive(Debug, Clone)]
pub struct SweepNumbers {
    pub gamma: f64,
    pub radius: f64,
    pub u_end: f64,
    pub vol_y: f64,
    pub vol_u: f64,
    pub vol_w: f64,
    pub min_margin_upper: f64,
    pub min_margin_lower: f64,
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for row in rows {
        write!(out, "{},{},{}", row.param, row.value, row.status).expect("string write");
        match &row.numbers {
            Some(v) => write!(
                out,
                ",{},{},{},{},{},{},{},{}",
                v.gamma,
                v.radius,
                v.u_end,
                v.vol_y,
                v.vol_u,
                v.vol_w,
                v.min_margin_upper,
                v.min_margin_lower
            )
            .expect("string write"),
            None => out.push_str(",,,,,,,,"),
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{lower_circle, upper_circle};
    use crate::profiles::Profile;
    use crate::solver::solve_radial_quadrature;

    fn grid() -> SolutionGrid {
        solve_radial_quadrature(&Profile::Linear { a: 1.0, b: 0.0 }, 1.0, 0.25, 64).unwrap()
    }

    #[test]
    fn round_trip_reproduces_every_column() {
        let g = grid();
        let y = upper_circle(&g).unwrap();
        let w = lower_circle(&g, &y).unwrap();
        let text = solution_csv(&g, Some((&y, &w))).unwrap();
        assert!(text.starts_with(SOLUTION_HEADER));
        assert_eq!(text.lines().count(), g.len() + 1);

        let parsed = parse_solution_csv(&text).unwrap();
        assert_eq!(parsed.nodes, g.nodes);
        assert_eq!(parsed.u, g.u);
        assert_eq!(parsed.du, g.du);
        assert_eq!(parsed.sin_psi, g.sin_psi);
        assert_eq!(parsed.kappa, g.kappa);
        assert_eq!(parsed.u0, g.u0);
        assert_eq!(parsed.c_eff, g.c_eff);
        assert_eq!(parsed.gamma, g.gamma);
        assert_eq!(parsed.method, SolveMethod::Parsed);

        // Re-emitting the parsed grid gives the identical file.
        let y2 = upper_circle(&parsed).unwrap();
        let w2 = lower_circle(&parsed, &y2).unwrap();
        assert_eq!(solution_csv(&parsed, Some((&y2, &w2))).unwrap(), text);
    }

    #[test]
    fn degenerate_rows_have_empty_circle_cells() {
        let g = solve_radial_quadrature(&Profile::Constant { k: 0.0 }, 1.0, 0.5, 32).unwrap();
        let text = solution_csv(&g, None).unwrap();
        let row = text.lines().nth(1).unwrap();
        assert!(row.ends_with(",,,,"), "{row}");
        let parsed = parse_solution_csv(&text).unwrap();
        assert_eq!(parsed.u, g.u);
    }

    #[test]
    fn parser_rejects_malformed_input() {
        assert!(matches!(
            parse_solution_csv("nope\n"),
            Err(Error::CsvParse(_))
        ));
        let short = format!("{SOLUTION_HEADER}\n1,2,3\n");
        assert!(matches!(parse_solution_csv(&short), Err(Error::CsvParse(_))));
        let bad_axis = format!("{SOLUTION_HEADER}\n0.5,0,0,0,1,,,,\n0.7,0,0,0,1,,,,\n1,0,0,0,1,,,,\n");
        assert!(matches!(
            parse_solution_csv(&bad_axis),
            Err(Error::CsvParse(_))
        ));
        let bad_num = format!("{SOLUTION_HEADER}\n0,0,0,0,x,,,,\n0.5,0,0,0,1,,,,\n1,0,0,0,1,,,,\n");
        let err = parse_solution_csv(&bad_num).unwrap_err();
        assert!(err.to_string().contains("kappa"), "{err}");
    }

    #[test]
    fn sweep_rows_keep_failures_inline() {
        let rows = vec![
            SweepRow {
                param: "B".into(),
                value: 0.5,
                status: "ok",
                numbers: Some(SweepNumbers {
                    gamma: 0.1,
                    radius: 2.0,
                    u_end: 0.6,
                    vol_y: 3.0,
                    vol_u: 2.0,
                    vol_w: 1.0,
                    min_margin_upper: 0.01,
                    min_margin_lower: 0.02,
                }),
            },
            SweepRow {
                param: "B".into(),
                value: 2.0,
                status: "solver-error",
                numbers: None,
            },
        ];
        let text = sweep_csv(&rows);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(SWEEP_HEADER));
        assert_eq!(lines.next(), Some("B,0.5,ok,0.1,2,0.6,3,2,1,0.01,0.02"));
        assert_eq!(lines.next(), Some("B,2,solver-error,,,,,,,,"));
    }
}
