//! Convergence-study harness: runs a registry problem over a ladder of
//! dyadic step sizes, measures max errors against the exact solution and
//! renders the table as CSV or markdown.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::Grid;
use crate::problems::make_problem;
use crate::solver::{solve, solve_corrected, NewtonConfig};
use crate::weights::Order;

/// Report rendering format.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutputFormat::Csv => write!(f, "csv"),
            OutputFormat::Markdown => write!(f, "markdown"),
        }
    }
}

fn default_t() -> f64 {
    1.0
}

/// Everything needed to run one study; also the on-disk JSON config shape.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StudySpec {
    pub problem: String,
    pub nu: Vec<f64>,
    /// Dyadic levels `l`; the step size is `dx = 2^-l`.
    pub levels: Vec<u32>,
    #[serde(default = "default_t")]
    pub t: f64,
    #[serde(default)]
    pub corrected: bool,
    /// Correction exponent rule, e.g. `k*nu:3`; defaults to `k*nu:3` when
    /// `corrected` is set.
    #[serde(default)]
    pub sigma_rule: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl StudySpec {
    pub fn validate(&self) -> Result<()> {
        if self.nu.is_empty() || self.levels.is_empty() {
            return Err(Error::InvalidConfig(
                "study needs at least one order and one level".into(),
            ));
        }
        for w in self.levels.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidConfig(
                    "levels must be strictly increasing".into(),
                ));
            }
        }
        for &l in &self.levels {
            // T / 2^-l must be an even point count
            Grid::with_step(self.t, 0.5f64.powi(l as i32))?;
        }
        for &nu in &self.nu {
            Order::new(nu)?;
        }
        Ok(())
    }
}

/// Parses a sigma rule of the form `k*nu:m` into concrete exponents.
pub fn parse_sigma_rule(rule: &str, nu: f64) -> Result<Vec<f64>> {
    let (lhs, m) = rule
        .split_once(':')
        .ok_or_else(|| Error::InvalidConfig(format!("sigma rule `{rule}` is not `k*nu:m`")))?;
    if lhs.trim() != "k*nu" {
        return Err(Error::InvalidConfig(format!(
            "unsupported sigma rule `{lhs}`, only `k*nu` is available"
        )));
    }
    let m: usize = m
        .trim()
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("bad correction count in `{rule}`")))?;
    if !(1..=crate::corrections::MAX_CORRECTIONS).contains(&m) {
        return Err(Error::InvalidConfig(format!(
            "correction count {m} outside 1..={}",
            crate::corrections::MAX_CORRECTIONS
        )));
    }
    Ok((1..=m).map(|k| k as f64 * nu).collect())
}

/// One refinement level of a study.
#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub dx: f64,
    pub max_error: f64,
    /// `log2(e_{2dx} / e_dx)`; absent on the coarsest row.
    pub order: Option<f64>,
}

/// Measured errors and observed orders for one `(problem, nu)` column.
#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub problem: String,
    pub nu: f64,
    pub corrected: bool,
    pub rows: Vec<ConvergenceRow>,
}

/// Runs the study; one report per entry of `spec.nu`, rows ordered by level.
pub fn run_study(spec: &StudySpec) -> Result<Vec<ConvergenceReport>> {
    spec.validate()?;
    let cfg = NewtonConfig::default();
    let cells: Vec<(usize, usize)> = (0..spec.nu.len())
        .flat_map(|i| (0..spec.levels.len()).map(move |j| (i, j)))
        .collect();

    let errors: Vec<f64> = cells
        .par_iter()
        .map(|&(i, j)| -> Result<f64> {
            let order = Order::new(spec.nu[i])?;
            let problem = make_problem(&spec.problem, order)?;
            if !problem.has_exact() {
                return Err(Error::InvalidConfig(format!(
                    "problem `{}` has no exact solution to measure against",
                    spec.problem
                )));
            }
            let grid = Grid::with_step(spec.t, 0.5f64.powi(spec.levels[j] as i32))?;
            let traj = if spec.corrected {
                let rule = spec.sigma_rule.as_deref().unwrap_or("k*nu:3");
                let sigma = parse_sigma_rule(rule, order.nu())?;
                solve_corrected(&problem, grid, &cfg, &sigma)?
            } else {
                solve(&problem, grid, &cfg)?
            };
            Ok(traj.max_error(&problem).unwrap())
        })
        .collect::<Result<_>>()?;

    let mut reports = Vec::with_capacity(spec.nu.len());
    for (i, &nu) in spec.nu.iter().enumerate() {
        let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(spec.levels.len());
        for (j, &l) in spec.levels.iter().enumerate() {
            let e = errors[i * spec.levels.len() + j];
            let prev: Option<&ConvergenceRow> = rows.last();
            let order = prev.map(|p| p.max_error.log2() - e.log2());
            rows.push(ConvergenceRow {
                dx: 0.5f64.powi(l as i32),
                max_error: e,
                order,
            });
        }
        reports.push(ConvergenceReport {
            problem: spec.problem.clone(),
            nu,
            corrected: spec.corrected,
            rows,
        });
    }
    Ok(reports)
}

fn dx_label(dx: f64) -> String {
    let inv = 1.0 / dx;
    if (inv - inv.round()).abs() < 1e-9 && inv >= 1.0 {
        if inv.round() == 1.0 {
            "1".to_string()
        } else {
            format!("1/{}", inv.round() as u64)
        }
    } else {
        format!("{dx:.6e}")
    }
}

/// Renders a single-column report; CSV keeps the `dx,max_error,order` header.
pub fn emit_report(report: &ConvergenceReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("dx,max_error,order\n");
            for row in &report.rows {
                let order = row.order.map(|o| format!("{o:.4}")).unwrap_or_default();
                out.push_str(&format!("{:e},{:.4e},{}\n", row.dx, row.max_error, order));
            }
            out
        }
        OutputFormat::Markdown => {
            let mut out = format!(
                "### {}{}, nu = {}\n\n| dx | max error | order |\n|---|---|---|\n",
                report.problem,
                if report.corrected { " (corrected)" } else { "" },
                report.nu
            );
            for row in &report.rows {
                let order = row.order.map(|o| format!("{o:.4}")).unwrap_or("-".into());
                out.push_str(&format!(
                    "| {} | {:.4e} | {} |\n",
                    dx_label(row.dx),
                    row.max_error,
                    order
                ));
            }
            out
        }
    }
}

/// Parses rows back out of the CSV emitted by [`emit_report`].
pub fn parse_csv_report(text: &str) -> Result<Vec<ConvergenceRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some("dx,max_error,order") => {}
        other => return Err(Error::InvalidConfig(format!("bad CSV header: {other:?}"))),
    }
    let mut rows = Vec::new();
    for line in lines {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidConfig(format!("bad CSV row: {line}")));
        }
        let dx: f64 = parts[0]
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad dx in: {line}")))?;
        let max_error: f64 = parts[1]
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad error in: {line}")))?;
        let order = if parts[2].is_empty() {
            None
        } else {
            Some(
                parts[2]
                    .parse()
                    .map_err(|_| Error::InvalidConfig(format!("bad order in: {line}")))?,
            )
        };
        rows.push(ConvergenceRow {
            dx,
            max_error,
            order,
        });
    }
    Ok(rows)
}

/// Renders several same-ladder reports side by side, one error/order column
/// pair per order, mirroring the usual convergence-table layout.
pub fn emit_combined_markdown(reports: &[ConvergenceReport]) -> String {
    if reports.is_empty() {
        return String::new();
    }
    let shared_ladder = reports.windows(2).all(|w| {
        w[0].rows.len() == w[1].rows.len()
            && w[0].rows.iter().zip(&w[1].rows).all(|(a, b)| a.dx == b.dx)
    });
    if !shared_ladder {
        return reports
            .iter()
            .map(|r| emit_report(r, OutputFormat::Markdown))
            .collect::<Vec<_>>()
            .join("\n");
    }
    let mut out = format!(
        "### {}{}\n\n| dx |",
        reports[0].problem,
        if reports[0].corrected {
            " (corrected)"
        } else {
            ""
        }
    );
    for r in reports {
        out.push_str(&format!(" nu={} | order |", r.nu));
    }
    out.push('\n');
    out.push_str("|---|");
    for _ in reports {
        out.push_str("---|---|");
    }
    out.push('\n');
    for i in 0..reports[0].rows.len() {
        out.push_str(&format!("| {} |", dx_label(reports[0].rows[i].dx)));
        for r in reports {
            let row = &r.rows[i];
            let order = row.order.map(|o| format!("{o:.4}")).unwrap_or("-".into());
            out.push_str(&format!(" {:.4e} | {} |", row.max_error, order));
        }
        out.push('\n');
    }
    out
}

/// Trajectory dump for the CLI `solve` subcommand.
pub fn trajectory_csv(
    traj: &crate::solver::Trajectory,
    problem: &crate::solver::Problem,
) -> String {
    let with_exact = problem.has_exact();
    let mut out = String::from(if with_exact {
        "x,y,exact,error\n"
    } else {
        "x,y\n"
    });
    for (k, y) in traj.values.iter().enumerate() {
        let x = traj.grid.x(k);
        if with_exact {
            let e = problem.exact(x).unwrap();
            out.push_str(&format!("{x:e},{y:.17e},{e:.17e},{:.4e}\n", (e - y).abs()));
        } else {
            out.push_str(&format!("{x:e},{y:.17e}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_rule_parsing() {
        let s = parse_sigma_rule("k*nu:3", 0.4).unwrap();
        assert_eq!(s.len(), 3);
        assert!((s[2] - 1.2).abs() < 1e-15);
        assert!(parse_sigma_rule("k*nu", 0.4).is_err());
        assert!(parse_sigma_rule("k^2*nu:2", 0.4).is_err());
        assert!(parse_sigma_rule("k*nu:0", 0.4).is_err());
        assert!(parse_sigma_rule("k*nu:9", 0.4).is_err());
    }

    #[test]
    fn study_runs_and_orders_trend_to_3_minus_nu() {
        let spec = StudySpec {
            problem: "example1".into(),
            nu: vec![0.5],
            levels: vec![3, 4, 5, 6],
            t: 1.0,
            corrected: false,
            sigma_rule: None,
            format: OutputFormat::Csv,
            out: None,
        };
        let reports = run_study(&spec).unwrap();
        assert_eq!(reports.len(), 1);
        let rows = &reports[0].rows;
        assert_eq!(rows.len(), 4);
        assert!(rows[0].order.is_none());
        let last = rows[3].order.unwrap();
        assert!((last - 2.5).abs() < 0.1, "order {last}");
        // errors strictly decreasing down the ladder
        for w in rows.windows(2) {
            assert!(w[1].max_error < w[0].max_error);
        }
    }

    #[test]
    fn orders_approach_the_expected_rate_monotonically() {
        // distance to 3 - nu shrinks down the ladder, small wobble tolerated
        for &nu in &[0.3, 0.8] {
            let spec = StudySpec {
                problem: "example1".into(),
                nu: vec![nu],
                levels: vec![3, 4, 5, 6, 7, 8],
                t: 1.0,
                corrected: false,
                sigma_rule: None,
                format: OutputFormat::Csv,
                out: None,
            };
            let report = &run_study(&spec).unwrap()[0];
            let target = 3.0 - nu;
            let dists: Vec<f64> = report.rows[1..]
                .iter()
                .map(|r| (r.order.unwrap() - target).abs())
                .collect();
            for w in dists.windows(2) {
                assert!(w[1] <= w[0] + 0.05, "order drifted away: {dists:?}");
            }
            assert!(
                dists.last().unwrap() < &0.05,
                "final order too far: {dists:?}"
            );
        }
    }

    #[test]
    fn csv_round_trip_is_stable() {
        let report = ConvergenceReport {
            problem: "example1".into(),
            nu: 0.5,
            corrected: false,
            rows: vec![
                ConvergenceRow {
                    dx: 0.125,
                    max_error: 5.8764e-3,
                    order: None,
                },
                ConvergenceRow {
                    dx: 0.0625,
                    max_error: 1.1449e-3,
                    order: Some(2.3597),
                },
            ],
        };
        let text = emit_report(&report, OutputFormat::Csv);
        let parsed = parse_csv_report(&text).unwrap();
        let re_emitted = emit_report(
            &ConvergenceReport {
                problem: report.problem.clone(),
                nu: report.nu,
                corrected: false,
                rows: parsed,
            },
            OutputFormat::Csv,
        );
        assert_eq!(text, re_emitted);
    }

    #[test]
    fn empty_report_is_header_only() {
        let report = ConvergenceReport {
            problem: "example1".into(),
            nu: 0.5,
            corrected: false,
            rows: vec![],
        };
        assert_eq!(
            emit_report(&report, OutputFormat::Csv),
            "dx,max_error,order\n"
        );
    }

    #[test]
    fn markdown_mirrors_the_ladder() {
        let spec = StudySpec {
            problem: "example1".into(),
            nu: vec![0.3, 0.5],
            levels: vec![3, 4],
            t: 1.0,
            corrected: false,
            sigma_rule: None,
            format: OutputFormat::Markdown,
            out: None,
        };
        let reports = run_study(&spec).unwrap();
        let md = emit_combined_markdown(&reports);
        assert!(md.contains("| 1/8 |"));
        assert!(md.contains("nu=0.3"));
        assert!(md.contains("nu=0.5"));
    }

    #[test]
    fn repeated_runs_are_byte_identical() {
        let spec = StudySpec {
            problem: "example2-linear".into(),
            nu: vec![0.3, 0.8],
            levels: vec![3, 4, 5],
            t: 1.0,
            corrected: false,
            sigma_rule: None,
            format: OutputFormat::Csv,
            out: None,
        };
        let a: Vec<String> = run_study(&spec)
            .unwrap()
            .iter()
            .map(|r| emit_report(r, OutputFormat::Csv))
            .collect();
        let b: Vec<String> = run_study(&spec)
            .unwrap()
            .iter()
            .map(|r| emit_report(r, OutputFormat::Csv))
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn validation_rejects_bad_specs() {
        let mut spec = StudySpec {
            problem: "example1".into(),
            nu: vec![0.5],
            levels: vec![4, 3],
            t: 1.0,
            corrected: false,
            sigma_rule: None,
            format: OutputFormat::Csv,
            out: None,
        };
        assert!(spec.validate().is_err());
        spec.levels = vec![3];
        spec.t = 1.1; // 1.1 * 8 is not an integer point count
        assert!(spec.validate().is_err());
    }

    #[test]
    fn format_parsing() {
        assert_eq!("csv".parse::<OutputFormat>().unwrap(), OutputFormat::Csv);
        assert_eq!(
            "markdown".parse::<OutputFormat>().unwrap(),
            OutputFormat::Markdown
        );
        assert!("yaml".parse::<OutputFormat>().is_err());
    }
}
