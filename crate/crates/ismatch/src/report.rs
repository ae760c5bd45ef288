//! Evaluation output: machine-readable report files and human-readable
//! grids.
//!
//! Report files carry deterministic `# key=value` header comments, one
//! column-header line, and one row per evaluated cell. Timing never goes
//! into the file, so identical inputs produce identical bytes no matter
//! how many workers ran the evaluation.

use std::path::Path;

use crate::files::{write_utf8, ToolError};
use crate::harness::{Comparison, Evaluation, SweepGrid};

pub const REPORT_COLUMNS: &str = "algorithm,error_type,alpha,beta,theta,n,true_matches,success";

#[derive(Debug, Clone, Default)]
pub struct ReportFile {
    pub header: Vec<(String, String)>,
    pub entries: Vec<Evaluation>,
}

fn opt_f64(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl ReportFile {
    pub fn new(header: Vec<(String, String)>, entries: Vec<Evaluation>) -> Self {
        Self { header, entries }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.header {
            out.push_str(&format!("# {key}={value}\n"));
        }
        out.push_str(REPORT_COLUMNS);
        out.push('\n');
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{:.6}\n",
                e.algorithm,
                e.error_type,
                opt_f64(e.alpha),
                opt_f64(e.beta),
                opt_f64(e.theta),
                e.n,
                e.true_matches,
                e.success()
            ));
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<(), ToolError> {
        write_utf8(path, &self.render())
    }
}

fn pct(success: f64) -> String {
    format!("{:.2}", success * 100.0)
}

/// The sweep as a grid: theta down the rows, beta across the columns.
pub fn render_sweep(grid: &SweepGrid) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "success %, alpha = {} (rows: theta, columns: beta)\n",
        grid.alpha
    ));
    out.push_str(&format!("{:>10}", "theta\\beta"));
    for beta in &grid.beta_grid {
        out.push_str(&format!("{:>9}", beta.to_string()));
    }
    out.push('\n');
    for (t, theta) in grid.theta_grid.iter().enumerate() {
        out.push_str(&format!("{:>10}", theta.to_string()));
        for cell in &grid.cells[t] {
            out.push_str(&format!("{:>9}", pct(cell.success())));
        }
        out.push('\n');
    }
    out
}

/// The comparison as a grid: one row per matcher, one column per error
/// type, plus each matcher's success bounds across all the columns.
pub fn render_comparison(cmp: &Comparison) -> String {
    let label_width = cmp
        .algorithms
        .iter()
        .map(String::len)
        .max()
        .unwrap_or(0)
        .max("algorithm".len())
        + 2;
    let col_width = cmp
        .error_types
        .iter()
        .map(String::len)
        .max()
        .unwrap_or(0)
        .max(6)
        + 2;

    let mut out = String::new();
    out.push_str("success % by algorithm and error type\n");
    out.push_str(&format!("{:<label_width$}", "algorithm"));
    for et in &cmp.error_types {
        out.push_str(&format!("{et:>col_width$}"));
    }
    out.push_str(&format!("{:>col_width$}{:>col_width$}\n", "min", "max"));
    for (s, algorithm) in cmp.algorithms.iter().enumerate() {
        out.push_str(&format!("{algorithm:<label_width$}"));
        for cell in &cmp.grid[s] {
            out.push_str(&format!("{:>col_width$}", pct(cell.success())));
        }
        let (lo, hi) = cmp.bounds(s);
        out.push_str(&format!("{:>col_width$}{:>col_width$}\n", pct(lo), pct(hi)));
    }
    out
}

/// Flattens a sweep into report rows (row-major: theta outer, beta
/// inner, matching the rendered grid).
pub fn sweep_entries(grid: &SweepGrid) -> Vec<Evaluation> {
    grid.cells.iter().flatten().cloned().collect()
}

/// Flattens a comparison into report rows (spec-major).
pub fn comparison_entries(cmp: &Comparison) -> Vec<Evaluation> {
    cmp.grid.iter().flatten().cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(alg: &str, et: &str, n: usize, hits: usize) -> Evaluation {
        Evaluation {
            algorithm: alg.into(),
            error_type: et.into(),
            alpha: Some(1.0),
            beta: Some(0.7),
            theta: Some(0.1),
            n,
            true_matches: hits,
        }
    }

    #[test]
    fn report_rows_have_fixed_columns() {
        let report = ReportFile::new(
            vec![("seed".into(), "42".into())],
            vec![eval("hybrid", "omit-second", 300, 299)],
        );
        let text = report.render();
        assert!(text.starts_with("# seed=42\n"));
        assert!(text.contains(REPORT_COLUMNS));
        assert!(text.contains("hybrid,omit-second,1,0.7,0.1,300,299,0.996667"));
    }

    #[test]
    fn missing_params_render_empty() {
        let mut e = eval("jaccard", "one-char", 10, 5);
        e.alpha = None;
        e.beta = None;
        e.theta = None;
        let report = ReportFile::new(vec![], vec![e]);
        assert!(report
            .render()
            .contains("jaccard,one-char,,,,10,5,0.500000"));
    }
}
