//! Plain-text tables and CSV output.
//!
//! Text output rounds estimates, standard errors and t statistics to four
//! significant digits and collinearity measures and thresholds to seven.
//! CSV and JSON carry full precision.

use std::fmt::Write as _;
use std::io::Write;

use tvif::CollinearityReport;

use crate::{CliError, DatasetSummary, FitOutput};

const ESTIMATE_DIGITS: usize = 4;
const MEASURE_DIGITS: usize = 7;
const ABSENT: &str = "-";

/// Formats `x` with `digits` significant digits. Plain notation is used for
/// decimal exponents in `-5..10`, scientific notation otherwise.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    assert!(digits > 0);
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    // rounding first settles the exponent after any carry (9.9996 -> 1.000e1)
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..10).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

fn est(x: f64) -> String {
    fmt_sig(x, ESTIMATE_DIGITS)
}

fn measure(x: f64) -> String {
    fmt_sig(x, MEASURE_DIGITS)
}

fn opt(x: Option<f64>, f: fn(f64) -> String) -> String {
    x.map_or_else(|| ABSENT.to_string(), f)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "Yes"
    } else {
        "No"
    }
}

/// Column-aligned text table; the second column (names) is left-aligned,
/// all others right-aligned.
#[derive(Debug, Clone)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let ncol = self.header.len();
        let mut widths = vec![0; ncol];
        for row in std::iter::once(&self.header).chain(&self.rows) {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut s = String::new();
        for row in std::iter::once(&self.header).chain(&self.rows) {
            let mut line = String::new();
            for (j, cell) in row.iter().enumerate() {
                if j > 0 {
                    line.push_str("  ");
                }
                let w = widths[j];
                if j == 1 {
                    let _ = write!(line, "{cell:<w$}");
                } else {
                    let _ = write!(line, "{cell:>w$}");
                }
            }
            s.push_str(line.trim_end());
            s.push('\n');
        }
        s
    }
}

pub(crate) fn report_text(r: &CollinearityReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "Collinearity diagnosis for {} (n = {}, k = {})",
        r.response_name, r.n, r.k
    );
    let _ = writeln!(
        s,
        "alpha = {}, t critical = {} (df = {})",
        r.alpha.value(),
        measure(r.t_critical),
        r.global_f_df2
    );
    let _ = writeln!(
        s,
        "sigma_hat = {}, R^2 = {}, F({}, {}) = {}, p-value = {}",
        est(r.sigma_hat),
        est(r.r2),
        r.global_f_df1,
        r.global_f_df2,
        est(r.global_f),
        est(r.global_f_pvalue)
    );
    s.push('\n');

    let mut t = Table::new([
        "#",
        "variable",
        "VIF",
        "TVIF",
        "S2",
        "c0",
        "c1",
        "c2",
        "c3",
        "S2 threshold",
        "|t|",
        "|t_o|",
        "case",
        "affected",
    ]);
    for v in &r.per_variable {
        t.push(vec![
            (v.index + 1).to_string(),
            v.name.clone(),
            opt(v.vif, measure),
            measure(v.tvif),
            measure(v.stewart_s2),
            measure(v.c0),
            opt(v.c1, measure),
            opt(v.c2, measure),
            opt(v.c3, measure),
            opt(v.stewart_threshold, measure),
            est(v.t_exp_original),
            est(v.t_exp_orthonormal),
            v.case_label.to_string(),
            yes_no(v.theorem1_affects).to_string(),
        ]);
    }
    s.push_str(&t.render());
    s.push('\n');

    let affected: Vec<String> = r
        .per_variable
        .iter()
        .filter(|v| v.theorem1_affects)
        .map(|v| (v.index + 1).to_string())
        .collect();
    if affected.is_empty() {
        s.push_str("Statistically troubling multicollinearity: No\n");
    } else {
        let _ = writeln!(
            s,
            "Statistically troubling multicollinearity: Yes (variables {})",
            affected.join(", ")
        );
    }
    s
}

pub(crate) fn fit_text(f: &FitOutput) -> String {
    let o = &f.original;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "Least squares fit for {} (n = {}, k = {})",
        f.response_name, o.n, o.k
    );

    s.push_str("\nOriginal model\n");
    let mut t = Table::new(["#", "variable", "estimate", "std. error", "|t|"]);
    for (i, name) in f.column_names.iter().enumerate() {
        t.push(vec![
            (i + 1).to_string(),
            name.clone(),
            est(o.coefficients[i]),
            est(o.std_errors[i]),
            est(o.t_stats[i]),
        ]);
    }
    s.push_str(&t.render());

    let q = &f.orthonormal;
    s.push_str("\nOrthonormal model\n");
    let mut t = Table::new(["#", "variable", "estimate", "std. error", "|t|"]);
    for (i, name) in f.column_names.iter().enumerate() {
        t.push(vec![
            (i + 1).to_string(),
            name.clone(),
            est(q.beta_o[i]),
            est(q.std_errors[i]),
            est(q.t_exp_o[i]),
        ]);
    }
    s.push_str(&t.render());

    s.push('\n');
    let _ = writeln!(s, "sigma_hat = {}", est(o.sigma_hat()));
    let _ = writeln!(s, "sigma_hat^2 = {}", est(o.sigma2_hat));
    let _ = writeln!(s, "R^2 = {}", est(o.r2));
    let _ = writeln!(
        s,
        "F({}, {}) = {}, p-value = {}",
        o.f_df1(),
        o.df_resid(),
        est(o.f_stat),
        est(o.f_pvalue)
    );
    s
}

pub(crate) fn datasets_text(list: &[DatasetSummary]) -> String {
    let mut t = Table::new(["#", "name", "observations", "regressors", "k", "response"]);
    for (i, d) in list.iter().enumerate() {
        t.push(vec![
            (i + 1).to_string(),
            d.name.clone(),
            d.observations.to_string(),
            d.regressors.to_string(),
            d.k.to_string(),
            d.default_response
                .clone()
                .unwrap_or_else(|| ABSENT.to_string()),
        ]);
    }
    let mut s = t.render();
    s.push_str("\nk counts the intercept column.\n");
    for d in list {
        let _ = writeln!(
            s,
            "\n{}: {}\n  columns: {}",
            d.name,
            d.provenance,
            d.columns.join(", ")
        );
    }
    s
}

fn full(x: f64) -> String {
    x.to_string()
}

fn full_opt(x: Option<f64>) -> String {
    x.map(full).unwrap_or_default()
}

fn full_bool(b: Option<bool>) -> String {
    b.map(|b| b.to_string()).unwrap_or_default()
}

pub(crate) fn report_csv(r: &CollinearityReport, out: &mut dyn Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "index",
        "name",
        "is_intercept",
        "vif",
        "tvif",
        "stewart_s2",
        "c0",
        "c1",
        "c2",
        "c3",
        "stewart_threshold",
        "t_exp_original",
        "t_exp_orthonormal",
        "significant_original",
        "significant_orthonormal",
        "case_label",
        "theorem1_affects",
        "vif_exceeds_c1",
        "vif_exceeds_c2",
    ])?;
    for v in &r.per_variable {
        w.write_record([
            v.index.to_string(),
            v.name.clone(),
            v.is_intercept.to_string(),
            full_opt(v.vif),
            full(v.tvif),
            full(v.stewart_s2),
            full(v.c0),
            full_opt(v.c1),
            full_opt(v.c2),
            full_opt(v.c3),
            full_opt(v.stewart_threshold),
            full(v.t_exp_original),
            full(v.t_exp_orthonormal),
            v.significant_original.to_string(),
            v.significant_orthonormal.to_string(),
            v.case_label.to_string(),
            v.theorem1_affects.to_string(),
            full_bool(v.vif_exceeds_c1),
            full_bool(v.vif_exceeds_c2),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn fit_csv(f: &FitOutput, out: &mut dyn Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["model", "index", "name", "value", "std_error", "abs_t"])?;
    let o = &f.original;
    for (i, name) in f.column_names.iter().enumerate() {
        w.write_record([
            "original".to_string(),
            i.to_string(),
            name.clone(),
            full(o.coefficients[i]),
            full(o.std_errors[i]),
            full(o.t_stats[i]),
        ])?;
    }
    let q = &f.orthonormal;
    for (i, name) in f.column_names.iter().enumerate() {
        w.write_record([
            "orthonormal".to_string(),
            i.to_string(),
            name.clone(),
            full(q.beta_o[i]),
            full(q.std_errors[i]),
            full(q.t_exp_o[i]),
        ])?;
    }
    let stats = [
        ("sigma_hat", o.sigma_hat()),
        ("sigma2_hat", o.sigma2_hat),
        ("r2", o.r2),
        ("f_stat", o.f_stat),
        ("f_df1", o.f_df1() as f64),
        ("f_df2", o.df_resid() as f64),
        ("f_pvalue", o.f_pvalue),
    ];
    for (name, value) in stats {
        w.write_record(["summary", "", name, &full(value), "", ""])?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn datasets_csv(list: &[DatasetSummary], out: &mut dyn Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "name",
        "observations",
        "regressors",
        "k",
        "default_response",
        "columns",
        "provenance",
    ])?;
    for d in list {
        w.write_record([
            d.name.clone(),
            d.observations.to_string(),
            d.regressors.to_string(),
            d.k.to_string(),
            d.default_response.clone().unwrap_or_default(),
            d.columns.join(" "),
            d.provenance.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.93249, 4), "0.9325");
        assert_eq!(fmt_sig(52.3, 4), "52.30");
        assert_eq!(fmt_sig(9.99996, 4), "10.00");
        assert_eq!(fmt_sig(-0.0028123, 4), "-0.002812");
        assert_eq!(fmt_sig(0.00003821626, 7), "0.00003821626");
        assert_eq!(fmt_sig(194.86614, 7), "194.8661");
        assert_eq!(fmt_sig(1.5e-9, 4), "1.500e-9");
        assert_eq!(fmt_sig(123456789012.0, 4), "1.235e11");
        assert_eq!(fmt_sig(0.0, 4), "0");
    }

    #[test]
    fn table_alignment() {
        let mut t = Table::new(["#", "name", "value"]);
        t.push(vec!["1".into(), "a".into(), "10.5".into()]);
        t.push(vec!["10".into(), "long".into(), "1".into()]);
        assert_eq!(
            t.render(),
            " #  name  value\n 1  a      10.5\n10  long      1\n"
        );
    }
}
