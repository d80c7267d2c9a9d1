//! Command results and their table, JSON and CSV renderings.
//!
//! JSON numbers are written as decimal strings (shortest round-trip form)
//! so no precision is lost in transit.

use crate::config::{CommandId, OutputFormat};
use crate::CliError;
use diffint::integrate::{Diagnostics, IntegralResult};
use diffint::{Scalar, C64};
use serde::Serialize;
use std::fmt::Write as _;

/// Result of an independent oracle evaluation of the same quantity.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleCheck {
    /// What was compared, e.g. "integral" or "F(2)".
    pub quantity: String,
    pub value: C64,
    pub abs_error_estimate: f64,
    pub converged: bool,
    /// `|reported − oracle|`.
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: CommandId,
    pub input: String,
    pub value: Option<Scalar>,
    /// Symbolic result, for transforms.
    pub expression: Option<String>,
    pub route: String,
    pub diagnostics: Diagnostics,
    pub oracle: Option<OracleCheck>,
    pub verified: bool,
    /// Further labelled facts (pieces, partial fractions, selftest rows…).
    pub details: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: CommandId, input: &str, route: &str) -> Self {
        Report {
            command,
            input: input.to_string(),
            value: None,
            expression: None,
            route: route.to_string(),
            diagnostics: Diagnostics::default(),
            oracle: None,
            verified: true,
            details: Vec::new(),
        }
    }

    pub fn from_integral(command: CommandId, input: &str, r: IntegralResult) -> Self {
        Report {
            value: Some(r.value),
            route: r.route.to_string(),
            diagnostics: r.diagnostics,
            verified: r.verified,
            ..Report::new(command, input, "")
        }
    }

    pub fn detail(&mut self, key: &str, value: impl Into<String>) {
        self.details.push((key.to_string(), value.into()));
    }

    pub fn render(&self, format: OutputFormat) -> Result<String, CliError> {
        match format {
            OutputFormat::Table => Ok(self.table()),
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(&JsonReport::from(self))
                    .map_err(|e| CliError::Output(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            OutputFormat::Csv => self.csv(),
        }
    }

    fn table(&self) -> String {
        let mut out = String::new();
        let width = self.details.iter().map(|(k, _)| k.chars().count() + 2).fold(12, usize::max);
        let mut line = |k: &str, v: &str| {
            let _ = writeln!(out, "{k:<width$}{v}");
        };
        line("command", &self.command.to_string());
        line("input", &self.input);
        line("route", &self.route);
        if let Some(e) = &self.expression {
            line("result", e);
        }
        if let Some(v) = &self.value {
            line("value", &complex_text(v.to_c64()));
            if v.is_exact() {
                line("exact", &v.to_string());
            }
        }
        if let Some(s) = &self.diagnostics.symbolic {
            line("symbolic", s);
        }
        if let Some(e) = self.diagnostics.error_estimate {
            line("error", &decimal(e));
        }
        if let Some(n) = self.diagnostics.truncation_order {
            line("order", &n.to_string());
        }
        if let Some(o) = &self.oracle {
            line(
                "oracle",
                &format!(
                    "{} = {} (|delta| {}, {})",
                    o.quantity,
                    complex_text(o.value),
                    decimal(o.delta),
                    if o.converged { "converged" } else { "not converged" }
                ),
            );
        }
        for (k, v) in &self.details {
            line(k, v);
        }
        for n in &self.diagnostics.notes {
            line("note", n);
        }
        line("verified", if self.verified { "yes" } else { "no" });
        if !self.diagnostics.rows.is_empty() {
            let _ = writeln!(out);
            let _ = writeln!(
                out,
                "{:>5}  {:>14}  {:>24}  {:>11}  {:>11}",
                "step", "parameter", "estimate", "delta_prev", "bound"
            );
            for r in &self.diagnostics.rows {
                let _ = writeln!(
                    out,
                    "{:>5}  {:>14}  {:>24}  {:>11}  {:>11}",
                    r.step,
                    format!("{:.6e}", r.parameter),
                    complex_text(r.estimate),
                    r.delta_prev.map_or("-".into(), |d| format!("{d:.3e}")),
                    r.bound.map_or("-".into(), |b| format!("{b:.3e}")),
                );
            }
        }
        out
    }

    fn csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| CliError::Output(e.to_string());
        w.write_record(["step", "parameter", "estimate", "delta_prev", "bound"]).map_err(err)?;
        for r in &self.diagnostics.rows {
            w.write_record([
                r.step.to_string(),
                decimal(r.parameter),
                complex_text(r.estimate),
                r.delta_prev.map(decimal).unwrap_or_default(),
                r.bound.map(decimal).unwrap_or_default(),
            ])
            .map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
    }
}

/// Shortest round-trip decimal, switching to exponent form for very large
/// or very small magnitudes.
pub fn decimal(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) || !a.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn complex_text(z: C64) -> String {
    if z.im == 0.0 {
        decimal(z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", decimal(z.re), decimal(-z.im))
    } else {
        format!("{}+{}i", decimal(z.re), decimal(z.im))
    }
}

#[derive(Serialize)]
struct JsonComplex {
    re: String,
    im: String,
}

impl From<C64> for JsonComplex {
    fn from(z: C64) -> Self {
        JsonComplex { re: decimal(z.re), im: decimal(z.im) }
    }
}

#[derive(Serialize)]
struct JsonValue {
    re: String,
    im: String,
    /// Exact rational form when the value is exact.
    exact: Option<String>,
}

#[derive(Serialize)]
struct JsonRow {
    step: String,
    parameter: String,
    estimate: JsonComplex,
    delta_prev: Option<String>,
    bound: Option<String>,
}

#[derive(Serialize)]
struct JsonDiagnostics {
    truncation_order: Option<String>,
    extrapolation_steps: String,
    error_estimate: Option<String>,
    /// Truncation orders or regularization widths, in schedule order.
    schedule: Vec<String>,
    rows: Vec<JsonRow>,
    notes: Vec<String>,
    symbolic: Option<String>,
}

#[derive(Serialize)]
struct JsonOracle {
    quantity: String,
    value: JsonComplex,
    abs_error_estimate: String,
    converged: bool,
    delta: String,
}

#[derive(Serialize)]
struct JsonReport {
    command: String,
    input: String,
    value: Option<JsonValue>,
    expression: Option<String>,
    route: String,
    diagnostics: JsonDiagnostics,
    oracle: Option<JsonOracle>,
    verified: bool,
    details: Vec<(String, String)>,
}

impl From<&Report> for JsonReport {
    fn from(r: &Report) -> Self {
        let d = &r.diagnostics;
        JsonReport {
            command: r.command.to_string(),
            input: r.input.clone(),
            value: r.value.as_ref().map(|v| {
                let z = v.to_c64();
                JsonValue { re: decimal(z.re), im: decimal(z.im), exact: v.is_exact().then(|| v.to_string()) }
            }),
            expression: r.expression.clone(),
            route: r.route.clone(),
            diagnostics: JsonDiagnostics {
                truncation_order: d.truncation_order.map(|n| n.to_string()),
                extrapolation_steps: d.extrapolation_steps.to_string(),
                error_estimate: d.error_estimate.map(decimal),
                schedule: d.rows.iter().map(|row| decimal(row.parameter)).collect(),
                rows: d
                    .rows
                    .iter()
                    .map(|row| JsonRow {
                        step: row.step.to_string(),
                        parameter: decimal(row.parameter),
                        estimate: row.estimate.into(),
                        delta_prev: row.delta_prev.map(decimal),
                        bound: row.bound.map(decimal),
                    })
                    .collect(),
                notes: d.notes.clone(),
                symbolic: d.symbolic.clone(),
            },
            oracle: r.oracle.as_ref().map(|o| JsonOracle {
                quantity: o.quantity.clone(),
                value: o.value.into(),
                abs_error_estimate: decimal(o.abs_error_estimate),
                converged: o.converged,
                delta: decimal(o.delta),
            }),
            verified: r.verified,
            details: r.details.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use diffint::integrate::ConvergenceRow;

    fn sample() -> Report {
        let mut r = Report::new(CommandId::Integrate, "sin(x)/x", "delta-reg/gaussian");
        r.value = Some(Scalar::float(C64::new(std::f64::consts::PI, 0.0)));
        for k in 0..3 {
            r.diagnostics.rows.push(ConvergenceRow {
                step: k,
                parameter: 0.25 / 4f64.powi(k as i32),
                estimate: C64::new(3.0 + k as f64 * 0.1, 0.0),
                delta_prev: (k > 0).then_some(0.1),
                bound: None,
            });
        }
        r
    }

    #[test]
    fn json_has_the_stable_keys() {
        let s = sample().render(OutputFormat::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        for key in ["value", "route", "diagnostics", "oracle", "verified"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["value"]["re"], "3.141592653589793");
        assert_eq!(v["diagnostics"]["schedule"][1], "0.0625");
        assert_eq!(v["diagnostics"]["rows"][0]["delta_prev"], serde_json::Value::Null);
    }

    #[test]
    fn csv_columns() {
        let s = sample().render(OutputFormat::Csv).unwrap();
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some("step,parameter,estimate,delta_prev,bound"));
        assert_eq!(lines.next(), Some("0,0.25,3,,"));
        assert_eq!(s.lines().count(), 4);
    }

    #[test]
    fn decimals_round_trip() {
        for x in [0.0, 1.0, -2.5, 1e-300, 6.02e23, std::f64::consts::PI, 1e-5] {
            assert_eq!(decimal(x).parse::<f64>().unwrap(), x);
        }
    }
}
