//! Machine-readable run reports: the JSON envelope emitted by every CLI
//! command and the two-block CSV format emitted by sweeps.

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::ledger::{CostLedger, LedgerEntry};
use crate::scaling::{ExponentFit, ScalingSample};

#[derive(Debug, Clone, Serialize)]
pub struct Totals {
    pub time: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    pub status: String,
    pub details: String,
}

impl Verification {
    pub fn pass(details: impl Into<String>) -> Self {
        Self {
            status: "PASS".into(),
            details: details.into(),
        }
    }

    pub fn fail(details: impl Into<String>) -> Self {
        Self {
            status: "FAIL".into(),
            details: details.into(),
        }
    }

    pub fn falsified(details: impl Into<String>) -> Self {
        Self {
            status: "FALSIFIED".into(),
            details: details.into(),
        }
    }
}

/// Top-level report: `{command, params, ledger, totals, verification}`.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub params: Value,
    pub ledger: Vec<LedgerEntry>,
    pub totals: Totals,
    pub verification: Verification,
    /// Command-specific extras (absorption tables, schedules, samples).
    #[serde(skip_serializing_if = "Value::is_null")]
    pub extra: Value,
}

impl RunReport {
    pub fn new(
        command: impl Into<String>,
        params: Value,
        ledger: &CostLedger,
        verification: Verification,
    ) -> Self {
        Self {
            command: command.into(),
            params,
            ledger: ledger.entries().to_vec(),
            totals: Totals {
                time: ledger.total_time(),
                energy: ledger.total_energy(),
            },
            verification,
            extra: Value::Null,
        }
    }

    pub fn with_extra(mut self, extra: Value) -> Self {
        self.extra = extra;
        self
    }

    pub fn to_json(&self) -> String {
        // serde_json writes shortest round-trip floats, so identical runs
        // serialize to identical bytes.
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// Ledger-as-CSV rendering for run commands.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,time,energy\n");
        for e in &self.ledger {
            out.push_str(&format!("{:?},{},{}\n", e.label, e.time, e.energy));
        }
        out.push_str(&format!("TOTAL,{},{}\n", self.totals.time, self.totals.energy));
        out.push_str(&format!(
            "VERIFICATION,{},{:?}\n",
            self.verification.status, self.verification.details
        ));
        out
    }
}

/// Fit block row of the sweep CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitRow {
    pub label: String,
    pub exponent_time: f64,
    pub exponent_energy: f64,
    pub r2_time: f64,
    pub r2_energy: f64,
}

impl FitRow {
    pub fn new(label: impl Into<String>, time_fit: &ExponentFit, energy_fit: &ExponentFit) -> Self {
        Self {
            label: label.into(),
            exponent_time: time_fit.exponent,
            exponent_energy: energy_fit.exponent,
            r2_time: time_fit.r_squared,
            r2_energy: energy_fit.r_squared,
        }
    }
}

/// Sweep CSV: a `label,n,seed,time,energy` sample block followed by a
/// `label,exponent_time,exponent_energy,r2_time,r2_energy` fit block.
/// Floats print in shortest round-trip form, so parsing the file back
/// recovers them bit-for-bit.
pub fn sweep_to_csv(samples: &[ScalingSample], fit: &FitRow) -> String {
    let mut out = String::from("label,n,seed,time,energy\n");
    for s in samples {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            s.label, s.n, s.seed, s.time, s.energy
        ));
    }
    out.push_str("label,exponent_time,exponent_energy,r2_time,r2_energy\n");
    out.push_str(&format!(
        "{},{},{},{},{}\n",
        fit.label, fit.exponent_time, fit.exponent_energy, fit.r2_time, fit.r2_energy
    ));
    out
}

/// Parse a sweep CSV back into samples and the fit row.
pub fn sweep_from_csv(text: &str) -> Result<(Vec<ScalingSample>, FitRow)> {
    let mut samples = Vec::new();
    let mut fit = None;
    let mut in_fit_block = false;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        if line == "label,n,seed,time,energy" {
            in_fit_block = false;
            continue;
        }
        if line == "label,exponent_time,exponent_energy,r2_time,r2_energy" {
            in_fit_block = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::Parse(format!(
                "line {}: expected 5 fields, got {}",
                lineno + 1,
                fields.len()
            )));
        }
        let parse_f = |s: &str| -> Result<f64> {
            s.parse()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
        };
        if in_fit_block {
            fit = Some(FitRow {
                label: fields[0].to_string(),
                exponent_time: parse_f(fields[1])?,
                exponent_energy: parse_f(fields[2])?,
                r2_time: parse_f(fields[3])?,
                r2_energy: parse_f(fields[4])?,
            });
        } else {
            samples.push(ScalingSample {
                label: fields[0].to_string(),
                n: fields[1]
                    .parse()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?,
                seed: fields[2]
                    .parse()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?,
                time: parse_f(fields[3])?,
                energy: parse_f(fields[4])?,
            });
        }
    }
    let fit = fit.ok_or_else(|| Error::Parse("missing fit block".into()))?;
    Ok((samples, fit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scaling::fit_exponent;

    fn sample(n: usize, time: f64, energy: f64) -> ScalingSample {
        ScalingSample {
            label: "demo".into(),
            n,
            seed: n as u64,
            time,
            energy,
        }
    }

    #[test]
    fn csv_round_trip_preserves_floats() {
        let samples = vec![
            sample(8, 656.0 / 7.0, 1.0 / 3.0),
            sample(16, 3456.25, 2.5e-3),
            sample(32, 17088.125, 1.0e9 + 0.625),
        ];
        let tf = fit_exponent(&samples.iter().map(|s| (s.n, s.time)).collect::<Vec<_>>()).unwrap();
        let ef =
            fit_exponent(&samples.iter().map(|s| (s.n, s.energy)).collect::<Vec<_>>()).unwrap();
        let fit = FitRow::new("demo", &tf, &ef);
        let csv = sweep_to_csv(&samples, &fit);
        let (parsed_samples, parsed_fit) = sweep_from_csv(&csv).unwrap();
        assert_eq!(parsed_samples, samples);
        assert_eq!(parsed_fit, fit);

        // Refitting the parsed samples reproduces the printed exponents.
        let refit =
            fit_exponent(&parsed_samples.iter().map(|s| (s.n, s.time)).collect::<Vec<_>>())
                .unwrap();
        assert_eq!(refit.exponent, fit.exponent_time);
    }

    #[test]
    fn report_json_shape() {
        let mut ledger = CostLedger::new();
        ledger.add("x", 1.0, 2.0).unwrap();
        let report = RunReport::new(
            "flow",
            serde_json::json!({"n": 4}),
            &ledger,
            Verification::pass("ok"),
        );
        let v: Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(v["command"], "flow");
        assert_eq!(v["params"]["n"], 4);
        assert_eq!(v["ledger"][0]["label"], "x");
        assert_eq!(v["totals"]["time"], 1.0);
        assert_eq!(v["verification"]["status"], "PASS");
    }
}
