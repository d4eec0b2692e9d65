//! Convergence reports and their CSV / JSON forms.

use std::fmt::Write as _;

use serde::Serialize;

use super::config::ExperimentKind;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub p: usize,
    pub max_error: f64,
    pub bound: f64,
    /// `bound / max_error`, infinite when the error is zero.
    pub ratio: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl CheckResult {
    /// Passes when `value <= threshold`.
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), value, threshold, pass: value <= threshold }
    }

    /// Passes when `value >= threshold`.
    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), value, threshold, pass: value >= threshold }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ReportMeta {
    pub seed: u64,
    pub charges: usize,
    /// `Q = sum |q_j|`.
    pub total_charge: f64,
    pub m_sigma: Option<f64>,
    pub tol: f64,
    pub noise_floor: f64,
    pub targets: usize,
    pub quad_rel_error: f64,
    pub quad_abs_error: f64,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub schema: u32,
    pub kind: ExperimentKind,
    pub rows: Vec<ReportRow>,
    pub rate_fit: Option<f64>,
    pub rate_theory: Option<f64>,
    pub degenerate: bool,
    pub meta: ReportMeta,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl ConvergenceReport {
    pub fn new(kind: ExperimentKind, meta: ReportMeta) -> Self {
        Self {
            schema: SCHEMA,
            kind,
            rows: Vec::new(),
            rate_fit: None,
            rate_theory: None,
            degenerate: false,
            meta,
            checks: Vec::new(),
            pass: true,
        }
    }

    /// Adds a row; it passes when the error is within the bound or below the noise floor.
    pub fn push_row(&mut self, p: usize, max_error: f64, bound: f64) {
        let ratio = if max_error > 0.0 { bound / max_error } else { f64::INFINITY };
        let pass = max_error <= bound || max_error <= self.meta.noise_floor;
        self.rows.push(ReportRow { p, max_error, bound, ratio, pass });
    }

    pub fn finish(&mut self) {
        self.rate_fit = fit_rate(&self.rows, self.meta.noise_floor);
        self.pass = self.rows.iter().all(|r| r.pass) && self.checks.iter().all(|c| c.pass);
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!("schema={SCHEMA}\np,max_error,bound,ratio,rate_fit,rate_theory\n");
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.6e}")).unwrap_or_default();
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{:.6e},{:.6e},{},{},{}",
                r.p,
                r.max_error,
                r.bound,
                if r.ratio.is_finite() { format!("{:.6e}", r.ratio) } else { "inf".into() },
                opt(self.rate_fit),
                opt(self.rate_theory)
            );
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn summary_line(&self) -> String {
        let worst = self.rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
        format!(
            "{:?}: {} rows, min bound/error {:.3e}, rate fit {}, theory {}, checks {}/{} -> {}",
            self.kind,
            self.rows.len(),
            worst,
            self.rate_fit.map(|x| format!("{x:.4}")).unwrap_or("-".into()),
            self.rate_theory.map(|x| format!("{x:.4}")).unwrap_or("-".into()),
            self.checks.iter().filter(|c| c.pass).count(),
            self.checks.len(),
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// Decay rate `-d ln(error) / dp` fitted by least squares over the largest-p half of the
/// rows whose error exceeds 100 times the noise floor.
pub fn fit_rate(rows: &[ReportRow], floor: f64) -> Option<f64> {
    let usable: Vec<&ReportRow> = rows.iter().filter(|r| r.max_error > 100.0 * floor && r.max_error > 0.0).collect();
    if usable.len() < 2 {
        return None;
    }
    let tail = &usable[usable.len() / 2..];
    let tail = if tail.len() < 2 { &usable[usable.len() - 2..] } else { tail };
    let n = tail.len() as f64;
    let mx = tail.iter().map(|r| r.p as f64).sum::<f64>() / n;
    let my = tail.iter().map(|r| r.max_error.ln()).sum::<f64>() / n;
    let sxy: f64 = tail.iter().map(|r| (r.p as f64 - mx) * (r.max_error.ln() - my)).sum();
    let sxx: f64 = tail.iter().map(|r| (r.p as f64 - mx).powi(2)).sum();
    Some(-sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_geometric_rate() {
        let mut r = ConvergenceReport::new(ExperimentKind::Me, ReportMeta { noise_floor: 1e-20, ..Default::default() });
        for p in 1..=10 {
            r.push_row(p, 0.25f64.powi(p as i32 + 1), 1.0);
        }
        r.finish();
        assert!((r.rate_fit.unwrap() - 4f64.ln()).abs() < 1e-12);
        assert!(r.pass);
    }

    #[test]
    fn csv_layout() {
        let mut r = ConvergenceReport::new(ExperimentKind::Me, ReportMeta::default());
        r.push_row(1, 0.0, 1.0);
        r.finish();
        let csv = r.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("schema=1"));
        assert_eq!(lines.next(), Some("p,max_error,bound,ratio,rate_fit,rate_theory"));
        assert!(lines.next().unwrap().starts_with("1,0.000000e0,1.000000e0,inf,"));
    }

    #[test]
    fn floor_rescues_row() {
        let mut r = ConvergenceReport::new(ExperimentKind::Me, ReportMeta { noise_floor: 1e-15, ..Default::default() });
        r.push_row(20, 5e-16, 1e-21);
        r.push_row(21, 5e-14, 1e-21);
        assert!(r.rows[0].pass && !r.rows[1].pass);
    }
}
