//! Defect records and their deterministic JSON-lines and CSV encodings.
//!
//! Floats are written with 17 significant digits and round-trip exactly.

use std::cmp::Ordering;
use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Which defect a tolerance applies to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    Absolute,
    Relative,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DefectReport {
    pub identity: String,
    /// Descriptor label, empty when not applicable.
    pub label: String,
    pub n: i64,
    /// τ, q, z or (x, ε) depending on the identity.
    pub point: Complex64,
    pub truncation: u64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_defect: f64,
    pub rel_defect: f64,
    pub tail_estimate: f64,
    /// Rounding level of the computation: defects below it carry no signal.
    pub noise_floor: f64,
    pub measure: Measure,
}

impl DefectReport {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        identity: &str,
        label: &str,
        n: i64,
        point: Complex64,
        truncation: u64,
        lhs: Complex64,
        rhs: Complex64,
        tail_estimate: f64,
        noise_floor: f64,
    ) -> Self {
        let abs_defect = (lhs - rhs).norm();
        let scale = rhs.norm();
        let rel_defect = if scale > 0.0 { abs_defect / scale } else { abs_defect };
        DefectReport {
            identity: identity.into(),
            label: label.into(),
            n,
            point,
            truncation,
            lhs,
            rhs,
            abs_defect,
            rel_defect,
            tail_estimate,
            noise_floor,
            measure: Measure::Absolute,
        }
    }

    pub fn with_measure(mut self, measure: Measure) -> Self {
        self.measure = measure;
        self
    }

    pub fn defect(&self) -> f64 {
        match self.measure {
            Measure::Absolute => self.abs_defect,
            Measure::Relative => self.rel_defect,
        }
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.defect() <= tol
    }

    /// |lhs − rhs| recomputed from the stored sides.
    pub fn recomputed_abs_defect(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }

    pub fn to_json_line(&self, tol: Option<f64>) -> String {
        let mut fields = vec![
            ("identity", json_str(&self.identity)),
            ("label", json_str(&self.label)),
            ("n", self.n.to_string()),
            ("re", fmt_f64(self.point.re)),
            ("im", fmt_f64(self.point.im)),
            ("K", self.truncation.to_string()),
            ("lhs_re", fmt_f64(self.lhs.re)),
            ("lhs_im", fmt_f64(self.lhs.im)),
            ("rhs_re", fmt_f64(self.rhs.re)),
            ("rhs_im", fmt_f64(self.rhs.im)),
            ("abs_defect", fmt_f64(self.abs_defect)),
            ("rel_defect", fmt_f64(self.rel_defect)),
            ("tail_estimate", fmt_f64(self.tail_estimate)),
            ("noise_floor", fmt_f64(self.noise_floor)),
        ];
        if let Some(tol) = tol {
            fields.push(("tolerance", fmt_f64(tol)));
            fields.push(("pass", self.passes(tol).to_string()));
        }
        json_object(&fields)
    }

    fn csv_record(&self) -> [String; 8] {
        [
            self.identity.clone(),
            self.n.to_string(),
            fmt_f64(self.point.re),
            fmt_f64(self.point.im),
            self.truncation.to_string(),
            fmt_f64(self.abs_defect),
            fmt_f64(self.rel_defect),
            fmt_f64(self.tail_estimate),
        ]
    }

    fn sort_key(&self, other: &Self) -> Ordering {
        self.identity
            .cmp(&other.identity)
            .then_with(|| self.label.cmp(&other.label))
            .then_with(|| self.n.cmp(&other.n))
            .then_with(|| self.point.re.total_cmp(&other.point.re))
            .then_with(|| self.point.im.total_cmp(&other.point.im))
            .then_with(|| self.truncation.cmp(&other.truncation))
    }
}

/// Orders reports by identity, label, n, point and truncation.
pub fn sort_reports(reports: &mut [DefectReport]) {
    reports.sort_by(|a, b| a.sort_key(b));
}

/// 17 significant digits; non-finite values become `null`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

pub fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

/// `{"k":v,...}` from already-encoded values, keeping field order.
pub fn json_object(fields: &[(&str, String)]) -> String {
    let body: Vec<String> = fields.iter().map(|(k, v)| format!("{}:{v}", json_str(k))).collect();
    format!("{{{}}}", body.join(","))
}

pub const CSV_HEADER: [&str; 8] = ["identity", "n", "re_tau", "im_tau", "K", "abs_defect", "rel_defect", "tail_estimate"];

pub fn write_csv<W: Write>(out: W, reports: &[DefectReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in reports {
        w.write_record(r.csv_record()).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

pub fn write_json_lines<W: Write>(mut out: W, reports: &[DefectReport], tol: Option<f64>) -> Result<()> {
    for r in reports {
        writeln!(out, "{}", r.to_json_line(tol)).map_err(|e| Error::Io(e.to_string()))?;
    }
    Ok(())
}
