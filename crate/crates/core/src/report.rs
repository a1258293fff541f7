//! Table rendering for bounds and fibrillation scans.
//!
//! Output is deterministic: rows are ordered by decreasing τ and every real is
//! printed with a fixed number of significant digits.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bounds::{FibrillationReport, LyapunovBounds};

pub const SIGNIFICANT_DIGITS: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Markdown,
    Csv,
    Json,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Markdown => "md",
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        }
    }
}

/// `x` with `digits` significant digits, switching to exponent notation for
/// very large or very small magnitudes.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return format!("{:.*}", digits.saturating_sub(1), 0.0);
    }
    let digits = digits.max(1);
    let e = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&e) {
        return format!("{:.*e}", digits - 1, x);
    }
    let decimals = (digits as i32 - 1 - e).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding may have added a digit (0.99999… → 1.000…)
    let sig = s.chars().filter(|c| c.is_ascii_digit()).skip_while(|&c| c == '0').count();
    if sig > digits && decimals > 0 {
        format!("{:.*}", decimals - 1, x)
    } else {
        s
    }
}

fn num(x: f64) -> String {
    fmt_sig(x, SIGNIFICANT_DIGITS)
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_else(|| "-".into())
}

fn sorted(rows: &[LyapunovBounds]) -> Vec<&LyapunovBounds> {
    let mut v: Vec<_> = rows.iter().collect();
    v.sort_by(|a, b| b.tau.total_cmp(&a.tau));
    v
}

const COLUMNS: [&str; 11] = [
    "tau", "beta", "alpha", "gamma", "product", "nu", "vertices", "terminated", "excess", "verdict", "mode",
];

fn cells(b: &LyapunovBounds) -> [String; 11] {
    [
        format!("{}", b.tau),
        num(b.beta),
        opt(b.alpha),
        opt(b.gamma),
        b.product.clone(),
        format!("{}", b.nu),
        b.vertex_count.to_string(),
        b.terminated.to_string(),
        b.invariance_excess.map(|e| format!("{e:.3e}")).unwrap_or_else(|| "-".into()),
        b.verdict.as_str().into(),
        serde_json::to_value(b.mode).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
    ]
}

/// Bounds table, one row per dwell time.
pub fn render_bounds(rows: &[LyapunovBounds], format: ReportFormat) -> String {
    let rows = sorted(rows);
    let mut out = String::new();
    match format {
        ReportFormat::Markdown => {
            let _ = writeln!(out, "| {} |", COLUMNS.join(" | "));
            let _ = writeln!(out, "|{}", "---|".repeat(COLUMNS.len()));
            for b in rows {
                let _ = writeln!(out, "| {} |", cells(b).join(" | "));
            }
        }
        ReportFormat::Csv => {
            let _ = writeln!(out, "{}", COLUMNS.join(","));
            for b in rows {
                let _ = writeln!(out, "{}", cells(b).join(","));
            }
        }
        ReportFormat::Json => {
            let owned: Vec<&LyapunovBounds> = rows;
            out = serde_json::to_string_pretty(&owned).expect("bounds serialize");
            out.push('\n');
        }
    }
    out
}

/// Fibrillation table `(τ, s.m.p. length, β)` plus the flags.
pub fn render_fibrillation(report: &FibrillationReport, format: ReportFormat) -> String {
    let mut out = String::new();
    let header = ["tau", "smp_length", "beta", "product", "transpose_rho", "averaged_rho"];
    let row = |r: &crate::bounds::FibrillationRow| {
        [
            format!("{}", r.tau),
            r.smp_length.to_string(),
            num(r.beta),
            r.product.clone(),
            opt(r.transpose_rho),
            num(r.averaged_rho),
        ]
    };
    match format {
        ReportFormat::Markdown => {
            let _ = writeln!(out, "| {} |", header.join(" | "));
            let _ = writeln!(out, "|{}", "---|".repeat(header.len()));
            for r in &report.rows {
                let _ = writeln!(out, "| {} |", row(r).join(" | "));
            }
            let _ = writeln!(
                out,
                "\nbounded length: {}, beta increasing: {}, fibrillation: {}",
                report.bounded_length, report.beta_increasing, report.flagged
            );
        }
        ReportFormat::Csv => {
            let _ = writeln!(out, "{}", header.join(","));
            for r in &report.rows {
                let _ = writeln!(out, "{}", row(r).join(","));
            }
        }
        ReportFormat::Json => {
            out = serde_json::to_string_pretty(report).expect("report serialize");
            out.push('\n');
        }
    }
    out
}

/// Boundary polyline of a planar polytope as `x,y` lines.
pub fn render_boundary_csv(points: &[[f64; 2]]) -> String {
    let mut out = String::from("x,y\n");
    for p in points {
        let _ = writeln!(out, "{},{}", num(p[0]), num(p[1]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.373463076849, 9), "0.373463077");
        assert_eq!(fmt_sig(-0.0462047970, 9), "-0.0462047970");
        assert_eq!(fmt_sig(1.7933105140, 9), "1.79331051");
        assert_eq!(fmt_sig(0.99999999999, 9), "1.00000000");
        assert_eq!(fmt_sig(123456.7891234, 9), "123456.789");
        assert_eq!(fmt_sig(1.5e-9, 3), "1.50e-9");
        assert_eq!(fmt_sig(0.0, 3), "0.00");
    }
}
