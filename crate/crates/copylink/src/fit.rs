//! Exponential fit of the single-copy broken fraction and the precision
//! improvement of a linked-copy curve read from a sweep CSV.

use std::collections::BTreeMap;

use copylink_core::fitting::{fit_exponential, precision_improvement, FitPoint, FitResult, Improvement};
use copylink_core::jf_min;
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::report::ReportRow;

/// Which linked-copy fraction is compared with the single-copy fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Curve {
    /// Linked copies plus one separate single copy.
    #[default]
    SingleOrAny,
    AnyCopy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitOutput {
    pub fit: FitResult,
    pub improvements: Vec<Improvement>,
    /// Linked points with no correct trials, which have no improvement.
    pub skipped: Vec<u32>,
}

/// Rows of the linked curve, one per precision.
fn linked_rows(rows: &[ReportRow], jf: Option<f64>) -> CliResult<Vec<&ReportRow>> {
    let mut by_p: BTreeMap<u32, Vec<&ReportRow>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.jf.is_some()) {
        by_p.entry(r.p).or_default().push(r);
    }
    if by_p.is_empty() {
        return Err(CliError::Schema("report has no linked-copy rows".into()));
    }
    let mut out = Vec::new();
    for (p, cands) in by_p {
        let want = match (jf, cands.len()) {
            (Some(v), _) => Some(v),
            (None, 1) => None,
            (None, _) => Some(jf_min(p)?),
        };
        let pick = match want {
            None => Some(cands[0]),
            Some(v) => cands.into_iter().find(|r| r.jf == Some(v)),
        };
        out.extend(pick);
    }
    if out.is_empty() {
        return Err(CliError::Schema("no linked rows match the requested J_F".into()));
    }
    Ok(out)
}

pub fn fit_report(rows: &[ReportRow], curve: Curve, jf: Option<f64>) -> CliResult<FitOutput> {
    let mut single: BTreeMap<u32, FitPoint> = BTreeMap::new();
    for r in rows {
        single.entry(r.p).or_insert(FitPoint { p: r.p as f64, broken: 1.0 - r.frac_single, stderr: r.stderr_single });
    }
    let points: Vec<FitPoint> = single.into_values().collect();
    let fit = fit_exponential(&points)?;
    for d in &fit.dropped {
        log::warn!("dropped single-copy point p = {} (broken fraction {})", d.p, d.broken);
    }
    let mut improvements = Vec::new();
    let mut skipped = Vec::new();
    for r in linked_rows(rows, jf)? {
        let (f, se) = match curve {
            Curve::SingleOrAny => (r.frac_single_or_any, r.stderr_single_or_any),
            Curve::AnyCopy => (
                r.frac_any_copy.ok_or_else(|| CliError::Schema("missing frac_any_copy".into()))?,
                r.stderr_any_copy.unwrap_or(0.0),
            ),
        };
        if f <= 0.0 {
            log::warn!("no correct linked trials at p = {}", r.p);
            skipped.push(r.p);
            continue;
        }
        improvements.push(precision_improvement(&fit, r.p as f64, f, se)?);
    }
    Ok(FitOutput { fit, improvements, skipped })
}

pub fn fit_json(out: &FitOutput) -> String {
    let improvements: Vec<_> = out
        .improvements
        .iter()
        .filter_map(Improvement::point)
        .map(|pt| json!({ "p": pt.p as u32, "dp": pt.improvement, "sigma": pt.sigma, "equivalent_p": pt.equivalent_p }))
        .collect();
    let censored: Vec<u32> = out
        .improvements
        .iter()
        .filter_map(|i| match i {
            Improvement::Censored { p } => Some(*p as u32),
            _ => None,
        })
        .collect();
    let fit = &out.fit;
    let mut s = serde_json::to_string_pretty(&json!({
        "A": fit.amplitude(),
        "b": fit.rate,
        "ln_A": fit.ln_amplitude,
        "cov": fit.cov,
        "fit_points": fit.used.iter().map(|p| p.p as u32).collect::<Vec<_>>(),
        "dropped_points": fit.dropped.iter().map(|p| p.p as u32).collect::<Vec<_>>(),
        "improvements": improvements,
        "censored": censored,
        "skipped": out.skipped,
    }))
    .expect("json");
    s.push('\n');
    s
}

/// `p,equivalent_p,dp,sigma,censored`, one row per linked point.
pub fn fit_csv(out: &FitOutput) -> String {
    let mut s = String::from("p,equivalent_p,dp,sigma,censored\n");
    for i in &out.improvements {
        match i {
            Improvement::Point(pt) => {
                s.push_str(&format!("{},{},{},{},false\n", pt.p as u32, pt.equivalent_p, pt.improvement, pt.sigma))
            }
            Improvement::Censored { p } => s.push_str(&format!("{},,,,true\n", *p as u32)),
        }
    }
    s
}
