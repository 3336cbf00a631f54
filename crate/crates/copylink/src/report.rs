//! CSV form of a `FractionReport`, one row per `(p, J_F)` cell.
//!
//! Columns: `instance_count, family, n, p, j_f, topology, frac_single,
//! frac_any_copy, frac_<k>correct` for `k = C..1`, `frac_single_only,
//! frac_copies_only, frac_both`, a `stderr_` column for each fraction,
//! then `frac_0correct, frac_single_or_any, stderr_single_or_any, trials`.
//! Single-copy sweeps use `C = 3` with empty copy columns.

use std::collections::HashMap;
use std::path::Path;

use copylink_core::experiments::{CellCounts, FractionReport};
use copylink_core::Family;

use crate::error::{CliError, CliResult};

/// Static description of the rows being written.
pub struct ReportMeta<'a> {
    pub instance_count: u64,
    pub family: Family,
    pub n: usize,
    pub topology: Option<&'a str>,
}

fn fraction_columns(copies: usize) -> Vec<String> {
    let mut cols = vec!["single".to_string(), "any_copy".to_string()];
    cols.extend((1..=copies).rev().map(|k| format!("{k}correct")));
    cols.extend(["single_only", "copies_only", "both"].map(String::from));
    cols
}

pub fn header(copies: usize) -> Vec<String> {
    let copies = if copies == 0 { 3 } else { copies };
    let fr = fraction_columns(copies);
    let mut h: Vec<String> = ["instance_count", "family", "n", "p", "j_f", "topology"].map(String::from).to_vec();
    h.extend(fr.iter().map(|c| format!("frac_{c}")));
    h.extend(fr.iter().map(|c| format!("stderr_{c}")));
    h.extend(["frac_0correct", "frac_single_or_any", "stderr_single_or_any", "trials"].map(String::from));
    h
}

fn counts_for(c: &CellCounts, copies: usize) -> Vec<Option<u64>> {
    let linked = copies > 0;
    let opt = |v: u64| linked.then_some(v);
    let mut v = vec![Some(c.single), opt(c.any_copy)];
    if linked {
        v.extend((1..=copies).rev().map(|k| Some(c.copies_correct(k))));
    } else {
        v.extend([None, None, None]);
    }
    v.extend([opt(c.single_only), opt(c.copies_only), opt(c.both)]);
    v
}

fn num(x: f64) -> String {
    format!("{x}")
}

pub fn write_report(path: &Path, report: &FractionReport, meta: &ReportMeta) -> CliResult<()> {
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(header(report.copies)).map_err(csv_err)?;
        for cell in &report.cells {
            let c = &cell.counts;
            let counts = counts_for(c, report.copies);
            let mut row = vec![
                meta.instance_count.to_string(),
                meta.family.as_str().to_string(),
                meta.n.to_string(),
                cell.cell.p.to_string(),
                cell.cell.jf.map(num).unwrap_or_default(),
                meta.topology.unwrap_or("none").to_string(),
            ];
            row.extend(counts.iter().map(|k| k.map(|k| num(c.fraction(k))).unwrap_or_default()));
            row.extend(counts.iter().map(|k| k.map(|k| num(c.stderr(k))).unwrap_or_default()));
            let linked = report.copies > 0;
            row.push(if linked { num(c.fraction(c.copies_correct(0))) } else { String::new() });
            row.push(num(c.fraction(c.single_or_any)));
            row.push(num(c.stderr(c.single_or_any)));
            row.push(c.total.to_string());
            w.write_record(&row).map_err(csv_err)?;
        }
        w.flush().map_err(|e| CliError::io(path, e))?;
    }
    crate::io::write_text(path, std::str::from_utf8(&buf).expect("csv is utf-8"))
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Other(format!("csv: {e}"))
}

/// The columns of a report row needed for fitting.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub p: u32,
    pub jf: Option<f64>,
    pub frac_single: f64,
    pub stderr_single: f64,
    pub frac_any_copy: Option<f64>,
    pub stderr_any_copy: Option<f64>,
    pub frac_single_or_any: f64,
    pub stderr_single_or_any: f64,
    pub trials: u64,
}

pub fn read_report(path: &Path) -> CliResult<Vec<ReportRow>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_report(&text).map_err(|e| match e {
        CliError::Schema(m) => CliError::Schema(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn parse_report(text: &str) -> CliResult<Vec<ReportRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r.headers().map_err(|e| CliError::Schema(e.to_string()))?.clone();
    let index: HashMap<&str, usize> = headers.iter().enumerate().map(|(i, h)| (h, i)).collect();
    for required in ["p", "j_f", "frac_single", "stderr_single", "frac_single_or_any", "stderr_single_or_any", "trials"] {
        if !index.contains_key(required) {
            return Err(CliError::Schema(format!("report is missing column {required}")));
        }
    }
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Schema(e.to_string()))?;
        let field = |name: &str| index.get(name).and_then(|&i| rec.get(i)).unwrap_or("");
        let bad = |name: &str| CliError::Schema(format!("row {}: bad {name} value {:?}", line + 1, field(name)));
        let req_f = |name: &str| field(name).parse::<f64>().map_err(|_| bad(name));
        let opt_f = |name: &str| match field(name) {
            "" => Ok(None),
            s => s.parse::<f64>().map(Some).map_err(|_| bad(name)),
        };
        rows.push(ReportRow {
            p: field("p").parse().map_err(|_| bad("p"))?,
            jf: opt_f("j_f")?,
            frac_single: req_f("frac_single")?,
            stderr_single: req_f("stderr_single")?,
            frac_any_copy: opt_f("frac_any_copy")?,
            stderr_any_copy: opt_f("stderr_any_copy")?,
            frac_single_or_any: req_f("frac_single_or_any")?,
            stderr_single_or_any: req_f("stderr_single_or_any")?,
            trials: field("trials").parse().map_err(|_| bad("trials"))?,
        });
    }
    if rows.is_empty() {
        return Err(CliError::Schema("report has no rows".into()));
    }
    Ok(rows)
}
