use std::io::Write;

use super::{MetricsError, MetricsReport, RankingEntry};
use crate::format::{fmt_opt_ratio, fmt_ratio, UNDEFINED};

/// Column labels of the summary table, in order.
pub const TABLE_COLUMNS: [&str; 3] = ["all", "M", "F"];

struct Row {
    key: &'static str,
    label: &'static str,
    indent: bool,
    cell: fn(&MetricsReport, usize) -> String,
}

#[rustfmt::skip]
const ROWS: &[Row] = &[
    Row { key: "active", label: "Active Universities", indent: false, cell: |r, _| r.active.to_string() },
    Row { key: "sending", label: "sending", indent: true, cell: |r, _| r.sending.to_string() },
    Row { key: "receiving", label: "receiving", indent: true, cell: |r, _| r.receiving.to_string() },
    Row { key: "partnerships", label: "University partnerships", indent: false, cell: |r, _| r.partnerships.to_string() },
    Row { key: "active_connections", label: "Active connections", indent: false, cell: |r, _| r.active_connections.to_string() },
    Row { key: "isolates", label: "Isolates", indent: false, cell: |r, _| r.isolates.to_string() },
    Row { key: "density", label: "Density", indent: false, cell: |r, p| fmt_opt_ratio(r.density.as_ref(), p) },
    Row { key: "degree_centralization", label: "Degree", indent: false, cell: |r, p| fmt_opt_ratio(r.degree_centralization.all.as_ref(), p) },
    Row { key: "degree_centralization_out", label: "out", indent: true, cell: |r, p| fmt_opt_ratio(r.degree_centralization.out.as_ref(), p) },
    Row { key: "degree_centralization_in", label: "in", indent: true, cell: |r, p| fmt_opt_ratio(r.degree_centralization.inward.as_ref(), p) },
    Row { key: "closeness_centralization", label: "Closeness", indent: false, cell: |r, p| fmt_opt_f64(r.closeness_centralization.all, p) },
    Row { key: "closeness_centralization_out", label: "out", indent: true, cell: |r, p| fmt_opt_f64(r.closeness_centralization.out, p) },
    Row { key: "closeness_centralization_in", label: "in", indent: true, cell: |r, p| fmt_opt_f64(r.closeness_centralization.inward, p) },
    Row { key: "assortativity", label: "Assortativity", indent: false, cell: |r, p| fmt_opt_f64(r.assortativity.value(), p) },
    Row { key: "reciprocity", label: "Reciprocity", indent: false, cell: |r, p| fmt_opt_ratio(r.reciprocity.as_ref(), p) },
    Row { key: "strength", label: "Strength", indent: false, cell: |r, _| r.strength.total.to_string() },
    Row { key: "strength_stem", label: "STEM", indent: true, cell: |r, _| r.strength.stem.to_string() },
    Row { key: "strength_non_stem", label: "non-STEM", indent: true, cell: |r, _| r.strength.non_stem.to_string() },
];

fn fmt_opt_f64(v: Option<f64>, places: usize) -> String {
    v.map_or_else(|| UNDEFINED.to_string(), |x| fmt_ratio(x, places))
}

fn io_err(e: impl std::fmt::Display) -> MetricsError {
    MetricsError::Write(e.to_string())
}

fn column_label(report: &MetricsReport) -> String {
    report.slice.gender.map_or("all", |g| g.as_str()).to_string()
}

/// CSV with one row per statistic and one column per report.
pub fn write_report_csv<W: Write>(sink: W, reports: &[MetricsReport], places: usize) -> Result<(), MetricsError> {
    let mut w = csv::Writer::from_writer(sink);
    let mut header = vec!["metric".to_string()];
    header.extend(reports.iter().map(column_label));
    w.write_record(&header).map_err(io_err)?;
    for row in ROWS {
        let mut rec = vec![row.key.to_string()];
        rec.extend(reports.iter().map(|r| (row.cell)(r, places)));
        w.write_record(&rec).map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

/// Aligned plain-text table laid out like a published summary table.
pub fn write_report_table<W: Write>(
    mut sink: W,
    title: &str,
    reports: &[MetricsReport],
    places: usize,
) -> Result<(), MetricsError> {
    let labels: Vec<String> = ROWS
        .iter()
        .map(|r| {
            if r.indent {
                format!("  {}", r.label)
            } else {
                r.label.to_string()
            }
        })
        .collect();
    let cells: Vec<Vec<String>> = ROWS
        .iter()
        .map(|row| reports.iter().map(|r| (row.cell)(r, places)).collect())
        .collect();
    let headers: Vec<String> = reports.iter().map(column_label).collect();
    let label_w = labels.iter().map(String::len).max().unwrap_or(0);
    let col_w: Vec<usize> = (0..reports.len())
        .map(|c| {
            cells
                .iter()
                .map(|row| row[c].len())
                .chain([headers[c].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();

    let line = |label: &str, values: &[String]| {
        let mut s = format!("{label:<label_w$}");
        for (v, w) in values.iter().zip(&col_w) {
            s.push_str(&format!("  {v:>w$}"));
        }
        s.trim_end().to_string()
    };
    let rule = "-".repeat(label_w + col_w.iter().map(|w| w + 2).sum::<usize>());
    let mut out = vec![title.to_string(), rule.clone(), line("", &headers), rule.clone()];
    out.extend(labels.iter().zip(&cells).map(|(l, v)| line(l, v)));
    out.push(rule);
    for l in out {
        writeln!(sink, "{l}").map_err(io_err)?;
    }
    Ok(())
}

/// CSV with columns `rank,institution,degree`.
pub fn write_top_csv<W: Write>(sink: W, entries: &[RankingEntry]) -> Result<(), MetricsError> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["rank", "institution", "degree"]).map_err(io_err)?;
    for (i, e) in entries.iter().enumerate() {
        w.write_record([(i + 1).to_string(), e.institution.to_string(), e.degree.to_string()])
            .map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}
