//! CSV and SVG output.
//!
//! Floats are written with Rust's `Display`, the shortest decimal that
//! parses back to the same `f64`. Output depends only on the table, so equal
//! tables give byte-identical files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::runner::{ResultRow, ResultTable};
use crate::BenchError;

pub const CSV_HEADER: [&str; 8] = [
    "algorithm",
    "T",
    "cum_loss_mean",
    "cum_loss_sd",
    "ccv_mean",
    "ccv_sd",
    "plain_violation_mean",
    "regret_static_mean",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Svg,
}

pub fn to_csv(table: &ResultTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in &table.rows {
        w.write_record([
            r.algorithm.clone(),
            r.t.to_string(),
            r.cum_loss_mean.to_string(),
            r.cum_loss_sd.to_string(),
            r.ccv_mean.to_string(),
            r.ccv_sd.to_string(),
            r.plain_violation_mean.to_string(),
            r.regret_static_mean.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

pub fn from_csv(text: &str) -> Result<Vec<ResultRow>, BenchError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| BenchError::Table(e.to_string()))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(BenchError::Table(format!("unexpected header {:?}", header.iter().collect::<Vec<_>>())));
    }
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| BenchError::Table(e.to_string()))?;
        let num = |i: usize| -> Result<f64, BenchError> {
            rec[i].parse().map_err(|_| BenchError::Table(format!("row {}: bad number {:?}", line + 1, &rec[i])))
        };
        rows.push(ResultRow {
            algorithm: rec[0].to_string(),
            t: rec[1].parse().map_err(|_| BenchError::Table(format!("row {}: bad T {:?}", line + 1, &rec[1])))?,
            cum_loss_mean: num(2)?,
            cum_loss_sd: num(3)?,
            ccv_mean: num(4)?,
            ccv_sd: num(5)?,
            plain_violation_mean: num(6)?,
            regret_static_mean: num(7)?,
        });
    }
    Ok(rows)
}

/// Metrics charted in SVG output, with their file stems.
pub const CHARTS: [(&str, fn(&ResultRow) -> f64); 4] = [
    ("cum_loss_mean", |r| r.cum_loss_mean),
    ("ccv_mean", |r| r.ccv_mean),
    ("plain_violation_mean", |r| r.plain_violation_mean),
    ("regret_static_mean", |r| r.regret_static_mean),
];

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// One line chart, linear axes, one polyline per algorithm.
pub fn to_svg(table: &ResultTable, metric: &str, value: fn(&ResultRow) -> f64) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const PAD: f64 = 60.0;
    let xs: Vec<f64> = table.rows.iter().map(|r| r.t as f64).collect();
    let ys: Vec<f64> = table.rows.iter().map(value).collect();
    let span = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min).min(0.0);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi > lo { (lo, hi) } else { (lo, lo + 1.0) }
    };
    let (x0, x1) = span(&xs);
    let (y0, y1) = span(&ys);
    let px = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let py = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{metric}</text>"#, W / 2.0);
    let _ = writeln!(
        s,
        r#"<path d="M{PAD} {PAD} V{} H{}" fill="none" stroke="black"/>"#,
        H - PAD,
        W - PAD
    );
    for (v, anchor, x, y) in [(x0, "start", px(x0), H - PAD + 18.0), (x1, "end", px(x1), H - PAD + 18.0)] {
        let _ = writeln!(s, r#"<text x="{x}" y="{y}" text-anchor="{anchor}" font-family="sans-serif" font-size="11">{v}</text>"#);
    }
    for v in [y0, y1] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end" font-family="sans-serif" font-size="11">{}</text>"#,
            PAD - 6.0,
            py(v) + 4.0,
            short(v)
        );
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">T</text>"#, W / 2.0, H - 16.0);
    for (i, name) in table.algorithms().into_iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = table
            .rows
            .iter()
            .filter(|r| r.algorithm == name)
            .map(|r| format!("{:.2},{:.2}", px(r.t as f64), py(value(r))))
            .collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#, points.join(" "));
        let ly = PAD + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{ly}" font-family="sans-serif" font-size="12" fill="{color}">{}</text>"#,
            W - PAD - 150.0,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn short(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e5 || v.abs() < 1e-2) { format!("{v:.2e}") } else { format!("{v:.2}") }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Write `results.csv`, or one `<metric>.svg` per chart, into `dir`.
pub fn emit(table: &ResultTable, format: Format, dir: &Path) -> Result<Vec<PathBuf>, BenchError> {
    std::fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    let files: Vec<(PathBuf, String)> = match format {
        Format::Csv => vec![(dir.join("results.csv"), to_csv(table))],
        Format::Svg => {
            if table.rows.is_empty() {
                return Err(BenchError::Table("nothing to plot".into()));
            }
            CHARTS.iter().map(|(name, f)| (dir.join(format!("{name}.svg")), to_svg(table, name, *f))).collect()
        }
    };
    for (path, body) in &files {
        std::fs::write(path, body).map_err(|e| BenchError::io(path, e))?;
    }
    Ok(files.into_iter().map(|(p, _)| p).collect())
}
