//! CSV and JSON emission. CSV files start with a versioned schema comment
//! and print floats with 17 significant digits, so identical runs give
//! identical bytes.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};

use crate::experiment::{EvalRow, Format};

pub const RESULTS_SCHEMA: &str = "# graph-coarsen results v1";
pub const BENCH_SCHEMA: &str = "# graph-coarsen bench v1";

const RESULT_COLUMNS: [&str; 13] = [
    "graph",
    "method",
    "ratio",
    "k",
    "n_fine",
    "n_coarse",
    "epsilon",
    "eig_err",
    "sin_theta",
    "gamma1",
    "gamma2",
    "bounds_ok",
    "status",
];

/// Scientific notation with 17 significant digits; non-finite values as
/// `inf`, `-inf`, `nan`.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn opt<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_default()
}

/// Opens `path` for writing, or stdout when it is `None` or `-`.
pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    match path {
        Some(p) if p != Path::new("-") => {
            let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        _ => Ok(Box::new(BufWriter::new(io::stdout()))),
    }
}

pub fn write_rows(
    out: &mut dyn Write,
    rows: &[EvalRow],
    format: Format,
    timing: bool,
) -> Result<()> {
    match format {
        Format::Csv => write_rows_csv(out, rows, timing),
        Format::Json => {
            let rows: Vec<EvalRow> = rows
                .iter()
                .cloned()
                .map(|mut r| {
                    if !timing {
                        r.wall_ms = None;
                    }
                    r
                })
                .collect();
            serde_json::to_writer_pretty(&mut *out, &rows)?;
            writeln!(out)?;
            Ok(())
        }
    }
}

fn write_rows_csv(out: &mut dyn Write, rows: &[EvalRow], timing: bool) -> Result<()> {
    writeln!(out, "{RESULTS_SCHEMA}")?;
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = RESULT_COLUMNS.to_vec();
    if timing {
        header.push("wall_ms");
    }
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            r.graph.clone(),
            r.method.clone(),
            fmt_float(r.ratio),
            r.k.to_string(),
            r.n_fine.to_string(),
            opt(r.n_coarse, |n| n.to_string()),
            opt(r.epsilon, fmt_float),
            opt(r.eig_err, fmt_float),
            opt(r.sin_theta, fmt_float),
            opt(r.gamma1, fmt_float),
            opt(r.gamma2, fmt_float),
            opt(r.bounds_ok, |b| b.to_string()),
            r.status.clone(),
        ];
        if timing {
            rec.push(opt(r.wall_ms, fmt_float));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
