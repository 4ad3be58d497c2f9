//! Pivots result rows into one table per metric: a row per
//! (graph, ratio, k) and a column per method.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use anyhow::{bail, Context, Result};
use graph_coarsen::Method;

/// Pivoted metric values; `None` marks a missing cell.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub metric: String,
    pub methods: Vec<String>,
    pub rows: Vec<TableRow>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub graph: String,
    pub ratio: String,
    pub k: String,
    pub cells: Vec<Option<String>>,
}

impl Table {
    pub fn missing(&self) -> Vec<(&TableRow, &str)> {
        self.rows
            .iter()
            .flat_map(|r| {
                r.cells
                    .iter()
                    .zip(&self.methods)
                    .filter(|(c, _)| c.is_none())
                    .map(move |(_, m)| (r, m.as_str()))
            })
            .collect()
    }
}

fn method_order(name: &str) -> (usize, &str) {
    let pos = name
        .parse::<Method>()
        .ok()
        .and_then(|m| Method::ALL.iter().position(|&x| x == m))
        .unwrap_or(usize::MAX);
    (pos, name)
}

/// Reads a results CSV (schema comment lines are skipped) and pivots
/// `metric`. Empty metric values count as missing.
pub fn pivot(input: impl Read, metric: &str) -> Result<Table> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(input);
    let headers = reader.headers().context("reading results header")?.clone();
    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .with_context(|| format!("results have no '{name}' column"))
    };
    let (gi, mi, ri, ki, vi) = (
        col("graph")?,
        col("method")?,
        col("ratio")?,
        col("k")?,
        col(metric)?,
    );
    if ["graph", "method", "ratio", "k"].contains(&metric) {
        bail!("'{metric}' is a key column, not a metric");
    }

    let mut methods = BTreeSet::new();
    let mut keys = BTreeMap::new();
    let mut values = BTreeMap::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.with_context(|| format!("results row {}", line + 1))?;
        let field = |i: usize| record.get(i).unwrap_or("").to_string();
        let ratio = field(ri);
        let ratio_key: f64 = ratio
            .parse()
            .with_context(|| format!("results row {}: bad ratio '{ratio}'", line + 1))?;
        let k = field(ki);
        let k_key: usize = k
            .parse()
            .with_context(|| format!("results row {}: bad k '{k}'", line + 1))?;
        let key = (field(gi), ordered(ratio_key), k_key);
        keys.entry(key.clone()).or_insert((ratio, k));
        let method = field(mi);
        methods.insert(method.clone());
        let value = field(vi);
        if !value.is_empty() && values.insert((key, method.clone()), value).is_some() {
            log::warn!("duplicate result for method {method}; keeping the last");
        }
    }

    let mut methods: Vec<String> = methods.into_iter().collect();
    methods.sort_by(|a, b| method_order(a).cmp(&method_order(b)));
    let rows = keys
        .into_iter()
        .map(|(key, (ratio, k))| TableRow {
            graph: key.0.clone(),
            ratio,
            k,
            cells: methods
                .iter()
                .map(|m| values.get(&(key.clone(), m.clone())).cloned())
                .collect(),
        })
        .collect();
    Ok(Table {
        metric: metric.to_string(),
        methods,
        rows,
    })
}

/// Totally ordered bit pattern of a finite float, for use as a map key.
fn ordered(x: f64) -> i64 {
    let bits = x.to_bits() as i64;
    bits ^ (((bits >> 63) as u64) >> 1) as i64
}

fn short(value: &str) -> String {
    match value.parse::<f64>() {
        Ok(x) if x.is_finite() => format!("{x:.4}"),
        _ => value.to_string(),
    }
}

/// Aligned text; missing cells are shown as `--`.
pub fn write_text(out: &mut dyn Write, table: &Table) -> Result<()> {
    let mut grid: Vec<Vec<String>> = vec![["graph", "ratio", "k"]
        .iter()
        .map(|s| s.to_string())
        .chain(table.methods.iter().cloned())
        .collect()];
    for r in &table.rows {
        grid.push(
            [r.graph.clone(), short(&r.ratio), r.k.clone()]
                .into_iter()
                .chain(
                    r.cells
                        .iter()
                        .map(|c| c.as_deref().map_or("--".into(), short)),
                )
                .collect(),
        );
    }
    let widths: Vec<usize> = (0..grid[0].len())
        .map(|c| grid.iter().map(|row| row[c].len()).max().unwrap_or(0))
        .collect();
    writeln!(out, "{}", table.metric)?;
    for row in &grid {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(c, (v, &w))| {
                if c < 3 {
                    format!("{v:<w$}")
                } else {
                    format!("{v:>w$}")
                }
            })
            .collect();
        writeln!(out, "{}", line.join("  ").trim_end())?;
    }
    Ok(())
}

/// CSV with the same layout; missing cells are empty.
pub fn write_csv(out: &mut dyn Write, table: &Table) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let header: Vec<&str> = ["graph", "ratio", "k"]
        .into_iter()
        .chain(table.methods.iter().map(String::as_str))
        .collect();
    w.write_record(&header)?;
    for r in &table.rows {
        let rec: Vec<&str> = [r.graph.as_str(), r.ratio.as_str(), r.k.as_str()]
            .into_iter()
            .chain(r.cells.iter().map(|c| c.as_deref().unwrap_or("")))
            .collect();
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
