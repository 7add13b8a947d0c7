//! Graph and matrix file formats, and stable output writing.
//!
//! * `.tsv` edge lists: `<src>\t<dst>\t<weight>` per line, `#` comments,
//!   labels numbered by first appearance.
//! * `.csv` matrices: optional header row of labels, then one row per node.

use std::collections::{HashMap, HashSet};
use std::io::Write;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use serde::Serialize;
use serde_json::ser::Formatter;
use spectral_abstraction::{Error, FcMatrix, Graph};

use crate::error::{CliError, Result};

const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Read a graph, choosing the format by extension.
pub fn parse_graph_file(path: &Path) -> Result<Graph> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("tsv") => parse_edge_list(path),
        Some("csv") => {
            let (labels, m) = read_matrix(path)?;
            graph_from_matrix(path, labels, &m)
        }
        _ => Err(CliError::io(path, "unsupported graph file extension (expected .tsv or .csv)")),
    }
}

fn parse_edge_list(path: &Path) -> Result<Graph> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .comment(Some(b'#'))
        .has_headers(false)
        .flexible(true)
        .from_path(path)
        .map_err(|e| CliError::io(path, e))?;
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let mut edges = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            CliError::Parse { path: path.to_path_buf(), line, message: e.to_string() }
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let parse_err = |message: String| CliError::Parse { path: path.to_path_buf(), line, message };
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        if record.len() != 3 {
            return Err(parse_err(format!("expected 3 tab-separated fields, found {}", record.len())));
        }
        let weight: f64 = record[2].trim().parse().map_err(|_| parse_err(format!("invalid weight '{}'", &record[2])))?;
        let mut node = |name: &str| -> usize {
            let name = name.trim();
            *index.entry(name.to_string()).or_insert_with(|| {
                labels.push(name.to_string());
                labels.len() - 1
            })
        };
        let (i, j) = (node(&record[0]), node(&record[1]));
        let at = |source: Error| CliError::AtLine { path: path.to_path_buf(), line, source };
        if i == j {
            return Err(at(Error::SelfLoop { i }));
        }
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(at(Error::NonpositiveWeight { i, j, weight }));
        }
        if !seen.insert((i.min(j), i.max(j))) {
            return Err(at(Error::DuplicateEdge { i, j }));
        }
        edges.push((i, j, weight));
    }
    Ok(Graph::from_edges(&labels, &edges)?)
}

/// Square numeric CSV with an optional header row.
pub fn read_matrix(path: &Path) -> Result<(Option<Vec<String>>, DMatrix<f64>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .from_path(path)
        .map_err(|e| CliError::io(path, e))?;
    let mut header = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            CliError::Parse { path: path.to_path_buf(), line, message: e.to_string() }
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let parsed: std::result::Result<Vec<f64>, _> = record.iter().map(|f| f.trim().parse::<f64>()).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(_) if header.is_none() && rows.is_empty() => {
                header = Some(record.iter().map(|f| f.trim().to_string()).collect::<Vec<_>>());
            }
            Err(_) => {
                return Err(CliError::Parse { path: path.to_path_buf(), line, message: "non-numeric matrix entry".into() })
            }
        }
        if let Some(row) = rows.last() {
            let n = header.as_ref().map_or(rows[0].len(), |h| h.len());
            if row.len() != n {
                return Err(CliError::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("expected {n} columns, found {}", row.len()),
                });
            }
        }
    }
    let n = rows.len();
    if n == 0 {
        return Err(CliError::Parse { path: path.to_path_buf(), line: 1, message: "empty matrix".into() });
    }
    if rows[0].len() != n {
        let line = n as u64 + u64::from(header.is_some());
        return Err(CliError::Parse {
            path: path.to_path_buf(),
            line,
            message: format!("matrix has {n} rows but {} columns", rows[0].len()),
        });
    }
    Ok((header, DMatrix::from_fn(n, n, |i, j| rows[i][j])))
}

fn check_symmetric(path: &Path, m: &DMatrix<f64>) -> Result<()> {
    for i in 0..m.nrows() {
        for j in (i + 1)..m.nrows() {
            let diff = (m[(i, j)] - m[(j, i)]).abs();
            if diff > SYMMETRY_TOLERANCE || diff.is_nan() {
                return Err(CliError::AsymmetricMatrix { path: path.to_path_buf(), i, j, diff });
            }
        }
    }
    Ok(())
}

fn graph_from_matrix(path: &Path, labels: Option<Vec<String>>, m: &DMatrix<f64>) -> Result<Graph> {
    check_symmetric(path, m)?;
    let n = m.nrows();
    let mut edges = Vec::new();
    for i in 0..n {
        if m[(i, i)].abs() > SYMMETRY_TOLERANCE {
            return Err(Error::SelfLoop { i }.into());
        }
        for j in (i + 1)..n {
            let w = m[(i, j)];
            if w < 0.0 || !w.is_finite() {
                return Err(Error::NonpositiveWeight { i, j, weight: w }.into());
            }
            if w > 0.0 {
                edges.push((i, j, w));
            }
        }
    }
    Ok(match labels {
        Some(labels) => Graph::from_edges(&labels, &edges)?,
        None => Graph::with_default_labels(n, &edges)?,
    })
}

/// Functional connectivity matrix; nonzero diagonal allowed.
pub fn read_fc_matrix(path: &Path) -> Result<FcMatrix> {
    let (_, m) = read_matrix(path)?;
    check_symmetric(path, &m)?;
    Ok(FcMatrix::new(m)?)
}

/// Float text with 17 significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

struct StableFloats;

impl Formatter for StableFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        writer.write_all(format_float(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Compact JSON with 17-significant-digit floats and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, StableFloats);
    value.serialize(&mut ser).expect("report serialization cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

/// Matrix as CSV with an optional label header.
pub fn matrix_csv(labels: Option<&[String]>, m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    if let Some(labels) = labels {
        out.push_str(&labels.join(","));
        out.push('\n');
    }
    for i in 0..m.nrows() {
        let row: Vec<String> = m.row(i).iter().map(|&v| format_float(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Write every file through a temporary sibling, renaming only once all
/// contents are on disk.
pub fn write_outputs(files: &[(PathBuf, String)]) -> Result<()> {
    let mut staged = Vec::with_capacity(files.len());
    for (path, contents) in files {
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
            _ => PathBuf::from("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| CliError::io(path, e))?;
        tmp.write_all(contents.as_bytes()).map_err(|e| CliError::io(path, e))?;
        tmp.as_file().sync_all().map_err(|e| CliError::io(path, e))?;
        staged.push((tmp, path));
    }
    for (tmp, path) in staged {
        tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    }
    Ok(())
}
