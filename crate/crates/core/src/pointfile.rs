//! CSV point files.
//!
//! One point per row with exactly `d` numeric columns. An optional header row
//! `x1,...,xd` is accepted, and comment lines start with `#`. A line
//! `# provenance: ...` is carried into [`PointSet::provenance`].

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{Point, PointSet};

const PROVENANCE_PREFIX: &str = "# provenance:";

pub fn read_points(path: impl AsRef<Path>) -> Result<PointSet<f64>> {
    let text = std::fs::read_to_string(path)?;
    parse_points(&text)
}

pub fn read_points_from(mut reader: impl Read) -> Result<PointSet<f64>> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_points(&text)
}

pub fn parse_points(text: &str) -> Result<PointSet<f64>> {
    let mut provenance = String::new();
    let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut dim: Option<usize> = None;
    let mut first_data_line = true;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix(PROVENANCE_PREFIX) {
            provenance = rest.trim().to_string();
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if first_data_line {
            first_data_line = false;
            if is_header(&fields) {
                dim = Some(fields.len());
                continue;
            }
        }
        let d = *dim.get_or_insert(fields.len());
        if fields.len() != d {
            return Err(Error::PointFile {
                line: line_no,
                message: format!("expected {d} columns, found {}", fields.len()),
            });
        }
        let mut coords = Vec::with_capacity(d);
        for (axis, f) in fields.iter().enumerate() {
            let v: f64 = f.parse().map_err(|_| Error::PointFile {
                line: line_no,
                message: format!("column {} is not a number: {f:?}", axis + 1),
            })?;
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::PointFile {
                    line: line_no,
                    message: format!("column {} value {v} is outside [0, 1]", axis + 1),
                });
            }
            coords.push(v);
        }
        rows.push((line_no, coords));
    }

    let dim = dim.ok_or(Error::PointFile {
        line: 0,
        message: "no header and no data rows; dimension unknown".into(),
    })?;
    let points = rows
        .into_iter()
        .map(|(line, c)| {
            Point::new(c).map_err(|e| Error::PointFile {
                line,
                message: e.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PointSet::new(dim, points)?.with_provenance(provenance))
}

fn is_header(fields: &[&str]) -> bool {
    fields
        .iter()
        .enumerate()
        .all(|(i, f)| *f == format!("x{}", i + 1))
}

/// Writes the provenance comment, the header row and one row per point.
/// Floats use the shortest round-trip representation, so output is
/// byte-identical for identical sets.
pub fn write_points(mut w: impl Write, xs: &PointSet<f64>) -> Result<()> {
    if !xs.provenance().is_empty() {
        writeln!(w, "{PROVENANCE_PREFIX} {}", xs.provenance())?;
    }
    let header: Vec<String> = (1..=xs.dim()).map(|i| format!("x{i}")).collect();
    writeln!(w, "{}", header.join(","))?;
    for p in xs.points() {
        let row: Vec<String> = p.coords().iter().map(|c| format!("{c:?}")).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn write_points_file(path: impl AsRef<Path>, xs: &PointSet<f64>) -> Result<()> {
    let mut buf = Vec::new();
    write_points(&mut buf, xs)?;
    std::fs::write(path, buf)?;
    Ok(())
}
