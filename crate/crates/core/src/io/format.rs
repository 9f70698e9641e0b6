use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::sample::FunctionalSample;
use crate::surface::CovSurface;

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn write_rows<'a>(path: &Path, rows: impl Iterator<Item = Vec<String>> + 'a) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn num(v: f64) -> String {
    format!("{v}")
}

fn parse_num(s: &str, row: usize) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| Error::Parse {
        row,
        value: s.to_string(),
    })
}

fn read_table(path: &Path) -> Result<(Vec<String>, Vec<(usize, Vec<String>)>)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::Reader::from_reader(file);
    let header = r.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        rows.push((line, rec.iter().map(str::to_string).collect()));
    }
    Ok((header, rows))
}

/// Writes `n` rows of `p` values under a header of grid points.
pub fn write_sample(path: &Path, x: &FunctionalSample) -> Result<()> {
    let header = x.grid().points().iter().map(|&t| num(t)).collect();
    let rows = x.curves().map(|c| c.into_iter().map(num).collect());
    write_rows(path, std::iter::once(header).chain(rows))
}

pub fn read_sample(path: &Path) -> Result<FunctionalSample> {
    let (header, rows) = read_table(path)?;
    let points = header
        .iter()
        .map(|h| parse_num(h, 1))
        .collect::<Result<Vec<_>>>()?;
    let grid = Grid::new(points)?;
    let values = rows
        .iter()
        .map(|(line, r)| r.iter().map(|v| parse_num(v, *line)).collect())
        .collect::<Result<Vec<Vec<f64>>>>()?;
    FunctionalSample::from_rows(&values, grid)
}

/// Writes a surface with header `u\s, s_1, .., s_p` and rows `u_i, C(u_i, .)`.
pub fn write_surface(path: &Path, c: &CovSurface) -> Result<()> {
    let pts = c.grid().points();
    let header = std::iter::once("u\\s".to_string())
        .chain(pts.iter().map(|&t| num(t)))
        .collect();
    let rows = (0..c.p()).map(|i| {
        std::iter::once(num(pts[i]))
            .chain((0..c.p()).map(|j| num(c.get(i, j))))
            .collect()
    });
    write_rows(path, std::iter::once(header).chain(rows))
}

pub fn read_surface(path: &Path) -> Result<CovSurface> {
    let (header, rows) = read_table(path)?;
    let points = header
        .iter()
        .skip(1)
        .map(|h| parse_num(h, 1))
        .collect::<Result<Vec<_>>>()?;
    let p = points.len();
    if rows.len() != p {
        return Err(Error::DimensionMismatch(format!(
            "surface has {} rows for {p} grid points",
            rows.len()
        )));
    }
    let mut values = DMatrix::zeros(p, p);
    for (i, (line, r)) in rows.iter().enumerate() {
        if r.len() != p + 1 {
            return Err(Error::DimensionMismatch(format!("row {line} has {} fields", r.len())));
        }
        for j in 0..p {
            values[(i, j)] = parse_num(&r[j + 1], *line)?;
        }
    }
    CovSurface::new(values, Grid::new(points)?)
}

/// Two-column table `index, value`.
pub fn write_vector(path: &Path, name: &str, v: &[f64]) -> Result<()> {
    let header = vec!["index".to_string(), name.to_string()];
    let rows = v.iter().enumerate().map(|(i, x)| vec![i.to_string(), num(*x)]);
    write_rows(path, std::iter::once(header).chain(rows))
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}
