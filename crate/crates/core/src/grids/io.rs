//! CSV dumps of grids: header `k,l,re,im` (Doppler-delay) or `m,n,re,im`
//! (time-frequency), one row per entry in row-major order, values written
//! with 17 significant digits.

use std::io::{Read, Write};

use num_complex::Complex;

use crate::numerics::{czero, CMatrix};
use crate::{OtfsError, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridAxes {
    DopplerDelay,
    TimeFrequency,
}

impl GridAxes {
    fn header(self) -> [&'static str; 4] {
        match self {
            GridAxes::DopplerDelay => ["k", "l", "re", "im"],
            GridAxes::TimeFrequency => ["m", "n", "re", "im"],
        }
    }
}

pub(crate) fn sci<T: Scalar>(v: T) -> String {
    format!("{:.16e}", v.as_f64())
}

pub fn write_grid_csv<T: Scalar, W: Write>(out: W, grid: &CMatrix<T>, axes: GridAxes) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(axes.header())?;
    for ((r, c), z) in grid.indexed_iter() {
        w.write_record([r.to_string(), c.to_string(), sci(z.re), sci(z.im)])?;
    }
    w.flush()?;
    Ok(())
}

/// Read a grid dump back; the shape is inferred from the largest indices.
pub fn read_grid_csv<T: Scalar, R: Read>(input: R, axes: GridAxes) -> Result<CMatrix<T>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers()?.clone();
    if header.iter().ne(axes.header()) {
        return Err(OtfsError::param(
            "header",
            format!("expected {:?}, got {:?}", axes.header(), header),
        ));
    }
    let mut entries = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).ok_or_else(|| OtfsError::param("row", "too few fields"));
        let parse_idx = |s: &str| s.parse::<usize>().map_err(|e| OtfsError::param("index", e));
        let parse_val = |s: &str| s.parse::<f64>().map_err(|e| OtfsError::param("value", e));
        entries.push((
            parse_idx(field(0)?)?,
            parse_idx(field(1)?)?,
            Complex::new(T::of(parse_val(field(2)?)?), T::of(parse_val(field(3)?)?)),
        ));
    }
    let rows = entries.iter().map(|e| e.0 + 1).max().ok_or(OtfsError::Empty)?;
    let cols = entries.iter().map(|e| e.1 + 1).max().ok_or(OtfsError::Empty)?;
    if entries.len() != rows * cols {
        return Err(OtfsError::dims(format!("{} entries", rows * cols), entries.len()));
    }
    let mut grid = CMatrix::from_elem((rows, cols), czero());
    for (r, c, z) in entries {
        grid[[r, c]] = z;
    }
    Ok(grid)
}
