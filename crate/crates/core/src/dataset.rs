use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::rng::SampleRng;

/// Row-major `n x d` explanatory matrix plus the target vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: Vec<f64>,
    y: Vec<f64>,
    n: usize,
    d: usize,
}

impl Dataset {
    pub fn new(x: Vec<f64>, y: Vec<f64>, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if y.is_empty() {
            return Err(Error::EmptyData);
        }
        if x.len() != y.len() * d {
            return Err(Error::InvalidArgument(format!(
                "{} targets need {} matrix entries, got {}",
                y.len(),
                y.len() * d,
                x.len()
            )));
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteData);
        }
        let n = y.len();
        Ok(Dataset { x, y, n, d })
    }

    pub fn from_rows(rows: &[Vec<f64>], y: Vec<f64>) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidArgument("ragged rows".into()));
        }
        Dataset::new(rows.concat(), y, d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.x[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.x.chunks_exact(self.d)
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// Subset by row indices, in the given order.
    pub fn select(&self, idx: &[usize]) -> Result<Dataset> {
        let mut x = Vec::with_capacity(idx.len() * self.d);
        let mut y = Vec::with_capacity(idx.len());
        for &i in idx {
            x.extend_from_slice(self.row(i));
            y.push(self.y[i]);
        }
        Dataset::new(x, y, self.d)
    }

    /// Seeded shuffle then split; the test part is `None` when it would be
    /// empty.
    pub fn split(&self, test_fraction: f64, seed: u64) -> Result<(Dataset, Option<Dataset>)> {
        if !(0.0..1.0).contains(&test_fraction) {
            return Err(Error::InvalidArgument(format!(
                "test fraction {test_fraction} outside [0, 1)"
            )));
        }
        let mut idx: Vec<usize> = (0..self.n).collect();
        SampleRng::new(seed).shuffle(&mut idx);
        let n_test = (self.n as f64 * test_fraction).round() as usize;
        let n_test = n_test.min(self.n - 1);
        let (test_idx, train_idx) = idx.split_at(n_test);
        let train = self.select(train_idx)?;
        let test = if test_idx.is_empty() {
            None
        } else {
            Some(self.select(test_idx)?)
        };
        Ok((train, test))
    }

    /// Writes `x0,...,x{d-1},y` with 17 significant digits per value.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header: Vec<String> = (0..self.d).map(|i| format!("x{i}")).collect();
        header.push("y".into());
        out.write_record(&header).map_err(csv_err)?;
        for (row, y) in self.rows().zip(&self.y) {
            let rec: Vec<String> = row.iter().chain(std::iter::once(y)).map(|v| fmt_f64(*v)).collect();
            out.write_record(&rec).map_err(csv_err)?;
        }
        out.flush().map_err(|e| Error::Parse(e.to_string()))
    }

    /// Reads a headed CSV. The target is the named column (or zero-based
    /// index) when `target_col` is given, otherwise the last column.
    pub fn read_csv<R: Read>(r: R, target_col: Option<&str>) -> Result<Dataset> {
        let table = read_table(r)?;
        let ncol = table.header.len();
        if ncol < 2 {
            return Err(Error::Parse("need at least one feature column and a target".into()));
        }
        let target = match target_col {
            None => ncol - 1,
            Some(name) => table
                .header
                .iter()
                .position(|h| h == name)
                .or_else(|| name.parse::<usize>().ok().filter(|&i| i < ncol))
                .ok_or_else(|| Error::Parse(format!("no target column `{name}`")))?,
        };
        let mut x = Vec::with_capacity(table.rows.len() * (ncol - 1));
        let mut y = Vec::with_capacity(table.rows.len());
        for row in &table.rows {
            for (j, &v) in row.iter().enumerate() {
                if j == target {
                    y.push(v);
                } else {
                    x.push(v);
                }
            }
        }
        Dataset::new(x, y, ncol - 1)
    }
}

/// Raw numeric CSV with a header; every row has the header's width.
#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn read_table<R: Read>(r: R) -> Result<Table> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let header: Vec<String> = rdr
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let row = rec
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("row {}: `{f}` is not a number", line + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(Table { header, rows })
}

pub(crate) fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "nan".into()
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}
