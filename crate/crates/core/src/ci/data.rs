use std::io::{Read, Write};

use super::CiError;

/// An `n × p` sample matrix together with its sample correlation matrix.
#[derive(Clone, Debug)]
pub struct Dataset {
    n: usize,
    p: usize,
    /// Row-major values.
    values: Vec<f64>,
    corr: Vec<f64>,
}

impl Dataset {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, CiError> {
        let n = rows.len();
        let p = rows.first().map_or(0, Vec::len);
        if n < 2 || p == 0 {
            return Err(CiError::Data(format!("need at least 2 rows and 1 column, got {n}x{p}")));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != p) {
            return Err(CiError::Data(format!("row {i} has {} columns, expected {p}", rows[i].len())));
        }
        let values: Vec<f64> = rows.into_iter().flatten().collect();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CiError::Data("non-finite value".into()));
        }
        let corr = correlation(&values, n, p)?;
        Ok(Self { n, p, values, corr })
    }

    /// Headerless comma-separated reals, one sample per row.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self, CiError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let mut rows = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| CiError::Data(e.to_string()))?;
            let row = rec
                .iter()
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|_| CiError::Data(format!("row {}: cannot parse `{f}`", i + 1)))
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Self::from_rows(rows)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for row in self.values.chunks(self.p) {
            w.write_record(row.iter().map(|v| format!("{v}")))?;
        }
        w.flush()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.p + col]
    }

    pub fn corr(&self, i: usize, j: usize) -> f64 {
        self.corr[i * self.p + j]
    }

    /// Builds a dataset directly from a correlation matrix, with `n` as the
    /// nominal sample size. Used to run the Fisher-Z machinery on population
    /// quantities.
    pub fn from_correlation(corr: Vec<Vec<f64>>, n: usize) -> Result<Self, CiError> {
        let p = corr.len();
        if corr.iter().any(|r| r.len() != p) {
            return Err(CiError::Data("correlation matrix must be square".into()));
        }
        Ok(Self { n, p, values: Vec::new(), corr: corr.into_iter().flatten().collect() })
    }
}

fn correlation(values: &[f64], n: usize, p: usize) -> Result<Vec<f64>, CiError> {
    let mut mean = vec![0.0; p];
    for row in values.chunks(p) {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);

    let mut cov = vec![0.0; p * p];
    for row in values.chunks(p) {
        for i in 0..p {
            let di = row[i] - mean[i];
            for j in i..p {
                cov[i * p + j] += di * (row[j] - mean[j]);
            }
        }
    }
    let sd: Vec<f64> = (0..p).map(|i| cov[i * p + i].sqrt()).collect();
    if let Some(c) = sd.iter().position(|&s| s <= 0.0) {
        return Err(CiError::Data(format!("column {c} is constant")));
    }
    let mut corr = vec![0.0; p * p];
    for i in 0..p {
        corr[i * p + i] = 1.0;
        for j in i + 1..p {
            let r = (cov[i * p + j] / (sd[i] * sd[j])).clamp(-1.0, 1.0);
            corr[i * p + j] = r;
            corr[j * p + i] = r;
        }
    }
    Ok(corr)
}
