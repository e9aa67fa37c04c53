//! Built-in reference datasets and CSV ingestion.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::regression::ModelSpec;

/// A numeric table with named columns.
///
/// Columns listed in `metadata_columns` (such as the observation year) are
/// carried along but never used as regressors unless requested by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedDataset {
    pub name: String,
    pub column_names: Vec<String>,
    pub rows: Matrix,
    pub provenance: String,
    pub metadata_columns: Vec<String>,
    pub default_response: Option<String>,
}

/// Which columns enter the design matrix besides the intercept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeatureSelection {
    /// Every column except the response and metadata columns.
    AllOthers,
    Columns(Vec<String>),
}

impl NamedDataset {
    pub fn n_rows(&self) -> usize {
        self.rows.rows()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.column_names.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        self.column_index(name).map(|j| self.rows.column(j))
    }

    fn is_metadata(&self, name: &str) -> bool {
        self.metadata_columns.iter().any(|m| m == name)
    }

    /// Feature column names selected by `features` for `response`.
    pub fn feature_names(
        &self,
        response: &str,
        features: &FeatureSelection,
    ) -> Result<Vec<String>> {
        if self.column_index(response).is_none() {
            return Err(Error::MissingColumn(response.to_string()));
        }
        let names: Vec<String> = match features {
            FeatureSelection::AllOthers => self
                .column_names
                .iter()
                .filter(|c| *c != response && !self.is_metadata(c))
                .cloned()
                .collect(),
            FeatureSelection::Columns(list) => {
                let mut seen = HashSet::new();
                for c in list {
                    if self.column_index(c).is_none() {
                        return Err(Error::MissingColumn(c.clone()));
                    }
                    if c == response {
                        return Err(Error::InvalidInput(format!(
                            "response `{c}` cannot also be a feature"
                        )));
                    }
                    if !seen.insert(c) {
                        return Err(Error::DuplicateColumn(c.clone()));
                    }
                }
                list.clone()
            }
        };
        if names.is_empty() {
            return Err(Error::NoRegressors);
        }
        Ok(names)
    }

    /// Assembles a model of `response` on the selected features, optionally
    /// prepending a constant column flagged as the intercept.
    pub fn model_spec(
        &self,
        response: &str,
        features: &FeatureSelection,
        add_intercept: bool,
    ) -> Result<ModelSpec> {
        let names = self.feature_names(response, features)?;
        let y = self.column(response).expect("checked above");
        let cols: Vec<Vec<f64>> = names
            .iter()
            .map(|c| self.column(c).expect("checked above"))
            .collect();
        let x = Matrix::from_columns(&cols)?;
        let spec = if add_intercept {
            ModelSpec::with_intercept(&x, y, names)?
        } else {
            ModelSpec::new(x, y, names, None)?
        };
        Ok(spec.with_response_name(response))
    }

    /// Writes the table as CSV with a header row. Values use the shortest
    /// representation that parses back to the same `f64`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let io = |e: csv::Error| Error::InvalidInput(format!("csv write failed: {e}"));
        w.write_record(&self.column_names).map_err(io)?;
        for i in 0..self.rows.rows() {
            w.write_record(self.rows.row(i).iter().map(|v| v.to_string()))
                .map_err(io)?;
        }
        w.flush()
            .map_err(|e| Error::InvalidInput(format!("csv write failed: {e}")))?;
        Ok(())
    }
}

const WISSEL: [[f64; 5]; 17] = [
    [1996.0, 3.80510, 4.7703, 4.8786, 808.23],
    [1997.0, 3.94580, 4.7784, 5.0510, 798.03],
    [1998.0, 4.05790, 4.9348, 5.3620, 806.12],
    [1999.0, 4.19130, 5.0998, 5.5585, 865.65],
    [2000.0, 4.35850, 5.2907, 5.8425, 997.30],
    [2001.0, 4.54530, 5.4335, 6.1523, 1140.70],
    [2002.0, 4.81490, 5.6194, 6.5206, 1253.40],
    [2003.0, 5.12860, 5.8318, 6.9151, 1324.80],
    [2004.0, 5.61510, 6.1258, 7.4230, 1420.50],
    [2005.0, 6.22490, 6.4386, 7.8024, 1532.10],
    [2006.0, 6.78640, 6.7394, 8.4297, 1717.50],
    [2007.0, 7.49440, 6.9104, 8.7241, 1867.20],
    [2008.0, 8.39930, 7.0993, 8.8819, 1974.10],
    [2009.0, 9.39510, 7.2953, 9.1636, 2078.00],
    [2010.0, 10.68000, 7.5614, 9.7272, 2191.30],
    [2011.0, 12.07100, 7.8036, 10.3010, 2284.90],
    [2012.0, 13.44821, 8.0441, 10.9830, 2387.50],
];

const KLEIN_GOLDBERGER: [[f64; 5]; 14] = [
    [1936.0, 62.8, 43.41, 17.1, 3.96],
    [1937.0, 65.0, 46.44, 18.65, 5.48],
    [1938.0, 63.9, 44.35, 17.09, 4.37],
    [1939.0, 67.5, 47.82, 19.28, 4.51],
    [1940.0, 71.3, 51.02, 23.24, 4.88],
    [1941.0, 76.6, 58.71, 28.11, 6.37],
    [1945.0, 86.3, 87.69, 30.29, 8.96],
    [1946.0, 95.7, 76.73, 28.26, 9.76],
    [1947.0, 98.3, 75.91, 27.91, 9.31],
    [1948.0, 100.3, 77.62, 32.3, 9.85],
    [1949.0, 103.2, 78.01, 31.39, 7.21],
    [1950.0, 108.9, 83.57, 35.61, 7.39],
    [1951.0, 108.5, 90.59, 37.58, 7.98],
    [1952.0, 111.4, 95.47, 35.17, 7.42],
];

/// Names accepted by [`builtin`], sorted.
pub const BUILTIN_NAMES: [&str; 2] = ["klein-goldberger", "wissel"];

fn strings(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// One of the embedded datasets, exactly as tabulated.
pub fn builtin(name: &str) -> Result<NamedDataset> {
    let (table, columns, provenance, response): (&[[f64; 5]], _, _, _) = match name {
        "wissel" => (
            &WISSEL,
            ["Year", "D", "C", "I", "CP"],
            "Wissel: US outstanding mortgage debt (D), personal consumption (C), \
             personal income (I) and outstanding consumer credit (CP), 1996-2012",
            "D",
        ),
        "klein-goldberger" => (
            &KLEIN_GOLDBERGER,
            ["Year", "C", "I", "InA", "IA"],
            "Klein and Goldberger: US consumption (C), wage income (I), non-farm \
             income (InA) and farm income (IA), 1936-1952 excluding 1942-1944",
            "C",
        ),
        other => return Err(Error::UnknownDataset(other.to_string())),
    };
    Ok(NamedDataset {
        name: name.to_string(),
        column_names: strings(&columns),
        rows: Matrix::from_rows(table)?,
        provenance: provenance.to_string(),
        metadata_columns: strings(&["Year"]),
        default_response: Some(response.to_string()),
    })
}

/// Parses a CSV table with a mandatory header row. Every cell must be a
/// finite number; a column named `year` (any case) is marked as metadata.
pub fn parse_csv<R: Read>(name: &str, reader: R) -> Result<NamedDataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| csv_error(&e))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if headers.is_empty() || headers.iter().all(|h| h.is_empty()) {
        return Err(Error::ParseError {
            line: 1,
            column: 1,
            message: "missing header row".to_string(),
        });
    }
    let mut seen = HashSet::new();
    for h in &headers {
        if !seen.insert(h) {
            return Err(Error::DuplicateColumn(h.clone()));
        }
    }

    let mut data = Vec::new();
    let mut n = 0;
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(&e))?;
        let line = record.position().map_or(0, |p| p.line());
        for (j, cell) in record.iter().enumerate() {
            let value = cell.trim();
            match value.parse::<f64>() {
                Ok(v) if v.is_finite() => data.push(v),
                _ => {
                    return Err(Error::NonNumericCell {
                        line,
                        column: j + 1,
                        value: value.to_string(),
                    })
                }
            }
        }
        n += 1;
    }
    if n == 0 {
        return Err(Error::TooFewRows { rows: 0, needed: 1 });
    }
    let metadata_columns = headers
        .iter()
        .filter(|h| h.eq_ignore_ascii_case("year"))
        .cloned()
        .collect();
    Ok(NamedDataset {
        name: name.to_string(),
        rows: Matrix::new(n, headers.len(), data)?,
        column_names: headers,
        provenance: String::new(),
        metadata_columns,
        default_response: None,
    })
}

fn csv_error(e: &csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.kind() {
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => Error::ParseError {
            line,
            column: (*len).min(*expected_len) as usize + 1,
            message: format!("expected {expected_len} fields, found {len}"),
        },
        csv::ErrorKind::Utf8 { err, .. } => Error::ParseError {
            line,
            column: err.field() + 1,
            message: "invalid UTF-8".to_string(),
        },
        _ => Error::ParseError {
            line,
            column: 0,
            message: e.to_string(),
        },
    }
}

/// Reads a CSV table from `path`.
pub fn read_table(path: &Path) -> Result<NamedDataset> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let name = path
        .file_stem()
        .map_or_else(|| "data".to_string(), |s| s.to_string_lossy().into_owned());
    parse_csv(&name, std::io::BufReader::new(file))
}

/// Reads `path` and assembles a model of `response_column` on the selected
/// features.
pub fn read_csv(
    path: &Path,
    response_column: &str,
    features: &FeatureSelection,
    add_intercept: bool,
) -> Result<ModelSpec> {
    let table = read_table(path)?;
    let names = table.feature_names(response_column, features)?;
    let k = names.len() + usize::from(add_intercept);
    if table.n_rows() <= k {
        return Err(Error::TooFewRows {
            rows: table.n_rows(),
            needed: k + 1,
        });
    }
    table.model_spec(response_column, features, add_intercept)
}
