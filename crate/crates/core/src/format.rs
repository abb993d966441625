//! Plain-text and JSON matrix files.
//!
//! The text form is line-oriented:
//!
//! ```text
//! QQ
//! 2
//! 1 -1/2
//! 0 3
//! ```
//!
//! Line 1 is the field (`QQ` or `GF(p)`), line 2 the size `n`, then `n`
//! lines of `n` whitespace-separated entries. The JSON form carries the same
//! three fields under the same names.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::ExactMatrix;

/// A square matrix as written in a file; entries are kept as text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub field: FieldSpec,
    pub n: usize,
    pub rows: Vec<Vec<String>>,
}

impl MatrixFile {
    /// Canonical spelling of a square matrix.
    pub fn from_matrix(m: &ExactMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare(m.rows(), m.cols()));
        }
        Ok(MatrixFile {
            field: m.field(),
            n: m.rows(),
            rows: m.to_string_rows(),
        })
    }

    pub fn to_matrix(&self) -> Result<ExactMatrix> {
        if self.rows.len() != self.n {
            return Err(Error::Parse(format!(
                "expected {} rows, found {}",
                self.n,
                self.rows.len()
            )));
        }
        let mut data = Vec::with_capacity(self.n * self.n);
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.n {
                return Err(Error::Parse(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    self.n
                )));
            }
            for entry in row {
                data.push(self.field.parse_scalar(entry)?);
            }
        }
        ExactMatrix::from_entries(self.field, self.n, self.n, data)
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).enumerate();
        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {what}")))
        };
        let (_, field_line) = next("field line")?;
        let field: FieldSpec = field_line.parse()?;
        let (_, n_line) = next("size line")?;
        let n: usize = n_line
            .parse()
            .map_err(|_| Error::Parse(format!("bad size `{n_line}`")))?;
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let (_, line) = next("matrix row")?;
            rows.push(line.split_whitespace().map(String::from).collect());
        }
        if let Some((i, extra)) = lines.find(|(_, l)| !l.is_empty()) {
            return Err(Error::Parse(format!("unexpected content on line {}: `{extra}`", i + 1)));
        }
        let file = MatrixFile { field, n, rows };
        file.to_matrix()?;
        Ok(file)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n{}\n", self.field, self.n);
        for row in &self.rows {
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let file: MatrixFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.to_matrix()?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

/// Reads a matrix from text, or from JSON when the input starts with `{`.
pub fn parse_matrix(text: &str) -> Result<ExactMatrix> {
    let file = if text.trim_start().starts_with('{') {
        MatrixFile::parse_json(text)?
    } else {
        MatrixFile::parse_text(text)?
    };
    file.to_matrix()
}

pub fn format_matrix(m: &ExactMatrix) -> Result<String> {
    Ok(MatrixFile::from_matrix(m)?.to_text())
}
