//! Period matrices as JSON with decimal-string entries.

use crate::error::{Error, Result};
use crate::exact_linalg::hp::{format_float, parse_float, MIN_DIGITS};
use crate::exact_linalg::{digits_to_bits, CMatrix, HPComplex};
use crate::torus::PeriodMatrix;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Entry {
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PeriodFile {
    pub g: usize,
    pub cols: usize,
    pub precision_digits: u32,
    pub entries: Vec<Vec<Entry>>,
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub hyperelliptic: Option<bool>,
}

impl PeriodFile {
    pub fn from_matrix(pm: &PeriodMatrix) -> Self {
        let digits = pm.precision_digits;
        let entries = (0..pm.g)
            .map(|i| {
                (0..2 * pm.g)
                    .map(|j| {
                        let z = &pm.entries[(i, j)];
                        Entry { re: format_float(&z.re, digits), im: format_float(&z.im, digits) }
                    })
                    .collect()
            })
            .collect();
        PeriodFile { g: pm.g, cols: 2 * pm.g, precision_digits: digits, entries, label: pm.label.clone(), hyperelliptic: pm.hyperelliptic }
    }

    /// Working precision is the smaller of `requested` and the file's own.
    pub fn to_matrix(&self, requested: Option<u32>) -> Result<PeriodMatrix> {
        if self.cols != 2 * self.g || self.entries.len() != self.g || self.entries.iter().any(|r| r.len() != self.cols) {
            return Err(Error::InvalidInput(format!("period matrix must be g×2g with g = {}", self.g)));
        }
        let digits = requested.map_or(self.precision_digits, |r| r.min(self.precision_digits));
        if digits < MIN_DIGITS {
            return Err(Error::InvalidInput(format!("precision {digits} below the minimum of {MIN_DIGITS} digits")));
        }
        let bits = digits_to_bits(self.precision_digits.max(digits));
        let mut data = Vec::with_capacity(self.g * self.cols);
        for row in &self.entries {
            for e in row {
                data.push(HPComplex::new(parse_float(&e.re, bits)?, parse_float(&e.im, bits)?));
            }
        }
        let pm = PeriodMatrix::new(CMatrix::from_vec(self.g, self.cols, data), self.precision_digits, self.label.clone(), self.hyperelliptic)?;
        if digits < self.precision_digits {
            pm.with_precision(digits)
        } else {
            Ok(pm)
        }
    }
}

pub fn to_json(pm: &PeriodMatrix) -> String {
    serde_json::to_string_pretty(&PeriodFile::from_matrix(pm)).expect("serializable")
}

pub fn from_json(text: &str, requested: Option<u32>) -> Result<PeriodMatrix> {
    let f: PeriodFile = serde_json::from_str(text)?;
    f.to_matrix(requested)
}

pub fn write_file(pm: &PeriodMatrix, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(pm) + "\n")?;
    Ok(())
}

pub fn read_file(path: &Path, requested: Option<u32>) -> Result<PeriodMatrix> {
    from_json(&std::fs::read_to_string(path)?, requested)
}
