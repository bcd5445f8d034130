// Copyright 2026 The qseal Developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! CSV tables with round-trippable 17-significant-digit floats.

use std::fmt;

/// Renders `x` like C's `%.17g`, without trailing zeros.
///
/// Any finite value parses back to the same `f64`, so reprinting the parsed
/// value reproduces the text. Negative zero prints as `0`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if x < 0.0 { "-" } else { "" };
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();

    let (int_part, frac_part) = if (-4..17).contains(&exp) {
        if exp >= 0 {
            let split = exp as usize + 1;
            (digits[..split].to_string(), digits[split..].to_string())
        } else {
            let zeros = "0".repeat((-exp - 1) as usize);
            ("0".to_string(), format!("{zeros}{digits}"))
        }
    } else {
        (digits[..1].to_string(), digits[1..].to_string())
    };
    let frac = frac_part.trim_end_matches('0');
    let mut out = format!("{sign}{int_part}");
    if !frac.is_empty() {
        out.push('.');
        out.push_str(frac);
    }
    if !(-4..17).contains(&exp) {
        out.push_str(&format!(
            "e{}{:02}",
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        ));
    }
    out
}

/// One CSV field.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Bool(bool),
    /// Not applicable.
    Blank,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Float(x) => f.write_str(&format_float(*x)),
            Cell::Int(n) => write!(f, "{n}"),
            Cell::Bool(b) => write!(f, "{b}"),
            Cell::Blank => Ok(()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Blank, Cell::Float)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as u64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

/// Header plus rectangular rows.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a row.
    ///
    /// # Panics
    /// If the row width differs from the header width.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "ragged CSV row");
        self.rows.push(row);
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    /// Index of the named column.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Float values of a column, `None` for blank cells.
    pub fn floats(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let k = self.column(name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r[k] {
                    Cell::Float(x) => Some(x),
                    Cell::Int(n) => Some(n as f64),
                    _ => None,
                })
                .collect(),
        )
    }

    /// LF-terminated CSV text.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_string))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ASCII output")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(0.5), "0.5");
        assert_eq!(format_float(0.8125), "0.8125");
        assert_eq!(format_float(0.1), "0.10000000000000001");
        assert_eq!(format_float(-0.0), "0");
        assert_eq!(format_float(-2.5), "-2.5");
        assert_eq!(format_float(1e-5), "1.0000000000000001e-05");
        assert_eq!(format_float(1e20), "1e+20");
        assert_eq!(format_float(123456.0), "123456");
        assert_eq!(format_float(0.0001), "0.0001");
        assert_eq!(format_float(f64::MIN_POSITIVE), "2.2250738585072014e-308");
    }

    #[test]
    fn reprint_is_stable() {
        let mut x = 0.123_456_789_f64;
        for _ in 0..2000 {
            x = (x * 7.31 + 0.17).fract() * 10f64.powi(((x * 1e6) as i32 % 40) - 20);
            let s = format_float(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
            assert_eq!(format_float(back), s);
        }
    }

    #[test]
    fn table_text() {
        let mut t = CsvTable::new(["p", "flag", "n", "x"]);
        t.push(vec![0.25.into(), true.into(), 3usize.into(), Cell::Blank]);
        assert_eq!(t.to_csv(), "p,flag,n,x\n0.25,true,3,\n");
    }

    #[test]
    #[should_panic(expected = "ragged")]
    fn ragged_rows_panic() {
        CsvTable::new(["a"]).push(vec![]);
    }
}
