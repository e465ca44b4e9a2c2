//! Output helpers: CSV and JSON writers with full-precision floats, plus
//! serde glue for exact rationals.
//!
//! Floats are printed with 17 significant digits (`{:.16e}`) so a round trip
//! through text is lossless; rationals are emitted as integer
//! numerator/denominator pairs, never as floats.

use crate::error::Error;
use num_rational::Ratio;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::io::Write;

/// Serialize a `Ratio<i128>` as `{ "numer": ..., "denom": ... }` with the
/// integers as strings (JSON numbers cannot hold i128 faithfully).
pub fn serialize_rational<S: Serializer>(r: &Ratio<i128>, s: S) -> Result<S::Ok, S::Error> {
    let mut st = s.serialize_struct("Rational", 2)?;
    st.serialize_field("numer", &r.numer().to_string())?;
    st.serialize_field("denom", &r.denom().to_string())?;
    st.end()
}

/// Full-precision float formatting used in every table cell.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        // CSV-friendly spellings for the non-finite values.
        format!("{x}")
    }
}

/// A rectangular table destined for CSV output.
#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    /// Append a row of floats, formatted at full precision.
    pub fn push_floats(&mut self, values: &[f64]) {
        assert_eq!(values.len(), self.columns.len(), "row width mismatch");
        self.rows.push(values.iter().map(|&v| fmt_f64(v)).collect());
    }

    /// Append a row of preformatted cells.
    pub fn push_cells(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len(), self.columns.len(), "row width mismatch");
        self.rows.push(cells);
    }

    /// Write the table as CSV with a header line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), Error> {
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Write any serializable report as pretty JSON followed by a newline.
pub fn write_json<W: Write, T: Serialize>(mut out: W, value: &T) -> Result<(), Error> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_round_trip_is_lossless() {
        for &x in &[1.0 / 3.0, 0.0625, 1e-300, std::f64::consts::PI, -7.5e17] {
            let parsed: f64 = fmt_f64(x).parse().unwrap();
            assert_eq!(parsed, x, "round trip of {x}");
        }
    }

    #[test]
    fn csv_shape() {
        let mut t = Table::new(&["r", "tau"]);
        t.push_floats(&[1.0, 2.0]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "r,tau");
        assert_eq!(lines.next().unwrap().split(',').count(), 2);
    }

    #[test]
    fn rational_json_uses_integer_pair() {
        #[derive(Serialize)]
        struct Wrap {
            #[serde(serialize_with = "serialize_rational")]
            v: Ratio<i128>,
        }
        let s = serde_json::to_string(&Wrap { v: Ratio::new(7, 8) }).unwrap();
        assert!(s.contains("\"numer\":\"7\"") && s.contains("\"denom\":\"8\""), "{s}");
    }
}
