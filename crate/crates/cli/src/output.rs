//! Number formatting and CSV / JSON emission.

use std::io::Write;

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One output value. `Sci` is for δ and other probabilities that must stay
/// in scientific notation.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Sci(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn render(&self, digits: usize) -> String {
        match self {
            Cell::Num(x) => general(*x, digits),
            Cell::Sci(x) => scientific(*x, digits),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn to_json(&self, digits: usize) -> Value {
        match self {
            Cell::Num(x) | Cell::Sci(x) if !x.is_finite() => Value::Null,
            Cell::Num(_) | Cell::Sci(_) | Cell::Int(_) => {
                // arbitrary_precision keeps the digits exactly as printed
                let n: Number = serde_json::from_str(&self.render(digits)).expect("formatted number parses");
                Value::Number(n)
            }
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

fn non_finite(x: f64) -> Option<String> {
    if x.is_nan() {
        Some("nan".into())
    } else if x.is_infinite() {
        Some(if x > 0.0 { "inf" } else { "-inf" }.into())
    } else {
        None
    }
}

/// Mantissa and exponent of `x` rounded to `digits` significant digits.
fn split_sci(x: f64, digits: usize) -> (String, i32) {
    let s = format!("{:.*e}", digits.saturating_sub(1), x);
    let (mant, exp) = s.split_once('e').expect("exponent present");
    (mant.to_string(), exp.parse().expect("integer exponent"))
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Always `d.ddde±x`, trailing zeros dropped.
pub fn scientific(x: f64, digits: usize) -> String {
    if let Some(s) = non_finite(x) {
        return s;
    }
    let (mant, exp) = split_sci(x, digits);
    format!("{}e{exp}", trim_zeros(&mant))
}

/// `%g`-style: fixed notation for moderate exponents, scientific otherwise.
pub fn general(x: f64, digits: usize) -> String {
    if let Some(s) = non_finite(x) {
        return s;
    }
    if x == 0.0 {
        return "0".into();
    }
    let (mant, exp) = split_sci(x, digits);
    if exp < -5 || exp >= digits as i32 {
        return format!("{}e{exp}", trim_zeros(&mant));
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

/// A header plus rows, written as CSV with a header line or as a JSON array
/// of objects in column order.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, out: &mut dyn Write, format: Format, digits: usize) -> std::io::Result<()> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(|c| c.render(digits)))?;
                }
                w.flush()
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(k, c)| (k.to_string(), c.to_json(digits)))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                serde_json::to_writer_pretty(&mut *out, &rows)?;
                writeln!(out)
            }
        }
    }
}

/// Bare values, one per line, or a JSON array.
pub fn write_values(out: &mut dyn Write, values: &[f64], format: Format, digits: usize) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            for &v in values {
                writeln!(out, "{}", general(v, digits))?;
            }
            Ok(())
        }
        Format::Json => {
            let arr: Vec<Value> = values.iter().map(|&v| Cell::Num(v).to_json(digits)).collect();
            serde_json::to_writer(&mut *out, &arr)?;
            writeln!(out)
        }
    }
}
