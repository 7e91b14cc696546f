//! Tables on standard output: csv with a header row, or one json object per row.

use std::io::{self, Write};

use serde_json::{Map, Value};

use crate::args::Format;
use crate::config::OutputConfig;

/// `value` rounded to `digits` significant digits, shortest form.
///
/// Plain notation for decimal exponents in `[-5, digits)`, scientific
/// otherwise; trailing zeros are dropped and zero is printed as `0`.
pub fn format_number(value: f64, digits: usize) -> String {
    if value.is_nan() {
        return "nan".into();
    }
    if value.is_infinite() {
        return if value > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if value == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, value);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{value:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub enum Cell {
    Text(String),
    Num(f64),
    Int(u64),
}

pub struct Table<W: Write> {
    sink: Sink<W>,
    columns: Vec<&'static str>,
    precision: usize,
}

enum Sink<W: Write> {
    Csv(Box<csv::Writer<W>>),
    Json(W),
}

impl<W: Write> Table<W> {
    pub fn new(out: W, columns: Vec<&'static str>, config: OutputConfig) -> io::Result<Self> {
        let sink = match config.format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&columns)?;
                Sink::Csv(Box::new(w))
            }
            Format::Json => Sink::Json(out),
        };
        Ok(Self {
            sink,
            columns,
            precision: config.precision,
        })
    }

    pub fn row(&mut self, cells: &[Cell]) -> io::Result<()> {
        assert_eq!(cells.len(), self.columns.len(), "row width must match the header");
        let precision = self.precision;
        match &mut self.sink {
            Sink::Csv(w) => Ok(w.write_record(cells.iter().map(|c| csv_cell(c, precision)))?),
            Sink::Json(out) => {
                let mut obj = Map::new();
                for (key, cell) in self.columns.iter().zip(cells) {
                    obj.insert((*key).to_string(), json_cell(cell, precision));
                }
                writeln!(out, "{}", Value::Object(obj))
            }
        }
    }

    pub fn finish(self) -> io::Result<W> {
        match self.sink {
            Sink::Csv(w) => w.into_inner().map_err(|e| e.into_error()),
            Sink::Json(mut out) => {
                out.flush()?;
                Ok(out)
            }
        }
    }
}

fn csv_cell(cell: &Cell, precision: usize) -> String {
    match cell {
        Cell::Text(s) => s.clone(),
        Cell::Num(v) => format_number(*v, precision),
        Cell::Int(n) => n.to_string(),
    }
}

fn json_cell(cell: &Cell, precision: usize) -> Value {
    match cell {
        Cell::Text(s) => Value::String(s.clone()),
        Cell::Num(v) => {
            let rounded: f64 = format_number(*v, precision).parse().unwrap_or(f64::NAN);
            serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
        }
        Cell::Int(n) => Value::from(*n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_number(0.985_598_559_653_488_8, 7), "0.9855986");
        assert_eq!(format_number(0.25, 12), "0.25");
        assert_eq!(format_number(3.0, 12), "3");
        assert_eq!(format_number(-3.125_897_657_686_229, 8), "-3.1258977");
        assert_eq!(format_number(1.5e-7, 6), "1.5e-7");
        assert_eq!(format_number(123_456_789.0, 6), "1.23457e8");
        assert_eq!(format_number(99_999.96, 6), "100000");
        assert_eq!(format_number(-0.0, 6), "0");
        assert_eq!(format_number(f64::NAN, 6), "nan");
    }

    #[test]
    fn csv_and_json_rows() {
        let cfg = |format| OutputConfig { format, precision: 6 };
        let mut t = Table::new(Vec::new(), vec!["source", "x", "n"], cfg(Format::Csv)).unwrap();
        t.row(&[Cell::Text("closed".into()), Cell::Num(1.0 / 3.0), Cell::Int(4)])
            .unwrap();
        t.row(&[Cell::Text("a, \"b\"".into()), Cell::Num(2.0), Cell::Int(0)])
            .unwrap();
        assert_eq!(
            String::from_utf8(t.finish().unwrap()).unwrap(),
            "source,x,n\nclosed,0.333333,4\n\"a, \"\"b\"\"\",2,0\n"
        );

        let mut t = Table::new(Vec::new(), vec!["source", "x", "n"], cfg(Format::Json)).unwrap();
        t.row(&[Cell::Text("closed".into()), Cell::Num(1.0 / 3.0), Cell::Int(4)])
            .unwrap();
        t.row(&[Cell::Text("bad".into()), Cell::Num(f64::NAN), Cell::Int(0)])
            .unwrap();
        assert_eq!(
            String::from_utf8(t.finish().unwrap()).unwrap(),
            "{\"source\":\"closed\",\"x\":0.333333,\"n\":4}\n{\"source\":\"bad\",\"x\":null,\"n\":0}\n"
        );
    }

    proptest::proptest! {
        #[test]
        fn round_trips_at_declared_precision(v in proptest::num::f64::NORMAL, digits in 6usize..=17) {
            let text = format_number(v, digits);
            let back: f64 = text.parse().unwrap();
            let reference: f64 = format!("{:.*e}", digits - 1, v).parse().unwrap();
            proptest::prop_assert_eq!(back, reference, "{} -> {}", v, text);
            if digits == 17 {
                proptest::prop_assert_eq!(back, v);
            }
        }
    }
}
