use std::fmt::Write as _;

use serde_json::{Map, Value};

use super::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(i64::from(x))
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

/// Column-named rows, rendered as CSV or as a JSON array of objects.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

/// 17 significant digits in scientific notation.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn check_finite(&self) -> Result<(), CliError> {
        for (i, row) in self.rows.iter().enumerate() {
            for (name, cell) in self.header.iter().zip(row) {
                if let Cell::Num(x) = cell {
                    if !x.is_finite() {
                        return Err(CliError::Core(crate::Error::Numeric(format!(
                            "non-finite value {x} in column `{name}` of row {i}"
                        ))));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        self.check_finite()?;
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match cell {
                    Cell::Num(x) => out.push_str(&fmt_num(*x)),
                    Cell::Int(n) => write!(out, "{n}").unwrap(),
                    Cell::Bool(b) => write!(out, "{b}").unwrap(),
                    Cell::Text(s) if s.contains([',', '"', '\n']) => {
                        write!(out, "\"{}\"", s.replace('"', "\"\"")).unwrap()
                    }
                    Cell::Text(s) => out.push_str(s),
                    Cell::Empty => {}
                }
            }
            out.push('\n');
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Result<Value, CliError> {
        self.check_finite()?;
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .header
                    .iter()
                    .zip(row)
                    .map(|(name, cell)| {
                        let v = match cell {
                            Cell::Num(x) => Value::from(*x),
                            Cell::Int(n) => Value::from(*n),
                            Cell::Bool(b) => Value::from(*b),
                            Cell::Text(s) => Value::from(s.as_str()),
                            Cell::Empty => Value::Null,
                        };
                        (name.to_string(), v)
                    })
                    .collect();
                Value::Object(obj)
            })
            .collect();
        Ok(Value::Array(rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new(vec!["name", "x", "n"]);
        t.push(vec!["a,b".into(), 0.1.into(), 3i64.into()]);
        t.push(vec!["c".into(), 1.0.into(), Cell::Empty]);
        assert_eq!(
            t.to_csv().unwrap(),
            "name,x,n\n\"a,b\",1.0000000000000001e-1,3\nc,1.0000000000000000e0,\n"
        );
    }

    #[test]
    fn non_finite_is_rejected() {
        let mut t = Table::new(vec!["x"]);
        t.push(vec![f64::NAN.into()]);
        assert!(t.to_csv().is_err());
        assert!(t.to_json().is_err());
    }
}
