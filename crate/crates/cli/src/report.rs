use serde::Serialize;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::args::Format;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReportError {
    #[error("record {index} is not an object")]
    NotAnObject { index: usize },
    #[error("record {index} has columns {found:?}, expected {expected:?}")]
    MixedRecords {
        index: usize,
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("csv: {0}")]
    Csv(String),
}

/// Homogeneous records with a fixed column order.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Map<String, Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Serializes `record`; its fields must be exactly the columns, in order.
    pub fn push<R: Serialize>(&mut self, record: &R) -> Result<(), ReportError> {
        let v = serde_json::to_value(record).expect("records serialize");
        let index = self.rows.len();
        let Value::Object(map) = v else {
            return Err(ReportError::NotAnObject { index });
        };
        check_columns(&self.columns, &map, index)?;
        self.rows.push(map);
        Ok(())
    }

    pub fn render(&self, format: Format) -> Result<String, ReportError> {
        let rows: Vec<Value> = self.rows.iter().cloned().map(Value::Object).collect();
        report_table(&rows, Some(&self.columns), format)
    }
}

fn check_columns(expected: &[String], map: &Map<String, Value>, index: usize) -> Result<(), ReportError> {
    let found: Vec<String> = map.keys().cloned().collect();
    if found != expected {
        return Err(ReportError::MixedRecords {
            index,
            expected: expected.to_vec(),
            found,
        });
    }
    Ok(())
}

/// Renders records as CSV, JSON lines or an aligned text table.
///
/// Columns come from `columns`, or from the first record. Every record
/// must have exactly those keys in that order. Floats get six decimals.
pub fn report_table(records: &[Value], columns: Option<&[String]>, format: Format) -> Result<String, ReportError> {
    let mut maps = Vec::with_capacity(records.len());
    for (index, r) in records.iter().enumerate() {
        match r {
            Value::Object(m) => maps.push(m),
            _ => return Err(ReportError::NotAnObject { index }),
        }
    }
    let columns: Vec<String> = match (columns, maps.first()) {
        (Some(c), _) => c.to_vec(),
        (None, Some(m)) => m.keys().cloned().collect(),
        (None, None) => Vec::new(),
    };
    for (index, m) in maps.iter().enumerate() {
        check_columns(&columns, m, index)?;
    }
    match format {
        Format::Json => {
            let mut out = String::new();
            for m in &maps {
                let rounded: Map<String, Value> = m.iter().map(|(k, v)| (k.clone(), round_floats(v))).collect();
                out.push_str(&serde_json::to_string(&rounded).expect("json"));
                out.push('\n');
            }
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            if !columns.is_empty() {
                w.write_record(&columns).map_err(|e| ReportError::Csv(e.to_string()))?;
            }
            for m in &maps {
                w.write_record(m.values().map(cell)).map_err(|e| ReportError::Csv(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| ReportError::Csv(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("utf-8"))
        }
        Format::Text => {
            let cells: Vec<Vec<String>> = maps.iter().map(|m| m.values().map(cell).collect()).collect();
            let widths: Vec<usize> = columns
                .iter()
                .enumerate()
                .map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
                .collect();
            let line = |row: &[String]| {
                row.iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            let mut out = String::new();
            if !columns.is_empty() {
                out.push_str(&line(&columns));
                out.push('\n');
            }
            for r in &cells {
                out.push_str(&line(r));
                out.push('\n');
            }
            Ok(out)
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_f64() => format!("{:.6}", n.as_f64().unwrap()),
        Value::Number(n) => n.to_string(),
        Value::Bool(b) => b.to_string(),
        other => serde_json::to_string(other).expect("json"),
    }
}

fn round_floats(v: &Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap();
            serde_json::Number::from_f64((x * 1e6).round() / 1e6).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.iter().map(round_floats).collect()),
        Value::Object(m) => Value::Object(m.iter().map(|(k, v)| (k.clone(), round_floats(v))).collect()),
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn empty_list_gives_header_only() {
        let cols = vec!["p".to_string(), "q".to_string()];
        assert_eq!(report_table(&[], Some(&cols), Format::Csv).unwrap(), "p,q\n");
        assert_eq!(report_table(&[], Some(&cols), Format::Json).unwrap(), "");
    }

    #[test]
    fn floats_have_six_decimals() {
        let rows = [json!({"p": 3, "exponent": 1.0}), json!({"p": 5, "exponent": 1.0 / 3.0})];
        let csv = report_table(&rows, None, Format::Csv).unwrap();
        assert_eq!(csv, "p,exponent\n3,1.000000\n5,0.333333\n");
        let jl = report_table(&rows[1..], None, Format::Json).unwrap();
        assert_eq!(jl, "{\"p\":5,\"exponent\":0.333333}\n");
    }

    #[test]
    fn mixed_records_are_rejected() {
        let rows = [json!({"p": 3}), json!({"q": 5})];
        assert!(matches!(report_table(&rows, None, Format::Csv), Err(ReportError::MixedRecords { index: 1, .. })));
        assert!(matches!(report_table(&[json!(3)], None, Format::Csv), Err(ReportError::NotAnObject { index: 0 })));
    }

    #[test]
    fn csv_quotes_commas() {
        let rows = [json!({"cf": "[0;1,2]"})];
        assert_eq!(report_table(&rows, None, Format::Csv).unwrap(), "cf\n\"[0;1,2]\"\n");
    }

    #[test]
    fn text_is_aligned() {
        let rows = [json!({"p": 3, "q": 3}), json!({"p": 103, "q": 618})];
        let t = report_table(&rows, None, Format::Text).unwrap();
        assert_eq!(t, "p    q\n3    3\n103  618\n");
    }
}
