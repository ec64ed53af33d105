//! Ordered key/value output, rendered as `key = value` lines or one JSON
//! object.

use std::fmt;

use serde_json::{Map, Value};

#[derive(Debug, Clone)]
pub enum Field {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Num(v) => write!(f, "{v:e}"),
            Field::Int(v) => write!(f, "{v}"),
            Field::Bool(v) => write!(f, "{v}"),
            Field::Text(v) => f.write_str(v),
        }
    }
}

impl From<&Field> for Value {
    fn from(field: &Field) -> Self {
        match field {
            // NaN/inf become null.
            Field::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Field::Int(v) => Value::from(*v),
            Field::Bool(v) => Value::from(*v),
            Field::Text(v) => Value::from(v.as_str()),
        }
    }
}

#[derive(Debug, Default)]
pub struct Record {
    fields: Vec<(String, Field)>,
}

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        self.fields.push((key.into(), Field::Num(value)));
        self
    }

    pub fn int(&mut self, key: impl Into<String>, value: u64) -> &mut Self {
        self.fields.push((key.into(), Field::Int(value)));
        self
    }

    pub fn flag(&mut self, key: impl Into<String>, value: bool) -> &mut Self {
        self.fields.push((key.into(), Field::Bool(value)));
        self
    }

    pub fn text(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.fields.push((key.into(), Field::Text(value.into())));
        self
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let map: Map<String, Value> = self
                .fields
                .iter()
                .map(|(k, v)| (k.clone(), Value::from(v)))
                .collect();
            let mut out = Value::Object(map).to_string();
            out.push('\n');
            out
        } else {
            self.fields
                .iter()
                .map(|(k, v)| format!("{k} = {v}\n"))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_value_lines_keep_insertion_order() {
        let mut r = Record::new();
        r.num("b", 2.5e6).int("a", 3).flag("ok", true).text("mode", "irs");
        assert_eq!(r.render(false), "b = 2.5e6\na = 3\nok = true\nmode = irs\n");
    }

    #[test]
    fn json_output_is_one_object() {
        let mut r = Record::new();
        r.num("x", 1.5).num("bad", f64::NAN);
        assert_eq!(r.render(true), "{\"x\":1.5,\"bad\":null}\n");
    }
}
