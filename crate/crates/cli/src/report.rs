//! Report values and their JSON, CSV and text renderings.

use frameproof::bounds::catalogue::BoundReport;
use serde_json::{json, Map, Value};

pub const SCHEMA: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// How a run ended; maps onto the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Property holds, value computed or search certified.
    Success,
    /// Property fails; the report carries a witness.
    Fails,
    /// A search ran out of budget.
    Uncertified,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::Fails => 1,
            Status::Uncertified => 2,
        }
    }

    pub fn from_holds(holds: bool) -> Self {
        if holds {
            Status::Success
        } else {
            Status::Fails
        }
    }
}

/// One command's outcome: ordered JSON fields plus, for bound tables, the
/// rows that the CSV rendering lists.
#[derive(Debug, Clone)]
pub struct Report {
    pub status: Status,
    pub fields: Map<String, Value>,
    pub bounds: Option<Vec<BoundReport>>,
}

impl Report {
    pub fn new(command: &str, config: Map<String, Value>) -> Self {
        let mut fields = Map::new();
        fields.insert("schema".into(), json!(SCHEMA));
        fields.insert("command".into(), json!(command));
        fields.insert("config".into(), Value::Object(config));
        Self {
            status: Status::Success,
            fields,
            bounds: None,
        }
    }

    pub fn set(&mut self, key: &str, v: Value) -> &mut Self {
        self.fields.insert(key.into(), v);
        self
    }

    pub fn set_bounds(&mut self, key: &str, rows: Vec<BoundReport>) -> &mut Self {
        self.set(key, Value::Array(rows.iter().map(bound_json).collect()));
        self.bounds = Some(rows);
        self
    }
}

pub fn bound_json(b: &BoundReport) -> Value {
    let params: Map<String, Value> = b.params.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    json!({
        "name": b.name.as_str(),
        "params": params,
        "value": b.value_string(),
        "floor": b.floor.to_string(),
        "exact": b.exact,
    })
}

fn flat(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for r in rows {
        w.write_record(&r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv output is utf-8")
}

/// Renders a report. JSON keeps field order; CSV lists bound rows under the
/// fixed `name,params,value,floor,exact` header when the report has any and
/// otherwise one `field,value` row per top-level field.
pub fn emit_report(r: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&r.fields).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => match &r.bounds {
            Some(rows) => csv_bytes(
                &["name", "params", "value", "floor", "exact"],
                rows.iter().map(|b| {
                    vec![
                        b.name.to_string(),
                        b.params_string(),
                        b.value_string(),
                        b.floor.to_string(),
                        b.exact.to_string(),
                    ]
                }),
            ),
            None => csv_bytes(&["field", "value"], r.fields.iter().map(|(k, v)| vec![k.clone(), flat(v)])),
        },
        Format::Text => r.fields.iter().map(|(k, v)| format!("{k}: {}\n", flat(v))).collect(),
    }
}
