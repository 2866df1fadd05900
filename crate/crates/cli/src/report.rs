use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Found,
    NotShatterable,
    Inconclusive,
    Done,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Found => "SHATTERED",
            Status::NotShatterable => "NOT SHATTERABLE",
            Status::Inconclusive => "INCONCLUSIVE",
            Status::Done => "OK",
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Status::Fail => 1,
            _ => 0,
        }
    }

    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

pub struct Report {
    pub status: Status,
    pub result: Value,
}

/// Rounds every float to 12 significant digits; integers are untouched.
pub fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap();
            let r: f64 = format!("{x:.11e}").parse().unwrap_or(x);
            json!(r)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(o) => {
            for (k, v) in o {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, v) in a.iter().enumerate() {
                flatten(&key(&i.to_string()), v, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render(format: Format, command: &str, config: Value, report: &Report, elapsed: f64) -> String {
    let result = round_floats(report.result.clone());
    match format {
        Format::Json => {
            let mut top = Map::new();
            top.insert("command".into(), json!(command));
            top.insert("status".into(), json!(report.status.label()));
            top.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
            top.insert("config".into(), config);
            top.insert("elapsed_seconds".into(), round_floats(json!(elapsed)));
            top.insert("result".into(), result);
            serde_json::to_string_pretty(&Value::Object(top)).unwrap()
        }
        Format::Csv => {
            let mut rows = vec![];
            flatten("", &result, &mut rows);
            let mut out = String::from("key,value\n");
            out.push_str(&format!("status,{}\n", csv_field(report.status.label())));
            for (k, v) in rows {
                out.push_str(&format!("{},{}\n", csv_field(&k), csv_field(&v)));
            }
            out
        }
        Format::Text => {
            let mut rows = vec![];
            flatten("", &result, &mut rows);
            let mut out = String::new();
            for (k, v) in rows {
                out.push_str(&format!("{k}: {v}\n"));
            }
            out.push_str(report.status.label());
            out.push('\n');
            out
        }
    }
}
