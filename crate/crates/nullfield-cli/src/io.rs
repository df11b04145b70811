//! Config merging, error classes and output files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use nullfield::flow::{write_curve_csv, Curve};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Map, Value};

pub const SCHEMA: u64 = 1;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or inputs: exit 2.
    Config(String),
    /// The computation itself failed: exit 1.
    Run(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl From<nullfield::Error> for CliError {
    fn from(e: nullfield::Error) -> Self {
        use nullfield::Error::*;
        match e {
            InvalidArgument(_)
            | InvalidPoint(_)
            | Parse { .. }
            | MixedGenerator
            | NotHolomorphic
            | NotAntiholomorphic
            | Csv(_)
            | Io(_) => CliError::Config(e.to_string()),
            _ => CliError::Run(e.to_string()),
        }
    }
}

pub fn config_err<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Config(msg.into()))
}

/// Overlays the command-line flags on the config file, if any. The file must
/// carry `"schema": 1`, may name the command, and may only use the command's
/// flag names as keys.
pub fn merge<A: Serialize + DeserializeOwned>(flags: &A, config: Option<&Path>, command: &str) -> CliResult<A> {
    let Some(path) = config else {
        return round_trip(flags);
    };
    let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let mut file: Map<String, Value> = match serde_json::from_str(&text) {
        Ok(Value::Object(m)) => m,
        Ok(_) => return config_err("config must be a JSON object"),
        Err(e) => return config_err(format!("{}: {e}", path.display())),
    };
    match file.remove("schema") {
        Some(Value::Number(n)) if n.as_u64() == Some(SCHEMA) => {}
        Some(v) => return config_err(format!("unsupported config schema {v}")),
        None => return config_err("config is missing \"schema\": 1"),
    }
    if let Some(v) = file.remove("command") {
        if v.as_str() != Some(command) {
            return config_err(format!("config is for command {v}, not \"{command}\""));
        }
    }
    let Value::Object(cli) = to_value(flags)? else {
        return config_err("flags did not serialize to an object");
    };
    for (k, v) in cli {
        if !(v.is_null() || v == Value::Bool(false)) {
            file.insert(k, v);
        }
    }
    serde_json::from_value(Value::Object(file)).map_err(|e| CliError::Config(format!("config: {e}")))
}

fn round_trip<A: Serialize + DeserializeOwned>(a: &A) -> CliResult<A> {
    serde_json::from_value(to_value(a)?).map_err(|e| CliError::Config(e.to_string()))
}

fn to_value<A: Serialize>(a: &A) -> CliResult<Value> {
    serde_json::to_value(a).map_err(|e| CliError::Config(e.to_string()))
}

/// `{"schema": 1, "command": ..., "config": <merged flags>}` plus `body`.
pub fn report<A: Serialize>(command: &str, args: &A, body: Value) -> CliResult<Value> {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("command".into(), json!(command));
    m.insert("config".into(), to_value(args)?);
    if let Value::Object(b) = body {
        m.extend(b);
    }
    Ok(Value::Object(m))
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|e| CliError::Run(format!("{}: {e}", path.display())))
}

pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Writes `<out>.json` when `out` is given; always prints the report.
pub fn emit_report(out: Option<&Path>, v: &Value) -> CliResult<()> {
    let text = json_text(v);
    if let Some(out) = out {
        write_file(&sidecar_path(out), text.as_bytes())?;
    }
    print!("{text}");
    Ok(())
}

/// Writes a curve CSV to `out`, or to stdout when there is none.
pub fn emit_curve<const D: usize>(out: Option<&Path>, curve: &Curve<f64, D>) -> CliResult<()> {
    let mut buf = Vec::new();
    write_curve_csv(&mut buf, curve)?;
    match out {
        Some(p) => write_file(p, &buf),
        None => std::io::stdout().write_all(&buf).map_err(|e| CliError::Run(e.to_string())),
    }
}

/// Writes rows with a header; floats get 17 significant digits.
pub fn emit_table(out: &Path, header: &[&str], rows: &[Vec<Cell>]) -> CliResult<()> {
    let mut w = String::new();
    w.push_str(&header.join(","));
    w.push('\n');
    for r in rows {
        let cells: Vec<String> = r.iter().map(Cell::text).collect();
        w.push_str(&cells.join(","));
        w.push('\n');
    }
    write_file(out, w.as_bytes())
}

#[derive(Debug, Clone)]
pub enum Cell {
    Text(String),
    Int(i64),
    Num(f64),
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Text(s) => {
                if s.contains([',', '"', '\n']) {
                    format!("\"{}\"", s.replace('"', "\"\""))
                } else {
                    s.clone()
                }
            }
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => format!("{x:.16e}"),
        }
    }
}

pub fn read_text(path: &Path) -> CliResult<fs::File> {
    fs::File::open(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}
