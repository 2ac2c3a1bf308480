//! The single-JSON-envelope output contract.
//!
//! Every invocation prints exactly one JSON object to stdout:
//! `{command, inputs, result?, error?, schema_version, status}` with keys
//! in sorted order. Floats render with 17 significant digits so output is
//! byte-stable across platforms and runs.

use std::io;

use pgst_core::render::f64_sig17;
use serde_json::ser::Formatter;
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: &str = "1";

/// Exit codes fixed by the interface contract.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INTERNAL: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const RANGE: i32 = 3;
    pub const NOT_APPLICABLE: i32 = 4;
    pub const BUDGET: i32 = 5;
    pub const IO: i32 = 6;
}

/// A command failure destined for the envelope's `error` field. Some
/// failures (budget exhaustion) still carry a partial `result`.
#[derive(Debug)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
    pub exit_code: i32,
    pub partial: Option<Value>,
}

impl CliError {
    pub fn new(code: &'static str, exit_code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
            exit_code,
            partial: None,
        }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        CliError::new("PARSE_ERROR", exit::PARSE, message)
    }

    pub fn range(message: impl Into<String>) -> Self {
        CliError::new("RANGE_ERROR", exit::RANGE, message)
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError::new("IO_ERROR", exit::IO, message)
    }
}

/// Assembles the envelope and returns it with the process exit code.
pub fn render(command: &str, inputs: Value, outcome: Result<Value, CliError>) -> (String, i32) {
    let mut envelope = Map::new();
    envelope.insert("schema_version".into(), Value::String(SCHEMA_VERSION.into()));
    envelope.insert("command".into(), Value::String(command.into()));
    envelope.insert("inputs".into(), inputs);
    let code = match outcome {
        Ok(result) => {
            envelope.insert("status".into(), Value::String("ok".into()));
            envelope.insert("result".into(), result);
            exit::OK
        }
        Err(err) => {
            envelope.insert("status".into(), Value::String("error".into()));
            let mut detail = Map::new();
            detail.insert("code".into(), Value::String(err.code.into()));
            detail.insert("message".into(), Value::String(err.message));
            envelope.insert("error".into(), Value::Object(detail));
            if let Some(partial) = err.partial {
                envelope.insert("result".into(), partial);
            }
            err.exit_code
        }
    };
    (to_json_sig17(&Value::Object(envelope)), code)
}

/// Serializes with the fixed 17-significant-digit float formatter.
pub fn to_json_sig17(value: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17Formatter);
    serde::Serialize::serialize(value, &mut ser).expect("in-memory serialization cannot fail");
    String::from_utf8(buf).expect("serializer emits UTF-8")
}

struct Sig17Formatter;

impl Formatter for Sig17Formatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        writer.write_all(f64_sig17(value).as_bytes())
    }
}
