use std::path::PathBuf;

use clap::Args;
use rado_core::linalg::rational_from_json;
use rado_core::{Error, Rational, RationalMatrix};
use serde::de::DeserializeOwned;
use serde_json::Value;

/// Either a path or inline JSON, never both.
#[derive(Args, Debug, Clone)]
pub struct Input {
    /// JSON input file
    pub file: Option<PathBuf>,
    /// Inline JSON input
    #[arg(long, conflicts_with = "file")]
    pub json: Option<String>,
}

#[derive(Debug)]
pub enum Failure {
    Input(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Input(s) => write!(f, "invalid input: {s}"),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        use rado_core::ErrorKind;
        match self {
            Failure::Input(_) => 2,
            Failure::Core(e) => match e.kind() {
                ErrorKind::InvalidInput => 2,
                ErrorKind::Budget => 3,
                ErrorKind::Invariant => 4,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, Failure>;

pub fn bad(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

impl Input {
    pub fn is_given(&self) -> bool {
        self.file.is_some() || self.json.is_some()
    }

    pub fn value(&self) -> CliResult<Value> {
        let text = match (&self.file, &self.json) {
            (Some(p), None) => std::fs::read_to_string(p).map_err(|e| bad(format!("{}: {e}", p.display())))?,
            (None, Some(s)) => s.clone(),
            _ => return Err(bad("exactly one of an input file or --json is required")),
        };
        serde_json::from_str(&text).map_err(|e| bad(format!("malformed JSON: {e}")))
    }
}

pub fn typed<T: DeserializeOwned>(v: &Value, what: &str) -> CliResult<T> {
    serde_json::from_value(v.clone()).map_err(|e| bad(format!("{what}: {e}")))
}

pub fn field<'a>(v: &'a Value, key: &str) -> CliResult<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field \"{key}\"")))
}

/// Accepts the `{"rows", "cols", "entries"}` layout or a bare list of rows.
/// An empty list of rows gets `cols` columns.
pub fn matrix(v: &Value, cols: usize) -> CliResult<RationalMatrix> {
    match v {
        Value::Array(rows) => {
            let parsed: Vec<Vec<Rational>> = rows
                .iter()
                .map(|r| match r {
                    Value::Array(es) => es.iter().map(rational_from_json).collect::<Result<Vec<_>, _>>().map_err(Failure::from),
                    _ => Err(bad("matrix rows must be arrays")),
                })
                .collect::<CliResult<_>>()?;
            let c = parsed.first().map_or(cols, Vec::len);
            Ok(RationalMatrix::from_rational_rows(parsed, c)?)
        }
        Value::Object(_) => typed(v, "matrix"),
        _ => Err(bad("expected a matrix")),
    }
}

pub fn rational(s: &str) -> CliResult<Rational> {
    Ok(rado_core::linalg::parse_rational(s)?)
}
