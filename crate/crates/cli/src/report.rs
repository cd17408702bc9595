use std::fmt;
use std::process::ExitCode;

use grdh::ExactProb;
use serde::Serialize;
use serde_json::{json, Map, Value};

/// One invocation's output. `text` is the human rendering and is never
/// serialized.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub params: Value,
    pub results: Vec<Value>,
    pub oracle_checked: bool,
    #[serde(skip)]
    pub text: Vec<String>,
    /// Records already went to stdout, so the text summary goes to stderr.
    #[serde(skip)]
    pub stdout_taken: bool,
}

impl Report {
    pub fn new(command: &str, params: Value) -> Self {
        Report {
            command: command.to_string(),
            params,
            results: Vec::new(),
            oracle_checked: false,
            text: Vec::new(),
            stdout_taken: false,
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }
}

/// Why an invocation failed, and the exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or out-of-domain parameters: exit 2.
    Usage(String),
    /// A closed form disagreed with enumeration: exit 3.
    Mismatch(String),
    /// I/O or encoding trouble: exit 1.
    Other(String),
}

impl Failure {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Failure::Usage(_) => ExitCode::from(2),
            Failure::Mismatch(_) => ExitCode::from(3),
            Failure::Other(_) => ExitCode::from(1),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Mismatch(m) => write!(f, "verification failure: {m}"),
            Failure::Other(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<grdh::Error> for Failure {
    fn from(e: grdh::Error) -> Self {
        match e {
            grdh::Error::Internal(_) => Failure::Mismatch(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

macro_rules! other_failure {
    ($($ty:ty),*) => {$(
        impl From<$ty> for Failure {
            fn from(e: $ty) -> Self {
                Failure::Other(e.to_string())
            }
        }
    )*};
}

other_failure!(std::io::Error, serde_json::Error, csv::Error);

pub type CliResult<T> = Result<T, Failure>;

/// Writes `p` under `key` as `{"num", "den"}`, plus an `<key>_approx`
/// decimal when requested.
pub fn put_prob(obj: &mut Map<String, Value>, key: &str, p: &ExactProb, approx: bool) {
    obj.insert(key.to_string(), json!(p));
    if approx {
        obj.insert(format!("{key}_approx"), json!(p.approx()));
    }
}

/// `1/2`, or `1/2 (~0.500000)` with `approx`.
pub fn show_prob(p: &ExactProb, approx: bool) -> String {
    if approx {
        format!("{p} (~{:.6})", p.approx())
    } else {
        p.to_string()
    }
}

pub fn show_vec(v: &[u64]) -> String {
    let parts: Vec<String> = v.iter().map(u64::to_string).collect();
    format!("({})", parts.join(","))
}
