//! JSON command layer over the `berkpatch` engines: request parsing,
//! dispatch, certificate replay and the golden-file suite runner.

pub mod codec;
mod commands;
pub mod suite;
mod verify;

use berkpatch::quadratic::DecompositionMode;
use serde_json::{json, Value};

pub use suite::{run_suite, CaseOutcome, SuiteReport};

pub const COMMANDS: &[&str] = &[
    "isotropy",
    "decompose",
    "ubound",
    "classify",
    "refine",
    "parity",
    "cover-with-s",
    "split",
    "approximate",
    "factor",
    "patch",
];

pub const DEFAULT_PRECISION: i64 = 64;
pub const DEFAULT_PRIME: u64 = 3;
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug)]
pub enum CliError {
    /// Malformed request: unknown command, schema violation, bad literal.
    Usage(String),
    /// The request is well formed but violates a mathematical precondition.
    Domain(berkpatch::Error),
    /// A replayed certificate failed its identity check.
    Rejected(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{}", m),
            CliError::Domain(e) => write!(f, "{}", e),
            CliError::Rejected(m) => write!(f, "certificate rejected: {}", m),
        }
    }
}

impl From<berkpatch::Error> for CliError {
    fn from(e: berkpatch::Error) -> Self {
        CliError::Domain(e)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub prime: Option<u64>,
    pub precision: i64,
    /// Accepted for reproducible scripting; every command is deterministic.
    pub seed: u64,
    pub mode: Option<DecompositionMode>,
    pub verify: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { prime: None, precision: DEFAULT_PRECISION, seed: DEFAULT_SEED, mode: None, verify: false }
    }
}

impl Options {
    /// Reads the `options` object of a fixture; absent keys keep defaults.
    pub fn from_json(v: Option<&Value>) -> Result<Options, CliError> {
        let mut o = Options::default();
        let Some(v) = v else { return Ok(o) };
        if !v.is_object() {
            return Err(CliError::Usage("`options` must be an object".into()));
        }
        if let Some(p) = v.get("prime") {
            o.prime = Some(codec::u64_of(p, "prime")?);
        }
        if let Some(n) = v.get("precision") {
            o.precision = codec::u64_of(n, "precision")? as i64;
        }
        if let Some(s) = v.get("seed") {
            o.seed = codec::u64_of(s, "seed")?;
        }
        if let Some(m) = v.get("mode") {
            o.mode = Some(parse_mode(codec::str_of(m, "mode")?)?);
        }
        if let Some(b) = v.get("verify") {
            o.verify = codec::bool_of(b, "verify")?;
        }
        Ok(o)
    }
}

pub fn parse_mode(s: &str) -> Result<DecompositionMode, CliError> {
    match s {
        "free" => Ok(DecompositionMode::Free),
        "general" => Ok(DecompositionMode::General),
        _ => Err(CliError::Usage(format!("mode must be `free` or `general`, got `{}`", s))),
    }
}

#[derive(Clone, Debug)]
pub struct Request {
    pub command: String,
    pub payload: Value,
    pub options: Options,
}

impl Request {
    /// Parses `{"command", "payload", "options"}`.
    pub fn from_json(v: &Value) -> Result<Request, CliError> {
        let command = codec::str_of(codec::field(v, "command")?, "command")?.to_string();
        let payload = v.get("payload").cloned().unwrap_or(Value::Null);
        let options = Options::from_json(v.get("options"))?;
        Ok(Request { command, payload, options })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Error,
}

#[derive(Clone, Debug)]
pub struct Response {
    pub status: Status,
    pub result: Value,
    pub diagnostics: Vec<String>,
    pub error: Option<(&'static str, String)>,
    /// Per-iteration lines for `--trace`; not part of the JSON document.
    pub trace: Vec<String>,
}

impl Response {
    pub fn exit_code(&self) -> i32 {
        match self.error {
            None => 0,
            Some(("usage", _)) => 2,
            Some(_) => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "status": match self.status { Status::Ok => "ok", Status::Error => "error" },
            "result": self.result,
            "diagnostics": self.diagnostics,
        });
        if let Some((kind, message)) = &self.error {
            v["error"] = json!({ "kind": kind, "message": message });
        }
        v
    }
}

/// Collects warnings and trace lines while a command runs.
#[derive(Default)]
pub(crate) struct Diag {
    pub warnings: Vec<String>,
    pub trace: Vec<String>,
}

/// Validates and routes a request. Never panics on bad input; the status,
/// error kind and exit code describe failures.
pub fn dispatch(req: &Request) -> Response {
    let mut diag = Diag::default();
    let outcome = if !COMMANDS.contains(&req.command.as_str()) {
        Err(CliError::Usage(format!("unknown command `{}`", req.command)))
    } else if req.options.verify {
        verify::replay(&req.command, &req.payload, &req.options)
    } else {
        commands::run(&req.command, &req.payload, &req.options, &mut diag)
    };
    let (status, result, error) = match outcome {
        Ok(v) => (Status::Ok, v, None),
        Err(e) => {
            let kind = match e {
                CliError::Usage(_) => "usage",
                CliError::Domain(_) => "domain",
                CliError::Rejected(_) => "rejected",
            };
            (Status::Error, Value::Null, Some((kind, e.to_string())))
        }
    };
    Response { status, result, diagnostics: diag.warnings, error, trace: diag.trace }
}
