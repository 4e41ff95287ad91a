//! Library side of the `graphflow` binary: argument types, the commands and
//! their CSV and SVG output.

pub mod args;
mod commands;
pub mod svg;

use std::fmt::Write as _;
use std::path::Path;

pub use args::Cli;
pub use commands::run;

/// Failure classes and their process exit codes.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("reference check failed: {0}")]
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Check(_) => 4,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<netgraph::GraphError> for CliError {
    fn from(e: netgraph::GraphError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<xsection::XsError> for CliError {
    fn from(e: xsection::XsError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<forms::FormsError> for CliError {
    fn from(e: forms::FormsError) -> Self {
        match e {
            forms::FormsError::UnsupportedDegree(_) => CliError::Validation(e.to_string()),
            _ => CliError::Solver(e.to_string()),
        }
    }
}

impl From<solvers::SolverError> for CliError {
    fn from(e: solvers::SolverError) -> Self {
        CliError::Solver(e.to_string())
    }
}

impl From<netgen::NetgenError> for CliError {
    fn from(e: netgen::NetgenError) -> Self {
        match e {
            netgen::NetgenError::Graph(g) => g.into(),
            netgen::NetgenError::Forms(f) => f.into(),
            other => CliError::Solver(other.to_string()),
        }
    }
}

impl From<pump::PumpError> for CliError {
    fn from(e: pump::PumpError) -> Self {
        use pump::PumpError as P;
        match e {
            P::InvalidConfig(_) | P::Graph(_) | P::CrossSection(_) => {
                CliError::Validation(e.to_string())
            }
            P::Forms(f) => f.into(),
            _ => CliError::Solver(e.to_string()),
        }
    }
}

/// Resolved configuration written as the trailing comment of every CSV.
#[derive(Debug, Clone, Default)]
pub struct Stamp {
    entries: Vec<(String, String)>,
}

impl Stamp {
    pub fn new(command: &str) -> Self {
        Self::default().with("command", command)
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    pub fn list<T: ToString>(self, key: &str, values: &[T]) -> Self {
        let v: Vec<String> = values.iter().map(|x| x.to_string()).collect();
        self.with(key, v.join(";"))
    }

    pub fn line(&self) -> String {
        let mut s = format!("# graphflow {}", env!("CARGO_PKG_VERSION"));
        for (k, v) in &self.entries {
            write!(s, " {k}={v}").unwrap();
        }
        s
    }
}

/// A CSV body (header included) followed by the configuration stamp.
pub fn stamped(body: &str, stamp: &Stamp) -> String {
    let mut s = body.to_string();
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s.push_str(&stamp.line());
    s.push('\n');
    s
}

/// Write to `path`, or to standard output when absent.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Validation(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
