//! Host-side companion to `gh-atom-core`: configuration files, parallel
//! θ-sweeps, CSV and SVG output, the randomised oracle suite and parallel
//! wavepacket runs.

pub mod cli;
pub mod config;
pub mod oracle;
pub mod packet;
pub mod svg;
pub mod sweep;

use std::path::PathBuf;

pub use gh_atom_core as core;

/// Failures surfaced by the command-line tools, mapped onto exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("bad input: {0}")]
    Input(String),
    #[error("{name}: {0}", name = .0.name())]
    Numeric(gh_atom_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numeric(e) if e.is_validation() => 2,
            CliError::Numeric(_) => 3,
            CliError::Io { .. } => 4,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<gh_atom_core::Error> for CliError {
    fn from(e: gh_atom_core::Error) -> Self {
        CliError::Numeric(e)
    }
}

/// Rayon pool honouring `GH_ATOM_THREADS` when it holds a positive integer.
pub fn thread_pool() -> rayon::ThreadPool {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var("GH_ATOM_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            builder = builder.num_threads(n);
        }
    }
    builder.build().expect("thread pool")
}

/// Shortest round-trip scientific notation; non-finite values as `nan`/`inf`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:e}")
    }
}
