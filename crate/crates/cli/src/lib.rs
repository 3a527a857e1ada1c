//! The `ptk` command line: scene loading, command dispatch and reports.

pub mod args;
mod commands;
mod dirac_cmd;
pub mod load;
mod render;

use std::process::ExitCode;

use serde_json::Value;
use thiserror::Error;

pub use args::Cli;
use args::Command;
use ptk_core::quadrature::NodeCounts;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {0}: {1}")]
    Io(String, std::io::Error),
    #[error("invalid scene: {0}")]
    Scene(String),
    #[error("no scene file or built-in scene named `{0}`")]
    SceneNotFound(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Contradiction(String),
}

/// Process exit status of a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Holds = 0,
    Fails = 1,
    InputError = 2,
    Inconclusive = 3,
}

impl From<Exit> for ExitCode {
    fn from(e: Exit) -> Self {
        ExitCode::from(e as u8)
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub text: String,
    pub json: Value,
    pub exit: Exit,
    /// Emit only the JSON value, without the text part.
    pub raw: bool,
}

impl Report {
    /// Text followed by the fenced JSON block, or the JSON alone.
    pub fn render(&self, json_only: bool) -> String {
        let block = serde_json::to_string_pretty(&self.json).expect("report JSON");
        if json_only || self.raw {
            format!("{block}\n")
        } else {
            format!("{}\n```json\n{block}\n```\n", self.text.trim_end())
        }
    }
}

pub struct Settings {
    pub tol: f64,
    pub counts: NodeCounts,
}

impl Settings {
    pub fn from_cli(cli: &Cli) -> Self {
        let counts = match cli.samples {
            Some(n) => NodeCounts {
                periodic: n.max(4),
                interval: (n / 4).max(2),
            },
            None => NodeCounts::default(),
        };
        Settings {
            tol: cli.tol,
            counts,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let s = Settings::from_cli(cli);
    if !(s.tol > 0.0 && s.tol.is_finite()) {
        return Err(CliError::Input(format!(
            "--tol must be positive, got {}",
            cli.tol
        )));
    }
    match &cli.command {
        Command::Verify(a) => commands::verify(&load::resolve_scene(&a.scene)?),
        Command::Unimodular {
            scene,
            degree,
            density,
        } => commands::unimodular(
            &load::resolve_scene(&scene.scene)?,
            *degree,
            density.as_deref(),
            &s,
        ),
        Command::Transversal { scene, patch } => {
            commands::transversal(&load::resolve_scene(&scene.scene)?, patch, &s)
        }
        Command::Pair {
            scene,
            patch,
            form,
            density,
        } => commands::pair(
            &load::resolve_scene(&scene.scene)?,
            patch,
            form,
            density.as_deref(),
            &s,
        ),
        Command::Report(a) => commands::report(&load::resolve_scene(&a.scene)?, &s),
        Command::Dirac(d) => dirac_cmd::run(d),
        Command::ClassifyLie3 { matrix, name } => {
            commands::classify(matrix.as_deref(), name.as_deref(), &s)
        }
        Command::Scenes { dump } => commands::scenes(dump.as_deref()),
    }
}

/// Runs a command and writes its output; returns the exit status.
pub fn main_with(cli: &Cli) -> Exit {
    match run(cli) {
        Ok(report) => {
            let out = report.render(cli.json);
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, out) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return Exit::InputError;
                    }
                }
                None => print!("{out}"),
            }
            report.exit
        }
        Err(e) => {
            eprintln!("error: {e}");
            Exit::InputError
        }
    }
}
