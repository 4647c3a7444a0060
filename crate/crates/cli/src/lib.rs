//! Configuration loading, command dispatch and report writing for `sctk`.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{run, CheckStatus, Outcome};
pub use config::{load_surface, parse_config, BudgetConfig, Command, OutputFormat, RunConfig};
pub use error::{exit, CliError, CliResult};
pub use output::Artifact;

/// Run, print status lines to stderr, write the artifact, and return the
/// exit code.
pub fn execute(cfg: &RunConfig) -> i32 {
    match try_execute(cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("sctk: {e}");
            e.exit_code()
        }
    }
}

fn try_execute(cfg: &RunConfig) -> CliResult<i32> {
    cfg.validate()?;
    let model = load_surface(&cfg.surface)?;
    let outcome = run(cfg, &model)?;
    outcome.artifact.write(cfg.output.as_deref())?;
    for c in &outcome.checks {
        eprintln!("{}", c.line());
    }
    Ok(if outcome.passed() { exit::OK } else { exit::CHECK_FAILED })
}
