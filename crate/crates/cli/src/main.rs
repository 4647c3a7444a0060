use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sctk_cli::{config::defaults, exit, parse_config, BudgetConfig, CliError, Command, OutputFormat, RunConfig};
use sctk_core::mink::Shape;

#[derive(Parser)]
#[command(name = "sctk", version, about = "Z-expansions of directions on translation surfaces")]
struct Cli {
    /// Cap on worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Z-expansion of θ and the sandwich check.
    Expand(Opts),
    /// Saddle vectors within a radius.
    Enumerate(Opts),
    /// Minkowski constant bounds.
    Mink(Opts),
    /// Every invariant check for the surface.
    Verify(Opts),
    /// Growth detector on the expansion heights.
    Growth(Opts),
    /// Run a JSON run file.
    Run { file: PathBuf },
}

#[derive(Args)]
struct Opts {
    /// Surface config file (JSON).
    #[arg(long)]
    surface: PathBuf,
    #[arg(long, default_value_t = defaults::theta())]
    theta: String,
    #[arg(long, default_value_t = defaults::radius())]
    radius: f64,
    #[arg(long, default_value_t = defaults::terms())]
    terms: usize,
    /// Precision of rigorous enclosures.
    #[arg(long, default_value_t = defaults::bits())]
    bits: u32,
    /// Word-length limit for orbit enumeration.
    #[arg(long, default_value_t = defaults::depth())]
    depth: usize,
    /// Growth detector margin.
    #[arg(long, default_value_t = defaults::margin())]
    margin: f64,
    /// Growth window length (default: later half).
    #[arg(long)]
    tail: Option<usize>,
    /// Records held out of the height fit.
    #[arg(long, default_value_t = defaults::holdout())]
    holdout: usize,
    /// Word length for the domination suite.
    #[arg(long, default_value_t = defaults::word_length())]
    word_length: usize,
    /// Minkowski search grid points per parameter.
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    refine_steps: Option<usize>,
    /// Comma-separated body shapes: square, disk.
    #[arg(long, value_delimiter = ',')]
    shapes: Option<Vec<String>>,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

impl Opts {
    fn into_config(self, command: Command) -> Result<RunConfig, CliError> {
        let mut budget = BudgetConfig::default();
        if let Some(g) = self.grid {
            budget.grid = g;
        }
        if let Some(r) = self.refine_steps {
            budget.refine_steps = r;
        }
        if let Some(s) = self.shapes {
            budget.shapes = s
                .iter()
                .map(|name| match name.trim() {
                    "square" => Ok(Shape::Square),
                    "disk" => Ok(Shape::Disk),
                    other => Err(CliError::Parse(format!("`shapes`: unknown shape `{other}`"))),
                })
                .collect::<Result<_, _>>()?;
        }
        Ok(RunConfig {
            command,
            surface: self.surface,
            theta: self.theta,
            radius: self.radius,
            terms: self.terms,
            bits: self.bits,
            depth: self.depth,
            budget,
            output: self.output,
            format: self.format,
            margin: self.margin,
            tail: self.tail,
            holdout: self.holdout,
            word_length: self.word_length,
        })
    }
}

fn config(sub: Sub) -> Result<RunConfig, CliError> {
    let (command, opts) = match sub {
        Sub::Expand(o) => (Command::Expand, o),
        Sub::Enumerate(o) => (Command::Enumerate, o),
        Sub::Mink(o) => (Command::Mink, o),
        Sub::Verify(o) => (Command::Verify, o),
        Sub::Growth(o) => (Command::Growth, o),
        Sub::Run { file } => {
            let text = std::fs::read_to_string(&file).map_err(|e| CliError::Io(format!("{}: {e}", file.display())))?;
            let base = file.parent().map(PathBuf::from).unwrap_or_default();
            return parse_config(&text, &base).map(|(cfg, _)| cfg);
        }
    };
    opts.into_config(command)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("sctk: invalid input: `threads` must be positive");
            return ExitCode::from(exit::INVALID as u8);
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().expect("thread pool is set once");
    }
    let code = match config(cli.command) {
        Ok(cfg) => sctk_cli::execute(&cfg),
        Err(e) => {
            eprintln!("sctk: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
