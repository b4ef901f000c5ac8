use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fredpair_cli::config::{Backend, Kind, Level, ProblemConfig};
use fredpair_cli::{run, write_outputs, UsageError};

#[derive(Parser)]
#[command(name = "fredpair", version, about = "Fredholm pair indices of loop symbols and planar bordisms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON problem config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Window half-size N.
    #[arg(long, global = true)]
    window: Option<usize>,
    /// Relative rank tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    backend: Option<Backend>,
    /// Directory for report.json and CSV exports. Without it the report goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    SymbolIndex,
    Pair,
    Bordism,
    Surface,
    Chain,
    Verify {
        #[arg(long, value_enum)]
        level: Option<Level>,
    },
}

impl Command {
    fn kind(&self) -> Kind {
        match self {
            Command::SymbolIndex => Kind::SymbolIndex,
            Command::Pair => Kind::Pair,
            Command::Bordism => Kind::Bordism,
            Command::Surface => Kind::Surface,
            Command::Chain => Kind::Chain,
            Command::Verify { .. } => Kind::Verify,
        }
    }
}

fn load(cli: &Cli) -> Result<ProblemConfig, UsageError> {
    let kind = cli.command.kind();
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
            let cfg = ProblemConfig::parse(&text)?;
            if cfg.kind != kind {
                return Err(UsageError(format!("config is for {:?}, not {kind:?}", cfg.kind)));
            }
            cfg
        }
        None if kind == Kind::Verify => {
            ProblemConfig { kind, payload: serde_json::Value::Null, window: None, tol: None, backend: None, seed: None }
        }
        None => return Err(UsageError(format!("{kind:?} needs --config"))),
    };
    if let Command::Verify { level: Some(level) } = cli.command {
        cfg.payload = serde_json::json!({ "level": level });
    }
    cfg.window = cli.window.or(cfg.window);
    cfg.tol = cli.tol.or(cfg.tol);
    cfg.backend = cli.backend.or(cfg.backend);
    cfg.seed = cli.seed.or(cfg.seed);
    Ok(cfg)
}

fn threads() -> Result<(), UsageError> {
    if let Ok(v) = std::env::var("FREDPAIR_THREADS") {
        let n: usize = v.parse().map_err(|_| UsageError(format!("FREDPAIR_THREADS={v} is not a count")))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| UsageError(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let result = threads().and_then(|_| load(&cli)).and_then(|cfg| cfg.resolve()).and_then(|cfg| run(&cfg));
    let outcome = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match &cli.out {
        Some(dir) => {
            if let Err(e) = write_outputs(dir, &outcome) {
                eprintln!("error: cannot write {}: {e}", dir.display());
                return ExitCode::from(1);
            }
        }
        None => println!("{}", serde_json::to_string_pretty(&outcome.report).expect("report serializes")),
    }
    ExitCode::from(outcome.report.exit_code as u8)
}
