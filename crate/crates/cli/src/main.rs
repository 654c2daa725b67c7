use std::fs::File;
use std::io::{self, BufReader};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;

use arthur_cli::{run_interactive, run_script, Repl, ScriptError};
use arthur_core::persistence::{load_ltm_or_empty, save_ltm, Config, TickMode};
use arthur_core::Agent;

const EXIT_SCRIPT: u8 = 1;
const EXIT_IO: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "arthur", version, about = "Talk to Arthur from the terminal")]
struct Args {
    /// Long-term memory file (JSON lines).
    #[arg(long)]
    ltm: Option<PathBuf>,

    #[arg(long)]
    config: Option<PathBuf>,

    /// Run the commands in this file instead of reading the terminal.
    #[arg(long)]
    script: Option<PathBuf>,

    #[arg(long, value_parser = clap::value_parser!(TickMode))]
    tick_mode: Option<TickMode>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut config = match &args.config {
        Some(path) => match Config::load(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("arthur: {e}");
                return ExitCode::from(EXIT_IO);
            }
        },
        None => Config::default(),
    };
    if let Some(mode) = args.tick_mode {
        config.tick_mode = mode;
    }
    let ltm_path = config.resolve_ltm_path(args.ltm.as_deref());

    let script = match &args.script {
        Some(path) => match File::open(path) {
            Ok(f) => Some((path.clone(), f)),
            Err(e) => {
                eprintln!("arthur: cannot open script {}: {e}", path.display());
                return ExitCode::from(EXIT_SCRIPT);
            }
        },
        None => None,
    };

    let agent = match load_ltm_or_empty(&ltm_path).and_then(|ltm| Agent::from_config(&config, ltm))
    {
        Ok(agent) => agent,
        Err(e) => {
            eprintln!("arthur: {e}");
            return ExitCode::from(EXIT_IO);
        }
    };
    let image_root = script
        .as_ref()
        .and_then(|(p, _)| p.parent())
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    let mut repl =
        Repl::new(agent.with_image_root(image_root)).with_thresholds(config.show_thresholds);

    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match script {
        Some((_, file)) => run_script(&mut repl, BufReader::new(file), &mut out),
        None => run_interactive(&mut repl, io::stdin().lock(), &mut out).map_err(ScriptError::from),
    };
    match result {
        Ok(()) => {}
        Err(ScriptError::Command { line, source }) => {
            eprintln!("arthur: script line {line}: {source}");
            return ExitCode::from(EXIT_SCRIPT);
        }
        Err(ScriptError::Io(e)) => {
            eprintln!("arthur: {e}");
            return ExitCode::from(EXIT_IO);
        }
    }

    if let Err(e) = save_ltm(repl.agent().memory().ltm(), &ltm_path) {
        eprintln!("arthur: {e}");
        return ExitCode::from(EXIT_IO);
    }
    ExitCode::SUCCESS
}
