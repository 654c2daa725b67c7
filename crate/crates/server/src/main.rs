use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use tracing_subscriber::EnvFilter;

use arthur_core::persistence::{load_ltm_or_empty, Config, TickMode};
use arthur_core::Agent;
use arthur_server::{router, AppState, DEFAULT_HOST, DEFAULT_PORT};

#[derive(Debug, Parser)]
#[command(
    name = "arthur-server",
    version,
    about = "REST service for the arthur agent"
)]
struct Args {
    #[arg(long, default_value = DEFAULT_HOST)]
    host: String,

    #[arg(long, default_value_t = DEFAULT_PORT)]
    port: u16,

    /// Long-term memory file (JSON lines).
    #[arg(long)]
    ltm: Option<PathBuf>,

    #[arg(long)]
    config: Option<PathBuf>,

    #[arg(long, value_parser = clap::value_parser!(TickMode))]
    tick_mode: Option<TickMode>,
}

#[tokio::main]
async fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()))
        .init();
    let args = Args::parse();

    let mut config = match &args.config {
        Some(path) => match Config::load(path) {
            Ok(c) => c,
            Err(e) => {
                tracing::error!(error = %e, "cannot read config");
                return ExitCode::from(2);
            }
        },
        None => Config::default(),
    };
    if let Some(mode) = args.tick_mode {
        config.tick_mode = mode;
    }
    let ltm_path = config.resolve_ltm_path(args.ltm.as_deref());
    let agent = match load_ltm_or_empty(&ltm_path).and_then(|ltm| Agent::from_config(&config, ltm))
    {
        Ok(agent) => agent,
        Err(e) => {
            tracing::error!(error = %e, path = %ltm_path.display(), "cannot load memory");
            return ExitCode::from(2);
        }
    };
    let state = AppState::with_ltm_path(agent, ltm_path.clone());

    let addr: SocketAddr = match format!("{}:{}", args.host, args.port).parse() {
        Ok(a) => a,
        Err(e) => {
            tracing::error!(error = %e, "bad bind address");
            return ExitCode::from(2);
        }
    };
    let listener = match tokio::net::TcpListener::bind(addr).await {
        Ok(l) => l,
        Err(e) => {
            tracing::error!(error = %e, %addr, "cannot bind");
            return ExitCode::from(2);
        }
    };
    tracing::info!(%addr, ltm = %ltm_path.display(), "listening");

    let served = axum::serve(listener, router(state.clone()))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await;
    if let Err(e) = served {
        tracing::error!(error = %e, "server error");
        return ExitCode::from(1);
    }
    match state.persist().await {
        Ok(n) => {
            tracing::info!(records = n.unwrap_or(0), "saved long-term memory");
            ExitCode::SUCCESS
        }
        Err(e) => {
            tracing::error!(error = %e, "cannot save long-term memory");
            ExitCode::from(2)
        }
    }
}
