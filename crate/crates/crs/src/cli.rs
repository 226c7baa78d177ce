//! Command-line entry points.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use crs_core::catalog::ingest::{ingest, Fragment};
use crs_core::catalog::GeoPoint;
use crs_core::simulator::builtin_scenarios;
use crs_core::{Engine, Mode};

use crate::config::Config;
use crate::files::{self, DataError};
use crate::service::{self, AppState};
use crate::store::EventStore;
use crate::{build_engine, chat, report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "crs", version, about = "Guided conversational restaurant recommender")]
pub struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Serve the HTTP API.
    Serve(ServeArgs),
    /// Talk to the recommender in the terminal.
    Chat(ChatArgs),
    /// Normalize provider exports into a catalog document.
    Ingest(IngestArgs),
    /// Run the scripted user policy in both modes.
    Simulate(SimulateArgs),
    /// Show how every review sentence scores against a preference.
    Explain(ExplainArgs),
}

#[derive(Debug, Args)]
pub struct CatalogArg {
    /// Catalog document; defaults to the bundled fixture.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[command(flatten)]
    pub catalog: CatalogArg,
    #[arg(long)]
    pub data_dir: Option<PathBuf>,
    #[arg(long)]
    pub port: Option<u16>,
    /// Built web UI to serve under `/`.
    #[arg(long)]
    pub static_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Guided,
    Baseline,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Guided => Mode::Guided,
            ModeArg::Baseline => Mode::Baseline,
        }
    }
}

#[derive(Debug, Args)]
pub struct ChatArgs {
    #[command(flatten)]
    pub catalog: CatalogArg,
    #[arg(long, value_enum, default_value = "guided")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub data_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Export files, each `{"source": ..., "records": [...]}`.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Search origin as `lat,lng`.
    #[arg(long, value_parser = parse_origin)]
    pub origin: GeoPoint,
    #[arg(long, default_value = "USD")]
    pub currency: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub catalog: CatalogArg,
    #[arg(long)]
    pub scenario: String,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub runs: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExplainArgs {
    #[command(flatten)]
    pub catalog: CatalogArg,
    /// A preference such as "I prefer vegetarian".
    pub preference: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_origin(s: &str) -> Result<GeoPoint, String> {
    let (lat, lng) = s.split_once(',').ok_or("expected `lat,lng`")?;
    let p = GeoPoint {
        lat: lat.trim().parse().map_err(|e| format!("latitude: {e}"))?,
        lon: lng.trim().parse().map_err(|e| format!("longitude: {e}"))?,
    };
    if !p.is_valid() {
        return Err("coordinates out of range".into());
    }
    Ok(p)
}

/// Outcome carried to the exit code.
struct Exit(i32, String);

impl From<DataError> for Exit {
    fn from(e: DataError) -> Self {
        Exit(EXIT_DATA, e.to_string())
    }
}

fn data(e: impl std::fmt::Display) -> Exit {
    Exit(EXIT_DATA, e.to_string())
}

fn io(e: std::io::Error) -> Exit {
    Exit(EXIT_DATA, e.to_string())
}

/// Parse `args` and run; returns the process exit code.
pub fn run<I, T>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(cli, input, out, err) {
        Ok(()) => EXIT_OK,
        Err(Exit(code, message)) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

fn engine(config: &Config, catalog: &CatalogArg) -> Result<Engine, Exit> {
    let path = catalog.catalog.as_deref().or(config.catalog.as_deref());
    let catalog = files::load_catalog(path)?;
    build_engine(config, catalog).map_err(data)
}

fn dispatch(cli: Cli, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Exit> {
    let mut config = Config::load(cli.config.as_deref()).map_err(|e| Exit(EXIT_USAGE, e.to_string()))?;
    match cli.command {
        Command::Serve(args) => {
            if let Some(d) = args.data_dir {
                config.data_dir = d;
            }
            if let Some(p) = args.port {
                config.port = p;
            }
            if args.static_dir.is_some() {
                config.static_dir = args.static_dir;
            }
            let engine = engine(&config, &args.catalog)?;
            serve(config, engine)
        }
        Command::Chat(args) => {
            if let Some(d) = args.data_dir {
                config.data_dir = d;
            }
            let engine = engine(&config, &args.catalog)?;
            let store = EventStore::open(&config.data_dir).map_err(data)?;
            let id = format!("chat-{}", uuid::Uuid::new_v4());
            let clock = service::system_clock();
            let session = chat::run(&engine, &store, &id, args.mode.into(), args.seed, &*clock, input, out)
                .map_err(data)?;
            let path = store.path(&session.id).map_err(data)?;
            writeln!(err, "transcript: {}", path.display()).map_err(io)?;
            Ok(())
        }
        Command::Ingest(args) => {
            let mut fragment = Fragment::default();
            for path in &args.inputs {
                let records = files::load_export(path)?;
                let part = ingest(&records).map_err(|e| data(format!("{}: {e}", path.display())))?;
                fragment.absorb(part);
            }
            for w in fragment.warnings() {
                writeln!(err, "warning: {}: {}", w.restaurant_id, w.message).map_err(io)?;
            }
            let catalog = fragment.into_catalog(args.origin, args.currency).map_err(data)?;
            files::write(&args.out, &files::catalog_json(&catalog))?;
            writeln!(out, "wrote {} restaurants to {}", catalog.len(), args.out.display()).map_err(io)?;
            Ok(())
        }
        Command::Simulate(args) => {
            let scenario = builtin_scenarios()
                .into_iter()
                .find(|s| s.tag == args.scenario)
                .ok_or_else(|| Exit(EXIT_USAGE, format!("unknown scenario `{}` (expected LT, LK, DR or DV)", args.scenario)))?;
            let engine = engine(&config, &args.catalog)?;
            let report = report::run(&engine, &scenario, args.runs as usize, args.seed).map_err(data)?;
            write!(out, "{}", report.table()).map_err(io)?;
            if let Some(path) = &args.out {
                files::write(path, &report.to_json())?;
            }
            Ok(())
        }
        Command::Explain(args) => {
            let engine = engine(&config, &args.catalog)?;
            let report = report::explain(&engine, &args.preference).map_err(|e| Exit(EXIT_USAGE, e.to_string()))?;
            write!(out, "{}", report.table()).map_err(io)?;
            if let Some(path) = &args.out {
                files::write(path, &report.to_json())?;
            }
            Ok(())
        }
    }
}

fn serve(config: Config, engine: Engine) -> Result<(), Exit> {
    let runtime = tokio::runtime::Runtime::new().map_err(io)?;
    runtime.block_on(async move {
        let store = EventStore::open(&config.data_dir).map_err(data)?;
        let state = Arc::new(AppState::new(
            Arc::new(engine),
            store,
            config.session_ttl(),
            service::system_clock(),
        ));
        let recovery = state.recover().map_err(data)?;
        tracing::info!(
            restored = recovery.restored,
            expired = recovery.expired,
            failed = recovery.failed.len(),
            "sessions recovered"
        );
        let sweeper = state.clone();
        tokio::spawn(async move {
            let mut tick = tokio::time::interval(std::time::Duration::from_secs(60));
            loop {
                tick.tick().await;
                if let Err(e) = sweeper.sweep().await {
                    tracing::warn!("expiry sweep failed: {e}");
                }
            }
        });
        let app = service::router(state, config.static_dir.as_deref().filter(|p| Path::new(p).is_dir()));
        let listener = tokio::net::TcpListener::bind(("0.0.0.0", config.port)).await.map_err(io)?;
        tracing::info!("listening on {}", listener.local_addr().map_err(io)?);
        axum::serve(listener, app)
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
            .map_err(io)
    })
}
