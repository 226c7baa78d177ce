//! Service, terminal chat, file formats and reports around `crs-core`.

pub mod chat;
pub mod cli;
pub mod config;
pub mod files;
pub mod remote;
pub mod report;
pub mod service;
pub mod store;

use crs_core::dialog::{EngineConfig, EngineError};
use crs_core::providers::Providers;
use crs_core::{Catalog, Engine};

use crate::config::Config;
use crate::remote::{RemoteCompletion, RemoteEmbedder};

/// Built-in providers, with remote ones swapped in where a URL is configured.
pub fn build_engine(config: &Config, catalog: Catalog) -> Result<Engine, EngineError> {
    let mut providers = Providers::builtin();
    if let Some(url) = &config.completion.url {
        providers.completion = Box::new(RemoteCompletion::new(url, config.completion.timeout()));
    }
    if let Some(url) = &config.embedding.url {
        providers.embedder = Box::new(RemoteEmbedder::new(
            url,
            std::time::Duration::from_millis(config.embedding.timeout_ms),
            config.embedding.dimension,
        ));
    }
    Engine::new(catalog, providers, EngineConfig::default())
}
