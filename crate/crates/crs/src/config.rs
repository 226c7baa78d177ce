//! Runtime configuration: an optional TOML file, then environment overrides.

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Deserialize;

pub const ENV_PORT: &str = "CRS_PORT";
pub const ENV_CATALOG: &str = "CRS_CATALOG";
pub const ENV_DATA_DIR: &str = "CRS_DATA_DIR";
pub const ENV_COMPLETION_URL: &str = "CRS_COMPLETION_URL";

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub port: u16,
    /// Catalog document; the bundled fixture when absent.
    pub catalog: Option<PathBuf>,
    pub data_dir: PathBuf,
    /// Directory of the built web UI, served under `/`.
    pub static_dir: Option<PathBuf>,
    pub session_ttl_secs: u64,
    pub completion: RemoteConfig,
    pub embedding: EmbeddingConfig,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmbeddingConfig {
    pub url: Option<String>,
    pub timeout_ms: u64,
    pub dimension: usize,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        Self {
            url: None,
            timeout_ms: 5_000,
            dimension: 512,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RemoteConfig {
    pub url: Option<String>,
    pub timeout_ms: u64,
}

impl Default for RemoteConfig {
    fn default() -> Self {
        Self {
            url: None,
            timeout_ms: 5_000,
        }
    }
}

impl RemoteConfig {
    pub fn timeout(&self) -> Duration {
        Duration::from_millis(self.timeout_ms)
    }
}

impl Default for Config {
    fn default() -> Self {
        Self {
            port: 8080,
            catalog: None,
            data_dir: PathBuf::from("data"),
            static_dir: None,
            session_ttl_secs: 24 * 60 * 60,
            completion: RemoteConfig::default(),
            embedding: EmbeddingConfig::default(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("reading {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parsing {path}: {source}")]
    Parse {
        path: PathBuf,
        source: toml::de::Error,
    },
    #[error("{var}: {message}")]
    Env { var: &'static str, message: String },
}

impl Config {
    pub fn parse(src: &str, path: &Path) -> Result<Self, ConfigError> {
        toml::from_str(src).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Read `path` (if any) and apply overrides from the process environment.
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        Self::load_with(path, |k| std::env::var(k).ok())
    }

    pub fn load_with(
        path: Option<&Path>,
        env: impl Fn(&str) -> Option<String>,
    ) -> Result<Self, ConfigError> {
        let mut config = match path {
            Some(p) => {
                let src = std::fs::read_to_string(p).map_err(|source| ConfigError::Read {
                    path: p.to_path_buf(),
                    source,
                })?;
                Self::parse(&src, p)?
            }
            None => Self::default(),
        };
        config.apply_env(env)?;
        Ok(config)
    }

    fn apply_env(&mut self, env: impl Fn(&str) -> Option<String>) -> Result<(), ConfigError> {
        if let Some(port) = env(ENV_PORT) {
            self.port = port.trim().parse().map_err(|e| ConfigError::Env {
                var: ENV_PORT,
                message: format!("{e}"),
            })?;
        }
        if let Some(v) = env(ENV_CATALOG).filter(|v| !v.is_empty()) {
            self.catalog = Some(v.into());
        }
        if let Some(v) = env(ENV_DATA_DIR).filter(|v| !v.is_empty()) {
            self.data_dir = v.into();
        }
        if let Some(v) = env(ENV_COMPLETION_URL) {
            self.completion.url = Some(v).filter(|v| !v.is_empty());
        }
        Ok(())
    }

    pub fn session_ttl(&self) -> Duration {
        Duration::from_secs(self.session_ttl_secs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn env(pairs: &[(&str, &str)]) -> impl Fn(&str) -> Option<String> {
        let map: HashMap<String, String> = pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        move |k| map.get(k).cloned()
    }

    #[test]
    fn file_then_env() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("crs.toml");
        std::fs::write(&path, "port = 9000\ndata_dir = \"/var/crs\"\n[completion]\ntimeout_ms = 250\n").unwrap();
        let c = Config::load_with(Some(&path), env(&[(ENV_PORT, "9100"), (ENV_COMPLETION_URL, "http://x/complete")])).unwrap();
        assert_eq!(c.port, 9100);
        assert_eq!(c.data_dir, PathBuf::from("/var/crs"));
        assert_eq!(c.completion.url.as_deref(), Some("http://x/complete"));
        assert_eq!(c.completion.timeout(), Duration::from_millis(250));
        assert_eq!(c.session_ttl(), Duration::from_secs(86_400));
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(
            Config::load_with(None, env(&[(ENV_PORT, "eighty")])),
            Err(ConfigError::Env { var: ENV_PORT, .. })
        ));
        assert!(matches!(Config::parse("prot = 1", Path::new("x")), Err(ConfigError::Parse { .. })));
    }
}
