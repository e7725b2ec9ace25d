//! Server configuration: a TOML document, then environment overrides.

use std::path::{Path, PathBuf};

use healthwise_core::ledger::EnergyPolicy;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_PORT: u16 = 8080;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Parse {
        path: PathBuf,
        source: toml::de::Error,
    },
    #[error("invalid {name}={value:?}: {message}")]
    Env {
        name: &'static str,
        value: String,
        message: String,
    },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmtpConfig {
    pub host: String,
    #[serde(default = "default_smtp_port")]
    pub port: u16,
    pub from: String,
}

fn default_smtp_port() -> u16 {
    25
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServerConfig {
    pub host: String,
    pub port: u16,
    pub data_dir: PathBuf,
    /// File names are resolved against `data_dir` unless absolute.
    pub catalog_file: PathBuf,
    pub log_file: PathBuf,
    pub profiles_file: PathBuf,
    pub outbox_file: PathBuf,
    /// Load the built-in products when the catalog file does not exist yet.
    pub seed_catalog: bool,
    pub policy: EnergyPolicy,
    pub smtp: Option<SmtpConfig>,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig {
            host: "127.0.0.1".into(),
            port: DEFAULT_PORT,
            data_dir: PathBuf::from("data"),
            catalog_file: PathBuf::from("catalog.jsonl"),
            log_file: PathBuf::from("log.jsonl"),
            profiles_file: PathBuf::from("profiles.jsonl"),
            outbox_file: PathBuf::from("outbox.jsonl"),
            seed_catalog: true,
            policy: EnergyPolicy::default(),
            smtp: None,
        }
    }
}

impl ServerConfig {
    /// Defaults for every field the document leaves out.
    pub fn from_toml(text: &str, origin: &Path) -> Result<ServerConfig, ConfigError> {
        toml::from_str(text).map_err(|source| ConfigError::Parse {
            path: origin.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<ServerConfig, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        ServerConfig::from_toml(&text, path)
    }

    /// Applies `HW_PORT` and `HW_DATA_DIR` from `lookup`.
    pub fn apply_env(&mut self, lookup: impl Fn(&str) -> Option<String>) -> Result<(), ConfigError> {
        if let Some(value) = lookup("HW_PORT") {
            self.port = value.trim().parse().map_err(|e: std::num::ParseIntError| ConfigError::Env {
                name: "HW_PORT",
                value: value.clone(),
                message: e.to_string(),
            })?;
        }
        if let Some(value) = lookup("HW_DATA_DIR") {
            self.data_dir = PathBuf::from(value);
        }
        Ok(())
    }

    pub fn resolve(&self, file: &Path) -> PathBuf {
        self.data_dir.join(file)
    }

    pub fn catalog_path(&self) -> PathBuf {
        self.resolve(&self.catalog_file)
    }

    pub fn log_path(&self) -> PathBuf {
        self.resolve(&self.log_file)
    }

    pub fn profiles_path(&self) -> PathBuf {
        self.resolve(&self.profiles_file)
    }

    pub fn outbox_path(&self) -> PathBuf {
        self.resolve(&self.outbox_file)
    }

    /// Checks the policy and creates the data directory.
    pub fn prepare(&self) -> Result<(), ConfigError> {
        self.policy
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if let Some(smtp) = &self.smtp {
            if smtp.host.trim().is_empty() || !smtp.from.contains('@') {
                return Err(ConfigError::Invalid(format!("bad smtp settings {smtp:?}")));
            }
        }
        std::fs::create_dir_all(&self.data_dir).map_err(|e| {
            ConfigError::Invalid(format!("cannot create {}: {e}", self.data_dir.display()))
        })
    }
}
