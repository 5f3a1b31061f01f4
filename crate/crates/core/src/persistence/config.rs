use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::model::{ModelError, ModelParameters};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("config is not valid: {0}")]
    Parse(#[from] toml::de::Error),
    #[error(transparent)]
    Invalid(#[from] ModelError),
}

/// Reads a flat TOML parameter file. A missing file yields the defaults;
/// keys present override them.
pub fn load_config(path: impl AsRef<Path>) -> Result<ModelParameters, ConfigError> {
    let path = path.as_ref();
    match std::fs::read_to_string(path) {
        Ok(text) => parse_config(&text),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(ModelParameters::default()),
        Err(source) => Err(ConfigError::Io {
            path: path.to_owned(),
            source,
        }),
    }
}

pub fn parse_config(text: &str) -> Result<ModelParameters, ConfigError> {
    let params: ModelParameters = toml::from_str(text)?;
    params.validate()?;
    Ok(params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_file_gives_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let params = load_config(dir.path().join("absent.toml")).unwrap();
        assert_eq!(params, ModelParameters::default());
    }

    #[test]
    fn weekly_cadence_keeps_other_defaults() {
        let params = parse_config("t_ref_days = 7\n").unwrap();
        assert_eq!(params.t_ref_days, 7);
        assert_eq!(
            ModelParameters {
                t_ref_days: ModelParameters::default().t_ref_days,
                ..params
            },
            ModelParameters::default()
        );
    }

    #[test]
    fn negative_mu_names_the_key() {
        match parse_config("mu = -1\n") {
            Err(ConfigError::Invalid(ModelError::InvalidParameter { key, .. })) => assert_eq!(key, "mu"),
            other => panic!("expected invalid mu, got {other:?}"),
        }
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(matches!(parse_config("gamma = 1.0\n"), Err(ConfigError::Parse(_))));
    }
}
