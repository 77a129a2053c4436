//! The engine configuration file (`engine.toml`): tuning knobs plus optional
//! paths to an ontology file and custom transition networks. Every section is
//! optional; omitted values fall back to the built-in defaults, so an empty
//! file (or no file at all) yields the default setup.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::atn::{default_brigade_atn, default_fire_atn, parse_atn, AtnError, IndicatorThresholds};
use crate::mas::{BrigadeIndicatorParams, FireIndicatorParams, MasConfig};
use crate::ontology::{Ontology, OntologyError};
use crate::proximity::ProximityParams;
use crate::runner::EngineSetup;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("failed to read `{path}`: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Invalid { path: PathBuf, message: String },
    #[error(transparent)]
    Ontology(#[from] OntologyError),
    #[error(transparent)]
    Atn(#[from] AtnError),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct EngineFile {
    #[serde(default)]
    routing: RoutingSection,
    #[serde(default)]
    proximity: Option<ProximityParams>,
    #[serde(default)]
    indicators: IndicatorsSection,
    #[serde(default)]
    thresholds: Option<IndicatorThresholds>,
    #[serde(default)]
    classes: ClassesSection,
    /// Path to an ontology TOML file, relative to this config file.
    #[serde(default)]
    ontology: Option<String>,
    #[serde(default)]
    atn: AtnSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RoutingSection {
    creation_threshold: Option<f64>,
    acquaintance_prune_epsilon: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct IndicatorsSection {
    fire: Option<FireIndicatorParams>,
    brigade: Option<BrigadeIndicatorParams>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassesSection {
    fire: Option<String>,
    brigade: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtnSection {
    fire: Option<String>,
    brigade: Option<String>,
}

/// Load an engine setup from a config file; `None` gives the defaults.
pub fn load_engine_setup(path: Option<&Path>) -> Result<EngineSetup, ConfigError> {
    let path = match path {
        Some(path) => path,
        None => return Ok(EngineSetup::default()),
    };
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let file: EngineFile = toml::from_str(&text).map_err(|e| ConfigError::Invalid {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let base = path.parent().unwrap_or(Path::new("."));

    let mut config = MasConfig::default();
    if let Some(threshold) = file.routing.creation_threshold {
        config.creation_threshold = threshold;
    }
    if let Some(epsilon) = file.routing.acquaintance_prune_epsilon {
        config.acquaintance_prune_epsilon = epsilon;
    }
    if let Some(proximity) = file.proximity {
        config.proximity = proximity;
    }
    if let Some(fire) = file.indicators.fire {
        config.fire = fire;
    }
    if let Some(brigade) = file.indicators.brigade {
        config.brigade = brigade;
    }
    if let Some(thresholds) = file.thresholds {
        config.thresholds = thresholds;
    }
    if let Some(fire_class) = file.classes.fire {
        config.fire_class = fire_class;
    }
    if let Some(brigade_class) = file.classes.brigade {
        config.brigade_class = brigade_class;
    }
    config
        .validate()
        .map_err(|e| ConfigError::Invalid {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;

    let ontology = match &file.ontology {
        Some(rel) => {
            let full = base.join(rel);
            let text = std::fs::read_to_string(&full).map_err(|source| ConfigError::Io {
                path: full.clone(),
                source,
            })?;
            Ontology::from_toml(&text)?
        }
        None => Ontology::default_rcr(),
    };

    let fire_atn = match &file.atn.fire {
        Some(rel) => load_atn(&base.join(rel))?,
        None => default_fire_atn(&config.thresholds),
    };
    let brigade_atn = match &file.atn.brigade {
        Some(rel) => load_atn(&base.join(rel))?,
        None => default_brigade_atn(&config.thresholds),
    };

    Ok(EngineSetup {
        ontology,
        config,
        fire_atn,
        brigade_atn,
    })
}

fn load_atn(path: &Path) -> Result<crate::atn::AtnSpec, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(parse_atn(&text)?)
}
