//! Engine configuration: routing threshold, indicator parameters and the
//! thresholds shared with the default transition networks.

use serde::{Deserialize, Serialize};

use crate::atn::IndicatorThresholds;
use crate::proximity::ProximityParams;

use super::MasError;

/// Parameters of the phenomenon (fire) indicator formulas.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FireIndicatorParams {
    /// Exponent coefficient in `PI = scale * exp(-coefficient * x) + p`.
    pub coefficient: f64,
    pub scale: f64,
    /// Weight of each nearby brigade in the exponent argument.
    pub brigade_weight: f64,
    /// World radius within which brigades count as "around the fire".
    pub brigade_radius: f64,
}

impl Default for FireIndicatorParams {
    fn default() -> Self {
        FireIndicatorParams {
            coefficient: 0.05,
            scale: 10.0,
            brigade_weight: 5.0,
            brigade_radius: 10.0,
        }
    }
}

/// Parameters of the actor (fire brigade) indicator formulas:
/// `PI = scale * exp(-coefficient * y) + p` with
/// `y = idle_weight * idleCycles - fire_weight * activeFiresInRadius
///      - extinguish_weight * extinguishing`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BrigadeIndicatorParams {
    pub idle_weight: f64,
    pub fire_weight: f64,
    pub extinguish_weight: f64,
    /// World radius within which fires count as discovered by the brigade.
    pub radius: f64,
    pub coefficient: f64,
    pub scale: f64,
}

impl Default for BrigadeIndicatorParams {
    fn default() -> Self {
        BrigadeIndicatorParams {
            idle_weight: 1.0,
            fire_weight: 1.0,
            extinguish_weight: 5.0,
            radius: 10.0,
            coefficient: 0.05,
            scale: 10.0,
        }
    }
}

/// Full runtime configuration of the representation layer.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MasConfig {
    /// Minimum total proximity for an existing agent to absorb an incoming
    /// observation; anything below creates a new agent.
    pub creation_threshold: f64,
    /// Acquaintance entries with |proximity| at or below this are dropped.
    pub acquaintance_prune_epsilon: f64,
    pub fire: FireIndicatorParams,
    pub brigade: BrigadeIndicatorParams,
    pub thresholds: IndicatorThresholds,
    pub proximity: ProximityParams,
    /// Phenomenon class counted as a fire by the actor context.
    pub fire_class: String,
    /// Actor class counted as a brigade by the fire formulas.
    pub brigade_class: String,
}

impl Default for MasConfig {
    fn default() -> Self {
        MasConfig {
            creation_threshold: 0.3,
            acquaintance_prune_epsilon: 0.0,
            fire: FireIndicatorParams::default(),
            brigade: BrigadeIndicatorParams::default(),
            thresholds: IndicatorThresholds::default(),
            proximity: ProximityParams::default(),
            fire_class: "Fire".into(),
            brigade_class: "FireBrigade".into(),
        }
    }
}

impl MasConfig {
    pub fn validate(&self) -> Result<(), MasError> {
        if !(-1.0..=1.0).contains(&self.creation_threshold) {
            return Err(MasError::InvalidConfig(format!(
                "creation_threshold {} outside [-1, 1]",
                self.creation_threshold
            )));
        }
        if self.acquaintance_prune_epsilon < 0.0 {
            return Err(MasError::InvalidConfig(
                "acquaintance_prune_epsilon must be >= 0".into(),
            ));
        }
        if self.fire.brigade_radius <= 0.0 || self.brigade.radius <= 0.0 {
            return Err(MasError::InvalidConfig("radii must be positive".into()));
        }
        Ok(())
    }
}
