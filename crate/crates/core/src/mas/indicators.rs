//! Indicator update formulas.
//!
//! The action indicator accumulates the proximities of absorbed observations:
//! `AI' = AI + p`. The plausibility indicator is exponential in a situation
//! argument plus the same proximity: `PI' = scale * exp(-coefficient * arg) + p`
//! where the argument is, for fires,
//!
//! ```text
//! x = burningNeighbours + fieriness + lifeTime - brigade_weight * nbFireBrigades
//! ```
//!
//! and for brigades
//!
//! ```text
//! y = idle_weight * idleCycles - fire_weight * activeFiresInRadius
//!     - extinguish_weight * extinguishing
//! ```

use crate::fsf::Fsf;

use super::config::{BrigadeIndicatorParams, FireIndicatorParams};
use super::MasError;

/// New indicator values plus the exponent argument, kept for the absorption
/// log so trajectories can be recomputed independently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndicatorUpdate {
    pub ai: f64,
    pub pi: f64,
    /// The `x` (fires) or `y` (brigades) fed into the exponential.
    pub exponent_arg: f64,
}

/// Fire (phenomenon) indicator update. `proximity` is the total proximity
/// between the agent's previous observation and `new_fsf`; pass 0 for the
/// creation base case.
pub fn update_indicators_fire(
    current_ai: f64,
    life_time: u64,
    new_fsf: &Fsf,
    brigades_nearby: u32,
    proximity: f64,
    params: &FireIndicatorParams,
) -> Result<IndicatorUpdate, MasError> {
    let burning = require_number(new_fsf, "burningNeighbours")?;
    let fieriness = require_number(new_fsf, "fieriness")?;
    let x = burning + fieriness + life_time as f64
        - params.brigade_weight * f64::from(brigades_nearby);
    Ok(IndicatorUpdate {
        ai: current_ai + proximity,
        pi: params.scale * (-params.coefficient * x).exp() + proximity,
        exponent_arg: x,
    })
}

/// Situation of a brigade at absorption time, computed by the engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BrigadeContext {
    pub active_fires_in_radius: u32,
    pub extinguishing: bool,
    pub idle_cycles: u32,
}

/// Brigade (actor) indicator update.
pub fn update_indicators_brigade(
    current_ai: f64,
    context: &BrigadeContext,
    proximity: f64,
    params: &BrigadeIndicatorParams,
) -> IndicatorUpdate {
    let y = params.idle_weight * f64::from(context.idle_cycles)
        - params.fire_weight * f64::from(context.active_fires_in_radius)
        - params.extinguish_weight * f64::from(u8::from(context.extinguishing));
    IndicatorUpdate {
        ai: current_ai + proximity,
        pi: params.scale * (-params.coefficient * y).exp() + proximity,
        exponent_arg: y,
    }
}

fn require_number(fsf: &Fsf, name: &str) -> Result<f64, MasError> {
    fsf.qualifier_number(name).ok_or_else(|| MasError::MissingQualifier {
        qualifier: name.to_string(),
        object_id: fsf.object_id.clone(),
    })
}
