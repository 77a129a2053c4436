//! Factual agents: each one embodies a single evolving fact of the situation.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::atn::StateId;
use crate::fsf::Fsf;
use crate::ontology::SemanticFamily;

/// Monotonically increasing agent identifier; also the index into the
/// registry.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct AgentId(pub u64);

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The two factual-agent categories, derived from the observation's semantic
/// family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AgentKind {
    /// Represents an indirectly observed activity (fires).
    Phenomenon,
    /// Represents a concrete entity of the environment (fire brigades).
    Actor,
}

impl AgentKind {
    pub fn from_family(family: SemanticFamily) -> AgentKind {
        match family {
            SemanticFamily::Virtual => AgentKind::Phenomenon,
            SemanticFamily::Concrete => AgentKind::Actor,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AgentKind::Phenomenon => "phenomenon",
            AgentKind::Actor => "actor",
        }
    }
}

/// The living representative of one fact.
#[derive(Debug, Clone)]
pub struct FactualAgent {
    pub id: AgentId,
    pub kind: AgentKind,
    /// Absorbed observations in absorption order; never empty; the last entry
    /// is the current observation.
    pub history: Vec<Fsf>,
    pub ai: f64,
    pub pi: f64,
    /// Indicator values at the end of the previous cycle, for dAI/dPI.
    pub prev_ai: f64,
    pub prev_pi: f64,
    pub atn_state: StateId,
    pub creation_cycle: u64,
    /// Consecutive cycles the PI has stayed below the starvation threshold.
    pub low_pi_cycles: u32,
    /// Actor bookkeeping: consecutive cycles without fires around and without
    /// extinguishing.
    pub idle_cycles: u32,
    /// Other agents with nonzero proximity, rebuilt every cycle while alive.
    pub acquaintances: BTreeMap<AgentId, f64>,
    /// Set when the agent enters a terminal state; everything freezes.
    pub died_cycle: Option<u64>,
}

impl FactualAgent {
    pub fn current_fsf(&self) -> &Fsf {
        self.history.last().expect("history is never empty")
    }

    pub fn is_dead(&self) -> bool {
        self.died_cycle.is_some()
    }

    /// Cycles since creation, relative to the given current cycle.
    pub fn life_time(&self, current_cycle: u64) -> u64 {
        current_cycle.saturating_sub(self.creation_cycle)
    }
}
