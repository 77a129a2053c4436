//! sitrep-core: a deterministic, cycle-driven multi-agent engine that turns
//! streams of formatted observations into a live representation of an
//! emergency situation.
//!
//! Observations (one object, its qualifiers, a location and a cycle
//! timestamp) are routed to factual agents by a proximity calculus — the
//! product of a semantic, a temporal and a spatial component. The closest
//! live agent absorbs an observation when the proximity clears a creation
//! threshold; otherwise a new agent is born around it, so no observation is
//! ever lost. Agents carry an action indicator (AI, additive in absorbed
//! proximities) and a plausibility indicator (PI, exponential in the local
//! situation), maintain acquaintance links to every agent with nonzero
//! proximity, and evolve through a small guarded transition network. Each
//! cycle emits activity records — one per state change, one per indicator
//! change — and deterministic CSV/JSONL outputs.

pub mod atn;
pub mod config;
pub mod fsf;
pub mod mas;
pub mod ontology;
pub mod output;
pub mod proximity;
pub mod runner;
pub mod scenario;

pub use fsf::{parse_fsf, serialize_fsf, Coordinate, Fsf, FsfError, QualifierValue, Value};
pub use mas::{
    ActivityKind, ActivityRecord, AgentId, AgentKind, MasConfig, MasError, RepresentationMas,
    RoutingDecision, Snapshot,
};
pub use ontology::{Ontology, OntologyError, SemanticClass, SemanticFamily, SemanticKind};
pub use proximity::{
    semantic_proximity, spatial_proximity, temporal_proximity, total_proximity,
    ProximityBreakdown, ProximityError, ProximityParams,
};
pub use runner::{run_replay, run_simulation, EngineSetup, RunError};
