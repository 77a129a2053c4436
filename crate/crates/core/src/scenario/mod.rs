//! Observation sources: a seeded toy fire-spread world, replay traces and the
//! scripted reference scenario.

pub mod paperlike;
pub mod rng;
pub mod trace;
pub mod world;

pub use paperlike::{build_paperlike_scenario, PaperScenario};
pub use rng::SplitMix64;
pub use trace::{load_trace, parse_fsf_trace, parse_jsonl_trace, Trace, TraceError};
pub use world::{BrigadeSpec, GridSpec, IgnitionSpec, World, WorldError, WorldSpec};
