//! Run drivers shared by the command-line front end and library callers:
//! everything the CLI can do goes through these functions.

use thiserror::Error;

use crate::atn::{default_brigade_atn, default_fire_atn, AtnSpec};
use crate::mas::{MasConfig, MasError, RepresentationMas};
use crate::ontology::Ontology;
use crate::output::{OutputCollector, RunOutputs};
use crate::scenario::{Trace, World, WorldError, WorldSpec};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Mas(#[from] MasError),
    #[error(transparent)]
    World(#[from] WorldError),
    #[error("requested {requested} cycles but the trace runs through cycle {needed}")]
    TraceLongerThanRun { requested: u64, needed: u64 },
}

/// Everything needed to instantiate the representation layer.
#[derive(Debug, Clone)]
pub struct EngineSetup {
    pub ontology: Ontology,
    pub config: MasConfig,
    pub fire_atn: AtnSpec,
    pub brigade_atn: AtnSpec,
}

impl Default for EngineSetup {
    fn default() -> Self {
        let config = MasConfig::default();
        EngineSetup {
            ontology: Ontology::default_rcr(),
            fire_atn: default_fire_atn(&config.thresholds),
            brigade_atn: default_brigade_atn(&config.thresholds),
            config,
        }
    }
}

impl EngineSetup {
    pub fn build_mas(&self) -> Result<RepresentationMas, MasError> {
        RepresentationMas::new(
            self.ontology.clone(),
            self.config.clone(),
            self.fire_atn.clone(),
            self.brigade_atn.clone(),
        )
    }
}

/// Feed a trace through the representation layer. The run length defaults to
/// one past the last observed cycle; `cycles` may extend (never truncate) it.
pub fn run_replay(
    trace: &Trace,
    setup: &EngineSetup,
    cycles: Option<u64>,
    with_snapshots: bool,
) -> Result<(RunOutputs, RepresentationMas), RunError> {
    let needed = trace.max_cycle().map(|c| c + 1).unwrap_or(0);
    let total = match cycles {
        Some(requested) if requested < needed => {
            return Err(RunError::TraceLongerThanRun {
                requested,
                needed: needed - 1,
            })
        }
        Some(requested) => requested,
        None => needed,
    };

    let mut mas = setup.build_mas()?;
    let mut collector = OutputCollector::new(with_snapshots);
    for cycle in 0..total {
        let batch = trace.observations_at(cycle).to_vec();
        let records = mas.run_cycle(batch)?;
        collector.record_cycle(cycle, &mas, &records);
    }
    Ok((collector.finish(), mas))
}

/// Run the toy world and feed its observations through the representation
/// layer. `seed` and `cycles` override the corresponding spec fields.
pub fn run_simulation(
    mut spec: WorldSpec,
    setup: &EngineSetup,
    seed: Option<u64>,
    cycles: Option<u64>,
    with_snapshots: bool,
) -> Result<(RunOutputs, RepresentationMas), RunError> {
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    if let Some(cycles) = cycles {
        spec.total_cycles = cycles;
    }
    let total = spec.total_cycles;
    let mut world = World::new(spec)?;
    let mut mas = setup.build_mas()?;
    let mut collector = OutputCollector::new(with_snapshots);
    for cycle in 0..total {
        let observations = world.tick(cycle, &setup.ontology)?;
        let records = mas.run_cycle(observations)?;
        collector.record_cycle(cycle, &mas, &records);
    }
    Ok((collector.finish(), mas))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::build_paperlike_scenario;

    #[test]
    fn replay_of_the_reference_trace_is_reproducible() {
        let scenario = build_paperlike_scenario();
        let setup = EngineSetup::default();
        let (a, _) = run_replay(&scenario.trace, &setup, None, true).unwrap();
        let (b, _) = run_replay(&scenario.trace, &setup, None, true).unwrap();
        assert_eq!(a.agents_csv, b.agents_csv);
        assert_eq!(a.activities_csv, b.activities_csv);
        assert_eq!(a.snapshots_jsonl, b.snapshots_jsonl);
    }

    #[test]
    fn replay_cannot_be_truncated_below_the_trace() {
        let scenario = build_paperlike_scenario();
        let setup = EngineSetup::default();
        let err = run_replay(&scenario.trace, &setup, Some(10), false);
        assert!(matches!(err, Err(RunError::TraceLongerThanRun { .. })));
    }

    #[test]
    fn simulation_runs_the_companion_world() {
        let scenario = build_paperlike_scenario();
        let setup = EngineSetup::default();
        let (outputs, mas) =
            run_simulation(scenario.world, &setup, None, Some(40), false).unwrap();
        assert!(outputs.agents_csv.lines().count() > 1);
        assert_eq!(mas.cycle(), 40);
        assert_eq!(mas.history_total(), mas.ingested_count());
    }
}
