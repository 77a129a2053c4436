//! The shipped reference scenario: a scripted 60-cycle trace in which
//! brigades discover the first fires at cycle 5, a tracked fire ignites at
//! cycle 30, escalates by cycle 32, draws brigade presence through cycles
//! 38-46 (three plausibility peaks) and is extinguished at cycle 48.
//!
//! The trace is fully scripted (no randomness) so its indicator trajectories
//! are reproducible to the bit. A companion world specification drives the
//! `simulate` path with a qualitatively similar layout.

use crate::fsf::{Coordinate, Fsf, QualifierValue, Value};
use crate::ontology::Ontology;

use super::trace::Trace;
use super::world::{BrigadeSpec, GridSpec, IgnitionSpec, WorldSpec};

/// A world spec plus the scripted trace and the landmarks tests care about.
#[derive(Debug, Clone)]
pub struct PaperScenario {
    pub world: WorldSpec,
    pub trace: Trace,
    /// Object id of the fire whose trajectory reproduces the reference
    /// narrative.
    pub tracked_fire: String,
    /// First cycle with any observation.
    pub discovery_cycle: u64,
    /// Cycle the tracked fire is first observed (agent creation).
    pub ignition_cycle: u64,
    /// The tracked fire must be critical (state 3) by this cycle.
    pub escalation_deadline: u64,
    /// Cycles during which brigades stand inside the fire radius.
    pub brigade_window: (u64, u64),
    /// Cycle of the tracked fire's final, extinguished observation.
    pub extinguish_cycle: u64,
    pub total_cycles: u64,
}

/// (first cycle, last cycle, x, y, extinguishing) position segments.
type BrigadeScript = &'static [(u64, u64, i64, i64, i64)];

/// (first cycle, last cycle, fieriness, inDangerNeighbours, burningNeighbours).
type FirePhases = &'static [(u64, u64, i64, i64, i64)];

const BRIGADE_0: BrigadeScript = &[
    (5, 5, 50, 0, 0),
    (6, 6, 52, 0, 0),
    (7, 7, 54, 0, 0),
    (8, 14, 55, 0, 0),
    (15, 19, 55, 0, 1),
    (20, 20, 60, 5, 0),
    (21, 21, 65, 10, 0),
    (22, 22, 70, 14, 0),
    (23, 23, 78, 18, 0),
    (24, 37, 95, 20, 0),
    (38, 39, 85, 20, 0),
    (40, 40, 95, 20, 0),
    (41, 42, 85, 20, 0),
    (43, 43, 85, 20, 1),
    (44, 44, 95, 20, 0),
    (45, 45, 88, 20, 1),
    (46, 59, 96, 20, 0),
];

const BRIGADE_1: BrigadeScript = &[
    (5, 5, 70, 5, 0),
    (6, 6, 68, 3, 0),
    (7, 7, 66, 2, 0),
    (8, 14, 65, 0, 0),
    (15, 19, 65, 0, 1),
    (20, 20, 73, 0, 0),
    (21, 21, 81, 0, 0),
    (22, 22, 85, 5, 0),
    (23, 23, 85, 10, 0),
    (24, 30, 85, 8, 0),
    (31, 31, 95, 15, 0),
    (32, 32, 92, 30, 0),
    (33, 38, 80, 33, 0),
    (39, 39, 80, 28, 0),
    (40, 40, 80, 32, 0),
    (41, 41, 80, 28, 0),
    (42, 42, 80, 27, 0),
    (43, 43, 88, 35, 0),
    (44, 44, 100, 31, 0),
    (45, 47, 100, 27, 0),
    (48, 52, 100, 27, 1),
    (53, 59, 100, 27, 0),
];

const BRIGADE_2: BrigadeScript = &[
    (9, 9, 40, 48, 0),
    (10, 10, 40, 47, 0),
    (11, 11, 40, 46, 0),
    (12, 19, 40, 45, 0),
    (20, 24, 40, 45, 1),
    (25, 25, 45, 42, 0),
    (26, 26, 52, 40, 0),
    (27, 27, 60, 38, 0),
    (28, 28, 68, 35, 0),
    (29, 29, 74, 33, 0),
    (30, 35, 78, 32, 0),
    (36, 39, 80, 32, 0),
    (40, 40, 80, 28, 0),
    (41, 41, 80, 32, 0),
    (42, 42, 85, 22, 0),
    (43, 46, 85, 22, 1),
    (47, 47, 85, 35, 0),
    (48, 48, 75, 30, 0),
    (49, 49, 64, 26, 0),
    (50, 55, 64, 26, 1),
    (56, 59, 64, 26, 0),
];

struct FireScript {
    object_id: &'static str,
    position: (i64, i64),
    phases: FirePhases,
    /// (first cycle, last cycle, observations per cycle).
    observations: &'static [(u64, u64, u32)],
}

// Building ids follow a 10-wide grid with 20-unit spacing.
const FIRES: &[FireScript] = &[
    FireScript {
        object_id: "fire#3",
        position: (60, 0),
        phases: &[
            (5, 9, 1, 3, 0),
            (10, 11, 2, 3, 0),
            (12, 14, 2, 2, 1),
            (15, 17, 3, 2, 1),
            (18, 19, 3, 2, 0),
            (20, 20, 8, 2, 0),
        ],
        observations: &[(5, 19, 2), (20, 20, 1)],
    },
    FireScript {
        object_id: "fire#4",
        position: (80, 0),
        phases: &[(12, 14, 1, 2, 1), (15, 17, 2, 2, 1), (18, 18, 8, 2, 1)],
        observations: &[(12, 17, 2), (18, 18, 1)],
    },
    FireScript {
        object_id: "fire#13",
        position: (60, 20),
        phases: &[(46, 47, 1, 2, 1), (48, 53, 1, 2, 0), (54, 59, 2, 2, 0)],
        observations: &[(46, 59, 1)],
    },
    FireScript {
        object_id: "fire#14",
        position: (80, 20),
        phases: &[
            (30, 35, 1, 3, 0),
            (36, 39, 2, 3, 0),
            (40, 42, 2, 2, 1),
            (43, 45, 3, 2, 1),
            (46, 47, 3, 1, 2),
            (48, 48, 8, 1, 2),
        ],
        observations: &[(30, 31, 1), (32, 48, 2)],
    },
    FireScript {
        object_id: "fire#15",
        position: (100, 20),
        phases: &[(40, 47, 1, 3, 1), (48, 55, 2, 3, 0), (56, 59, 3, 3, 0)],
        observations: &[(40, 59, 2)],
    },
    FireScript {
        object_id: "fire#22",
        position: (40, 40),
        phases: &[
            (9, 14, 1, 4, 0),
            (15, 20, 2, 4, 0),
            (21, 24, 3, 4, 0),
            (25, 25, 8, 4, 0),
        ],
        observations: &[(9, 24, 1), (25, 25, 1)],
    },
];

const TOTAL_CYCLES: u64 = 60;

/// Build the reference scenario. The trace is also shipped as
/// `config/paper_trace.fsf`; a test keeps the two in sync.
pub fn build_paperlike_scenario() -> PaperScenario {
    let ontology = Ontology::default_rcr();
    let mut observations: Vec<Fsf> = Vec::new();

    for cycle in 0..TOTAL_CYCLES {
        // Brigades report first: fires are observed by someone already there.
        for (id, script) in [BRIGADE_0, BRIGADE_1, BRIGADE_2].iter().enumerate() {
            let entry = script
                .iter()
                .find(|(from, to, _, _, _)| (*from..=*to).contains(&cycle));
            if let Some(&(_, _, x, y, extinguishing)) = entry {
                observations.push(
                    Fsf::new(
                        format!("brigade#{id}"),
                        vec![QualifierValue::new(
                            "extinguishing",
                            Value::Integer(extinguishing),
                        )],
                        Coordinate::new(x, y),
                        cycle,
                        &ontology,
                    )
                    .expect("scripted brigade observation is valid"),
                );
            }
        }
        for fire in FIRES {
            let count = fire
                .observations
                .iter()
                .find(|(from, to, _)| (*from..=*to).contains(&cycle))
                .map(|(_, _, n)| *n)
                .unwrap_or(0);
            if count == 0 {
                continue;
            }
            let (fieriness, in_danger, burning) = fire
                .phases
                .iter()
                .find(|(from, to, _, _, _)| (*from..=*to).contains(&cycle))
                .map(|(_, _, f, d, b)| (*f, *d, *b))
                .expect("every observed cycle has a phase");
            for _ in 0..count {
                observations.push(
                    Fsf::new(
                        fire.object_id,
                        vec![
                            QualifierValue::new("fieriness", Value::Integer(fieriness)),
                            QualifierValue::new("inDangerNeighbours", Value::Integer(in_danger)),
                            QualifierValue::new("burningNeighbours", Value::Integer(burning)),
                        ],
                        Coordinate::new(fire.position.0, fire.position.1),
                        cycle,
                        &ontology,
                    )
                    .expect("scripted fire observation is valid"),
                );
            }
        }
    }

    let trace = Trace::from_observations(observations).expect("scripted times are monotone");

    let world = WorldSpec {
        grid: GridSpec {
            width: 10,
            height: 10,
            spacing: 20,
        },
        ignitions: vec![
            IgnitionSpec {
                building: 3,
                cycle: 5,
            },
            IgnitionSpec {
                building: 22,
                cycle: 9,
            },
            IgnitionSpec {
                building: 14,
                cycle: 30,
            },
        ],
        brigades: vec![
            BrigadeSpec {
                id: 0,
                start: Coordinate::new(50, 0),
                waypoints: vec![
                    Coordinate::new(95, 20),
                    Coordinate::new(50, 0),
                ],
                speed: 5,
            },
            BrigadeSpec {
                id: 1,
                start: Coordinate::new(70, 5),
                waypoints: vec![
                    Coordinate::new(100, 40),
                    Coordinate::new(70, 5),
                ],
                speed: 5,
            },
            BrigadeSpec {
                id: 2,
                start: Coordinate::new(40, 48),
                waypoints: vec![
                    Coordinate::new(80, 30),
                    Coordinate::new(40, 48),
                ],
                speed: 5,
            },
        ],
        spread_probability: 0.05,
        growth_rate: 0.2,
        extinguish_rate: 0.5,
        extinguish_radius: 10.0,
        sensing_radius: 30.0,
        seed: 2024,
        total_cycles: TOTAL_CYCLES,
    };

    PaperScenario {
        world,
        trace,
        tracked_fire: "fire#14".to_string(),
        discovery_cycle: 5,
        ignition_cycle: 30,
        escalation_deadline: 32,
        brigade_window: (38, 46),
        extinguish_cycle: 48,
        total_cycles: TOTAL_CYCLES,
    }
}
