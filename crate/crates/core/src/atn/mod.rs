//! Declarative augmented transition networks: small state machines whose
//! transitions carry guard expressions over agent properties.
//!
//! A spec is immutable after parse; stepping is pure over a snapshot and fires
//! at most one transition per call. Transition order within a state encodes
//! priority — death transitions are declared first in the shipped files.

mod guard;

pub use guard::{parse_guard, CmpOp, GuardExpr, GuardParseError, Operand, PropertyView};

use serde::Deserialize;
use thiserror::Error;

/// State identifier, small and dense in practice (1..=4 in the defaults).
pub type StateId = u32;

#[derive(Debug, Clone, PartialEq)]
pub struct AtnState {
    pub id: StateId,
    pub label: String,
    pub is_terminal: bool,
    /// Extension hook: action names attached to the state, reported when it
    /// is entered.
    pub on_enter: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtnTransition {
    pub from: StateId,
    pub to: StateId,
    pub guard: GuardExpr,
}

/// A validated transition network.
#[derive(Debug, Clone, PartialEq)]
pub struct AtnSpec {
    pub name: String,
    pub initial: StateId,
    states: Vec<AtnState>,
    transitions: Vec<AtnTransition>,
}

#[derive(Debug, Error)]
pub enum AtnError {
    #[error("ATN schema error: {0}")]
    SchemaError(String),
    #[error("transition references undeclared state {0}")]
    DanglingStateRef(StateId),
    #[error("terminal state {0} has an outgoing transition")]
    TerminalWithOutgoing(StateId),
    #[error("snapshot state {0} is not a state of the ATN")]
    UnknownState(StateId),
}

/// Result of one step: the (possibly unchanged) state, whether a transition
/// fired, and the actions attached to the entered state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepResult {
    pub new_state: StateId,
    pub fired: bool,
    pub actions: Vec<String>,
}

impl AtnSpec {
    pub fn new(
        name: impl Into<String>,
        initial: StateId,
        states: Vec<AtnState>,
        transitions: Vec<AtnTransition>,
    ) -> Result<AtnSpec, AtnError> {
        let spec = AtnSpec {
            name: name.into(),
            initial,
            states,
            transitions,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<(), AtnError> {
        if self.states.is_empty() {
            return Err(AtnError::SchemaError("no states declared".into()));
        }
        for (i, state) in self.states.iter().enumerate() {
            if self.states[..i].iter().any(|s| s.id == state.id) {
                return Err(AtnError::SchemaError(format!(
                    "duplicate state id {}",
                    state.id
                )));
            }
        }
        if self.state(self.initial).is_none() {
            return Err(AtnError::DanglingStateRef(self.initial));
        }
        for t in &self.transitions {
            let from = self
                .state(t.from)
                .ok_or(AtnError::DanglingStateRef(t.from))?;
            if self.state(t.to).is_none() {
                return Err(AtnError::DanglingStateRef(t.to));
            }
            if from.is_terminal {
                return Err(AtnError::TerminalWithOutgoing(t.from));
            }
        }
        Ok(())
    }

    pub fn state(&self, id: StateId) -> Option<&AtnState> {
        self.states.iter().find(|s| s.id == id)
    }

    pub fn states(&self) -> &[AtnState] {
        &self.states
    }

    pub fn transitions(&self) -> &[AtnTransition] {
        &self.transitions
    }

    pub fn is_terminal(&self, id: StateId) -> bool {
        self.state(id).map(|s| s.is_terminal).unwrap_or(false)
    }

    /// Evaluate the outgoing transitions of the snapshot's state in declared
    /// order; the first satisfied guard fires. Terminal states never fire.
    pub fn step<V: PropertyView>(&self, current: StateId, view: &V) -> Result<StepResult, AtnError> {
        let state = self.state(current).ok_or(AtnError::UnknownState(current))?;
        if state.is_terminal {
            return Ok(StepResult {
                new_state: current,
                fired: false,
                actions: Vec::new(),
            });
        }
        for t in self.transitions.iter().filter(|t| t.from == current) {
            if t.guard.eval(view) {
                let entered = self.state(t.to).expect("validated endpoint");
                return Ok(StepResult {
                    new_state: t.to,
                    fired: true,
                    actions: entered.on_enter.clone(),
                });
            }
        }
        Ok(StepResult {
            new_state: current,
            fired: false,
            actions: Vec::new(),
        })
    }
}

// --- config file format ------------------------------------------------------

#[derive(Debug, Deserialize)]
struct AtnFile {
    name: Option<String>,
    initial: StateId,
    #[serde(default)]
    states: Vec<StateEntry>,
    #[serde(default)]
    transitions: Vec<TransitionEntry>,
}

#[derive(Debug, Deserialize)]
struct StateEntry {
    id: StateId,
    #[serde(default)]
    label: String,
    #[serde(default)]
    terminal: bool,
    #[serde(default)]
    on_enter: Vec<String>,
}

#[derive(Debug, Deserialize)]
struct TransitionEntry {
    from: StateId,
    to: StateId,
    guard: String,
}

/// Parse the TOML ATN file format (shipped as `config/fire.atn` and
/// `config/brigade.atn`).
pub fn parse_atn(text: &str) -> Result<AtnSpec, AtnError> {
    let file: AtnFile = toml::from_str(text).map_err(|e| AtnError::SchemaError(e.to_string()))?;
    let states = file
        .states
        .into_iter()
        .map(|s| AtnState {
            id: s.id,
            label: s.label,
            is_terminal: s.terminal,
            on_enter: s.on_enter,
        })
        .collect();
    let transitions = file
        .transitions
        .into_iter()
        .map(|t| {
            Ok(AtnTransition {
                from: t.from,
                to: t.to,
                guard: parse_guard(&t.guard).map_err(|e| {
                    AtnError::SchemaError(format!("transition {} -> {}: {e}", t.from, t.to))
                })?,
            })
        })
        .collect::<Result<Vec<_>, AtnError>>()?;
    AtnSpec::new(file.name.unwrap_or_default(), file.initial, states, transitions)
}

/// Thresholds shared by the default networks and the agent bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize, serde::Serialize)]
pub struct IndicatorThresholds {
    /// AI level a fire must reach to escalate.
    pub ai_high: f64,
    /// PI level a fire must reach to escalate.
    pub pi_high: f64,
    /// PI level below which an agent is starving.
    pub pi_dead: f64,
    /// Consecutive starving cycles before death.
    pub dead_cycles: u32,
    /// Qualifier value marking an extinguished fire.
    pub extinguished_fieriness: f64,
}

impl Default for IndicatorThresholds {
    fn default() -> Self {
        IndicatorThresholds {
            ai_high: 2.0,
            pi_high: 5.0,
            pi_dead: 1.0,
            dead_cycles: 3,
            extinguished_fieriness: 8.0,
        }
    }
}

/// The default four-state fire network. States: 1 creation, 2 active,
/// 3 critical, 4 dead. Kept in sync with `config/fire.atn` by a test.
pub fn default_fire_atn(t: &IndicatorThresholds) -> AtnSpec {
    let states = four_states();
    let transitions = vec![
        AtnTransition {
            from: 1,
            to: 2,
            guard: GuardExpr::True,
        },
        // Death first: priority over escalation.
        AtnTransition {
            from: 2,
            to: 4,
            guard: death_guard(t),
        },
        AtnTransition {
            from: 2,
            to: 3,
            guard: parse_guard(&format!("AI >= {} AND PI >= {}", t.ai_high, t.pi_high)).unwrap(),
        },
        AtnTransition {
            from: 3,
            to: 4,
            guard: death_guard(t),
        },
        AtnTransition {
            from: 3,
            to: 2,
            guard: parse_guard(&format!("dAI < 0 AND AI < {}", t.ai_high)).unwrap(),
        },
    ];
    AtnSpec::new("fire", 1, states, transitions).expect("default fire ATN is valid")
}

/// The default four-state fire-brigade network. Kept in sync with
/// `config/brigade.atn` by a test.
pub fn default_brigade_atn(_t: &IndicatorThresholds) -> AtnSpec {
    let states = four_states();
    let transitions = vec![
        AtnTransition {
            from: 1,
            to: 2,
            guard: GuardExpr::True,
        },
        // Explicit scenario removal only.
        AtnTransition {
            from: 2,
            to: 4,
            guard: parse_guard("qualifier(removed) = 1").unwrap(),
        },
        AtnTransition {
            from: 2,
            to: 3,
            guard: parse_guard("dAI > 0 AND dPI > 0").unwrap(),
        },
        AtnTransition {
            from: 3,
            to: 4,
            guard: parse_guard("qualifier(removed) = 1").unwrap(),
        },
        AtnTransition {
            from: 3,
            to: 2,
            guard: parse_guard("dAI <= 0 AND dPI <= 0").unwrap(),
        },
    ];
    AtnSpec::new("brigade", 1, states, transitions).expect("default brigade ATN is valid")
}

fn four_states() -> Vec<AtnState> {
    vec![
        AtnState {
            id: 1,
            label: "creation".into(),
            is_terminal: false,
            on_enter: vec![],
        },
        AtnState {
            id: 2,
            label: "active".into(),
            is_terminal: false,
            on_enter: vec![],
        },
        AtnState {
            id: 3,
            label: "critical".into(),
            is_terminal: false,
            on_enter: vec![],
        },
        AtnState {
            id: 4,
            label: "dead".into(),
            is_terminal: true,
            on_enter: vec![],
        },
    ]
}

fn death_guard(t: &IndicatorThresholds) -> GuardExpr {
    parse_guard(&format!(
        "qualifier(fieriness) = {} OR lowPiCycles >= {}",
        t.extinguished_fieriness, t.dead_cycles
    ))
    .unwrap()
}
