//! The representation layer: a registry of factual agents fed by observation
//! streams.
//!
//! Each incoming observation is routed by a generative rule: the live agent
//! with the highest total proximity absorbs it if that proximity clears the
//! creation threshold, otherwise a new agent is created around it. No
//! observation is ever dropped. Absorption updates the agent's indicators;
//! once per cycle every live agent refreshes its acquaintances and steps its
//! transition network, and the engine accounts one activity per state change
//! and one per indicator change.

mod agent;
mod config;
mod indicators;

pub use agent::{AgentId, AgentKind, FactualAgent};
pub use config::{BrigadeIndicatorParams, FireIndicatorParams, MasConfig};
pub use indicators::{
    update_indicators_brigade, update_indicators_fire, BrigadeContext, IndicatorUpdate,
};

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

use crate::atn::{
    default_brigade_atn, default_fire_atn, AtnError, AtnSpec, Operand, PropertyView, StateId,
};
use crate::fsf::{Coordinate, Fsf};
use crate::ontology::Ontology;
use crate::proximity::{total_proximity, ProximityError};

#[derive(Debug, Error)]
pub enum MasError {
    #[error("observation at time {fsf_time} does not match current cycle {cycle}")]
    StaleFsf { fsf_time: u64, cycle: u64 },
    #[error("invalid observation: {0}")]
    InvalidFsf(String),
    #[error("observation of `{object_id}` lacks required numeric qualifier `{qualifier}`")]
    MissingQualifier {
        qualifier: String,
        object_id: String,
    },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Proximity(#[from] ProximityError),
    #[error(transparent)]
    Atn(#[from] AtnError),
}

/// What the generative rule decided for one observation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoutingDecision {
    AbsorbedBy(AgentId),
    Created(AgentId),
}

/// One accounted activity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActivityRecord {
    pub cycle: u64,
    pub agent_id: AgentId,
    pub kind: ActivityKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ActivityKind {
    StateChange,
    IndicatorChange,
}

/// One indicator update, logged so trajectories can be recomputed offline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsorptionRecord {
    pub cycle: u64,
    pub agent_id: AgentId,
    /// Total proximity credited to the indicators (0 at creation).
    pub proximity: f64,
    /// Exponent argument of the PI formula (`x` for fires, `y` for brigades).
    pub exponent_arg: f64,
    pub ai_after: f64,
    pub pi_after: f64,
    pub created: bool,
}

/// Immutable, serializable view of one agent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentSnapshot {
    pub id: AgentId,
    pub kind: AgentKind,
    pub class: String,
    pub state: StateId,
    pub ai: f64,
    pub pi: f64,
    pub life_time: u64,
    pub current_fsf: Fsf,
    pub acquaintances: Vec<(AgentId, f64)>,
}

/// Immutable view of the whole layer after the most recently completed cycle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub cycle: u64,
    pub agents: Vec<AgentSnapshot>,
}

/// The multi-agent representation layer.
#[derive(Debug, Clone)]
pub struct RepresentationMas {
    ontology: Ontology,
    config: MasConfig,
    phenomenon_atn: AtnSpec,
    actor_atn: AtnSpec,
    agents: Vec<FactualAgent>,
    cycle: u64,
    activity_log: Vec<ActivityRecord>,
    absorption_log: Vec<AbsorptionRecord>,
    ingested: u64,
}

struct AgentPropertyView<'a> {
    agent: &'a FactualAgent,
    current_cycle: u64,
}

impl PropertyView for AgentPropertyView<'_> {
    fn lookup(&self, operand: &Operand) -> Option<f64> {
        match operand {
            Operand::Ai => Some(self.agent.ai),
            Operand::Pi => Some(self.agent.pi),
            Operand::DeltaAi => Some(self.agent.ai - self.agent.prev_ai),
            Operand::DeltaPi => Some(self.agent.pi - self.agent.prev_pi),
            Operand::LifeTime => Some(self.agent.life_time(self.current_cycle) as f64),
            Operand::LowPiCycles => Some(f64::from(self.agent.low_pi_cycles)),
            Operand::Qualifier(name) => self.agent.current_fsf().qualifier_number(name),
        }
    }
}

impl RepresentationMas {
    pub fn new(
        ontology: Ontology,
        config: MasConfig,
        phenomenon_atn: AtnSpec,
        actor_atn: AtnSpec,
    ) -> Result<RepresentationMas, MasError> {
        config.validate()?;
        Ok(RepresentationMas {
            ontology,
            config,
            phenomenon_atn,
            actor_atn,
            agents: Vec::new(),
            cycle: 0,
            activity_log: Vec::new(),
            absorption_log: Vec::new(),
            ingested: 0,
        })
    }

    /// Default ontology, configuration and transition networks.
    pub fn with_defaults() -> RepresentationMas {
        let config = MasConfig::default();
        let fire_atn = default_fire_atn(&config.thresholds);
        let brigade_atn = default_brigade_atn(&config.thresholds);
        RepresentationMas::new(Ontology::default_rcr(), config, fire_atn, brigade_atn)
            .expect("defaults are valid")
    }

    pub fn cycle(&self) -> u64 {
        self.cycle
    }

    pub fn config(&self) -> &MasConfig {
        &self.config
    }

    pub fn ontology(&self) -> &Ontology {
        &self.ontology
    }

    pub fn agents(&self) -> &[FactualAgent] {
        &self.agents
    }

    pub fn agent(&self, id: AgentId) -> Option<&FactualAgent> {
        self.agents.get(id.0 as usize)
    }

    pub fn live_agents(&self) -> impl Iterator<Item = &FactualAgent> {
        self.agents.iter().filter(|a| !a.is_dead())
    }

    pub fn activity_log(&self) -> &[ActivityRecord] {
        &self.activity_log
    }

    pub fn absorption_log(&self) -> &[AbsorptionRecord] {
        &self.absorption_log
    }

    /// Number of observations ever routed.
    pub fn ingested_count(&self) -> u64 {
        self.ingested
    }

    /// Sum of history lengths over all agents; equals `ingested_count` as
    /// long as no observation was lost.
    pub fn history_total(&self) -> u64 {
        self.agents.iter().map(|a| a.history.len() as u64).sum()
    }

    /// Route one observation: the most-proximal live agent absorbs it when
    /// its total proximity reaches the creation threshold, otherwise a new
    /// agent is created. Ties break towards the smallest agent id.
    pub fn route_fsf(&mut self, fsf: Fsf) -> Result<RoutingDecision, MasError> {
        if fsf.time != self.cycle {
            return Err(MasError::StaleFsf {
                fsf_time: fsf.time,
                cycle: self.cycle,
            });
        }
        let (info, _) = self
            .ontology
            .classify(&fsf.object_id)
            .map_err(|e| MasError::InvalidFsf(e.to_string()))?;
        if info.name != fsf.class.leaf {
            return Err(MasError::InvalidFsf(format!(
                "observation class `{}` does not match `{}` resolved from `{}`",
                fsf.class.leaf, info.name, fsf.object_id
            )));
        }

        let mut best: Option<(usize, f64)> = None;
        for (idx, agent) in self.agents.iter().enumerate() {
            if agent.is_dead() {
                continue;
            }
            let breakdown = total_proximity(
                &fsf,
                agent.current_fsf(),
                &self.ontology,
                &self.config.proximity,
            )?;
            // Strict comparison keeps the smallest id on ties.
            if best.map(|(_, p)| breakdown.total > p).unwrap_or(true) {
                best = Some((idx, breakdown.total));
            }
        }

        let decision = match best {
            Some((idx, proximity)) if proximity >= self.config.creation_threshold => {
                self.absorb(idx, fsf, proximity)?
            }
            _ => self.create_agent(fsf)?,
        };
        self.ingested += 1;
        Ok(decision)
    }

    fn absorb(
        &mut self,
        idx: usize,
        fsf: Fsf,
        proximity: f64,
    ) -> Result<RoutingDecision, MasError> {
        let update = match self.agents[idx].kind {
            AgentKind::Phenomenon => {
                let brigades = self.brigades_near(&fsf.location);
                let agent = &self.agents[idx];
                update_indicators_fire(
                    agent.ai,
                    agent.life_time(self.cycle),
                    &fsf,
                    brigades,
                    proximity,
                    &self.config.fire,
                )?
            }
            AgentKind::Actor => {
                let context = self.actor_context(idx, &fsf);
                self.agents[idx].idle_cycles = context.idle_cycles;
                update_indicators_brigade(
                    self.agents[idx].ai,
                    &context,
                    proximity,
                    &self.config.brigade,
                )
            }
        };

        let agent = &mut self.agents[idx];
        agent.history.push(fsf);
        agent.ai = update.ai;
        agent.pi = update.pi;
        let id = agent.id;
        self.absorption_log.push(AbsorptionRecord {
            cycle: self.cycle,
            agent_id: id,
            proximity,
            exponent_arg: update.exponent_arg,
            ai_after: update.ai,
            pi_after: update.pi,
            created: false,
        });
        Ok(RoutingDecision::AbsorbedBy(id))
    }

    fn create_agent(&mut self, fsf: Fsf) -> Result<RoutingDecision, MasError> {
        let id = AgentId(self.agents.len() as u64);
        let kind = AgentKind::from_family(fsf.class.semantic.family());
        // Base case of the indicator recurrences: AI starts at 0 and the PI
        // exponential is evaluated on the creating observation with no
        // proximity term.
        let update = match kind {
            AgentKind::Phenomenon => {
                let brigades = self.brigades_near(&fsf.location);
                update_indicators_fire(0.0, 0, &fsf, brigades, 0.0, &self.config.fire)?
            }
            AgentKind::Actor => {
                let context = BrigadeContext {
                    active_fires_in_radius: self.fires_near(&fsf.location),
                    extinguishing: is_extinguishing(&fsf),
                    idle_cycles: 0,
                };
                update_indicators_brigade(0.0, &context, 0.0, &self.config.brigade)
            }
        };
        let initial_state = match kind {
            AgentKind::Phenomenon => self.phenomenon_atn.initial,
            AgentKind::Actor => self.actor_atn.initial,
        };
        self.agents.push(FactualAgent {
            id,
            kind,
            history: vec![fsf],
            ai: update.ai,
            pi: update.pi,
            prev_ai: update.ai,
            prev_pi: update.pi,
            atn_state: initial_state,
            creation_cycle: self.cycle,
            low_pi_cycles: 0,
            idle_cycles: 0,
            acquaintances: BTreeMap::new(),
            died_cycle: None,
        });
        self.absorption_log.push(AbsorptionRecord {
            cycle: self.cycle,
            agent_id: id,
            proximity: 0.0,
            exponent_arg: update.exponent_arg,
            ai_after: update.ai,
            pi_after: update.pi,
            created: true,
        });
        Ok(RoutingDecision::Created(id))
    }

    /// Live brigade-class actor agents within the fire radius of a location.
    fn brigades_near(&self, location: &Coordinate) -> u32 {
        self.agents
            .iter()
            .filter(|a| {
                !a.is_dead()
                    && a.kind == AgentKind::Actor
                    && a.current_fsf().class.leaf == self.config.brigade_class
                    && a.current_fsf().location.distance(location)
                        <= self.config.fire.brigade_radius
            })
            .count() as u32
    }

    /// Live fire-class phenomenon agents within the brigade radius.
    fn fires_near(&self, location: &Coordinate) -> u32 {
        self.agents
            .iter()
            .filter(|a| {
                !a.is_dead()
                    && a.kind == AgentKind::Phenomenon
                    && a.current_fsf().class.leaf == self.config.fire_class
                    && a.current_fsf().location.distance(location) <= self.config.brigade.radius
            })
            .count() as u32
    }

    fn actor_context(&self, idx: usize, fsf: &Fsf) -> BrigadeContext {
        let agent = &self.agents[idx];
        let active_fires = self.fires_near(&fsf.location);
        let extinguishing = is_extinguishing(fsf);
        // The idle streak moves at most once per cycle.
        let already_absorbed_this_cycle = agent.current_fsf().time == fsf.time;
        let idle_cycles = if active_fires > 0 || extinguishing {
            0
        } else if already_absorbed_this_cycle {
            agent.idle_cycles
        } else {
            agent.idle_cycles + 1
        };
        BrigadeContext {
            active_fires_in_radius: active_fires,
            extinguishing,
            idle_cycles,
        }
    }

    /// Run one full cycle over a batch of observations arriving in order:
    /// route every observation, update starvation streaks, refresh
    /// acquaintances, step every live agent's network, account activities and
    /// advance the clock.
    pub fn run_cycle(&mut self, observations: Vec<Fsf>) -> Result<Vec<ActivityRecord>, MasError> {
        let cycle = self.cycle;
        let start_indicators: Vec<(f64, f64)> =
            self.agents.iter().map(|a| (a.ai, a.pi)).collect();

        for fsf in observations {
            self.route_fsf(fsf)?;
        }

        for agent in self.agents.iter_mut().filter(|a| !a.is_dead()) {
            if agent.pi < self.config.thresholds.pi_dead {
                agent.low_pi_cycles += 1;
            } else {
                agent.low_pi_cycles = 0;
            }
        }

        self.refresh_acquaintances()?;

        // Indicators first, then the automata: guards see this cycle's values.
        let mut state_records = Vec::new();
        for idx in 0..self.agents.len() {
            if self.agents[idx].is_dead() {
                continue;
            }
            let spec = match self.agents[idx].kind {
                AgentKind::Phenomenon => &self.phenomenon_atn,
                AgentKind::Actor => &self.actor_atn,
            };
            let view = AgentPropertyView {
                agent: &self.agents[idx],
                current_cycle: cycle,
            };
            let result = spec.step(self.agents[idx].atn_state, &view)?;
            if result.fired {
                let terminal = spec.is_terminal(result.new_state);
                let agent = &mut self.agents[idx];
                agent.atn_state = result.new_state;
                if terminal {
                    agent.died_cycle = Some(cycle);
                }
                state_records.push(ActivityRecord {
                    cycle,
                    agent_id: agent.id,
                    kind: ActivityKind::StateChange,
                });
            }
        }

        let mut records = Vec::new();
        for (idx, agent) in self.agents.iter().enumerate() {
            let changed = match start_indicators.get(idx) {
                Some(&(ai, pi)) => agent.ai != ai || agent.pi != pi,
                None => true, // created this cycle; initialization counts
            };
            if changed {
                records.push(ActivityRecord {
                    cycle,
                    agent_id: agent.id,
                    kind: ActivityKind::IndicatorChange,
                });
            }
        }
        records.extend(state_records);

        for agent in self.agents.iter_mut().filter(|a| !a.is_dead()) {
            agent.prev_ai = agent.ai;
            agent.prev_pi = agent.pi;
        }

        self.activity_log.extend(records.iter().copied());
        self.cycle += 1;
        Ok(records)
    }

    /// Rebuild every live agent's acquaintance map from pairwise proximities,
    /// keeping entries whose magnitude exceeds the prune epsilon.
    fn refresh_acquaintances(&mut self) -> Result<(), MasError> {
        let live: Vec<usize> = (0..self.agents.len())
            .filter(|&i| !self.agents[i].is_dead())
            .collect();
        let mut maps: Vec<BTreeMap<AgentId, f64>> = vec![BTreeMap::new(); self.agents.len()];
        for (pos, &i) in live.iter().enumerate() {
            for &j in &live[pos + 1..] {
                let breakdown = total_proximity(
                    self.agents[i].current_fsf(),
                    self.agents[j].current_fsf(),
                    &self.ontology,
                    &self.config.proximity,
                )?;
                if breakdown.total.abs() > self.config.acquaintance_prune_epsilon {
                    maps[i].insert(self.agents[j].id, breakdown.total);
                    maps[j].insert(self.agents[i].id, breakdown.total);
                }
            }
        }
        for &i in &live {
            self.agents[i].acquaintances = std::mem::take(&mut maps[i]);
        }
        Ok(())
    }

    /// Deep immutable view of all agents after the most recently completed
    /// cycle, in stable (ascending id) order.
    pub fn snapshot(&self) -> Snapshot {
        let completed = self.cycle.saturating_sub(1);
        Snapshot {
            cycle: completed,
            agents: self
                .agents
                .iter()
                .map(|a| AgentSnapshot {
                    id: a.id,
                    kind: a.kind,
                    class: a.current_fsf().class.leaf.clone(),
                    state: a.atn_state,
                    ai: a.ai,
                    pi: a.pi,
                    life_time: a.life_time(completed),
                    current_fsf: a.current_fsf().clone(),
                    acquaintances: a
                        .acquaintances
                        .iter()
                        .map(|(id, p)| (*id, *p))
                        .collect(),
                })
                .collect(),
        }
    }

    /// Whether the agent is in a terminal state of its network.
    pub fn is_terminal_state(&self, kind: AgentKind, state: StateId) -> bool {
        match kind {
            AgentKind::Phenomenon => self.phenomenon_atn.is_terminal(state),
            AgentKind::Actor => self.actor_atn.is_terminal(state),
        }
    }
}

fn is_extinguishing(fsf: &Fsf) -> bool {
    fsf.qualifier_number("extinguishing")
        .map(|v| v != 0.0)
        .unwrap_or(false)
}
