//! A toy fire-spread world standing in for a full rescue simulator: a grid of
//! buildings, seeded ignitions, spreading fires and patrolling brigades that
//! approach and extinguish what they sense. Each tick emits the observations
//! a perception layer would produce.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fsf::{Coordinate, Fsf, FsfError, QualifierValue, Value};
use crate::ontology::Ontology;

use super::rng::SplitMix64;

#[derive(Debug, Error)]
pub enum WorldError {
    #[error("world config: {0}")]
    Config(String),
    #[error(transparent)]
    Fsf(#[from] FsfError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub width: u32,
    pub height: u32,
    /// World units between adjacent buildings.
    #[serde(default = "default_spacing")]
    pub spacing: i64,
}

fn default_spacing() -> i64 {
    20
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IgnitionSpec {
    pub building: u32,
    pub cycle: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BrigadeSpec {
    pub id: u32,
    pub start: Coordinate,
    /// Patrol loop visited when no fire is sensed.
    #[serde(default)]
    pub waypoints: Vec<Coordinate>,
    /// World units moved per cycle.
    #[serde(default = "default_speed")]
    pub speed: i64,
}

fn default_speed() -> i64 {
    5
}

/// Declarative world description (`world.toml`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldSpec {
    pub grid: GridSpec,
    #[serde(default)]
    pub ignitions: Vec<IgnitionSpec>,
    #[serde(default)]
    pub brigades: Vec<BrigadeSpec>,
    pub spread_probability: f64,
    /// Fieriness units a burning building gains per cycle (capped at 3).
    #[serde(default = "default_growth_rate")]
    pub growth_rate: f64,
    /// Fieriness units removed per cycle per brigade in extinguish range.
    #[serde(default = "default_extinguish_rate")]
    pub extinguish_rate: f64,
    #[serde(default = "default_extinguish_radius")]
    pub extinguish_radius: f64,
    /// Fires within this range of any brigade are perceivable and emit
    /// observations.
    #[serde(default = "default_sensing_radius")]
    pub sensing_radius: f64,
    pub seed: u64,
    pub total_cycles: u64,
}

fn default_growth_rate() -> f64 {
    0.2
}
fn default_extinguish_rate() -> f64 {
    1.0
}
fn default_extinguish_radius() -> f64 {
    10.0
}
fn default_sensing_radius() -> f64 {
    30.0
}

impl WorldSpec {
    pub fn from_toml(text: &str) -> Result<WorldSpec, WorldError> {
        let spec: WorldSpec =
            toml::from_str(text).map_err(|e| WorldError::Config(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), WorldError> {
        if self.grid.width == 0 || self.grid.height == 0 {
            return Err(WorldError::Config("grid must be non-empty".into()));
        }
        if self.grid.spacing <= 0 {
            return Err(WorldError::Config("grid spacing must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.spread_probability) {
            return Err(WorldError::Config(format!(
                "spread_probability {} outside [0, 1]",
                self.spread_probability
            )));
        }
        let buildings = self.grid.width as u64 * self.grid.height as u64;
        for ignition in &self.ignitions {
            if u64::from(ignition.building) >= buildings {
                return Err(WorldError::Config(format!(
                    "ignition references building {} outside the {}-building grid",
                    ignition.building, buildings
                )));
            }
            if ignition.cycle >= self.total_cycles {
                return Err(WorldError::Config(format!(
                    "ignition at cycle {} is not before total_cycles {}",
                    ignition.cycle, self.total_cycles
                )));
            }
        }
        Ok(())
    }

    /// World position of a building id.
    pub fn building_position(&self, building: u32) -> Coordinate {
        let x = i64::from(building % self.grid.width) * self.grid.spacing;
        let y = i64::from(building / self.grid.width) * self.grid.spacing;
        Coordinate::new(x, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum BuildingFire {
    Unburnt,
    Burning { intensity: f64 },
    /// Extinguished fires announce themselves once (fieriness 8) and then go
    /// silent.
    Extinguished { announced: bool },
}

#[derive(Debug, Clone)]
struct BrigadeState {
    spec: BrigadeSpec,
    position: Coordinate,
    next_waypoint: usize,
    extinguishing: bool,
}

/// Mutable world state advanced one cycle at a time.
#[derive(Debug, Clone)]
pub struct World {
    spec: WorldSpec,
    rng: SplitMix64,
    fires: Vec<BuildingFire>,
    brigades: Vec<BrigadeState>,
    cycle: u64,
}

impl World {
    pub fn new(spec: WorldSpec) -> Result<World, WorldError> {
        spec.validate()?;
        let buildings = (spec.grid.width * spec.grid.height) as usize;
        let rng = SplitMix64::new(spec.seed);
        let brigades = spec
            .brigades
            .iter()
            .map(|b| BrigadeState {
                spec: b.clone(),
                position: b.start,
                next_waypoint: 0,
                extinguishing: false,
            })
            .collect();
        Ok(World {
            spec,
            rng,
            fires: vec![BuildingFire::Unburnt; buildings],
            brigades,
            cycle: 0,
        })
    }

    pub fn spec(&self) -> &WorldSpec {
        &self.spec
    }

    pub fn cycle(&self) -> u64 {
        self.cycle
    }

    /// True count of burning 4-neighbours of a building (oracle surface).
    pub fn burning_neighbours(&self, building: u32) -> u32 {
        self.neighbours(building)
            .into_iter()
            .filter(|&n| matches!(self.fires[n as usize], BuildingFire::Burning { .. }))
            .count() as u32
    }

    fn unburnt_neighbours(&self, building: u32) -> u32 {
        self.neighbours(building)
            .into_iter()
            .filter(|&n| matches!(self.fires[n as usize], BuildingFire::Unburnt))
            .count() as u32
    }

    /// In-grid 4-neighbours in north, east, south, west order.
    fn neighbours(&self, building: u32) -> Vec<u32> {
        let width = self.spec.grid.width;
        let height = self.spec.grid.height;
        let x = building % width;
        let y = building / width;
        let mut out = Vec::with_capacity(4);
        if y > 0 {
            out.push(building - width);
        }
        if x + 1 < width {
            out.push(building + 1);
        }
        if y + 1 < height {
            out.push(building + width);
        }
        if x > 0 {
            out.push(building - 1);
        }
        out
    }

    /// Advance one cycle and emit the perceivable observations: one per
    /// brigade, one per burning (or just-extinguished) fire within sensing
    /// range of any brigade.
    ///
    /// `cycle` must equal the world clock and stay below `total_cycles`.
    pub fn tick(&mut self, cycle: u64, ontology: &Ontology) -> Result<Vec<Fsf>, WorldError> {
        assert_eq!(cycle, self.cycle, "world ticked out of order");
        assert!(
            cycle < self.spec.total_cycles,
            "world ticked past total_cycles"
        );

        // Fires burning before this cycle spread and grow; fresh ignitions
        // start at intensity 1 and wait a cycle.
        let was_burning: Vec<bool> = self
            .fires
            .iter()
            .map(|f| matches!(f, BuildingFire::Burning { .. }))
            .collect();

        for ignition in &self.spec.ignitions {
            if ignition.cycle == cycle
                && self.fires[ignition.building as usize] == BuildingFire::Unburnt
            {
                self.fires[ignition.building as usize] =
                    BuildingFire::Burning { intensity: 1.0 };
            }
        }

        for building in 0..self.fires.len() as u32 {
            if !was_burning[building as usize] {
                continue;
            }
            for neighbour in self.neighbours(building) {
                if self.fires[neighbour as usize] == BuildingFire::Unburnt
                    && self.rng.next_f64() < self.spec.spread_probability
                {
                    self.fires[neighbour as usize] = BuildingFire::Burning { intensity: 1.0 };
                }
            }
        }

        for (building, fire) in self.fires.iter_mut().enumerate() {
            if !was_burning[building] {
                continue;
            }
            if let BuildingFire::Burning { intensity } = fire {
                *intensity = (*intensity + self.spec.growth_rate).min(3.0);
            }
        }

        self.move_brigades();
        self.apply_extinguishing();

        let mut observations = Vec::new();
        for brigade in &self.brigades {
            observations.push(self.brigade_fsf(brigade, cycle, ontology)?);
        }
        for building in 0..self.fires.len() as u32 {
            if let Some(fsf) = self.fire_fsf(building, cycle, ontology)? {
                observations.push(fsf);
            }
        }
        // Mark announced extinguishings after emission.
        for building in 0..self.fires.len() as u32 {
            let perceivable = self.perceivable(building);
            if let BuildingFire::Extinguished { announced } =
                &mut self.fires[building as usize]
            {
                if perceivable && !*announced {
                    *announced = true;
                }
            }
        }

        self.cycle += 1;
        Ok(observations)
    }

    fn move_brigades(&mut self) {
        // Collect burning positions first; brigades all see the same picture.
        let burning: Vec<(u32, Coordinate)> = (0..self.fires.len() as u32)
            .filter(|&b| matches!(self.fires[b as usize], BuildingFire::Burning { .. }))
            .map(|b| (b, self.spec.building_position(b)))
            .collect();

        for brigade in &mut self.brigades {
            // Nearest sensed fire, ties to the lowest building id.
            let target = burning
                .iter()
                .map(|(b, pos)| (brigade.position.distance(pos), *b, *pos))
                .filter(|(d, _, _)| *d <= self.spec.sensing_radius)
                .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)))
                .map(|(_, _, pos)| pos);

            let destination = match target {
                Some(pos) => pos,
                None => {
                    if brigade.spec.waypoints.is_empty() {
                        brigade.position
                    } else {
                        let wp = brigade.spec.waypoints[brigade.next_waypoint];
                        if brigade.position == wp {
                            brigade.next_waypoint =
                                (brigade.next_waypoint + 1) % brigade.spec.waypoints.len();
                            brigade.spec.waypoints[brigade.next_waypoint]
                        } else {
                            wp
                        }
                    }
                }
            };

            // Axis-ordered movement: spend the budget on x first, then y.
            let mut budget = brigade.spec.speed.max(0);
            let dx = destination.x - brigade.position.x;
            let step_x = dx.clamp(-budget, budget);
            brigade.position.x += step_x;
            budget -= step_x.abs();
            let dy = destination.y - brigade.position.y;
            brigade.position.y += dy.clamp(-budget, budget);

            brigade.extinguishing = burning.iter().any(|(_, pos)| {
                brigade.position.distance(pos) <= self.spec.extinguish_radius
            });
        }
    }

    fn apply_extinguishing(&mut self) {
        for building in 0..self.fires.len() as u32 {
            let position = self.spec.building_position(building);
            let crews = self
                .brigades
                .iter()
                .filter(|b| b.position.distance(&position) <= self.spec.extinguish_radius)
                .count() as f64;
            if crews == 0.0 {
                continue;
            }
            if let BuildingFire::Burning { intensity } = &mut self.fires[building as usize] {
                *intensity -= self.spec.extinguish_rate * crews;
                if *intensity <= 0.0 {
                    self.fires[building as usize] =
                        BuildingFire::Extinguished { announced: false };
                }
            }
        }
    }

    fn perceivable(&self, building: u32) -> bool {
        let position = self.spec.building_position(building);
        self.brigades
            .iter()
            .any(|b| b.position.distance(&position) <= self.spec.sensing_radius)
    }

    fn brigade_fsf(
        &self,
        brigade: &BrigadeState,
        cycle: u64,
        ontology: &Ontology,
    ) -> Result<Fsf, WorldError> {
        Ok(Fsf::new(
            format!("brigade#{}", brigade.spec.id),
            vec![QualifierValue::new(
                "extinguishing",
                Value::Integer(i64::from(brigade.extinguishing)),
            )],
            brigade.position,
            cycle,
            ontology,
        )?)
    }

    fn fire_fsf(
        &self,
        building: u32,
        cycle: u64,
        ontology: &Ontology,
    ) -> Result<Option<Fsf>, WorldError> {
        if !self.perceivable(building) {
            return Ok(None);
        }
        let fieriness = match self.fires[building as usize] {
            BuildingFire::Unburnt => return Ok(None),
            BuildingFire::Burning { intensity } => {
                (intensity.ceil() as i64).clamp(1, 3)
            }
            BuildingFire::Extinguished { announced: true } => return Ok(None),
            BuildingFire::Extinguished { announced: false } => 8,
        };
        Ok(Some(Fsf::new(
            format!("fire#{building}"),
            vec![
                QualifierValue::new("fieriness", Value::Integer(fieriness)),
                QualifierValue::new(
                    "inDangerNeighbours",
                    Value::Integer(i64::from(self.unburnt_neighbours(building))),
                ),
                QualifierValue::new(
                    "burningNeighbours",
                    Value::Integer(i64::from(self.burning_neighbours(building))),
                ),
            ],
            self.spec.building_position(building),
            cycle,
            ontology,
        )?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_spec() -> WorldSpec {
        WorldSpec {
            grid: GridSpec {
                width: 5,
                height: 5,
                spacing: 20,
            },
            ignitions: vec![],
            brigades: vec![BrigadeSpec {
                id: 0,
                start: Coordinate::new(0, 0),
                waypoints: vec![Coordinate::new(80, 0), Coordinate::new(0, 0)],
                speed: 5,
            }],
            spread_probability: 0.0,
            growth_rate: 0.2,
            extinguish_rate: 1.0,
            extinguish_radius: 10.0,
            sensing_radius: 30.0,
            seed: 1,
            total_cycles: 50,
        }
    }

    #[test]
    fn no_ignitions_means_brigade_observations_only() {
        let ontology = Ontology::default_rcr();
        let mut world = World::new(base_spec()).unwrap();
        for cycle in 0..10 {
            let observations = world.tick(cycle, &ontology).unwrap();
            assert_eq!(observations.len(), 1);
            assert!(observations[0].object_id.starts_with("brigade#"));
        }
    }

    #[test]
    fn adjacent_brigade_extinguishes_immediately() {
        // One ignition next to a parked brigade with overwhelming extinguish
        // rate: the fire emits exactly one observation, already extinguished.
        let ontology = Ontology::default_rcr();
        let mut spec = base_spec();
        spec.ignitions = vec![IgnitionSpec {
            building: 0,
            cycle: 2,
        }];
        spec.brigades[0].waypoints = vec![];
        spec.brigades[0].start = Coordinate::new(5, 0);
        spec.extinguish_rate = 3.0;
        let mut world = World::new(spec).unwrap();

        let mut fire_observations = Vec::new();
        for cycle in 0..10 {
            for fsf in world.tick(cycle, &ontology).unwrap() {
                if fsf.object_id == "fire#0" {
                    fire_observations.push((cycle, fsf));
                }
            }
        }
        assert_eq!(fire_observations.len(), 1);
        let (cycle, fsf) = &fire_observations[0];
        assert_eq!(*cycle, 2);
        assert_eq!(fsf.qualifier_number("fieriness"), Some(8.0));
    }

    #[test]
    fn slow_extinguishing_emits_burning_then_extinguished() {
        let ontology = Ontology::default_rcr();
        let mut spec = base_spec();
        spec.ignitions = vec![IgnitionSpec {
            building: 0,
            cycle: 0,
        }];
        spec.brigades[0].waypoints = vec![];
        spec.brigades[0].start = Coordinate::new(5, 0);
        spec.extinguish_rate = 0.45;
        let mut world = World::new(spec).unwrap();

        let mut series = Vec::new();
        for cycle in 0..10 {
            for fsf in world.tick(cycle, &ontology).unwrap() {
                if fsf.object_id == "fire#0" {
                    series.push(fsf.qualifier_number("fieriness").unwrap());
                }
            }
        }
        // Hand-simulated: intensity 1.0 - 0.45 = 0.55 (cycle 0, emits 1),
        // then +0.2 growth -0.45 = 0.30 (cycle 1, emits 1),
        // then 0.30 + 0.2 - 0.45 = 0.05 (cycle 2, emits 1),
        // then 0.05 + 0.2 - 0.45 < 0 (cycle 3, extinguished, emits 8).
        assert_eq!(series, vec![1.0, 1.0, 1.0, 8.0]);
    }

    #[test]
    fn fixed_seed_reproduces_the_stream() {
        let ontology = Ontology::default_rcr();
        let mut spec = base_spec();
        spec.spread_probability = 0.4;
        spec.ignitions = vec![IgnitionSpec {
            building: 12,
            cycle: 0,
        }];
        spec.sensing_radius = 1000.0;
        let run = |spec: WorldSpec| {
            let mut world = World::new(spec).unwrap();
            let mut lines = Vec::new();
            for cycle in 0..30 {
                for fsf in world.tick(cycle, &ontology).unwrap() {
                    lines.push(crate::fsf::serialize_fsf(&fsf));
                }
            }
            lines
        };
        assert_eq!(run(spec.clone()), run(spec));
    }

    #[test]
    fn emitted_neighbour_counts_match_the_grid_truth() {
        let ontology = Ontology::default_rcr();
        let mut spec = base_spec();
        spec.spread_probability = 0.5;
        spec.sensing_radius = 1000.0;
        spec.ignitions = vec![
            IgnitionSpec {
                building: 6,
                cycle: 0,
            },
            IgnitionSpec {
                building: 18,
                cycle: 1,
            },
        ];
        let mut world = World::new(spec).unwrap();
        for cycle in 0..20 {
            let observations = world.tick(cycle, &ontology).unwrap();
            for fsf in &observations {
                if let Some(id) = fsf.object_id.strip_prefix("fire#") {
                    let building: u32 = id.parse().unwrap();
                    assert_eq!(
                        fsf.qualifier_number("burningNeighbours").unwrap(),
                        f64::from(world.burning_neighbours(building)),
                        "cycle {cycle} building {building}"
                    );
                }
            }
        }
    }

    #[test]
    fn every_emitted_observation_parses_and_classifies() {
        let ontology = Ontology::default_rcr();
        let mut spec = base_spec();
        spec.spread_probability = 0.3;
        spec.sensing_radius = 1000.0;
        spec.ignitions = vec![IgnitionSpec {
            building: 12,
            cycle: 0,
        }];
        let mut world = World::new(spec).unwrap();
        for cycle in 0..25 {
            for fsf in world.tick(cycle, &ontology).unwrap() {
                let text = crate::fsf::serialize_fsf(&fsf);
                let reparsed = crate::fsf::parse_fsf(&text, &ontology).unwrap();
                assert_eq!(reparsed, fsf);
            }
        }
    }

    #[test]
    fn rejects_bad_specs() {
        let mut spec = base_spec();
        spec.spread_probability = 1.5;
        assert!(World::new(spec).is_err());

        let mut spec = base_spec();
        spec.ignitions = vec![IgnitionSpec {
            building: 999,
            cycle: 0,
        }];
        assert!(World::new(spec).is_err());

        let mut spec = base_spec();
        spec.ignitions = vec![IgnitionSpec {
            building: 0,
            cycle: 60,
        }];
        assert!(World::new(spec).is_err());
    }
}
