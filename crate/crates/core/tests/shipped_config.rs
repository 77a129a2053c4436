//! The files under `config/` must stay interchangeable with the compiled-in
//! defaults.

use std::path::{Path, PathBuf};

use sitrep_core::atn::{default_brigade_atn, default_fire_atn, parse_atn, IndicatorThresholds};
use sitrep_core::config::load_engine_setup;
use sitrep_core::ontology::{Ontology, DEFAULT_ONTOLOGY_TOML};
use sitrep_core::runner::EngineSetup;
use sitrep_core::scenario::{build_paperlike_scenario, parse_fsf_trace, WorldSpec};

fn config_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../config")
}

fn read(name: &str) -> String {
    let path = config_dir().join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("read {path:?}: {e}"))
}

#[test]
fn shipped_ontology_is_the_built_in_one() {
    assert_eq!(read("ontology.toml"), DEFAULT_ONTOLOGY_TOML);
    Ontology::from_toml(&read("ontology.toml")).unwrap();
}

#[test]
fn shipped_fire_atn_matches_the_default() {
    let shipped = parse_atn(&read("fire.atn")).unwrap();
    let built_in = default_fire_atn(&IndicatorThresholds::default());
    assert_eq!(shipped, built_in);
    assert_eq!(shipped.states().len(), 4);
}

#[test]
fn shipped_brigade_atn_matches_the_default() {
    let shipped = parse_atn(&read("brigade.atn")).unwrap();
    let built_in = default_brigade_atn(&IndicatorThresholds::default());
    assert_eq!(shipped, built_in);
    assert_eq!(shipped.states().len(), 4);
}

#[test]
fn shipped_engine_config_reproduces_the_defaults() {
    let path = config_dir().join("engine.toml");
    let loaded = load_engine_setup(Some(&path)).unwrap();
    let defaults = EngineSetup::default();
    assert_eq!(
        serde_json::to_string(&loaded.config).unwrap(),
        serde_json::to_string(&defaults.config).unwrap()
    );
    assert_eq!(loaded.fire_atn, defaults.fire_atn);
    assert_eq!(loaded.brigade_atn, defaults.brigade_atn);
}

#[test]
fn shipped_world_matches_the_reference_scenario() {
    let world = WorldSpec::from_toml(&read("world.toml")).unwrap();
    assert_eq!(world, build_paperlike_scenario().world);
}

#[test]
fn shipped_trace_matches_the_reference_scenario() {
    let ontology = Ontology::default_rcr();
    let shipped = parse_fsf_trace(&read("paper_trace.fsf"), &ontology).unwrap();
    assert_eq!(shipped, build_paperlike_scenario().trace);
}
