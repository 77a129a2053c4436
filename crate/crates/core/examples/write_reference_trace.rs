//! Regenerates `config/paper_trace.fsf` from the built-in reference scenario.
//!
//! Run from the workspace root:
//!
//! ```text
//! cargo run -p sitrep-core --example write_reference_trace
//! ```

use sitrep_core::scenario::build_paperlike_scenario;

fn main() {
    let scenario = build_paperlike_scenario();
    let path = "config/paper_trace.fsf";
    let header = "# Reference replay trace: sixty cycles of brigade and fire observations.\n# Regenerate with: cargo run -p sitrep-core --example write_reference_trace\n";
    let body = scenario.trace.to_fsf_text();
    std::fs::write(path, format!("{header}{body}")).expect("write trace");
    println!(
        "wrote {path}: {} observations over {} cycles",
        scenario.trace.total_observations(),
        scenario.total_cycles
    );
}
