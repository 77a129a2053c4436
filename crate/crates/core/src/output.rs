//! Run outputs: per-cycle agent rows, per-cycle activity counts and optional
//! snapshot lines. Numeric columns use fixed 6-decimal formatting so
//! identical runs produce identical bytes.

use crate::mas::{ActivityKind, ActivityRecord, RepresentationMas};

pub const AGENTS_CSV_HEADER: &str = "cycle,agent_id,kind,class,state,ai,pi,lifetime";
pub const ACTIVITIES_CSV_HEADER: &str = "cycle,state_changes,indicator_changes,total";

/// Finished textual outputs of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutputs {
    pub agents_csv: String,
    pub activities_csv: String,
    /// One snapshot JSON object per cycle; empty when snapshots are off.
    pub snapshots_jsonl: Option<String>,
}

/// Accumulates output rows cycle by cycle.
#[derive(Debug)]
pub struct OutputCollector {
    agents: String,
    activities: String,
    snapshots: Option<String>,
}

impl OutputCollector {
    pub fn new(with_snapshots: bool) -> OutputCollector {
        OutputCollector {
            agents: format!("{AGENTS_CSV_HEADER}\n"),
            activities: format!("{ACTIVITIES_CSV_HEADER}\n"),
            snapshots: with_snapshots.then(String::new),
        }
    }

    /// Record the cycle that just completed. Agents that died in an earlier
    /// cycle are omitted; an agent's dying cycle still gets its terminal row.
    pub fn record_cycle(
        &mut self,
        cycle: u64,
        mas: &RepresentationMas,
        records: &[ActivityRecord],
    ) {
        for agent in mas.agents() {
            if matches!(agent.died_cycle, Some(died) if died < cycle) {
                continue;
            }
            let fsf = agent.current_fsf();
            self.agents.push_str(&format!(
                "{},{},{},{},{},{:.6},{:.6},{}\n",
                cycle,
                agent.id,
                agent.kind.name(),
                fsf.class.leaf,
                agent.atn_state,
                agent.ai,
                agent.pi,
                agent.life_time(cycle),
            ));
        }

        let state_changes = records
            .iter()
            .filter(|r| r.kind == ActivityKind::StateChange)
            .count();
        let indicator_changes = records
            .iter()
            .filter(|r| r.kind == ActivityKind::IndicatorChange)
            .count();
        self.activities.push_str(&format!(
            "{},{},{},{}\n",
            cycle,
            state_changes,
            indicator_changes,
            state_changes + indicator_changes
        ));

        if let Some(snapshots) = &mut self.snapshots {
            let line = serde_json::to_string(&mas.snapshot())
                .expect("snapshot serializes to JSON");
            snapshots.push_str(&line);
            snapshots.push('\n');
        }
    }

    pub fn finish(self) -> RunOutputs {
        RunOutputs {
            agents_csv: self.agents,
            activities_csv: self.activities,
            snapshots_jsonl: self.snapshots,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsf::{Coordinate, Fsf, QualifierValue, Value};
    use crate::ontology::Ontology;

    #[test]
    fn zero_cycles_is_headers_only() {
        let collector = OutputCollector::new(true);
        let outputs = collector.finish();
        assert_eq!(outputs.agents_csv, format!("{AGENTS_CSV_HEADER}\n"));
        assert_eq!(outputs.activities_csv, format!("{ACTIVITIES_CSV_HEADER}\n"));
        assert_eq!(outputs.snapshots_jsonl.as_deref(), Some(""));
    }

    #[test]
    fn rows_use_six_decimals() {
        let mut mas = RepresentationMas::with_defaults();
        let fsf = Fsf::new(
            "fire#1",
            vec![
                QualifierValue::new("fieriness", Value::Integer(1)),
                QualifierValue::new("burningNeighbours", Value::Integer(2)),
            ],
            Coordinate::new(0, 0),
            0,
            &Ontology::default_rcr(),
        )
        .unwrap();
        let records = mas.run_cycle(vec![fsf]).unwrap();
        let mut collector = OutputCollector::new(false);
        collector.record_cycle(0, &mas, &records);
        let outputs = collector.finish();
        // x = 2 + 1 + 0 = 3: PI = 10 exp(-0.15) = 8.607080 to six decimals.
        assert!(outputs
            .agents_csv
            .contains("0,0,phenomenon,Fire,2,0.000000,8.607080,0"));
        assert_eq!(outputs.activities_csv.lines().nth(1), Some("0,1,1,2"));
    }
}
