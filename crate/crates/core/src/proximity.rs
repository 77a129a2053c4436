//! Semantic, temporal and spatial proximities between observations, and their
//! product.
//!
//! Temporal and spatial proximities share one bell-shaped form in (0, 1]:
//!
//! ```text
//! P(d) = 4 exp(-c d) / (1 + exp(-c d))^2        c = 0.2 (time), 0.08 (space)
//! ```
//!
//! equal to 1 at d = 0 and strictly decreasing. The semantic proximity comes
//! from the ontology similarity table scaled by qualifier agreement; its sign
//! is the only possible source of a negative total.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fsf::Fsf;
use crate::ontology::Ontology;

/// Published decay coefficient for the temporal proximity (per cycle).
pub const TEMPORAL_COEFFICIENT: f64 = 0.2;
/// Published decay coefficient for the spatial proximity (per world unit).
pub const SPATIAL_COEFFICIENT: f64 = 0.08;

#[derive(Debug, Error, PartialEq)]
pub enum ProximityError {
    #[error("non-finite proximity input: {0}")]
    NonFiniteInput(f64),
}

/// Tunable constants of the calculus. Defaults are the published values.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ProximityParams {
    /// Decay per cycle of time difference.
    pub temporal_coefficient: f64,
    /// Decay per world unit of distance.
    pub spatial_coefficient: f64,
    /// Weight of the class similarity versus qualifier agreement in the
    /// semantic proximity: `P_s = S * (w + (1 - w) * J)`.
    pub qualifier_weight: f64,
}

impl Default for ProximityParams {
    fn default() -> Self {
        ProximityParams {
            temporal_coefficient: TEMPORAL_COEFFICIENT,
            spatial_coefficient: SPATIAL_COEFFICIENT,
            qualifier_weight: 0.5,
        }
    }
}

/// Per-component view of one total proximity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProximityBreakdown {
    pub semantic: f64,
    pub temporal: f64,
    pub spatial: f64,
    pub total: f64,
}

fn bell(delta: f64, coefficient: f64) -> Result<f64, ProximityError> {
    if !delta.is_finite() {
        return Err(ProximityError::NonFiniteInput(delta));
    }
    let e = (-coefficient * delta.abs()).exp();
    let denom = (1.0 + e) * (1.0 + e);
    Ok(4.0 * e / denom)
}

/// Temporal proximity of a time difference in cycles, with a custom decay.
pub fn temporal_proximity_with(delta_t: f64, coefficient: f64) -> Result<f64, ProximityError> {
    bell(delta_t, coefficient)
}

/// Temporal proximity with the published 0.2 decay.
pub fn temporal_proximity(delta_t: f64) -> Result<f64, ProximityError> {
    temporal_proximity_with(delta_t, TEMPORAL_COEFFICIENT)
}

/// Spatial proximity of a Euclidean distance in world units, custom decay.
pub fn spatial_proximity_with(delta_e: f64, coefficient: f64) -> Result<f64, ProximityError> {
    bell(delta_e, coefficient)
}

/// Spatial proximity with the published 0.08 decay.
pub fn spatial_proximity(delta_e: f64) -> Result<f64, ProximityError> {
    spatial_proximity_with(delta_e, SPATIAL_COEFFICIENT)
}

/// Semantic proximity of two observations under an ontology.
///
/// Two observations of the same object are fully connected (1). Otherwise the
/// class-pair similarity `S` is scaled by qualifier agreement:
/// `P_s = S * (w + (1 - w) * J)` where `J` is the fraction of qualifier names
/// present in both observations whose values are equal, and `J = 1` when they
/// share no qualifier names.
pub fn semantic_proximity(a: &Fsf, b: &Fsf, ontology: &Ontology, params: &ProximityParams) -> f64 {
    if a.object_id == b.object_id {
        return 1.0;
    }
    let similarity = ontology.pair_similarity(&a.class.leaf, &b.class.leaf);
    let agreement = qualifier_agreement(a, b);
    let w = params.qualifier_weight;
    similarity * (w + (1.0 - w) * agreement)
}

/// Fraction of shared qualifier names carrying equal values; 1 when no
/// qualifier name appears in both observations.
pub fn qualifier_agreement(a: &Fsf, b: &Fsf) -> f64 {
    let mut shared = 0u32;
    let mut equal = 0u32;
    for qa in &a.qualifiers {
        if let Some(vb) = b.qualifier(&qa.name) {
            shared += 1;
            if *vb == qa.value {
                equal += 1;
            }
        }
    }
    if shared == 0 {
        1.0
    } else {
        f64::from(equal) / f64::from(shared)
    }
}

/// Total proximity: the product of the three components.
pub fn total_proximity(
    a: &Fsf,
    b: &Fsf,
    ontology: &Ontology,
    params: &ProximityParams,
) -> Result<ProximityBreakdown, ProximityError> {
    let semantic = semantic_proximity(a, b, ontology, params);
    let delta_t = if a.time >= b.time {
        (a.time - b.time) as f64
    } else {
        (b.time - a.time) as f64
    };
    let temporal = temporal_proximity_with(delta_t, params.temporal_coefficient)?;
    let spatial = spatial_proximity_with(
        a.location.distance(&b.location),
        params.spatial_coefficient,
    )?;
    Ok(ProximityBreakdown {
        semantic,
        temporal,
        spatial,
        total: semantic * temporal * spatial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsf::{parse_fsf, Coordinate, Fsf, QualifierValue, Value};
    use crate::ontology::{Ontology, OntologyConfig};

    /// Independent algebraic form: 4e^{-cd}/(1+e^{-cd})^2 = sech^2(cd/2).
    fn sech_squared(x: f64) -> f64 {
        let s = 1.0 / x.cosh();
        s * s
    }

    fn fire(id: &str, quals: Vec<QualifierValue>, x: i64, y: i64, t: u64) -> Fsf {
        Fsf::new(id, quals, Coordinate::new(x, y), t, &Ontology::default_rcr()).unwrap()
    }

    #[test]
    fn temporal_matches_frozen_values() {
        assert_eq!(temporal_proximity(0.0).unwrap(), 1.0);
        assert!((temporal_proximity(5.0).unwrap() - 0.786448).abs() < 1e-5);
        assert!((temporal_proximity(10.0).unwrap() - 0.419974).abs() < 1e-5);
    }

    #[test]
    fn spatial_matches_frozen_values() {
        assert_eq!(spatial_proximity(0.0).unwrap(), 1.0);
        assert!((spatial_proximity(25.0).unwrap() - 0.419974).abs() < 1e-5);
        // 0.08 * 25 = 0.2 * 10, so the two formulas meet here.
        assert_eq!(
            spatial_proximity(25.0).unwrap(),
            temporal_proximity(10.0).unwrap()
        );
    }

    #[test]
    fn bell_equals_sech_squared_oracle() {
        for i in 0..2000 {
            let d = i as f64 * 0.05;
            let p = temporal_proximity(d).unwrap();
            assert!((p - sech_squared(0.1 * d)).abs() < 1e-12, "dt = {d}");
            let p = spatial_proximity(d).unwrap();
            assert!((p - sech_squared(0.04 * d)).abs() < 1e-12, "de = {d}");
        }
    }

    #[test]
    fn bell_is_strictly_decreasing_and_bounded() {
        let mut prev = temporal_proximity(0.0).unwrap();
        assert_eq!(prev, 1.0);
        for i in 1..=1000 {
            let d = i as f64 * 0.25;
            let p = temporal_proximity(d).unwrap();
            assert!(p > 0.0 && p < prev, "not strictly decreasing at {d}");
            prev = p;
        }
    }

    #[test]
    fn negative_deltas_are_absolute_valued() {
        assert_eq!(
            temporal_proximity(-5.0).unwrap(),
            temporal_proximity(5.0).unwrap()
        );
    }

    #[test]
    fn non_finite_input_is_an_error() {
        assert!(matches!(
            temporal_proximity(f64::NAN),
            Err(ProximityError::NonFiniteInput(_))
        ));
        assert!(matches!(
            spatial_proximity(f64::INFINITY),
            Err(ProximityError::NonFiniteInput(_))
        ));
    }

    #[test]
    fn same_object_semantic_is_one() {
        let ontology = Ontology::default_rcr();
        let params = ProximityParams::default();
        let a = fire(
            "fire#14",
            vec![QualifierValue::new("fieriness", Value::Integer(1))],
            20,
            25,
            7,
        );
        let b = fire(
            "fire#14",
            vec![QualifierValue::new("fieriness", Value::Integer(3))],
            20,
            25,
            9,
        );
        assert_eq!(semantic_proximity(&a, &b, &ontology, &params), 1.0);
    }

    #[test]
    fn distinct_fires_use_the_default_table() {
        // Default table: Fire-Fire distinct-object similarity 0.5; FSFs share
        // no qualifier names, so the agreement factor is 1.
        let ontology = Ontology::default_rcr();
        let params = ProximityParams::default();
        let a = fire("fire#14", vec![], 20, 25, 7);
        let b = fire("fire#15", vec![], 20, 25, 7);
        assert_eq!(semantic_proximity(&a, &b, &ontology, &params), 0.5);
    }

    #[test]
    fn cross_class_semantic_matches_straight_line_oracle() {
        // Test-local table with (Fire, FireBrigade) = 0.8; verify against a
        // direct reimplementation of the documented formula.
        let config: OntologyConfig = toml::from_str(
            r#"
            [[classes]]
            name = "Fire"
            parent = "Phenomenon"
            prefixes = ["fire"]
            qualifiers = ["fieriness", "heat"]

            [[classes]]
            name = "FireBrigade"
            parent = "Actor"
            prefixes = ["brigade"]
            qualifiers = ["fieriness", "heat"]

            [[similarity.entries]]
            classes = ["Fire", "FireBrigade"]
            value = 0.8
            "#,
        )
        .unwrap();
        let ontology = Ontology::from_config(&config).unwrap();
        let params = ProximityParams::default();

        let cases: Vec<(Vec<QualifierValue>, Vec<QualifierValue>)> = vec![
            (vec![], vec![]),
            (
                vec![QualifierValue::new("fieriness", Value::Integer(1))],
                vec![QualifierValue::new("fieriness", Value::Integer(1))],
            ),
            (
                vec![QualifierValue::new("fieriness", Value::Integer(1))],
                vec![QualifierValue::new("fieriness", Value::Integer(2))],
            ),
            (
                vec![
                    QualifierValue::new("fieriness", Value::Integer(2)),
                    QualifierValue::new("heat", Value::Integer(9)),
                ],
                vec![
                    QualifierValue::new("fieriness", Value::Integer(2)),
                    QualifierValue::new("heat", Value::Integer(4)),
                ],
            ),
        ];
        for (qa, qb) in cases {
            let a = Fsf::new("fire#14", qa, Coordinate::new(0, 0), 0, &ontology).unwrap();
            let b = Fsf::new("brigade#3", qb, Coordinate::new(0, 0), 0, &ontology).unwrap();

            // Oracle: straight-line evaluation of the definition.
            let mut shared = 0.0;
            let mut equal = 0.0;
            for q in &a.qualifiers {
                if let Some(v) = b.qualifier(&q.name) {
                    shared += 1.0;
                    if *v == q.value {
                        equal += 1.0;
                    }
                }
            }
            let agreement = if shared == 0.0 { 1.0 } else { equal / shared };
            let expected = 0.8 * (0.5 + 0.5 * agreement);

            let got = semantic_proximity(&a, &b, &ontology, &params);
            assert!((got - expected).abs() < 1e-15);
            assert_eq!(got, semantic_proximity(&b, &a, &ontology, &params));
        }
    }

    #[test]
    fn identical_fsfs_have_identity_breakdown() {
        let ontology = Ontology::default_rcr();
        let params = ProximityParams::default();
        let a = fire("fire#14", vec![], 20, 25, 7);
        let b = total_proximity(&a, &a, &ontology, &params).unwrap();
        assert_eq!(
            b,
            ProximityBreakdown {
                semantic: 1.0,
                temporal: 1.0,
                spatial: 1.0,
                total: 1.0
            }
        );
    }

    #[test]
    fn same_object_over_time_decays_temporally_only() {
        let ontology = Ontology::default_rcr();
        let params = ProximityParams::default();
        let a = fire("fire#14", vec![], 20, 25, 7);
        let b = fire("fire#14", vec![], 20, 25, 12);
        let breakdown = total_proximity(&a, &b, &ontology, &params).unwrap();
        assert_eq!(breakdown.semantic, 1.0);
        assert_eq!(breakdown.spatial, 1.0);
        assert!((breakdown.total - 0.786448).abs() < 1e-5);
    }

    #[test]
    fn total_is_bounded_by_components() {
        let ontology = Ontology::default_rcr();
        let params = ProximityParams::default();
        let paper = parse_fsf(
            "(fire#14, fieriness, 1, inDangerNeighbours, 3, burningNeighbours, 2, localisation, 20|25, time, 7)",
            &ontology,
        )
        .unwrap();
        let other = fire("fire#2", vec![], -10, 4, 31);
        let b = total_proximity(&paper, &other, &ontology, &params).unwrap();
        assert!(b.total.abs() <= b.temporal.min(b.spatial) + 1e-15);
        assert!((-1.0..=1.0).contains(&b.total));
        assert!((b.total - b.semantic * b.temporal * b.spatial).abs() < 1e-12);
    }

    #[test]
    fn symmetry_holds_componentwise() {
        let ontology = Ontology::default_rcr();
        let params = ProximityParams::default();
        let a = fire(
            "fire#8",
            vec![QualifierValue::new("fieriness", Value::Integer(2))],
            3,
            -9,
            4,
        );
        let b = Fsf::new(
            "brigade#1",
            vec![QualifierValue::new("extinguishing", Value::Integer(1))],
            Coordinate::new(40, 2),
            19,
            &Ontology::default_rcr(),
        )
        .unwrap();
        let ab = total_proximity(&a, &b, &ontology, &params).unwrap();
        let ba = total_proximity(&b, &a, &ontology, &params).unwrap();
        assert_eq!(ab, ba);
    }
}
