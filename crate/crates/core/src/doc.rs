//! JSON documents for spaces, ensembles and measurements.
//!
//! Floats are written with serde_json's shortest round-trip representation, so
//! every emitted document parses back to the identical values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gpt::{Effect, Measurement, StateEnsemble, StateSpace};
use crate::settings::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub name: String,
    pub ambient_dim: usize,
    pub unit_effect: Vec<f64>,
    pub vertices: Vec<Vec<f64>>,
}

impl SpaceDoc {
    pub fn from_space(space: &StateSpace) -> Self {
        SpaceDoc {
            name: space.name().to_string(),
            ambient_dim: space.ambient_dim(),
            unit_effect: space.unit_effect().to_vec(),
            vertices: space.vertices().to_vec(),
        }
    }

    /// Shape checks plus the full geometric validation.
    pub fn into_space(self, tol: &Tolerances) -> Result<StateSpace> {
        if self.ambient_dim != self.unit_effect.len() {
            return Err(Error::input(format!(
                "ambient_dim is {} but unit_effect has {} entries",
                self.ambient_dim,
                self.unit_effect.len()
            )));
        }
        StateSpace::new_validated(self.name, self.unit_effect, self.vertices, tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EnsembleDoc {
    States {
        space: String,
        states: Vec<Vec<f64>>,
    },
    Mixtures {
        space: String,
        mixtures: Vec<Vec<f64>>,
    },
}

impl EnsembleDoc {
    pub fn from_ensemble(ensemble: &StateEnsemble) -> Self {
        EnsembleDoc::States {
            space: ensemble.space_name().to_string(),
            states: ensemble.states().to_vec(),
        }
    }

    pub fn space(&self) -> &str {
        match self {
            EnsembleDoc::States { space, .. } | EnsembleDoc::Mixtures { space, .. } => space,
        }
    }

    /// Mixtures are canonicalised to coordinates. The `space` field is informational.
    pub fn into_ensemble(self, space: &StateSpace, tol: &Tolerances) -> Result<StateEnsemble> {
        match self {
            EnsembleDoc::States { states, .. } => StateEnsemble::from_states(space, states, tol),
            EnsembleDoc::Mixtures { mixtures, .. } => {
                StateEnsemble::from_mixtures(space, &mixtures, tol)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementDoc {
    pub space: String,
    pub effects: Vec<Vec<f64>>,
}

impl MeasurementDoc {
    pub fn from_measurement(space_name: &str, m: &Measurement) -> Self {
        MeasurementDoc {
            space: space_name.to_string(),
            effects: m.effects().iter().map(|e| e.0.clone()).collect(),
        }
    }

    pub fn into_measurement(self, space: &StateSpace, tol: &Tolerances) -> Result<Measurement> {
        Measurement::new(space, self.effects.into_iter().map(Effect).collect(), tol)
    }
}

pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed document: {e}")))
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents always serialize")
}

pub fn parse_space(text: &str, tol: &Tolerances) -> Result<StateSpace> {
    parse::<SpaceDoc>(text)?.into_space(tol)
}

pub fn space_to_json(space: &StateSpace) -> String {
    to_json(&SpaceDoc::from_space(space))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{classical_simplex, polygon};

    #[test]
    fn space_round_trip() {
        let tol = Tolerances::default();
        let p = polygon(7).unwrap();
        let text = space_to_json(&p);
        let back = parse_space(&text, &tol).unwrap();
        assert_eq!(back, p);
        assert_eq!(space_to_json(&back), text);
    }

    #[test]
    fn rejects_bad_spaces() {
        let tol = Tolerances::default();
        let bad_dim =
            r#"{"name":"x","ambient_dim":3,"unit_effect":[1,1],"vertices":[[1,0],[0,1]]}"#;
        assert!(matches!(parse_space(bad_dim, &tol), Err(Error::Input(_))));
        let midpoint = r#"{"name":"x","ambient_dim":2,"unit_effect":[1,1],
            "vertices":[[1,0],[0,1],[0.5,0.5]]}"#;
        assert!(matches!(parse_space(midpoint, &tol), Err(Error::Input(_))));
        assert!(matches!(parse_space("{", &tol), Err(Error::Input(_))));
    }

    #[test]
    fn ensembles_both_forms() {
        let tol = Tolerances::default();
        let s = classical_simplex(3).unwrap();
        let mix: EnsembleDoc =
            parse(r#"{"space":"classical:3","mixtures":[[1,0,0],[0,0.5,0.5]]}"#).unwrap();
        assert!(matches!(mix, EnsembleDoc::Mixtures { .. }));
        let e = mix.into_ensemble(&s, &tol).unwrap();
        assert_eq!(e.states()[1], vec![0.0, 0.5, 0.5]);
        let text = to_json(&EnsembleDoc::from_ensemble(&e));
        let back = parse::<EnsembleDoc>(&text)
            .unwrap()
            .into_ensemble(&s, &tol)
            .unwrap();
        assert_eq!(back.states(), e.states());
    }

    #[test]
    fn measurement_round_trip() {
        let tol = Tolerances::default();
        let s = classical_simplex(2).unwrap();
        let doc: MeasurementDoc =
            parse(r#"{"space":"classical:2","effects":[[1,0],[0,1]]}"#).unwrap();
        let m = doc.clone().into_measurement(&s, &tol).unwrap();
        assert_eq!(MeasurementDoc::from_measurement("classical:2", &m), doc);
        let bad: MeasurementDoc =
            parse(r#"{"space":"classical:2","effects":[[1,0],[0,0.5]]}"#).unwrap();
        assert!(bad.into_measurement(&s, &tol).is_err());
    }
}
