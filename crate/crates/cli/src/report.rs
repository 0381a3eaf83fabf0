//! JSON report schema.

use serde::{Deserialize, Serialize};

use dismantle::classify::{Computed, GroupProfile, Membership, Prediction};
use dismantle::lattice::{validate_crown, Lattice, LatticeLaws};
use dismantle::{Error, Result};

pub const SCHEMA: u32 = 1;

/// Witness nodes rendered as subgroup labels `order:<generators>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// Subgroups in elimination order.
    Elimination { order: Vec<String> },
    Crown { xs: Vec<String>, ys: Vec<String> },
    /// Greedy dismantling stopped here and no crown was found within bounds.
    Stuck { residue: Vec<String>, note: String },
}

impl Witness {
    /// Renders a computed verdict. Crowns are re-validated first.
    pub fn from_computed(lat: &Lattice, computed: &Computed) -> Result<Self> {
        let names = |nodes: &[usize]| nodes.iter().map(|&v| lat.label(v).to_string()).collect::<Vec<_>>();
        Ok(match computed {
            Computed::InD { witness } => Witness::Elimination {
                order: names(&witness.elimination),
            },
            Computed::NotInD { obstruction } => match &obstruction.crown {
                Some(c) => {
                    if !validate_crown(lat, c) {
                        return Err(Error::Mismatch("crown failed validation".into()));
                    }
                    Witness::Crown {
                        xs: names(&c.xs),
                        ys: names(&c.ys),
                    }
                }
                None => Witness::Stuck {
                    residue: names(&obstruction.residue),
                    note: "no witness under bound".into(),
                },
            },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub group_ms: f64,
    pub lattice_ms: f64,
    pub verdict_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub spec: String,
    pub order: usize,
    pub subgroups: usize,
    pub profile: GroupProfile,
    pub predicted: Prediction,
    pub computed: Membership,
    /// The prediction is unknown or equals the computed verdict.
    pub agrees: bool,
    pub witness: Witness,
    /// Present for lattices small enough to check.
    pub laws: Option<LatticeLaws>,
    /// Coatoms of a Boolean cube, for lattices that are not dismantlable.
    pub boolean_cube: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub ambient: String,
    /// Generators of the class representative.
    pub representative: String,
    pub order: usize,
    pub class_size: usize,
    pub computed_in_d: bool,
    pub is_metacyclic: bool,
    pub predicted: Prediction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Survey {
    pub schema: u32,
    pub ambient: String,
    pub note: String,
    pub rows: Vec<SurveyRow>,
    /// Some row is in the class but not metacyclic.
    pub counterexample: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteRow {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Suite {
    pub schema: u32,
    pub rows: Vec<SuiteRow>,
}

impl Suite {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dismantle::classify::Rule;
    use dismantle::group::{build_group, parse_spec};
    use dismantle::{build_lattice, profile};

    fn sample() -> Report {
        let g = build_group(&parse_spec("Q:8").unwrap()).unwrap();
        let lat = build_lattice(&g).unwrap();
        Report {
            schema: SCHEMA,
            spec: "Q:8".into(),
            order: 8,
            subgroups: lat.len(),
            profile: profile(&g, &lat).unwrap(),
            predicted: Prediction {
                verdict: Membership::InD,
                rule: Some(Rule::Hamiltonian),
            },
            computed: Membership::InD,
            agrees: true,
            witness: Witness::Elimination { order: vec!["1:<1>".into()] },
            laws: Some(LatticeLaws { modular: true, distributive: false }),
            boolean_cube: None,
            timings: Some(Timings { group_ms: 0.1, lattice_ms: 1.0 / 3.0, verdict_ms: 2.5e-3 }),
        }
    }

    #[test]
    fn report_round_trips() {
        let r = sample();
        let text = serde_json::to_string_pretty(&r).unwrap();
        assert!(text.contains("\"schema\": 1"));
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn timings_are_optional() {
        let mut r = sample();
        r.timings = None;
        let text = serde_json::to_string(&r).unwrap();
        assert!(!text.contains("timings"));
        assert_eq!(serde_json::from_str::<Report>(&text).unwrap(), r);
    }

    #[test]
    fn witness_tags() {
        let w = Witness::Crown { xs: vec!["a".into()], ys: vec!["b".into()] };
        assert_eq!(serde_json::to_string(&w).unwrap(), r#"{"kind":"crown","xs":["a"],"ys":["b"]}"#);
    }
}
