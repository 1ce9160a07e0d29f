//! JSON task files and reports: the wire format of the batch front end.
//!
//! Rationals travel as strings "a/b"; ring elements as expression strings
//! over the coefficient algebra's variables; matrices as arrays of such
//! strings. Reports keep insertion order so byte-identical output follows
//! from identical inputs and seeds.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coeff::artinian::Artinian;
use crate::error::{Error, Result};
use crate::expr::parse_mpoly;
use crate::field::Rationals;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskFile {
    pub version: String,
    pub kind: TaskKind,
    pub payload: serde_json::Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum TaskKind {
    #[serde(rename = "pseudochar-check")]
    PseudocharCheck,
    #[serde(rename = "gma-analyze")]
    GmaAnalyze,
    #[serde(rename = "nilpotent")]
    Nilpotent,
    #[serde(rename = "refine")]
    Refine,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseFieldDesc {
    Named(String),
    Fp { #[serde(rename = "Fp")] p: u64 },
}

/// {"base": "Q"|{"Fp": p}, "vars": [...], "relations": [...],
/// "truncation": N}
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraDesc {
    pub base: BaseFieldDesc,
    #[serde(default)]
    pub vars: Vec<String>,
    #[serde(default)]
    pub relations: Vec<String>,
    pub truncation: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupDesc {
    /// 1-based permutation images.
    #[serde(rename = "permGenerators")]
    pub perm_generators: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PseudocharPayload {
    #[serde(default)]
    pub group: Option<GroupDesc>,
    /// {"size": n}: the full matrix algebra M_n over the rationals.
    #[serde(default)]
    pub matrices: Option<MatrixAlgebraDesc>,
    #[serde(rename = "T")]
    pub t: TValues,
    pub d: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixAlgebraDesc {
    pub size: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TValues {
    /// One rational per algebra basis element; for matrix algebras the
    /// trace may be requested with "trace": true instead.
    #[serde(default, rename = "basisValues")]
    pub basis_values: Option<Vec<String>>,
    #[serde(default)]
    pub trace: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GmaPayload {
    pub coeff: AlgebraDesc,
    #[serde(rename = "type")]
    pub block_sizes: Vec<usize>,
    /// "i,j" (1-based) -> {"ideal": [generator expressions]}.
    pub modules: BTreeMap<String, ModuleDesc>,
    /// "i,j,k" (1-based) -> generator-pair value table.
    #[serde(default)]
    pub phi: BTreeMap<String, Vec<Vec<String>>>,
    /// Partitions to analyze (1-based block lists); default: the total
    /// partition.
    #[serde(default)]
    pub partitions: Vec<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleDesc {
    pub ideal: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "op")]
pub enum NilpotentPayload {
    #[serde(rename = "jordan-type")]
    JordanType { matrix: Vec<Vec<String>> },
    #[serde(rename = "dominance")]
    Dominance { a: Vec<usize>, b: Vec<usize> },
    #[serde(rename = "jordan-over-local")]
    JordanOverLocal {
        coeff: AlgebraDesc,
        matrix: Vec<Vec<String>>,
    },
    #[serde(rename = "residual-generic")]
    ResidualGeneric { matrix: Vec<Vec<String>> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "op")]
pub enum RefinePayload {
    #[serde(rename = "filtered-module")]
    FilteredModule {
        p: u64,
        phi: Vec<String>,
        weights: Vec<i64>,
        flag: Vec<Vec<String>>,
    },
    #[serde(rename = "accessible-refinements")]
    Accessible {
        q: String,
        #[serde(rename = "X")]
        x: Vec<SatakeDesc>,
    },
    #[serde(rename = "sigma")]
    Sigma { blocks: Vec<BlockDesc> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SatakeDesc {
    pub tag: String,
    pub exp: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockDesc {
    #[serde(rename = "R")]
    pub r: Vec<usize>,
    #[serde(rename = "W")]
    pub w: Vec<usize>,
}

/// A schema diagnostic with a JSON-path-ish location.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
}

pub fn parse_task(src: &str) -> std::result::Result<TaskFile, Vec<Diagnostic>> {
    let task: TaskFile = serde_json::from_str(src).map_err(|e| {
        vec![Diagnostic {
            path: "$".into(),
            message: e.to_string(),
        }]
    })?;
    let diags = validate_task(&task);
    if diags.is_empty() {
        Ok(task)
    } else {
        Err(diags)
    }
}

/// Structural validation beyond serde: version support, payload shape.
pub fn validate_task(task: &TaskFile) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if task.version != SCHEMA_VERSION {
        out.push(Diagnostic {
            path: "$.version".into(),
            message: format!("unsupported version {:?}", task.version),
        });
    }
    let payload = task.payload.clone();
    match task.kind {
        TaskKind::PseudocharCheck => {
            match serde_json::from_value::<PseudocharPayload>(payload) {
                Err(e) => out.push(Diagnostic {
                    path: "$.payload".into(),
                    message: e.to_string(),
                }),
                Ok(p) => {
                    if p.group.is_none() && p.matrices.is_none() {
                        out.push(Diagnostic {
                            path: "$.payload".into(),
                            message: "need a group or a matrix algebra".into(),
                        });
                    }
                    if p.t.basis_values.is_none() && !p.t.trace {
                        out.push(Diagnostic {
                            path: "$.payload.T".into(),
                            message: "need basisValues or trace: true".into(),
                        });
                    }
                    if p.d == 0 {
                        out.push(Diagnostic {
                            path: "$.payload.d".into(),
                            message: "dimension must be positive".into(),
                        });
                    }
                }
            }
        }
        TaskKind::GmaAnalyze => {
            match serde_json::from_value::<GmaPayload>(payload) {
                Err(e) => out.push(Diagnostic {
                    path: "$.payload".into(),
                    message: e.to_string(),
                }),
                Ok(p) => {
                    let r = p.block_sizes.len();
                    for key in p.modules.keys() {
                        if parse_pair(key, r).is_none() {
                            out.push(Diagnostic {
                                path: format!("$.payload.modules[{key:?}]"),
                                message: "key must be \"i,j\" with distinct 1-based blocks".into(),
                            });
                        }
                    }
                    for key in p.phi.keys() {
                        if parse_triple(key, r).is_none() {
                            out.push(Diagnostic {
                                path: format!("$.payload.phi[{key:?}]"),
                                message: "key must be \"i,j,k\" with 1-based blocks".into(),
                            });
                        }
                    }
                }
            }
        }
        TaskKind::Nilpotent => {
            if let Err(e) = serde_json::from_value::<NilpotentPayload>(payload) {
                out.push(Diagnostic {
                    path: "$.payload".into(),
                    message: e.to_string(),
                });
            }
        }
        TaskKind::Refine => {
            if let Err(e) = serde_json::from_value::<RefinePayload>(payload) {
                out.push(Diagnostic {
                    path: "$.payload".into(),
                    message: e.to_string(),
                });
            }
        }
    }
    out
}

pub fn parse_pair(key: &str, r: usize) -> Option<(usize, usize)> {
    let parts: Vec<&str> = key.split(',').map(|s| s.trim()).collect();
    if parts.len() != 2 {
        return None;
    }
    let i: usize = parts[0].parse().ok()?;
    let j: usize = parts[1].parse().ok()?;
    if i == 0 || j == 0 || i > r || j > r || i == j {
        return None;
    }
    Some((i - 1, j - 1))
}

pub fn parse_triple(key: &str, r: usize) -> Option<(usize, usize, usize)> {
    let parts: Vec<&str> = key.split(',').map(|s| s.trim()).collect();
    if parts.len() != 3 {
        return None;
    }
    let i: usize = parts[0].parse().ok()?;
    let j: usize = parts[1].parse().ok()?;
    let k: usize = parts[2].parse().ok()?;
    if i == 0 || j == 0 || k == 0 || i > r || j > r || k > r {
        return None;
    }
    Some((i - 1, j - 1, k - 1))
}

/// Build the rational artinian algebra a task describes.
pub fn build_rational_algebra(desc: &AlgebraDesc) -> Result<Arc<Artinian<Rationals>>> {
    match &desc.base {
        BaseFieldDesc::Named(s) if s == "Q" => {}
        BaseFieldDesc::Named(s) => {
            return Err(Error::Parse(format!("unknown base field {s:?}")))
        }
        BaseFieldDesc::Fp { .. } => {
            return Err(Error::Parse(
                "prime-field coefficient algebras are not wired to the CLI yet; use Q".into(),
            ))
        }
    }
    let f = Rationals;
    let rels = desc
        .relations
        .iter()
        .map(|r| parse_mpoly(&f, &desc.vars, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(Arc::new(Artinian::quotient(
        f,
        &desc.vars,
        &rels,
        desc.truncation,
    )?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn well_formed_task_has_no_diagnostics() {
        let src = r#"{
            "version": "1",
            "kind": "pseudochar-check",
            "payload": {"matrices": {"size": 2}, "T": {"trace": true}, "d": 2}
        }"#;
        assert!(parse_task(src).is_ok());
    }

    #[test]
    fn missing_dimension_yields_a_diagnostic() {
        let src = r#"{
            "version": "1",
            "kind": "pseudochar-check",
            "payload": {"matrices": {"size": 2}, "T": {"trace": true}}
        }"#;
        let err = parse_task(src).unwrap_err();
        assert_eq!(err.len(), 1);
        assert!(err[0].path.contains("payload"));
    }

    #[test]
    fn wrong_matrix_shape_mentions_the_path() {
        let src = r#"{
            "version": "1",
            "kind": "gma-analyze",
            "payload": {
                "coeff": {"base": "Q", "vars": ["x"], "relations": [], "truncation": 1},
                "type": [1, 1],
                "modules": {"1,5": {"ideal": ["x"]}}
            }
        }"#;
        let err = parse_task(src).unwrap_err();
        assert!(err[0].path.contains("modules"));
    }
}
