//! JSON theory files. Every rational is a `"p/q"` string.

use std::fmt;

use gpt_phase::{Block, Facet, Matrix, MeasurementLayout, MeasurementSpec, Rational, TheoryDefinition, TransformPolicy};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

/// A rational serialised as its canonical `p/q` string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_fraction_string())
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Q;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string such as \"1/2\"")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Q, E> {
                v.parse().map(Q).map_err(|_| E::custom(format!("invalid rational `{v}`")))
            }
        }
        d.deserialize_str(V)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockEntry {
    pub label: String,
    pub outcomes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FacetEntry {
    /// `normal · x <= bound`.
    pub normal: Vec<Q>,
    pub bound: Q,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementEntry {
    pub label: String,
    pub effects: Vec<Vec<Q>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PolicyEntry {
    AllAutomorphisms,
    ExcludeReflections,
    ExplicitGroup { matrices: Vec<Vec<Vec<Q>>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoryFile {
    pub schema_version: u32,
    pub name: String,
    pub layout: Vec<BlockEntry>,
    pub extreme_points: Vec<Vec<Q>>,
    pub facets: Vec<FacetEntry>,
    pub distinguishable: usize,
    pub measurements: Vec<MeasurementEntry>,
    pub transform_policy: PolicyEntry,
}

fn qs(v: &[Rational]) -> Vec<Q> {
    v.iter().cloned().map(Q).collect()
}

fn rs(v: Vec<Q>) -> Vec<Rational> {
    v.into_iter().map(|q| q.0).collect()
}

impl From<&TheoryDefinition> for TheoryFile {
    fn from(def: &TheoryDefinition) -> Self {
        let transform_policy = match &def.policy {
            TransformPolicy::AllAutomorphisms => PolicyEntry::AllAutomorphisms,
            TransformPolicy::ExcludeReflections => PolicyEntry::ExcludeReflections,
            TransformPolicy::ExplicitGroup(ms) => PolicyEntry::ExplicitGroup {
                matrices: ms.iter().map(|m| m.row_vecs().iter().map(|r| qs(r)).collect()).collect(),
            },
        };
        TheoryFile {
            schema_version: SCHEMA_VERSION,
            name: def.name.clone(),
            layout: def
                .layout
                .blocks()
                .iter()
                .map(|b| BlockEntry { label: b.label.clone(), outcomes: b.outcomes })
                .collect(),
            extreme_points: def.extreme_points.iter().map(|v| qs(v)).collect(),
            facets: def.facets.iter().map(|f| FacetEntry { normal: qs(&f.normal), bound: Q(f.bound.clone()) }).collect(),
            distinguishable: def.distinguishable,
            measurements: def
                .measurements
                .iter()
                .map(|m| MeasurementEntry { label: m.label.clone(), effects: m.effects.iter().map(|e| qs(e)).collect() })
                .collect(),
            transform_policy,
        }
    }
}

impl TheoryFile {
    pub fn parse(source: &str, text: &str) -> CliResult<TheoryFile> {
        let file: TheoryFile =
            serde_json::from_str(text).map_err(|e| CliError::Parse(format!("{source}: {e}")))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(CliError::Parse(format!(
                "{source}: unsupported schema_version {} (expected {SCHEMA_VERSION})",
                file.schema_version
            )));
        }
        Ok(file)
    }

    /// Sorted-key pretty JSON.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("theory files are plain data");
        let mut s = serde_json::to_string_pretty(&value).expect("serialisable");
        s.push('\n');
        s
    }

    pub fn into_definition(self) -> CliResult<TheoryDefinition> {
        let layout = MeasurementLayout::new(
            self.layout.into_iter().map(|b| Block { label: b.label, outcomes: b.outcomes }).collect(),
        );
        let dim = layout.total_dim();
        let policy = match self.transform_policy {
            PolicyEntry::AllAutomorphisms => TransformPolicy::AllAutomorphisms,
            PolicyEntry::ExcludeReflections => TransformPolicy::ExcludeReflections,
            PolicyEntry::ExplicitGroup { matrices } => {
                let mut out = Vec::with_capacity(matrices.len());
                for (i, m) in matrices.into_iter().enumerate() {
                    if m.len() != dim || m.iter().any(|r| r.len() != dim) {
                        return Err(CliError::Parse(format!("explicit_group matrix {i} is not {dim}x{dim}")));
                    }
                    out.push(Matrix::from_rows(m.into_iter().map(rs).collect()));
                }
                TransformPolicy::ExplicitGroup(out)
            }
        };
        Ok(TheoryDefinition {
            name: self.name,
            layout,
            extreme_points: self.extreme_points.into_iter().map(rs).collect(),
            facets: self.facets.into_iter().map(|f| Facet::new(rs(f.normal), f.bound.0)).collect(),
            distinguishable: self.distinguishable,
            measurements: self
                .measurements
                .into_iter()
                .map(|m| MeasurementSpec { label: m.label, effects: m.effects.into_iter().map(rs).collect() })
                .collect(),
            policy,
        })
    }
}
