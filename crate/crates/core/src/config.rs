//! TOML configuration files describing a group, or a pair `G ⊂ G'`.
//!
//! Rationals are written as `"p/q"` strings so that no floating point value
//! ever enters the engine. See the bundled files under `data/` for examples.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::admissible::Embedding;
use crate::branching::Pair;
use crate::error::{Error, Result};
use crate::exact::{fmt_q, parse_matrix, parse_q, Q};
use crate::rootdata::{GroupData, RootDatum};
use crate::weight::Weight;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema: u32,
    pub group: Groups,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<EmbeddingSection>,
    #[serde(default, skip_serializing_if = "RunSection::is_empty")]
    pub run: RunSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<ExpectSection>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Groups {
    pub g: GroupSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gprime: Option<GroupSection>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSection {
    pub name: String,
    pub cartan: Vec<Vec<i64>>,
    pub compact: Vec<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingSection {
    /// Rows map `G'` simple-root coordinates to `G` simple-root coordinates.
    pub projection: Vec<Vec<String>>,
    /// Orientation reference for the spinor twist; defaults to `ρ` of `G`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation_ref: Option<Vec<String>>,
    /// Declares that Weyl translates of the cone already exhaust its
    /// `K'`-saturation, making the Cartan-level verdict conclusive.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub cartan_saturation: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
}

/// Values the self-test compares against when run on a custom config.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chambers: Option<usize>,
}

impl RunSection {
    fn is_empty(&self) -> bool {
        self == &RunSection::default()
    }
}

impl GroupSection {
    pub fn datum(&self) -> Result<RootDatum> {
        let gram = self.gram.as_deref().map(parse_matrix).transpose()?;
        let lattice = self.lattice.as_deref().map(parse_matrix).transpose()?;
        RootDatum::new(self.cartan.clone(), self.compact.clone(), gram, lattice)
    }

    pub fn group(&self) -> Result<GroupData> {
        GroupData::new(self.datum()?)
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Config = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if cfg.schema != SCHEMA_VERSION {
            return Err(Error::Config(format!("unsupported schema version {}", cfg.schema)));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn group(&self) -> Result<GroupData> {
        self.group.g.group()
    }

    pub fn is_pair(&self) -> bool {
        self.group.gprime.is_some()
    }

    pub fn pair(&self) -> Result<Pair> {
        let gp_section = self.group.gprime.as_ref().ok_or_else(|| Error::Config("missing [group.gprime]".into()))?;
        let emb = self.embedding.as_ref().ok_or_else(|| Error::Config("missing [embedding]".into()))?;
        let g = self.group()?;
        let gprime = gp_section.group()?;
        let projection = parse_matrix(&emb.projection)?;
        let embedding = Embedding::new(&gprime, &g, projection)?;
        let orientation_ref = emb.orientation_ref.as_ref().map(|v| parse_weight(v)).transpose()?;
        Pair::new(gprime, g, embedding, orientation_ref, emb.cartan_saturation)
    }

    pub fn orbit(&self) -> Result<Option<Weight>> {
        self.run.orbit.as_ref().map(|v| parse_weight(v)).transpose()
    }

    pub fn cutoff(&self) -> Result<Option<Q>> {
        self.run.cutoff.as_deref().map(parse_q).transpose()
    }

    pub fn depth(&self) -> Result<Option<Q>> {
        self.run.depth.as_deref().map(parse_q).transpose()
    }
}

fn parse_weight(v: &[String]) -> Result<Weight> {
    v.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>().map(Weight)
}

/// Writes a rational matrix back in config notation.
pub fn matrix_strings(m: &[Vec<Q>]) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(fmt_q).collect()).collect()
}
