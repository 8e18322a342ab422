//! On-disk instance format.
//!
//! ```json
//! {"n": 3, "kind": "matrix", "true_ranking": [2, 1, 3],
//!  "pairwise_probs": [[...], ...], "scores": null, "seed_provenance": "..."}
//! ```
//!
//! Probabilities and scores are written with 17 significant digits so a
//! read-back reproduces every `f64` exactly.

use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use super::{Instance, Model};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Matrix,
    Mnl,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub kind: Kind,
    #[serde(default)]
    pub true_ranking: Option<Vec<usize>>,
    #[serde(default, serialize_with = "ser_matrix")]
    pub pairwise_probs: Option<Vec<Vec<f64>>>,
    #[serde(default, serialize_with = "ser_vector")]
    pub scores: Option<Vec<f64>>,
    #[serde(default)]
    pub seed_provenance: String,
}

fn sig17(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() { format!("{x:.16e}") } else { "null".to_owned() };
    RawValue::from_string(text).expect("formatted float is valid JSON")
}

fn ser_vector<S: Serializer>(v: &Option<Vec<f64>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    v.as_ref()
        .map(|row| row.iter().map(|&x| sig17(x)).collect::<Vec<_>>())
        .serialize(s)
}

fn ser_matrix<S: Serializer>(m: &Option<Vec<Vec<f64>>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    m.as_ref()
        .map(|rows| {
            rows.iter()
                .map(|row| row.iter().map(|&x| sig17(x)).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        })
        .serialize(s)
}

impl InstanceFile {
    pub fn from_instance(instance: &Instance) -> Self {
        let (kind, pairwise_probs, scores) = match instance.model() {
            Model::Matrix(p) => (Kind::Matrix, Some(p.clone()), None),
            Model::Mnl(theta) => (Kind::Mnl, None, Some(theta.clone())),
        };
        Self {
            n: instance.n(),
            kind,
            true_ranking: Some(instance.true_ranking().to_vec()),
            pairwise_probs,
            scores,
            seed_provenance: instance.provenance().to_owned(),
        }
    }

    /// Validates the file and builds the instance. A missing ranking is
    /// derived from the probabilities.
    pub fn into_instance(self) -> Result<Instance> {
        let instance = match self.kind {
            Kind::Matrix => {
                let probs = self.pairwise_probs.ok_or_else(|| {
                    Error::InvalidInstance("matrix instance without pairwise_probs".into())
                })?;
                Instance::matrix(probs, self.true_ranking)?
            }
            Kind::Mnl => {
                let scores = self
                    .scores
                    .ok_or_else(|| Error::InvalidInstance("mnl instance without scores".into()))?;
                Instance::mnl(scores, self.true_ranking)?
            }
        };
        if instance.n() != self.n {
            return Err(Error::InvalidInstance(format!(
                "n = {} but the model has {} items",
                self.n,
                instance.n()
            )));
        }
        Ok(instance.with_provenance(self.seed_provenance))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl Instance {
    pub fn to_json(&self) -> Result<String> {
        InstanceFile::from_instance(self).to_json()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        InstanceFile::from_json(text)?.into_instance()
    }
}
