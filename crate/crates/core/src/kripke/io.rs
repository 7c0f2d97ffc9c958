//! JSON model files.
//!
//! ```json
//! {"algebra": "mv:3", "worlds": ["u", "u1"], "relation": [["u", "u1"]],
//!  "valuation": {"u1": {"x": "2/3"}}}
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{KripkeError, KripkeModel};
use crate::algebra::ChainAlgebra;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub algebra: String,
    pub worlds: Vec<String>,
    #[serde(default)]
    pub relation: Vec<(String, String)>,
    #[serde(default)]
    pub valuation: BTreeMap<String, BTreeMap<String, String>>,
}

impl ModelFile {
    pub fn from_model(m: &KripkeModel) -> ModelFile {
        let alg = m.algebra();
        let relation = m
            .relation()
            .into_iter()
            .map(|(a, b)| (m.worlds()[a].clone(), m.worlds()[b].clone()))
            .collect();
        let valuation = (0..m.len())
            .filter(|&w| !m.valuation(w).is_empty())
            .map(|w| {
                let vals = m
                    .valuation(w)
                    .iter()
                    .map(|(x, e)| (x.clone(), alg.format_element(e)))
                    .collect();
                (m.worlds()[w].clone(), vals)
            })
            .collect();
        ModelFile {
            algebra: alg.to_string(),
            worlds: m.worlds().to_vec(),
            relation,
            valuation,
        }
    }

    pub fn into_model(self) -> Result<KripkeModel, KripkeError> {
        let alg: ChainAlgebra = self.algebra.parse()?;
        let index = |w: &str| {
            self.worlds
                .iter()
                .position(|n| n == w)
                .ok_or_else(|| KripkeError::UnknownWorld(w.to_string()))
        };
        let edges = self
            .relation
            .iter()
            .map(|(a, b)| Ok((index(a)?, index(b)?)))
            .collect::<Result<Vec<_>, KripkeError>>()?;
        let mut m = KripkeModel::new(alg.clone(), self.worlds.clone(), edges)?;
        for (w, vals) in &self.valuation {
            let wi = index(w)?;
            for (x, text) in vals {
                if !valid_variable(x) {
                    return Err(KripkeError::Format(format!("bad variable name `{x}`")));
                }
                m.set_value(wi, x, alg.parse_element(text)?)?;
            }
        }
        Ok(m)
    }
}

fn valid_variable(x: &str) -> bool {
    let mut chars = x.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl KripkeModel {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ModelFile::from_model(self)).expect("model serialises")
    }

    pub fn from_json(text: &str) -> Result<KripkeModel, KripkeError> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| KripkeError::Format(e.to_string()))?;
        file.into_model()
    }
}
