//! JSON model definitions.
//!
//! Two shapes are accepted:
//!
//! ```json
//! { "builder": "model_ii", "params": { "t": 0.6, "tp": 1.0, "delta": 1.0 } }
//! ```
//!
//! ```json
//! { "label": "my chain",
//!   "rho":   [[0, 0.0, 1.0]],
//!   "theta": [[0, 1.0, 0.0], [1, 1.5, 0.0]],
//!   "phi":   [[0, 1.0, 0.0], [-1, 1.5, 0.0]] }
//! ```
//!
//! Hopping entries are `[n, re, im]`; missing maps are empty. Builder
//! parameter names are `t`, `tp`, `delta` (models I–III), `t1`, `t2`, `t3`,
//! `delta` (model IV) and `t`, `delta` (`model_app_c`). An optional `label`
//! overrides the generated one.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{custom, NamedModel, TwoBandModel};
use crate::{Complex64, Error, Result};

/// Raw contents of a model definition file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelFile {
    /// One of the named builders with its parameters.
    Builder(BuilderSpec),
    /// Explicit hopping tables as `[n, re, im]` triples.
    Explicit(ExplicitSpec),
}

/// `{ "builder": …, "params": {…}, "label": … }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuilderSpec {
    pub builder: String,
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub label: Option<String>,
}

/// `{ "label": …, "rho": [[n, re, im], …], "theta": …, "phi": … }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitSpec {
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub rho: Vec<(i32, f64, f64)>,
    #[serde(default)]
    pub theta: Vec<(i32, f64, f64)>,
    #[serde(default)]
    pub phi: Vec<(i32, f64, f64)>,
}

impl ModelFile {
    /// Validates and builds the model.
    pub fn into_model(self) -> Result<TwoBandModel> {
        match self {
            ModelFile::Builder(BuilderSpec { builder, params, label }) => {
                let mut model = named_from_params(&builder, &params)?.build();
                if let Some(label) = label {
                    model.label = label;
                }
                Ok(model)
            }
            ModelFile::Explicit(ExplicitSpec { label, rho, theta, phi }) => {
                let table = |name: &str, entries: Vec<(i32, f64, f64)>| {
                    let mut out = BTreeMap::new();
                    for (n, a, b) in entries {
                        if !(a.is_finite() && b.is_finite()) {
                            return Err(Error::InvalidInput(format!("non-finite {name}[{n}]")));
                        }
                        if out.insert(n, Complex64::new(a, b)).is_some() {
                            return Err(Error::InvalidInput(format!("duplicate {name}[{n}]")));
                        }
                    }
                    out.retain(|_, c: &mut Complex64| c.norm() != 0.0);
                    Ok(out)
                };
                Ok(custom(
                    label.unwrap_or_else(|| "custom".to_string()),
                    table("rho", rho)?,
                    table("theta", theta)?,
                    table("phi", phi)?,
                ))
            }
        }
    }
}

/// Resolves a builder name and parameter map into a [`NamedModel`].
pub fn named_from_params(builder: &str, params: &BTreeMap<String, f64>) -> Result<NamedModel> {
    let expected: &[&str] = match builder {
        "model_i" | "model_ii" | "model_iii" => &["t", "tp", "delta"],
        "model_iv" => &["t1", "t2", "t3", "delta"],
        "model_app_c" => &["t", "delta"],
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown builder `{other}` (expected model_i, model_ii, model_iii, model_iv, model_app_c)"
            )))
        }
    };
    if let Some(extra) = params.keys().find(|k| !expected.contains(&k.as_str())) {
        return Err(Error::InvalidInput(format!("unknown parameter `{extra}` for {builder}")));
    }
    let get = |name: &str| -> Result<f64> {
        let v = *params
            .get(name)
            .ok_or_else(|| Error::InvalidInput(format!("missing parameter `{name}` for {builder}")))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::InvalidInput(format!("parameter `{name}` must be finite")))
        }
    };
    Ok(match builder {
        "model_i" => NamedModel::ModelI { t: get("t")?, tp: get("tp")?, delta: get("delta")? },
        "model_ii" => NamedModel::ModelIi { t: get("t")?, tp: get("tp")?, delta: get("delta")? },
        "model_iii" => NamedModel::ModelIii { t: get("t")?, tp: get("tp")?, delta: get("delta")? },
        "model_iv" => NamedModel::ModelIv {
            t1: get("t1")?,
            t2: get("t2")?,
            t3: get("t3")?,
            delta: get("delta")?,
        },
        _ => NamedModel::ModelAppC { t: get("t")?, delta: get("delta")? },
    })
}

/// Parses a model definition from JSON text.
pub fn parse_model_json(text: &str) -> Result<TwoBandModel> {
    let file: ModelFile = serde_json::from_str(text)
        .map_err(|e| Error::InvalidInput(format!("model file: {e}")))?;
    file.into_model()
}

/// Reads and parses a model definition file.
pub fn load_model_file(path: &Path) -> std::io::Result<Result<TwoBandModel>> {
    Ok(parse_model_json(&std::fs::read_to_string(path)?))
}
