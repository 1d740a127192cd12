//! Scenario files and parameter validation.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub schema_version: u32,
    pub experiment: String,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
    /// Per-check tolerance overrides, keyed by the experiment's tolerance names.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub seed: u64,
}

impl ScenarioSpec {
    pub fn new(experiment: &str) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            experiment: experiment.to_string(),
            params: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            seed: 0,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        if spec.schema_version != SCHEMA_VERSION {
            return Err(CliError::SchemaVersion {
                found: spec.schema_version,
                supported: SCHEMA_VERSION,
            });
        }
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }
}

/// Declared type and default of one experiment parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamDefault {
    /// Nonnegative integer.
    Count(u64),
    Float(f64),
    Counts(&'static [u64]),
    Floats(&'static [f64]),
}

impl ParamDefault {
    pub fn kind(&self) -> &'static str {
        match self {
            ParamDefault::Count(_) => "count",
            ParamDefault::Float(_) => "float",
            ParamDefault::Counts(_) => "count[]",
            ParamDefault::Floats(_) => "float[]",
        }
    }

    fn value(&self) -> Value {
        match *self {
            ParamDefault::Count(n) => Value::from(n),
            ParamDefault::Float(x) => Value::from(x),
            ParamDefault::Counts(v) => Value::from(v.to_vec()),
            ParamDefault::Floats(v) => Value::from(v.to_vec()),
        }
    }

    fn accepts(&self, v: &Value) -> bool {
        let count = |x: &Value| x.as_u64().is_some();
        let float = |x: &Value| x.as_f64().is_some_and(f64::is_finite);
        match self {
            ParamDefault::Count(_) => count(v),
            ParamDefault::Float(_) => float(v),
            ParamDefault::Counts(_) => v
                .as_array()
                .is_some_and(|a| !a.is_empty() && a.iter().all(count)),
            ParamDefault::Floats(_) => v
                .as_array()
                .is_some_and(|a| !a.is_empty() && a.iter().all(float)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: ParamDefault,
    pub doc: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceSpec {
    pub name: &'static str,
    pub default: f64,
    pub doc: &'static str,
}

/// Validated parameters, tolerances and seed handed to an experiment.
#[derive(Debug, Clone)]
pub struct Context {
    experiment: String,
    params: BTreeMap<String, Value>,
    tolerances: BTreeMap<String, f64>,
    pub seed: u64,
}

impl Context {
    pub fn resolve(
        experiment: &str,
        params: &[ParamSpec],
        tolerances: &[ToleranceSpec],
        spec: &ScenarioSpec,
        global_tol: Option<f64>,
    ) -> Result<Self> {
        let bad = |message: String| CliError::InvalidParam {
            experiment: experiment.to_string(),
            message,
        };
        for key in spec.params.keys() {
            if !params.iter().any(|p| p.name == key) {
                return Err(bad(format!("unknown parameter {key:?}")));
            }
        }
        for key in spec.tolerances.keys() {
            if !tolerances.iter().any(|t| t.name == key) {
                return Err(bad(format!("unknown tolerance {key:?}")));
            }
        }
        let mut resolved = BTreeMap::new();
        for p in params {
            let v = match spec.params.get(p.name) {
                Some(v) if p.default.accepts(v) => v.clone(),
                Some(v) => {
                    return Err(bad(format!(
                        "parameter {:?} must be {}, got {v}",
                        p.name,
                        p.default.kind()
                    )))
                }
                None => p.default.value(),
            };
            resolved.insert(p.name.to_string(), v);
        }
        let mut tols = BTreeMap::new();
        for t in tolerances {
            let v = global_tol
                .or_else(|| spec.tolerances.get(t.name).copied())
                .unwrap_or(t.default);
            if !(v.is_finite() && v >= 0.0) {
                return Err(bad(format!(
                    "tolerance {:?} must be a nonnegative number",
                    t.name
                )));
            }
            tols.insert(t.name.to_string(), v);
        }
        Ok(Self {
            experiment: experiment.to_string(),
            params: resolved,
            tolerances: tols,
            seed: spec.seed,
        })
    }

    fn invalid(&self, message: String) -> CliError {
        CliError::InvalidParam {
            experiment: self.experiment.clone(),
            message,
        }
    }

    fn get(&self, name: &str) -> &Value {
        self.params.get(name).unwrap_or_else(|| {
            panic!(
                "experiment {} reads undeclared parameter {name}",
                self.experiment
            )
        })
    }

    pub fn count(&self, name: &str) -> usize {
        self.get(name).as_u64().expect("validated count") as usize
    }

    pub fn float(&self, name: &str) -> f64 {
        self.get(name).as_f64().expect("validated float")
    }

    pub fn counts(&self, name: &str) -> Vec<usize> {
        let a = self.get(name).as_array().expect("validated array");
        a.iter()
            .map(|v| v.as_u64().expect("validated count") as usize)
            .collect()
    }

    pub fn floats(&self, name: &str) -> Vec<f64> {
        let a = self.get(name).as_array().expect("validated array");
        a.iter()
            .map(|v| v.as_f64().expect("validated float"))
            .collect()
    }

    pub fn tol(&self, name: &str) -> f64 {
        *self.tolerances.get(name).unwrap_or_else(|| {
            panic!(
                "experiment {} reads undeclared tolerance {name}",
                self.experiment
            )
        })
    }

    /// Fails with "parameter `name` `what`" unless `ok`.
    pub fn require(&self, name: &str, ok: bool, what: &str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(self.invalid(format!("parameter {name:?} {what}")))
        }
    }
}
