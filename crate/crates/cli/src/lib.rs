//! Scenario runner for the bosonic-ssr laboratory.
//!
//! A scenario file names a registered experiment, overrides some of its
//! parameters and tolerances, and fixes the RNG seed. Running it yields a
//! [`Report`] of named checks that can be emitted as JSON or as a table.

pub mod error;
pub mod experiments;
pub mod report;
pub mod scenario;

use std::time::Instant;

pub use error::{CliError, Result};
pub use experiments::{find, registry, Experiment};
pub use report::{emit, parse_structured, CheckRecord, Comparison, Format, Report, Summary};
pub use scenario::{Context, ScenarioSpec, SCHEMA_VERSION};

/// Overrides taken from the command line.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    /// Replaces every tolerance of the experiment.
    pub tol: Option<f64>,
    pub seed: Option<u64>,
}

pub fn run(spec: &ScenarioSpec, overrides: Overrides) -> Result<Report> {
    let exp = find(&spec.experiment)
        .ok_or_else(|| CliError::UnknownExperiment(spec.experiment.clone()))?;
    let mut spec = spec.clone();
    if let Some(seed) = overrides.seed {
        spec.seed = seed;
    }
    let ctx = Context::resolve(exp.name, exp.params, exp.tolerances, &spec, overrides.tol)?;
    let start = Instant::now();
    let records = (exp.run)(&ctx)?;
    Ok(Report::assemble(
        exp.name,
        spec.seed,
        records,
        start.elapsed().as_secs_f64(),
    ))
}

/// Human-readable registry listing with parameter and tolerance schemas.
pub fn list_experiments() -> String {
    let mut out = String::new();
    for e in registry() {
        out.push_str(&format!("{}\n    {}\n", e.name, e.summary));
        for p in e.params {
            let default = match p.default {
                scenario::ParamDefault::Count(n) => n.to_string(),
                scenario::ParamDefault::Float(x) => x.to_string(),
                scenario::ParamDefault::Counts(v) => format!("{v:?}"),
                scenario::ParamDefault::Floats(v) => format!("{v:?}"),
            };
            out.push_str(&format!(
                "    param {} : {} = {}  ({})\n",
                p.name,
                p.default.kind(),
                default,
                p.doc
            ));
        }
        for t in e.tolerances {
            out.push_str(&format!(
                "    tol   {} = {:e}  ({})\n",
                t.name, t.default, t.doc
            ));
        }
    }
    out
}
