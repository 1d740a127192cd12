//! Registry of runnable experiments.

mod dynamics;
mod hidden;
mod sectors;
mod witnesses;

use crate::error::Result;
use crate::report::CheckRecord;
use crate::scenario::{Context, ParamSpec, ToleranceSpec};

pub struct Experiment {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: &'static [ParamSpec],
    pub tolerances: &'static [ToleranceSpec],
    pub run: fn(&Context) -> Result<Vec<CheckRecord>>,
}

/// Every registered experiment, sorted by name.
pub fn registry() -> Vec<&'static Experiment> {
    let mut all: Vec<&'static Experiment> = vec![
        &dynamics::ATOM_MOLECULE,
        &dynamics::EXTRACTION,
        &dynamics::RAMSEY_VACUUM,
        &dynamics::SSR_PROPAGATION,
        &hidden::GHZ_LHV_SEARCH,
        &hidden::LHV_CHSH_SWEEP,
        &hidden::SCHWARZ_INEQUALITIES,
        &sectors::PHASE_CLOCK,
        &sectors::QCF_THEOREM,
        &sectors::SEPARABILITY_SSR,
        &sectors::TWIRL_COHERENT,
        &sectors::TWO_MODE_COHERENT_MIXTURE,
        &sectors::VERSTRAETE,
        &witnesses::CHSH_SEPARABLE_SWEEP,
        &witnesses::CHSH_SINGLET,
        &witnesses::GHZ_PARITY,
        &witnesses::MEASUREMENT_IDENTITIES,
        &witnesses::PARTICLE_ENTANGLEMENT,
        &witnesses::SPIN_EPR_SEPARABLE,
    ];
    all.sort_by_key(|e| e.name);
    all
}

pub fn find(name: &str) -> Option<&'static Experiment> {
    registry().into_iter().find(|e| e.name == name)
}

/// Largest value of an iterator of nonnegative numbers, 0 when empty.
pub(crate) fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}
