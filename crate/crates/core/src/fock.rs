//! Truncated occupation-number basis and the operators built on it.
//!
//! Basis states are enumerated lexicographically with the first mode as the
//! most significant digit. Raising a mode past its cutoff gives zero.
//! Fermionic ladder operators carry the Jordan-Wigner sign
//! (−1)^(occupied fermi modes with a smaller index).

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{DensityOperator, Operator, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistics {
    Bose,
    Fermi,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mode {
    pub label: String,
    /// Maximum occupancy.
    pub cutoff: u32,
    pub statistics: Statistics,
}

impl Mode {
    pub fn bose(label: impl Into<String>, cutoff: u32) -> Self {
        Self {
            label: label.into(),
            cutoff,
            statistics: Statistics::Bose,
        }
    }

    pub fn fermi(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            cutoff: 1,
            statistics: Statistics::Fermi,
        }
    }
}

/// Keeps only basis states with Σ wᵢ nᵢ = total.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NumberRestriction {
    pub weights: Vec<u32>,
    pub total: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModeSystem {
    modes: Vec<Mode>,
    restriction: Option<NumberRestriction>,
}

impl ModeSystem {
    pub fn new(modes: Vec<Mode>) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidModeSystem("no modes".into()));
        }
        let mut seen = BTreeSet::new();
        for m in &modes {
            if m.statistics == Statistics::Fermi && m.cutoff != 1 {
                return Err(Error::InvalidModeSystem(format!(
                    "fermi mode `{}` has cutoff {}",
                    m.label, m.cutoff
                )));
            }
            if !seen.insert(m.label.clone()) {
                return Err(Error::InvalidModeSystem(format!(
                    "duplicate label `{}`",
                    m.label
                )));
            }
        }
        Ok(Self {
            modes,
            restriction: None,
        })
    }

    /// `count` bose modes labelled `m0, m1, …` sharing one cutoff.
    pub fn bosons(count: usize, cutoff: u32) -> Result<Self> {
        Self::new(
            (0..count)
                .map(|i| Mode::bose(format!("m{i}"), cutoff))
                .collect(),
        )
    }

    pub fn labeled_bosons(labels: &[&str], cutoff: u32) -> Result<Self> {
        Self::new(labels.iter().map(|l| Mode::bose(*l, cutoff)).collect())
    }

    /// `count` fermi modes labelled `f0, f1, …`.
    pub fn fermions(count: usize) -> Result<Self> {
        Self::new((0..count).map(|i| Mode::fermi(format!("f{i}"))).collect())
    }

    pub fn labeled_fermions(labels: &[&str]) -> Result<Self> {
        Self::new(labels.iter().map(|l| Mode::fermi(*l)).collect())
    }

    /// Restricts the basis to total occupancy `total`.
    pub fn with_total_number(self, total: u32) -> Self {
        let weights = vec![1; self.modes.len()];
        Self {
            restriction: Some(NumberRestriction { weights, total }),
            ..self
        }
    }

    /// Restricts the basis to Σ wᵢ nᵢ = `total`.
    pub fn with_weighted_number(self, weights: &[u32], total: u32) -> Result<Self> {
        if weights.len() != self.modes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.modes.len(),
                actual: weights.len(),
            });
        }
        Ok(Self {
            restriction: Some(NumberRestriction {
                weights: weights.to_vec(),
                total,
            }),
            ..self
        })
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    pub fn restriction(&self) -> Option<&NumberRestriction> {
        self.restriction.as_ref()
    }

    pub fn mode_index(&self, label: &str) -> Result<usize> {
        self.modes
            .iter()
            .position(|m| m.label == label)
            .ok_or_else(|| Error::UnknownSubsystem(label.to_string()))
    }

    /// Unrestricted product system over the listed modes, in the given order.
    pub fn subsystem(&self, mode_indices: &[usize]) -> Result<Self> {
        let mut modes = Vec::with_capacity(mode_indices.len());
        for &i in mode_indices {
            let m = self.modes.get(i).ok_or(Error::ModeOutOfRange {
                index: i,
                modes: self.modes.len(),
            })?;
            modes.push(m.clone());
        }
        Self::new(modes)
    }

    /// Product of (cutoff + 1), ignoring any restriction.
    pub fn product_dim(&self) -> usize {
        self.modes.iter().map(|m| m.cutoff as usize + 1).product()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisState {
    pub occupancies: Vec<u32>,
}

impl BasisState {
    pub fn total(&self) -> u32 {
        self.occupancies.iter().sum()
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.occupancies.iter().map(u32::to_string).collect();
        write!(f, "|{}⟩", parts.join(","))
    }
}

/// Lexicographic enumeration of the (possibly restricted) basis.
pub fn build_basis(system: &ModeSystem) -> Result<Vec<BasisState>> {
    let n = system.modes.len();
    let cutoffs: Vec<u32> = system.modes.iter().map(|m| m.cutoff).collect();
    let mut out = Vec::new();
    let mut occ = vec![0u32; n];
    fn recurse(
        k: usize,
        partial: u32,
        cutoffs: &[u32],
        restriction: Option<&NumberRestriction>,
        occ: &mut Vec<u32>,
        out: &mut Vec<BasisState>,
    ) {
        if k == cutoffs.len() {
            if restriction.is_none_or(|r| partial == r.total) {
                out.push(BasisState {
                    occupancies: occ.clone(),
                });
            }
            return;
        }
        for v in 0..=cutoffs[k] {
            let next = match restriction {
                Some(r) => {
                    let s = partial + r.weights[k] * v;
                    if s > r.total {
                        break;
                    }
                    s
                }
                None => 0,
            };
            occ[k] = v;
            recurse(k + 1, next, cutoffs, restriction, occ, out);
        }
        occ[k] = 0;
    }
    recurse(
        0,
        0,
        &cutoffs,
        system.restriction.as_ref(),
        &mut occ,
        &mut out,
    );
    if out.is_empty() {
        return Err(Error::EmptyHilbertSpace);
    }
    Ok(out)
}

/// One factor of a normal-ordered or arbitrary ladder-operator word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Create(usize),
    Annihilate(usize),
}

/// Named disjoint groups of modes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    subsystems: Vec<(String, Vec<usize>)>,
}

impl Partition {
    pub fn new(subsystems: Vec<(String, Vec<usize>)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut names = BTreeSet::new();
        for (name, modes) in &subsystems {
            if !names.insert(name.clone()) {
                return Err(Error::InvalidPartition(format!("duplicate name `{name}`")));
            }
            if modes.is_empty() {
                return Err(Error::InvalidPartition(format!("`{name}` has no modes")));
            }
            for &m in modes {
                if !seen.insert(m) {
                    return Err(Error::InvalidPartition(format!(
                        "mode {m} appears in more than one subsystem"
                    )));
                }
            }
        }
        Ok(Self { subsystems })
    }

    /// Two subsystems named `A` and `B`.
    pub fn bipartite(a: &[usize], b: &[usize]) -> Result<Self> {
        Self::new(vec![("A".into(), a.to_vec()), ("B".into(), b.to_vec())])
    }

    pub fn subsystems(&self) -> &[(String, Vec<usize>)] {
        &self.subsystems
    }

    pub fn modes_of(&self, name: &str) -> Result<&[usize]> {
        self.subsystems
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m.as_slice())
            .ok_or_else(|| Error::UnknownSubsystem(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.subsystems.iter().map(|(n, _)| n.as_str())
    }

    pub fn check_against(&self, system: &ModeSystem) -> Result<()> {
        for (_, modes) in &self.subsystems {
            for &m in modes {
                if m >= system.mode_count() {
                    return Err(Error::ModeOutOfRange {
                        index: m,
                        modes: system.mode_count(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// A mode system together with its enumerated basis.
#[derive(Debug, Clone)]
pub struct FockSpace {
    system: ModeSystem,
    basis: Vec<BasisState>,
    index: HashMap<Vec<u32>, usize>,
}

impl FockSpace {
    pub fn new(system: ModeSystem) -> Result<Self> {
        let basis = build_basis(&system)?;
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, b)| (b.occupancies.clone(), i))
            .collect();
        Ok(Self {
            system,
            basis,
            index,
        })
    }

    pub fn system(&self) -> &ModeSystem {
        &self.system
    }

    pub fn basis(&self) -> &[BasisState] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn mode_count(&self) -> usize {
        self.system.mode_count()
    }

    pub fn index_of(&self, occupancies: &[u32]) -> Result<usize> {
        self.index
            .get(occupancies)
            .copied()
            .ok_or_else(|| Error::NotInBasis(occupancies.to_vec()))
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.mode_count() {
            return Err(Error::ModeOutOfRange {
                index: mode,
                modes: self.mode_count(),
            });
        }
        Ok(())
    }

    /// Acts with `word` (rightmost factor first) on the occupancy pattern,
    /// returning the amplitude and resulting pattern, or `None` for zero.
    fn act(&self, word: &[Ladder], occupancies: &[u32]) -> Option<(f64, Vec<u32>)> {
        let modes = self.system.modes();
        let mut occ = occupancies.to_vec();
        let mut amp = 1.0;
        for op in word.iter().rev() {
            let (m, raise) = match *op {
                Ladder::Create(m) => (m, true),
                Ladder::Annihilate(m) => (m, false),
            };
            let n = occ[m];
            match modes[m].statistics {
                Statistics::Bose => {
                    if raise {
                        if n >= modes[m].cutoff {
                            return None;
                        }
                        amp *= f64::from(n + 1).sqrt();
                    } else {
                        if n == 0 {
                            return None;
                        }
                        amp *= f64::from(n).sqrt();
                    }
                }
                Statistics::Fermi => {
                    if (raise && n == 1) || (!raise && n == 0) {
                        return None;
                    }
                    let below: u32 = (0..m)
                        .filter(|&k| modes[k].statistics == Statistics::Fermi)
                        .map(|k| occ[k])
                        .sum();
                    if below % 2 == 1 {
                        amp = -amp;
                    }
                }
            }
            occ[m] = if raise { n + 1 } else { n - 1 };
        }
        Some((amp, occ))
    }

    /// Matrix of a product of ladder operators, rightmost applied first.
    /// Intermediate states may leave a restricted basis; only the final
    /// state must lie in it.
    pub fn word(&self, word: &[Ladder]) -> Result<Operator> {
        for op in word {
            match *op {
                Ladder::Create(m) | Ladder::Annihilate(m) => self.check_mode(m)?,
            }
        }
        let dim = self.dim();
        let mut mat = DMatrix::zeros(dim, dim);
        for (j, b) in self.basis.iter().enumerate() {
            if let Some((amp, occ)) = self.act(word, &b.occupancies) {
                if let Some(&i) = self.index.get(&occ) {
                    mat[(i, j)] += Complex64::new(amp, 0.0);
                }
            }
        }
        Operator::from_matrix(mat)
    }

    pub fn annihilation(&self, mode: usize) -> Result<Operator> {
        self.word(&[Ladder::Annihilate(mode)])
    }

    pub fn creation(&self, mode: usize) -> Result<Operator> {
        self.word(&[Ladder::Create(mode)])
    }

    /// n̂ for one mode.
    pub fn mode_number(&self, mode: usize) -> Result<Operator> {
        self.check_mode(mode)?;
        let diag: Vec<f64> = self
            .basis
            .iter()
            .map(|b| f64::from(b.occupancies[mode]))
            .collect();
        Ok(Operator::diagonal(&diag))
    }

    /// Σᵢ wᵢ n̂ᵢ
    pub fn number_op(&self, weights: &[i64]) -> Result<Operator> {
        if weights.len() != self.mode_count() {
            return Err(Error::DimensionMismatch {
                expected: self.mode_count(),
                actual: weights.len(),
            });
        }
        let diag: Vec<f64> = self
            .basis
            .iter()
            .map(|b| {
                b.occupancies
                    .iter()
                    .zip(weights)
                    .map(|(&n, &w)| w as f64 * f64::from(n))
                    .sum()
            })
            .collect();
        Ok(Operator::diagonal(&diag))
    }

    /// N̂ = Σᵢ n̂ᵢ
    pub fn total_number(&self) -> Operator {
        let diag: Vec<f64> = self.basis.iter().map(|b| f64::from(b.total())).collect();
        Operator::diagonal(&diag)
    }

    /// Number operator restricted to a set of modes.
    pub fn number_of_modes(&self, modes: &[usize]) -> Result<Operator> {
        let mut w = vec![0i64; self.mode_count()];
        for &m in modes {
            self.check_mode(m)?;
            w[m] = 1;
        }
        self.number_op(&w)
    }

    pub fn fock_state(&self, occupancies: &[u32]) -> Result<PureState> {
        let i = self.index_of(occupancies)?;
        PureState::basis(self.dim(), i)
    }

    pub fn vacuum(&self) -> Result<PureState> {
        self.fock_state(&vec![0; self.mode_count()])
    }

    /// Normalized superposition Σ c_k |occ_k⟩.
    pub fn superposition(&self, terms: &[(Complex64, &[u32])]) -> Result<PureState> {
        let mut v = DVector::zeros(self.dim());
        for (c, occ) in terms {
            v[self.index_of(occ)?] += *c;
        }
        PureState::normalized(v)
    }

    /// Amplitude of an occupancy pattern in `state`.
    pub fn amplitude(&self, state: &PureState, occupancies: &[u32]) -> Result<Complex64> {
        Ok(state.amplitude(self.index_of(occupancies)?))
    }

    fn check_modes(&self, modes: &[usize]) -> Result<()> {
        let mut seen = BTreeSet::new();
        for &m in modes {
            self.check_mode(m)?;
            if !seen.insert(m) {
                return Err(Error::InvalidPartition(format!("mode {m} repeated")));
            }
        }
        Ok(())
    }

    /// For each basis index: (index in the product basis of `modes`,
    /// mixed-radix key of the complementary occupancies).
    fn split(&self, modes: &[usize]) -> Vec<(usize, u64)> {
        let sys_modes = self.system.modes();
        let in_sub: BTreeSet<usize> = modes.iter().copied().collect();
        let rest: Vec<usize> = (0..self.mode_count())
            .filter(|m| !in_sub.contains(m))
            .collect();
        self.basis
            .iter()
            .map(|b| {
                let mut a = 0usize;
                for &m in modes {
                    a = a * (sys_modes[m].cutoff as usize + 1) + b.occupancies[m] as usize;
                }
                let mut r = 0u64;
                for &m in &rest {
                    r = r * (u64::from(sys_modes[m].cutoff) + 1) + u64::from(b.occupancies[m]);
                }
                (a, r)
            })
            .collect()
    }

    /// Lifts an operator on the product basis of `modes` to the full space,
    /// acting as the identity on the remaining modes.
    pub fn embed(&self, op: &Operator, modes: &[usize]) -> Result<Operator> {
        self.check_modes(modes)?;
        let sub = self.system.subsystem(modes)?;
        if op.dim() != sub.product_dim() {
            return Err(Error::DimensionMismatch {
                expected: sub.product_dim(),
                actual: op.dim(),
            });
        }
        let split = self.split(modes);
        let dim = self.dim();
        let mut groups: HashMap<u64, Vec<usize>> = HashMap::new();
        for (i, &(_, r)) in split.iter().enumerate() {
            groups.entry(r).or_default().push(i);
        }
        let mut mat = DMatrix::zeros(dim, dim);
        for idx in groups.values() {
            for &i in idx {
                for &j in idx {
                    mat[(i, j)] = op.get(split[i].0, split[j].0);
                }
            }
        }
        Operator::from_matrix(mat)
    }

    /// Reduced density operator of `modes`, on their product basis.
    pub fn reduce(&self, rho: &DensityOperator, modes: &[usize]) -> Result<DensityOperator> {
        self.reduce_operator(&rho.to_operator(), modes)
            .and_then(DensityOperator::from_operator)
    }

    /// Partial trace of an arbitrary operator over the complement of `modes`.
    pub fn reduce_operator(&self, op: &Operator, modes: &[usize]) -> Result<Operator> {
        self.check_modes(modes)?;
        if op.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: op.dim(),
            });
        }
        let sub_dim = self.system.subsystem(modes)?.product_dim();
        let split = self.split(modes);
        let mut groups: HashMap<u64, Vec<usize>> = HashMap::new();
        for (i, &(_, r)) in split.iter().enumerate() {
            groups.entry(r).or_default().push(i);
        }
        let mut mat = DMatrix::zeros(sub_dim, sub_dim);
        for idx in groups.values() {
            for &i in idx {
                for &j in idx {
                    mat[(split[i].0, split[j].0)] += op.get(i, j);
                }
            }
        }
        Operator::from_matrix(mat)
    }

    /// ρ_keep = Tr over every other mode.
    pub fn partial_trace(
        &self,
        rho: &DensityOperator,
        partition: &Partition,
        keep: &str,
    ) -> Result<DensityOperator> {
        partition.check_against(&self.system)?;
        let modes = partition.modes_of(keep)?;
        self.reduce(rho, modes)
    }

    /// Fock space of the listed modes, unrestricted.
    pub fn subspace(&self, modes: &[usize]) -> Result<FockSpace> {
        FockSpace::new(self.system.subsystem(modes)?)
    }

    /// Tensor product of operators on disjoint mode groups. Modes not listed
    /// carry the identity; entries outside a restricted basis are dropped.
    pub fn product_operator(&self, factors: &[(&[usize], &Operator)]) -> Result<Operator> {
        let mut all = Vec::new();
        for (modes, op) in factors {
            all.extend_from_slice(modes);
            let d = self.system.subsystem(modes)?.product_dim();
            if op.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: op.dim(),
                });
            }
        }
        self.check_modes(&all)?;
        let splits: Vec<Vec<(usize, u64)>> = factors.iter().map(|(m, _)| self.split(m)).collect();
        let whole = self.split(&all);
        let dim = self.dim();
        let mut mat = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                if whole[i].1 != whole[j].1 {
                    continue;
                }
                let mut v = Complex64::new(1.0, 0.0);
                for (k, (_, op)) in factors.iter().enumerate() {
                    v *= op.get(splits[k][i].0, splits[k][j].0);
                    if v == Complex64::new(0.0, 0.0) {
                        break;
                    }
                }
                mat[(i, j)] = v;
            }
        }
        Operator::from_matrix(mat)
    }

    /// Product state ρ₁ ⊗ ρ₂ ⊗ … over mode groups covering every mode.
    pub fn product_density(
        &self,
        factors: &[(&[usize], &DensityOperator)],
    ) -> Result<DensityOperator> {
        let covered: usize = factors.iter().map(|(m, _)| m.len()).sum();
        if covered != self.mode_count() {
            return Err(Error::InvalidPartition(
                "product state factors must cover every mode".into(),
            ));
        }
        let ops: Vec<Operator> = factors.iter().map(|(_, r)| r.to_operator()).collect();
        let refs: Vec<(&[usize], &Operator)> = factors
            .iter()
            .zip(&ops)
            .map(|((m, _), o)| (*m, o))
            .collect();
        DensityOperator::from_operator(self.product_operator(&refs)?)
    }

    /// Product pure state over mode groups covering every mode.
    pub fn product_pure(&self, factors: &[(&[usize], &PureState)]) -> Result<PureState> {
        let covered: usize = factors.iter().map(|(m, _)| m.len()).sum();
        let mut all = Vec::new();
        for (m, _) in factors {
            all.extend_from_slice(m);
        }
        self.check_modes(&all)?;
        if covered != self.mode_count() {
            return Err(Error::InvalidPartition(
                "product state factors must cover every mode".into(),
            ));
        }
        let splits: Vec<Vec<(usize, u64)>> = factors.iter().map(|(m, _)| self.split(m)).collect();
        let v = DVector::from_fn(self.dim(), |i, _| {
            factors
                .iter()
                .enumerate()
                .map(|(k, (_, s))| s.amplitude(splits[k][i].0))
                .product::<Complex64>()
        });
        PureState::new(v)
    }

    /// Embeds a state of a restricted sub-basis (`other` with the same modes)
    /// into this space, matching by occupancy pattern.
    pub fn lift_state(&self, other: &FockSpace, state: &PureState) -> Result<PureState> {
        let mut v = DVector::zeros(self.dim());
        for (k, b) in other.basis().iter().enumerate() {
            let a = state.amplitude(k);
            if a != Complex64::new(0.0, 0.0) {
                v[self.index_of(&b.occupancies)?] = a;
            }
        }
        PureState::new(v)
    }
}
