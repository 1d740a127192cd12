//! Beam splitters, entanglement extraction, the atom-molecule Ramsey
//! process, the vacuum-superposition interferometer and number-conservation
//! checks.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockSpace, Ladder, Mode, ModeSystem};
use crate::operator::{DensityOperator, Operator, PureState, Spectrum};
use crate::ssr::ssr_check;
use crate::states::{poisson_pmf, SeparableMixture};
use crate::tol;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    /// U a† U⁻¹ = t a† + r b†
    RealRotation,
    /// U = exp(−iφ(a†b + b†a)) with φ = atan2(r, t), so U a† U⁻¹ = t a† − i r b†.
    MinusI,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeamSplitterSpec {
    pub pairs: Vec<(usize, usize)>,
    pub r: f64,
    pub t: f64,
    pub convention: Convention,
}

impl BeamSplitterSpec {
    pub fn new(pairs: Vec<(usize, usize)>, r: f64, t: f64, convention: Convention) -> Result<Self> {
        let s = r * r + t * t;
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("r² + t² = {s}")));
        }
        Ok(Self {
            pairs,
            r,
            t,
            convention,
        })
    }

    /// Spec with mixing angle φ: t = cos φ, r = sin φ.
    pub fn from_angle(pairs: Vec<(usize, usize)>, phi: f64, convention: Convention) -> Self {
        Self {
            pairs,
            r: phi.sin(),
            t: phi.cos(),
            convention,
        }
    }

    pub fn angle(&self) -> f64 {
        self.r.atan2(self.t)
    }
}

/// Generator of the beam splitter; U = exp(−i G φ).
pub fn beam_splitter_generator(space: &FockSpace, spec: &BeamSplitterSpec) -> Result<Operator> {
    let modes = space.system().modes();
    let mut used = std::collections::BTreeSet::new();
    let mut g = Operator::zeros(space.dim());
    for &(a, b) in &spec.pairs {
        for m in [a, b] {
            if m >= modes.len() {
                return Err(Error::ModeOutOfRange {
                    index: m,
                    modes: modes.len(),
                });
            }
            if !used.insert(m) {
                return Err(Error::InvalidArgument(format!(
                    "mode {m} appears in two pairs"
                )));
            }
        }
        if modes[a].statistics != modes[b].statistics || modes[a].cutoff != modes[b].cutoff {
            return Err(Error::InvalidArgument(format!(
                "modes {a} and {b} differ in statistics or cutoff"
            )));
        }
        let ba = space.word(&[Ladder::Create(b), Ladder::Annihilate(a)])?;
        let ab = space.word(&[Ladder::Create(a), Ladder::Annihilate(b)])?;
        let term = match spec.convention {
            Convention::RealRotation => (&ba - &ab).scale(Complex64::i()),
            Convention::MinusI => &ba + &ab,
        };
        g = &g + &term;
    }
    Ok(g)
}

/// Beam-splitter unitary for every listed mode pair.
pub fn beam_splitter(space: &FockSpace, spec: &BeamSplitterSpec) -> Result<Operator> {
    let g = beam_splitter_generator(space, spec)?;
    Ok(Spectrum::of(&g)?.propagator(spec.angle()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtractionCase {
    /// |2⟩_{a0}|1⟩_{a1} in, sector (N_A, N_B) = (2, 1).
    ThreeBoson,
    /// |1⟩_{a0}|1⟩_{a1} in, sector (1, 1).
    TwoBoson,
    /// c0†c1†|0⟩ in, sector (1, 1).
    TwoFermion,
}

impl ExtractionCase {
    pub fn sector(self) -> (u32, u32) {
        match self {
            Self::ThreeBoson => (2, 1),
            Self::TwoBoson | Self::TwoFermion => (1, 1),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExtractionResult {
    /// Modes (x0, x1, y0, y1): subsystem A = (x0, x1), B = (y0, y1).
    pub space: FockSpace,
    pub input: PureState,
    pub output: PureState,
    pub sector_probability: f64,
    pub projected: PureState,
}

impl ExtractionResult {
    /// Amplitude of |nA0, nA1⟩_A |nB0, nB1⟩_B in the projected state.
    pub fn amplitude(&self, occ: [u32; 4]) -> Result<Complex64> {
        self.space.amplitude(&self.projected, &occ)
    }
}

/// Mixes each mode of A with the matching mode of B and projects onto the
/// case's (N_A, N_B) sector.
pub fn extraction_experiment(case: ExtractionCase, r: f64, t: f64) -> Result<ExtractionResult> {
    let (system, input_occ) = match case {
        ExtractionCase::ThreeBoson => (
            ModeSystem::labeled_bosons(&["a0", "a1", "b0", "b1"], 3)?,
            [2, 1, 0, 0],
        ),
        ExtractionCase::TwoBoson => (
            ModeSystem::labeled_bosons(&["a0", "a1", "b0", "b1"], 2)?,
            [1, 1, 0, 0],
        ),
        ExtractionCase::TwoFermion => (
            ModeSystem::labeled_fermions(&["c0", "c1", "d0", "d1"])?,
            [1, 1, 0, 0],
        ),
    };
    let space = FockSpace::new(system)?;
    let input = creation_state(&space, &input_occ)?;
    let spec = BeamSplitterSpec::new(vec![(0, 2), (1, 3)], r, t, Convention::RealRotation)?;
    let u = beam_splitter(&space, &spec)?;
    let output = input.transform(&u)?;
    let (na, nb) = case.sector();
    let mut v = output.vector().clone();
    for (i, b) in space.basis().iter().enumerate() {
        let o = &b.occupancies;
        if o[0] + o[1] != na || o[2] + o[3] != nb {
            v[i] = c(0.0);
        }
    }
    let p = v.norm_squared();
    if p <= tol::PROB_FLOOR {
        return Err(Error::ZeroProbability(p));
    }
    let projected = PureState::normalized(v)?;
    Ok(ExtractionResult {
        space,
        input,
        output,
        sector_probability: p,
        projected,
    })
}

/// Π_k (x_k†)^{n_k} / √(n_k!) |0⟩ applied with the last mode first, so for
/// fermions it equals the plain occupation state.
fn creation_state(space: &FockSpace, occ: &[u32]) -> Result<PureState> {
    let mut word = Vec::new();
    let mut norm = 1.0;
    for (m, &n) in occ.iter().enumerate() {
        for k in 1..=n {
            word.push(Ladder::Create(m));
            norm *= f64::from(k);
        }
    }
    let op = space.word(&word)?.scale_real(1.0 / norm.sqrt());
    PureState::new(op.apply(&space.vacuum()?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialBec {
    /// Exactly N condensate atoms.
    Fock(u32),
    /// Poisson distribution of condensate number with the given mean.
    Poisson(f64),
}

/// Reduced atom-molecule state in the basis {|A⟩, |M⟩}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelRdo {
    pub atom: f64,
    pub molecule: f64,
    pub coherence: Complex64,
    /// Population outside the two-level manifold.
    pub leakage: f64,
}

#[derive(Debug, Clone)]
pub struct AtomMoleculeResult {
    pub rdo: TwoLevelRdo,
    /// (N, weight, calibrated π/2 duration) for every condensate number used.
    pub runs: Vec<(u32, f64, f64)>,
    /// Stage states (after pulse 1, free stage, pulse 2) of the first run.
    pub stages: Vec<DensityOperator>,
}

/// Modes (A, M, BEC) with weighted number n_A + 2n_M + n_BEC = N + 1.
pub fn atom_molecule_space(n: u32) -> Result<FockSpace> {
    let system = ModeSystem::new(vec![
        Mode::bose("A", n + 1),
        Mode::bose("M", n.div_ceil(2).max(1)),
        Mode::bose("BEC", n + 1),
    ])?
    .with_weighted_number(&[1, 2, 1], n + 1)?;
    FockSpace::new(system)
}

/// (κ/2)(b_M† b_A b_BEC + h.c.)
pub fn atom_molecule_hamiltonian(space: &FockSpace, kappa: f64) -> Result<Operator> {
    let fwd = space.word(&[
        Ladder::Create(1),
        Ladder::Annihilate(0),
        Ladder::Annihilate(2),
    ])?;
    Ok((&fwd + &fwd.adjoint()).scale_real(0.5 * kappa))
}

/// Smallest t > 0 with atom population 1/2 starting from |1, 0, N⟩.
fn calibrate_half_transfer(spectrum: &Spectrum, start: &PureState, atom: usize) -> Result<f64> {
    // ⟨atom|e^{−iHt}|start⟩ = Σ_k V[atom, k] e^{−iλ_k t} (V†|start⟩)_k
    let v = spectrum.vectors();
    let overlaps = v.adjoint() * start.vector();
    let weights: Vec<(f64, Complex64)> = spectrum
        .values()
        .iter()
        .enumerate()
        .map(|(k, &l)| (l, v[(atom, k)] * overlaps[k]))
        .collect();
    let pop = |t: f64| -> f64 {
        weights
            .iter()
            .map(|&(l, w)| w * Complex64::from_polar(1.0, -l * t))
            .sum::<Complex64>()
            .norm_sqr()
    };
    let scale = spectrum.spectral_radius();
    if scale == 0.0 {
        return Err(Error::InvalidArgument("no coupling".into()));
    }
    let step = PI / (16.0 * scale);
    let (mut lo, mut hi) = (0.0, step);
    while pop(hi) > 0.5 {
        lo = hi;
        hi += step;
        if hi > 1e3 * PI / scale {
            return Err(Error::InvalidArgument("no half transfer found".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pop(mid) > 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn atom_molecule_run(
    n: u32,
    kappa: f64,
    phi: f64,
) -> Result<(TwoLevelRdo, f64, Vec<DensityOperator>)> {
    let space = atom_molecule_space(n)?;
    let h = atom_molecule_hamiltonian(&space, kappa)?;
    let spectrum = Spectrum::of(&h)?;
    let start = space.fock_state(&[1, 0, n])?;
    let atom_idx = space.index_of(&[1, 0, n])?;
    let t_half = calibrate_half_transfer(&spectrum, &start, atom_idx)?;
    let free = Spectrum::of(&space.mode_number(1)?)?;
    let s1 = spectrum.evolve(t_half, &start)?;
    let s2 = free.evolve(phi, &s1)?;
    let s3 = spectrum.evolve(t_half, &s2)?;
    let rho = s3.density();
    let red = space.reduce(&rho, &[0, 1])?;
    let sub = space.subspace(&[0, 1])?;
    let ia = sub.index_of(&[1, 0])?;
    let im = sub.index_of(&[0, 1])?;
    let atom = red.get(ia, ia).re;
    let molecule = red.get(im, im).re;
    let rdo = TwoLevelRdo {
        atom,
        molecule,
        coherence: red.get(ia, im),
        leakage: (1.0 - atom - molecule).max(0.0),
    };
    Ok((rdo, t_half, vec![s1.density(), s2.density(), rho]))
}

/// Resonant π/2 pulse, free evolution of the molecule phase by φ, second
/// π/2 pulse. Pulse durations are calibrated per condensate number. A
/// Poisson initial condensate averages the runs over N ≥ 1 (N = 0 does not
/// couple), with the weights renormalized and the tail cut below 1e-14.
pub fn atom_molecule_process(
    initial: InitialBec,
    kappa: f64,
    phi: f64,
) -> Result<AtomMoleculeResult> {
    let weights: Vec<(u32, f64)> = match initial {
        InitialBec::Fock(n) => {
            if n == 0 {
                return Err(Error::InvalidArgument("N must be at least 1".into()));
            }
            vec![(n, 1.0)]
        }
        InitialBec::Poisson(mean) => {
            if mean.is_nan() || mean <= 0.0 {
                return Err(Error::InvalidArgument(
                    "Poisson mean must be positive".into(),
                ));
            }
            let mut w = Vec::new();
            let mut n = 1u32;
            loop {
                let p = poisson_pmf(mean, n);
                if f64::from(n) > mean && p < tol::SECTOR_PRUNE {
                    break;
                }
                if p >= tol::SECTOR_PRUNE {
                    w.push((n, p));
                }
                n += 1;
            }
            let s: f64 = w.iter().map(|(_, p)| p).sum();
            w.into_iter().map(|(n, p)| (n, p / s)).collect()
        }
    };
    let mut rdo = TwoLevelRdo {
        atom: 0.0,
        molecule: 0.0,
        coherence: c(0.0),
        leakage: 0.0,
    };
    let mut runs = Vec::new();
    let mut stages = Vec::new();
    for (n, w) in weights {
        let (r, t, s) = atom_molecule_run(n, kappa, phi)?;
        rdo.atom += w * r.atom;
        rdo.molecule += w * r.molecule;
        rdo.coherence += r.coherence * w;
        rdo.leakage += w * r.leakage;
        runs.push((n, w, t));
        if stages.is_empty() {
            stages = s;
        }
    }
    Ok(AtomMoleculeResult { rdo, runs, stages })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamseyResult {
    pub p10: f64,
    pub p01: f64,
    /// Same probabilities from the mixed input |α|²|0,0⟩⟨0,0| + |β|²|1,0⟩⟨1,0|.
    pub p10_mixed: f64,
    pub p01_mixed: f64,
}

/// Two modes, at most one boson: minus-i beam splitter at π/4, free
/// evolution Δ n̂₂ for τ, the same beam splitter again. Input α|0,0⟩ + β|1,0⟩.
pub fn ramsey_vacuum_superposition(
    alpha: Complex64,
    beta: Complex64,
    delta: f64,
    tau: f64,
) -> Result<RamseyResult> {
    let n = alpha.norm_sqr() + beta.norm_sqr();
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized(n.sqrt()));
    }
    let space = FockSpace::new(ModeSystem::bosons(2, 1)?)?;
    let spec = BeamSplitterSpec::from_angle(vec![(0, 1)], PI / 4.0, Convention::MinusI);
    let bs = beam_splitter(&space, &spec)?;
    let free = Spectrum::of(&space.mode_number(1)?.scale_real(delta))?.propagator(tau);
    let u = &bs * &(&free * &bs);
    let pure = space.superposition(&[(alpha, &[0, 0]), (beta, &[1, 0])])?;
    let out = pure.transform(&u)?.density();
    let mixed = DensityOperator::mixture(&[
        (alpha.norm_sqr(), &space.fock_state(&[0, 0])?.density()),
        (beta.norm_sqr(), &space.fock_state(&[1, 0])?.density()),
    ])?;
    let out_mixed = mixed.transform(&u)?;
    let i10 = space.index_of(&[1, 0])?;
    let i01 = space.index_of(&[0, 1])?;
    Ok(RamseyResult {
        p10: out.get(i10, i10).re,
        p01: out.get(i01, i01).re,
        p10_mixed: out_mixed.get(i10, i10).re,
        p01_mixed: out_mixed.get(i01, i01).re,
    })
}

/// λ(a b† + a† b)
pub fn hopping_hamiltonian(space: &FockSpace, a: usize, b: usize, lambda: f64) -> Result<Operator> {
    let fwd = space.word(&[Ladder::Create(b), Ladder::Annihilate(a)])?;
    Ok((&fwd + &fwd.adjoint()).scale_real(lambda))
}

/// Non-degenerate parametric amplifier λ(c a† b† + c† a b).
pub fn ndpa_hamiltonian(
    space: &FockSpace,
    a: usize,
    b: usize,
    pump: usize,
    lambda: f64,
) -> Result<Operator> {
    let fwd = space.word(&[
        Ladder::Create(a),
        Ladder::Create(b),
        Ladder::Annihilate(pump),
    ])?;
    Ok((&fwd + &fwd.adjoint()).scale_real(lambda))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagationReport {
    /// ‖[N_w, H]‖_F
    pub conservation_residual: f64,
    /// Every component factor commutes with its local weighted number.
    pub locally_compliant: bool,
    /// Global SSR residual of the evolved state at each sampled time.
    pub residuals: Vec<f64>,
    pub globally_compliant: bool,
}

/// Evolves the summed mixture under a number-conserving H and records the
/// global SSR residual at each time.
pub fn ssr_propagation_check(
    initial: &SeparableMixture,
    h: &Operator,
    weights: &[i64],
    times: &[f64],
    tol: f64,
) -> Result<PropagationReport> {
    let space = initial.space();
    let n_op = space.number_op(weights)?;
    let conservation_residual = n_op.commutator(h).frobenius_norm();
    if conservation_residual > tol::OPERATOR_HERMITIAN {
        return Err(Error::NotConserving(conservation_residual));
    }
    let local = crate::ssr::separable_ssr_theorem_check(initial, weights, tol)?;
    let rho = initial.summed()?;
    let spectrum = Spectrum::of(h)?;
    let mut residuals = Vec::with_capacity(times.len());
    for &t in times {
        let evolved = rho.transform(&spectrum.propagator(t))?;
        residuals.push(ssr_check(&evolved, &n_op, tol)?.residual);
    }
    let globally_compliant = residuals.iter().all(|&r| r <= tol);
    Ok(PropagationReport {
        conservation_residual,
        locally_compliant: local.all_local(),
        residuals,
        globally_compliant,
    })
}
