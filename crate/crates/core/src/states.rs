//! Constructors for named states and explicit separable mixtures.
//!
//! Two-level systems are encoded as single modes with cutoff 1: occupancy 0
//! is the +1 eigenstate of σ_z and occupancy 1 the −1 eigenstate.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockSpace, Mode, ModeSystem, Partition};
use crate::operator::{hermitize, DensityOperator, PureState};
use crate::tol;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn ln_factorial(n: u32) -> f64 {
    (1..=n).map(|k| f64::from(k).ln()).sum()
}

/// e^{−λ} λⁿ / n!
pub fn poisson_pmf(mean: f64, n: u32) -> f64 {
    if mean == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    (f64::from(n) * mean.ln() - mean - ln_factorial(n)).exp()
}

/// Poisson probability beyond `cutoff`, summed directly to avoid cancellation.
pub fn poisson_tail(mean: f64, cutoff: u32) -> f64 {
    if mean == 0.0 {
        return 0.0;
    }
    let mut n = cutoff + 1;
    let mut term = poisson_pmf(mean, n);
    let mut acc = 0.0;
    while term > 0.0 && (f64::from(n) < mean || term > acc * 1e-17) {
        acc += term;
        n += 1;
        term *= mean / f64::from(n);
    }
    acc
}

fn check_tail(mean: f64, cutoff: u32) -> Result<()> {
    let tail = poisson_tail(mean, cutoff);
    if tail > tol::POISSON_TAIL {
        return Err(Error::InsufficientCutoff {
            cutoff,
            tail,
            limit: tol::POISSON_TAIL,
        });
    }
    Ok(())
}

/// Single-mode space with the given cutoff.
pub fn single_mode(cutoff: u32) -> Result<FockSpace> {
    FockSpace::new(ModeSystem::bosons(1, cutoff)?)
}

/// Truncated coherent state |β⟩ on one mode, renormalized. Fails when the
/// Poisson tail beyond the cutoff exceeds 1e-10.
pub fn coherent(beta: Complex64, cutoff: u32) -> Result<PureState> {
    let mean = beta.norm_sqr();
    check_tail(mean, cutoff)?;
    let v = DVector::from_fn(cutoff as usize + 1, |n, _| {
        let n = n as u32;
        if mean == 0.0 {
            return if n == 0 { c(1.0) } else { c(0.0) };
        }
        let modulus = poisson_pmf(mean, n).sqrt();
        Complex64::from_polar(modulus, f64::from(n) * beta.arg())
    });
    PureState::normalized(v)
}

/// Two modes, cutoff 1 each.
pub fn qubit_pair_space() -> Result<FockSpace> {
    FockSpace::new(ModeSystem::labeled_bosons(&["A", "B"], 1)?)
}

pub fn qubit_triple_space() -> Result<FockSpace> {
    FockSpace::new(ModeSystem::labeled_bosons(&["A", "B", "C"], 1)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellKind {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellKind {
    /// Ψ± have one boson in total; Φ± mix zero and two.
    pub fn conserves_number(self) -> bool {
        matches!(self, Self::PsiPlus | Self::PsiMinus)
    }
}

/// Ψ± = (|0,1⟩ ± |1,0⟩)/√2, Φ± = (|0,0⟩ ± |1,1⟩)/√2 on [`qubit_pair_space`].
pub fn bell_one_boson(kind: BellKind) -> Result<PureState> {
    let h = c(FRAC_1_SQRT_2);
    let amps = match kind {
        BellKind::PsiPlus => [c(0.0), h, h, c(0.0)],
        BellKind::PsiMinus => [c(0.0), h, -h, c(0.0)],
        BellKind::PhiPlus => [h, c(0.0), c(0.0), h],
        BellKind::PhiMinus => [h, c(0.0), c(0.0), -h],
    };
    PureState::from_slice(&amps)
}

/// (|+1,+1,+1⟩ + |−1,−1,−1⟩)/√2 on [`qubit_triple_space`].
pub fn ghz() -> Result<PureState> {
    let mut v = DVector::zeros(8);
    v[0] = c(FRAC_1_SQRT_2);
    v[7] = c(FRAC_1_SQRT_2);
    PureState::new(v)
}

/// (|+1,−1⟩ − |−1,+1⟩)/√2 on [`qubit_pair_space`].
pub fn singlet_spin() -> Result<PureState> {
    bell_one_boson(BellKind::PsiMinus)
}

/// Modes (a1, b1, a2, b2) with cutoff 1: two Schwinger spin-½ subsystems.
pub fn spin_pair_space() -> Result<FockSpace> {
    FockSpace::new(ModeSystem::labeled_bosons(&["a1", "b1", "a2", "b2"], 1)?)
}

/// Singlet of two one-boson Schwinger spins on [`spin_pair_space`]. Spin up
/// is the boson in mode b.
pub fn schwinger_singlet(space: &FockSpace) -> Result<PureState> {
    space.superposition(&[(c(1.0), &[0, 1, 1, 0]), (c(-1.0), &[1, 0, 0, 1])])
}

fn binomial(n: u32, k: u32) -> f64 {
    (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)).exp()
}

/// ((cosθ e^{iχ/2} a + sinθ e^{−iχ/2} b)†)^N / √N! |0⟩ on two modes.
/// The amplitude of |k, N−k⟩ is √C(N,k) cos^kθ sin^{N−k}θ e^{−i(2k−N)χ/2}.
pub fn binomial_state(theta: f64, chi: f64, n: u32, cutoff: u32) -> Result<(FockSpace, PureState)> {
    if cutoff < n {
        return Err(Error::InvalidArgument(format!(
            "cutoff {cutoff} below N = {n}"
        )));
    }
    let space = FockSpace::new(ModeSystem::labeled_bosons(&["a", "b"], cutoff)?)?;
    let mut v = DVector::zeros(space.dim());
    let (ct, st) = (theta.cos(), theta.sin());
    for k in 0..=n {
        let modulus = binomial(n, k).sqrt() * ct.powi(k as i32) * st.powi((n - k) as i32);
        let phase = -(2.0 * f64::from(k) - f64::from(n)) * chi / 2.0;
        v[space.index_of(&[k, n - k])?] = Complex64::from_polar(1.0, phase) * modulus;
    }
    let state = PureState::normalized(v)?;
    Ok((space, state))
}

/// ρ = (d³−d)⁻¹[(d−Φ)1 + (dΦ−1)V] on a d×d product basis, with V the swap.
pub fn werner_qudit(d: u32, phi: f64) -> Result<DensityOperator> {
    if d < 2 {
        return Err(Error::InvalidArgument("Werner state needs d ≥ 2".into()));
    }
    let du = d as usize;
    let df = f64::from(d);
    let pre = 1.0 / (df * df * df - df);
    let dim = du * du;
    let m = DMatrix::from_fn(dim, dim, |row, col| {
        let (r, s) = (row / du, row % du);
        let (n, m) = (col / du, col % du);
        let id = if row == col { df - phi } else { 0.0 };
        let swap = if r == m && s == n {
            df * phi - 1.0
        } else {
            0.0
        };
        c(pre * (id + swap))
    });
    DensityOperator::new(m)
}

/// Space of a d-level Werner pair: two modes with cutoff d−1.
pub fn werner_space(d: u32) -> Result<FockSpace> {
    FockSpace::new(ModeSystem::labeled_bosons(&["A", "B"], d - 1)?)
}

/// One term P_R ρ_R^A ⊗ ρ_R^B ⊗ … of a separable state. Factors follow the
/// subsystem order of the partition and live on each subsystem's product basis.
#[derive(Debug, Clone)]
pub struct MixtureComponent {
    pub weight: f64,
    pub factors: Vec<DensityOperator>,
}

/// Separable state kept as its components.
#[derive(Debug, Clone)]
pub struct SeparableMixture {
    space: FockSpace,
    partition: Partition,
    components: Vec<MixtureComponent>,
}

impl SeparableMixture {
    pub fn new(
        space: FockSpace,
        partition: Partition,
        components: Vec<MixtureComponent>,
    ) -> Result<Self> {
        if space.system().restriction().is_some() {
            return Err(Error::InvalidModeSystem(
                "separable mixtures need an unrestricted product basis".into(),
            ));
        }
        partition.check_against(space.system())?;
        let covered: usize = partition.subsystems().iter().map(|(_, m)| m.len()).sum();
        if covered != space.mode_count() {
            return Err(Error::InvalidPartition(
                "partition must cover every mode".into(),
            ));
        }
        if components.is_empty() {
            return Err(Error::InvalidProbabilities("no components".into()));
        }
        let dims: Vec<usize> = partition
            .subsystems()
            .iter()
            .map(|(_, m)| space.system().subsystem(m).map(|s| s.product_dim()))
            .collect::<Result<_>>()?;
        let mut total = 0.0;
        for comp in &components {
            if comp.weight < 0.0 || !comp.weight.is_finite() {
                return Err(Error::InvalidProbabilities(format!(
                    "weight {}",
                    comp.weight
                )));
            }
            total += comp.weight;
            if comp.factors.len() != dims.len() {
                return Err(Error::DimensionMismatch {
                    expected: dims.len(),
                    actual: comp.factors.len(),
                });
            }
            for (f, &d) in comp.factors.iter().zip(&dims) {
                if f.dim() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        actual: f.dim(),
                    });
                }
            }
        }
        if (total - 1.0).abs() > tol::TRACE {
            return Err(Error::InvalidProbabilities(format!(
                "weights sum to {total}"
            )));
        }
        Ok(Self {
            space,
            partition,
            components,
        })
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn components(&self) -> &[MixtureComponent] {
        &self.components
    }

    /// Density operator of one component, ρ_R^A ⊗ ρ_R^B ⊗ …
    pub fn component_state(&self, k: usize) -> Result<DensityOperator> {
        let comp = &self.components[k];
        let factors: Vec<(&[usize], &DensityOperator)> = self
            .partition
            .subsystems()
            .iter()
            .zip(&comp.factors)
            .map(|((_, m), f)| (m.as_slice(), f))
            .collect();
        self.space.product_density(&factors)
    }

    /// Σ_R P_R ρ_R^A ⊗ ρ_R^B ⊗ …
    pub fn summed(&self) -> Result<DensityOperator> {
        let dim = self.space.dim();
        let mut acc = DMatrix::zeros(dim, dim);
        for (k, comp) in self.components.iter().enumerate() {
            acc += self.component_state(k)?.matrix() * c(comp.weight);
        }
        DensityOperator::new(hermitize(&acc))
    }
}

/// A state with a label and a short description of where it comes from.
#[derive(Debug, Clone)]
pub struct NamedState {
    pub label: String,
    pub note: String,
    pub space: FockSpace,
    pub state: DensityOperator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerstraeteForm {
    Mixture,
    Sectorized,
}

/// (|0⟩ + ω|1⟩)/√2
pub fn psi_omega(omega: Complex64) -> Result<PureState> {
    PureState::from_slice(&[c(FRAC_1_SQRT_2), omega * FRAC_1_SQRT_2])
}

/// The four-component state ¼ Σ_ω |ψ_ω⟩⟨ψ_ω| ⊗ |ψ_ω⟩⟨ψ_ω| with
/// ω ∈ {1, i, −1, −i}, on [`qubit_pair_space`]. The mixture form also
/// returns its components.
pub fn verstraete_state(
    form: VerstraeteForm,
) -> Result<(DensityOperator, Option<SeparableMixture>)> {
    let space = qubit_pair_space()?;
    match form {
        VerstraeteForm::Mixture => {
            let omegas = [c(1.0), Complex64::i(), c(-1.0), -Complex64::i()];
            let components = omegas
                .iter()
                .map(|&w| {
                    let f = psi_omega(w)?.density();
                    Ok(MixtureComponent {
                        weight: 0.25,
                        factors: vec![f.clone(), f],
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let mix = SeparableMixture::new(space, Partition::bipartite(&[0], &[1])?, components)?;
            Ok((mix.summed()?, Some(mix)))
        }
        VerstraeteForm::Sectorized => {
            let q = 0.25;
            let m = DMatrix::from_row_slice(
                4,
                4,
                &[
                    c(q),
                    c(0.0),
                    c(0.0),
                    c(0.0),
                    c(0.0),
                    c(q),
                    c(q),
                    c(0.0),
                    c(0.0),
                    c(q),
                    c(q),
                    c(0.0),
                    c(0.0),
                    c(0.0),
                    c(0.0),
                    c(q),
                ],
            );
            Ok((DensityOperator::new(m)?, None))
        }
    }
}

/// Phase average of |αe^{−iθ}, αe^{−iθ}⟩⟨·| built from its closed-form
/// elements e^{−2|α|²}|α|^{n+m+p+q} δ_{n+p,m+q}/√(n!m!p!q!), renormalized
/// for the truncation. Basis: two modes with the given cutoff.
pub fn two_mode_coherent_mixture(alpha: f64, cutoff: u32) -> Result<(FockSpace, DensityOperator)> {
    let mean = alpha * alpha;
    check_tail(mean, cutoff)?;
    let space = FockSpace::new(ModeSystem::labeled_bosons(&["A", "B"], cutoff)?)?;
    let kept: f64 = (0..=cutoff).map(|n| poisson_pmf(mean, n)).sum();
    let norm = kept * kept;
    let dim = space.dim();
    let basis = space.basis().to_vec();
    // √(pmf(n)) = e^{−|α|²/2}|α|ⁿ/√n!, so each element is a product of four.
    let amp = |n: u32| poisson_pmf(mean, n).sqrt();
    let m = DMatrix::from_fn(dim, dim, |i, j| {
        let (n, p) = (basis[i].occupancies[0], basis[i].occupancies[1]);
        let (mm, q) = (basis[j].occupancies[0], basis[j].occupancies[1]);
        if n + p != mm + q {
            return c(0.0);
        }
        c(amp(n) * amp(p) * amp(mm) * amp(q) / norm)
    });
    Ok((space, DensityOperator::new(m)?))
}

/// Σₘ Cₘ |M−m⟩_mol |2m⟩_atom with M = len(C) − 1.
pub fn dissociation_state(c_m: &[Complex64]) -> Result<(FockSpace, PureState)> {
    if c_m.is_empty() {
        return Err(Error::InvalidArgument("no amplitudes".into()));
    }
    let big_m = (c_m.len() - 1) as u32;
    let space = FockSpace::new(ModeSystem::new(vec![
        Mode::bose("mol", big_m),
        Mode::bose("atom", 2 * big_m),
    ])?)?;
    let mut v = DVector::zeros(space.dim());
    for (m, &cm) in c_m.iter().enumerate() {
        let m = m as u32;
        v[space.index_of(&[big_m - m, 2 * m])?] = cm;
    }
    let state = PureState::new(v)?;
    Ok((space, state))
}

/// Σ_k C_k |k, N−k⟩ with N = len(C) − 1.
pub fn two_mode_n_boson(c_k: &[Complex64]) -> Result<(FockSpace, PureState)> {
    if c_k.is_empty() {
        return Err(Error::InvalidArgument("no amplitudes".into()));
    }
    let n = (c_k.len() - 1) as u32;
    let space = FockSpace::new(ModeSystem::labeled_bosons(&["A", "B"], n)?)?;
    let mut v = DVector::zeros(space.dim());
    for (k, &ck) in c_k.iter().enumerate() {
        v[space.index_of(&[k as u32, n - k as u32])?] = ck;
    }
    let state = PureState::new(v)?;
    Ok((space, state))
}

/// Σ_k P_k |k, N−k⟩⟨k, N−k| with N = len(P) − 1, kept as its components.
pub fn mixed_n_boson(p_k: &[f64]) -> Result<SeparableMixture> {
    if p_k.is_empty() {
        return Err(Error::InvalidArgument("no probabilities".into()));
    }
    let n = (p_k.len() - 1) as u32;
    let space = FockSpace::new(ModeSystem::labeled_bosons(&["A", "B"], n)?)?;
    let d = n as usize + 1;
    let components = p_k
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            Ok(MixtureComponent {
                weight: p,
                factors: vec![
                    PureState::basis(d, k)?.density(),
                    PureState::basis(d, n as usize - k)?.density(),
                ],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SeparableMixture::new(space, Partition::bipartite(&[0], &[1])?, components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ssr::ssr_check;

    #[test]
    fn coherent_examples() {
        let vac = coherent(c(0.0), 5).unwrap();
        assert_eq!(vac.amplitude(0), c(1.0));
        let b = coherent(c(2f64.sqrt()), 30).unwrap();
        let expected = 2.0 / (std::f64::consts::E * 2f64.sqrt());
        assert!((b.amplitude(2).norm() - expected).abs() < 1e-12);
        assert!(matches!(
            coherent(c(3.0), 5),
            Err(Error::InsufficientCutoff { .. })
        ));
    }

    #[test]
    fn bell_states_and_number_flags() {
        let space = qubit_pair_space().unwrap();
        let n = space.total_number();
        for kind in [
            BellKind::PsiPlus,
            BellKind::PsiMinus,
            BellKind::PhiPlus,
            BellKind::PhiMinus,
        ] {
            let rho = bell_one_boson(kind).unwrap().density();
            let compliant = ssr_check(&rho, &n, 1e-12).unwrap().compliant;
            assert_eq!(compliant, kind.conserves_number());
        }
        let psi_m = bell_one_boson(BellKind::PsiMinus).unwrap();
        assert!((psi_m.amplitude(1).re - FRAC_1_SQRT_2).abs() < 1e-16);
        assert!((psi_m.amplitude(2).re + FRAC_1_SQRT_2).abs() < 1e-16);
        let pp = bell_one_boson(BellKind::PhiPlus).unwrap();
        let pm = bell_one_boson(BellKind::PhiMinus).unwrap();
        let sum = (pp.vector() + pm.vector()) * c(FRAC_1_SQRT_2);
        assert!((sum[0] - c(1.0)).norm() < 1e-15 && sum[3].norm() < 1e-15);
    }

    #[test]
    fn binomial_edge_cases() {
        let (space, s) = binomial_state(0.0, 0.7, 3, 3).unwrap();
        assert!((space.amplitude(&s, &[3, 0]).unwrap().norm() - 1.0).abs() < 1e-15);
        let (space, s) = binomial_state(std::f64::consts::FRAC_PI_4, 0.0, 1, 1).unwrap();
        assert!((space.amplitude(&s, &[1, 0]).unwrap() - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((space.amplitude(&s, &[0, 1]).unwrap() - c(FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn werner_trace_and_symmetric_case() {
        for d in 2..5 {
            for phi in [-1.0, 0.0, 0.5, 1.0] {
                let rho = werner_qudit(d, phi).unwrap();
                assert!((rho.trace().re - 1.0).abs() < 1e-14);
            }
        }
        let rho = werner_qudit(2, 1.0).unwrap();
        // (1 + V)/6
        let expected = [
            [2.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 1.0, 0.0],
            [0.0, 1.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 2.0],
        ];
        for (i, row) in expected.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert!((rho.get(i, j).re - v / 6.0).abs() < 1e-15);
            }
        }
        assert!(matches!(werner_qudit(2, 5.0), Err(Error::NotPositive(_))));
    }

    #[test]
    fn verstraete_forms_agree() {
        let (mix, comps) = verstraete_state(VerstraeteForm::Mixture).unwrap();
        let (sect, none) = verstraete_state(VerstraeteForm::Sectorized).unwrap();
        assert!(none.is_none());
        assert_eq!(comps.unwrap().components().len(), 4);
        assert!(mix.max_abs_diff(&sect) < 1e-14);
    }

    #[test]
    fn dissociation_reduces_to_even_atom_numbers() {
        let h = c(FRAC_1_SQRT_2);
        let (space, psi) = dissociation_state(&[h, c(0.0), h]).unwrap();
        let atoms = space.reduce(&psi.density(), &[1]).unwrap();
        for n in 0..5 {
            let e = if n % 2 == 0 && n != 2 { 0.5 } else { 0.0 };
            assert!((atoms.get(n, n).re - e).abs() < 1e-15);
        }
        assert!(atoms.to_operator().off_diagonal_norm() < 1e-15);
    }

    #[test]
    fn n_boson_states() {
        let u = c(0.5);
        let (space, psi) = two_mode_n_boson(&[u, u, u, u]).unwrap();
        let n = space.total_number();
        assert!(ssr_check(&psi.density(), &n, 1e-12).unwrap().compliant);
        let mix = mixed_n_boson(&[0.2, 0.3, 0.5]).unwrap();
        let rho = mix.summed().unwrap();
        let i = mix.space().index_of(&[1, 1]).unwrap();
        assert!((rho.get(i, i).re - 0.3).abs() < 1e-15);
    }

    #[test]
    fn poisson_tail_is_small_and_positive() {
        let t = poisson_tail(2.0, 30);
        assert!(t > 0.0 && t < 1e-15);
        let t = poisson_tail(2.0, 3);
        let head: f64 = (0..=3).map(|n| poisson_pmf(2.0, n)).sum();
        assert!((t + head - 1.0).abs() < 1e-14);
    }
}
