//! Particle-number super-selection rules and U(1) reference-frame tools.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockSpace, Ladder, Mode, ModeSystem};
use crate::operator::{hermitize, DensityOperator, Operator, PureState};
use crate::states::SeparableMixture;
use crate::tol;

/// Diagonal entries whose difference is below this belong to one sector.
const SECTOR_MATCH: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SSRReport {
    /// ‖N ρ − ρ N‖_F
    pub residual: f64,
    pub compliant: bool,
    pub tol: f64,
}

fn diagonal_of(n_op: &Operator) -> Result<Vec<f64>> {
    let off = n_op.off_diagonal_norm();
    if off > 0.0 {
        return Err(Error::NotDiagonal(off));
    }
    Ok(n_op.real_diagonal())
}

fn check_dims(rho: &DensityOperator, n_op: &Operator) -> Result<()> {
    if rho.dim() != n_op.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            actual: n_op.dim(),
        });
    }
    Ok(())
}

/// Commutator residual of ρ with a number operator that is diagonal in the
/// occupation basis.
pub fn ssr_check(rho: &DensityOperator, n_op: &Operator, tol: f64) -> Result<SSRReport> {
    check_dims(rho, n_op)?;
    let d = diagonal_of(n_op)?;
    let dim = rho.dim();
    let mut acc = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            acc += ((d[i] - d[j]) * rho.get(i, j).norm()).powi(2);
        }
    }
    let residual = acc.sqrt();
    Ok(SSRReport {
        residual,
        compliant: residual <= tol,
        tol,
    })
}

/// Phase average over e^{−iNθ}: zeroes every element between distinct
/// eigenvalue sectors of `n_op`.
pub fn twirl(sigma: &DensityOperator, n_op: &Operator) -> Result<DensityOperator> {
    check_dims(sigma, n_op)?;
    let d = diagonal_of(n_op)?;
    let dim = sigma.dim();
    let m = DMatrix::from_fn(dim, dim, |i, j| {
        if (d[i] - d[j]).abs() <= SECTOR_MATCH {
            sigma.get(i, j)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    DensityOperator::new(m)
}

#[derive(Debug, Clone)]
pub struct Sector {
    /// Eigenvalue of the number operator labelling the sector.
    pub number: i64,
    /// Tr(Π_N ρ)
    pub weight: f64,
    /// Basis indices spanning the sector.
    pub indices: Vec<usize>,
    /// Π_N ρ Π_N / P_N on the full space.
    pub state: DensityOperator,
}

#[derive(Debug, Clone)]
pub struct SectorDecomposition {
    pub sectors: Vec<Sector>,
}

impl SectorDecomposition {
    pub fn total_weight(&self) -> f64 {
        self.sectors.iter().map(|s| s.weight).sum()
    }

    pub fn weight_of(&self, number: i64) -> f64 {
        self.sectors
            .iter()
            .find(|s| s.number == number)
            .map_or(0.0, |s| s.weight)
    }

    /// Σ P_N ρ_N
    pub fn reassemble(&self) -> Result<DensityOperator> {
        let first = self
            .sectors
            .first()
            .ok_or_else(|| Error::InvalidArgument("no sectors".into()))?;
        let dim = first.state.dim();
        let mut acc = DMatrix::zeros(dim, dim);
        for s in &self.sectors {
            acc += s.state.matrix() * Complex64::new(s.weight, 0.0);
        }
        DensityOperator::new(hermitize(&acc))
    }
}

/// Splits ρ into number sectors, omitting those with weight below 1e-14.
pub fn sector_decompose(rho: &DensityOperator, n_op: &Operator) -> Result<SectorDecomposition> {
    check_dims(rho, n_op)?;
    let d = diagonal_of(n_op)?;
    let mut labels: Vec<i64> = d.iter().map(|v| v.round() as i64).collect();
    labels.sort_unstable();
    labels.dedup();
    let dim = rho.dim();
    let mut sectors = Vec::new();
    for n in labels {
        let indices: Vec<usize> = (0..dim)
            .filter(|&i| (d[i] - n as f64).abs() <= SECTOR_MATCH)
            .collect();
        let weight: f64 = indices.iter().map(|&i| rho.get(i, i).re).sum();
        if weight < tol::SECTOR_PRUNE {
            continue;
        }
        let mut m = DMatrix::zeros(dim, dim);
        for &i in &indices {
            for &j in &indices {
                m[(i, j)] = rho.get(i, j) / weight;
            }
        }
        sectors.push(Sector {
            number: n,
            weight,
            indices,
            state: DensityOperator::new(m)?,
        });
    }
    Ok(SectorDecomposition { sectors })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QcfValue {
    pub value: Complex64,
    /// Population of basis states on which the word would be pushed past a
    /// cutoff. Nonzero means the value is affected by truncation.
    pub truncation_weight: f64,
}

/// ⟨(a†)ⁿ aᵐ (b†)ˡ bᵏ⟩ for modes `a` and `b` of `space`.
#[allow(clippy::too_many_arguments)]
pub fn qcf(
    space: &FockSpace,
    rho: &DensityOperator,
    a: usize,
    b: usize,
    n: u32,
    m: u32,
    l: u32,
    k: u32,
) -> Result<QcfValue> {
    if a == b {
        return Err(Error::InvalidArgument(
            "qcf needs two distinct modes".into(),
        ));
    }
    let mut word = Vec::new();
    word.extend(std::iter::repeat_n(Ladder::Create(a), n as usize));
    word.extend(std::iter::repeat_n(Ladder::Annihilate(a), m as usize));
    word.extend(std::iter::repeat_n(Ladder::Create(b), l as usize));
    word.extend(std::iter::repeat_n(Ladder::Annihilate(b), k as usize));
    let op = space.word(&word)?;
    let modes = space.system().modes();
    let saturates = |mode: usize, occ: u32, up: u32, down: u32| {
        occ >= down
            && i64::from(occ) - i64::from(down) + i64::from(up) > i64::from(modes[mode].cutoff)
    };
    let truncation_weight = space
        .basis()
        .iter()
        .enumerate()
        .filter(|(_, s)| {
            saturates(a, s.occupancies[a], n, m) || saturates(b, s.occupancies[b], l, k)
        })
        .map(|(i, _)| rho.get(i, i).re)
        .sum();
    Ok(QcfValue {
        value: op.expectation(rho),
        truncation_weight,
    })
}

#[derive(Debug, Clone)]
pub struct SeparableSsrReport {
    /// Per component: every factor commutes with its local number operator.
    pub local: Vec<bool>,
    pub local_residuals: Vec<f64>,
    pub global: SSRReport,
    /// Global compliance without local compliance of every component.
    pub caveat: bool,
}

impl SeparableSsrReport {
    pub fn all_local(&self) -> bool {
        self.local.iter().all(|&b| b)
    }
}

/// Checks local compliance of every component and global compliance of the
/// summed state, with number weights per mode.
pub fn separable_ssr_theorem_check(
    mix: &SeparableMixture,
    weights: &[i64],
    tol: f64,
) -> Result<SeparableSsrReport> {
    let space = mix.space();
    let mut local_ops = Vec::new();
    for (_, modes) in mix.partition().subsystems() {
        let sub = space.subspace(modes)?;
        let w: Vec<i64> = modes.iter().map(|&m| weights[m]).collect();
        local_ops.push(sub.number_op(&w)?);
    }
    let mut local = Vec::new();
    let mut local_residuals = Vec::new();
    for comp in mix.components() {
        let mut worst: f64 = 0.0;
        for (factor, op) in comp.factors.iter().zip(&local_ops) {
            worst = worst.max(ssr_check(factor, op, tol)?.residual);
        }
        local.push(worst <= tol);
        local_residuals.push(worst);
    }
    let summed = mix.summed()?;
    let global = ssr_check(&summed, &space.number_op(weights)?, tol)?;
    let caveat = global.compliant && !local.iter().all(|&b| b);
    Ok(SeparableSsrReport {
        local,
        local_residuals,
        global,
        caveat,
    })
}

/// |θ_p⟩ = (n_max+1)^{−1/2} Σₙ e^{inθ_p}|n⟩ with θ_p = 2πp/(n_max+1).
pub fn phase_state(n_max: u32, p: u32) -> Result<PureState> {
    if p > n_max {
        return Err(Error::InvalidArgument(format!(
            "p = {p} exceeds n_max = {n_max}"
        )));
    }
    let d = n_max as usize + 1;
    let theta = phase_angle(n_max, p);
    let norm = (d as f64).sqrt();
    PureState::normalized(DVector::from_fn(d, |n, _| {
        Complex64::from_polar(1.0 / norm, n as f64 * theta)
    }))
}

pub fn phase_angle(n_max: u32, p: u32) -> f64 {
    2.0 * std::f64::consts::PI * f64::from(p) / (f64::from(n_max) + 1.0)
}

/// |⟨θ_q| e^{−iωN̂Δt} |θ_p⟩|² in closed form.
pub fn clock_prob(p: u32, q: u32, omega_dt: f64, n_max: u32) -> f64 {
    let d = f64::from(n_max) + 1.0;
    let delta = phase_angle(n_max, p) - phase_angle(n_max, q) - omega_dt;
    let half = 0.5 * delta;
    let s = half.sin();
    // Near multiples of 2π the ratio is 0/0; its limit is 1.
    if s.abs() < 1e-7 {
        let k = (delta / (2.0 * std::f64::consts::PI)).round();
        let eps = half - k * std::f64::consts::PI;
        return 1.0 - (d * d - 1.0) * eps * eps / 3.0;
    }
    let num = (d * half).sin();
    (num * num) / (d * d * s * s)
}

/// Σₘ Cₘ |m⟩_S |n_ref − m⟩_R on modes `S` (cutoff m_max) and `R` (cutoff n_ref).
pub fn internalise(c: &[Complex64], n_ref: u32) -> Result<(FockSpace, PureState)> {
    if c.is_empty() {
        return Err(Error::InvalidArgument("no amplitudes".into()));
    }
    let m_max = (c.len() - 1) as u32;
    if n_ref < m_max {
        return Err(Error::InvalidArgument(format!(
            "reference number {n_ref} is smaller than m_max = {m_max}"
        )));
    }
    let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > tol::NORM {
        return Err(Error::NotNormalized(norm));
    }
    let space = FockSpace::new(ModeSystem::new(vec![
        Mode::bose("S", m_max),
        Mode::bose("R", n_ref),
    ])?)?;
    let mut v = DVector::zeros(space.dim());
    for (m, &cm) in c.iter().enumerate() {
        v[space.index_of(&[m as u32, n_ref - m as u32])?] = cm;
    }
    Ok((space.clone(), PureState::new(v)?))
}

/// Reads Cₘ back from an internalised state; weight outside the
/// |m⟩|n_ref − m⟩ manifold is an error.
pub fn externalise(space: &FockSpace, state: &PureState, n_ref: u32) -> Result<Vec<Complex64>> {
    let s = space.system().mode_index("S")?;
    let r = space.system().mode_index("R")?;
    let m_max = space.system().modes()[s].cutoff;
    let mut out = Vec::with_capacity(m_max as usize + 1);
    for m in 0..=m_max.min(n_ref) {
        let mut occ = vec![0; space.mode_count()];
        occ[s] = m;
        occ[r] = n_ref - m;
        out.push(state.amplitude(space.index_of(&occ)?));
    }
    let norm = out.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > tol::NORM {
        return Err(Error::NotNormalized(norm));
    }
    Ok(out)
}
