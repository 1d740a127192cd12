//! Entanglement tests: CHSH, the correlation inequality, GHZ parity,
//! spin-EPR conditional variances and the particle entanglement measure.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockSpace, Ladder, Partition};
use crate::measurement::{spectral, unrecorded_variance};
use crate::operator::{DensityOperator, Operator, PureState};
use crate::tol;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Pauli matrix for axis 0 = x, 1 = y, 2 = z, with occupancy 0 as the +1
/// eigenstate of σ_z.
pub fn pauli(axis: usize) -> Operator {
    let i = Complex64::i();
    let z = c(0.0);
    let rows = match axis {
        0 => [z, c(1.0), c(1.0), z],
        1 => [z, -i, i, z],
        _ => [c(1.0), z, z, c(-1.0)],
    };
    Operator::from_rows(2, &rows).expect("2x2")
}

/// n·σ
pub fn pauli_along(n: &[f64; 3]) -> Operator {
    let mut acc = Operator::zeros(2);
    for (k, &nk) in n.iter().enumerate() {
        acc = &acc + &pauli(k).scale_real(nk);
    }
    acc
}

/// Schwinger spin operators of one two-mode subsystem (a, b):
/// S_x = (b†a + a†b)/2, S_y = (b†a − a†b)/2i, S_z = (b†b − a†a)/2.
#[derive(Debug, Clone)]
pub struct SpinOps {
    pub sx: Operator,
    pub sy: Operator,
    pub sz: Operator,
}

impl SpinOps {
    pub fn schwinger(space: &FockSpace, a: usize, b: usize) -> Result<Self> {
        let ba = space.word(&[Ladder::Create(b), Ladder::Annihilate(a)])?;
        let ab = space.word(&[Ladder::Create(a), Ladder::Annihilate(b)])?;
        let nb = space.mode_number(b)?;
        let na = space.mode_number(a)?;
        Ok(Self {
            sx: (&ba + &ab).scale_real(0.5),
            sy: (&ba - &ab).scale(Complex64::new(0.0, -0.5)),
            sz: (&nb - &na).scale_real(0.5),
        })
    }

    pub fn component(&self, axis: usize) -> &Operator {
        match axis {
            0 => &self.sx,
            1 => &self.sy,
            _ => &self.sz,
        }
    }

    /// S_x² + S_y² + S_z²
    pub fn casimir(&self) -> Operator {
        let sq = |o: &Operator| o * o;
        &(&sq(&self.sx) + &sq(&self.sy)) + &sq(&self.sz)
    }
}

/// Unit measurement directions for the four CHSH observables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CHSHSetting {
    pub a1: [f64; 3],
    pub a2: [f64; 3],
    pub b1: [f64; 3],
    pub b2: [f64; 3],
}

fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

impl CHSHSetting {
    pub fn new(a1: [f64; 3], a2: [f64; 3], b1: [f64; 3], b2: [f64; 3]) -> Result<Self> {
        for v in [&a1, &a2, &b1, &b2] {
            let n = norm3(v);
            if (n - 1.0).abs() > 1e-12 {
                return Err(Error::NotNormalized(n));
            }
        }
        Ok(Self { a1, a2, b1, b2 })
    }

    /// b₁ = x̂, b₂ = ẑ, a₁ ∥ b₁ + b₂, a₂ ∥ b₁ − b₂.
    pub fn optimal() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            a1: [h, 0.0, h],
            a2: [h, 0.0, -h],
            b1: [1.0, 0.0, 0.0],
            b2: [0.0, 0.0, 1.0],
        }
    }
}

fn check_two_qubit(rho: &DensityOperator) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: rho.dim(),
        });
    }
    Ok(())
}

/// T_ij = Tr(ρ σ_i ⊗ σ_j) for a two-qubit state.
pub fn correlation_tensor(rho: &DensityOperator) -> Result<[[f64; 3]; 3]> {
    check_two_qubit(rho)?;
    let mut t = [[0.0; 3]; 3];
    for (i, row) in t.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = pauli(i).kron(&pauli(j)).expectation(rho).re;
        }
    }
    Ok(t)
}

/// E(a, b) = aᵀ T b
pub fn correlation(t: &[[f64; 3]; 3], a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let mut e = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            e += a[i] * t[i][j] * b[j];
        }
    }
    e
}

/// CHSH combination with the minus sign on term `minus` (0..4, in the order
/// A₁B₁, A₁B₂, A₂B₁, A₂B₂).
pub fn chsh_from_tensor(t: &[[f64; 3]; 3], s: &CHSHSetting, minus: usize) -> f64 {
    let terms = [
        correlation(t, &s.a1, &s.b1),
        correlation(t, &s.a1, &s.b2),
        correlation(t, &s.a2, &s.b1),
        correlation(t, &s.a2, &s.b2),
    ];
    terms
        .iter()
        .enumerate()
        .map(|(k, &e)| if k == minus { -e } else { e })
        .sum()
}

/// S = E(A₁B₁) + E(A₁B₂) + E(A₂B₁) − E(A₂B₂)
pub fn chsh(rho: &DensityOperator, setting: &CHSHSetting) -> Result<f64> {
    Ok(chsh_from_tensor(&correlation_tensor(rho)?, setting, 3))
}

/// Tr(ρ a·σ ⊗ b·σ) evaluated with full operators.
pub fn chsh_correlation(rho: &DensityOperator, a: &[f64; 3], b: &[f64; 3]) -> Result<f64> {
    check_two_qubit(rho)?;
    Ok(pauli_along(a).kron(&pauli_along(b)).expectation(rho).re)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessVerdict {
    pub lhs: f64,
    pub rhs: f64,
    pub violated: bool,
    /// Signed amount by which the separable-state bound is broken.
    pub margin: f64,
}

impl WitnessVerdict {
    /// Separable bound lhs ≤ rhs.
    fn upper(lhs: f64, rhs: f64) -> Self {
        let margin = lhs - rhs;
        Self {
            lhs,
            rhs,
            violated: margin > tol::DECISION,
            margin,
        }
    }

    /// Separable bound lhs ≥ rhs.
    fn lower(lhs: f64, rhs: f64) -> Self {
        let margin = rhs - lhs;
        Self {
            lhs,
            rhs,
            violated: margin > tol::DECISION,
            margin,
        }
    }
}

/// |⟨Ω_A† Ω_B⟩|² ≤ ⟨Ω_A†Ω_A Ω_B†Ω_B⟩ for separable states. Both operators
/// are given on the full space and must act on disjoint modes.
pub fn correlation_test(
    rho: &DensityOperator,
    omega_a: &Operator,
    omega_b: &Operator,
) -> WitnessVerdict {
    let ad = omega_a.adjoint();
    let lhs = (&ad * omega_b).expectation(rho).norm_sqr();
    let rhs = (&(&ad * omega_a) * &(&omega_b.adjoint() * omega_b))
        .expectation(rho)
        .re;
    WitnessVerdict::upper(lhs, rhs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParityCheck {
    pub label: String,
    pub expected: f64,
    /// ‖Ô|Ψ⟩ − λ|Ψ⟩‖
    pub residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GhzParityReport {
    pub checks: Vec<ParityCheck>,
}

impl GhzParityReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Eigenvalue checks σxσyσy = σyσxσy = σyσyσx = −1 and σxσxσx = +1.
pub fn ghz_parity(state: &PureState, tol: f64) -> Result<GhzParityReport> {
    if state.dim() != 8 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            actual: state.dim(),
        });
    }
    let specs = [
        ("xyy", [0, 1, 1], -1.0),
        ("yxy", [1, 0, 1], -1.0),
        ("yyx", [1, 1, 0], -1.0),
        ("xxx", [0, 0, 0], 1.0),
    ];
    let checks = specs
        .iter()
        .map(|(label, axes, expected)| {
            let op = pauli(axes[0]).kron(&pauli(axes[1])).kron(&pauli(axes[2]));
            let v = op.apply(state) - state.vector() * c(*expected);
            let residual = v.norm();
            ParityCheck {
                label: (*label).to_string(),
                expected: *expected,
                residual,
                pass: residual <= tol,
            }
        })
        .collect();
    Ok(GhzParityReport { checks })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinEprReport {
    pub verdict: WitnessVerdict,
    pub var_x: f64,
    pub var_y: f64,
    /// Probability of conditioning outcomes skipped as zero-probability.
    pub skipped_weight: f64,
}

/// Unrecorded conditional variances of S_x1 given S_x2 and S_y1 given S_y2,
/// against ¼|⟨S_z1⟩|². Separable states keep lhs ≥ rhs.
pub fn spin_epr(
    space: &FockSpace,
    rho: &DensityOperator,
    first: (usize, usize),
    second: (usize, usize),
) -> Result<SpinEprReport> {
    let s1 = SpinOps::schwinger(space, first.0, first.1)?;
    let s2 = SpinOps::schwinger(space, second.0, second.1)?;
    let mut vars = [0.0; 2];
    let mut skipped = 0.0;
    for (axis, slot) in vars.iter_mut().enumerate() {
        let target = spectral(s1.component(axis), tol::MERGE)?;
        let given = spectral(s2.component(axis), tol::MERGE)?;
        let (v, s) = unrecorded_variance(rho, &target, &given)?;
        *slot = v;
        skipped += s;
    }
    let sz = s1.sz.expectation(rho).re;
    let lhs = vars[0] * vars[1];
    let rhs = 0.25 * sz * sz;
    Ok(SpinEprReport {
        verdict: WitnessVerdict::lower(lhs, rhs),
        var_x: vars[0],
        var_y: vars[1],
        skipped_weight: skipped,
    })
}

/// Sector-resolved entanglement entropy E_P = Σ P_{n_A n_B} E_M(σ_{n_A n_B})
/// over local number sectors of a bipartition, with
/// E_M(σ) = max(0, S(σ_A) − S(σ)) in nats. On pure sector states this is
/// the entropy of the reduced state; separable sector states give zero.
pub fn particle_entanglement(
    space: &FockSpace,
    rho: &DensityOperator,
    partition: &Partition,
) -> Result<f64> {
    let subs = partition.subsystems();
    if subs.len() != 2 {
        return Err(Error::InvalidPartition(
            "E_P needs exactly two subsystems".into(),
        ));
    }
    partition.check_against(space.system())?;
    let (a_modes, b_modes) = (&subs[0].1, &subs[1].1);
    let covered = a_modes.len() + b_modes.len();
    if covered != space.mode_count() {
        return Err(Error::InvalidPartition(
            "partition must cover every mode".into(),
        ));
    }
    let local = |occ: &[u32], modes: &[usize]| modes.iter().map(|&m| occ[m]).sum::<u32>();
    let mut sectors: Vec<((u32, u32), Vec<usize>)> = Vec::new();
    for (i, b) in space.basis().iter().enumerate() {
        let key = (
            local(&b.occupancies, a_modes),
            local(&b.occupancies, b_modes),
        );
        match sectors.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(i),
            None => sectors.push((key, vec![i])),
        }
    }
    let dim = space.dim();
    let mut total = 0.0;
    for (_, idx) in sectors {
        let p: f64 = idx.iter().map(|&i| rho.get(i, i).re).sum();
        if p < tol::SECTOR_PRUNE {
            continue;
        }
        let mut m = DMatrix::zeros(dim, dim);
        for &i in &idx {
            for &j in &idx {
                m[(i, j)] = rho.get(i, j) / p;
            }
        }
        let sigma = DensityOperator::new(m)?;
        let sigma_a = space.reduce(&sigma, a_modes)?;
        let e = (sigma_a.entropy() - sigma.entropy()).max(0.0);
        total += p * e;
    }
    Ok(total)
}
