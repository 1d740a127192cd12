//! Discrete local-hidden-variable models.

use rand::Rng;

use crate::error::{Error, Result};
use crate::measurement::{prob, Observable};
use crate::random::{dirichlet, rng};
use crate::states::SeparableMixture;
use crate::tol;

/// One hidden value ξ: its probability and, per observable, the outcome pmf.
#[derive(Debug, Clone, PartialEq)]
pub struct HiddenValue {
    pub probability: f64,
    pub pmfs: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteLHVModel {
    /// Outcome values of each observable.
    outcomes: Vec<Vec<f64>>,
    hidden: Vec<HiddenValue>,
}

const SUM_TOL: f64 = 1e-12;

impl DiscreteLHVModel {
    pub fn new(outcomes: Vec<Vec<f64>>, hidden: Vec<HiddenValue>) -> Result<Self> {
        if hidden.is_empty() {
            return Err(Error::InvalidProbabilities("no hidden values".into()));
        }
        let total: f64 = hidden.iter().map(|h| h.probability).sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidProbabilities(format!("P(ξ) sums to {total}")));
        }
        for h in &hidden {
            if h.probability < 0.0 {
                return Err(Error::InvalidProbabilities(format!(
                    "P(ξ) = {}",
                    h.probability
                )));
            }
            if h.pmfs.len() != outcomes.len() {
                return Err(Error::DimensionMismatch {
                    expected: outcomes.len(),
                    actual: h.pmfs.len(),
                });
            }
            for (pmf, values) in h.pmfs.iter().zip(&outcomes) {
                if pmf.len() != values.len() {
                    return Err(Error::DimensionMismatch {
                        expected: values.len(),
                        actual: pmf.len(),
                    });
                }
                if pmf.iter().any(|&p| p < 0.0) {
                    return Err(Error::InvalidProbabilities(
                        "negative outcome probability".into(),
                    ));
                }
                let s: f64 = pmf.iter().sum();
                if (s - 1.0).abs() > SUM_TOL {
                    return Err(Error::InvalidProbabilities(format!(
                        "outcome pmf sums to {s}"
                    )));
                }
            }
        }
        Ok(Self { outcomes, hidden })
    }

    /// Deterministic ±1 model: each row assigns a value to every observable.
    pub fn deterministic(probabilities: &[f64], assignments: &[Vec<f64>]) -> Result<Self> {
        let k = assignments.first().map_or(0, Vec::len);
        let outcomes = vec![vec![1.0, -1.0]; k];
        let hidden = probabilities
            .iter()
            .zip(assignments)
            .map(|(&p, row)| HiddenValue {
                probability: p,
                pmfs: row
                    .iter()
                    .map(|&v| {
                        if v > 0.0 {
                            vec![1.0, 0.0]
                        } else {
                            vec![0.0, 1.0]
                        }
                    })
                    .collect(),
            })
            .collect();
        Self::new(outcomes, hidden)
    }

    pub fn observable_count(&self) -> usize {
        self.outcomes.len()
    }

    pub fn outcome_values(&self, k: usize) -> &[f64] {
        &self.outcomes[k]
    }

    pub fn hidden(&self) -> &[HiddenValue] {
        &self.hidden
    }

    /// ⟨Ω_K(ξ)⟩ = Σᵢ ωᵢ P_K(i, ξ)
    pub fn local_mean(&self, xi: usize, k: usize) -> f64 {
        self.hidden[xi].pmfs[k]
            .iter()
            .zip(&self.outcomes[k])
            .map(|(p, v)| p * v)
            .sum()
    }
}

/// Σ_ξ P(ξ) Π_K P_K(i_K, ξ)
pub fn lhv_joint(
    model: &DiscreteLHVModel,
    observables: &[usize],
    outcomes: &[usize],
) -> Result<f64> {
    if observables.len() != outcomes.len() {
        return Err(Error::DimensionMismatch {
            expected: observables.len(),
            actual: outcomes.len(),
        });
    }
    for (&k, &i) in observables.iter().zip(outcomes) {
        if k >= model.observable_count() || i >= model.outcomes[k].len() {
            return Err(Error::InvalidArgument(format!(
                "no outcome {i} for observable {k}"
            )));
        }
    }
    Ok(model
        .hidden
        .iter()
        .map(|h| {
            h.probability
                * observables
                    .iter()
                    .zip(outcomes)
                    .map(|(&k, &i)| h.pmfs[k][i])
                    .product::<f64>()
        })
        .sum())
}

/// Σ_ξ P(ξ) Π_K ⟨Ω_K(ξ)⟩
pub fn lhv_mean_product(model: &DiscreteLHVModel, observables: &[usize]) -> Result<f64> {
    if let Some(&k) = observables.iter().find(|&&k| k >= model.observable_count()) {
        return Err(Error::InvalidArgument(format!("no observable {k}")));
    }
    Ok((0..model.hidden.len())
        .map(|xi| {
            model.hidden[xi].probability
                * observables
                    .iter()
                    .map(|&k| model.local_mean(xi, k))
                    .product::<f64>()
        })
        .sum())
}

/// Hidden variable ξ = R of a separable mixture: P(ξ) = P_R and
/// P_K(i, ξ) = Tr(Π_i ρ_R^K). Each observable is paired with the index of
/// the subsystem it acts on, and lives on that subsystem's product basis.
pub fn from_separable(
    mix: &SeparableMixture,
    observables: &[(usize, &Observable)],
) -> Result<DiscreteLHVModel> {
    let outcomes = observables.iter().map(|(_, o)| o.eigenvalues()).collect();
    let hidden = mix
        .components()
        .iter()
        .map(|comp| {
            let pmfs = observables
                .iter()
                .map(|(sub, obs)| {
                    let rho = comp
                        .factors
                        .get(*sub)
                        .ok_or_else(|| Error::InvalidArgument(format!("no subsystem {sub}")))?;
                    let mut pmf: Vec<f64> = obs
                        .spectrum()
                        .iter()
                        .map(|s| prob(rho, &s.projector).max(0.0))
                        .collect();
                    let s: f64 = pmf.iter().sum();
                    pmf.iter_mut().for_each(|p| *p /= s);
                    Ok(pmf)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(HiddenValue {
                probability: comp.weight,
                pmfs,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    DiscreteLHVModel::new(outcomes, hidden)
}

/// CHSH combination of four ±1 observables (A₁, A₂, B₁, B₂) with the minus
/// sign on term `minus` in the order A₁B₁, A₁B₂, A₂B₁, A₂B₂.
pub fn lhv_chsh(model: &DiscreteLHVModel, obs: [usize; 4], minus: usize) -> Result<f64> {
    let [a1, a2, b1, b2] = obs;
    let pairs = [[a1, b1], [a1, b2], [a2, b1], [a2, b2]];
    let mut s = 0.0;
    for (k, p) in pairs.iter().enumerate() {
        let e = lhv_mean_product(model, p)?;
        s += if k == minus { -e } else { e };
    }
    Ok(s)
}

/// S for every deterministic assignment of (A₁, A₂, B₁, B₂) ∈ {±1}⁴.
pub fn deterministic_chsh_values() -> Vec<f64> {
    (0..16u32)
        .map(|bits| {
            let v = |k: u32| if bits >> k & 1 == 0 { 1.0 } else { -1.0 };
            let (a1, a2, b1, b2) = (v(0), v(1), v(2), v(3));
            a1 * b1 + a1 * b2 + a2 * b1 - a2 * b2
        })
        .collect()
}

/// Random ±1 model with Dirichlet-uniform P(ξ) and outcome pmfs.
pub fn random_model<R: Rng + ?Sized>(
    rng: &mut R,
    observables: usize,
    hidden: usize,
) -> DiscreteLHVModel {
    let p = dirichlet(rng, hidden);
    let hidden = p
        .into_iter()
        .map(|probability| HiddenValue {
            probability,
            pmfs: (0..observables)
                .map(|_| {
                    let u: f64 = rng.random();
                    vec![u, 1.0 - u]
                })
                .collect(),
        })
        .collect();
    let outcomes = vec![vec![1.0, -1.0]; observables];
    DiscreteLHVModel::new(outcomes, fix_sum(hidden)).expect("Dirichlet sample is normalized")
}

fn fix_sum(mut hidden: Vec<HiddenValue>) -> Vec<HiddenValue> {
    let s: f64 = hidden.iter().map(|h| h.probability).sum();
    hidden.iter_mut().for_each(|h| h.probability /= s);
    hidden
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshSweepConfig {
    pub models: usize,
    /// Observables per side; every ordered pair (i ≠ j) on each side is tried.
    pub settings: usize,
    pub hidden: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChshSweepReport {
    /// Largest |S| per minus-sign placement.
    pub max_abs_by_sign: [f64; 4],
    pub evaluations: usize,
}

impl ChshSweepReport {
    pub fn max_abs(&self) -> f64 {
        self.max_abs_by_sign.iter().copied().fold(0.0, f64::max)
    }
}

/// Largest |S| over random fuzzy models, every choice of observables and
/// every placement of the minus sign.
pub fn lhv_chsh_bound_sweep(config: &ChshSweepConfig) -> Result<ChshSweepReport> {
    if config.settings < 2 || config.hidden == 0 {
        return Err(Error::InvalidArgument(
            "need ≥ 2 settings per side and ≥ 1 hidden value".into(),
        ));
    }
    let mut r = rng(config.seed);
    let s = config.settings;
    let mut best = [0.0f64; 4];
    let mut evaluations = 0;
    for _ in 0..config.models {
        let model = random_model(&mut r, 2 * s, config.hidden);
        for a1 in 0..s {
            for a2 in (0..s).filter(|&x| x != a1) {
                for b1 in s..2 * s {
                    for b2 in (s..2 * s).filter(|&x| x != b1) {
                        for (minus, slot) in best.iter_mut().enumerate() {
                            let v = lhv_chsh(&model, [a1, a2, b1, b2], minus)?.abs();
                            *slot = slot.max(v);
                            evaluations += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(ChshSweepReport {
        max_abs_by_sign: best,
        evaluations,
    })
}

/// Which parity constraints the GHZ hidden-value search imposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GhzConstraints {
    /// Impose M_x M_y M_y = M_y M_x M_y = M_y M_y M_x = −1.
    pub cyclic: bool,
    /// Target of M_x M_x M_x, or `None` to leave it free.
    pub xxx: Option<i8>,
}

impl Default for GhzConstraints {
    fn default() -> Self {
        Self {
            cyclic: true,
            xxx: Some(1),
        }
    }
}

/// Counts assignments M_α^K ∈ {±1} (α ∈ {x, y, z}, K ∈ {1, 2, 3}) that meet
/// the constraints. All 512 assignments are enumerated.
pub fn ghz_assignment_search(constraints: GhzConstraints) -> usize {
    (0..512u32)
        .filter(|&bits| {
            let m = |k: usize, axis: usize| -> i8 {
                if bits >> (3 * k + axis) & 1 == 0 {
                    1
                } else {
                    -1
                }
            };
            let (x, y) = (0, 1);
            let cyclic_ok = !constraints.cyclic
                || (m(0, x) * m(1, y) * m(2, y) == -1
                    && m(0, y) * m(1, x) * m(2, y) == -1
                    && m(0, y) * m(1, y) * m(2, x) == -1);
            let xxx_ok = constraints
                .xxx
                .is_none_or(|t| m(0, x) * m(1, x) * m(2, x) == t);
            cyclic_ok && xxx_ok
        })
        .count()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityCheck {
    /// (Σ P C)(Σ P D)
    pub lhs: f64,
    /// (Σ P √(CD))²
    pub rhs: f64,
    /// ½ Σ_R Σ_S P_R P_S (√(C_R D_S) − √(C_S D_R))², equal to lhs − rhs.
    pub pairwise_gap: f64,
    pub holds: bool,
}

fn check_nonnegative(name: &str, v: &[f64]) -> Result<()> {
    if let Some(x) = v.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::InvalidArgument(format!("{name} has entry {x}")));
    }
    Ok(())
}

fn weighted_inequality(w: &[f64], c: &[f64], d: &[f64]) -> Result<InequalityCheck> {
    if w.len() != c.len() || w.len() != d.len() {
        return Err(Error::DimensionMismatch {
            expected: w.len(),
            actual: c.len().min(d.len()),
        });
    }
    check_nonnegative("P", w)?;
    check_nonnegative("C", c)?;
    check_nonnegative("D", d)?;
    let pc: f64 = w.iter().zip(c).map(|(p, c)| p * c).sum();
    let pd: f64 = w.iter().zip(d).map(|(p, d)| p * d).sum();
    let cross: f64 = w
        .iter()
        .zip(c.iter().zip(d))
        .map(|(p, (c, d))| p * (c * d).sqrt())
        .sum();
    let lhs = pc * pd;
    let rhs = cross * cross;
    let mut gap = 0.0;
    for r in 0..w.len() {
        for s in 0..w.len() {
            let t = (c[r] * d[s]).sqrt() - (c[s] * d[r]).sqrt();
            gap += w[r] * w[s] * t * t;
        }
    }
    let scale = lhs.abs().max(rhs.abs()).max(1.0);
    Ok(InequalityCheck {
        lhs,
        rhs,
        pairwise_gap: 0.5 * gap,
        holds: lhs >= rhs - tol::NORM * scale,
    })
}

/// (Σ_R P_R C_R)(Σ_R P_R D_R) ≥ (Σ_R P_R √(C_R D_R))²
pub fn sum_inequality_oracle(p: &[f64], c: &[f64], d: &[f64]) -> Result<InequalityCheck> {
    weighted_inequality(p, c, d)
}

/// Trapezoid-rule analogue over a grid λ₀ < λ₁ < … of the integral form.
pub fn integral_inequality_oracle(
    grid: &[f64],
    p: &[f64],
    c: &[f64],
    d: &[f64],
) -> Result<InequalityCheck> {
    if grid.len() < 2 || grid.len() != p.len() {
        return Err(Error::InvalidArgument(
            "grid needs ≥ 2 points matching P".into(),
        ));
    }
    if grid
        .windows(2)
        .any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
    {
        return Err(Error::InvalidArgument("grid must be increasing".into()));
    }
    check_nonnegative("P", p)?;
    let n = grid.len();
    let w: Vec<f64> = (0..n)
        .map(|i| {
            let left = if i > 0 { grid[i] - grid[i - 1] } else { 0.0 };
            let right = if i + 1 < n {
                grid[i + 1] - grid[i]
            } else {
                0.0
            };
            0.5 * (left + right) * p[i]
        })
        .collect();
    weighted_inequality(&w, c, d)
}
