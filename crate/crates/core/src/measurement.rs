//! Projective measurements: probabilities, conditioned states, conditional
//! moments and unrecorded (non-selective) measurements.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{hermitian_eigen, hermitize, trace_of_product, DensityOperator, Operator};
use crate::tol;

/// One eigenvalue and the projector onto its eigenspace.
#[derive(Debug, Clone)]
pub struct SpectralProjector {
    pub eigenvalue: f64,
    pub projector: Operator,
}

/// A Hermitian operator together with its spectral resolution.
#[derive(Debug, Clone)]
pub struct Observable {
    operator: Operator,
    spectrum: Vec<SpectralProjector>,
}

impl Observable {
    pub fn operator(&self) -> &Operator {
        &self.operator
    }

    /// Distinct eigenvalues in ascending order with their projectors.
    pub fn spectrum(&self) -> &[SpectralProjector] {
        &self.spectrum
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.spectrum.iter().map(|s| s.eigenvalue).collect()
    }

    pub fn projector(&self, k: usize) -> &Operator {
        &self.spectrum[k].projector
    }

    /// Projector for the eigenvalue closest to `value`, if one lies within `tol`.
    pub fn projector_for(&self, value: f64, tol: f64) -> Option<&Operator> {
        self.spectrum
            .iter()
            .find(|s| (s.eigenvalue - value).abs() <= tol)
            .map(|s| &s.projector)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.spectrum
            .iter()
            .map(|s| s.projector.trace().re.round() as usize)
            .collect()
    }
}

/// Resolves a Hermitian operator into eigenvalues and projectors. Eigenvalues
/// closer than `merge_tol · max(range, 1)` share one projector. Diagonal
/// operators get exact coordinate projectors.
pub fn spectral(op: &Operator, merge_tol: f64) -> Result<Observable> {
    let residual = op.hermiticity_residual();
    if residual > tol::OPERATOR_HERMITIAN {
        return Err(Error::NotHermitian(residual));
    }
    let dim = op.dim();
    if op.off_diagonal_norm() == 0.0 {
        let diag = op.real_diagonal();
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
        let scale = merge_scale(&diag, merge_tol);
        let clusters = cluster(&order, |i| diag[i], scale);
        let spectrum = clusters
            .into_iter()
            .map(|members| {
                let mean = members.iter().map(|&i| diag[i]).sum::<f64>() / members.len() as f64;
                let mut p = DMatrix::zeros(dim, dim);
                for i in members {
                    p[(i, i)] = Complex64::new(1.0, 0.0);
                }
                SpectralProjector {
                    eigenvalue: mean,
                    projector: Operator::from_matrix(p).expect("square"),
                }
            })
            .collect();
        return Ok(Observable {
            operator: op.clone(),
            spectrum,
        });
    }
    let eig = hermitian_eigen(op.matrix());
    let vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
    let scale = merge_scale(&vals, merge_tol);
    let clusters = cluster(&order, |i| vals[i], scale);
    let spectrum = clusters
        .into_iter()
        .map(|members| {
            let mean = members.iter().map(|&i| vals[i]).sum::<f64>() / members.len() as f64;
            let mut p = DMatrix::zeros(dim, dim);
            for i in members {
                let v = eig.eigenvectors.column(i);
                p += v * v.adjoint();
            }
            SpectralProjector {
                eigenvalue: mean,
                projector: Operator::from_matrix(hermitize(&p)).expect("square"),
            }
        })
        .collect();
    Ok(Observable {
        operator: op.clone(),
        spectrum,
    })
}

fn merge_scale(values: &[f64], merge_tol: f64) -> f64 {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    merge_tol * (hi - lo).max(1.0)
}

fn cluster(order: &[usize], value: impl Fn(usize) -> f64, gap: f64) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for &i in order {
        let v = value(i);
        match out.last_mut() {
            Some(group) if v - last <= gap => group.push(i),
            _ => out.push(vec![i]),
        }
        last = v;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    pub eigenvalue: f64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    pub outcomes: Vec<Outcome>,
}

impl OutcomeDistribution {
    pub fn total(&self) -> f64 {
        self.outcomes.iter().map(|o| o.probability).sum()
    }

    pub fn mean(&self) -> f64 {
        self.outcomes
            .iter()
            .map(|o| o.eigenvalue * o.probability)
            .sum::<f64>()
            / self.total()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.outcomes
            .iter()
            .map(|o| (o.eigenvalue - m).powi(2) * o.probability)
            .sum::<f64>()
            / self.total()
    }
}

/// Tr(Πρ), imaginary roundoff dropped.
pub fn prob(rho: &DensityOperator, projector: &Operator) -> f64 {
    trace_of_product(projector.matrix(), rho.matrix()).re
}

/// Tr(Π₁Π₂…ρ) for projectors already embedded in the full space.
pub fn joint_prob(rho: &DensityOperator, projectors: &[&Operator]) -> Result<f64> {
    let mut acc = Operator::identity(rho.dim());
    for p in projectors {
        if p.dim() != rho.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho.dim(),
                actual: p.dim(),
            });
        }
        acc = &acc * p;
    }
    Ok(prob(rho, &acc))
}

/// Outcome probabilities of `obs` in state `rho`.
pub fn distribution(rho: &DensityOperator, obs: &Observable) -> OutcomeDistribution {
    OutcomeDistribution {
        outcomes: obs
            .spectrum()
            .iter()
            .map(|s| Outcome {
                eigenvalue: s.eigenvalue,
                probability: prob(rho, &s.projector),
            })
            .collect(),
    }
}

fn checked_prob(rho: &DensityOperator, projector: &Operator) -> Result<f64> {
    let p = prob(rho, projector);
    if p <= tol::PROB_FLOOR {
        return Err(Error::ZeroProbability(p));
    }
    Ok(p)
}

/// ΠρΠ / Tr(Πρ)
pub fn conditioned_state(rho: &DensityOperator, projector: &Operator) -> Result<DensityOperator> {
    let p = checked_prob(rho, projector)?;
    let m = projector.matrix() * rho.matrix() * projector.matrix() / Complex64::new(p, 0.0);
    DensityOperator::new(hermitize(&m))
}

/// P(A|B) = Tr(Π_A Π_B ρ) / Tr(Π_B ρ)
pub fn cond_prob(rho: &DensityOperator, pa: &Operator, pb: &Operator) -> Result<f64> {
    let p = checked_prob(rho, pb)?;
    Ok(prob(rho, &(pa * pb)) / p)
}

/// Σⱼ Πⱼ ρ Πⱼ
pub fn unrecorded_state(rho: &DensityOperator, obs: &Observable) -> Result<DensityOperator> {
    let dim = rho.dim();
    let mut acc = DMatrix::zeros(dim, dim);
    for s in obs.spectrum() {
        let p = s.projector.matrix();
        acc += p * rho.matrix() * p;
    }
    DensityOperator::new(hermitize(&acc))
}

/// Outcome distribution of `target` conditioned on the projector `given`.
pub fn cond_distribution(
    rho: &DensityOperator,
    target: &Observable,
    given: &Operator,
) -> Result<OutcomeDistribution> {
    let p = checked_prob(rho, given)?;
    Ok(OutcomeDistribution {
        outcomes: target
            .spectrum()
            .iter()
            .map(|s| Outcome {
                eigenvalue: s.eigenvalue,
                probability: prob(rho, &(&s.projector * given)) / p,
            })
            .collect(),
    })
}

/// Σⱼ μⱼ P(j|i)
pub fn cond_mean(rho: &DensityOperator, target: &Observable, given: &Operator) -> Result<f64> {
    Ok(cond_distribution(rho, target, given)?.mean())
}

/// Σⱼ (μⱼ − mean)² P(j|i)
pub fn cond_variance(rho: &DensityOperator, target: &Observable, given: &Operator) -> Result<f64> {
    Ok(cond_distribution(rho, target, given)?.variance())
}

/// Probability-weighted average of conditional variances of `target` over
/// the outcomes of `given`. Outcomes at or below the probability floor are
/// skipped; their total weight is returned alongside the average.
pub fn unrecorded_variance(
    rho: &DensityOperator,
    target: &Observable,
    given: &Observable,
) -> Result<(f64, f64)> {
    let mut acc = 0.0;
    let mut skipped = 0.0;
    for s in given.spectrum() {
        let p = prob(rho, &s.projector);
        if p <= tol::PROB_FLOOR {
            skipped += p.max(0.0);
            continue;
        }
        acc += p * cond_variance(rho, target, &s.projector)?;
    }
    Ok((acc, skipped))
}
