//! Seeded random states, unitaries and mixtures for property sweeps.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::error::{Error, Result};
use crate::fock::{FockSpace, Partition};
use crate::operator::{hermitize, DensityOperator, Operator, PureState};
use crate::states::{MixtureComponent, SeparableMixture};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Haar-random pure state.
pub fn pure_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> PureState {
    let v = DVector::from_fn(dim, |_, _| complex_normal(rng));
    PureState::normalized(v).expect("gaussian vector is nonzero")
}

/// Pure state supported on the listed basis indices.
pub fn pure_state_on<R: Rng + ?Sized>(rng: &mut R, dim: usize, support: &[usize]) -> PureState {
    let mut v = DVector::zeros(dim);
    for &i in support {
        v[i] = complex_normal(rng);
    }
    PureState::normalized(v).expect("gaussian vector is nonzero")
}

/// G G† / Tr(G G†) with G a `dim × rank` complex Gaussian matrix.
pub fn density<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> DensityOperator {
    let g = DMatrix::from_fn(dim, rank.max(1), |_, _| complex_normal(rng));
    let m = &g * g.adjoint();
    let tr = m.trace();
    DensityOperator::new(hermitize(&(m / tr))).expect("Wishart matrix is a density operator")
}

/// Full-rank random density operator.
pub fn full_rank_density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityOperator {
    density(rng, dim, dim)
}

/// Haar-random unitary via QR of a complex Gaussian matrix.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Operator {
    let g = DMatrix::from_fn(dim, dim, |_, _| complex_normal(rng));
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let phases = DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            let d = r[(i, i)];
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                Complex64::new(1.0, 0.0)
            }
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Operator::from_matrix(q * phases).expect("square")
}

/// Uniform point on the unit sphere in R³.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-12 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Symmetric Dirichlet(1, …, 1) sample: uniform on the probability simplex.
pub fn dirichlet<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<f64> {
    let gamma = Gamma::new(1.0, 1.0).expect("valid shape");
    let mut v: Vec<f64> = (0..k).map(|_| gamma.sample(rng)).collect();
    let s: f64 = v.iter().sum();
    if s > 0.0 {
        v.iter_mut().for_each(|x| *x /= s);
    } else {
        v = vec![1.0 / k as f64; k];
    }
    v
}

/// Probability vector that sums to one exactly to within a few ulps.
fn weights<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<f64> {
    let mut w = dirichlet(rng, k);
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    w
}

/// How mixture factors are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    /// Arbitrary density operators on each subsystem.
    Generic,
    /// Random mixtures of local Fock states.
    FockDiagonal,
    /// Block diagonal in the local number: random state per local sector.
    NumberCompliant,
    /// Random state inside one local number sector.
    FixedNumber(u32),
}

fn local_factor<R: Rng + ?Sized>(
    rng: &mut R,
    sub: &FockSpace,
    kind: FactorKind,
) -> Result<DensityOperator> {
    let dim = sub.dim();
    match kind {
        FactorKind::Generic => {
            let rank = 1 + rng.random_range(0..dim);
            Ok(density(rng, dim, rank))
        }
        FactorKind::FockDiagonal => {
            let w = weights(rng, dim);
            DensityOperator::new(DMatrix::from_fn(dim, dim, |i, j| {
                if i == j {
                    Complex64::new(w[i], 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }))
        }
        FactorKind::NumberCompliant => {
            let mut sectors: Vec<Vec<usize>> = Vec::new();
            let mut labels: Vec<u32> = Vec::new();
            for (i, b) in sub.basis().iter().enumerate() {
                let n = b.total();
                match labels.iter().position(|&l| l == n) {
                    Some(k) => sectors[k].push(i),
                    None => {
                        labels.push(n);
                        sectors.push(vec![i]);
                    }
                }
            }
            let w = weights(rng, sectors.len());
            let mut m = DMatrix::zeros(dim, dim);
            for (s, idx) in sectors.iter().enumerate() {
                let rank = 1 + rng.random_range(0..idx.len());
                let block = density(rng, idx.len(), rank);
                for (a, &i) in idx.iter().enumerate() {
                    for (b, &j) in idx.iter().enumerate() {
                        m[(i, j)] += block.get(a, b) * w[s];
                    }
                }
            }
            DensityOperator::new(hermitize(&m))
        }
        FactorKind::FixedNumber(n) => {
            let idx: Vec<usize> = (0..dim).filter(|&i| sub.basis()[i].total() == n).collect();
            if idx.is_empty() {
                return Err(Error::InvalidArgument(format!(
                    "no local states with number {n}"
                )));
            }
            let rank = 1 + rng.random_range(0..idx.len());
            let block = density(rng, idx.len(), rank);
            let mut m = DMatrix::zeros(dim, dim);
            for (a, &i) in idx.iter().enumerate() {
                for (b, &j) in idx.iter().enumerate() {
                    m[(i, j)] = block.get(a, b);
                }
            }
            DensityOperator::new(m)
        }
    }
}

/// (G + G†)/2 with G complex Gaussian.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Operator {
    let g = DMatrix::from_fn(dim, dim, |_, _| complex_normal(rng));
    Operator::from_matrix(hermitize(&g)).expect("square")
}

/// Random separable mixture with `components` terms over `partition`.
pub fn separable_mixture<R: Rng + ?Sized>(
    rng: &mut R,
    space: &FockSpace,
    partition: &Partition,
    components: usize,
    kind: FactorKind,
) -> Result<SeparableMixture> {
    if components == 0 {
        return Err(Error::InvalidArgument("no components".into()));
    }
    let subs: Vec<FockSpace> = partition
        .subsystems()
        .iter()
        .map(|(_, m)| space.subspace(m))
        .collect::<Result<_>>()?;
    let w = weights(rng, components);
    let comps = w
        .into_iter()
        .map(|weight| {
            let factors = subs
                .iter()
                .map(|s| local_factor(rng, s, kind))
                .collect::<Result<Vec<_>>>()?;
            Ok(MixtureComponent { weight, factors })
        })
        .collect::<Result<Vec<_>>>()?;
    SeparableMixture::new(space.clone(), partition.clone(), comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::unitarity_residual;

    #[test]
    fn unitaries_are_unitary() {
        let mut r = rng(1);
        for d in [1, 2, 5] {
            assert!(unitarity_residual(&unitary(&mut r, d)) < 1e-12);
        }
    }

    #[test]
    fn dirichlet_is_on_the_simplex() {
        let mut r = rng(2);
        let w = dirichlet(&mut r, 7);
        assert!(w.iter().all(|&x| x >= 0.0));
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn seeds_reproduce() {
        let a = pure_state(&mut rng(9), 4);
        let b = pure_state(&mut rng(9), 4);
        assert_eq!(a, b);
    }
}
