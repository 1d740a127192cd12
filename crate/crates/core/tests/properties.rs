//! Randomized invariants. Inputs are RNG seeds and small shape parameters;
//! each property draws its states from the seeded generator.

use std::f64::consts::PI;

use bosonic_ssr::dynamics::{
    atom_molecule_process, beam_splitter, extraction_experiment, hopping_hamiltonian,
    ssr_propagation_check, BeamSplitterSpec, Convention, ExtractionCase, InitialBec,
};
use bosonic_ssr::fock::{FockSpace, ModeSystem, Partition};
use bosonic_ssr::lhv::{from_separable, lhv_joint, lhv_mean_product, random_model};
use bosonic_ssr::measurement::{
    cond_prob, distribution, joint_prob, prob, spectral, unrecorded_state, unrecorded_variance,
};
use bosonic_ssr::operator::{unitarity_residual, unitary_evolve, DensityOperator, Operator};
use bosonic_ssr::random::{self, FactorKind};
use bosonic_ssr::ssr::{qcf, sector_decompose, ssr_check, twirl};
use bosonic_ssr::states::{binomial_state, coherent, werner_qudit};
use bosonic_ssr::witnesses::{correlation_test, particle_entanglement, SpinOps};
use bosonic_ssr::{tol, Complex64};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn max_norm<R: nalgebra::Dim, C: nalgebra::Dim, S: nalgebra::RawStorage<Complex64, R, C>>(
    m: &nalgebra::Matrix<Complex64, R, C, S>,
) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(32)
}

fn random_rho(rng: &mut random::Rng64, dim: usize) -> DensityOperator {
    let rank = 1 + rng.random_range(0..dim);
    random::density(rng, dim, rank)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn bose_commutator_is_identity_below_cutoff(modes in 1usize..4, cutoff in 1u32..5, pick in 0usize..4) {
        let space = FockSpace::new(ModeSystem::bosons(modes, cutoff).unwrap()).unwrap();
        let m = pick % modes;
        let a = space.annihilation(m).unwrap();
        let ad = space.creation(m).unwrap();
        let comm = a.commutator(&ad);
        for (i, b) in space.basis().iter().enumerate() {
            for j in 0..space.dim() {
                let expect = if i != j {
                    0.0
                } else if b.occupancies[m] < cutoff {
                    1.0
                } else {
                    -f64::from(cutoff)
                };
                prop_assert!((comm.get(i, j) - c(expect)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn fermion_anticommutation(modes in 1usize..5) {
        let space = FockSpace::new(ModeSystem::fermions(modes).unwrap()).unwrap();
        let id = Operator::identity(space.dim());
        for i in 0..modes {
            for j in 0..modes {
                let ci = space.annihilation(i).unwrap();
                let cj = space.annihilation(j).unwrap();
                let cjd = space.creation(j).unwrap();
                let mixed = ci.anticommutator(&cjd);
                let expect = if i == j { id.clone() } else { Operator::zeros(space.dim()) };
                prop_assert!(mixed.max_abs_diff(&expect) < 1e-12);
                prop_assert!(ci.anticommutator(&cj).frobenius_norm() < 1e-12);
            }
        }
    }

    #[test]
    fn reduction_preserves_trace_and_factors(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let space = FockSpace::new(ModeSystem::bosons(3, 1).unwrap()).unwrap();
        let rho = random_rho(&mut rng, space.dim());
        for modes in [vec![0], vec![1, 2], vec![0, 2]] {
            let r = space.reduce(&rho, &modes).unwrap();
            prop_assert!((r.trace() - c(1.0)).norm() < 1e-12);
        }
        let fa = random_rho(&mut rng, 2);
        let fb = random_rho(&mut rng, 4);
        let prod = space.product_density(&[(&[1], &fa), (&[0, 2], &fb)]).unwrap();
        prop_assert!(space.reduce(&prod, &[1]).unwrap().max_abs_diff(&fa) < 1e-12);
        prop_assert!(space.reduce(&prod, &[0, 2]).unwrap().max_abs_diff(&fb) < 1e-12);
    }

    #[test]
    fn product_of_first_block_is_kron(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let space = FockSpace::new(ModeSystem::bosons(2, 2).unwrap()).unwrap();
        let part = Partition::bipartite(&[0], &[1]).unwrap();
        let k = 1 + rng.random_range(0..3);
        let mix = random::separable_mixture(&mut rng, &space, &part, k, FactorKind::Generic).unwrap();
        let mut oracle = DMatrix::<Complex64>::zeros(9, 9);
        for comp in mix.components() {
            oracle += comp.factors[0].matrix().kronecker(comp.factors[1].matrix()) * c(comp.weight);
        }
        let summed = mix.summed().unwrap();
        prop_assert!(max_norm(&(summed.matrix() - oracle)) < 1e-12);
    }

    #[test]
    fn evolution_preserves_spectrum(seed in any::<u64>(), t in -5.0f64..5.0) {
        let mut rng = random::rng(seed);
        let h = random::hermitian(&mut rng, 5);
        let rho = random_rho(&mut rng, 5);
        let out = unitary_evolve(&h, t, &rho).unwrap();
        for (x, y) in rho.eigenvalues().iter().zip(out.eigenvalues()) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn measurement_identities(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let space = FockSpace::new(ModeSystem::bosons(2, 2).unwrap()).unwrap();
        let rho = random_rho(&mut rng, space.dim());
        let oa = spectral(&space.embed(&random::hermitian(&mut rng, 3), &[0]).unwrap(), tol::MERGE).unwrap();
        let ob = spectral(&space.embed(&random::hermitian(&mut rng, 3), &[1]).unwrap(), tol::MERGE).unwrap();
        for sa in oa.spectrum() {
            for sb in ob.spectrum() {
                let ab = joint_prob(&rho, &[&sa.projector, &sb.projector]).unwrap();
                let ba = joint_prob(&rho, &[&sb.projector, &sa.projector]).unwrap();
                prop_assert!((ab - ba).abs() < 1e-12);
                let pb = prob(&rho, &sb.projector);
                if pb > 1e-9 {
                    let cp = cond_prob(&rho, &sa.projector, &sb.projector).unwrap();
                    prop_assert!((cp * pb - ab).abs() < 1e-12);
                }
            }
        }
        let un = unrecorded_state(&rho, &ob).unwrap();
        prop_assert!((un.trace() - c(1.0)).norm() < 1e-12);
        prop_assert!(un.eigenvalues()[0] > -1e-12);
        let (avg, _skipped) = unrecorded_variance(&rho, &oa, &ob).unwrap();
        let var = distribution(&rho, &oa).variance();
        prop_assert!(avg <= var + 1e-10);
    }

    #[test]
    fn twirl_is_idempotent_and_compliant(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let space = FockSpace::new(ModeSystem::bosons(2, 2).unwrap()).unwrap();
        let n = space.total_number();
        let rho = random_rho(&mut rng, space.dim());
        let once = twirl(&rho, &n).unwrap();
        let twice = twirl(&once, &n).unwrap();
        prop_assert!(once.max_abs_diff(&twice) < 1e-14);
        prop_assert!(ssr_check(&once, &n, 1e-12).unwrap().compliant);
        let dec = sector_decompose(&rho, &n).unwrap();
        prop_assert!(dec.reassemble().unwrap().max_abs_diff(&once) < 1e-12);
    }

    #[test]
    fn allowed_qcf_survive_twirl(seed in any::<u64>(), idx in proptest::array::uniform4(0u32..3)) {
        let mut rng = random::rng(seed);
        let space = FockSpace::new(ModeSystem::bosons(2, 3).unwrap()).unwrap();
        let rho = random_rho(&mut rng, space.dim());
        let tw = twirl(&rho, &space.total_number()).unwrap();
        let [n, m, l, k] = idx;
        let before = qcf(&space, &rho, 0, 1, n, m, l, k).unwrap().value;
        let after = qcf(&space, &tw, 0, 1, n, m, l, k).unwrap().value;
        if n + l == m + k {
            prop_assert!((before - after).norm() < 1e-12);
        } else {
            prop_assert!(after.norm() < 1e-12);
        }
    }

    #[test]
    fn coherent_sector_weights_are_poisson(re in -1.5f64..1.5, im in -1.5f64..1.5) {
        let beta = Complex64::new(re, im);
        let psi = coherent(beta, 30).unwrap();
        let space = FockSpace::new(ModeSystem::bosons(1, 30).unwrap()).unwrap();
        let dec = sector_decompose(&psi.density(), &space.total_number()).unwrap();
        let mean = beta.norm_sqr();
        let mut pmf = (-mean).exp();
        for n in 0..=30i64 {
            if n > 0 {
                pmf *= mean / n as f64;
            }
            prop_assert!((dec.weight_of(n) - pmf).abs() < 1e-12);
        }
    }

    #[test]
    fn binomial_state_matches_rotated_creation(theta in 0.0f64..PI, chi in -PI..PI, n in 0u32..5) {
        let (space, psi) = binomial_state(theta, chi, n, n).unwrap();
        let half = Complex64::from_polar(1.0, chi / 2.0);
        // (cosθ e^{iχ/2} a + sinθ e^{−iχ/2} b)† = cosθ e^{−iχ/2} a† + sinθ e^{iχ/2} b†
        let step = &space.creation(0).unwrap().scale(half.conj() * theta.cos())
            + &space.creation(1).unwrap().scale(half * theta.sin());
        let mut v = space.vacuum().unwrap().vector().clone();
        let mut fact = 1.0;
        for k in 1..=n {
            v = step.matrix() * v;
            fact *= f64::from(k);
        }
        v /= c(fact.sqrt());
        prop_assert!(max_norm(&(v - psi.vector())) < 1e-12);
    }

    #[test]
    fn werner_is_unitarily_invariant(seed in any::<u64>(), d in 2u32..4, phi in -1.0f64..1.0) {
        let mut rng = random::rng(seed);
        let rho = werner_qudit(d, phi).unwrap();
        let u = random::unitary(&mut rng, d as usize);
        let uu = u.kron(&u);
        prop_assert!(rho.transform(&uu).unwrap().max_abs_diff(&rho) < 1e-12);
    }

    #[test]
    fn particle_entanglement_ignores_coherences(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let space = FockSpace::new(ModeSystem::bosons(2, 2).unwrap()).unwrap();
        let part = Partition::bipartite(&[0], &[1]).unwrap();
        let rho = random_rho(&mut rng, space.dim());
        let tw = twirl(&rho, &space.total_number()).unwrap();
        let a = particle_entanglement(&space, &rho, &part).unwrap();
        let b = particle_entanglement(&space, &tw, &part).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
        prop_assert!(a >= -1e-12);
    }

    #[test]
    fn schwinger_casimir(n in 0u32..6) {
        let sys = ModeSystem::bosons(2, n).unwrap().with_total_number(n);
        let space = FockSpace::new(sys).unwrap();
        let s = SpinOps::schwinger(&space, 0, 1).unwrap();
        let j = f64::from(n) / 2.0;
        let expect = Operator::identity(space.dim()).scale_real(j * (j + 1.0));
        prop_assert!(s.casimir().max_abs_diff(&expect) < 1e-12);
        let comm = s.component(0).commutator(s.component(1));
        prop_assert!(comm.max_abs_diff(&s.component(2).scale(Complex64::i())) < 1e-12);
    }

    #[test]
    fn correlation_test_holds_on_separable_states(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let space = FockSpace::new(ModeSystem::bosons(2, 2).unwrap()).unwrap();
        let part = Partition::bipartite(&[0], &[1]).unwrap();
        let k = 1 + rng.random_range(0..4);
        let mix = random::separable_mixture(&mut rng, &space, &part, k, FactorKind::Generic).unwrap();
        let rho = mix.summed().unwrap();
        let local = |rng: &mut random::Rng64| {
            let entries: Vec<Complex64> = (0..9).map(|_| random::complex_normal(rng)).collect();
            Operator::from_rows(3, &entries).unwrap()
        };
        let oa = space.embed(&local(&mut rng), &[0]).unwrap();
        let ob = space.embed(&local(&mut rng), &[1]).unwrap();
        prop_assert!(!correlation_test(&rho, &oa, &ob).violated);
    }

    #[test]
    fn lhv_marginals_and_products(seed in any::<u64>(), hidden in 1usize..6) {
        let mut rng = random::rng(seed);
        let model = random_model(&mut rng, 4, hidden);
        for k in 0..4 {
            let total: f64 = (0..model.outcome_values(k).len())
                .map(|i| lhv_joint(&model, &[k], &[i]).unwrap())
                .sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }
        for a in 0..2 {
            for b in 2..4 {
                let e = lhv_mean_product(&model, &[a, b]).unwrap();
                prop_assert!(e.abs() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn separable_lhv_reproduces_joint_probabilities(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let space = FockSpace::new(ModeSystem::bosons(2, 2).unwrap()).unwrap();
        let part = Partition::bipartite(&[0], &[1]).unwrap();
        let k = 1 + rng.random_range(0..4);
        let mix = random::separable_mixture(&mut rng, &space, &part, k, FactorKind::Generic).unwrap();
        let ha = random::hermitian(&mut rng, 3);
        let hb = random::hermitian(&mut rng, 3);
        let oa = spectral(&ha, tol::MERGE).unwrap();
        let ob = spectral(&hb, tol::MERGE).unwrap();
        let model = from_separable(&mix, &[(0, &oa), (1, &ob)]).unwrap();
        let rho = mix.summed().unwrap();
        for (i, sa) in oa.spectrum().iter().enumerate() {
            for (j, sb) in ob.spectrum().iter().enumerate() {
                let pa = space.embed(&sa.projector, &[0]).unwrap();
                let pb = space.embed(&sb.projector, &[1]).unwrap();
                let quantum = joint_prob(&rho, &[&pa, &pb]).unwrap();
                let classical = lhv_joint(&model, &[0, 1], &[i, j]).unwrap();
                prop_assert!((quantum - classical).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn beam_splitter_is_unitary_and_rotates_modes(phi in -PI..PI, minus_i in any::<bool>()) {
        let space = FockSpace::new(ModeSystem::bosons(2, 3).unwrap()).unwrap();
        let convention = if minus_i { Convention::MinusI } else { Convention::RealRotation };
        let spec = BeamSplitterSpec::from_angle(vec![(0, 1)], phi, convention);
        let u = beam_splitter(&space, &spec).unwrap();
        prop_assert!(unitarity_residual(&u) < 1e-12);
        let r_coeff = if minus_i { Complex64::new(0.0, -spec.r) } else { c(spec.r) };
        let image = &space.creation(0).unwrap().scale(c(spec.t)) + &space.creation(1).unwrap().scale(r_coeff);
        let conj = &(&u * &space.creation(0).unwrap()) * &u.adjoint();
        // Truncation only disturbs states with a full mode, so compare on N ≤ 2.
        for (j, b) in space.basis().iter().enumerate() {
            if b.total() > 2 {
                continue;
            }
            for i in 0..space.dim() {
                prop_assert!((conj.get(i, j) - image.get(i, j)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn extraction_is_independent_of_splitting(phi in 0.05f64..1.5) {
        let (r, t) = (phi.sin(), phi.cos());
        for case in [ExtractionCase::ThreeBoson, ExtractionCase::TwoBoson, ExtractionCase::TwoFermion] {
            let reference = extraction_experiment(case, 0.6, 0.8).unwrap();
            let res = extraction_experiment(case, r, t).unwrap();
            prop_assert!(res.projected.inner(&reference.projected).norm() > 1.0 - 1e-10);
            prop_assert!((res.output.vector().norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn atom_molecule_is_independent_of_n(n in 1u32..12, phi in 0.0f64..(2.0 * PI)) {
        let r = atom_molecule_process(InitialBec::Fock(n), 1.0, phi).unwrap().rdo;
        prop_assert!((r.atom - (phi / 2.0).sin().powi(2)).abs() < 1e-10);
        prop_assert!((r.molecule - (phi / 2.0).cos().powi(2)).abs() < 1e-10);
    }

    #[test]
    fn hopping_keeps_compliant_mixtures_compliant(seed in any::<u64>(), lambda in 0.1f64..2.0) {
        let mut rng = random::rng(seed);
        let space = FockSpace::new(ModeSystem::bosons(2, 2).unwrap()).unwrap();
        let part = Partition::bipartite(&[0], &[1]).unwrap();
        let k = 1 + rng.random_range(0..3);
        let mix = random::separable_mixture(&mut rng, &space, &part, k, FactorKind::NumberCompliant).unwrap();
        let h = hopping_hamiltonian(&space, 0, 1, lambda).unwrap();
        let report = ssr_propagation_check(&mix, &h, &[1, 1], &[0.0, 0.4, 1.3, 2.9], 1e-10).unwrap();
        prop_assert!(report.locally_compliant && report.globally_compliant);
    }
}
