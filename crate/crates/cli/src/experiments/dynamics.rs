//! Beam-splitter extraction, the atom-molecule Ramsey process, the
//! vacuum-superposition interferometer and SSR propagation.

use bosonic_ssr::dynamics::{
    atom_molecule_process, extraction_experiment, hopping_hamiltonian, ndpa_hamiltonian,
    ramsey_vacuum_superposition, ssr_propagation_check, ExtractionCase, InitialBec,
};
use bosonic_ssr::random::{self, FactorKind};
use bosonic_ssr::states::{MixtureComponent, SeparableMixture};
use bosonic_ssr::{Complex64, FockSpace, ModeSystem, Partition, PureState};
use rand::Rng;

use super::{max_of, Experiment};
use crate::error::Result;
use crate::report::CheckRecord;
use crate::scenario::{Context, ParamDefault as D, ParamSpec as P, ToleranceSpec as T};

pub static EXTRACTION: Experiment = Experiment {
    name: "extraction",
    summary: "Mode entanglement extracted by beam splitters and local number projection",
    params: &[P {
        name: "r",
        default: D::Floats(&[0.6, std::f64::consts::FRAC_1_SQRT_2, 0.28]),
        doc: "reflection amplitudes, t = √(1 − r²)",
    }],
    tolerances: &[T {
        name: "amplitude",
        default: 1e-12,
        doc: "projected amplitudes",
    }],
    run: extraction,
};

fn extraction(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let tol = ctx.tol("amplitude");
    let cases = [
        (
            "three_boson",
            ExtractionCase::ThreeBoson,
            [[2, 0, 0, 1], [1, 1, 1, 0]],
            [(1.0f64 / 3.0).sqrt(), (2.0f64 / 3.0).sqrt()],
        ),
        (
            "two_boson",
            ExtractionCase::TwoBoson,
            [[1, 0, 0, 1], [0, 1, 1, 0]],
            [0.5f64.sqrt(), 0.5f64.sqrt()],
        ),
        (
            "two_fermion",
            ExtractionCase::TwoFermion,
            [[1, 0, 0, 1], [0, 1, 1, 0]],
            [0.5f64.sqrt(), -(0.5f64.sqrt())],
        ),
    ];
    let mut records = Vec::new();
    for (k, r) in ctx.floats("r").into_iter().enumerate() {
        ctx.require("r", r > 0.0 && r < 1.0, "entries must lie in (0, 1)")?;
        let t = (1.0 - r * r).sqrt();
        for (label, case, occs, expect) in &cases {
            let res = extraction_experiment(*case, r, t)?;
            let mut imag: f64 = 0.0;
            for (j, (occ, x)) in occs.iter().zip(expect).enumerate() {
                let a = res.amplitude(*occ)?;
                imag = imag.max(a.im.abs());
                records.push(CheckRecord::close(
                    format!("{label}_r{k}_term{j}"),
                    *x,
                    a.re,
                    tol,
                ));
            }
            records.push(CheckRecord::at_most(
                format!("{label}_r{k}_imag_max"),
                0.0,
                imag,
                tol,
            ));
        }
    }
    Ok(records)
}

pub static ATOM_MOLECULE: Experiment = Experiment {
    name: "atom_molecule",
    summary: "Atom-molecule Ramsey populations sin²(φ/2), cos²(φ/2) with no coherence",
    params: &[
        P {
            name: "n",
            default: D::Counts(&[1, 5, 20]),
            doc: "initial condensate numbers",
        },
        P {
            name: "phi",
            default: D::Floats(&[
                0.0,
                std::f64::consts::FRAC_PI_3,
                std::f64::consts::FRAC_PI_2,
                std::f64::consts::PI,
            ]),
            doc: "accumulated phases",
        },
        P {
            name: "poisson_mean",
            default: D::Float(5.0),
            doc: "mean of the Poisson-mixture initial state",
        },
        P {
            name: "kappa",
            default: D::Float(1.0),
            doc: "coupling strength",
        },
    ],
    tolerances: &[T {
        name: "population",
        default: 1e-10,
        doc: "populations and coherence",
    }],
    run: atom_molecule,
};

fn atom_molecule(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let tol = ctx.tol("population");
    let kappa = ctx.float("kappa");
    ctx.require("kappa", kappa > 0.0, "must be positive")?;
    let mean = ctx.float("poisson_mean");
    ctx.require("poisson_mean", mean > 0.0, "must be positive")?;
    let mut initials: Vec<(String, InitialBec)> = Vec::new();
    for n in ctx.counts("n") {
        ctx.require("n", n > 0, "entries must be positive")?;
        initials.push((format!("fock{n:03}"), InitialBec::Fock(n as u32)));
    }
    initials.push(("poisson".into(), InitialBec::Poisson(mean)));
    let mut records = Vec::new();
    let mut coherence: f64 = 0.0;
    for (label, initial) in initials {
        for (k, phi) in ctx.floats("phi").into_iter().enumerate() {
            let rdo = atom_molecule_process(initial, kappa, phi)?.rdo;
            let (s, c) = ((phi / 2.0).sin(), (phi / 2.0).cos());
            records.push(CheckRecord::close(
                format!("{label}_phi{k}_atom"),
                s * s,
                rdo.atom,
                tol,
            ));
            records.push(CheckRecord::close(
                format!("{label}_phi{k}_molecule"),
                c * c,
                rdo.molecule,
                tol,
            ));
            coherence = coherence.max(rdo.coherence.norm());
        }
    }
    records.push(CheckRecord::at_most("coherence_max", 0.0, coherence, tol));
    Ok(records)
}

pub static RAMSEY_VACUUM: Experiment = Experiment {
    name: "ramsey_vacuum",
    summary: "Interferometer fed with a vacuum/one-boson superposition matches the mixed input",
    params: &[P {
        name: "draws",
        default: D::Count(50),
        doc: "random (α, β, Δ, τ) draws",
    }],
    tolerances: &[T {
        name: "prob",
        default: 1e-12,
        doc: "detection probabilities",
    }],
    run: ramsey_vacuum,
};

fn ramsey_vacuum(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let mut rng = random::rng(ctx.seed);
    let (mut err, mut mixed): (f64, f64) = (0.0, 0.0);
    for _ in 0..ctx.count("draws") {
        let psi = random::pure_state(&mut rng, 2);
        let (alpha, beta) = (psi.amplitude(0), psi.amplitude(1));
        let delta: f64 = rng.random_range(0.1..3.0);
        let tau: f64 = rng.random_range(0.0..5.0);
        let r = ramsey_vacuum_superposition(alpha, beta, delta, tau)?;
        let b2 = beta.norm_sqr();
        let half = delta * tau / 2.0;
        err = err
            .max((r.p10 - b2 * half.sin().powi(2)).abs())
            .max((r.p01 - b2 * half.cos().powi(2)).abs());
        mixed = mixed
            .max((r.p10 - r.p10_mixed).abs())
            .max((r.p01 - r.p01_mixed).abs());
    }
    let tol = ctx.tol("prob");
    Ok(vec![
        CheckRecord::at_most("probability_error_max", 0.0, err, tol),
        CheckRecord::at_most("pure_vs_mixed_max", 0.0, mixed, tol),
    ])
}

pub static SSR_PROPAGATION: Experiment = Experiment {
    name: "ssr_propagation",
    summary: "Number-conserving evolution keeps compliant separable states compliant",
    params: &[
        P {
            name: "mixtures",
            default: D::Count(20),
            doc: "random compliant mixtures",
        },
        P {
            name: "lambda",
            default: D::Float(0.7),
            doc: "hopping strength",
        },
        P {
            name: "times",
            default: D::Floats(&[0.0, 0.4, 1.3, 2.9]),
            doc: "sampled evolution times",
        },
    ],
    tolerances: &[T {
        name: "ssr",
        default: 1e-10,
        doc: "SSR residual threshold",
    }],
    run: ssr_propagation,
};

fn ssr_propagation(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let tol = ctx.tol("ssr");
    let lambda = ctx.float("lambda");
    let times = ctx.floats("times");
    let space = FockSpace::new(ModeSystem::bosons(2, 2)?)?;
    let part = Partition::bipartite(&[0], &[1])?;
    let h = hopping_hamiltonian(&space, 0, 1, lambda)?;
    let mut rng = random::rng(ctx.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..ctx.count("mixtures") {
        let k = 1 + rng.random_range(0..3);
        let mix =
            random::separable_mixture(&mut rng, &space, &part, k, FactorKind::NumberCompliant)?;
        let r = ssr_propagation_check(&mix, &h, &[1, 1], &times, tol)?;
        worst = worst.max(max_of(r.residuals));
    }

    let ndpa_space = FockSpace::new(ModeSystem::bosons(3, 3)?)?;
    let ndpa = ndpa_hamiltonian(&ndpa_space, 0, 1, 2, lambda)?;
    let quanta = ndpa_space.number_op(&[1, 1, 2])?;

    // A truncated coherent factor carries coherences the hopping cannot remove.
    let alpha: f64 = 0.3;
    let amps = [1.0, alpha, alpha * alpha / 2f64.sqrt()].map(|x| Complex64::new(x, 0.0));
    let coh = PureState::normalized(nalgebra::DVector::from_column_slice(&amps))?;
    let fock = PureState::basis(3, 1)?.density();
    let bad = SeparableMixture::new(
        space.clone(),
        part,
        vec![MixtureComponent {
            weight: 1.0,
            factors: vec![coh.density(), fock],
        }],
    )?;
    let positive: Vec<f64> = times.iter().copied().filter(|&t| t > 0.0).collect();
    let r = ssr_propagation_check(&bad, &h, &[1, 1], &positive, tol)?;
    let smallest = r.residuals.iter().copied().fold(f64::INFINITY, f64::min);
    let mut records = vec![
        CheckRecord::at_most("compliant_residual_max", 0.0, worst, tol),
        CheckRecord::at_most(
            "ndpa_quanta_commutator",
            0.0,
            quanta.commutator(&ndpa).frobenius_norm(),
            tol,
        ),
    ];
    if smallest.is_finite() {
        records.push(CheckRecord::at_least(
            "coherent_component_residual_min",
            tol,
            smallest,
            0.0,
        ));
    }
    Ok(records)
}
