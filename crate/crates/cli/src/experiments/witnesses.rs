//! Entanglement tests: CHSH, GHZ parity, measurement identities, the
//! particle entanglement measure and the spin-EPR bound.

use bosonic_ssr::measurement::{cond_prob, prob, spectral, unrecorded_state};
use bosonic_ssr::random::{self, FactorKind};
use bosonic_ssr::states::{ghz, qubit_pair_space, singlet_spin, spin_pair_space};
use bosonic_ssr::witnesses::{
    chsh, chsh_correlation, chsh_from_tensor, correlation_tensor, ghz_parity,
    particle_entanglement, spin_epr, CHSHSetting,
};
use bosonic_ssr::{tol, Complex64, FockSpace, ModeSystem, Partition};
use rand::Rng;

use super::Experiment;
use crate::error::Result;
use crate::report::CheckRecord;
use crate::scenario::{Context, ParamDefault as D, ParamSpec as P, ToleranceSpec as T};

pub static GHZ_PARITY: Experiment = Experiment {
    name: "ghz_parity",
    summary: "GHZ state as an eigenstate of the four Pauli parity products",
    params: &[],
    tolerances: &[T {
        name: "eigen",
        default: 1e-12,
        doc: "‖Ô|Ψ⟩ − λ|Ψ⟩‖",
    }],
    run: ghz_parity_run,
};

fn ghz_parity_run(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let tol = ctx.tol("eigen");
    let report = ghz_parity(&ghz()?, tol)?;
    Ok(report
        .checks
        .iter()
        .map(|c| CheckRecord::at_most(format!("parity_{}", c.label), 0.0, c.residual, tol))
        .collect())
}

pub static CHSH_SINGLET: Experiment = Experiment {
    name: "chsh_singlet",
    summary: "Singlet correlations E = −a·b and the Tsirelson value at the optimal setting",
    params: &[P {
        name: "pairs",
        default: D::Count(20),
        doc: "random unit-vector pairs",
    }],
    tolerances: &[T {
        name: "singlet",
        default: 1e-12,
        doc: "correlations and |S|",
    }],
    run: chsh_singlet,
};

fn chsh_singlet(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let rho = singlet_spin()?.density();
    let mut rng = random::rng(ctx.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..ctx.count("pairs") {
        let a = random::unit_vector(&mut rng);
        let b = random::unit_vector(&mut rng);
        let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        worst = worst.max((chsh_correlation(&rho, &a, &b)? + dot).abs());
    }
    let s = chsh(&rho, &CHSHSetting::optimal())?;
    Ok(vec![
        CheckRecord::at_most("correlation_error_max", 0.0, worst, ctx.tol("singlet")),
        CheckRecord::close(
            "abs_s_optimal",
            2.0 * 2f64.sqrt(),
            s.abs(),
            ctx.tol("singlet"),
        ),
    ])
}

pub static CHSH_SEPARABLE_SWEEP: Experiment = Experiment {
    name: "chsh_separable_sweep",
    summary: "CHSH value of random separable two-qubit mixtures stays within 2",
    params: &[
        P {
            name: "mixtures",
            default: D::Count(1000),
            doc: "random separable mixtures",
        },
        P {
            name: "settings",
            default: D::Count(1000),
            doc: "random settings per mixture",
        },
        P {
            name: "components",
            default: D::Count(4),
            doc: "largest number of components",
        },
    ],
    tolerances: &[T {
        name: "bound",
        default: 1e-10,
        doc: "slack on |S| ≤ 2",
    }],
    run: chsh_separable_sweep,
};

fn chsh_separable_sweep(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let comps = ctx.count("components");
    ctx.require("components", comps > 0, "must be positive")?;
    let space = qubit_pair_space()?;
    let part = Partition::bipartite(&[0], &[1])?;
    let mut rng = random::rng(ctx.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..ctx.count("mixtures") {
        let k = 1 + rng.random_range(0..comps);
        let mix = random::separable_mixture(&mut rng, &space, &part, k, FactorKind::Generic)?;
        let t = correlation_tensor(&mix.summed()?)?;
        for _ in 0..ctx.count("settings") {
            let setting = CHSHSetting {
                a1: random::unit_vector(&mut rng),
                a2: random::unit_vector(&mut rng),
                b1: random::unit_vector(&mut rng),
                b2: random::unit_vector(&mut rng),
            };
            let minus = rng.random_range(0..4);
            worst = worst.max(chsh_from_tensor(&t, &setting, minus).abs());
        }
    }
    Ok(vec![CheckRecord::at_most(
        "abs_s_max",
        2.0,
        worst,
        ctx.tol("bound"),
    )])
}

pub static MEASUREMENT_IDENTITIES: Experiment = Experiment {
    name: "measurement_identities",
    summary: "Bayes rule, no-signalling and reduced-state invariance under unrecorded measurement",
    params: &[P {
        name: "states",
        default: D::Count(100),
        doc: "random two-mode states",
    }],
    tolerances: &[T {
        name: "identity",
        default: 1e-10,
        doc: "identity residuals",
    }],
    run: measurement_identities,
};

fn measurement_identities(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let space = FockSpace::new(ModeSystem::bosons(2, 2)?)?;
    let mut rng = random::rng(ctx.seed);
    let (mut bayes, mut signal, mut reduced): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..ctx.count("states") {
        let rank = 1 + rng.random_range(0..space.dim());
        let rho = random::density(&mut rng, space.dim(), rank);
        let oa = spectral(
            &space.embed(&random::hermitian(&mut rng, 3), &[0])?,
            tol::MERGE,
        )?;
        let ob = spectral(
            &space.embed(&random::hermitian(&mut rng, 3), &[1])?,
            tol::MERGE,
        )?;
        for sa in oa.spectrum() {
            let mut total = 0.0;
            for sb in ob.spectrum() {
                let pb = prob(&rho, &sb.projector);
                if pb > tol::PROB_FLOOR {
                    total += cond_prob(&rho, &sa.projector, &sb.projector)? * pb;
                }
            }
            bayes = bayes.max((total - prob(&rho, &sa.projector)).abs());
        }
        let un = unrecorded_state(&rho, &ob)?;
        for sa in oa.spectrum() {
            signal = signal.max((prob(&un, &sa.projector) - prob(&rho, &sa.projector)).abs());
        }
        reduced = reduced.max(
            space
                .reduce(&un, &[0])?
                .max_abs_diff(&space.reduce(&rho, &[0])?),
        );
    }
    let tol = ctx.tol("identity");
    Ok(vec![
        CheckRecord::at_most("bayes_residual_max", 0.0, bayes, tol),
        CheckRecord::at_most("no_signalling_residual_max", 0.0, signal, tol),
        CheckRecord::at_most("reduced_state_residual_max", 0.0, reduced, tol),
    ])
}

pub static PARTICLE_ENTANGLEMENT: Experiment = Experiment {
    name: "particle_entanglement",
    summary: "Sector-resolved entanglement vanishes on separable states and equals ln 2 on a sector Bell pair",
    params: &[
        P { name: "mixtures", default: D::Count(100), doc: "random separable mixtures" },
        P { name: "components", default: D::Count(4), doc: "largest number of components" },
    ],
    tolerances: &[T { name: "entropy", default: 1e-10, doc: "entropy tolerance in nats" }],
    run: particle_entanglement_run,
};

fn particle_entanglement_run(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let comps = ctx.count("components");
    ctx.require("components", comps > 0, "must be positive")?;
    let tol = ctx.tol("entropy");
    let space = FockSpace::new(ModeSystem::bosons(4, 1)?)?;
    let part = Partition::bipartite(&[0, 1], &[2, 3])?;
    let mut rng = random::rng(ctx.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..ctx.count("mixtures") {
        let k = 1 + rng.random_range(0..comps);
        let mix = random::separable_mixture(&mut rng, &space, &part, k, FactorKind::Generic)?;
        worst = worst.max(particle_entanglement(&space, &mix.summed()?, &part)?.abs());
    }
    let pair = qubit_pair_space()?;
    let single = Partition::bipartite(&[0], &[1])?;
    let one_one = particle_entanglement(&pair, &pair.fock_state(&[1, 1])?.density(), &single)?;
    let one = Complex64::new(1.0, 0.0);
    let bell = space.superposition(&[(one, &[1, 0, 0, 1]), (one, &[0, 1, 1, 0])])?;
    let ep = particle_entanglement(&space, &bell.density(), &part)?;
    Ok(vec![
        CheckRecord::at_most("separable_max", 0.0, worst, tol),
        CheckRecord::close("one_one_product", 0.0, one_one, tol),
        CheckRecord::close("sector_bell_pair", 2f64.ln(), ep, tol),
    ])
}

pub static SPIN_EPR_SEPARABLE: Experiment = Experiment {
    name: "spin_epr_separable",
    summary: "Conditional spin variances of separable one-boson-per-site mixtures respect the separable bound",
    params: &[
        P { name: "mixtures", default: D::Count(1000), doc: "random separable mixtures" },
        P { name: "components", default: D::Count(4), doc: "largest number of components" },
    ],
    tolerances: &[T { name: "bound", default: 1e-10, doc: "slack on lhs ≥ rhs" }],
    run: spin_epr_separable,
};

fn spin_epr_separable(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let comps = ctx.count("components");
    ctx.require("components", comps > 0, "must be positive")?;
    let space = spin_pair_space()?;
    let part = Partition::bipartite(&[0, 1], &[2, 3])?;
    let mut rng = random::rng(ctx.seed);
    let mut worst = f64::NEG_INFINITY;
    let mut skipped: f64 = 0.0;
    for _ in 0..ctx.count("mixtures") {
        let k = 1 + rng.random_range(0..comps);
        let mix =
            random::separable_mixture(&mut rng, &space, &part, k, FactorKind::FixedNumber(1))?;
        let r = spin_epr(&space, &mix.summed()?, (0, 1), (2, 3))?;
        worst = worst.max(r.verdict.rhs - r.verdict.lhs);
        skipped = skipped.max(r.skipped_weight);
    }
    if !worst.is_finite() {
        worst = 0.0;
    }
    Ok(vec![
        CheckRecord::at_most("rhs_minus_lhs_max", 0.0, worst, ctx.tol("bound")),
        CheckRecord::at_most("skipped_weight_max", 0.0, skipped, ctx.tol("bound")),
    ])
}
