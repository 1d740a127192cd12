//! Super-selection diagnostics: twirling, correlation functions, sector
//! structure and phase states.

use std::f64::consts::PI;

use bosonic_ssr::random::{self, FactorKind};
use bosonic_ssr::ssr::{
    clock_prob, phase_state, qcf, sector_decompose, separable_ssr_theorem_check, twirl,
};
use bosonic_ssr::states::{
    coherent, poisson_pmf, two_mode_coherent_mixture, verstraete_state, VerstraeteForm,
};
use bosonic_ssr::{Complex64, FockSpace, ModeSystem, Partition, PureState};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::Experiment;
use crate::error::Result;
use crate::report::CheckRecord;
use crate::scenario::{Context, ParamDefault as D, ParamSpec as P, ToleranceSpec as T};

pub static TWIRL_COHERENT: Experiment = Experiment {
    name: "twirl_coherent",
    summary: "Phase-averaged coherent state against the Poisson number distribution",
    params: &[
        P {
            name: "nbar",
            default: D::Float(2.0),
            doc: "mean number |β|²",
        },
        P {
            name: "phase",
            default: D::Float(0.0),
            doc: "arg β",
        },
        P {
            name: "cutoff",
            default: D::Count(30),
            doc: "Fock cutoff",
        },
    ],
    tolerances: &[
        T {
            name: "weights",
            default: 1e-10,
            doc: "diagonal vs Poisson pmf",
        },
        T {
            name: "coherences",
            default: 1e-14,
            doc: "largest off-diagonal element",
        },
    ],
    run: twirl_coherent,
};

fn twirl_coherent(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let nbar = ctx.float("nbar");
    let cutoff = ctx.count("cutoff");
    ctx.require("nbar", nbar >= 0.0, "must be nonnegative")?;
    let beta = Complex64::from_polar(nbar.sqrt(), ctx.float("phase"));
    let psi = coherent(beta, cutoff as u32)?;
    let space = FockSpace::new(ModeSystem::bosons(1, cutoff as u32)?)?;
    let tw = twirl(&psi.density(), &space.total_number())?;
    let mut records = Vec::new();
    let mut off: f64 = 0.0;
    for i in 0..=cutoff {
        for j in 0..=cutoff {
            if i != j {
                off = off.max(tw.get(i, j).norm());
            }
        }
        records.push(CheckRecord::close(
            format!("weight_n{i:03}"),
            poisson_pmf(nbar, i as u32),
            tw.get(i, i).re,
            ctx.tol("weights"),
        ));
    }
    records.push(CheckRecord::at_most(
        "max_coherence",
        0.0,
        off,
        ctx.tol("coherences"),
    ));
    Ok(records)
}

pub static QCF_THEOREM: Experiment = Experiment {
    name: "qcf_theorem",
    summary: "Correlation functions of number-compliant states vanish unless n+l = m+k",
    params: &[
        P {
            name: "states",
            default: D::Count(100),
            doc: "random states",
        },
        P {
            name: "cutoff",
            default: D::Count(4),
            doc: "Fock cutoff per mode",
        },
        P {
            name: "max_index",
            default: D::Count(2),
            doc: "largest n, m, l, k",
        },
    ],
    tolerances: &[T {
        name: "qcf",
        default: 1e-10,
        doc: "forbidden values and twirl changes",
    }],
    run: qcf_theorem,
};

fn qcf_theorem(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let cutoff = ctx.count("cutoff") as u32;
    let top = ctx.count("max_index") as u32;
    let space = FockSpace::new(ModeSystem::bosons(2, cutoff)?)?;
    let n_op = space.total_number();
    let mut rng = random::rng(ctx.seed);
    let (mut forbidden, mut invariance): (f64, f64) = (0.0, 0.0);
    for _ in 0..ctx.count("states") {
        let rank = 1 + rng.random_range(0..space.dim());
        let raw = random::density(&mut rng, space.dim(), rank);
        let tw = twirl(&raw, &n_op)?;
        for n in 0..=top {
            for m in 0..=top {
                for l in 0..=top {
                    for k in 0..=top {
                        let after = qcf(&space, &tw, 0, 1, n, m, l, k)?.value;
                        if n + l != m + k {
                            forbidden = forbidden.max(after.norm());
                        } else {
                            let before = qcf(&space, &raw, 0, 1, n, m, l, k)?.value;
                            invariance = invariance.max((before - after).norm());
                        }
                    }
                }
            }
        }
    }
    Ok(vec![
        CheckRecord::at_most("forbidden_qcf_max", 0.0, forbidden, ctx.tol("qcf")),
        CheckRecord::at_most("twirl_change_max", 0.0, invariance, ctx.tol("qcf")),
    ])
}

pub static VERSTRAETE: Experiment = Experiment {
    name: "verstraete",
    summary: "Separable two-mode state that is globally but not locally number compliant",
    params: &[],
    tolerances: &[
        T {
            name: "forms",
            default: 1e-14,
            doc: "mixture vs sectorized matrix",
        },
        T {
            name: "weights",
            default: 1e-14,
            doc: "sector weights",
        },
        T {
            name: "ssr",
            default: 1e-12,
            doc: "SSR residual threshold",
        },
    ],
    run: verstraete,
};

fn verstraete(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let (rho, mix) = verstraete_state(VerstraeteForm::Mixture)?;
    let (sect, _) = verstraete_state(VerstraeteForm::Sectorized)?;
    let mix = mix.expect("mixture form keeps its components");
    let dec = sector_decompose(&rho, &mix.space().total_number())?;
    let report = separable_ssr_theorem_check(&mix, &[1, 1], ctx.tol("ssr"))?;
    let failing = report.local.iter().filter(|&&ok| !ok).count();
    let w = ctx.tol("weights");
    Ok(vec![
        CheckRecord::at_most(
            "form_difference",
            0.0,
            rho.max_abs_diff(&sect),
            ctx.tol("forms"),
        ),
        CheckRecord::close("sector_weight_n0", 0.25, dec.weight_of(0), w),
        CheckRecord::close("sector_weight_n1", 0.5, dec.weight_of(1), w),
        CheckRecord::close("sector_weight_n2", 0.25, dec.weight_of(2), w),
        CheckRecord::equals(
            "components_failing_local_ssr",
            mix.components().len(),
            failing,
        ),
        CheckRecord::at_most(
            "global_ssr_residual",
            0.0,
            report.global.residual,
            ctx.tol("ssr"),
        ),
    ])
}

pub static TWO_MODE_COHERENT_MIXTURE: Experiment = Experiment {
    name: "two_mode_coherent_mixture",
    summary: "Phase-averaged two-mode coherent product against its analytic matrix",
    params: &[
        P {
            name: "alpha",
            default: D::Float(1.0),
            doc: "coherent amplitude |α|",
        },
        P {
            name: "cutoff",
            default: D::Count(20),
            doc: "Fock cutoff per mode",
        },
        P {
            name: "points",
            default: D::Count(256),
            doc: "quadrature points in θ",
        },
    ],
    tolerances: &[
        T {
            name: "quadrature",
            default: 1e-10,
            doc: "analytic vs phase average",
        },
        T {
            name: "reduced",
            default: 1e-12,
            doc: "reduced state vs Poisson diagonal",
        },
    ],
    run: two_mode_coherent,
};

fn two_mode_coherent(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let alpha = ctx.float("alpha");
    let cutoff = ctx.count("cutoff") as u32;
    let points = ctx.count("points");
    ctx.require("points", points > 0, "must be positive")?;
    let (space, rho) = two_mode_coherent_mixture(alpha, cutoff)?;
    let d = cutoff as usize + 1;
    let mean = alpha * alpha;
    let kept: f64 = (0..d).map(|n| poisson_pmf(mean, n as u32)).sum();
    let amp = |n: usize, theta: f64| {
        Complex64::from_polar(
            (poisson_pmf(mean, n as u32) / kept).sqrt(),
            -(n as f64) * theta,
        )
    };
    let mut quad = DMatrix::<Complex64>::zeros(d * d, d * d);
    for k in 0..points {
        let theta = 2.0 * PI * k as f64 / points as f64;
        let v = DVector::from_fn(d * d, |i, _| amp(i / d, theta) * amp(i % d, theta));
        quad += &v * v.adjoint() / Complex64::new(points as f64, 0.0);
    }
    let (mut diff, mut selection): (f64, f64) = (0.0, 0.0);
    for (i, bi) in space.basis().iter().enumerate() {
        for (j, bj) in space.basis().iter().enumerate() {
            let ki = bi.occupancies[0] as usize * d + bi.occupancies[1] as usize;
            let kj = bj.occupancies[0] as usize * d + bj.occupancies[1] as usize;
            diff = diff.max((rho.get(i, j) - quad[(ki, kj)]).norm());
            if bi.total() != bj.total() {
                selection = selection.max(rho.get(i, j).norm());
            }
        }
    }
    let mut reduced: f64 = 0.0;
    for mode in 0..2 {
        let r = space.reduce(&rho, &[mode])?;
        for n in 0..d {
            for m in 0..d {
                let expect = if n == m {
                    poisson_pmf(mean, n as u32) / kept
                } else {
                    0.0
                };
                reduced = reduced.max((r.get(n, m) - Complex64::new(expect, 0.0)).norm());
            }
        }
    }
    Ok(vec![
        CheckRecord::at_most("quadrature_difference", 0.0, diff, ctx.tol("quadrature")),
        CheckRecord::at_most("selection_rule_max", 0.0, selection, 0.0),
        CheckRecord::at_most("reduced_poisson_error", 0.0, reduced, ctx.tol("reduced")),
    ])
}

pub static SEPARABILITY_SSR: Experiment = Experiment {
    name: "separability_ssr",
    summary: "Locally compliant separable mixtures are globally compliant; the converse fails",
    params: &[
        P {
            name: "mixtures",
            default: D::Count(100),
            doc: "random compliant mixtures",
        },
        P {
            name: "components",
            default: D::Count(4),
            doc: "largest number of components",
        },
    ],
    tolerances: &[T {
        name: "ssr",
        default: 1e-12,
        doc: "SSR residual threshold",
    }],
    run: separability_ssr,
};

fn separability_ssr(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let comps = ctx.count("components");
    ctx.require("components", comps > 0, "must be positive")?;
    let tol = ctx.tol("ssr");
    let space = FockSpace::new(ModeSystem::bosons(4, 1)?)?;
    let part = Partition::bipartite(&[0, 1], &[2, 3])?;
    let mut rng = random::rng(ctx.seed);
    let (mut local_fail, mut global_fail, mut worst) = (0, 0, 0.0f64);
    for _ in 0..ctx.count("mixtures") {
        let k = 1 + rng.random_range(0..comps);
        let mix =
            random::separable_mixture(&mut rng, &space, &part, k, FactorKind::NumberCompliant)?;
        let r = separable_ssr_theorem_check(&mix, &[1, 1, 1, 1], tol)?;
        local_fail += usize::from(!r.all_local());
        global_fail += usize::from(!r.global.compliant);
        worst = worst.max(r.global.residual);
    }
    let (_, v) = verstraete_state(VerstraeteForm::Mixture)?;
    let v =
        separable_ssr_theorem_check(&v.expect("mixture form keeps its components"), &[1, 1], tol)?;
    Ok(vec![
        CheckRecord::equals("random_local_failures", 0, local_fail),
        CheckRecord::equals("random_global_failures", 0, global_fail),
        CheckRecord::at_most("random_global_residual_max", 0.0, worst, tol),
        CheckRecord::equals("verstraete_caveat", 1, usize::from(v.caveat)),
    ])
}

pub static PHASE_CLOCK: Experiment = Experiment {
    name: "phase_clock",
    summary: "Phase-state transition probability formula against direct evolution",
    params: &[
        P {
            name: "n_max",
            default: D::Counts(&[4, 16, 64]),
            doc: "number cutoffs",
        },
        P {
            name: "shifts",
            default: D::Floats(&[0.0, 0.3, 1.0, PI, 2.0 * PI, -0.7]),
            doc: "ωΔt values, extended by multiples of 2π/(n_max+1)",
        },
    ],
    tolerances: &[T {
        name: "prob",
        default: 1e-12,
        doc: "formula vs evolution",
    }],
    run: phase_clock,
};

fn phase_clock(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let mut records = Vec::new();
    for n_max in ctx.counts("n_max") {
        ctx.require("n_max", n_max > 0, "entries must be positive")?;
        let n_max = n_max as u32;
        let d = n_max as usize + 1;
        let step = 2.0 * PI / d as f64;
        let mut shifts = ctx.floats("shifts");
        shifts.extend([step, 2.0 * step, 5.0 * step + 1e-3]);
        let ps = [0, 1, n_max / 2, n_max];
        let mut worst: f64 = 0.0;
        for &p in &ps {
            let tp = phase_state(n_max, p)?;
            for &q in &ps {
                let tq = phase_state(n_max, q)?;
                for &w in &shifts {
                    let v = DVector::from_fn(d, |n, _| {
                        tp.amplitude(n) * Complex64::from_polar(1.0, -w * n as f64)
                    });
                    let overlap = tq.inner(&PureState::new(v)?).norm_sqr();
                    worst = worst.max((clock_prob(p, q, w, n_max) - overlap).abs());
                }
            }
        }
        records.push(CheckRecord::at_most(
            format!("formula_error_nmax{n_max:03}"),
            0.0,
            worst,
            ctx.tol("prob"),
        ));
        let back = clock_prob(1, 0, step, n_max);
        records.push(CheckRecord::close(
            format!("backward_tick_nmax{n_max:03}"),
            1.0,
            back,
            ctx.tol("prob"),
        ));
    }
    Ok(records)
}
