//! Hidden-variable models: the GHZ assignment search, CHSH bound sweeps and
//! the Cauchy-Schwarz-type inequalities behind the separable bounds.

use bosonic_ssr::lhv::{
    deterministic_chsh_values, ghz_assignment_search, integral_inequality_oracle,
    lhv_chsh_bound_sweep, sum_inequality_oracle, ChshSweepConfig, GhzConstraints,
};
use bosonic_ssr::random;
use rand::Rng;

use super::{max_of, Experiment};
use crate::error::Result;
use crate::report::CheckRecord;
use crate::scenario::{Context, ParamDefault as D, ParamSpec as P, ToleranceSpec as T};

pub static GHZ_LHV_SEARCH: Experiment = Experiment {
    name: "ghz_lhv_search",
    summary: "No ±1 value assignment reproduces all four GHZ parities",
    params: &[],
    tolerances: &[],
    run: ghz_lhv_search,
};

fn ghz_lhv_search(_: &Context) -> Result<Vec<CheckRecord>> {
    let full = ghz_assignment_search(GhzConstraints::default());
    let free = ghz_assignment_search(GhzConstraints {
        cyclic: true,
        xxx: None,
    });
    let flipped = ghz_assignment_search(GhzConstraints {
        cyclic: true,
        xxx: Some(-1),
    });
    Ok(vec![
        CheckRecord::equals("assignments_all_four", 0, full),
        CheckRecord::equals("assignments_without_xxx", 64, free),
        CheckRecord::at_least("assignments_xxx_negative", 1.0, flipped as f64, 0.0),
    ])
}

pub static LHV_CHSH_SWEEP: Experiment = Experiment {
    name: "lhv_chsh_sweep",
    summary: "CHSH value of random local hidden-variable models stays within 2",
    params: &[
        P {
            name: "models",
            default: D::Count(10000),
            doc: "random fuzzy models",
        },
        P {
            name: "settings",
            default: D::Count(2),
            doc: "observables per side",
        },
        P {
            name: "hidden",
            default: D::Count(4),
            doc: "hidden values per model",
        },
    ],
    tolerances: &[T {
        name: "bound",
        default: 1e-12,
        doc: "slack on |S| ≤ 2",
    }],
    run: lhv_chsh_sweep,
};

fn lhv_chsh_sweep(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let tol = ctx.tol("bound");
    let report = lhv_chsh_bound_sweep(&ChshSweepConfig {
        models: ctx.count("models"),
        settings: ctx.count("settings"),
        hidden: ctx.count("hidden"),
        seed: ctx.seed,
    })?;
    let mut records: Vec<CheckRecord> = report
        .max_abs_by_sign
        .iter()
        .enumerate()
        .map(|(k, &v)| CheckRecord::at_most(format!("abs_s_max_minus{k}"), 2.0, v, tol))
        .collect();
    let corners = deterministic_chsh_values();
    records.push(CheckRecord::close(
        "deterministic_abs_s_max",
        2.0,
        max_of(corners.iter().map(|v| v.abs())),
        tol,
    ));
    records.push(CheckRecord::close(
        "deterministic_abs_s_min",
        2.0,
        corners
            .iter()
            .map(|v| v.abs())
            .fold(f64::INFINITY, f64::min),
        tol,
    ));
    Ok(records)
}

pub static SCHWARZ_INEQUALITIES: Experiment = Experiment {
    name: "schwarz_inequalities",
    summary: "Weighted Cauchy-Schwarz inequalities in sum and integral form",
    params: &[
        P {
            name: "draws",
            default: D::Count(10000),
            doc: "random nonnegative inputs per form",
        },
        P {
            name: "max_len",
            default: D::Count(8),
            doc: "largest number of terms in the sum form",
        },
    ],
    tolerances: &[T {
        name: "equality",
        default: 1e-12,
        doc: "equality-case gap",
    }],
    run: schwarz,
};

fn schwarz(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let max_len = ctx.count("max_len");
    ctx.require("max_len", max_len > 0, "must be positive")?;
    let mut rng = random::rng(ctx.seed);
    let (mut sum_fail, mut int_fail) = (0, 0);
    let mut cross: f64 = 0.0;
    for _ in 0..ctx.count("draws") {
        let k = 1 + rng.random_range(0..max_len);
        let p = random::dirichlet(&mut rng, k);
        let c: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..10.0)).collect();
        let d: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..10.0)).collect();
        let s = sum_inequality_oracle(&p, &c, &d)?;
        sum_fail += usize::from(!s.holds);
        cross = cross.max(((s.lhs - s.rhs) - s.pairwise_gap).abs() / s.lhs.max(1.0));
        let n = 2 + rng.random_range(0..30);
        let grid: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let pg: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0)).collect();
        let cg: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..10.0)).collect();
        let dg: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..10.0)).collect();
        int_fail += usize::from(!integral_inequality_oracle(&grid, &pg, &cg, &dg)?.holds);
    }
    let tol = ctx.tol("equality");
    let same = sum_inequality_oracle(&[0.1, 0.3, 0.6], &[2.0, 0.5, 7.0], &[2.0, 0.5, 7.0])?;
    let single = sum_inequality_oracle(&[0.0, 1.0, 0.0], &[2.0, 0.5, 7.0], &[3.0, 9.0, 1.0])?;
    let cd = [1.0, 4.0, 2.0, 3.0];
    let integral =
        integral_inequality_oracle(&[0.0, 0.5, 1.5, 2.0], &[1.0, 0.2, 0.4, 0.9], &cd, &cd)?;
    Ok(vec![
        CheckRecord::equals("sum_form_failures", 0, sum_fail),
        CheckRecord::equals("integral_form_failures", 0, int_fail),
        CheckRecord::at_most("pairwise_identity_error", 0.0, cross, 1e-10),
        CheckRecord::close("equality_c_equals_d", 0.0, same.lhs - same.rhs, tol),
        CheckRecord::close("equality_single_support", 0.0, single.lhs - single.rhs, tol),
        CheckRecord::close(
            "equality_integral_c_equals_d",
            0.0,
            integral.lhs - integral.rhs,
            tol,
        ),
    ])
}
