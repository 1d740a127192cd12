//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use bosonic_ssr::dynamics::{
    atom_molecule_process, extraction_experiment, ramsey_vacuum_superposition, ExtractionCase,
    InitialBec,
};
use bosonic_ssr::fock::{FockSpace, ModeSystem, Partition};
use bosonic_ssr::lhv::{
    ghz_assignment_search, integral_inequality_oracle, sum_inequality_oracle, GhzConstraints,
};
use bosonic_ssr::measurement::{cond_prob, prob, spectral, unrecorded_state};
use bosonic_ssr::operator::PureState;
use bosonic_ssr::random::{self, FactorKind};
use bosonic_ssr::ssr::{
    clock_prob, phase_state, qcf, sector_decompose, separable_ssr_theorem_check, twirl,
};
use bosonic_ssr::states::{
    coherent, ghz, qubit_pair_space, singlet_spin, spin_pair_space, two_mode_coherent_mixture,
    verstraete_state, VerstraeteForm,
};
use bosonic_ssr::witnesses::{
    chsh, chsh_correlation, chsh_from_tensor, correlation_tensor, ghz_parity,
    particle_entanglement, spin_epr, CHSHSetting,
};
use bosonic_ssr::{tol, Complex64};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
/// Case, first and second occupation, expected amplitudes.
type ExtractionRow = (ExtractionCase, [u32; 4], [u32; 4], f64, f64);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|err| format!("{err:?}"))
}

/// e^{−λ} λⁿ / n! by running product.
fn poisson(mean: f64, n: usize) -> f64 {
    let mut p = (-mean).exp();
    for k in 1..=n {
        p *= mean / k as f64;
    }
    p
}

fn twirl_poisson() -> Outcome {
    let beta = c(2f64.sqrt());
    let psi = e(coherent(beta, 30))?;
    let space = e(FockSpace::new(e(ModeSystem::bosons(1, 30))?))?;
    let tw = e(twirl(&psi.density(), &space.total_number()))?;
    let mut diag_err: f64 = 0.0;
    let mut off: f64 = 0.0;
    for i in 0..31 {
        for j in 0..31 {
            if i == j {
                diag_err = diag_err.max((tw.get(i, i).re - poisson(2.0, i)).abs());
            } else {
                off = off.max(tw.get(i, j).norm());
            }
        }
    }
    ensure(diag_err <= 1e-10, || {
        format!("diagonal error {diag_err:.3e}")
    })?;
    ensure(off <= 1e-14, || format!("off-diagonal {off:.3e}"))?;
    Ok(format!(
        "max diag error {diag_err:.2e}, max off-diagonal {off:.1e}"
    ))
}

fn qcf_theorem() -> Outcome {
    let space = e(FockSpace::new(e(ModeSystem::bosons(2, 4))?))?;
    let n_op = space.total_number();
    let mut rng = random::rng(2);
    let mut worst_forbidden: f64 = 0.0;
    let mut worst_invariance: f64 = 0.0;
    for _ in 0..100 {
        let rank = 1 + rng.random_range(0..space.dim());
        let raw = random::density(&mut rng, space.dim(), rank);
        let compliant = e(twirl(&raw, &n_op))?;
        for n in 0..=2 {
            for m in 0..=2 {
                for l in 0..=2 {
                    for k in 0..=2 {
                        if n + l != m + k {
                            let v = e(qcf(&space, &compliant, 0, 1, n, m, l, k))?;
                            worst_forbidden = worst_forbidden.max(v.value.norm());
                        } else {
                            let a = e(qcf(&space, &raw, 0, 1, n, m, l, k))?.value;
                            let b = e(qcf(&space, &compliant, 0, 1, n, m, l, k))?.value;
                            worst_invariance = worst_invariance.max((a - b).norm());
                        }
                    }
                }
            }
        }
    }
    ensure(worst_forbidden <= 1e-10, || {
        format!("|qcf| = {worst_forbidden:.3e} with n+l≠m+k")
    })?;
    ensure(worst_invariance <= 1e-10, || {
        format!("twirl changed a qcf by {worst_invariance:.3e}")
    })?;
    Ok(format!(
        "max forbidden |qcf| {worst_forbidden:.1e}, max twirl change {worst_invariance:.1e}"
    ))
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn chsh_criterion() -> Outcome {
    let rho = e(singlet_spin())?.density();
    let mut rng = random::rng(3);
    let mut corr_err: f64 = 0.0;
    for _ in 0..20 {
        let a = random::unit_vector(&mut rng);
        let b = random::unit_vector(&mut rng);
        let got = e(chsh_correlation(&rho, &a, &b))?;
        corr_err = corr_err.max((got + dot(&a, &b)).abs());
    }
    ensure(corr_err <= 1e-12, || {
        format!("singlet correlation error {corr_err:.3e}")
    })?;
    let s = e(chsh(&rho, &CHSHSetting::optimal()))?;
    let tsirelson = (s.abs() - 2.0 * 2f64.sqrt()).abs();
    ensure(tsirelson <= 1e-12, || format!("|S| = {s}"))?;
    let space = e(qubit_pair_space())?;
    let part = e(Partition::bipartite(&[0], &[1]))?;
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let k = 1 + rng.random_range(0..4);
        let mix = e(random::separable_mixture(
            &mut rng,
            &space,
            &part,
            k,
            FactorKind::Generic,
        ))?;
        let t = e(correlation_tensor(&e(mix.summed())?))?;
        for _ in 0..1000 {
            let setting = CHSHSetting {
                a1: random::unit_vector(&mut rng),
                a2: random::unit_vector(&mut rng),
                b1: random::unit_vector(&mut rng),
                b2: random::unit_vector(&mut rng),
            };
            worst = worst.max(chsh_from_tensor(&t, &setting, 3).abs());
        }
    }
    ensure(worst <= 2.0 + 1e-10, || {
        format!("separable |S| reached {worst}")
    })?;
    Ok(format!(
        "E error {corr_err:.1e}, |S|opt − 2√2 = {tsirelson:.1e}, separable max |S| {worst:.6}"
    ))
}

fn ghz_criterion() -> Outcome {
    let report = e(ghz_parity(&e(ghz())?, 1e-12))?;
    let worst = report.checks.iter().map(|c| c.residual).fold(0.0, f64::max);
    ensure(report.all_pass(), || format!("parity residual {worst:.3e}"))?;
    let count = ghz_assignment_search(GhzConstraints::default());
    ensure(count == 0, || {
        format!("{count} assignments satisfy all four constraints")
    })?;
    Ok(format!(
        "max parity residual {worst:.1e}; 0 of 512 assignments"
    ))
}

fn extraction_criterion() -> Outcome {
    let choices = [(0.6, 0.8), (FRAC_1_SQRT_2, FRAC_1_SQRT_2), (0.28, 0.96)];
    let cases: [ExtractionRow; 3] = [
        (
            ExtractionCase::ThreeBoson,
            [2, 0, 0, 1],
            [1, 1, 1, 0],
            (1.0f64 / 3.0).sqrt(),
            (2.0f64 / 3.0).sqrt(),
        ),
        (
            ExtractionCase::TwoBoson,
            [1, 0, 0, 1],
            [0, 1, 1, 0],
            FRAC_1_SQRT_2,
            FRAC_1_SQRT_2,
        ),
        (
            ExtractionCase::TwoFermion,
            [1, 0, 0, 1],
            [0, 1, 1, 0],
            FRAC_1_SQRT_2,
            -FRAC_1_SQRT_2,
        ),
    ];
    let mut worst: f64 = 0.0;
    for &(r, t) in &choices {
        for (case, first, second, x, y) in &cases {
            let res = e(extraction_experiment(*case, r, t))?;
            let a = e(res.amplitude(*first))?;
            let b = e(res.amplitude(*second))?;
            worst = worst.max((a - c(*x)).norm()).max((b - c(*y)).norm());
        }
    }
    ensure(worst <= 1e-12, || format!("amplitude error {worst:.3e}"))?;
    Ok(format!(
        "max amplitude error {worst:.1e} over 3 cases × 3 (r,t)"
    ))
}

fn atom_molecule_criterion() -> Outcome {
    let phis = [0.0, PI / 3.0, PI / 2.0, PI];
    let mut worst: f64 = 0.0;
    let mut coh: f64 = 0.0;
    for n in [1, 5, 20] {
        for &phi in &phis {
            let r = e(atom_molecule_process(InitialBec::Fock(n), 1.0, phi))?.rdo;
            let s2 = (phi / 2.0).sin().powi(2);
            let c2 = (phi / 2.0).cos().powi(2);
            worst = worst.max((r.atom - s2).abs()).max((r.molecule - c2).abs());
            coh = coh.max(r.coherence.norm());
        }
    }
    let mut worst_mix: f64 = 0.0;
    for &phi in &phis {
        let r = e(atom_molecule_process(InitialBec::Poisson(5.0), 1.0, phi))?.rdo;
        let s2 = (phi / 2.0).sin().powi(2);
        let c2 = (phi / 2.0).cos().powi(2);
        worst_mix = worst_mix
            .max((r.atom - s2).abs())
            .max((r.molecule - c2).abs());
        coh = coh.max(r.coherence.norm());
    }
    ensure(worst <= 1e-10, || {
        format!("Fock populations off by {worst:.3e}")
    })?;
    ensure(worst_mix <= 1e-10, || {
        format!("Poisson populations off by {worst_mix:.3e}")
    })?;
    ensure(coh <= 1e-10, || format!("coherence {coh:.3e}"))?;
    Ok(format!(
        "Fock error {worst:.1e}, Poisson error {worst_mix:.1e}, coherence {coh:.1e}"
    ))
}

fn ramsey_criterion() -> Outcome {
    let mut rng = random::rng(7);
    let mut worst: f64 = 0.0;
    let mut mixed: f64 = 0.0;
    for _ in 0..50 {
        let psi = random::pure_state(&mut rng, 2);
        let (alpha, beta) = (psi.amplitude(0), psi.amplitude(1));
        let delta: f64 = rng.random_range(0.1..3.0);
        let tau: f64 = rng.random_range(0.0..5.0);
        let r = e(ramsey_vacuum_superposition(alpha, beta, delta, tau))?;
        let b2 = beta.norm_sqr();
        let p10 = b2 * (delta * tau / 2.0).sin().powi(2);
        let p01 = b2 * (delta * tau / 2.0).cos().powi(2);
        worst = worst.max((r.p10 - p10).abs()).max((r.p01 - p01).abs());
        mixed = mixed
            .max((r.p10 - r.p10_mixed).abs())
            .max((r.p01 - r.p01_mixed).abs());
    }
    ensure(worst <= 1e-12, || format!("probability error {worst:.3e}"))?;
    ensure(mixed <= 1e-12, || {
        format!("pure vs mixed differ by {mixed:.3e}")
    })?;
    Ok(format!("max error {worst:.1e}, pure−mixed {mixed:.1e}"))
}

fn verstraete_criterion() -> Outcome {
    let (mix_rho, mix) = e(verstraete_state(VerstraeteForm::Mixture))?;
    let (sect, _) = e(verstraete_state(VerstraeteForm::Sectorized))?;
    let diff = mix_rho.max_abs_diff(&sect);
    ensure(diff <= 1e-14, || format!("forms differ by {diff:.3e}"))?;
    let mix = mix.ok_or("mixture form returned no components")?;
    let n_op = mix.space().total_number();
    let dec = e(sector_decompose(&mix_rho, &n_op))?;
    let w = [dec.weight_of(0), dec.weight_of(1), dec.weight_of(2)];
    let werr = (w[0] - 0.25)
        .abs()
        .max((w[1] - 0.5).abs())
        .max((w[2] - 0.25).abs());
    ensure(werr <= 1e-14, || format!("sector weights {w:?}"))?;
    let report = e(separable_ssr_theorem_check(&mix, &[1, 1], 1e-12))?;
    ensure(report.local.iter().all(|&l| !l), || {
        "a component passed local SSR".into()
    })?;
    ensure(report.global.compliant, || {
        format!("global residual {:.3e}", report.global.residual)
    })?;
    Ok(format!(
        "forms differ {diff:.1e}; weights {:.2}/{:.2}/{:.2}; 4/4 components fail local SSR; global residual {:.1e}",
        w[0], w[1], w[2], report.global.residual
    ))
}

fn coherent_mixture_criterion() -> Outcome {
    let alpha = 1.0;
    let cutoff = 20u32;
    let (space, rho) = e(two_mode_coherent_mixture(alpha, cutoff))?;
    let d = cutoff as usize + 1;
    // Phase average of the truncated, renormalized |αe^{−iθ}⟩ ⊗ |αe^{−iθ}⟩.
    let kept: f64 = (0..d).map(|n| poisson(alpha * alpha, n)).sum();
    let amp = |n: usize, theta: f64| {
        Complex64::from_polar(
            (poisson(alpha * alpha, n) / kept).sqrt(),
            -(n as f64) * theta,
        )
    };
    let points = 256;
    let mut quad = nalgebra::DMatrix::<Complex64>::zeros(d * d, d * d);
    for k in 0..points {
        let theta = 2.0 * PI * k as f64 / points as f64;
        let v = nalgebra::DVector::from_fn(d * d, |i, _| amp(i / d, theta) * amp(i % d, theta));
        quad += &v * v.adjoint() / c(points as f64);
    }
    let mut diff: f64 = 0.0;
    let mut selection: f64 = 0.0;
    for (i, bi) in space.basis().iter().enumerate() {
        for (j, bj) in space.basis().iter().enumerate() {
            let k_i = bi.occupancies[0] as usize * d + bi.occupancies[1] as usize;
            let k_j = bj.occupancies[0] as usize * d + bj.occupancies[1] as usize;
            diff = diff.max((rho.get(i, j) - quad[(k_i, k_j)]).norm());
            if bi.total() != bj.total() {
                selection = selection.max(rho.get(i, j).norm());
            }
        }
    }
    ensure(diff <= 1e-10, || {
        format!("analytic vs quadrature {diff:.3e}")
    })?;
    ensure(selection == 0.0, || {
        format!("selection-rule element {selection:.3e}")
    })?;
    let mut red: f64 = 0.0;
    for modes in [[0usize], [1usize]] {
        let r = e(space.reduce(&rho, &modes))?;
        for n in 0..d {
            for m in 0..d {
                let expect = if n == m {
                    poisson(alpha * alpha, n) / kept
                } else {
                    0.0
                };
                red = red.max((r.get(n, m) - c(expect)).norm());
            }
        }
    }
    ensure(red <= 1e-12, || {
        format!("reduced operator off Poisson by {red:.3e}")
    })?;
    Ok(format!(
        "quadrature diff {diff:.1e}; selection rule exact; reduced error {red:.1e}"
    ))
}

fn measurement_criterion() -> Outcome {
    let space = e(FockSpace::new(e(ModeSystem::bosons(2, 2))?))?;
    let mut rng = random::rng(10);
    let mut bayes: f64 = 0.0;
    let mut signal: f64 = 0.0;
    let mut reduced: f64 = 0.0;
    for _ in 0..100 {
        let rank = 1 + rng.random_range(0..space.dim());
        let rho = random::density(&mut rng, space.dim(), rank);
        let ha = random::hermitian(&mut rng, 3);
        let hb = random::hermitian(&mut rng, 3);
        let oa = e(spectral(&e(space.embed(&ha, &[0]))?, tol::MERGE))?;
        let ob = e(spectral(&e(space.embed(&hb, &[1]))?, tol::MERGE))?;
        for sa in oa.spectrum() {
            let p_i = prob(&rho, &sa.projector);
            let mut total = 0.0;
            for sb in ob.spectrum() {
                let p_j = prob(&rho, &sb.projector);
                if p_j > tol::PROB_FLOOR {
                    total += e(cond_prob(&rho, &sa.projector, &sb.projector))? * p_j;
                }
            }
            bayes = bayes.max((total - p_i).abs());
        }
        let un = e(unrecorded_state(&rho, &ob))?;
        for sa in oa.spectrum() {
            signal = signal.max((prob(&un, &sa.projector) - prob(&rho, &sa.projector)).abs());
        }
        let ra = e(space.reduce(&rho, &[0]))?;
        reduced = reduced.max(e(space.reduce(&un, &[0]))?.max_abs_diff(&ra));
    }
    let worst = bayes.max(signal).max(reduced);
    ensure(worst <= 1e-10, || {
        format!("Bayes {bayes:.3e}, no-signalling {signal:.3e}, reduced {reduced:.3e}")
    })?;
    Ok(format!(
        "Bayes {bayes:.1e}, no-signalling {signal:.1e}, reduced {reduced:.1e}"
    ))
}

fn separability_criterion() -> Outcome {
    let space = e(FockSpace::new(e(ModeSystem::bosons(4, 1))?))?;
    let part = e(Partition::bipartite(&[0, 1], &[2, 3]))?;
    let mut rng = random::rng(11);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let k = 1 + rng.random_range(0..4);
        let mix = e(random::separable_mixture(
            &mut rng,
            &space,
            &part,
            k,
            FactorKind::NumberCompliant,
        ))?;
        let r = e(separable_ssr_theorem_check(&mix, &[1, 1, 1, 1], 1e-12))?;
        ensure(r.all_local(), || {
            "random compliant component failed local SSR".into()
        })?;
        ensure(r.global.compliant, || {
            format!("global residual {:.3e}", r.global.residual)
        })?;
        worst = worst.max(r.global.residual);
    }
    let (_, mix) = e(verstraete_state(VerstraeteForm::Mixture))?;
    let mix = mix.ok_or("no components")?;
    let v = e(separable_ssr_theorem_check(&mix, &[1, 1], 1e-12))?;
    ensure(v.caveat && !v.all_local() && v.global.compliant, || {
        "Verstraete caveat not exhibited".into()
    })?;
    Ok(format!("100 compliant mixtures globally compliant (max residual {worst:.1e}); Verstraete global ✓ local ✗"))
}

fn particle_entanglement_criterion() -> Outcome {
    let space = e(FockSpace::new(e(ModeSystem::bosons(4, 1))?))?;
    let part = e(Partition::bipartite(&[0, 1], &[2, 3]))?;
    let mut rng = random::rng(12);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let k = 1 + rng.random_range(0..4);
        let mix = e(random::separable_mixture(
            &mut rng,
            &space,
            &part,
            k,
            FactorKind::Generic,
        ))?;
        worst = worst.max(e(particle_entanglement(&space, &e(mix.summed())?, &part))?.abs());
    }
    ensure(worst <= 1e-10, || {
        format!("separable E_P reached {worst:.3e}")
    })?;
    let pair = e(qubit_pair_space())?;
    let one_one = e(pair.fock_state(&[1, 1]))?.density();
    let q = e(Partition::bipartite(&[0], &[1]))?;
    let ep11 = e(particle_entanglement(&pair, &one_one, &q))?;
    ensure(ep11.abs() <= 1e-10, || format!("E_P(|1⟩|1⟩) = {ep11:.3e}"))?;
    let psi = e(space.superposition(&[(c(1.0), &[1, 0, 0, 1]), (c(1.0), &[0, 1, 1, 0])]))?;
    let ep = e(particle_entanglement(&space, &psi.density(), &part))?;
    let err = (ep - 2f64.ln()).abs();
    ensure(err <= 1e-10, || format!("E_P = {ep}, expected ln 2"))?;
    Ok(format!(
        "separable max {worst:.1e}; |1⟩|1⟩ {ep11:.1e}; sector-entangled − ln2 = {err:.1e}"
    ))
}

fn spin_epr_criterion() -> Outcome {
    let space = e(spin_pair_space())?;
    let part = e(Partition::bipartite(&[0, 1], &[2, 3]))?;
    let mut rng = random::rng(13);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let k = 1 + rng.random_range(0..4);
        let mix = e(random::separable_mixture(
            &mut rng,
            &space,
            &part,
            k,
            FactorKind::FixedNumber(1),
        ))?;
        let r = e(spin_epr(&space, &e(mix.summed())?, (0, 1), (2, 3)))?;
        worst = worst.max(r.verdict.rhs - r.verdict.lhs);
    }
    ensure(worst <= 1e-10, || format!("rhs − lhs reached {worst:.3e}"))?;
    Ok(format!("max (rhs − lhs) over 1000 mixtures {worst:.3e}"))
}

fn schwarz_criterion() -> Outcome {
    let mut rng = random::rng(14);
    let mut cross: f64 = 0.0;
    for _ in 0..10_000 {
        let k = 1 + rng.random_range(0..8);
        let p = random::dirichlet(&mut rng, k);
        let cv: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..10.0)).collect();
        let dv: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..10.0)).collect();
        let s = e(sum_inequality_oracle(&p, &cv, &dv))?;
        ensure(s.holds, || {
            format!("sum form failed: {} < {}", s.lhs, s.rhs)
        })?;
        cross = cross.max(((s.lhs - s.rhs) - s.pairwise_gap).abs() / s.lhs.max(1.0));
        let n = 2 + rng.random_range(0..30);
        let grid: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let pg: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0)).collect();
        let cg: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..10.0)).collect();
        let dg: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..10.0)).collect();
        let i = e(integral_inequality_oracle(&grid, &pg, &cg, &dg))?;
        ensure(i.holds, || {
            format!("integral form failed: {} < {}", i.lhs, i.rhs)
        })?;
    }
    let eq1 = e(sum_inequality_oracle(
        &[0.1, 0.3, 0.6],
        &[2.0, 0.5, 7.0],
        &[2.0, 0.5, 7.0],
    ))?;
    let eq2 = e(sum_inequality_oracle(
        &[0.0, 1.0, 0.0],
        &[2.0, 0.5, 7.0],
        &[3.0, 9.0, 1.0],
    ))?;
    let grid = [0.0, 0.5, 1.5, 2.0];
    let eq3 = e(integral_inequality_oracle(
        &grid,
        &[1.0, 0.2, 0.4, 0.9],
        &[1.0, 4.0, 2.0, 3.0],
        &[1.0, 4.0, 2.0, 3.0],
    ))?;
    let eq = [eq1, eq2, eq3]
        .iter()
        .map(|r| (r.lhs - r.rhs).abs())
        .fold(0.0, f64::max);
    ensure(eq <= 1e-12, || format!("equality case gap {eq:.3e}"))?;
    ensure(cross <= 1e-10, || {
        format!("pairwise cross-check off by {cross:.3e}")
    })?;
    Ok(format!(
        "10⁴ sum + 10⁴ integral draws hold; equality gap {eq:.1e}; pairwise check {cross:.1e}"
    ))
}

fn phase_clock_criterion() -> Outcome {
    let mut worst: f64 = 0.0;
    for n_max in [4u32, 16, 64] {
        let d = n_max as usize + 1;
        let ps: Vec<u32> = [0, 1, n_max / 2, n_max].into_iter().collect();
        let step = 2.0 * PI / d as f64;
        let shifts = [
            0.0,
            0.3,
            1.0,
            step,
            2.0 * step,
            PI,
            2.0 * PI,
            -0.7,
            5.0 * step + 1e-3,
        ];
        for &p in &ps {
            let theta_p = e(phase_state(n_max, p))?;
            for &q in &ps {
                let theta_q = e(phase_state(n_max, q))?;
                for &w in &shifts {
                    let evolved = nalgebra::DVector::from_fn(d, |n, _| {
                        theta_p.amplitude(n) * Complex64::from_polar(1.0, -w * n as f64)
                    });
                    let direct = e(PureState::new(evolved))?;
                    let overlap = theta_q.inner(&direct).norm_sqr();
                    worst = worst.max((clock_prob(p, q, w, n_max) - overlap).abs());
                }
            }
        }
    }
    ensure(worst <= 1e-12, || {
        format!("formula vs evolution {worst:.3e}")
    })?;
    Ok(format!("max |formula − evolution| {worst:.1e}"))
}

fn run(id: usize, name: &str, f: fn() -> Outcome) -> bool {
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(msg)
    });
    match result {
        Ok(detail) => {
            println!("PASS {id:>2} {name}: {detail}");
            true
        }
        Err(detail) => {
            println!("FAIL {id:>2} {name}: {detail}");
            false
        }
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 15] = [
        ("twirl-poisson", twirl_poisson),
        ("qcf-theorem", qcf_theorem),
        ("chsh", chsh_criterion),
        ("ghz", ghz_criterion),
        ("extraction", extraction_criterion),
        ("atom-molecule-ramsey", atom_molecule_criterion),
        ("vacuum-superposition-interferometer", ramsey_criterion),
        ("verstraete", verstraete_criterion),
        ("two-mode-coherent-mixture", coherent_mixture_criterion),
        ("measurement-identities", measurement_criterion),
        ("separability-ssr", separability_criterion),
        ("particle-entanglement", particle_entanglement_criterion),
        ("spin-epr-separable", spin_epr_criterion),
        ("schwarz-inequalities", schwarz_criterion),
        ("phase-clock", phase_clock_criterion),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        if !run(k + 1, name, *f) {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
