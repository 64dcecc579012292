//! Acceptance suite: one pass/fail line per criterion, non-zero exit on any failure.
//!
//! Run with `cargo test -p prake-core --test acceptance`.

#![allow(clippy::needless_range_loop)]

mod common;

use std::time::Instant;

use num_complex::Complex64;
use prake_core::channel::{rng_for, sample_network, ChannelRealization};
use prake_core::experiments::{
    run_po_vs_frames, utility_scenario, validate_lsa, ExperimentSpec, LsaCheckPoint, Sweep,
};
use prake_core::game::{
    feasibility_check, fixed_point_residual, solve_equilibrium, solve_target_sinr, EfficiencyModel,
    NashOptions,
};
use prake_core::lsa::{
    self, invert_loss, loss_db, min_frames, mu, nu_arake, nu_branch, nu_branch_iv_printed, NuBranch,
};
use prake_core::rake::{compute_gains, network_weights, RakeWeights};
use prake_core::units::{db_to_linear, linear_to_db};
use prake_core::NetworkParams;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use common::{naive_gains, rel_err};

/// Seed of the single realization used by the utility overlay.
const SCENARIO_SEED: u64 = 1;

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn model() -> EfficiencyModel {
    EfficiencyModel::new(100).unwrap()
}

fn reference() -> NetworkParams {
    NetworkParams::default()
}

fn c1_target_sinr() -> Outcome {
    let g = solve_target_sinr(f64::INFINITY, &model()).unwrap();
    let db = linear_to_db(g);
    outcome(
        (db - 11.1).abs() <= 0.05,
        format!("gamma* = {g:.6} ({db:.4} dB), expected 11.1 +/- 0.05 dB"),
    )
}

fn c2_min_frames() -> Outcome {
    let m = model();
    let got: Vec<usize> = [0.0, 10.0, 20.0]
        .iter()
        .map(|&db| {
            min_frames(
                &reference()
                    .with_rake_ratio(0.1)
                    .with_pdp_ratio(db_to_linear(db)),
                &m,
            )
            .unwrap()
        })
        .collect();
    outcome(
        got == vec![21, 9, 6],
        format!("Nf_min = {got:?} for Lambda = 0/10/20 dB, expected [21, 9, 6]"),
    )
}

fn c3_loss() -> Outcome {
    let m = model();
    let p = reference();
    let mut pass = true;
    let mut parts = Vec::new();
    for (beta, expected) in [(0.5, 1.34), (0.3, 2.94), (0.1, 8.40)] {
        let l = loss_db(&p.with_rake_ratio(beta), &m).unwrap();
        let b = invert_loss(expected, &p, &m).unwrap();
        pass &= (l - expected).abs() <= 0.05 && (b - beta).abs() <= 0.005;
        parts.push(format!(
            "beta={beta}: L={l:.4} dB (want {expected}), inverse beta={b:.5}"
        ));
    }
    outcome(pass, parts.join("; "))
}

fn c4_arake_limits() -> Outcome {
    let mut worst: f64 = 0.0;
    for lam in [2.0, 10.0, 100.0] {
        for alpha in [0.25, 0.5, 1.0, 2.0] {
            let near = lsa::nu(lam, 1.0 - 1e-9, alpha).unwrap();
            let exact = nu_arake(lam, alpha).unwrap();
            worst = worst.max(rel_err(near, exact));
        }
    }
    let mu_exact = [1.0, 1.5, 2.0, 10.0, 100.0]
        .iter()
        .all(|&l| mu(l, 1.0).unwrap() == 1.0);
    outcome(
        worst <= 1e-6 && mu_exact,
        format!("max rel diff nu(beta=1-1e-9) vs ARake form = {worst:.2e} (<= 1e-6); mu(Lambda,1) == 1: {mu_exact}"),
    )
}

fn c5_branch_continuity() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut printed_worst: f64 = 0.0;
    let mut checks = 0;
    for lam in [1.5, 10.0, 100.0] {
        let mut pair = |a: NuBranch, b: NuBranch, beta: f64, alpha: f64| {
            let x = nu_branch(a, lam, beta, alpha);
            let y = nu_branch(b, lam, beta, alpha);
            worst = worst.max(rel_err(x, y));
            checks += 1;
        };
        for i in 1..10 {
            let lo = 0.5 * i as f64 / 10.0; // (0, 1/2)
            let hi = 0.5 + lo; // (1/2, 1)
            pair(NuBranch::I, NuBranch::II, lo, lo); // alpha = beta, beta < 1/2
            pair(NuBranch::III, NuBranch::IV, hi, hi); // alpha = beta, beta > 1/2
            pair(NuBranch::I, NuBranch::III, hi, 1.0 - hi); // alpha = 1 - beta, beta > 1/2
            pair(NuBranch::II, NuBranch::IV, lo, 1.0 - lo); // alpha = 1 - beta, beta < 1/2
            pair(NuBranch::IV, NuBranch::V, lo, 1.0); // alpha = 1
            pair(NuBranch::IV, NuBranch::V, hi, 1.0);
        }
        for (a, b) in [
            (NuBranch::I, NuBranch::II),
            (NuBranch::I, NuBranch::III),
            (NuBranch::I, NuBranch::IV),
            (NuBranch::II, NuBranch::III),
            (NuBranch::II, NuBranch::IV),
            (NuBranch::III, NuBranch::IV),
        ] {
            pair(a, b, 0.5, 0.5);
        }
        // printed branch IV against its neighbours on alpha = 1 - beta and alpha = 1
        for i in 1..10 {
            let lo = 0.5 * i as f64 / 10.0;
            let ii = nu_branch(NuBranch::II, lam, lo, 1.0 - lo);
            printed_worst = printed_worst.max(rel_err(nu_branch_iv_printed(lam, lo, 1.0 - lo), ii));
            let v = nu_branch(NuBranch::V, lam, lo, 1.0);
            printed_worst = printed_worst.max(rel_err(nu_branch_iv_printed(lam, lo, 1.0), v));
        }
    }
    outcome(
        worst <= 1e-9,
        format!(
            "{checks} boundary checks, max rel gap {worst:.2e} (<= 1e-9); \
             printed branch IV (3*Lambda*alpha term) jumps by up to {printed_worst:.3e} relative"
        ),
    )
}

fn c6_lsa_oracle() -> Outcome {
    let base = NetworkParams {
        users: 8,
        paths: 1000,
        frames: 1,
        ..reference()
    };
    let points = [
        LsaCheckPoint {
            lambda_db: 10.0,
            beta: 0.1,
            alpha: 0.25,
        },
        LsaCheckPoint {
            lambda_db: 10.0,
            beta: 0.5,
            alpha: 0.25,
        },
        LsaCheckPoint {
            lambda_db: 20.0,
            beta: 0.5,
            alpha: 1.25,
        },
        LsaCheckPoint {
            lambda_db: 10.0,
            beta: 1.0,
            alpha: 0.25,
        },
    ];
    let rows = validate_lsa(&base, &points, 200, 2024, 0.05).unwrap();
    let pass = rows.iter().all(|r| r.pass);
    let detail = rows
        .iter()
        .map(|r| {
            format!(
                "({} dB, {}, {}): mu err {:.2}%, nu err {:.2}%",
                r.lambda_db,
                r.beta,
                r.alpha,
                100.0 * r.mu_rel_err,
                100.0 * r.nu_rel_err
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    outcome(pass, detail)
}

fn c7_nash_fixed_point() -> Outcome {
    let m = model();
    let params = reference();
    let mut instances = 0;
    let mut stream = 0u64;
    let mut worst_sinr: f64 = 0.0;
    let mut worst_fp: f64 = 0.0;
    let mut all_converged = true;
    while instances < 100 {
        let mut rng = rng_for(7, stream);
        stream += 1;
        let ch = sample_network(&mut rng, &params).unwrap();
        let w = network_weights(&ch, params.rake_ratio);
        let g = compute_gains(&ch, &w, &params).unwrap();
        if !feasibility_check(&g, &m).iter().all(|&f| f) {
            continue;
        }
        instances += 1;
        let eq = solve_equilibrium(&g, &params, &m, NashOptions::default());
        all_converged &= eq.converged;
        for k in 0..params.users {
            if !eq.saturated[k] {
                worst_sinr = worst_sinr.max(rel_err(eq.sinrs[k], eq.targets[k]));
            }
        }
        worst_fp = worst_fp.max(fixed_point_residual(&eq.powers, &g, &params, &m));
    }
    outcome(
        all_converged && worst_sinr <= 1e-6 && worst_fp <= 1e-8,
        format!(
            "{instances} feasible instances ({stream} drawn): max SINR/target rel err {worst_sinr:.2e} (<= 1e-6), \
             max fixed-point residual {worst_fp:.2e} (<= 1e-8), all converged: {all_converged}"
        ),
    )
}

fn c8_po_knee() -> Outcome {
    let params = reference().with_rake_ratio(0.1);
    let m = model();
    let lam_db = 10.0;
    let nf_min = min_frames(&params.with_pdp_ratio(db_to_linear(lam_db)), &m).unwrap();
    let trials = 1000;
    let spec = ExperimentSpec {
        params,
        trials,
        seed: 3,
        sweep: Sweep::Frames {
            frames: (1..=nf_min + 10).collect(),
            pdp_ratios_db: vec![lam_db],
        },
        nash: NashOptions::default(),
    };
    let rows = run_po_vs_frames(&spec).unwrap();
    let po_at = |nf: usize| rows.iter().find(|r| r.nf == nf).unwrap().po;
    let below = po_at(nf_min - 5);
    let above = po_at(nf_min + 5);
    let mut monotone = true;
    for w in rows.windows(2) {
        let (a, b) = (w[0].po, w[1].po);
        let sigma = ((a * (1.0 - a) + b * (1.0 - b)) / trials as f64).sqrt();
        if b > a + 2.0 * sigma {
            monotone = false;
        }
    }
    let curve: Vec<String> = rows
        .iter()
        .map(|r| format!("{}:{:.3}", r.nf, r.po))
        .collect();
    outcome(
        below >= 0.95 && above <= 0.10 && monotone,
        format!(
            "Nf_min = {nf_min}; Po(Nf_min-5) = {below:.3} (>= 0.95), Po(Nf_min+5) = {above:.3} (<= 0.10), \
             monotone within 2 sigma: {monotone}; curve {}",
            curve.join(" ")
        ),
    )
}

fn c9_utility_overlay() -> Outcome {
    let m = model();
    let params = NetworkParams {
        frames: 20,
        pdp_ratio: 10.0,
        ..reference()
    };
    let spec = ExperimentSpec {
        params,
        trials: 1,
        seed: SCENARIO_SEED,
        sweep: Sweep::RakeRatios(vec![1.0, 0.5, 0.3, 0.1]),
        nash: NashOptions::default(),
    };
    let scenario = utility_scenario(&spec).unwrap();
    let (_, _, arake) = &scenario.runs[0];
    let arake_params = params.with_rake_ratio(1.0);
    let mut pass = arake.converged && !arake.any_saturated();
    let mut worst_a: f64 = 0.0;
    for (k, ch) in scenario.channels.iter().enumerate() {
        let theory = lsa::asymptotic_utility(ch.energy(), &arake_params, &m).unwrap();
        worst_a = worst_a.max(linear_to_db(arake.utilities[k] / theory).abs());
    }
    pass &= worst_a <= 1.0;
    let mut parts = vec![format!(
        "ARake vs closed form: max |gap| {worst_a:.3} dB (<= 1)"
    )];
    for (beta, _, eq) in &scenario.runs[1..] {
        let tol = if *beta < 0.2 { 2.0 } else { 1.0 };
        let pred = loss_db(&params.with_rake_ratio(*beta), &m).unwrap();
        let worst = (0..params.users)
            .map(|k| (linear_to_db(arake.utilities[k] / eq.utilities[k]) - pred).abs())
            .fold(0.0, f64::max);
        pass &= eq.converged && !eq.any_saturated() && worst <= tol;
        parts.push(format!(
            "beta={beta}: predicted {pred:.2} dB, max |gap| {worst:.3} dB (<= {tol})"
        ));
    }
    outcome(pass, format!("seed {SCENARIO_SEED}; {}", parts.join("; ")))
}

fn c10_gain_oracle() -> Outcome {
    let mut rng = rng_for(99, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let l = rng.gen_range(2..=10);
        let k = rng.gen_range(1..=4);
        let chips = rng.gen_range(1..=12);
        let frames = rng.gen_range(1..=5);
        let beta = rng.gen_range(0.05..=1.0);
        let params = NetworkParams {
            users: k,
            paths: l,
            chips,
            frames,
            rake_ratio: beta,
            ..reference()
        };
        let channels: Vec<ChannelRealization> = (0..k)
            .map(|_| {
                let taps = (0..l)
                    .map(|_| {
                        let re: f64 = StandardNormal.sample(&mut rng);
                        let im: f64 = StandardNormal.sample(&mut rng);
                        Complex64::new(re, im)
                    })
                    .collect();
                ChannelRealization::from_taps(taps, 5.0, 1.0).unwrap()
            })
            .collect();
        let weights: Vec<RakeWeights> = network_weights(&channels, beta);
        let g = compute_gains(&channels, &weights, &params).unwrap();
        let taps: Vec<Vec<Complex64>> = channels.iter().map(|c| c.taps.clone()).collect();
        let ws: Vec<Vec<Complex64>> = weights.iter().map(|w| w.weights.clone()).collect();
        let (sp, si, mai) = naive_gains(&taps, &ws, chips, params.processing_gain());
        for u in 0..k {
            worst = worst.max(rel_err(g.h_sp[u], sp[u]));
            worst = worst.max(rel_err(g.h_si[u], si[u]));
            for j in 0..k {
                if j != u {
                    worst = worst.max(rel_err(g.h_mai[(u, j)], mai[u][j]));
                }
            }
        }
    }
    outcome(
        worst <= 1e-12,
        format!("50 instances, max rel err vs naive evaluator {worst:.2e} (<= 1e-12)"),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("C1 target SINR", c1_target_sinr),
        ("C2 minimum frames", c2_min_frames),
        ("C3 loss values and inversion", c3_loss),
        ("C4 ARake limits", c4_arake_limits),
        ("C5 nu branch continuity", c5_branch_continuity),
        ("C6 large-system Monte Carlo oracle", c6_lsa_oracle),
        ("C7 Nash fixed point", c7_nash_fixed_point),
        ("C8 Po knee", c8_po_knee),
        ("C9 utility overlay", c9_utility_overlay),
        ("C10 brute-force gain oracle", c10_gain_oracle),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!("[{status}] {name} ({:.2?}): {}", start.elapsed(), o.detail);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
