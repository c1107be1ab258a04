//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

use std::process::ExitCode;
use std::time::Instant;

use marvel_core::bench::{self, Algorithm, ExperimentConfig, MeanMetrics};
use marvel_core::ci::{CiOracle, Dataset, DsepOracle, FisherZOracle, GaussianCiConfig};
use marvel_core::graph::{
    apply_meek_rules, cpdag_bruteforce, is_removable_graphical, markov_boundary_graphical, pattern, Dag,
};
use marvel_core::marvel::{
    ci_budget_bound, is_removable_ci, marvel_learn, marvel_learn_with, MarvelCaches, MarvelOptions,
};
use marvel_core::mb::{total_conditioning, total_conditioning_on};
use marvel_core::synth::{erdos_renyi_dag, fixed_indegree_dag, rng};
use marvel_core::VarSet;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

/// `count` DAGs with `p` uniform in `p_range` and `m` uniform in
/// `[0, C(p, 2)]`, all derived from `base`.
fn random_dags(base: u64, count: usize, p_range: std::ops::RangeInclusive<usize>) -> Vec<Dag> {
    let mut r = rng(base);
    (0..count)
        .map(|_| {
            let p = r.random_range(p_range.clone());
            let m = r.random_range(0..=p * (p - 1) / 2);
            erdos_renyi_dag(p, m, r.random()).unwrap()
        })
        .collect()
}

fn learn_marvel(g: &Dag, opts: MarvelOptions) -> marvel_core::marvel::LearnResult {
    let mut o = DsepOracle::new(g.clone());
    let mb = total_conditioning(&mut o, g.p());
    marvel_learn_with(&mut o, mb, opts).unwrap()
}

fn exact_correctness() -> (bool, String) {
    let dags = random_dags(1, 200, 4..=10);
    let failures = dags
        .par_iter()
        .filter(|g| {
            let mut o = DsepOracle::new((*g).clone());
            let mb = total_conditioning(&mut o, g.p());
            marvel_learn(&mut o, mb).unwrap().essential != cpdag_bruteforce(g).unwrap()
        })
        .count();
    (failures == 0, format!("{failures}/200 graphs differ from the brute-force CPDAG"))
}

fn removability_equivalence() -> (bool, String) {
    let dags = random_dags(2, 100, 2..=10);
    let (checked, disagree) = dags
        .par_iter()
        .map(|g| {
            let mut bad = 0;
            for x in 0..g.p() {
                let mut o = DsepOracle::new(g.clone());
                let mb = markov_boundary_graphical(g, x);
                let ci = is_removable_ci(x, &mb, &mut o, &mut MarvelCaches::new(g.p())).unwrap();
                bad += usize::from(ci.removable != is_removable_graphical(g, x));
            }
            (g.p(), bad)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    (disagree == 0, format!("{disagree} disagreements over {checked} vertices"))
}

fn ci_budget() -> (bool, String) {
    let p = 25;
    let mut ok = true;
    let mut detail = Vec::new();
    for delta in 1..=5 {
        let runs: Vec<(u64, u64, u64)> = (0..20u64)
            .into_par_iter()
            .map(|seed| {
                let g = fixed_indegree_dag(p, delta, 1000 * delta as u64 + seed).unwrap();
                let (_, m) = bench::learn(Algorithm::Marvel, &mut DsepOracle::new(g.clone())).unwrap();
                let (_, c) = bench::learn(Algorithm::Pc, &mut DsepOracle::new(g)).unwrap();
                (m.ci.n_tests, c.ci.n_tests, m.warnings.len() as u64)
            })
            .collect();
        let bound = ci_budget_bound(p, delta);
        let worst = runs.iter().map(|r| r.0).max().unwrap();
        let mean_m = runs.iter().map(|r| r.0 as f64).sum::<f64>() / 20.0;
        let mean_pc = runs.iter().map(|r| r.1 as f64).sum::<f64>() / 20.0;
        ok &= worst <= bound;
        ok &= runs.iter().all(|r| r.2 == 0);
        if delta >= 3 {
            ok &= mean_m < mean_pc;
        }
        detail.push(format!("Δ={delta}: max {worst} ≤ {bound}, mean {mean_m:.1} vs PC {mean_pc:.1}"));
    }
    (ok, detail.join("; "))
}

fn small_boundaries() -> (bool, String) {
    let dags = random_dags(4, 500, 2..=12);
    let violations: usize = dags
        .par_iter()
        .map(|g| {
            let d = g.max_in_degree();
            (0..g.p())
                .filter(|&x| is_removable_graphical(g, x) && markov_boundary_graphical(g, x).len() > d)
                .count()
        })
        .sum();
    (violations == 0, format!("{violations} removable vertices with |Mb| > Δ_in"))
}

fn finite_sample() -> (bool, String) {
    let cfg = ExperimentConfig::from_toml(
        "generator = \"fixed_indegree\"\np = 50\ndelta_in = 4\noracle = \"fisher_z\"\nn_samples = 2500\nn_seeds = 10",
    )
    .unwrap();
    let rows = bench::run_experiment(&cfg).unwrap();
    let mean = MeanMetrics::of(&rows).unwrap();
    (
        mean.f1 >= 0.85 && mean.recall >= 0.90,
        format!("mean F1 {:.3} (≥ 0.85), recall {:.3} (≥ 0.90), precision {:.3}", mean.f1, mean.recall, mean.precision),
    )
}

fn meek_completeness() -> (bool, String) {
    let dags = random_dags(6, 300, 1..=6);
    let failures = dags
        .iter()
        .filter(|g| apply_meek_rules(&pattern(g)).ok() != Some(cpdag_bruteforce(g).unwrap()))
        .count();
    (failures == 0, format!("{failures}/300 mismatches"))
}

fn mb_update_soundness() -> (bool, String) {
    let dags = random_dags(7, 100, 2..=9);
    let (removals, failures) = dags
        .par_iter()
        .map(|g| {
            let p = g.p();
            let mb0 = total_conditioning(&mut DsepOracle::new(g.clone()), p);
            let mut failures = 0;
            let mut removals = 0;
            for x in (0..p).filter(|&x| is_removable_graphical(g, x)) {
                let mut updated = mb0.clone();
                updated.update_after_removal(x, &g.neighbors(x), &mut DsepOracle::new(g.clone())).unwrap();
                let sub = g.without(&VarSet::singleton(x));
                let fresh = total_conditioning_on(&mut DsepOracle::new(sub), &VarSet::full(p).without(x), p);
                removals += 1;
                failures += usize::from(updated != fresh);
            }
            (removals, failures)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    (failures == 0, format!("{failures} mismatches over {removals} removals"))
}

fn fisher_z_calibration() -> (bool, String) {
    let n = 10_000;
    let cfg = GaussianCiConfig::new(0.05).unwrap();
    let rejections: usize = (0..1000u64)
        .into_par_iter()
        .map(|k| {
            let mut r = rng(80_000 + k);
            let rows = (0..n)
                .map(|_| {
                    let a: f64 = StandardNormal.sample(&mut r);
                    let b: f64 = StandardNormal.sample(&mut r);
                    vec![a, b]
                })
                .collect();
            let data = Dataset::from_rows(rows).unwrap();
            usize::from(!FisherZOracle::new(&data, cfg).query(0, 1, &VarSet::new()))
        })
        .sum();
    let rate = rejections as f64 / 1000.0;
    ((0.04..=0.06).contains(&rate), format!("rejection rate {rate:.3} in [0.04, 0.06]"))
}

fn cache_soundness() -> (bool, String) {
    let dags = random_dags(9, 100, 4..=12);
    let off = MarvelOptions { caches: false, memo: false };
    let results: Vec<(bool, u64, u64)> = dags
        .par_iter()
        .map(|g| {
            let a = learn_marvel(g, MarvelOptions::default());
            let b = learn_marvel(g, off);
            (a.essential == b.essential, a.ci.n_tests, b.ci.n_tests)
        })
        .collect();
    let differ = results.iter().filter(|r| !r.0).count();
    let more = results.iter().filter(|r| r.1 > r.2).count();
    let (on, total_off): (u64, u64) = results.iter().fold((0, 0), |acc, r| (acc.0 + r.1, acc.1 + r.2));
    (
        differ == 0 && more == 0,
        format!("{differ} output mismatches, {more} runs costlier with caches; tests {on} vs {total_off}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> (bool, String)); 9] = [
        ("1 exact-oracle correctness", exact_correctness),
        ("2 removability equivalence", removability_equivalence),
        ("3 CI budget", ci_budget),
        ("4 removable vertices have small boundaries", small_boundaries),
        ("5 finite-sample accuracy", finite_sample),
        ("6 Meek completeness", meek_completeness),
        ("7 boundary update soundness", mb_update_soundness),
        ("8 Fisher-Z calibration", fisher_z_calibration),
        ("9 cache soundness", cache_soundness),
    ];
    let mut all = true;
    for (name, run) in criteria {
        let start = Instant::now();
        let (ok, detail) = run();
        all &= ok;
        println!(
            "{} criterion {name}: {detail} [{:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
