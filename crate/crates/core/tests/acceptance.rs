//! Acceptance criteria. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use listcal::measure::FDivergence;
use listcal::objective::{fg_set, seq_objective, ItemPositionSet};
use listcal::oracle::{check_mdr, check_ordered_submodular_measure, check_set_to_sequence, ratio_report};
use listcal::repro::{generate_instances, repro_appendix_b, repro_appendix_c, GeneratorParams};
use listcal::{ContinuousParams, Overlap, OverlapMeasure, Solver};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, Duration, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn hellinger(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a * b).sqrt()).sum()
}

fn random_simplex(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / s).collect()
}

fn measures_under_test() -> Vec<OverlapMeasure> {
    ["hellinger", "power:0.25", "power:0.5", "power:0.75", "concave:root:0.5", "concave:log1p", "concave:exp:2"]
        .iter()
        .map(|s| OverlapMeasure::parse(s).unwrap())
        .collect()
}

fn ordering_example() -> Verdict {
    let r = repro_appendix_c();
    let values: Vec<String> = r.rows.iter().map(|row| format!("{:.4}", row.value)).collect();
    verdict(r.passed(), format!("values {} reversal {}", values.join(" / "), r.reversal_holds))
}

fn kl_mmr_table() -> Verdict {
    let r = repro_appendix_b();
    let bad: Vec<String> = r.rows.iter().filter(|row| !row.values_match).map(|row| format!("w1={}", row.w1)).collect();
    let flip = r.sign_flip(2.0, 5.0);
    let diverge = r.divergence_everywhere();
    verdict(
        r.passed(),
        format!("rows off by >1e-4 rel: {bad:?}; sign flip 2->5: {flip}; greedy-first i1 vs opt-first i2 in every row: {diverge}"),
    )
}

fn ratio_bound(solver: Solver, params: GeneratorParams, n: usize, seeds: usize, bound: f64) -> (bool, String) {
    let r = ratio_report(&solver, &params, n, 2024, seeds).expect("ratio report");
    let ok = r.instances == n && r.min_ratio >= bound;
    (ok, format!("{}[{}] n={} min {:.6} median {:.6}", r.algorithm, r.measure, r.instances, r.min_ratio, r.median_ratio))
}

fn discrete_ratio() -> Verdict {
    let (ok, d) = ratio_bound(Solver::DiscreteGreedy, GeneratorParams::discrete(5, 8), 1000, 1, 2.0 / 3.0 - 1e-9);
    verdict(ok, d)
}

fn greedy_ratio() -> Verdict {
    let mut all = true;
    let mut details = Vec::new();
    for m in ["hellinger", "power:0.25", "power:0.5", "power:0.75"] {
        let solver = Solver::Greedy { measure: OverlapMeasure::parse(m).unwrap(), allow_repeats: false };
        let (ok, d) = ratio_bound(solver, GeneratorParams::distributional(5, 6, 5), 1000, 1, 0.5 - 1e-9);
        all &= ok;
        details.push(d);
    }
    verdict(all, details.join("; "))
}

fn continuous_pipeline() -> Verdict {
    let solver = Solver::Distributional { measure: OverlapMeasure::HellingerSquared, params: ContinuousParams::default() };
    let bound = 1.0 - (-1.0f64).exp() - 0.02;
    let (ok, d) = ratio_bound(solver, GeneratorParams::distributional(4, 6, 4), 50, 5, bound);
    verdict(ok, format!("{d} (bound {bound:.6})"))
}

fn prop_set_to_sequence() -> Verdict {
    let r = check_set_to_sequence(&OverlapMeasure::HellingerSquared, &GeneratorParams::distributional(5, 6, 5), 1000, 7)
        .expect("check runs");
    verdict(r.passed(), format!("{} trials, {} violations", r.trials, r.violations))
}

fn mdr_smdr() -> Verdict {
    let shape = GeneratorParams::distributional(5, 5, 4);
    let mut all = true;
    let mut details = Vec::new();
    for g in measures_under_test() {
        let r = check_mdr(&g, &shape, 1000, 11).expect("check runs");
        all &= r.smdr();
        details.push(format!(
            "{g}: {}/{}/{}",
            r.monotone.violations, r.submodular.violations, r.coordinatewise.violations
        ));
    }
    verdict(all, format!("violations monotone/submodular/coordinatewise: {}", details.join(", ")))
}

fn mdr_implies_ordered() -> Verdict {
    let shape = GeneratorParams::distributional(5, 5, 4);
    let mut candidates = measures_under_test();
    candidates.push(OverlapMeasure::parse("fdiv:hellinger:1").unwrap());
    candidates.push(OverlapMeasure::parse("fdiv:tv:1").unwrap());
    let mut all = true;
    let mut details = Vec::new();
    for g in candidates {
        let mdr = check_mdr(&g, &shape, 1000, 13).expect("check runs").mdr();
        if !mdr {
            details.push(format!("{g}: not MDR, skipped"));
            continue;
        }
        let r = check_ordered_submodular_measure(&g, &shape, 1000, 17).expect("check runs");
        all &= r.passed();
        details.push(format!("{g}: {} violations", r.violations));
    }
    verdict(all, details.join(", "))
}

fn equivalences() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let power = OverlapMeasure::power(0.5).unwrap();
    let fdiv = FDivergence::hellinger(1.0).unwrap();
    let halved = FDivergence::new("half-hellinger", |t: f64| (t.sqrt() - 1.0).powi(2) / 2.0, 1.0).unwrap();
    let (mut power_gap, mut fdiv_gap, mut halved_gap) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let n = rng.random_range(2..=6);
        let p = random_simplex(&mut rng, n);
        let q = random_simplex(&mut rng, n);
        let h = hellinger(&p, &q);
        power_gap = power_gap.max((power.overlap(&p, &q) - h).abs());
        fdiv_gap = fdiv_gap.max((1.0 - fdiv.divergence(&p, &q) - h).abs());
        halved_gap = halved_gap.max((1.0 - halved.divergence(&p, &q) - h).abs());
    }

    let mut set_gap = 0.0f64;
    let shape = GeneratorParams::distributional(5, 6, 5);
    for inst in generate_instances(&shape, 21, 200).unwrap() {
        let mut ids: Vec<usize> = (0..inst.items().len()).collect();
        ids.shuffle(&mut rng);
        ids.truncate(inst.k());
        let set = ItemPositionSet::from_sequence(&ids);
        for g in measures_under_test() {
            let a = fg_set(&g, &set, &inst).unwrap();
            let b = seq_objective(&g, &ids, &inst).unwrap();
            set_gap = set_gap.max((a - b).abs());
        }
    }

    let pass = power_gap <= 1e-9 && fdiv_gap <= 1e-9 && set_gap <= 1e-12;
    verdict(
        pass,
        format!(
            "max |power(0.5) - H| = {power_gap:.2e}; max |1 - D_f - H| with f=(sqrt t-1)^2 = {fdiv_gap:.2e}; \
             with f=(sqrt t-1)^2/2 = {halved_gap:.2e}; max |fg_set - seq_objective| = {set_gap:.2e}"
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 ordering example golden values", Duration::from_secs(1), ordering_example),
        ("2 KL/MMR golden table", Duration::from_secs(1), kl_mmr_table),
        ("3 discrete greedy >= 2/3", Duration::from_secs(120), discrete_ratio),
        ("4 greedy >= 1/2", Duration::from_secs(300), greedy_ratio),
        ("5 continuous greedy pipeline >= 1-1/e-0.02", Duration::from_secs(600), continuous_pipeline),
        ("6 set to sequence", Duration::from_secs(60), prop_set_to_sequence),
        ("7 MDR/SMDR", Duration::from_secs(120), mdr_smdr),
        ("8 MDR implies ordered submodular", Duration::from_secs(120), mdr_implies_ordered),
        ("9 equivalence oracles", Duration::from_secs(30), equivalences),
    ];
    let mut failed = 0;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let v = check();
        let elapsed = start.elapsed();
        let pass = v.pass && elapsed < budget;
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {} [{:.2?} of {:?}]",
            if pass { "PASS" } else { "FAIL" },
            v.detail,
            elapsed,
            budget
        );
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
