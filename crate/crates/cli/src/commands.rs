use std::fs;
use std::path::Path;
use std::time::Instant;

use listcal::algorithm::{run, Solver};
use listcal::greedy::best_length_solve;
use listcal::matroid::ContinuousParams;
use listcal::measure::{Overlap, OverlapMeasure};
use listcal::objective::seq_objective;
use listcal::oracle::{
    check_mdr, check_ordered_submodular_measure, check_overlap_axioms, check_set_to_sequence, ratio_report, CheckReport,
    RatioReport,
};
use listcal::repro::{repro_appendix_b, repro_appendix_c, GeneratorParams, KlMmrPseudo};
use listcal::{parse_instance, Instance, Mode};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Cli, Command, ContinuousArgs, RatioArgs, ReproArgs, ReproTarget, ShapeArgs, SolveArgs, Suite, VerifyArgs};

type CmdResult = Result<u8, String>;

const CHECK_FAILED: u8 = 2;

pub fn dispatch(cli: Cli) -> CmdResult {
    let out = Output { machine: cli.machine };
    match cli.command {
        Command::Solve(args) => solve(&out, args),
        Command::Verify(args) => verify(&out, args),
        Command::Repro(args) => repro(&out, args),
        Command::Bench(args) => ratios(&out, &args, "hellinger"),
    }
}

struct Output {
    machine: bool,
}

impl Output {
    fn record(&self, kind: &str, body: impl Serialize) {
        let mut value = serde_json::to_value(body).expect("reports serialize");
        if let Value::Object(map) = &mut value {
            map.insert("record".into(), Value::from(kind));
        }
        println!("{}", serde_json::to_string(&value).expect("reports serialize"));
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn params(c: &ContinuousArgs) -> ContinuousParams {
    ContinuousParams { steps: c.steps, samples: c.samples, seed: c.seed }
}

fn load(path: &Path) -> Result<Instance, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_instance(&text).map_err(|e| format!("{}: {e}", path.display()))
}

#[derive(Serialize)]
struct SolveReport {
    algorithm: String,
    measure: String,
    seed: u64,
    k: usize,
    length: usize,
    sequence: Vec<String>,
    value: f64,
    gains: Vec<f64>,
}

fn prefix_gains(measure: &OverlapMeasure, seq: &[usize], inst: &Instance) -> Result<Vec<f64>, String> {
    let mut prev = seq_objective(measure, &[], inst).map_err(err)?;
    let mut gains = Vec::with_capacity(seq.len());
    for j in 1..=seq.len() {
        let v = seq_objective(measure, &seq[..j], inst).map_err(err)?;
        gains.push(v - prev);
        prev = v;
    }
    Ok(gains)
}

fn solve(out: &Output, args: SolveArgs) -> CmdResult {
    let started = Instant::now();
    let mut inst = load(&args.file)?;
    if let Some(k) = args.k {
        inst = inst.with_weights(inst.weights().prefix(k).map_err(err)?);
    }
    let measure = OverlapMeasure::parse(&args.measure).map_err(err)?;
    let solver = Solver::from_name(&args.algorithm, measure, args.allow_repeats, params(&args.continuous)).map_err(err)?;
    let measure = solver.measure();
    let (run_inst, sequence, value) = if args.best_length {
        let choice = best_length_solve(&inst, &solver).map_err(err)?;
        let sub = inst.with_weights(inst.weights().prefix(choice.len).map_err(err)?);
        (sub, choice.sequence, choice.value)
    } else {
        let outcome = run(&inst, &solver).map_err(err)?;
        (inst.clone(), outcome.sequence, outcome.value)
    };
    let report = SolveReport {
        algorithm: solver.name().to_string(),
        measure: measure.to_string(),
        seed: args.continuous.seed,
        k: inst.k(),
        length: sequence.len(),
        sequence: run_inst.default_universe().labels(&sequence),
        value,
        gains: prefix_gains(&measure, &sequence, &run_inst)?,
    };
    if out.machine {
        out.record("solve", &report);
    } else {
        println!("algorithm  {}", report.algorithm);
        println!("measure    {}", report.measure);
        println!("seed       {}", report.seed);
        println!("sequence   {}", report.sequence.join(" "));
        println!("value      {:.9}", report.value);
        let gains: Vec<String> = report.gains.iter().map(|g| format!("{g:.6}")).collect();
        println!("gains      {}", gains.join(" "));
        println!("elapsed    {:.3?}", started.elapsed());
    }
    Ok(0)
}

enum MeasureArg {
    Real(OverlapMeasure),
    KlMmr,
}

impl MeasureArg {
    fn parse(s: &str) -> Result<Self, String> {
        if s == "kl-mmr-demo" {
            Ok(MeasureArg::KlMmr)
        } else {
            OverlapMeasure::parse(s).map(MeasureArg::Real).map_err(err)
        }
    }

    fn overlap(&self) -> &dyn Overlap {
        match self {
            MeasureArg::Real(m) => m,
            MeasureArg::KlMmr => &KlMmrPseudo,
        }
    }

    /// Whether the measure is expected to be coordinatewise nondecreasing.
    fn smdr_expected(&self) -> bool {
        match self {
            MeasureArg::Real(m) => m.is_coordinatewise_monotone(),
            MeasureArg::KlMmr => true,
        }
    }
}

fn shape(s: &ShapeArgs, mode: Mode, genres: usize, items: usize, k: usize) -> GeneratorParams {
    let (g, i, k) = (s.max_genres.unwrap_or(genres), s.max_items.unwrap_or(items), s.max_k.unwrap_or(k));
    match mode {
        Mode::Discrete => GeneratorParams::discrete(g, k),
        Mode::Distributional => GeneratorParams::distributional(g, i, k),
    }
}

fn write_counterexample(path: Option<&Path>, report: &CheckReport) -> Result<(), String> {
    let (Some(path), Some(cx)) = (path, &report.counterexample) else {
        return Ok(());
    };
    let text = match &cx.instance {
        Some(inst) => serde_json::to_string_pretty(inst),
        None => serde_json::to_string_pretty(cx),
    }
    .map_err(err)?;
    fs::write(path, text + "\n").map_err(|e| format!("{}: {e}", path.display()))
}

fn print_check(out: &Output, report: &CheckReport) {
    if out.machine {
        out.record("check", report);
        return;
    }
    let status = if report.passed() { "PASS" } else { "FAIL" };
    println!("{status} {:<40} {} trials, {} violations", report.name, report.trials, report.violations);
    if let Some(cx) = &report.counterexample {
        println!("     {}: lhs {:.6e} rhs {:.6e}", cx.property, cx.lhs, cx.rhs);
        println!("     {}", cx.detail);
    }
}

fn verify(out: &Output, args: VerifyArgs) -> CmdResult {
    if args.suite == Suite::Ratios {
        let measure = args.measure.first().map_or("hellinger", String::as_str);
        return ratios(out, &args.ratios, measure);
    }
    let names = if args.measure.is_empty() { vec!["hellinger".to_string()] } else { args.measure.clone() };
    let measures = names.iter().map(|n| MeasureArg::parse(n)).collect::<Result<Vec<_>, _>>()?;
    let seed = args.ratios.continuous.seed;
    let cx_path = args.ratios.counterexample_out.as_deref();
    let sh = shape(&args.ratios.shape, Mode::Distributional, 5, 5, 4);
    let mut failed = false;
    let mut first_failure: Option<CheckReport> = None;
    let mut note = |r: &CheckReport, required: bool| {
        print_check(out, r);
        if required && !r.passed() {
            failed = true;
            first_failure.get_or_insert_with(|| r.clone());
        }
    };
    for m in &measures {
        match args.suite {
            Suite::Axioms => note(&check_overlap_axioms(m.overlap(), args.trials, seed), true),
            Suite::Mdr => {
                let r = check_mdr(m.overlap(), &sh, args.trials, seed).map_err(err)?;
                note(&r.monotone, true);
                note(&r.submodular, true);
                note(&r.coordinatewise, m.smdr_expected());
            }
            Suite::OrderedSubmodular => {
                note(&check_ordered_submodular_measure(m.overlap(), &sh, args.trials, seed).map_err(err)?, true)
            }
            Suite::Prop41 => match m {
                MeasureArg::Real(g) => note(&check_set_to_sequence(g, &sh, args.trials, seed).map_err(err)?, true),
                MeasureArg::KlMmr => return Err("prop41 needs a real overlap measure".into()),
            },
            Suite::Ratios => unreachable!("handled above"),
        }
    }
    if let Some(r) = &first_failure {
        write_counterexample(cx_path, r)?;
    }
    Ok(if failed { CHECK_FAILED } else { 0 })
}

fn ratio_bound(solver: &Solver) -> (f64, bool) {
    match solver {
        Solver::DiscreteGreedy => (2.0 / 3.0, false),
        Solver::Greedy { .. } => (0.5, false),
        Solver::Distributional { .. } | Solver::WithRepeats { .. } => (1.0 - (-1.0f64).exp() - 0.02, true),
        Solver::Exhaustive { .. } => (1.0, false),
    }
}

fn ratios(out: &Output, args: &RatioArgs, measure: &str) -> CmdResult {
    let measure = OverlapMeasure::parse(measure).map_err(err)?;
    let solver = Solver::from_name(&args.algorithm, measure, false, params(&args.continuous)).map_err(err)?;
    let params = match solver {
        Solver::DiscreteGreedy => shape(&args.shape, Mode::Discrete, 5, 0, 8),
        Solver::Greedy { .. } => shape(&args.shape, Mode::Distributional, 5, 6, 5),
        _ => shape(&args.shape, Mode::Distributional, 4, 6, 4),
    };
    let report = ratio_report(&solver, &params, args.n, args.continuous.seed, args.seeds).map_err(err)?;
    let (bound, on_median) = ratio_bound(&solver);
    let observed = if on_median { report.median_ratio } else { report.min_ratio };
    let pass = observed >= bound - 1e-9;
    if let (Some(path), Some(worst)) = (&args.counterexample_out, &report.worst_instance) {
        let text = serde_json::to_string_pretty(&worst.instance).map_err(err)?;
        fs::write(path, text + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
    }
    if out.machine {
        out.record("ratio", json!({ "report": report, "bound": bound, "on_median": on_median, "pass": pass, "seed": args.continuous.seed }));
    } else {
        print_ratio(&report, bound, on_median, pass, args.continuous.seed);
    }
    Ok(if pass { 0 } else { CHECK_FAILED })
}

fn print_ratio(r: &RatioReport, bound: f64, on_median: bool, pass: bool, seed: u64) {
    println!("{} / {} over {} instances (seed {seed})", r.algorithm, r.measure, r.instances);
    println!("  min     {:.6}", r.min_ratio);
    println!("  median  {:.6}", r.median_ratio);
    println!("  mean    {:.6}", r.mean_ratio);
    let which = if on_median { "median" } else { "min" };
    println!("  {} {which} >= {bound:.6}", if pass { "PASS" } else { "FAIL" });
    if let Some(w) = &r.worst_instance {
        println!(
            "  worst   #{}: {} ({:.6}) vs optimum {} ({:.6})",
            w.sample.index,
            w.sample.sequence.join(" "),
            w.sample.value,
            w.sample.optimal_sequence.join(" "),
            w.sample.optimum
        );
    }
}

fn repro(out: &Output, args: ReproArgs) -> CmdResult {
    match args.target {
        ReproTarget::AppendixB => {
            let t = repro_appendix_b();
            if out.machine {
                for row in &t.rows {
                    out.record("row", row);
                }
                out.record(
                    "summary",
                    json!({
                        "values_match": t.values_match(),
                        "divergence_everywhere": t.divergence_everywhere(),
                        "sign_flip_1.1_100": t.sign_flip(1.1, 100.0),
                        "sign_flip_2_5": t.sign_flip(2.0, 5.0),
                        "pass": t.passed(),
                    }),
                );
            } else {
                println!("{:>6} {:>12} {:>12} {:>12} {:>12} {:>6} {:>8} {:>7}", "w1", "ALG", "published", "OPT", "published", "match", "greedy", "optimum");
                for r in &t.rows {
                    println!(
                        "{:>6} {:>12.6} {:>12} {:>12.6} {:>12} {:>6} {:>8} {:>7}",
                        r.w1,
                        r.alg,
                        r.published_alg.map_or("-".into(), |v| v.to_string()),
                        r.opt,
                        r.published_opt.map_or("-".into(), |v| v.to_string()),
                        if r.values_match { "ok" } else { "FAIL" },
                        format!("i{}", r.greedy_first + 1),
                        format!("i{}", r.optimum_first + 1),
                    );
                }
                println!("sign flip of ALG between w1=1.1 and w1=100: {}", t.sign_flip(1.1, 100.0));
                println!("sign flip of ALG between w1=2 and w1=5: {}", t.sign_flip(2.0, 5.0));
                println!("greedy starts with i1 and optimum with i2 in every row: {}", t.divergence_everywhere());
                println!("{}", if t.passed() { "PASS" } else { "FAIL" });
            }
            Ok(if t.passed() { 0 } else { CHECK_FAILED })
        }
        ReproTarget::AppendixC => {
            let t = repro_appendix_c();
            if out.machine {
                for row in &t.rows {
                    out.record("row", row);
                }
                out.record("summary", json!({ "reversal_holds": t.reversal_holds, "pass": t.passed() }));
            } else {
                println!("{:<10} {:>16} {:>9} {:>9} {:>5}", "list", "q", "value", "published", "");
                for r in &t.rows {
                    let q: Vec<String> = r.q.iter().map(|v| format!("{v:.2}")).collect();
                    println!(
                        "{:<10} {:>16} {:>9.6} {:>9} {:>5}",
                        r.list.join(" "),
                        format!("({})", q.join(", ")),
                        r.value,
                        r.published,
                        if r.ok { "ok" } else { "FAIL" }
                    );
                }
                println!("order reversal (i1 before i2 better after i3, worse after i4): {}", t.reversal_holds);
                println!("{}", if t.passed() { "PASS" } else { "FAIL" });
            }
            Ok(if t.passed() { 0 } else { CHECK_FAILED })
        }
    }
}
