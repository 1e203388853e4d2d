use listcal::instance::two_genre_example;
use listcal::matroid::{solve_distributional, solve_with_repeats};
use listcal::objective::{sequence_from_ids, seq_objective};
use listcal::oracle::exhaustive_opt;
use listcal::repro::{generate_instances, GeneratorParams};
use listcal::{best_length_solve, run, ContinuousParams, Error, OverlapMeasure, Solver};

#[test]
fn every_solver_reports_a_consistent_value() {
    let inst = two_genre_example();
    let g = OverlapMeasure::HellingerSquared;
    let params = ContinuousParams::default();
    for solver in [
        Solver::Greedy { measure: g.clone(), allow_repeats: false },
        Solver::Greedy { measure: g.clone(), allow_repeats: true },
        Solver::Distributional { measure: g.clone(), params },
        Solver::WithRepeats { measure: g.clone(), params },
        Solver::Exhaustive { measure: g.clone(), allow_repeats: false },
    ] {
        let out = run(&inst, &solver).unwrap();
        assert_eq!(out.sequence.len(), inst.k(), "{}", solver.name());
        assert!((seq_objective(&g, &out.sequence, &inst).unwrap() - out.value).abs() < 1e-12);
        assert_eq!(out.gains.len(), inst.k());
    }
}

#[test]
fn published_best_listed_ordering() {
    let inst = two_genre_example();
    let seq = sequence_from_ids(&["i4", "i2", "i1"], &inst).unwrap();
    let v = seq_objective(&OverlapMeasure::HellingerSquared, &seq, &inst).unwrap();
    assert!((v - 0.983).abs() < 1e-3);
}

#[test]
fn same_seed_same_answer() {
    let inst = two_genre_example();
    let g = OverlapMeasure::parse("concave:log1p").unwrap();
    let params = ContinuousParams { seed: 5, ..ContinuousParams::default() };
    assert_eq!(solve_distributional(&inst, &g, params).unwrap(), solve_distributional(&inst, &g, params).unwrap());
    assert_eq!(solve_with_repeats(&inst, &g, params).unwrap(), solve_with_repeats(&inst, &g, params).unwrap());
}

#[test]
fn with_repeats_is_near_the_repeat_optimum() {
    let g = OverlapMeasure::HellingerSquared;
    let params = ContinuousParams { steps: 50, samples: 100, seed: 1 };
    for inst in generate_instances(&GeneratorParams::distributional(3, 3, 3), 8, 10).unwrap() {
        let got = solve_with_repeats(&inst, &g, params).unwrap().value;
        let (_, opt) = exhaustive_opt(&inst, &g, true).unwrap();
        assert!(got >= (1.0 - (-1.0f64).exp()) * opt - 0.05, "{got} vs {opt}");
        assert!(got <= opt + 1e-12);
    }
}

#[test]
fn best_length_is_at_least_full_length() {
    let inst = two_genre_example();
    let solver = Solver::Exhaustive { measure: OverlapMeasure::HellingerSquared, allow_repeats: false };
    let full = run(&inst, &solver).unwrap().value;
    let best = best_length_solve(&inst, &solver).unwrap();
    assert!(best.value >= full - 1e-12);
    assert!(best.len >= 1 && best.len <= inst.k());
}

#[test]
fn too_few_items_for_a_repeat_free_list() {
    let inst = generate_instances(&GeneratorParams::discrete(1, 1), 0, 1).unwrap().remove(0);
    let inst = inst.with_weights(listcal::PositionWeights::uniform(3).unwrap());
    let g = OverlapMeasure::HellingerSquared;
    assert!(matches!(exhaustive_opt(&inst, &g, false), Err(Error::UniverseExhausted { .. })));
}
