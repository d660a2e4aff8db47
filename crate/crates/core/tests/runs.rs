//! End-to-end optimizer runs: convergence on analytic fronts, budget
//! accounting, and cross-algorithm trace compatibility.

use moea_core::attention::{run_attention_moea, AttentionParams};
use moea_core::lmocso::run_lmocso;
use moea_core::metrics::{hv_2d, igd};
use moea_core::problems::{
    mcs_reference_front, zdt_front, McsConfig, McsInstance, Problem, ZdtProblem, ZdtVariant,
};
use moea_core::trace::TraceRecorder;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn zdt1_recorder(trace_every: usize) -> TraceRecorder {
    TraceRecorder::new(zdt_front(ZdtVariant::Zdt1, 500).unwrap(), trace_every, false).unwrap()
}

#[test]
fn attention_converges_on_zdt1() {
    let problem = ZdtProblem::new(ZdtVariant::Zdt1, 30).unwrap();
    let params = AttentionParams::new(5, 10, 100, 25_000);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (_, trace) = run_attention_moea(&problem, &params, zdt1_recorder(50), &mut rng).unwrap();
    let final_igd = trace.rows.last().unwrap().igd;
    assert!(final_igd < 0.05, "final IGD {final_igd}");
}

#[test]
fn lmocso_converges_on_zdt1() {
    let problem = ZdtProblem::new(ZdtVariant::Zdt1, 30).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (_, trace) = run_lmocso(&problem, 100, 25_000, zdt1_recorder(50), &mut rng).unwrap();
    let final_igd = trace.rows.last().unwrap().igd;
    assert!(final_igd < 0.1, "final IGD {final_igd}");
}

#[test]
fn attention_converges_on_zdt2() {
    let problem = ZdtProblem::new(ZdtVariant::Zdt2, 30).unwrap();
    let reference = zdt_front(ZdtVariant::Zdt2, 500).unwrap();
    let recorder = TraceRecorder::new(reference, 50, false).unwrap();
    let params = AttentionParams::new(5, 10, 100, 25_000);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (_, trace) = run_attention_moea(&problem, &params, recorder, &mut rng).unwrap();
    let final_igd = trace.rows.last().unwrap().igd;
    assert!(final_igd < 0.05, "final IGD {final_igd}");
}

#[test]
fn both_optimizers_respect_budget_window_on_mcs() {
    let config = McsConfig { n: 40, ..McsConfig::default() };
    let inst = McsInstance::generate(config, &mut ChaCha8Rng::seed_from_u64(100)).unwrap();
    let reference = mcs_reference_front(&inst, 60).unwrap();

    for budget in [97u64, 160, 333] {
        let d = 16;
        let recorder = TraceRecorder::new(reference.clone(), 7, false).unwrap();
        let params = AttentionParams::new(4, 4, d, budget);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (_, trace) = run_attention_moea(&inst, &params, recorder, &mut rng).unwrap();
        let fe = trace.rows.last().unwrap().fe;
        assert!(
            fe > budget - d as u64 && fe <= budget,
            "attention fe {fe} outside window for budget {budget}"
        );

        let recorder = TraceRecorder::new(reference.clone(), 7, false).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (_, trace) = run_lmocso(&inst, d, budget, recorder, &mut rng).unwrap();
        let fe = trace.rows.last().unwrap().fe;
        assert!(
            fe > budget - d as u64 && fe <= budget,
            "lmocso fe {fe} outside window for budget {budget}"
        );
    }
}

#[test]
fn optimizer_never_beats_scalarization_front() {
    // No optimizer-produced point may strictly dominate a point of the
    // weighted-sum reference front (each reference point is optimal for its
    // own scalarization).
    let config = McsConfig { n: 25, ..McsConfig::default() };
    let inst = McsInstance::generate(config, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
    let reference = mcs_reference_front(&inst, 120).unwrap();

    let recorder = TraceRecorder::new(reference.clone(), 10, false).unwrap();
    let params = AttentionParams::new(5, 6, 40, 4_000);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (front, _) = run_attention_moea(&inst, &params, recorder, &mut rng).unwrap();

    for member in &front {
        for ref_point in &reference {
            assert!(
                !moea_core::evo::dominates(member.objectives(), ref_point),
                "{:?} dominates reference {:?}",
                member.objectives(),
                ref_point
            );
        }
    }
}

#[test]
fn traces_share_schema_for_head_to_head_plots() {
    let problem = ZdtProblem::new(ZdtVariant::Zdt1, 12).unwrap();
    let params = AttentionParams::new(3, 4, 10, 200);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (_, ta) = run_attention_moea(&problem, &params, zdt1_recorder(5), &mut rng).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (_, tb) = run_lmocso(&problem, 10, 200, zdt1_recorder(5), &mut rng).unwrap();

    // Same row structure: generation 0 first, strictly increasing fe, final
    // row at the budget.
    for trace in [&ta, &tb] {
        assert_eq!(trace.rows[0].generation, 0);
        assert_eq!(trace.rows[0].fe, 10);
        assert_eq!(trace.rows.last().unwrap().fe, 200);
        for pair in trace.rows.windows(2) {
            assert!(pair[1].fe > pair[0].fe);
            assert!(pair[1].generation > pair[0].generation);
        }
    }
}

#[test]
fn indicators_in_trace_match_direct_computation() {
    let problem = ZdtProblem::new(ZdtVariant::Zdt1, 12).unwrap();
    let reference = zdt_front(ZdtVariant::Zdt1, 500).unwrap();
    let recorder = TraceRecorder::new(reference.clone(), 5, false).unwrap();
    let ctx = recorder.context().clone();
    let params = AttentionParams::new(3, 4, 10, 150);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (front, trace) = run_attention_moea(&problem, &params, recorder, &mut rng).unwrap();

    let objs: Vec<Vec<f64>> = front.iter().map(|m| m.objectives().to_vec()).collect();
    let last = trace.rows.last().unwrap();
    assert_eq!(last.hv, hv_2d(&objs, &ctx).unwrap());
    assert_eq!(last.igd, igd(&objs, &reference, &ctx).unwrap());
}
