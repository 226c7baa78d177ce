mod common;

use crs_core::catalog::Catalog;
use crs_core::dialog::{Engine, Mode, ResponseKind};
use crs_core::simulator::{aggregate, builtin_scenarios, run_policy, simulate, EngineDriver, Scenario, SimError};

fn scenario(tag: &str) -> Scenario {
    builtin_scenarios().into_iter().find(|s| s.tag == tag).unwrap()
}

#[test]
fn dv_guided_critiques_vegetarian_and_accepts() {
    let engine = common::engine();
    let t = simulate(&engine, &scenario("DV"), Mode::Guided, 7).unwrap();
    let critiques: Vec<&str> = t.critiques().collect();
    assert_eq!(critiques, ["I didn't see a lot of vegetarian options"]);
    let rec_step = t.steps.iter().position(|s| s.state_before == "recommended").unwrap();
    assert_eq!(t.steps[rec_step].utterance, "yes");
    assert_eq!(t.booked.as_deref(), Some("r06"));
    assert_eq!(t.command_count, 6);
}

#[test]
fn lt_top_option_books_quickly_in_both_modes() {
    let engine = common::engine();
    for mode in [Mode::Guided, Mode::Baseline] {
        let t = simulate(&engine, &scenario("LT"), mode, 1).unwrap();
        assert!(t.command_count <= 4, "{mode:?}: {}", t.command_count);
        assert_eq!(t.booked.as_deref(), Some("r01"));
    }
}

#[test]
fn traces_are_deterministic() {
    let engine = common::engine();
    for s in builtin_scenarios() {
        for mode in [Mode::Guided, Mode::Baseline] {
            assert_eq!(simulate(&engine, &s, mode, 99).unwrap(), simulate(&engine, &s, mode, 99).unwrap());
        }
    }
}

#[test]
fn baseline_traces_have_no_recommendations() {
    let engine = common::engine();
    for s in builtin_scenarios() {
        for seed in 0..10 {
            let t = simulate(&engine, &s, Mode::Baseline, seed).unwrap();
            assert_eq!(t.recommendation_count(), 0);
            assert!(t.steps.iter().all(|st| st.responses.iter().all(|r| r.kind != ResponseKind::Elicitation)));
        }
    }
}

#[test]
fn every_guided_dislike_gets_one_critique() {
    let engine = common::engine();
    for s in builtin_scenarios() {
        for seed in 0..10 {
            let t = simulate(&engine, &s, Mode::Guided, seed).unwrap();
            for (i, st) in t.steps.iter().enumerate() {
                if st.state_after == "awaiting_critique" {
                    let next = &t.steps[i + 1];
                    assert_eq!(next.state_before, "awaiting_critique");
                    assert_ne!(next.state_after, "awaiting_critique");
                }
            }
        }
    }
}

#[test]
fn median_direction_and_difficulty_order() {
    let engine = common::engine();
    let mut traces = Vec::new();
    for s in builtin_scenarios() {
        for mode in [Mode::Guided, Mode::Baseline] {
            for i in 0..30 {
                traces.push(simulate(&engine, &s, mode, 7 + i).unwrap());
            }
        }
    }
    let cells = aggregate(&traces);
    let median = |tag: &str, mode: Mode| {
        cells.iter().find(|c| c.scenario == tag && c.mode == mode).unwrap().commands.median
    };
    assert!(median("DV", Mode::Guided) <= median("DV", Mode::Baseline));
    let order: Vec<f64> = ["LT", "LK", "DR", "DV"].iter().map(|t| median(t, Mode::Baseline)).collect();
    assert!(order.windows(2).all(|w| w[0] <= w[1]), "{order:?}");
}

#[test]
fn unannotated_catalog_is_refused() {
    let mut doc: serde_json::Value = serde_json::from_str(crs_core::assets::FIXTURE_CATALOG_JSON).unwrap();
    for r in doc["restaurants"].as_array_mut().unwrap() {
        r.as_object_mut().unwrap().remove("attributes");
    }
    let catalog: Catalog = serde_json::from_value(doc).unwrap();
    let engine = Engine::builtin(catalog.clone()).unwrap();
    let mut driver = EngineDriver::new(&engine, "s", Mode::Guided, 1);
    let err = run_policy(&scenario("DV"), Mode::Guided, 1, &catalog, &mut driver).unwrap_err();
    assert!(matches!(err, SimError::MissingAttributes { .. }));
    assert_eq!(driver.session().command_count, 0);
}
