mod common;

use crs_core::catalog::View;
use crs_core::dialog::{DialogError, DialogState, Mode, Payload, ReplayError, ResponseKind, ViewPayload};

const PAIRS: [(&str, &str); 5] = [
    ("That's not good for a date", "more romantic"),
    ("How come they only serve that much?", "larger portions"),
    ("I didn't see a lot of vegetarian options", "vegetarian"),
    ("It looks too greasy", "lighter food"),
    ("it doesn't seem like a good fit for a business meeting", "a more traditional meeting place"),
];

#[test]
fn start_shows_five_closest_in_both_modes() {
    let engine = common::engine();
    let g = engine.start_session("a", Mode::Guided, 42, 0);
    let b = engine.start_session("a", Mode::Baseline, 42, 0);
    assert_eq!(g.options, ["r01", "r02", "r03", "r04", "r05"]);
    assert_eq!(g.state, b.state);
    assert_eq!(g.command_count, 0);
    assert_eq!(g.last_responses, b.last_responses);
    assert_eq!(g.last_responses[0].kind, ResponseKind::Greeting);
    assert_eq!(g, engine.start_session("a", Mode::Guided, 42, 0));
}

#[test]
fn dislike_on_ambience_elicits() {
    let engine = common::engine();
    let mut s = engine.start_session("a", Mode::Guided, 1, 0);
    engine.step(&mut s, "option 2", 1).unwrap();
    engine.step(&mut s, "show me the ambience photos", 2).unwrap();
    let out = engine.step(&mut s, "I don't like it", 3).unwrap();
    assert_eq!(
        s.state,
        DialogState::AwaitingCritique { restaurant_id: "r02".into(), context_view: View::AmbiencePhotos }
    );
    assert_eq!(out[0].text, "What was it about the ambience photos that you didn't like?");
}

#[test]
fn greasy_critique_recommends() {
    let engine = common::engine();
    let mut s = engine.start_session("a", Mode::Guided, 1, 0);
    for t in ["option 1", "show me the food photos", "I don't like it"] {
        engine.step(&mut s, t, 1).unwrap();
    }
    let out = engine.step(&mut s, "It looks too greasy", 2).unwrap();
    assert_eq!(s.state.tag(), "recommended");
    assert!(out[0].text.starts_with("I hear you. You prefer lighter food."), "{}", out[0].text);
}

#[test]
fn reference_exchanges_surface_form() {
    let engine = common::engine();
    for (critique, aspect) in PAIRS {
        let mut s = engine.start_session("a", Mode::Guided, 3, 0);
        for t in ["option 3", "show me the menu", "I don't like it"] {
            engine.step(&mut s, t, 1).unwrap();
        }
        let out = engine.step(&mut s, critique, 2).unwrap();
        let expected = format!("I hear you. You prefer {aspect}.");
        assert!(out[0].text.starts_with(&expected), "{critique:?} -> {:?}", out[0].text);
        assert_eq!(s.preferences.last().unwrap().aspect(), aspect);
    }
}

#[test]
fn vegetarian_exchange_quotes_vegetables() {
    let engine = common::engine();
    let mut s = engine.start_session("a", Mode::Guided, 3, 0);
    for t in ["option 3", "show me the menu", "I don't like it"] {
        engine.step(&mut s, t, 1).unwrap();
    }
    engine.step(&mut s, "I didn't see a lot of vegetarian options", 2).unwrap();
    let DialogState::Recommended { recommendation } = &s.state else {
        panic!("expected a recommendation, got {:?}", s.state);
    };
    assert_ne!(recommendation.restaurant_id, "r03");
    assert_eq!(recommendation.restaurant_id, "r06");
    assert!(recommendation.argument.sentence.text.contains("vegetables"));
    assert_eq!(
        recommendation.explanation,
        "I hear you. You prefer vegetarian. How about Green Table? One reviewer said: \"Wonderful fresh vegetables.\""
    );
}

#[test]
fn baseline_dislike_returns_to_browsing() {
    let engine = common::engine();
    let mut s = engine.start_session("a", Mode::Baseline, 1, 0);
    engine.step(&mut s, "option 1", 1).unwrap();
    engine.step(&mut s, "show me the menu", 2).unwrap();
    let out = engine.step(&mut s, "I don't like it", 3).unwrap();
    assert_eq!(s.state.tag(), "browsing");
    assert!(out.iter().all(|r| r.kind != ResponseKind::Elicitation));
    let out = engine.step(&mut s, "I love it, this looks great", 4).unwrap();
    assert_eq!(out[0].kind, ResponseKind::Help);
}

#[test]
fn walking_away_after_a_view_elicits_once() {
    let engine = common::engine();
    let mut s = engine.start_session("a", Mode::Guided, 1, 0);
    engine.step(&mut s, "option 1", 1).unwrap();
    let out = engine.step(&mut s, "go back", 2).unwrap();
    assert_eq!(s.state.tag(), "browsing", "no view opened: plain back");
    assert_eq!(out.last().unwrap().kind, ResponseKind::Options);

    engine.step(&mut s, "option 1", 3).unwrap();
    engine.step(&mut s, "reviews", 4).unwrap();
    let out = engine.step(&mut s, "go back", 5).unwrap();
    assert_eq!(s.state.tag(), "awaiting_critique");
    assert_eq!(out[0].text, "What was it about the reviews that you didn't like?");
    engine.step(&mut s, "too far", 6).unwrap();
    assert_ne!(s.state.tag(), "awaiting_critique");

    engine.step(&mut s, "Loop Burger Shack", 7).unwrap();
    engine.step(&mut s, "reviews", 8).unwrap();
    engine.step(&mut s, "go back", 9).unwrap();
    assert_eq!(s.state.tag(), "browsing", "same pair never re-elicits");
}

#[test]
fn positive_feedback_closes_the_sale() {
    let engine = common::engine();
    let mut s = engine.start_session("a", Mode::Guided, 1, 0);
    engine.step(&mut s, "option 4", 1).unwrap();
    let out = engine.step(&mut s, "This looks great, I love it", 2).unwrap();
    assert_eq!(s.state, DialogState::ClosingSale { restaurant_id: "r04".into() });
    assert_eq!(out[0].text, "Would you like to book a table?");
    engine.step(&mut s, "no", 3).unwrap();
    assert_eq!(s.state.tag(), "detail");
    engine.step(&mut s, "yes", 4).unwrap();
    assert_ne!(s.state.tag(), "booked", "yes outside a question is not an answer");
    engine.step(&mut s, "Book it", 5).unwrap();
    assert_eq!(s.state, DialogState::Booked { restaurant_id: "r04".into() });
}

#[test]
fn accepting_a_recommendation_asks_to_book() {
    let engine = common::engine();
    let mut s = engine.start_session("a", Mode::Guided, 1, 0);
    for t in ["option 1", "show me the menu", "I don't like it", "I didn't see a lot of vegetarian options"] {
        engine.step(&mut s, t, 1).unwrap();
    }
    let out = engine.step(&mut s, "yes", 2).unwrap();
    assert_eq!(s.state, DialogState::ClosingSale { restaurant_id: "r06".into() });
    assert_eq!(out[0].kind, ResponseKind::CloseSale);
    engine.step(&mut s, "yes", 3).unwrap();
    assert_eq!(s.state, DialogState::Booked { restaurant_id: "r06".into() });
}

#[test]
fn rejecting_a_recommendation_excludes_it() {
    let engine = common::engine();
    let mut s = engine.start_session("a", Mode::Guided, 1, 0);
    for t in ["option 1", "show me the menu", "I don't like it", "I didn't see a lot of vegetarian options"] {
        engine.step(&mut s, t, 1).unwrap();
    }
    engine.step(&mut s, "no", 2).unwrap();
    assert_eq!(s.state.tag(), "browsing");
    assert!(s.rejected.contains("r06") && s.rejected.contains("r01"));
}

#[test]
fn exhausted_pool_apologizes() {
    let engine = common::engine();
    let mut s = engine.start_session("a", Mode::Guided, 1, 0);
    s.rejected = engine.catalog().restaurants().iter().map(|r| r.id.clone()).collect();
    for t in ["option 1", "show me the menu", "I don't like it"] {
        engine.step(&mut s, t, 1).unwrap();
    }
    let out = engine.step(&mut s, "It looks too greasy", 2).unwrap();
    assert_eq!(s.state.tag(), "browsing");
    assert_eq!(out[0].text, "I hear you. You prefer lighter food.");
    assert_eq!(out[1].kind, ResponseKind::Apology);
}

#[test]
fn book_it_and_terminal_contract() {
    let engine = common::engine();
    let mut s = engine.start_session("a", Mode::Baseline, 1, 0);
    engine.step(&mut s, "Book it", 1).unwrap();
    assert_eq!(s.state, DialogState::Booked { restaurant_id: "r01".into() });
    assert_eq!(engine.step(&mut s, "hello", 2), Err(DialogError::Terminal("a".into())));
    assert_eq!(s.command_count, 1);
}

#[test]
fn refresh_shows_other_restaurants() {
    let engine = common::engine();
    let mut s = engine.start_session("a", Mode::Baseline, 5, 0);
    let before = s.options.clone();
    engine.step(&mut s, "show me other options", 1).unwrap();
    assert_eq!(s.options.len(), 5);
    assert!(s.options.iter().all(|id| !before.contains(id)));
    let mut t = engine.start_session("a", Mode::Baseline, 5, 0);
    engine.step(&mut t, "show me other options", 1).unwrap();
    assert_eq!(s.options, t.options);
}

#[test]
fn view_projections() {
    let engine = common::engine();
    let mut s = engine.start_session("a", Mode::Guided, 1, 0);
    assert_eq!(engine.render_view(&s), Err(DialogError::NotInDetail));
    engine.step(&mut s, "option 1", 1).unwrap();
    let ViewPayload::Overview { summary } = engine.render_view(&s).unwrap() else { panic!() };
    assert_eq!((summary.price_tier, summary.distance_m), (1, 120.0));
    assert_eq!(summary.cuisines, ["burgers", "american"]);
    engine.step(&mut s, "show me the menu", 2).unwrap();
    let ViewPayload::Menu { items, .. } = engine.render_view(&s).unwrap() else { panic!() };
    let names: Vec<&str> = items.iter().map(|i| i.name.as_str()).collect();
    assert_eq!(names, ["Classic cheeseburger", "Loaded fries", "Chicken sandwich", "Chocolate shake"]);
    engine.step(&mut s, "reviews", 3).unwrap();
    let ViewPayload::Reviews { reviews, .. } = engine.render_view(&s).unwrap() else { panic!() };
    assert_eq!(reviews.first().unwrap().id, "r01-v6");
    assert_eq!(reviews.last().unwrap().id, "r01-v1");
    engine.step(&mut s, "show me the ambience photos", 4).unwrap();
    let ViewPayload::AmbiencePhotos { photos, .. } = engine.render_view(&s).unwrap() else { panic!() };
    assert!(photos.iter().all(|p| p.uri.contains("room")));
}

fn journey(engine: &crs_core::Engine) -> crs_core::Session {
    let mut s = engine.start_session("j", Mode::Guided, 11, 100);
    for (i, t) in ["option 2", "menu", "I don't like it", "There is nothing for the kids", "no", "option 3", "Book it"]
        .into_iter()
        .enumerate()
    {
        engine.step(&mut s, t, 200 + i as u64).unwrap();
    }
    s
}

#[test]
fn replay_reproduces_the_session() {
    let engine = common::engine();
    let s = journey(&engine);
    assert_eq!(engine.replay(&s.event_log).unwrap(), s);
}

#[test]
fn replay_errors() {
    let engine = common::engine();
    assert_eq!(engine.replay(&[]), Err(ReplayError::Empty));
    let s = journey(&engine);
    let fresh = engine.replay(&s.event_log[..1]).unwrap();
    let cut = s.event_log.len() - 1;
    assert_eq!(engine.replay(&s.event_log[..cut]).unwrap(), s);
    assert_eq!(fresh, engine.start_session("j", Mode::Guided, 11, 100));

    let mut tampered = s.event_log.clone();
    let at = tampered
        .iter()
        .position(|e| matches!(&e.payload, Payload::Response { kind: ResponseKind::Recommendation, .. }))
        .unwrap();
    if let Payload::Response { text, .. } = &mut tampered[at].payload {
        text.push('!');
    }
    assert_eq!(engine.replay(&tampered), Err(ReplayError::Divergence { sequence: at as u64 }));

    let mut headless = s.event_log.clone();
    headless.remove(0);
    assert_eq!(engine.replay(&headless), Err(ReplayError::MissingHeader));
}
