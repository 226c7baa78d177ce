//! Scripted users for the four search scenarios and the command-count metric.
//!
//! The critic policy opens options in list order, inspects the scenario's
//! view and books the first option whose utility clears the scenario bar.
//! Otherwise it dislikes the option (guided mode) and answers the question
//! with the critique for the worst-violated attribute, or goes back to the
//! list (baseline mode). When every restaurant has been judged it books the
//! best one seen.

mod scenario;
mod stats;

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use scenario::{builtin_scenarios, parse_scenarios, Attribute, Scenario};
pub use stats::{aggregate, summarize, CellStats, Stats};

use crate::catalog::{Catalog, View};
use crate::dialog::{Engine, Event, Mode, Response, ResponseKind, Session};

/// Commands after which the policy books whatever is in focus.
pub const COMMAND_CAP: u64 = 100;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("restaurant `{restaurant_id}` has no attribute annotations; the simulator needs an annotated catalog")]
    MissingAttributes { restaurant_id: String },
    #[error("scenario `{0}` has no weights")]
    NoWeights(String),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("driver failed: {0}")]
    Driver(String),
}

/// What the policy can see of the session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    pub state: String,
    pub focus: Option<String>,
    pub options: Vec<String>,
}

/// A session the policy talks to, in-process or remote.
pub trait PolicyDriver {
    fn observe(&mut self) -> Result<Observation, SimError>;
    fn send(&mut self, text: &str) -> Result<Vec<Response>, SimError>;
}

/// Drives an [`Engine`] session directly. Timestamps advance by one
/// second per command from zero.
pub struct EngineDriver<'a> {
    engine: &'a Engine,
    session: Session,
    clock: u64,
}

impl<'a> EngineDriver<'a> {
    pub fn new(engine: &'a Engine, id: &str, mode: Mode, seed: u64) -> Self {
        let session = engine.start_session(id, mode, seed, 0);
        Self {
            engine,
            session,
            clock: 0,
        }
    }

    pub fn session(&self) -> &Session {
        &self.session
    }

    pub fn into_session(self) -> Session {
        self.session
    }
}

impl PolicyDriver for EngineDriver<'_> {
    fn observe(&mut self) -> Result<Observation, SimError> {
        Ok(Observation {
            state: self.session.state.tag().to_string(),
            focus: self.session.state.focus().map(String::from),
            options: self.session.options.clone(),
        })
    }

    fn send(&mut self, text: &str) -> Result<Vec<Response>, SimError> {
        self.clock += 1000;
        self.engine
            .step(&mut self.session, text, self.clock)
            .map_err(|e| SimError::Driver(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub utterance: String,
    pub state_before: String,
    pub state_after: String,
    pub responses: Vec<Response>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyTrace {
    pub scenario: String,
    pub mode: Mode,
    pub seed: u64,
    pub command_count: u64,
    pub booked: Option<String>,
    pub best_utility: f64,
    pub steps: Vec<TraceStep>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub events: Vec<Event>,
}

impl PolicyTrace {
    pub fn recommendation_count(&self) -> usize {
        self.steps
            .iter()
            .flat_map(|s| &s.responses)
            .filter(|r| r.kind == ResponseKind::Recommendation)
            .count()
    }

    pub fn critiques(&self) -> impl Iterator<Item = &str> {
        self.steps
            .iter()
            .filter(|s| s.state_before == "awaiting_critique")
            .map(|s| s.utterance.as_str())
    }
}

fn view_command(view: View) -> Option<String> {
    match view {
        View::Overview => None,
        other => Some(format!("show me the {}", other.tag().replace('_', " "))),
    }
}

struct Critic<'a> {
    scenario: &'a Scenario,
    catalog: &'a Catalog,
    max_distance_m: f64,
    viewed: BTreeSet<String>,
    judged: BTreeSet<String>,
    best: Option<(String, f64)>,
    settling: bool,
    mode: Mode,
}

impl Critic<'_> {
    fn utility(&self, id: &str) -> Result<f64, SimError> {
        match self.catalog.get(id) {
            Some(r) => self.scenario.utility(r, self.max_distance_m),
            None => Err(SimError::Driver(format!("unknown restaurant `{id}`"))),
        }
    }

    fn best_utility(&self) -> f64 {
        self.best.as_ref().map_or(f64::NEG_INFINITY, |(_, u)| *u)
    }

    fn judge(&mut self, id: &str) -> Result<f64, SimError> {
        let u = self.utility(id)?;
        self.judged.insert(id.to_string());
        if u > self.best_utility() {
            self.best = Some((id.to_string(), u));
        }
        if self.judged.len() >= self.catalog.len() {
            self.settling = true;
        }
        Ok(u)
    }

    fn best_name(&self) -> String {
        self.best
            .as_ref()
            .and_then(|(id, _)| self.catalog.get(id))
            .map_or_else(|| "Book it".to_string(), |r| r.name.clone())
    }

    fn is_best(&self, id: Option<&str>) -> bool {
        matches!((&self.best, id), (Some((b, _)), Some(f)) if b == f)
    }

    fn decide(&mut self, obs: &Observation) -> Result<String, SimError> {
        let focus = obs.focus.as_deref();
        match obs.state.as_str() {
            "awaiting_critique" => {
                let id = focus.unwrap_or_default();
                let r = self
                    .catalog
                    .get(id)
                    .ok_or_else(|| SimError::Driver(format!("unknown restaurant `{id}`")))?;
                let worst = self.scenario.worst_violated(r, self.max_distance_m)?;
                Ok(self.scenario.critique_for(worst).to_string())
            }
            "recommended" => {
                let id = focus.unwrap_or_default().to_string();
                let prior = self.best_utility();
                let u = self.judge(&id)?;
                Ok(if u >= prior { "yes" } else { "no" }.to_string())
            }
            "closing_sale" => {
                let id = focus.unwrap_or_default();
                let clears = self.utility(id)? >= self.scenario.bar;
                Ok(if clears || (self.settling && self.is_best(focus)) { "yes" } else { "no" }.to_string())
            }
            "detail" => {
                let id = focus.unwrap_or_default().to_string();
                if self.settling {
                    return Ok(if self.is_best(focus) { "Book it".into() } else { self.best_name() });
                }
                if !self.viewed.contains(&id) {
                    self.viewed.insert(id.clone());
                    if let Some(cmd) = view_command(self.scenario.view) {
                        return Ok(cmd);
                    }
                }
                let u = self.judge(&id)?;
                if u >= self.scenario.bar {
                    return Ok("Book it".into());
                }
                if self.settling {
                    return Ok(if self.is_best(focus) { "Book it".into() } else { self.best_name() });
                }
                Ok(match self.mode {
                    Mode::Guided => "I don't like it",
                    Mode::Baseline => "go back",
                }
                .to_string())
            }
            _ => {
                if self.settling {
                    return Ok(self.best_name());
                }
                match obs.options.iter().position(|id| !self.judged.contains(id)) {
                    Some(i) => Ok(format!("option {}", i + 1)),
                    None => Ok("show me other options".into()),
                }
            }
        }
    }
}

/// Run the critic policy for one journey.
pub fn run_policy<D: PolicyDriver>(
    scenario: &Scenario,
    mode: Mode,
    seed: u64,
    catalog: &Catalog,
    driver: &mut D,
) -> Result<PolicyTrace, SimError> {
    let max_distance_m = catalog.max_distance_m();
    for r in catalog.restaurants() {
        scenario.utility(r, max_distance_m)?;
    }
    let mut critic = Critic {
        scenario,
        catalog,
        max_distance_m,
        viewed: BTreeSet::new(),
        judged: BTreeSet::new(),
        best: None,
        settling: false,
        mode,
    };
    let mut steps = Vec::new();
    let mut commands = 0u64;
    let booked = loop {
        let obs = driver.observe()?;
        if obs.state == "booked" {
            break obs.focus;
        }
        let text = if commands >= COMMAND_CAP {
            "Book it".to_string()
        } else {
            critic.decide(&obs)?
        };
        let responses = driver.send(&text)?;
        commands += 1;
        let after = driver.observe()?;
        steps.push(TraceStep {
            utterance: text,
            state_before: obs.state,
            state_after: after.state,
            responses,
        });
    };
    Ok(PolicyTrace {
        scenario: scenario.tag.clone(),
        mode,
        seed,
        command_count: commands,
        booked,
        best_utility: critic.best.map_or(0.0, |(_, u)| u),
        steps,
        events: Vec::new(),
    })
}

/// [`run_policy`] against an in-process session; the trace carries the
/// session's event log.
pub fn simulate(engine: &Engine, scenario: &Scenario, mode: Mode, seed: u64) -> Result<PolicyTrace, SimError> {
    let id = format!("sim-{}-{}-{seed}", scenario.tag, mode.tag());
    let mut driver = EngineDriver::new(engine, &id, mode, seed);
    let mut trace = run_policy(scenario, mode, seed, engine.catalog(), &mut driver)?;
    trace.events = driver.into_session().event_log;
    Ok(trace)
}
