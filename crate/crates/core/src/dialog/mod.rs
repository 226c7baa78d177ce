//! The decision-journey state machine.
//!
//! Both modes share navigation (options, views, back, refresh, book it).
//! Guided mode additionally asks what the user disliked when they walk away
//! from a view, turns the answer into a preference, and recommends a
//! restaurant backed by a review sentence; positive feedback leads to a
//! booking question. Baseline mode only reacts to navigation.

mod engine;
mod templates;
mod view;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use engine::{Engine, EngineConfig, EngineError};
pub use templates::{fill, Templates, REQUIRED_KEYS};
pub use view::{OptionSummary, ViewPayload};

use crate::catalog::View;
use crate::nlu::Preference;
use crate::recommender::Recommendation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Guided,
    Baseline,
}

impl Mode {
    pub fn tag(self) -> &'static str {
        match self {
            Mode::Guided => "guided",
            Mode::Baseline => "baseline",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Mode> {
        match tag {
            "guided" => Some(Mode::Guided),
            "baseline" => Some(Mode::Baseline),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "state")]
pub enum DialogState {
    Browsing {
        options: Vec<String>,
    },
    Detail {
        restaurant_id: String,
        current_view: View,
        views_opened: BTreeSet<View>,
    },
    AwaitingCritique {
        restaurant_id: String,
        context_view: View,
    },
    Recommended {
        recommendation: Recommendation,
    },
    ClosingSale {
        restaurant_id: String,
    },
    Booked {
        restaurant_id: String,
    },
}

impl DialogState {
    pub fn tag(&self) -> &'static str {
        match self {
            DialogState::Browsing { .. } => "browsing",
            DialogState::Detail { .. } => "detail",
            DialogState::AwaitingCritique { .. } => "awaiting_critique",
            DialogState::Recommended { .. } => "recommended",
            DialogState::ClosingSale { .. } => "closing_sale",
            DialogState::Booked { .. } => "booked",
        }
    }

    /// The restaurant the user is looking at, if any.
    pub fn focus(&self) -> Option<&str> {
        match self {
            DialogState::Browsing { .. } => None,
            DialogState::Detail { restaurant_id, .. }
            | DialogState::AwaitingCritique { restaurant_id, .. }
            | DialogState::ClosingSale { restaurant_id }
            | DialogState::Booked { restaurant_id } => Some(restaurant_id),
            DialogState::Recommended { recommendation } => Some(&recommendation.restaurant_id),
        }
    }

    pub fn is_terminal(&self) -> bool {
        matches!(self, DialogState::Booked { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Actor {
    User,
    System,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResponseKind {
    Greeting,
    Options,
    Detail,
    View,
    Elicitation,
    Acknowledgement,
    Recommendation,
    Apology,
    CloseSale,
    Booked,
    Help,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Response {
    pub kind: ResponseKind,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum Payload {
    SessionStarted {
        session_id: String,
        mode: Mode,
        seed: u64,
    },
    Utterance {
        text: String,
    },
    Response {
        kind: ResponseKind,
        text: String,
    },
}

/// One log record. `timestamp` is milliseconds since the Unix epoch as
/// supplied by the caller.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub sequence: u64,
    pub timestamp: u64,
    pub actor: Actor,
    pub payload: Payload,
}

impl Event {
    pub fn is_user(&self) -> bool {
        self.actor == Actor::User
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Session {
    pub id: String,
    pub mode: Mode,
    pub seed: u64,
    pub state: DialogState,
    pub preferences: Vec<Preference>,
    pub rejected: BTreeSet<String>,
    pub command_count: u64,
    pub event_log: Vec<Event>,
    /// The option list Browsing returns to.
    pub options: Vec<String>,
    /// `(restaurant, view)` pairs already asked about.
    pub elicited: BTreeSet<(String, View)>,
    /// Restaurants that received positive feedback.
    pub liked: BTreeSet<String>,
    pub refreshes: u64,
    pub last_focus: Option<String>,
    pub last_responses: Vec<Response>,
}

impl Session {
    pub fn is_terminal(&self) -> bool {
        self.state.is_terminal()
    }

    pub fn user_event_count(&self) -> u64 {
        self.event_log.iter().filter(|e| e.is_user()).count() as u64
    }

    fn push(&mut self, timestamp: u64, actor: Actor, payload: Payload) {
        let sequence = self.event_log.len() as u64;
        self.event_log.push(Event {
            sequence,
            timestamp,
            actor,
            payload,
        });
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DialogError {
    #[error("session `{0}` is booked and accepts no more input")]
    Terminal(String),
    #[error("session is not showing a restaurant view")]
    NotInDetail,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReplayError {
    #[error("event log is empty")]
    Empty,
    #[error("event log does not start with a session header")]
    MissingHeader,
    #[error("replay diverged at sequence {sequence}")]
    Divergence { sequence: u64 },
    #[error(transparent)]
    Dialog(#[from] DialogError),
}
