use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{
    Actor, DialogError, DialogState, Event, Mode, Payload, ReplayError, Response, ResponseKind,
    Session, Templates, ViewPayload,
};
use crate::catalog::{Catalog, Restaurant, View, DEFAULT_OPTION_COUNT};
use crate::nlu::{
    AspectTable, Critique, CritiqueTransformer, IntentClassifier, IntentContext, IntentKind,
    OptionRef, Polarity, PromptError, PromptTemplate, DEFAULT_SHOTS,
};
use crate::providers::{ProviderError, Providers};
use crate::recommender::{Recommendation, Recommender, SentenceIndex, JOY_THRESHOLD};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineConfig {
    pub option_count: usize,
    pub joy_threshold: f64,
    pub shots: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            option_count: DEFAULT_OPTION_COUNT,
            joy_threshold: JOY_THRESHOLD,
            shots: DEFAULT_SHOTS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error("building the sentence index failed: {0}")]
    Index(#[from] ProviderError),
    #[error(transparent)]
    Prompt(#[from] PromptError),
    #[error("option count must be positive")]
    OptionCount,
    #[error("joy threshold {0} outside [0, 1]")]
    Threshold(f64),
}

/// Everything needed to run sessions over one catalog. Shared read-only.
#[derive(Debug)]
pub struct Engine {
    catalog: Catalog,
    providers: Providers,
    recommender: Recommender,
    classifier: IntentClassifier,
    transformer: CritiqueTransformer,
    templates: Templates,
    config: EngineConfig,
}

fn view_label(view: View) -> String {
    view.tag().replace('_', " ")
}

fn format_distance(d: f64) -> String {
    format!("{}", libm::round(d) as i64)
}

impl Engine {
    pub fn new(catalog: Catalog, providers: Providers, config: EngineConfig) -> Result<Self, EngineError> {
        let template = PromptTemplate::builtin(config.shots)?;
        Self::with_parts(
            catalog,
            providers,
            config,
            Templates::builtin(),
            IntentClassifier::builtin(),
            CritiqueTransformer::new(template, AspectTable::builtin()),
        )
    }

    /// Built-in providers and configuration.
    pub fn builtin(catalog: Catalog) -> Result<Self, EngineError> {
        Self::new(catalog, Providers::builtin(), EngineConfig::default())
    }

    pub fn with_parts(
        catalog: Catalog,
        providers: Providers,
        config: EngineConfig,
        templates: Templates,
        classifier: IntentClassifier,
        transformer: CritiqueTransformer,
    ) -> Result<Self, EngineError> {
        if config.option_count == 0 {
            return Err(EngineError::OptionCount);
        }
        if !(0.0..=1.0).contains(&config.joy_threshold) {
            return Err(EngineError::Threshold(config.joy_threshold));
        }
        let index = SentenceIndex::build(&catalog, providers.joy.as_ref(), providers.embedder.as_ref())?;
        let recommender = Recommender::new(index, config.joy_threshold, templates.raw("explanation"));
        Ok(Self {
            catalog,
            providers,
            recommender,
            classifier,
            transformer,
            templates,
            config,
        })
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    pub fn providers(&self) -> &Providers {
        &self.providers
    }

    pub fn recommender(&self) -> &Recommender {
        &self.recommender
    }

    pub fn templates(&self) -> &Templates {
        &self.templates
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn transformer(&self) -> &CritiqueTransformer {
        &self.transformer
    }

    /// A new session showing the closest options, with its header and
    /// greeting logged at `now`.
    pub fn start_session(&self, id: impl Into<String>, mode: Mode, seed: u64, now: u64) -> Session {
        let options: Vec<String> = self
            .catalog
            .nearby_options(self.config.option_count, seed, &BTreeSet::new())
            .into_iter()
            .map(|r| r.id.clone())
            .collect();
        let id = id.into();
        let mut session = Session {
            id: id.clone(),
            mode,
            seed,
            state: DialogState::Browsing {
                options: options.clone(),
            },
            preferences: Vec::new(),
            rejected: BTreeSet::new(),
            command_count: 0,
            event_log: Vec::new(),
            options,
            elicited: BTreeSet::new(),
            liked: BTreeSet::new(),
            refreshes: 0,
            last_focus: None,
            last_responses: Vec::new(),
        };
        session.push(
            now,
            Actor::System,
            Payload::SessionStarted {
                session_id: id,
                mode,
                seed,
            },
        );
        let count = session.options.len().to_string();
        let responses = vec![
            self.say(ResponseKind::Greeting, "greeting", &[("count", &count)]),
            self.options_response(&session.options),
        ];
        self.emit(&mut session, now, responses.clone());
        session
    }

    /// Apply one user utterance.
    pub fn step(&self, session: &mut Session, text: &str, now: u64) -> Result<Vec<Response>, DialogError> {
        if session.is_terminal() {
            return Err(DialogError::Terminal(session.id.clone()));
        }
        session.command_count += 1;
        session.push(
            now,
            Actor::User,
            Payload::Utterance {
                text: text.to_string(),
            },
        );
        let responses = self.transition(session, text);
        self.emit(session, now, responses.clone());
        Ok(responses)
    }

    /// The payload of the view currently shown.
    pub fn render_view(&self, session: &Session) -> Result<ViewPayload, DialogError> {
        match &session.state {
            DialogState::Detail {
                restaurant_id,
                current_view,
                ..
            } => self
                .view_payload(restaurant_id, *current_view)
                .ok_or(DialogError::NotInDetail),
            _ => Err(DialogError::NotInDetail),
        }
    }

    pub fn view_payload(&self, restaurant_id: &str, view: View) -> Option<ViewPayload> {
        self.catalog.get(restaurant_id).map(|r| ViewPayload::project(r, view))
    }

    /// Rebuild a session from its log, checking every system event against
    /// what the engine produces now.
    pub fn replay(&self, log: &[Event]) -> Result<Session, ReplayError> {
        let first = log.first().ok_or(ReplayError::Empty)?;
        let Payload::SessionStarted {
            session_id,
            mode,
            seed,
        } = &first.payload
        else {
            return Err(ReplayError::MissingHeader);
        };
        let mut session = self.start_session(session_id.clone(), *mode, *seed, first.timestamp);
        check_prefix(&session.event_log, log)?;
        let mut at = session.event_log.len();
        while at < log.len() {
            let event = &log[at];
            let Payload::Utterance { text } = &event.payload else {
                return Err(ReplayError::Divergence {
                    sequence: event.sequence,
                });
            };
            if event.actor != Actor::User || event.sequence != at as u64 {
                return Err(ReplayError::Divergence {
                    sequence: event.sequence,
                });
            }
            match self.step(&mut session, text, event.timestamp) {
                Ok(_) => {}
                Err(DialogError::Terminal(_)) => {
                    return Err(ReplayError::Divergence {
                        sequence: event.sequence,
                    })
                }
                Err(e) => return Err(e.into()),
            }
            check_prefix(&session.event_log, log)?;
            at = session.event_log.len();
        }
        Ok(session)
    }

    fn emit(&self, session: &mut Session, now: u64, responses: Vec<Response>) {
        for r in &responses {
            session.push(
                now,
                Actor::System,
                Payload::Response {
                    kind: r.kind,
                    text: r.text.clone(),
                },
            );
        }
        session.last_responses = responses;
    }

    fn say(&self, kind: ResponseKind, key: &str, vars: &[(&str, &str)]) -> Response {
        Response {
            kind,
            text: self.templates.fill(key, vars),
        }
    }

    fn restaurant(&self, id: &str) -> Option<&Restaurant> {
        self.catalog.get(id)
    }

    fn name_of(&self, id: &str) -> String {
        self.restaurant(id).map_or_else(|| id.to_string(), |r| r.name.clone())
    }

    fn options_response(&self, options: &[String]) -> Response {
        let lines: Vec<String> = options
            .iter()
            .filter_map(|id| self.restaurant(id))
            .enumerate()
            .map(|(i, r)| {
                let n = (i + 1).to_string();
                let cuisines = r.cuisines.join(", ");
                let distance = format_distance(r.distance_m);
                self.templates.fill(
                    "option_line",
                    &[
                        ("n", &n),
                        ("name", &r.name),
                        ("price", r.price_symbol()),
                        ("cuisines", &cuisines),
                        ("distance", &distance),
                    ],
                )
            })
            .collect();
        Response {
            kind: ResponseKind::Options,
            text: lines.join("\n"),
        }
    }

    fn detail_response(&self, r: &Restaurant) -> Response {
        let cuisines = r.cuisines.join(", ");
        let distance = format_distance(r.distance_m);
        self.say(
            ResponseKind::Detail,
            "detail",
            &[
                ("name", &r.name),
                ("price", r.price_symbol()),
                ("cuisines", &cuisines),
                ("distance", &distance),
            ],
        )
    }

    fn transition(&self, s: &mut Session, text: &str) -> Vec<Response> {
        let kind = self.classify(s, text);
        if let IntentKind::BookIt = kind {
            return self.book(s);
        }
        match s.state.clone() {
            DialogState::Browsing { .. } => self.on_browsing(s, kind),
            DialogState::Detail {
                restaurant_id,
                current_view,
                views_opened,
            } => self.on_detail(s, kind, restaurant_id, current_view, views_opened),
            DialogState::AwaitingCritique {
                restaurant_id,
                context_view,
            } => self.on_critique(s, text, restaurant_id, context_view),
            DialogState::Recommended { recommendation } => self.on_recommended(s, kind, recommendation),
            DialogState::ClosingSale { restaurant_id } => self.on_closing(s, kind, restaurant_id),
            DialogState::Booked { .. } => Vec::new(),
        }
    }

    fn classify(&self, s: &Session, text: &str) -> IntentKind {
        if let DialogState::AwaitingCritique { .. } = s.state {
            // any answer is a critique unless the user just books
            let ctx = IntentContext::default();
            return match self.classifier.classify(text, &ctx).kind {
                IntentKind::BookIt => IntentKind::BookIt,
                _ => IntentKind::Unknown,
            };
        }
        let options: Vec<(&str, &str)> = s
            .options
            .iter()
            .filter_map(|id| self.restaurant(id))
            .map(|r| (r.id.as_str(), r.name.as_str()))
            .collect();
        let catalog: Vec<(&str, &str)> = self
            .catalog
            .restaurants()
            .iter()
            .map(|r| (r.id.as_str(), r.name.as_str()))
            .collect();
        let ctx = IntentContext {
            focused: s.state.focus().is_some(),
            answering: matches!(
                s.state,
                DialogState::Recommended { .. } | DialogState::ClosingSale { .. }
            ),
            options: &options,
            catalog: &catalog,
        };
        self.classifier.classify(text, &ctx).kind
    }

    fn book(&self, s: &mut Session) -> Vec<Response> {
        let target = s
            .state
            .focus()
            .map(String::from)
            .or_else(|| s.last_focus.clone())
            .or_else(|| s.options.first().cloned());
        let Some(restaurant_id) = target else {
            return vec![self.say(ResponseKind::Help, "help", &[])];
        };
        let name = self.name_of(&restaurant_id);
        s.state = DialogState::Booked { restaurant_id };
        vec![self.say(ResponseKind::Booked, "booked", &[("name", &name)])]
    }

    fn open_detail(&self, s: &mut Session, restaurant_id: String) -> Vec<Response> {
        let Some(r) = self.restaurant(&restaurant_id) else {
            return vec![self.say(ResponseKind::Help, "help", &[])];
        };
        let out = vec![self.detail_response(r)];
        s.last_focus = Some(restaurant_id.clone());
        s.state = DialogState::Detail {
            restaurant_id,
            current_view: View::Overview,
            views_opened: BTreeSet::new(),
        };
        out
    }

    fn select(&self, s: &mut Session, option: OptionRef) -> Vec<Response> {
        let id = match option {
            OptionRef::Index(i) => s.options.get(i).cloned(),
            OptionRef::Id(id) => Some(id),
        };
        match id {
            Some(id) => self.open_detail(s, id),
            None => vec![self.say(ResponseKind::Help, "help", &[])],
        }
    }

    fn open_view(&self, s: &mut Session, restaurant_id: String, view: View, mut opened: BTreeSet<View>) -> Vec<Response> {
        let name = self.name_of(&restaurant_id);
        opened.insert(view);
        s.last_focus = Some(restaurant_id.clone());
        s.state = DialogState::Detail {
            restaurant_id,
            current_view: view,
            views_opened: opened,
        };
        let label = view_label(view);
        vec![self.say(ResponseKind::View, "view_opened", &[("view", &label), ("name", &name)])]
    }

    fn to_browsing(&self, s: &mut Session, mut head: Vec<Response>) -> Vec<Response> {
        s.state = DialogState::Browsing {
            options: s.options.clone(),
        };
        head.push(self.options_response(&s.options));
        head
    }

    fn refresh(&self, s: &mut Session) -> Vec<Response> {
        let seed = s.seed.wrapping_add(s.refreshes);
        s.refreshes += 1;
        let k = self.config.option_count;
        let mut exclude: BTreeSet<String> = s.options.iter().cloned().collect();
        exclude.extend(s.rejected.iter().cloned());
        let mut picked = self.catalog.refresh_options(k, seed, &exclude);
        if picked.is_empty() {
            picked = self.catalog.refresh_options(k, seed, &s.rejected);
        }
        if picked.is_empty() {
            picked = self.catalog.refresh_options(k, seed, &BTreeSet::new());
        }
        s.options = picked.into_iter().map(|r| r.id.clone()).collect();
        let head = vec![self.say(ResponseKind::Acknowledgement, "refresh", &[])];
        self.to_browsing(s, head)
    }

    fn elicit(&self, s: &mut Session, restaurant_id: String, view: View) -> Vec<Response> {
        s.elicited.insert((restaurant_id.clone(), view));
        s.state = DialogState::AwaitingCritique {
            restaurant_id,
            context_view: view,
        };
        let label = view_label(view);
        vec![self.say(ResponseKind::Elicitation, "elicit", &[("view", &label)])]
    }

    fn dislike(&self, s: &mut Session, restaurant_id: String, view: View) -> Vec<Response> {
        if s.mode == Mode::Guided && !s.elicited.contains(&(restaurant_id.clone(), view)) {
            return self.elicit(s, restaurant_id, view);
        }
        s.rejected.insert(restaurant_id);
        let head = vec![self.say(ResponseKind::Acknowledgement, "dislike_ack", &[])];
        self.to_browsing(s, head)
    }

    fn liked(&self, s: &mut Session, restaurant_id: String) -> Vec<Response> {
        s.liked.insert(restaurant_id.clone());
        if s.mode == Mode::Guided {
            s.last_focus = Some(restaurant_id.clone());
            s.state = DialogState::ClosingSale { restaurant_id };
            vec![self.say(ResponseKind::CloseSale, "close_sale", &[])]
        } else {
            vec![self.say(ResponseKind::Acknowledgement, "liked_ack", &[])]
        }
    }

    fn help(&self) -> Vec<Response> {
        vec![self.say(ResponseKind::Help, "help", &[])]
    }

    fn on_browsing(&self, s: &mut Session, kind: IntentKind) -> Vec<Response> {
        match kind {
            IntentKind::SelectOption(o) => self.select(s, o),
            IntentKind::OpenView(_) => vec![self.say(ResponseKind::Help, "pick_first", &[])],
            IntentKind::Back => self.to_browsing(s, vec![self.say(ResponseKind::Acknowledgement, "back", &[])]),
            IntentKind::RefreshOptions => self.refresh(s),
            IntentKind::Dislike => match s.last_focus.clone() {
                Some(r) => self.dislike(s, r, View::Overview),
                None => vec![self.say(ResponseKind::Help, "pick_first", &[])],
            },
            _ => self.help(),
        }
    }

    fn on_detail(
        &self,
        s: &mut Session,
        kind: IntentKind,
        restaurant_id: String,
        current_view: View,
        views_opened: BTreeSet<View>,
    ) -> Vec<Response> {
        let guided = s.mode == Mode::Guided;
        match kind {
            IntentKind::SelectOption(o) => self.select(s, o),
            IntentKind::OpenView(v) => self.open_view(s, restaurant_id, v, views_opened),
            IntentKind::Back => {
                let walked_away = guided
                    && !views_opened.is_empty()
                    && !s.liked.contains(&restaurant_id)
                    && !s.elicited.contains(&(restaurant_id.clone(), current_view));
                if walked_away {
                    self.elicit(s, restaurant_id, current_view)
                } else {
                    self.to_browsing(s, vec![self.say(ResponseKind::Acknowledgement, "back", &[])])
                }
            }
            IntentKind::RefreshOptions => self.refresh(s),
            IntentKind::Dislike => self.dislike(s, restaurant_id, current_view),
            IntentKind::FeedbackPositive => self.liked(s, restaurant_id),
            IntentKind::FeedbackNegative if guided => {
                s.elicited.insert((restaurant_id.clone(), current_view));
                let text = match s.event_log.last() {
                    Some(Event {
                        payload: Payload::Utterance { text },
                        ..
                    }) => text.clone(),
                    _ => String::new(),
                };
                self.on_critique(s, &text, restaurant_id, current_view)
            }
            IntentKind::FeedbackNegative => {
                s.rejected.insert(restaurant_id);
                self.to_browsing(s, vec![self.say(ResponseKind::Acknowledgement, "dislike_ack", &[])])
            }
            _ => self.help(),
        }
    }

    fn on_critique(&self, s: &mut Session, text: &str, restaurant_id: String, view: View) -> Vec<Response> {
        if self.classifier.polarity(text) == Polarity::Positive {
            return self.liked(s, restaurant_id);
        }
        s.rejected.insert(restaurant_id.clone());
        let Ok(critique) = Critique::new(text, view, restaurant_id.clone(), s.command_count) else {
            return self.to_browsing(s, vec![self.say(ResponseKind::Apology, "no_recommendation", &[])]);
        };
        let preference = self
            .transformer
            .to_preference(&critique, self.providers.completion.as_ref());
        let aspect = preference.aspect().to_string();
        s.preferences.push(preference);
        let mut exclude = s.rejected.clone();
        exclude.insert(restaurant_id);
        let found = self
            .recommender
            .recommend(
                &self.catalog,
                &s.preferences,
                self.providers.embedder.as_ref(),
                &exclude,
            )
            .ok()
            .flatten();
        match found {
            Some(rec) => self.present(s, rec),
            None => {
                let head = vec![
                    self.say(ResponseKind::Acknowledgement, "hear_you", &[("aspect", &aspect)]),
                    self.say(ResponseKind::Apology, "no_recommendation", &[]),
                ];
                self.to_browsing(s, head)
            }
        }
    }

    fn present(&self, s: &mut Session, rec: Recommendation) -> Vec<Response> {
        let out = vec![Response {
            kind: ResponseKind::Recommendation,
            text: rec.explanation.clone(),
        }];
        s.last_focus = Some(rec.restaurant_id.clone());
        s.state = DialogState::Recommended { recommendation: rec };
        out
    }

    fn on_recommended(&self, s: &mut Session, kind: IntentKind, rec: Recommendation) -> Vec<Response> {
        let id = rec.restaurant_id;
        match kind {
            IntentKind::AcceptRecommendation | IntentKind::FeedbackPositive => {
                s.state = DialogState::ClosingSale { restaurant_id: id };
                vec![self.say(ResponseKind::CloseSale, "close_sale", &[])]
            }
            IntentKind::RejectRecommendation | IntentKind::FeedbackNegative | IntentKind::Dislike => {
                s.rejected.insert(id);
                self.to_browsing(s, vec![self.say(ResponseKind::Acknowledgement, "reject_ack", &[])])
            }
            IntentKind::SelectOption(o) => self.select(s, o),
            IntentKind::OpenView(v) => self.open_view(s, id, v, BTreeSet::new()),
            IntentKind::Back => self.to_browsing(s, vec![self.say(ResponseKind::Acknowledgement, "back", &[])]),
            IntentKind::RefreshOptions => self.refresh(s),
            _ => self.help(),
        }
    }

    fn on_closing(&self, s: &mut Session, kind: IntentKind, restaurant_id: String) -> Vec<Response> {
        match kind {
            IntentKind::AcceptRecommendation | IntentKind::FeedbackPositive => self.book(s),
            IntentKind::RejectRecommendation | IntentKind::FeedbackNegative => {
                let name = self.name_of(&restaurant_id);
                s.state = DialogState::Detail {
                    restaurant_id,
                    current_view: View::Overview,
                    views_opened: BTreeSet::new(),
                };
                vec![self.say(ResponseKind::Acknowledgement, "decline_booking", &[("name", &name)])]
            }
            IntentKind::Dislike => {
                s.rejected.insert(restaurant_id);
                self.to_browsing(s, vec![self.say(ResponseKind::Acknowledgement, "dislike_ack", &[])])
            }
            IntentKind::SelectOption(o) => self.select(s, o),
            IntentKind::OpenView(v) => self.open_view(s, restaurant_id, v, BTreeSet::new()),
            IntentKind::Back => self.to_browsing(s, vec![self.say(ResponseKind::Acknowledgement, "back", &[])]),
            IntentKind::RefreshOptions => self.refresh(s),
            _ => self.help(),
        }
    }
}

/// A log that stops inside a batch of system responses is accepted; the
/// missing tail is regenerated.
fn check_prefix(produced: &[Event], log: &[Event]) -> Result<(), ReplayError> {
    for (i, e) in produced.iter().enumerate() {
        match log.get(i) {
            Some(recorded) if recorded == e => {}
            None => break,
            Some(_) => {
                return Err(ReplayError::Divergence {
                    sequence: i as u64,
                })
            }
        }
    }
    Ok(())
}
