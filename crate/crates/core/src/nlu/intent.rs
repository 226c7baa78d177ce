//! Rule-cascade intent classification.
//!
//! Order: `book it` rules; accept/reject (only while a recommendation or a
//! booking question is pending); back, refresh and dislike commands; view
//! requests; option selection by ordinal or by name; feedback polarity
//! (only while a restaurant is in focus); otherwise unknown.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::polarity::{Polarity, PolarityLexicon};
use crate::catalog::View;
use crate::providers::text::{contains_phrase, normalized};
use crate::table::{records, ConfigError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptionRef {
    /// Zero-based position in the displayed option list.
    Index(usize),
    /// Restaurant id resolved from a name mention.
    Id(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum IntentKind {
    SelectOption(OptionRef),
    OpenView(View),
    Back,
    RefreshOptions,
    Dislike,
    FeedbackPositive,
    FeedbackNegative,
    AcceptRecommendation,
    RejectRecommendation,
    BookIt,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Intent {
    pub kind: IntentKind,
    pub confidence: f64,
    pub raw_text: String,
}

/// What the classifier may know about the dialog.
#[derive(Debug, Clone, Copy, Default)]
pub struct IntentContext<'a> {
    /// A restaurant is in focus (detail, recommendation, booking question).
    pub focused: bool,
    /// A yes/no answer is expected (recommendation or booking question).
    pub answering: bool,
    /// Displayed options as `(id, name)`, in display order.
    pub options: &'a [(&'a str, &'a str)],
    /// Every restaurant as `(id, name)`; names outside the list still resolve.
    pub catalog: &'a [(&'a str, &'a str)],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Match {
    Exact,
    Contains,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RuleTarget {
    BookIt,
    Accept,
    Reject,
    Back,
    Refresh,
    Dislike,
    View(View),
    ViewCue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Rule {
    target: RuleTarget,
    mode: Match,
    phrase: String,
}

/// Keyword rules, `intent<TAB>exact|contains<TAB>phrase`.
///
/// Intents: `book_it`, `accept`, `reject`, `back`, `refresh`, `dislike`,
/// `view:<view tag>` and `view_cue`. A view keyword only opens a view when
/// the utterance is at most [`SHORT_UTTERANCE`] words or also contains a
/// `view_cue` phrase, so critiques that mention "ambience" stay critiques.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntentRules {
    rules: Vec<Rule>,
}

pub const SHORT_UTTERANCE: usize = 3;

impl IntentRules {
    pub fn parse(src: &str) -> Result<Self, ConfigError> {
        let mut rules = Vec::new();
        for rec in records(src, 3)? {
            let name = rec.fields[0].trim();
            let target = match name {
                "book_it" => RuleTarget::BookIt,
                "accept" => RuleTarget::Accept,
                "reject" => RuleTarget::Reject,
                "back" => RuleTarget::Back,
                "refresh" => RuleTarget::Refresh,
                "dislike" => RuleTarget::Dislike,
                "view_cue" => RuleTarget::ViewCue,
                other => match other.strip_prefix("view:").and_then(View::from_tag) {
                    Some(v) => RuleTarget::View(v),
                    None => {
                        return Err(ConfigError::new(
                            rec.line,
                            alloc::format!("unknown intent `{other}`"),
                        ))
                    }
                },
            };
            let mode = match rec.fields[1].trim() {
                "exact" => Match::Exact,
                "contains" => Match::Contains,
                other => {
                    return Err(ConfigError::new(
                        rec.line,
                        alloc::format!("unknown match mode `{other}`"),
                    ))
                }
            };
            let phrase = normalized(&rec.fields[2]);
            if phrase.is_empty() {
                return Err(ConfigError::new(rec.line, "empty phrase"));
            }
            rules.push(Rule { target, mode, phrase });
        }
        Ok(Self { rules })
    }

    pub fn builtin() -> Self {
        Self::parse(crate::assets::INTENT_RULES).expect("shipped intent rules parse")
    }

    fn hit(&self, text: &str, pred: impl Fn(RuleTarget) -> bool) -> Option<(RuleTarget, Match)> {
        self.rules
            .iter()
            .filter(|r| pred(r.target))
            .find(|r| match r.mode {
                Match::Exact => text == r.phrase,
                Match::Contains => contains_phrase(text, &r.phrase),
            })
            .map(|r| (r.target, r.mode))
    }
}

const ORDINALS: [(&str, usize); 15] = [
    ("first", 1),
    ("second", 2),
    ("third", 3),
    ("fourth", 4),
    ("fifth", 5),
    ("1st", 1),
    ("2nd", 2),
    ("3rd", 3),
    ("4th", 4),
    ("5th", 5),
    ("one", 1),
    ("two", 2),
    ("three", 3),
    ("four", 4),
    ("five", 5),
];

const OPTION_NOUNS: [&str; 5] = ["option", "number", "restaurant", "choice", "place"];

fn ordinal_value(word: &str, allow_cardinal_words: bool) -> Option<usize> {
    if let Ok(n) = word.parse::<usize>() {
        return Some(n);
    }
    ORDINALS
        .iter()
        .filter(|(w, _)| allow_cardinal_words || !matches!(*w, "one" | "two" | "three" | "four" | "five"))
        .find(|(w, _)| *w == word)
        .map(|(_, n)| *n)
}

/// 1-based position named by the utterance, if any.
fn ordinal(text: &str) -> Option<usize> {
    let ws: Vec<&str> = text.split(' ').collect();
    if ws.len() == 1 {
        return ordinal_value(ws[0], true);
    }
    for pair in ws.windows(2) {
        if OPTION_NOUNS.contains(&pair[0]) {
            if let Some(n) = ordinal_value(pair[1], true) {
                return Some(n);
            }
        }
    }
    if ws.len() <= 4 {
        if let Some(n) = ws.iter().find_map(|w| ordinal_value(w, false).filter(|_| w.parse::<usize>().is_err())) {
            return Some(n);
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntentClassifier {
    rules: IntentRules,
    polarity: PolarityLexicon,
}

impl IntentClassifier {
    pub fn new(rules: IntentRules, polarity: PolarityLexicon) -> Self {
        Self { rules, polarity }
    }

    pub fn builtin() -> Self {
        Self::new(IntentRules::builtin(), PolarityLexicon::builtin())
    }

    pub fn polarity(&self, text: &str) -> Polarity {
        self.polarity.classify(text)
    }

    pub fn classify(&self, text: &str, ctx: &IntentContext<'_>) -> Intent {
        let (kind, confidence) = self.cascade(text, ctx);
        Intent {
            kind,
            confidence,
            raw_text: text.to_string(),
        }
    }

    fn cascade(&self, raw: &str, ctx: &IntentContext<'_>) -> (IntentKind, f64) {
        let text = normalized(raw);
        let conf = |m: Match| if m == Match::Exact { 1.0 } else { 0.9 };

        if let Some((_, m)) = self.rules.hit(&text, |t| t == RuleTarget::BookIt) {
            return (IntentKind::BookIt, conf(m));
        }
        if ctx.answering {
            if let Some((t, m)) = self
                .rules
                .hit(&text, |t| matches!(t, RuleTarget::Accept | RuleTarget::Reject))
            {
                let kind = if t == RuleTarget::Accept {
                    IntentKind::AcceptRecommendation
                } else {
                    IntentKind::RejectRecommendation
                };
                return (kind, conf(m));
            }
        }
        if let Some((t, m)) = self.rules.hit(&text, |t| {
            matches!(t, RuleTarget::Back | RuleTarget::Refresh | RuleTarget::Dislike)
        }) {
            let kind = match t {
                RuleTarget::Back => IntentKind::Back,
                RuleTarget::Refresh => IntentKind::RefreshOptions,
                _ => IntentKind::Dislike,
            };
            return (kind, conf(m));
        }
        if let Some((RuleTarget::View(v), m)) =
            self.rules.hit(&text, |t| matches!(t, RuleTarget::View(_)))
        {
            let short = text.split(' ').count() <= SHORT_UTTERANCE;
            if short || self.rules.hit(&text, |t| t == RuleTarget::ViewCue).is_some() {
                return (IntentKind::OpenView(v), conf(m));
            }
        }
        if let Some(n) = ordinal(&text) {
            if (1..=ctx.options.len()).contains(&n) {
                return (IntentKind::SelectOption(OptionRef::Index(n - 1)), 0.8);
            }
        }
        if let Some(id) = name_match(&text, ctx.options).or_else(|| name_match(&text, ctx.catalog)) {
            return (IntentKind::SelectOption(OptionRef::Id(id)), 0.8);
        }
        if ctx.focused {
            match self.polarity.classify(raw) {
                Polarity::Positive => return (IntentKind::FeedbackPositive, 0.6),
                Polarity::Negative => return (IntentKind::FeedbackNegative, 0.6),
                Polarity::Neutral => {}
            }
        }
        (IntentKind::Unknown, 0.0)
    }
}

/// Longest restaurant name (normalized) mentioned in `text`.
fn name_match(text: &str, names: &[(&str, &str)]) -> Option<String> {
    names
        .iter()
        .map(|(id, name)| (id, normalized(name)))
        .filter(|(_, n)| contains_phrase(text, n))
        .max_by_key(|(_, n)| n.len())
        .map(|(id, _)| id.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    const OPTS: [(&str, &str); 3] = [
        ("r1", "Loop Burger Shack"),
        ("r2", "Taqueria El Sol"),
        ("r3", "Green Table"),
    ];

    fn classify(text: &str, focused: bool, answering: bool) -> IntentKind {
        let ctx = IntentContext {
            focused,
            answering,
            options: &OPTS,
            catalog: &OPTS,
        };
        IntentClassifier::builtin().classify(text, &ctx).kind
    }

    #[test]
    fn book_it_everywhere() {
        for (f, a) in [(false, false), (true, false), (true, true)] {
            assert_eq!(classify("Book it", f, a), IntentKind::BookIt);
            assert_eq!(classify("ok, book it!", f, a), IntentKind::BookIt);
        }
    }

    #[test]
    fn views() {
        assert_eq!(classify("show me the menu", true, false), IntentKind::OpenView(View::Menu));
        assert_eq!(classify("reviews", true, false), IntentKind::OpenView(View::Reviews));
        assert_eq!(
            classify("can I see the ambience photos", true, false),
            IntentKind::OpenView(View::AmbiencePhotos)
        );
        assert_eq!(
            classify("show me the food photos", true, false),
            IntentKind::OpenView(View::FoodPhotos)
        );
    }

    #[test]
    fn critique_mentioning_a_view_is_feedback() {
        assert_eq!(
            classify(
                "The ambience was fine but it doesn't seem like a good fit for a business meeting",
                true,
                false
            ),
            IntentKind::FeedbackNegative
        );
    }

    #[test]
    fn navigation_commands() {
        assert_eq!(classify("go back", true, false), IntentKind::Back);
        assert_eq!(classify("back", false, false), IntentKind::Back);
        assert_eq!(classify("show me other options", false, false), IntentKind::RefreshOptions);
        assert_eq!(classify("I don't like it", true, false), IntentKind::Dislike);
        assert_eq!(classify("dislike", true, false), IntentKind::Dislike);
    }

    #[test]
    fn selection() {
        assert_eq!(classify("option 2", false, false), IntentKind::SelectOption(OptionRef::Index(1)));
        assert_eq!(classify("the first one", false, false), IntentKind::SelectOption(OptionRef::Index(0)));
        assert_eq!(classify("3", false, false), IntentKind::SelectOption(OptionRef::Index(2)));
        assert_eq!(classify("option 9", false, false), IntentKind::Unknown);
        assert_eq!(
            classify("what about green table", false, false),
            IntentKind::SelectOption(OptionRef::Id("r3".into()))
        );
    }

    #[test]
    fn answers_only_when_pending() {
        assert_eq!(classify("yes", true, true), IntentKind::AcceptRecommendation);
        assert_eq!(classify("no thanks", true, true), IntentKind::RejectRecommendation);
        assert_ne!(classify("yes", true, false), IntentKind::AcceptRecommendation);
    }

    #[test]
    fn feedback_requires_focus() {
        assert_eq!(classify("This looks great, I love it", true, false), IntentKind::FeedbackPositive);
        assert_eq!(classify("This looks great, I love it", false, false), IntentKind::Unknown);
        assert_eq!(classify("It looks too greasy", true, false), IntentKind::FeedbackNegative);
        assert_eq!(classify("hmm", true, false), IntentKind::Unknown);
    }

    #[test]
    fn rule_file_errors() {
        assert!(IntentRules::parse("fly\texact\tgo\n").is_err());
        assert!(IntentRules::parse("back\tfuzzy\tgo\n").is_err());
        assert!(IntentRules::parse("view:patio\texact\tpatio\n").is_err());
    }
}
