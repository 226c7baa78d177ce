use alloc::collections::BTreeMap;
use alloc::string::String;

use crate::table::{records, ConfigError};

/// Keys every response template file must define.
pub const REQUIRED_KEYS: [&str; 18] = [
    "greeting",
    "option_line",
    "detail",
    "view_opened",
    "elicit",
    "hear_you",
    "explanation",
    "no_recommendation",
    "close_sale",
    "booked",
    "back",
    "refresh",
    "dislike_ack",
    "reject_ack",
    "decline_booking",
    "liked_ack",
    "pick_first",
    "help",
];

/// Response strings keyed by name, `key<TAB>text`. Placeholders are written
/// `{name}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Templates {
    entries: BTreeMap<String, String>,
}

impl Templates {
    pub fn parse(src: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        let mut last_line = 0;
        for rec in records(src, 2)? {
            last_line = rec.line;
            let key = rec.fields[0].trim();
            if entries
                .insert(String::from(key), rec.fields[1].clone())
                .is_some()
            {
                return Err(ConfigError::new(rec.line, alloc::format!("duplicate key `{key}`")));
            }
        }
        if let Some(missing) = REQUIRED_KEYS.iter().find(|k| !entries.contains_key(**k)) {
            return Err(ConfigError::new(
                last_line,
                alloc::format!("missing template `{missing}`"),
            ));
        }
        Ok(Self { entries })
    }

    pub fn builtin() -> Self {
        Self::parse(crate::assets::RESPONSE_TEMPLATES).expect("shipped templates parse")
    }

    pub fn raw(&self, key: &str) -> &str {
        self.entries.get(key).map_or("", String::as_str)
    }

    pub fn fill(&self, key: &str, vars: &[(&str, &str)]) -> String {
        fill(self.raw(key), vars)
    }
}

/// Replace every `{name}` in `template` with its value.
pub fn fill(template: &str, vars: &[(&str, &str)]) -> String {
    let mut out = String::from(template);
    for (name, value) in vars {
        out = out.replace(&alloc::format!("{{{name}}}"), value);
    }
    out
}
