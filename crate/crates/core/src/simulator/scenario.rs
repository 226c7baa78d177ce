use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::SimError;
use crate::catalog::{Restaurant, View};
use crate::table::{records, ConfigError};

/// Attributes a scenario utility can weigh, each mapped into `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Attribute {
    /// `1 - distance / max distance in the catalog`.
    Closeness,
    /// `(4 - price tier) / 3`.
    Affordability,
    KidFriendly,
    Romantic,
    VegetarianCoverage,
    AmbienceFormality,
}

impl Attribute {
    pub const ALL: [Attribute; 6] = [
        Attribute::Closeness,
        Attribute::Affordability,
        Attribute::KidFriendly,
        Attribute::Romantic,
        Attribute::VegetarianCoverage,
        Attribute::AmbienceFormality,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Attribute::Closeness => "closeness",
            Attribute::Affordability => "affordability",
            Attribute::KidFriendly => "kid_friendly",
            Attribute::Romantic => "romantic",
            Attribute::VegetarianCoverage => "vegetarian_coverage",
            Attribute::AmbienceFormality => "ambience_formality",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.tag() == tag)
    }

    /// Value of this attribute for `r`; annotated attributes need the
    /// fixture's attribute block.
    pub fn value(self, r: &Restaurant, max_distance_m: f64) -> Result<f64, SimError> {
        let annotated = || {
            r.attributes.ok_or_else(|| SimError::MissingAttributes {
                restaurant_id: r.id.clone(),
            })
        };
        let v = match self {
            Attribute::Closeness => {
                if max_distance_m > 0.0 {
                    1.0 - r.distance_m / max_distance_m
                } else {
                    1.0
                }
            }
            Attribute::Affordability => (4.0 - f64::from(r.price_tier)) / 3.0,
            Attribute::KidFriendly => annotated()?.kid_friendly,
            Attribute::Romantic => annotated()?.romantic,
            Attribute::VegetarianCoverage => annotated()?.vegetarian_coverage,
            Attribute::AmbienceFormality => annotated()?.ambience_formality,
        };
        Ok(v.clamp(0.0, 1.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub tag: String,
    pub description: String,
    pub weights: Vec<(Attribute, f64)>,
    /// Utility an option must reach to be booked.
    pub bar: f64,
    /// The view the policy opens before judging an option.
    pub view: View,
    pub critiques: BTreeMap<Attribute, String>,
}

impl Scenario {
    pub fn utility(&self, r: &Restaurant, max_distance_m: f64) -> Result<f64, SimError> {
        let mut u = 0.0;
        for (a, w) in &self.weights {
            u += w * a.value(r, max_distance_m)?;
        }
        Ok(u)
    }

    /// The weighted attribute with the largest shortfall `w * (1 - v)`;
    /// earlier weights win ties.
    pub fn worst_violated(&self, r: &Restaurant, max_distance_m: f64) -> Result<Attribute, SimError> {
        let mut worst: Option<(Attribute, f64)> = None;
        for (a, w) in &self.weights {
            let gap = w * (1.0 - a.value(r, max_distance_m)?);
            if worst.is_none_or(|(_, g)| gap > g) {
                worst = Some((*a, gap));
            }
        }
        worst.map(|(a, _)| a).ok_or(SimError::NoWeights(self.tag.clone()))
    }

    pub fn critique_for(&self, a: Attribute) -> &str {
        self.critiques.get(&a).map_or("I don't like it", String::as_str)
    }
}

/// Parse `tag<TAB>key<TAB>attribute<TAB>value` records.
pub fn parse_scenarios(src: &str) -> Result<Vec<Scenario>, ConfigError> {
    let mut order: Vec<String> = Vec::new();
    let mut by_tag: BTreeMap<String, (Scenario, [bool; 3])> = BTreeMap::new();
    for rec in records(src, 4)? {
        let tag = rec.fields[0].trim().to_string();
        let key = rec.fields[1].trim();
        let attr = rec.fields[2].trim();
        let value = rec.fields[3].trim();
        let entry = by_tag.entry(tag.clone()).or_insert_with(|| {
            order.push(tag.clone());
            (
                Scenario {
                    tag: tag.clone(),
                    description: String::new(),
                    weights: Vec::new(),
                    bar: 0.0,
                    view: View::Overview,
                    critiques: BTreeMap::new(),
                },
                [false; 3],
            )
        });
        let number = || {
            value
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| ConfigError::new(rec.line, alloc::format!("`{value}` is not a finite number")))
        };
        let attribute = || {
            Attribute::from_tag(attr)
                .ok_or_else(|| ConfigError::new(rec.line, alloc::format!("unknown attribute `{attr}`")))
        };
        let (s, seen) = entry;
        match key {
            "description" => {
                s.description = value.to_string();
                seen[0] = true;
            }
            "bar" => {
                s.bar = number()?;
                seen[1] = true;
            }
            "view" => {
                s.view = View::from_tag(value)
                    .ok_or_else(|| ConfigError::new(rec.line, alloc::format!("unknown view `{value}`")))?;
                seen[2] = true;
            }
            "weight" => {
                let a = attribute()?;
                if s.weights.iter().any(|(b, _)| *b == a) {
                    return Err(ConfigError::new(rec.line, alloc::format!("duplicate weight for `{attr}`")));
                }
                s.weights.push((a, number()?));
            }
            "critique" => {
                if value.is_empty() {
                    return Err(ConfigError::new(rec.line, "empty critique template"));
                }
                s.critiques.insert(attribute()?, value.to_string());
            }
            other => return Err(ConfigError::new(rec.line, alloc::format!("unknown key `{other}`"))),
        }
    }
    let mut out = Vec::new();
    for tag in order {
        let (s, seen) = by_tag.remove(&tag).expect("tag recorded");
        if seen.contains(&false) {
            return Err(ConfigError::new(0, alloc::format!("scenario `{tag}` needs description, bar and view")));
        }
        if s.weights.is_empty() {
            return Err(ConfigError::new(0, alloc::format!("scenario `{tag}` has no weights")));
        }
        if let Some((a, _)) = s.weights.iter().find(|(a, _)| !s.critiques.contains_key(a)) {
            return Err(ConfigError::new(
                0,
                alloc::format!("scenario `{tag}` has no critique for `{}`", a.tag()),
            ));
        }
        out.push(s);
    }
    Ok(out)
}

pub fn builtin_scenarios() -> Vec<Scenario> {
    parse_scenarios(crate::assets::SCENARIOS).expect("shipped scenarios parse")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::test_support::restaurant;
    use crate::catalog::Attributes;

    #[test]
    fn builtin_tags_in_order() {
        let tags: Vec<String> = builtin_scenarios().into_iter().map(|s| s.tag).collect();
        assert_eq!(tags, ["LT", "LK", "DR", "DV"]);
    }

    #[test]
    fn utility_and_worst() {
        let dv = builtin_scenarios().into_iter().find(|s| s.tag == "DV").unwrap();
        let mut r = restaurant("r", 100.0);
        assert!(dv.utility(&r, 1000.0).is_err());
        r.attributes = Some(Attributes {
            kid_friendly: 0.0,
            romantic: 0.0,
            vegetarian_coverage: 0.2,
            ambience_formality: 0.1,
        });
        assert!((dv.utility(&r, 1000.0).unwrap() - (0.6 * 0.2 + 0.4 * 0.1)).abs() < 1e-12);
        assert_eq!(dv.worst_violated(&r, 1000.0).unwrap(), Attribute::VegetarianCoverage);
        assert_eq!(dv.critique_for(Attribute::VegetarianCoverage), "I didn't see a lot of vegetarian options");
    }

    #[test]
    fn derived_attributes() {
        let mut r = restaurant("r", 250.0);
        r.price_tier = 1;
        assert_eq!(Attribute::Affordability.value(&r, 1000.0).unwrap(), 1.0);
        assert_eq!(Attribute::Closeness.value(&r, 1000.0).unwrap(), 0.75);
        r.price_tier = 4;
        assert_eq!(Attribute::Affordability.value(&r, 1000.0).unwrap(), 0.0);
    }

    #[test]
    fn config_errors() {
        assert!(parse_scenarios("X\tweight\tclosenes\t1\n").is_err());
        assert!(parse_scenarios("X\tdescription\t-\td\nX\tbar\t-\t0.5\nX\tview\t-\tmenu\nX\tweight\tcloseness\t1\n").is_err());
        assert!(parse_scenarios("X\tbar\t-\tNaN\n").is_err());
    }
}
