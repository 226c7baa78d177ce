#![allow(dead_code)]

use crs_core::catalog::Catalog;
use crs_core::dialog::Engine;
use crs_core::assets;

pub fn fixture() -> Catalog {
    serde_json::from_str(assets::FIXTURE_CATALOG_JSON).expect("fixture parses")
}

pub fn engine() -> Engine {
    Engine::builtin(fixture()).expect("engine builds")
}

/// Preference phrasings used by randomized tests.
pub const PREFERENCES: [&str; 16] = [
    "I prefer vegetarian",
    "I prefer lighter food",
    "I prefer a kid-friendly place",
    "I prefer more romantic",
    "I prefer larger portions",
    "I prefer a more traditional meeting place",
    "I prefer a good steak",
    "I prefer a chill place",
    "I prefer cheaper options",
    "I prefer somewhere closer",
    "I prefer a quieter place",
    "I prefer faster service",
    "I prefer spicier food",
    "I prefer fresh seafood",
    "I prefer something different",
    "I prefer outdoor seating",
];
