//! Guided conversational recommendation for small, fixed option sets.
//!
//! The crate is `no_std` (with `alloc`) and contains every piece of the
//! recommender that is pure computation: the restaurant catalog and its
//! ingestion rules, the deterministic scoring providers, intent and critique
//! understanding, argument extraction from reviews, the dialog state machine
//! and the scenario simulator. File IO, HTTP and the command line live in the
//! `crs` companion crate.
//!
//! A typical embedding builds an [`dialog::Engine`] from a validated
//! [`catalog::Catalog`] and the shipped defaults, then drives
//! [`dialog::Session`]s one utterance at a time:
//!
//! ```
//! use crs_core::{assets, Catalog, Engine, Mode};
//!
//! let catalog: Catalog = serde_json::from_str(assets::FIXTURE_CATALOG_JSON).unwrap();
//! let engine = Engine::builtin(catalog).unwrap();
//! let mut session = engine.start_session("s1", Mode::Guided, 42, 0);
//! engine.step(&mut session, "option 1", 1).unwrap();
//! assert_eq!(session.state.tag(), "detail");
//! ```

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod assets;
pub mod catalog;
pub mod dialog;
pub mod nlu;
pub mod providers;
pub mod recommender;
pub mod simulator;
pub mod table;

pub use catalog::{Catalog, Restaurant, Review};
pub use dialog::{Engine, Mode, Session};
