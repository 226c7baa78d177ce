//! Simulation and audit reports, as text tables and JSON documents.

use crs_core::dialog::Mode;
use crs_core::nlu::{parse_statement, PREFERENCE_PREFIX};
use crs_core::providers::ProviderError;
use crs_core::recommender::ExplainRow;
use crs_core::simulator::{aggregate, simulate, CellStats, PolicyTrace, Scenario, SimError};
use crs_core::Engine;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub scenario: String,
    pub description: String,
    pub runs: usize,
    pub seed: u64,
    pub cells: Vec<CellStats>,
    /// Booked restaurant per mode and run, in seed order.
    pub booked: Vec<BookedRun>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BookedRun {
    pub mode: Mode,
    pub seed: u64,
    pub commands: u64,
    pub restaurant_id: Option<String>,
}

impl SimulationReport {
    pub fn cell(&self, mode: Mode) -> Option<&CellStats> {
        self.cells.iter().find(|c| c.mode == mode)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn table(&self) -> String {
        let mut out = format!(
            "scenario {} ({}), {} runs, seed {}\n",
            self.scenario, self.description, self.runs, self.seed
        );
        out.push_str(&format!("{:<10} {:>5} {:>8} {:>8} {:>8}\n", "mode", "runs", "mean", "sd", "median"));
        for c in &self.cells {
            out.push_str(&format!(
                "{:<10} {:>5} {:>8.2} {:>8.2} {:>8.1}\n",
                c.mode.tag(),
                c.commands.runs,
                c.commands.mean,
                c.commands.sd,
                c.commands.median
            ));
        }
        out
    }
}

/// Run `runs` journeys per mode with seeds `seed + i`.
pub fn run(engine: &Engine, scenario: &Scenario, runs: usize, seed: u64) -> Result<SimulationReport, SimError> {
    let jobs: Vec<(Mode, u64)> = [Mode::Guided, Mode::Baseline]
        .into_iter()
        .flat_map(|m| (0..runs as u64).map(move |i| (m, seed.wrapping_add(i))))
        .collect();
    let traces = jobs
        .par_iter()
        .map(|&(mode, s)| simulate(engine, scenario, mode, s))
        .collect::<Result<Vec<PolicyTrace>, _>>()?;
    Ok(SimulationReport {
        scenario: scenario.tag.clone(),
        description: scenario.description.clone(),
        runs,
        seed,
        cells: aggregate(&traces),
        booked: traces
            .iter()
            .map(|t| BookedRun {
                mode: t.mode,
                seed: t.seed,
                commands: t.command_count,
                restaurant_id: t.booked.clone(),
            })
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplainReport {
    pub preference: String,
    pub threshold: f64,
    pub rows: Vec<ExplainRow>,
}

/// Accepts either a bare aspect or an "I prefer ..." statement.
pub fn explain(engine: &Engine, preference: &str) -> Result<ExplainReport, ProviderError> {
    let aspect = parse_statement(preference).ok_or(ProviderError::EmptyInput)?;
    let statement = format!("{PREFERENCE_PREFIX}{aspect}");
    let rows = engine
        .recommender()
        .explain(&statement, engine.providers().embedder.as_ref())?;
    Ok(ExplainReport {
        preference: statement,
        threshold: engine.recommender().threshold(),
        rows,
    })
}

impl ExplainReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn table(&self) -> String {
        let mut out = format!("preference: {}\njoy threshold: {}\n", self.preference, self.threshold);
        out.push_str(&format!("{:<4} {:<10} {:>3} {:>6} {:<4} {:>9}  text\n", "rank", "review", "#", "joy", "pass", "alignment"));
        for (i, r) in self.rows.iter().enumerate() {
            out.push_str(&format!(
                "{:<4} {:<10} {:>3} {:>6.3} {:<4} {:>9.4}  {}\n",
                i + 1,
                r.review_id,
                r.index,
                r.joy,
                if r.passes { "yes" } else { "no" },
                r.alignment,
                r.text
            ));
        }
        out
    }
}
