use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::PolicyTrace;
use crate::dialog::Mode;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub runs: usize,
    pub mean: f64,
    /// Sample standard deviation; zero for a single run.
    pub sd: f64,
    /// Mean of the two middle values for an even count.
    pub median: f64,
}

pub fn summarize(values: &[u64]) -> Option<Stats> {
    if values.is_empty() {
        return None;
    }
    let n = values.len();
    let mean = values.iter().map(|&v| v as f64).sum::<f64>() / n as f64;
    let sd = if n > 1 {
        let ss: f64 = values.iter().map(|&v| (v as f64 - mean) * (v as f64 - mean)).sum();
        libm::sqrt(ss / (n - 1) as f64)
    } else {
        0.0
    };
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let median = if n % 2 == 1 {
        sorted[n / 2] as f64
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) as f64 / 2.0
    };
    Some(Stats { runs: n, mean, sd, median })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellStats {
    pub scenario: String,
    pub mode: Mode,
    pub commands: Stats,
}

/// Command-count statistics per `(scenario, mode)`, in order of first
/// appearance.
pub fn aggregate(traces: &[PolicyTrace]) -> Vec<CellStats> {
    let mut cells: Vec<(String, Mode, Vec<u64>)> = Vec::new();
    for t in traces {
        match cells.iter_mut().find(|(s, m, _)| *s == t.scenario && *m == t.mode) {
            Some(cell) => cell.2.push(t.command_count),
            None => cells.push((t.scenario.clone(), t.mode, alloc::vec![t.command_count])),
        }
    }
    cells
        .into_iter()
        .filter_map(|(scenario, mode, v)| {
            summarize(&v).map(|commands| CellStats { scenario, mode, commands })
        })
        .collect()
}
