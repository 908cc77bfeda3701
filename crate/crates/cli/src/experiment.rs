//! CSV emission for multi-scale discretization runs.
//!
//! Output layout: one `# {json}` metadata line, a fixed header, then one
//! line per scale. Formatting goes through the standard float display,
//! so identical inputs yield byte-identical files.

use std::fmt::Write as _;

use serde_json::Value;
use sepgraph_core::{ExperimentRow, ExtendedCount};

pub const EXPERIMENT_HEADER: &str = "r,width,sr_over_r,cut_over_r";

fn width_cell(width: ExtendedCount) -> String {
    match width {
        ExtendedCount::Finite(k) => k.to_string(),
        ExtendedCount::Infinite => "inf".to_string(),
    }
}

pub fn experiment_csv(metadata: &Value, rows: &[ExperimentRow]) -> String {
    let mut out = String::new();
    writeln!(out, "# {metadata}").expect("writing to a string cannot fail");
    writeln!(out, "{EXPERIMENT_HEADER}").expect("writing to a string cannot fail");
    for row in rows {
        writeln!(
            out,
            "{},{},{},{}",
            row.r,
            width_cell(row.width),
            row.sr_over_r,
            row.cut_over_r
        )
        .expect("writing to a string cannot fail");
    }
    out
}
