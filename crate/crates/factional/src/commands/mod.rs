pub mod analyze;
pub mod bounds;
pub mod epistemic;
pub mod gen;
pub mod oracle;
pub mod promise;
pub mod sweep;
pub mod validate;

use factional_core::algorithms::{Algorithm1Report, Branch, DecisionTrace, RevoltSizes};
use factional_core::rational::{format_rational, to_decimal};
use factional_core::Q;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::table::{Format, Table};

/// Digits after the point in every decimal column.
pub const DECIMAL_DIGITS: usize = 10;

/// Settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Context {
    pub seed: u64,
    pub jobs: Option<usize>,
}

pub enum Body {
    Table { table: Table, default_format: Format },
    Text(String),
}

/// What a command produced, plus a failure to report after writing it.
pub struct Outcome {
    pub body: Body,
    pub status: Option<CliError>,
}

impl Outcome {
    pub fn table(table: Table) -> Self {
        Outcome {
            body: Body::Table {
                table,
                default_format: Format::Csv,
            },
            status: None,
        }
    }

    pub fn json_table(table: Table) -> Self {
        Outcome {
            body: Body::Table {
                table,
                default_format: Format::Json,
            },
            status: None,
        }
    }
}

/// Fixed-point decimal with trailing zeros removed.
pub fn decimal(x: &Q) -> String {
    let s = to_decimal(x, DECIMAL_DIGITS);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn sizes_table(sizes: &RevoltSizes) -> Table {
    let mut table = Table::new(&["state", "X_exact", "X_decimal"]);
    for (state, x) in sizes.iter() {
        table.push(vec![state.to_string(), format_rational(x), decimal(x)]);
    }
    table
}

pub fn branch_name(branch: Branch) -> &'static str {
    match branch {
        Branch::NoCandidateStates => "no-candidate-states",
        Branch::AllCandidateStates => "all-candidate-states",
        Branch::FirstOnly { gate: true } => "first-only-gate-passed",
        Branch::FirstOnly { gate: false } => "first-only-gate-failed",
    }
}

pub fn trace_json(trace: &DecisionTrace) -> Value {
    let comparisons: Vec<Value> = trace
        .comparisons
        .iter()
        .map(|c| json!({ "quantity": c.quantity, "value": format_rational(&c.value), "against": c.against.name() }))
        .collect();
    json!({ "branch": branch_name(trace.branch), "comparisons": comparisons })
}

pub fn report_meta(table: &mut Table, report: &Algorithm1Report) {
    table.meta("relabeled", report.relabeled);
    table.meta("trace", trace_json(&report.trace));
}

/// `from, from + step, …` up to and including `to`; each bound is paired
/// with its config key for error messages.
pub fn grid(from: (&str, &Q), to: (&str, &Q), step: (&str, &Q)) -> Result<Vec<Q>, CliError> {
    if step.1 <= &Q::default() {
        return Err(CliError::config(step.0, "must be positive"));
    }
    if from.1 > to.1 {
        return Err(CliError::config(from.0, "range is empty"));
    }
    let mut values = Vec::new();
    let mut x = from.1.clone();
    while &x <= to.1 {
        values.push(x.clone());
        x += step.1;
        if values.len() > 1_000_000 {
            return Err(CliError::config(step.0, "grid has more than a million points"));
        }
    }
    Ok(values)
}
