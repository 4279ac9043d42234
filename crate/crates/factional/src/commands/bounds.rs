use factional_core::bounds::{bounds_table, dependency_chi_star_bound, separation_check, BoundReport, BoundsQuery};
use factional_core::rational::{format_rational, q};
use serde_json::json;

use super::{Context, Outcome};
use crate::args::BoundsArgs;
use crate::error::{CliError, CliResult};
use crate::inputs::{load_degrees, load_prior, rat_or};
use crate::table::Table;

/// Significant digits for irrational bound values.
const SIGNIFICANT: usize = 16;

fn row(r: &BoundReport) -> Vec<String> {
    let inputs = r
        .inputs
        .iter()
        .map(|(k, v)| format!("{k}={}", format_rational(v)))
        .collect::<Vec<_>>()
        .join(";");
    vec![
        r.name.clone(),
        r.value.exact().unwrap_or_default(),
        r.value.to_scientific(SIGNIFICANT),
        r.raw.to_scientific(SIGNIFICANT),
        r.vacuous.to_string(),
        inputs,
        r.basis.clone(),
    ]
}

pub fn run(args: &BoundsArgs, ctx: &Context) -> CliResult<Outcome> {
    let prior = load_prior(&args.prior)?;
    let degseq = load_degrees(&args.input, ctx.seed)?;
    let high_degree = match (&args.epsilon0, &args.cutoff_c) {
        (Some(e), Some(c)) => Some((e.0.clone(), c.0.clone())),
        (None, None) => None,
        _ => return Err(CliError::config("epsilon0", "--epsilon0 and --cutoff-c go together")),
    };
    let query = BoundsQuery {
        prior: &prior,
        degseq: &degseq,
        epsilon: rat_or(&args.epsilon, q(1, 10)),
        high_degree: high_degree.clone(),
    };
    let reports = bounds_table(&query)?;
    let mut table = Table::new(&["name", "value_exact", "value", "raw", "vacuous", "inputs", "basis"]);
    for r in &reports {
        table.push(row(r));
    }
    table.meta("n", degseq.len());
    table.meta("chi_star_bound", dependency_chi_star_bound(&degseq));
    if let Some((epsilon0, c)) = high_degree {
        let sep = separation_check(&prior, &epsilon0, &c, degseq.len())?;
        table.meta(
            "separation",
            json!({
                "gap": format_rational(&sep.gap),
                "required": format_rational(&sep.required),
                "expectation_gap": sep.expectation_gap.to_scientific(SIGNIFICANT),
                "required_gap": sep.required_gap.to_scientific(SIGNIFICANT),
                "admissible": sep.admissible,
            }),
        );
    }
    Ok(Outcome::table(table))
}
