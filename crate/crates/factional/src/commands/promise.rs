use factional_core::algorithms::{algorithm3_with, equilibria_map_with, PromiseInstance, PromiseOutcome, SubRun};
use factional_core::rational::{format_rational, q};
use serde_json::json;

use super::{decimal, grid, trace_json, Context, Outcome};
use crate::args::PromiseArgs;
use crate::error::{CliError, CliResult};
use crate::inputs::{load_degrees, load_prior, rat_or};
use crate::table::Table;

fn sub_run_json(run: &SubRun) -> serde_json::Value {
    let sizes: serde_json::Map<String, serde_json::Value> = run
        .report
        .sizes
        .iter()
        .map(|(s, x)| (s.to_string(), json!(format_rational(x))))
        .collect();
    json!({
        "p": format_rational(&run.p),
        "mu": format_rational(&run.mu),
        "sizes": sizes,
        "relabeled": run.report.relabeled,
        "outcome": run.outcome.symbol(),
        "trace": trace_json(&run.report.trace),
    })
}

pub fn run(args: &PromiseArgs, ctx: &Context) -> CliResult<Outcome> {
    let prior = load_prior(&args.prior)?;
    let degseq = load_degrees(&args.input, ctx.seed)?;
    let epsilon = rat_or(&args.epsilon, q(1, 200));
    let delta = rat_or(&args.delta, q(1, 200));
    let ranged = args.mu_star_from.is_some() || args.mu_star_to.is_some() || args.mu_star_step.is_some();
    let mut table = Table::new(&["mu_star", "mu_star_decimal", "outcome"]);
    table.meta("epsilon", format_rational(&epsilon));
    table.meta("delta", format_rational(&delta));
    let rows: Vec<(factional_core::Q, PromiseOutcome)> = match (&args.mu_star, ranged) {
        (Some(_), true) => return Err(CliError::config("mu_star", "give either --mu-star or a μ* range, not both")),
        (None, false) => return Err(CliError::config("mu_star", "give --mu-star or --mu-star-from/--mu-star-to/--mu-star-step")),
        (Some(mu_star), false) => {
            let inst = PromiseInstance {
                degseq,
                prior,
                mu_star: mu_star.0.clone(),
                epsilon,
                delta,
            };
            let report = algorithm3_with(&inst, args.auto_relabel)?;
            table.meta("upper", sub_run_json(&report.upper));
            table.meta("lower", sub_run_json(&report.lower));
            vec![(mu_star.0.clone(), report.outcome)]
        }
        (None, true) => {
            let need = |r: &Option<crate::args::Rat>, key: &str| {
                r.as_ref()
                    .map(|r| r.0.clone())
                    .ok_or_else(|| CliError::config(key, "μ* ranges need --mu-star-from, --mu-star-to and --mu-star-step"))
            };
            let values = grid(
                ("mu_star_from", &need(&args.mu_star_from, "mu_star_from")?),
                ("mu_star_to", &need(&args.mu_star_to, "mu_star_to")?),
                ("mu_star_step", &need(&args.mu_star_step, "mu_star_step")?),
            )?;
            equilibria_map_with(&degseq, &prior, &values, &epsilon, &delta, args.auto_relabel)?
        }
    };
    let mut first_null = None;
    for (mu_star, outcome) in &rows {
        if *outcome == PromiseOutcome::Null && first_null.is_none() {
            first_null = Some(format_rational(mu_star));
        }
        table.push(vec![format_rational(mu_star), decimal(mu_star), outcome.symbol().to_string()]);
    }
    let mut outcome = Outcome::table(table);
    if args.strict {
        outcome.status = first_null.map(CliError::PromiseNull);
    }
    Ok(outcome)
}
