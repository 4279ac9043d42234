use factional_core::bounds::dependent_chernoff;
use factional_core::rational::{format_rational, q};
use factional_core::sampling::concentration_experiment;
use factional_core::Q;
use num_bigint::BigInt;

use super::{decimal, Context, Outcome};
use crate::args::ValidateArgs;
use crate::error::{CliError, CliResult};
use crate::inputs::{load_graph, load_prior, rat_or};
use crate::table::Table;

fn mean_of(values: impl Iterator<Item = usize>, trials: usize, n: usize) -> Q {
    let total: usize = values.sum();
    Q::new(BigInt::from(total), BigInt::from(trials * n))
}

pub fn run(args: &ValidateArgs, ctx: &Context) -> CliResult<Outcome> {
    let prior = load_prior(&args.prior)?;
    let graph = load_graph(&args.input, ctx.seed)?;
    let state = match &args.state {
        Some(name) => prior
            .state_index(name)
            .map_err(|e| CliError::config("state", e.to_string()))?,
        None => 0,
    };
    let trials = args.trials.unwrap_or(200);
    let envelope_delta = rat_or(&args.envelope_delta, q(1, 1000));
    let report = concentration_experiment(&graph, &prior, state, trials, ctx.seed, &envelope_delta)?;
    let n = graph.n();

    let mut table = Table::new(&["quantity", "exact", "decimal"]);
    let mut push = |name: &str, exact: String, dec: String| table.push(vec![name.to_string(), exact, dec]);
    let rational = |x: &Q| (format_rational(x), decimal(x));
    let (e, d) = rational(&report.expected_fraction);
    push("expected_fraction", e, d);
    let (e, d) = rational(&report.mean_fraction);
    push("mean_fraction", e, d);
    let diff = &report.mean_fraction - &report.expected_fraction;
    let (e, d) = rational(&diff);
    push("mean_minus_expected", e, d);
    let alpha = mean_of(report.trials.iter().map(|t| t.alpha), trials, n);
    let (e, d) = rational(&alpha);
    push("alpha_fraction_mean", e, d);
    let chi = mean_of(report.trials.iter().map(|t| t.chi), trials, n);
    let (e, d) = rational(&chi);
    push("chi_fraction_mean", e, d);
    for (label, quantile) in [("deviation_q50", 0.5), ("deviation_q90", 0.9), ("deviation_q99", 0.99)] {
        push(label, String::new(), report.deviation_quantile(quantile).to_string());
    }
    let (e, d) = rational(&report.max_deviation);
    push("deviation_max", e, d);
    push("envelope", String::new(), report.envelope.to_decimal(6));
    push("chi_star_bound", report.chi_star.to_string(), report.chi_star.to_string());
    if report.max_deviation > Q::default() {
        let tail = dependent_chernoff(n, &report.max_deviation, &Q::from_integer(report.chi_star.into()))?;
        push("bound_at_max_deviation", String::new(), tail.to_scientific(6));
    }
    table.meta("state", prior.state_names()[state].clone());
    table.meta("trials", trials);
    table.meta("n", n);
    table.meta("envelope_delta", format_rational(&envelope_delta));
    table.meta("within_envelope", report.within_envelope);
    Ok(Outcome::table(table))
}
