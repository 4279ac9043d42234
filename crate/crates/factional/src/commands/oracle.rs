use factional_core::oracle::{clique_exists, clique_reduction, Equilibrium, Oracle, RevoltInstance, DEFAULT_BUDGET};
use factional_core::rational::{format_rational, q};
use serde_json::json;

use super::{decimal, Context, Outcome};
use crate::args::OracleArgs;
use crate::error::CliResult;
use crate::formats::prior_to_value;
use crate::inputs::{load_graph, load_prior, rat_or};
use crate::table::Table;

fn equilibrium_json(eq: &Equilibrium) -> serde_json::Value {
    let revolting: Vec<serde_json::Value> = eq
        .profile
        .revolting_chi()
        .map(|v| {
            json!({
                "vertex": v.vertex,
                "neighbor_types": v.neighbor_types.iter().map(|t| t.name()).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "verified": eq.verified,
        "rounds": eq.changes_per_round,
        "revolting_chi_views": revolting,
    })
}

pub fn run(args: &OracleArgs, ctx: &Context) -> CliResult<Outcome> {
    let graph = load_graph(&args.input, ctx.seed)?;
    let inst = match args.clique_reduce {
        Some(k) => {
            let mut inst = clique_reduction(&graph, k)?;
            if let Some(m) = &args.mu_star {
                inst.mu_star = m.0.clone();
            }
            if let Some(qs) = &args.q_star {
                inst.q_star = qs.0.clone();
            }
            inst
        }
        None => {
            let prior = load_prior(&args.prior)?;
            RevoltInstance {
                mu_star: rat_or(&args.mu_star, prior.mu().clone()),
                q_star: rat_or(&args.q_star, q(1, 2)),
                graph,
                prior,
            }
        }
    };
    let oracle = Oracle::with_budget(&inst.graph, &inst.prior, args.budget.unwrap_or(DEFAULT_BUDGET))?;
    let greatest = oracle.greatest_equilibrium();
    let least = oracle.least_equilibrium();
    let probability = oracle.revolt_probability(&greatest.profile, &inst.mu_star);
    let supported = probability >= inst.q_star;

    let mut table = Table::new(&["quantity", "exact", "decimal"]);
    let mut push = |name: String, x: &factional_core::Q| table.push(vec![name, format_rational(x), decimal(x)]);
    push("revolt_probability".into(), &probability);
    push("least_revolt_probability".into(), &oracle.revolt_probability(&least.profile, &inst.mu_star));
    for (s, name) in inst.prior.state_names().iter().enumerate() {
        push(format!("greatest_fraction[{name}]"), &oracle.expected_revolt_fraction(&greatest.profile, s));
        push(format!("least_fraction[{name}]"), &oracle.expected_revolt_fraction(&least.profile, s));
    }
    table.meta("supported", if supported { "YES" } else { "NO" });
    table.meta("mu_star", format_rational(&inst.mu_star));
    table.meta("q_star", format_rational(&inst.q_star));
    table.meta("n", inst.graph.n());
    table.meta("views", oracle.num_views());
    table.meta("prior", prior_to_value(&inst.prior));
    table.meta("greatest", equilibrium_json(&greatest));
    table.meta("least", equilibrium_json(&least));
    if let Some(k) = args.clique_reduce {
        table.meta("clique_exists", clique_exists(&inst.graph, k)?);
    }
    Ok(Outcome::json_table(table))
}
