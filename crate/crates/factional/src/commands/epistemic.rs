use std::path::Path;

use factional_core::epistemic::{random_grid_threshold, random_model, EpistemicModel, Event};
use factional_core::netgen::{derive_seed, rng_from_seed};
use factional_core::rational::{format_rational, q};
use serde_json::json;

use super::{Context, Outcome};
use crate::args::{EpistemicArgs, Source};
use crate::error::{read_file, CliError, CliResult};
use crate::formats::{model_to_value, parse_model};
use crate::inputs::rat_or;
use crate::table::Table;

fn names(model: &EpistemicModel, e: &Event) -> Vec<String> {
    e.iter().map(|o| model.space().outcomes()[o].clone()).collect()
}

fn load_model(source: &Option<Source>) -> CliResult<EpistemicModel> {
    match source {
        None => Err(CliError::config("model", "a model is required")),
        Some(Source::Path(path)) => parse_model(path, &read_file(Path::new(path))?),
        Some(Source::Inline(value)) => parse_model("model", &value.to_string()),
    }
}

pub fn run(args: &EpistemicArgs, ctx: &Context) -> CliResult<Outcome> {
    if args.verify_prop1 {
        return verify(args, ctx);
    }
    let model = load_model(&args.model)?;
    let p = rat_or(&args.p, q(1, 2));
    let mu = rat_or(&args.mu, q(1, 2));
    let event_text = args
        .event
        .as_ref()
        .ok_or_else(|| CliError::config("event", "give the event F as comma-separated outcomes"))?;
    let members: Vec<&str> = event_text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let f = model
        .space()
        .event(&members)
        .map_err(|e| CliError::config("event", e.to_string()))?;
    let outcomes: Vec<usize> = match &args.omega {
        Some(name) => vec![model
            .space()
            .index_of(name)
            .ok_or_else(|| CliError::config("omega", format!("unknown outcome {name:?}")))?],
        None => (0..model.space().len()).collect(),
    };
    let hierarchy = model.common_belief_hierarchy(&p, &mu, &f);
    let search = model.common_belief_search_set(&p, &mu, &f)?;
    let coalition = model.common_belief_coalition(&p, &mu, &f);
    let mut table = Table::new(&["outcome", "fixpoint", "search", "coalition"]);
    for o in outcomes {
        table.push(vec![
            model.space().outcomes()[o].clone(),
            hierarchy.result.contains(o).to_string(),
            search.contains(o).to_string(),
            coalition.contains(o).to_string(),
        ]);
    }
    let levels: Vec<Vec<String>> = hierarchy.levels.iter().map(|l| names(&model, l)).collect();
    table.meta("p", format_rational(&p));
    table.meta("mu", format_rational(&mu));
    table.meta("quota", model.quota(&mu));
    table.meta("levels", json!(levels));
    table.meta("cycle_start", hierarchy.cycle_start);
    table.meta("decreasing", hierarchy.is_decreasing());
    table.meta("model", model_to_value(&model));
    Ok(Outcome::table(table))
}

#[derive(Default)]
struct Tally {
    agree: u64,
    total: u64,
    first_disagreement: Option<serde_json::Value>,
}

impl Tally {
    fn record(&mut self, same: bool, witness: impl FnOnce() -> serde_json::Value) {
        self.total += 1;
        if same {
            self.agree += 1;
        } else if self.first_disagreement.is_none() {
            self.first_disagreement = Some(witness());
        }
    }

    fn row(&self, name: &str) -> Vec<String> {
        vec![
            name.to_string(),
            self.agree.to_string(),
            self.total.to_string(),
            format_rational(&q(self.agree as i64, self.total.max(1) as i64)),
        ]
    }
}

/// Random models with up to 6 outcomes and 3 agents, thresholds on the 1/8
/// grid; model `k` uses seed `derive_seed(seed, 1, k)`.
fn verify(args: &EpistemicArgs, ctx: &Context) -> CliResult<Outcome> {
    let count = args.models.unwrap_or(1000);
    let mut fixpoint = Tally::default();
    let mut coalition = Tally::default();
    for k in 0..count {
        let mut rng = rng_from_seed(derive_seed(ctx.seed, 1, k as u64));
        let model = random_model(&mut rng, 6, 3);
        let p = random_grid_threshold(&mut rng);
        let mu = random_grid_threshold(&mut rng);
        let n = model.space().len();
        let table = model.common_belief_search_all(&p, &mu)?;
        for (mask, searched) in table.iter().enumerate() {
            let f = Event::from_mask(n, mask as u64);
            let fix = model.common_belief_fixpoint(&p, &mu, &f);
            let coal = model.common_belief_coalition(&p, &mu, &f);
            for o in 0..n {
                let witness = || {
                    json!({
                        "model_index": k,
                        "p": format_rational(&p),
                        "mu": format_rational(&mu),
                        "event": names(&model, &f),
                        "omega": model.space().outcomes()[o],
                        "model": model_to_value(&model),
                    })
                };
                fixpoint.record(fix.contains(o) == searched.contains(o), witness);
                coalition.record(coal.contains(o) == searched.contains(o), witness);
            }
        }
    }
    let mut table = Table::new(&["comparison", "agree", "total", "rate"]);
    table.push(fixpoint.row("fixpoint_vs_search"));
    table.push(coalition.row("coalition_vs_search"));
    table.meta("models", count);
    if let Some(w) = fixpoint.first_disagreement {
        table.meta("fixpoint_counterexample", w);
    }
    if let Some(w) = coalition.first_disagreement {
        table.meta("coalition_counterexample", w);
    }
    Ok(Outcome::table(table))
}
