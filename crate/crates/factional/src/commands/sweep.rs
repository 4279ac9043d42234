//! Revolt sizes averaged over random graphs along one axis.
//!
//! Seeds: sweeping the generator parameter, value `i` trial `t` draws its
//! graph from `derive_seed(seed, i, t)`. Sweeping p or μ, trial `t` uses
//! `derive_seed(seed, 0, t)` for every value, so all values see the same
//! graphs. The constant family is deterministic and runs once per value.

use factional_core::algorithms::Evaluator;
use factional_core::model::Prior;
use factional_core::netgen::{derive_seed, GenSpec};
use factional_core::rational::{format_rational, is_probability, to_f64};
use factional_core::Q;
use num_bigint::BigInt;
use rayon::prelude::*;

use super::{decimal, grid, Context, Outcome};
use crate::args::{Axis, FamilyName, Rat, SweepArgs};
use crate::error::{CliError, CliResult};
use crate::inputs::{family, load_prior};
use crate::table::Table;

/// One Algorithm 1 run: sizes in prior order and whether it relabeled, or
/// the reason it failed.
type Run = Result<(Vec<Q>, bool), String>;

fn required<'a>(value: &'a Option<Rat>, key: &str) -> CliResult<&'a Q> {
    value
        .as_ref()
        .map(|r| &r.0)
        .ok_or_else(|| CliError::config(key, format!("sweeps need --{key}")))
}

fn spec(name: FamilyName, param: &Q, n: usize, seed: u64) -> CliResult<GenSpec> {
    Ok(GenSpec {
        family: family(name, param)?,
        n,
        seed,
    })
}

fn evaluate(eval: &mut Evaluator, p: &Q, mu: &Q) -> Run {
    eval.algorithm1_auto_relabel(p, mu)
        .map(|r| (r.sizes.x, r.relabeled))
        .map_err(|e| e.to_string())
}

fn generate(spec: &GenSpec, param: &Q) -> CliResult<factional_core::graph::DegreeSequence> {
    spec.sequence()
        .map_err(|e| CliError::config("param", format!("at {}: {e}", format_rational(param))))
}

fn pool(ctx: &Context) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(ctx.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::config("jobs", e.to_string()))
}

struct Summary {
    mean: Vec<Q>,
    stddev: Vec<f64>,
    runs: usize,
    relabeled: usize,
    failed: usize,
}

fn summarize(runs: &[Run], states: usize) -> Summary {
    let ok: Vec<&(Vec<Q>, bool)> = runs.iter().filter_map(|r| r.as_ref().ok()).collect();
    let k = ok.len();
    let mut mean = vec![Q::default(); states];
    let mut stddev = vec![0.0; states];
    if k > 0 {
        for s in 0..states {
            let total: Q = ok.iter().map(|(x, _)| &x[s]).sum();
            mean[s] = total / Q::from_integer(BigInt::from(k));
            if k > 1 {
                let ss: Q = ok
                    .iter()
                    .map(|(x, _)| {
                        let d = &x[s] - &mean[s];
                        &d * &d
                    })
                    .sum();
                stddev[s] = to_f64(&(ss / Q::from_integer(BigInt::from(k - 1)))).sqrt();
            }
        }
    }
    Summary {
        mean,
        stddev,
        runs: runs.len(),
        relabeled: ok.iter().filter(|(_, r)| *r).count(),
        failed: runs.len() - k,
    }
}

fn param_axis(prior: &Prior, name: FamilyName, values: &[Q], n: usize, trials: usize, ctx: &Context) -> CliResult<Vec<Vec<Run>>> {
    let jobs: Vec<(usize, usize)> = (0..values.len()).flat_map(|i| (0..trials).map(move |t| (i, t))).collect();
    let runs: Vec<CliResult<Run>> = pool(ctx)?.install(|| {
        jobs.par_iter()
            .map(|&(i, t)| {
                let seed = derive_seed(ctx.seed, i as u64, t as u64);
                let degseq = generate(&spec(name, &values[i], n, seed)?, &values[i])?;
                Ok(evaluate(&mut Evaluator::new(prior, &degseq), prior.p(), prior.mu()))
            })
            .collect()
    });
    let mut out: Vec<Vec<Run>> = (0..values.len()).map(|_| Vec::with_capacity(trials)).collect();
    for (&(i, _), run) in jobs.iter().zip(runs) {
        out[i].push(run?);
    }
    Ok(out)
}

fn threshold_axis(
    prior: &Prior,
    axis: Axis,
    gen: (FamilyName, &Q),
    values: &[Q],
    n: usize,
    trials: usize,
    ctx: &Context,
) -> CliResult<Vec<Vec<Run>>> {
    let (name, param) = gen;
    let spec_for = |t: usize| spec(name, param, n, derive_seed(ctx.seed, 0, t as u64));
    spec_for(0)?;
    let per_trial: Vec<CliResult<Vec<Run>>> = pool(ctx)?.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|t| {
                let degseq = generate(&spec_for(t)?, param)?;
                let mut eval = Evaluator::new(prior, &degseq);
                Ok(values
                    .iter()
                    .map(|v| match axis {
                        Axis::P => evaluate(&mut eval, v, prior.mu()),
                        _ => evaluate(&mut eval, prior.p(), v),
                    })
                    .collect())
            })
            .collect()
    });
    let mut out: Vec<Vec<Run>> = (0..values.len()).map(|_| Vec::with_capacity(trials)).collect();
    for trial in per_trial {
        for (i, run) in trial?.into_iter().enumerate() {
            out[i].push(run);
        }
    }
    Ok(out)
}

pub fn run(args: &SweepArgs, ctx: &Context) -> CliResult<Outcome> {
    let prior = load_prior(&args.prior)?;
    let name = args
        .family
        .ok_or_else(|| CliError::config("family", "sweeps need --family"))?;
    if name == FamilyName::Torus {
        return Err(CliError::config("family", "torus has no scalar parameter to sweep"));
    }
    let axis = args.axis.unwrap_or(Axis::Param);
    let values = grid(
        ("from", required(&args.from, "from")?),
        ("to", required(&args.to, "to")?),
        ("step", required(&args.step, "step")?),
    )?;
    let n = args.n.unwrap_or(1000);
    let trials = if name == FamilyName::Constant {
        1
    } else {
        args.trials.unwrap_or(100)
    };
    if trials == 0 {
        return Err(CliError::config("trials", "must be at least 1"));
    }
    let runs = match axis {
        Axis::Param => param_axis(&prior, name, &values, n, trials, ctx)?,
        Axis::P | Axis::Mu => {
            let key = if axis == Axis::P { "from" } else { "to" };
            if let Some(bad) = values.iter().find(|v| !is_probability(v)) {
                return Err(CliError::config(key, format!("{} is outside [0, 1]", format_rational(bad))));
            }
            let param = required(&args.param, "param")?;
            threshold_axis(&prior, axis, (name, param), &values, n, trials, ctx)?
        }
    };

    let states = prior.state_names();
    let mut columns = vec!["param".to_string(), "param_decimal".to_string()];
    for s in &states {
        columns.push(format!("X_{s}_mean_exact"));
        columns.push(format!("X_{s}_mean_decimal"));
        columns.push(format!("X_{s}_stddev"));
    }
    columns.extend(["runs", "relabeled", "failed"].map(String::from));
    let mut table = Table::new(&columns.iter().map(String::as_str).collect::<Vec<_>>());
    let mut first_failure = None;
    for (value, runs) in values.iter().zip(&runs) {
        if first_failure.is_none() {
            first_failure = runs.iter().find_map(|r| r.as_ref().err().cloned());
        }
        let summary = summarize(runs, states.len());
        let mut row = vec![format_rational(value), decimal(value)];
        for s in 0..states.len() {
            row.push(format_rational(&summary.mean[s]));
            row.push(decimal(&summary.mean[s]));
            row.push(format!("{:.10}", summary.stddev[s]));
        }
        row.extend([summary.runs, summary.relabeled, summary.failed].map(|c| c.to_string()));
        table.push(row);
    }
    table.meta("family", format!("{name:?}").to_lowercase());
    table.meta("axis", format!("{axis:?}").to_lowercase());
    table.meta("n", n);
    table.meta("trials", trials);
    table.meta("seed", ctx.seed);
    if let Some(param) = &args.param {
        table.meta("param", format_rational(&param.0));
    }
    if let Some(reason) = first_failure {
        table.meta("first_failure", reason);
    }
    Ok(Outcome::table(table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use factional_core::rational::q;

    #[test]
    fn summary_skips_failures() {
        let runs: Vec<Run> = vec![
            Ok((vec![q(1, 2)], false)),
            Ok((vec![q(1, 1)], true)),
            Err("mislabeled".into()),
        ];
        let s = summarize(&runs, 1);
        assert_eq!(s.mean, vec![q(3, 4)]);
        assert!((s.stddev[0] - (0.125f64).sqrt()).abs() < 1e-12);
        assert_eq!((s.runs, s.relabeled, s.failed), (3, 1, 1));
    }
}
