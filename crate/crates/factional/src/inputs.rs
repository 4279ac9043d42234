//! Turning prior and graph options into core values.

use std::path::Path;

use factional_core::graph::{ConcreteGraph, DegreeSequence};
use factional_core::model::Prior;
use factional_core::netgen::{realize_graph, torus_grid, Family, GenSpec};
use factional_core::Q;
use num_traits::ToPrimitive;
use serde_json::Value;

use crate::args::{FamilyName, GraphInput, PriorInput, Rat, Source};
use crate::error::{read_file, CliError, CliResult};
use crate::formats::{parse_degrees, parse_edge_list, parse_prior, prior_from_value};

pub fn load_prior(input: &PriorInput) -> CliResult<Prior> {
    let prior = match &input.prior {
        None => return Err(CliError::config("prior", "a prior is required")),
        Some(Source::Path(path)) => parse_prior(path, &read_file(Path::new(path))?)?,
        Some(Source::Inline(value)) => prior_from_value("prior", value)?,
    };
    if input.p.is_none() && input.mu.is_none() {
        return Ok(prior);
    }
    let p = input.p.as_ref().map_or_else(|| prior.p().clone(), |r| r.0.clone());
    let mu = input.mu.as_ref().map_or_else(|| prior.mu().clone(), |r| r.0.clone());
    prior
        .with_thresholds(p, mu)
        .map_err(|e| CliError::config("p/mu", e.to_string()))
}

fn integer_param(key: &str, r: &Q) -> CliResult<u64> {
    if !r.is_integer() {
        return Err(CliError::config(key, "must be an integer"));
    }
    r.to_integer()
        .to_u64()
        .ok_or_else(|| CliError::config(key, "must be a nonnegative integer"))
}

/// The generator family for `name` at parameter `param`.
pub fn family(name: FamilyName, param: &Q) -> CliResult<Family> {
    Ok(match name {
        FamilyName::Constant => Family::Constant {
            d: integer_param("param", param)? as u32,
        },
        FamilyName::Powerlaw => Family::PowerLaw { gamma: param.clone() },
        FamilyName::Ba => Family::BarabasiAlbert {
            m: integer_param("param", param)? as usize,
        },
        FamilyName::Er => Family::ErdosRenyi { p_edge: param.clone() },
        FamilyName::Torus => return Err(CliError::config("family", "torus has no scalar parameter")),
    })
}

fn require<'a, T>(value: &'a Option<T>, key: &str, why: &str) -> CliResult<&'a T> {
    value.as_ref().ok_or_else(|| CliError::config(key, why))
}

fn gen_spec(input: &GraphInput, name: FamilyName, seed: u64) -> CliResult<GenSpec> {
    let n = *require(&input.n, "n", "generated inputs need --n")?;
    let param = &require(&input.param, "param", "generated inputs need --param")?.0;
    Ok(GenSpec {
        family: family(name, param)?,
        n,
        seed,
    })
}

fn torus(input: &GraphInput) -> CliResult<ConcreteGraph> {
    let rows = *require(&input.rows, "rows", "torus needs --rows and --cols")?;
    let cols = *require(&input.cols, "cols", "torus needs --rows and --cols")?;
    Ok(torus_grid(rows, cols)?)
}

fn read_source(key: &str, source: &Source) -> CliResult<(String, String)> {
    match source {
        Source::Path(path) => Ok((path.clone(), read_file(Path::new(path))?)),
        Source::Inline(Value::String(s)) => Ok((key.to_string(), s.clone())),
        Source::Inline(Value::Array(items)) => {
            let lines: Vec<String> = items.iter().map(|v| v.to_string().trim_matches('"').to_string()).collect();
            Ok((key.to_string(), lines.join("\n")))
        }
        Source::Inline(other) => Err(CliError::config(key, format!("expected a path or a list, found {other}"))),
    }
}

fn exactly_one(input: &GraphInput) -> CliResult<()> {
    let given = [input.degrees.is_some(), input.graph.is_some(), input.family.is_some()]
        .iter()
        .filter(|&&b| b)
        .count();
    match given {
        1 => Ok(()),
        0 => Err(CliError::config("degrees", "give one of --degrees, --graph or --family")),
        _ => Err(CliError::config("degrees", "--degrees, --graph and --family are mutually exclusive")),
    }
}

/// Degree sequence from a file, an edge list or a generator.
pub fn load_degrees(input: &GraphInput, seed: u64) -> CliResult<DegreeSequence> {
    exactly_one(input)?;
    if let Some(src) = &input.degrees {
        let (origin, text) = read_source("degrees", src)?;
        return parse_degrees(&origin, &text);
    }
    if let Some(src) = &input.graph {
        let (origin, text) = read_source("graph", src)?;
        return Ok(parse_edge_list(&origin, &text)?.degree_sequence()?);
    }
    let name = input.family.expect("checked above");
    if name == FamilyName::Torus {
        return Ok(torus(input)?.degree_sequence()?);
    }
    Ok(gen_spec(input, name, seed)?.sequence()?)
}

/// Concrete graph from an edge list, a generator, or a realized degree file.
pub fn load_graph(input: &GraphInput, seed: u64) -> CliResult<ConcreteGraph> {
    exactly_one(input)?;
    if let Some(src) = &input.graph {
        let (origin, text) = read_source("graph", src)?;
        return parse_edge_list(&origin, &text);
    }
    if let Some(src) = &input.degrees {
        let (origin, text) = read_source("degrees", src)?;
        return Ok(realize_graph(&parse_degrees(&origin, &text)?, seed)?);
    }
    let name = input.family.expect("checked above");
    if name == FamilyName::Torus {
        return torus(input);
    }
    Ok(gen_spec(input, name, seed)?.graph()?)
}

pub fn rat_or(value: &Option<Rat>, default: Q) -> Q {
    value.as_ref().map_or(default, |r| r.0.clone())
}
