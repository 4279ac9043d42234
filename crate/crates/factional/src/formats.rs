//! Text formats: priors and epistemic models as JSON, degree files, edge lists.
//!
//! Rationals are always strings of the form `"num/den"`, `"n"` or a
//! terminating decimal; writers emit `"num/den"`.

use factional_core::epistemic::{AgentPartition, EpistemicModel, Event, FiniteProbSpace};
use factional_core::graph::{ConcreteGraph, DegreeSequence};
use factional_core::model::{AgentType, Prior, StateSpec, TypeDistribution};
use factional_core::rational::{format_rational, parse_rational};
use factional_core::Q;
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

pub fn rational_at(origin: &str, key: &str, text: &str) -> CliResult<Q> {
    parse_rational(text).map_err(|e| CliError::parse(origin, format!("{key}: {e}")))
}

/// A rational written either as a JSON string or a JSON number.
fn rational_value(origin: &str, key: &str, v: &Value) -> CliResult<Q> {
    match v {
        Value::String(s) => rational_at(origin, key, s),
        Value::Number(n) => rational_at(origin, key, &n.to_string()),
        other => Err(CliError::parse(origin, format!("{key}: expected a rational, found {other}"))),
    }
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct PriorDoc {
    p: Value,
    mu: Value,
    states: IndexMap<String, StateDoc>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct StateDoc {
    prob: Value,
    types: IndexMap<String, Value>,
}

/// Reads a prior document; state order is the order of the `states` keys.
pub fn prior_from_value(origin: &str, value: &Value) -> CliResult<Prior> {
    let doc: PriorDoc =
        serde_json::from_value(value.clone()).map_err(|e| CliError::parse(origin, format!("prior: {e}")))?;
    let p = rational_value(origin, "p", &doc.p)?;
    let mu = rational_value(origin, "mu", &doc.mu)?;
    let mut states = Vec::with_capacity(doc.states.len());
    for (name, state) in &doc.states {
        let key = format!("states.{name}");
        let prob = rational_value(origin, &format!("{key}.prob"), &state.prob)?;
        let mut mass = [Q::default(), Q::default(), Q::default()];
        let mut seen = [false; 3];
        for (tname, v) in &state.types {
            let t = AgentType::parse(tname)
                .ok_or_else(|| CliError::parse(origin, format!("{key}.types: unknown type {tname:?}")))?;
            mass[t.index()] = rational_value(origin, &format!("{key}.types.{tname}"), v)?;
            seen[t.index()] = true;
        }
        if let Some(missing) = AgentType::ALL.iter().find(|t| !seen[t.index()]) {
            return Err(CliError::parse(origin, format!("{key}.types: missing {}", missing.name())));
        }
        let [alpha, chi, nu] = mass;
        let types = TypeDistribution::new(alpha, chi, nu)
            .map_err(|e| CliError::parse(origin, format!("{key}.types: {e}")))?;
        states.push(StateSpec {
            name: name.clone(),
            prob,
            types,
        });
    }
    Prior::new(p, mu, states).map_err(|e| CliError::parse(origin, e.to_string()))
}

pub fn parse_prior(origin: &str, text: &str) -> CliResult<Prior> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::parse(origin, e.to_string()))?;
    prior_from_value(origin, &value)
}

pub fn prior_to_value(prior: &Prior) -> Value {
    let mut states = serde_json::Map::new();
    for s in prior.states() {
        let mut types = serde_json::Map::new();
        for t in AgentType::ALL {
            types.insert(t.name().to_string(), Value::String(format_rational(s.types.prob(t))));
        }
        states.insert(
            s.name.clone(),
            serde_json::json!({ "prob": format_rational(&s.prob), "types": types }),
        );
    }
    serde_json::json!({
        "p": format_rational(prior.p()),
        "mu": format_rational(prior.mu()),
        "states": states,
    })
}

/// One degree per line, or `count x degree`. Blank lines and `#` comments
/// are ignored.
pub fn parse_degrees(origin: &str, text: &str) -> CliResult<DegreeSequence> {
    let mut degrees = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| CliError::parse(format!("{origin}:{}", i + 1), msg);
        let int = |s: &str, what: &str| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| at(format!("{what} {:?} is not a nonnegative integer", s.trim())))
        };
        match line.split_once(['x', 'X']) {
            Some((count, degree)) => {
                let count = int(count, "count")?;
                let degree = int(degree, "degree")?;
                degrees.extend(std::iter::repeat_n(degree, count as usize));
            }
            None => degrees.push(int(line, "degree")?),
        }
    }
    if degrees.is_empty() {
        return Err(CliError::parse(origin, "no degrees found"));
    }
    DegreeSequence::new(degrees).map_err(|e| CliError::parse(origin, e.to_string()))
}

/// Run-length form, degrees ascending.
pub fn write_degrees(degseq: &DegreeSequence) -> String {
    degseq
        .histogram()
        .iter()
        .map(|(d, c)| format!("{c} x {d}\n"))
        .collect()
}

/// `u v` per line, 0-indexed; an optional `# n=N` line fixes the vertex count
/// (otherwise it is one more than the largest endpoint).
pub fn parse_edge_list(origin: &str, text: &str) -> CliResult<ConcreteGraph> {
    let mut declared: Option<usize> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let at = |msg: String| CliError::parse(format!("{origin}:{}", i + 1), msg);
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(n) = comment.trim().strip_prefix("n=") {
                declared = Some(n.trim().parse().map_err(|_| at(format!("bad vertex count {n:?}")))?);
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let parts: Vec<&str> = trimmed.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(at(format!("expected `u v`, found {trimmed:?}")));
        }
        let end = |s: &str| s.parse::<usize>().map_err(|_| at(format!("vertex {s:?} is not a nonnegative integer")));
        edges.push((end(parts[0])?, end(parts[1])?));
    }
    let implied = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    let n = match declared {
        Some(n) if n < implied => return Err(CliError::parse(origin, format!("edge endpoint {} exceeds n={n}", implied - 1))),
        Some(n) => n,
        None => implied,
    };
    if n == 0 {
        return Err(CliError::parse(origin, "graph has no vertices"));
    }
    ConcreteGraph::from_edges(n, &edges).map_err(|e| CliError::parse(origin, e.to_string()))
}

pub fn write_edge_list(graph: &ConcreteGraph) -> String {
    let mut out = format!("# n={}\n", graph.n());
    for (u, v) in graph.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    outcomes: Vec<String>,
    prob: IndexMap<String, Value>,
    partitions: IndexMap<String, Vec<Vec<String>>>,
}

/// Epistemic model: `outcomes`, `prob` (outcome → rational) and `partitions`
/// (agent → list of cells).
pub fn parse_model(origin: &str, text: &str) -> CliResult<EpistemicModel> {
    let doc: ModelDoc = serde_json::from_str(text).map_err(|e| CliError::parse(origin, e.to_string()))?;
    let mut probs = Vec::with_capacity(doc.outcomes.len());
    for o in &doc.outcomes {
        let v = doc
            .prob
            .get(o)
            .ok_or_else(|| CliError::parse(origin, format!("prob: missing outcome {o:?}")))?;
        probs.push(rational_value(origin, &format!("prob.{o}"), v)?);
    }
    if let Some(extra) = doc.prob.keys().find(|k| !doc.outcomes.contains(k)) {
        return Err(CliError::parse(origin, format!("prob: unknown outcome {extra:?}")));
    }
    let space = FiniteProbSpace::new(doc.outcomes.clone(), probs).map_err(|e| CliError::parse(origin, e.to_string()))?;
    let mut agents = Vec::new();
    let mut partitions = Vec::new();
    for (agent, cells) in &doc.partitions {
        let events = cells
            .iter()
            .map(|cell| {
                let names: Vec<&str> = cell.iter().map(String::as_str).collect();
                space
                    .event(&names)
                    .map_err(|e| CliError::parse(origin, format!("partitions.{agent}: {e}")))
            })
            .collect::<CliResult<Vec<Event>>>()?;
        let partition = AgentPartition::new(space.len(), events)
            .map_err(|e| CliError::parse(origin, format!("partitions.{agent}: {e}")))?;
        agents.push(agent.clone());
        partitions.push(partition);
    }
    EpistemicModel::new(space, agents, partitions).map_err(|e| CliError::parse(origin, e.to_string()))
}

pub fn model_to_value(model: &EpistemicModel) -> Value {
    let space = model.space();
    let prob: serde_json::Map<String, Value> = (0..space.len())
        .map(|i| (space.outcomes()[i].clone(), Value::String(format_rational(space.prob(i)))))
        .collect();
    let partitions: serde_json::Map<String, Value> = model
        .agents()
        .iter()
        .enumerate()
        .map(|(a, name)| {
            let cells: Vec<Vec<String>> = model
                .partition(a)
                .cells()
                .iter()
                .map(|c| c.iter().map(|o| space.outcomes()[o].clone()).collect())
                .collect();
            (name.clone(), serde_json::json!(cells))
        })
        .collect();
    serde_json::json!({ "outcomes": space.outcomes(), "prob": prob, "partitions": partitions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use factional_core::rational::q;

    const MOTIVATING: &str = r#"{"p": "2/5", "mu": "1/2", "states": {
        "A": {"prob": "1/2", "types": {"alpha": "0", "chi": "4/5", "nu": "1/5"}},
        "B": {"prob": "1/2", "types": {"alpha": "0", "chi": "1/5", "nu": "4/5"}}}}"#;

    #[test]
    fn prior_round_trip() {
        let prior = parse_prior("inline", MOTIVATING).unwrap();
        assert_eq!(prior.state_names(), ["A", "B"]);
        assert_eq!(prior.type_prob(0, AgentType::Chi), &q(4, 5));
        let again = prior_from_value("again", &prior_to_value(&prior)).unwrap();
        assert_eq!(again, prior);
    }

    #[test]
    fn prior_errors_name_the_key() {
        let bad = MOTIVATING.replace("\"4/5\", \"nu\": \"1/5\"", "\"4/0\", \"nu\": \"1/5\"");
        let err = parse_prior("p.json", &bad).unwrap_err().to_string();
        assert!(err.contains("states.A.types.chi"), "{err}");
        let missing = MOTIVATING.replace(", \"nu\": \"4/5\"", "");
        assert!(parse_prior("p.json", &missing).unwrap_err().to_string().contains("missing nu"));
    }

    #[test]
    fn numbers_are_accepted_as_rationals() {
        let prior = parse_prior("x", &MOTIVATING.replace("\"2/5\"", "0.4")).unwrap();
        assert_eq!(prior.p(), &q(2, 5));
    }

    #[test]
    fn degree_file_forms() {
        let d = parse_degrees("d", "# header\n3\n2 x 4\n\n1x0\n").unwrap();
        assert_eq!(d.degrees(), &[3, 4, 4, 0]);
        let err = parse_degrees("deg.txt", "1\nfoo\n").unwrap_err().to_string();
        assert!(err.starts_with("deg.txt:2"), "{err}");
        assert!(parse_degrees("empty", "\n# nothing\n").is_err());
        assert_eq!(parse_degrees("rt", &write_degrees(&d)).unwrap().histogram(), d.histogram());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = parse_edge_list("g", "# n=5\n0 1\n1 2\n").unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edge_count(), 2);
        let again = parse_edge_list("again", &write_edge_list(&g)).unwrap();
        assert_eq!(again.edges(), g.edges());
        assert!(parse_edge_list("bad", "0 0\n").is_err());
        assert!(parse_edge_list("bad", "# n=2\n0 3\n").is_err());
    }

    #[test]
    fn model_round_trip() {
        let text = r#"{"outcomes": ["1","2","3"], "prob": {"1": "1/2", "2": "1/4", "3": "1/4"},
            "partitions": {"ann": [["1","2"],["3"]], "bob": [["1","2","3"]]}}"#;
        let model = parse_model("m", text).unwrap();
        assert_eq!(model.agents(), ["ann", "bob"]);
        let again = parse_model("again", &model_to_value(&model).to_string()).unwrap();
        assert_eq!(model_to_value(&again), model_to_value(&model));
        assert!(parse_model("m", &text.replace("\"3\": \"1/4\"", "\"3\": \"1/3\"")).is_err());
    }
}
