use super::{Body, Context, Outcome};
use crate::args::{FamilyName, GenArgs, GenOutput};
use crate::error::{CliError, CliResult};
use crate::formats::{write_degrees, write_edge_list};
use crate::inputs::{load_degrees, load_graph};

pub fn run(args: &GenArgs, ctx: &Context) -> CliResult<Outcome> {
    let family = args
        .input
        .family
        .ok_or_else(|| CliError::config("family", "gen needs --family"))?;
    let emit = args.emit.unwrap_or(match family {
        FamilyName::Constant | FamilyName::Powerlaw => GenOutput::Degrees,
        _ => GenOutput::Edges,
    });
    let text = match emit {
        GenOutput::Degrees => write_degrees(&load_degrees(&args.input, ctx.seed)?),
        GenOutput::Edges => write_edge_list(&load_graph(&args.input, ctx.seed)?),
    };
    Ok(Outcome {
        body: Body::Text(text),
        status: None,
    })
}
