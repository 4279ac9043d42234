use factional_core::algorithms::{
    algorithm1_auto_relabel, algorithm1_general_with, algorithm1_multistate_with, algorithm1_report, smallest_revolt,
    RemovalOrder,
};
use factional_core::rational::{format_rational, q};
use factional_core::Q;
use num_traits::Zero;

use super::{report_meta, sizes_table, Context, Outcome};
use crate::args::AnalyzeArgs;
use crate::error::{CliError, CliResult};
use crate::inputs::{load_degrees, load_prior, rat_or};

pub fn run(args: &AnalyzeArgs, ctx: &Context) -> CliResult<Outcome> {
    let variants = [args.general, args.multistate, args.smallest].iter().filter(|&&b| b).count();
    if variants > 1 {
        return Err(CliError::config("general", "--general, --multistate and --smallest are exclusive"));
    }
    let prior = load_prior(&args.prior)?;
    let degseq = load_degrees(&args.input, ctx.seed)?;
    let mut table = if args.multistate {
        let order = if args.one_at_a_time {
            RemovalOrder::OneAtATime
        } else {
            RemovalOrder::Batch
        };
        let report = algorithm1_multistate_with(&degseq, &prior, order)?;
        let names = prior.state_names();
        let pick = |flags: &[bool]| -> Vec<String> {
            names.iter().zip(flags).filter(|(_, &f)| f).map(|(n, _)| n.clone()).collect()
        };
        let mut table = sizes_table(&report.sizes);
        table.meta("variant", "multistate");
        table.meta("initial_candidates", pick(&report.initial_candidates));
        table.meta("survivors", pick(&report.survivors));
        table.meta("rounds", report.rounds);
        table
    } else if args.smallest {
        let result = smallest_revolt(&degseq, &prior)?;
        let mut table = sizes_table(&result.sizes);
        table.meta("variant", "smallest");
        table.meta("transformed_p", format_rational(result.transformed.p()));
        table.meta("transformed_mu", format_rational(result.transformed.mu()));
        report_meta(&mut table, &result.transformed_report);
        table
    } else if args.general {
        let c = rat_or(&args.cutoff_c, q(1, 1));
        let epsilon = rat_or(&args.epsilon, Q::zero());
        let general = algorithm1_general_with(&degseq, &prior, &c, &epsilon, args.auto_relabel)?;
        let mut table = sizes_table(&general.report.sizes);
        table.meta("variant", "general");
        table.meta("cutoff", general.cutoff);
        table.meta("high_fraction", format_rational(&general.high_fraction));
        table.meta("high_ignored", general.high_ignored);
        report_meta(&mut table, &general.report);
        table
    } else {
        let report = if args.auto_relabel {
            algorithm1_auto_relabel(&degseq, &prior)?
        } else {
            algorithm1_report(&degseq, &prior)?
        };
        let mut table = sizes_table(&report.sizes);
        table.meta("variant", "largest");
        report_meta(&mut table, &report);
        table
    };
    table.meta("n", degseq.len());
    Ok(Outcome::table(table))
}
