use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use assocgen::Variant;
use assocgen_cli::{run, Command, OpSource, RunConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact associativity certification for operations generated by monotone
/// right-continuous functions.
#[derive(Parser)]
#[command(name = "assocgen", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the gap decomposition of the generator's range.
    Decompose(Input),
    /// Decide associativity of the induced operation.
    Certify(WithOp),
    /// Search the generated operation for a non-associative triple on a grid.
    Oracle(WithOp),
    /// Evaluate the generated operation at given points.
    Eval(EvalArgs),
    /// Run the built-in worked examples.
    Examples(ExamplesArgs),
    /// Decomposition, obstruction sets, verdict and oracle cross-check.
    Report(WithOp),
}

#[derive(Args)]
struct Common {
    /// Also write the JSON report here.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Input {
    /// Generator file (JSON).
    #[arg(long, short)]
    generator: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Plain,
    TopPatched,
}

#[derive(Args)]
struct WithOp {
    #[command(flatten)]
    input: Input,
    /// Registry operation id.
    #[arg(long, conflicts_with = "op_table", required_unless_present = "op_table")]
    op: Option<String>,
    /// Table-defined operation (JSON).
    #[arg(long)]
    op_table: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "plain")]
    variant: VariantArg,
    /// Each generator piece is cut into this many parts for the oracle grid.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    grid_density: u32,
    /// Deepest bisection level for ranges with interval components.
    #[arg(long, default_value_t = 12)]
    depth: u32,
    /// Seed for the extra random oracle points.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Skip the second obstruction set for commutative operations.
    #[arg(long)]
    commutative_reduction: bool,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    with_op: WithOp,
    /// A point `x,y` with rationals written p/q; repeatable.
    #[arg(long = "point", short = 'p', required = true)]
    points: Vec<String>,
}

#[derive(Args)]
struct ExamplesArgs {
    /// Run only this example.
    #[arg(long)]
    id: Option<String>,
    #[command(flatten)]
    common: Common,
}

fn with_op(command: Command, a: WithOp) -> RunConfig {
    let mut c = RunConfig::new(command);
    c.generator_path = Some(a.input.generator);
    c.output_path = a.input.common.output;
    c.op = match (a.op, a.op_table) {
        (Some(id), _) => Some(OpSource::Registry(id)),
        (None, Some(path)) => Some(OpSource::Table(path)),
        (None, None) => None,
    };
    c.variant = match a.variant {
        VariantArg::Plain => Variant::Plain,
        VariantArg::TopPatched => Variant::TopPatched,
    };
    c.grid_density = a.grid_density;
    c.refinement_depth = a.depth;
    c.seed = a.seed;
    c.commutative_reduction = a.commutative_reduction;
    c
}

fn config(cli: Cli) -> RunConfig {
    match cli.command {
        Cmd::Decompose(i) => {
            let mut c = RunConfig::new(Command::Decompose);
            c.generator_path = Some(i.generator);
            c.output_path = i.common.output;
            c
        }
        Cmd::Certify(a) => with_op(Command::Certify, a),
        Cmd::Oracle(a) => with_op(Command::Oracle, a),
        Cmd::Report(a) => with_op(Command::Report, a),
        Cmd::Eval(e) => {
            let mut c = with_op(Command::Eval, e.with_op);
            c.points = e.points;
            c
        }
        Cmd::Examples(e) => {
            let mut c = RunConfig::new(Command::Examples);
            c.example_id = e.id;
            c.output_path = e.common.output;
            c
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    let outcome = run(&config(cli));
    let written = if outcome.is_error {
        std::io::stderr().write_all(outcome.report.as_bytes())
    } else {
        std::io::stdout().write_all(outcome.report.as_bytes())
    };
    if written.is_err() {
        return ExitCode::from(74);
    }
    ExitCode::from(outcome.exit_code as u8)
}
