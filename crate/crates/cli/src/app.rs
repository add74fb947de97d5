//! Argument parsing and command dispatch.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qwalk_core::graph::{build_double_slit, build_lattice, build_line, graph_from_json, graph_to_json, DoubleSlit};

use crate::emit::{emit_distribution, render, Format};
use crate::error::{CliError, CliResult};
use crate::experiment::{parse_spin, run_experiment, CoinKind, ExperimentKind, ExperimentParams, ExperimentReport, Overrides};
use crate::golden::compare_tables;

#[derive(Debug, Parser)]
#[command(name = "qwalk", version, about = "Quantum and classical walks on property graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact traverser counts and a sampled random walk on a line.
    LineClassical(RunArgs),
    /// Hadamard-coin walk on a line from spin [1,0].
    LineHadamard(RunArgs),
    /// Symmetric Hadamard walk from spin (1/√2)[1,i].
    LineBalanced(RunArgs),
    /// Hadamard walk long enough to reflect off both line ends.
    LineBounded(RunArgs),
    /// Grover-coin walk through a two-slit screen on a lattice.
    DoubleSlit(RunArgs),
    /// Frequency-spin listings on the four-vertex fixture graph.
    SetopsDemo(RunArgs),
    /// Forward steps followed by as many reverse steps.
    ReverseCheck(RunArgs),
    /// Build or inspect graph files.
    #[command(subcommand)]
    Graph(GraphCommand),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CoinArg {
    Hadamard,
    BalancedY,
    Grover,
}

impl From<CoinArg> for CoinKind {
    fn from(c: CoinArg) -> Self {
        match c {
            CoinArg::Hadamard => CoinKind::Hadamard,
            CoinArg::BalancedY => CoinKind::BalancedY,
            CoinArg::Grover => CoinKind::Grover,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
    Svg,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
            FormatArg::Svg => Format::Svg,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Line length.
    #[arg(long)]
    pub vertices: Option<usize>,
    /// Lattice columns.
    #[arg(long)]
    pub width: Option<usize>,
    /// Lattice rows.
    #[arg(long)]
    pub height: Option<usize>,
    #[arg(long)]
    pub steps: Option<u64>,
    #[arg(long, value_enum)]
    pub coin: Option<CoinArg>,
    /// Spin components as "re,im;re,im;...".
    #[arg(long, allow_hyphen_values = true)]
    pub initial_spin: Option<String>,
    /// Start vertex id.
    #[arg(long)]
    pub start: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for the step engine.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Directory for output files; without it the main output goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
    /// Also write every iteration's distribution.
    #[arg(long)]
    pub dump_iterations: bool,
    /// Compare the run against a golden table.
    #[arg(long)]
    pub golden: Option<PathBuf>,
}

impl RunArgs {
    pub fn overrides(&self) -> CliResult<Overrides> {
        if self.threads == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        Ok(Overrides {
            vertices: self.vertices,
            width: self.width,
            height: self.height,
            steps: self.steps,
            coin: self.coin.map(CoinKind::from),
            initial_spin: self.initial_spin.as_deref().map(parse_spin).transpose()?,
            start: self.start,
            seed: Some(self.seed),
            threads: Some(self.threads),
        })
    }
}

#[derive(Debug, Subcommand)]
pub enum GraphCommand {
    /// Write a builder graph as JSON.
    #[command(subcommand)]
    Build(BuildKind),
    /// Validate a graph file and print its size.
    Load { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum BuildKind {
    Line {
        #[arg(long, default_value_t = 100)]
        vertices: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Lattice {
        #[arg(long, default_value_t = 20)]
        width: usize,
        #[arg(long, default_value_t = 20)]
        height: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    DoubleSlit {
        #[arg(long, default_value_t = 20)]
        width: usize,
        #[arg(long, default_value_t = 20)]
        height: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write_or_print(out: Option<&PathBuf>, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn summary(report: &ExperimentReport) -> String {
    if let Some(listing) = &report.listing {
        let sections = listing.split("\n\n").count();
        return format!("{}: {sections} listings", report.kind);
    }
    let mut s = format!("{}: {} steps", report.kind, report.params.steps);
    if let Some(total) = report.total_count() {
        s += &format!(", {total} traversers");
    }
    s += &format!(", max norm drift {:.3e}", report.integrity.max_norm_drift);
    if let Some(d) = report.integrity.coin_unitarity_defect {
        s += &format!(", coin unitarity defect {d:.3e}");
    }
    if let Some(p) = report.integrity.recovered_probability {
        s += &format!(", recovered probability {p:.12}");
    }
    if let Some(sample) = &report.sample {
        s += &format!(", sample v{}", sample.vertex);
        if let Some(b) = sample.basis {
            s += &format!(" basis {b}");
        }
    }
    s += &format!(", {:.3} s", report.duration.as_secs_f64());
    s
}

fn run_named(kind: ExperimentKind, args: &RunArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let params = ExperimentParams::with_overrides(kind, &args.overrides()?)?;
    let report = run_experiment(kind, &params)?;
    let format = Format::from(args.format);
    match &args.out {
        Some(dir) => {
            for path in emit_distribution(&report, format, args.dump_iterations, dir)? {
                let _ = writeln!(stderr, "wrote {}", path.display());
            }
        }
        None => {
            let main = render(&report, format, false).remove(0);
            write_or_print(None, &main.contents, stdout)?;
        }
    }
    let _ = writeln!(stderr, "{}", summary(&report));
    if let Some(golden) = &args.golden {
        let cmp = compare_tables(&report, golden)?;
        match cmp.mismatch {
            None => {
                let _ = writeln!(stderr, "golden {}: {} cells match", golden.display(), cmp.cells_checked);
            }
            Some(m) => return Err(CliError::Integrity(format!("golden {}: {m}", golden.display()))),
        }
    }
    Ok(())
}

fn run_graph(cmd: &GraphCommand, stdout: &mut dyn Write) -> CliResult<()> {
    match cmd {
        GraphCommand::Build(kind) => {
            let (g, out) = match kind {
                BuildKind::Line { vertices, out } => (build_line(*vertices)?, out),
                BuildKind::Lattice { width, height, out } => (build_lattice(*width, *height)?, out),
                BuildKind::DoubleSlit { width, height, out } => {
                    (build_double_slit(&DoubleSlit::sized(*width, *height)?)?, out)
                }
            };
            write_or_print(out.as_ref(), &graph_to_json(&g), stdout)
        }
        GraphCommand::Load { file } => {
            let text = fs::read_to_string(file).map_err(|e| CliError::io(file, e))?;
            let g = graph_from_json(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
            let text = format!(
                "vertices: {}\nedges: {}\nlabels: {}\n",
                g.vertex_count(),
                g.edge_count(),
                g.labels().join(", ")
            );
            write_or_print(None, &text, stdout)
        }
    }
}

/// Runs a parsed command, writing primary output to `stdout` and
/// diagnostics to `stderr`.
pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let (kind, args) = match &cli.command {
        Command::Graph(g) => return run_graph(g, stdout),
        Command::LineClassical(a) => (ExperimentKind::LineClassical, a),
        Command::LineHadamard(a) => (ExperimentKind::LineHadamard, a),
        Command::LineBalanced(a) => (ExperimentKind::LineBalanced, a),
        Command::LineBounded(a) => (ExperimentKind::LineBounded, a),
        Command::DoubleSlit(a) => (ExperimentKind::DoubleSlit, a),
        Command::SetopsDemo(a) => (ExperimentKind::SetopsDemo, a),
        Command::ReverseCheck(a) => (ExperimentKind::ReverseCheck, a),
    };
    run_named(kind, args, stdout, stderr)
}

/// Full entry point: parse, execute, and map failures to exit codes.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr().lock());
    match execute(&cli, &mut out, &mut err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "qwalk: {e}");
            e.exit_code()
        }
    }
}
