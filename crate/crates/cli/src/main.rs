//! `twistdance` command-line tool.
//!
//! Exit codes: 0 valid / feasible, 1 invalid / infeasible / exhausted,
//! 2 usage or I/O error.

mod svg;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use svg::{svg_timeline, TimelineStyle};
use twistdance::codec::{parse, serialize, trace_to_json, ParseError};
use twistdance::solver::{min_dancers, survey, RuleKind};
use twistdance::{
    schedule_search, CrossingRule, DancePlan, DanceRule, Diagram, FacingAssignment, Gap, Schedule,
};

#[derive(Parser)]
#[command(
    name = "twistdance",
    version,
    about = "Danceability of twisted virtual knot diagrams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a Gauss code and print its canonical form.
    Validate {
        /// Diagram code, e.g. "O1+ U2+ O3+ U1+ O2+ U3+".
        diagram: Option<String>,
        /// Read the code from a file instead.
        #[arg(long, conflicts_with = "diagram")]
        file: Option<PathBuf>,
    },
    /// Schedule one dance plan.
    Dance(DanceArgs),
    /// Find the fewest dancers (then laps) that can dance a diagram.
    Solve(SolveArgs),
    /// Tabulate feasibility over every placement of n dancers.
    Survey(SurveyArgs),
}

#[derive(Args)]
struct DiagramSource {
    #[arg(long)]
    diagram: Option<String>,
    #[arg(long, conflicts_with = "diagram")]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Forward,
    Matching,
}

impl From<RuleArg> for RuleKind {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Forward => RuleKind::Forward,
            RuleArg::Matching => RuleKind::Matching,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CrossingArg {
    OverFirst,
    UnderFirst,
    Unrestricted,
}

impl From<CrossingArg> for CrossingRule {
    fn from(c: CrossingArg) -> Self {
        match c {
            CrossingArg::OverFirst => CrossingRule::OverFirst,
            CrossingArg::UnderFirst => CrossingRule::UnderFirst,
            CrossingArg::Unrestricted => CrossingRule::Unrestricted,
        }
    }
}

#[derive(Args)]
struct DanceArgs {
    #[command(flatten)]
    source: DiagramSource,
    /// Comma-separated gap indices of the initial points, in cyclic order.
    #[arg(long, value_delimiter = ',', required = true)]
    points: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, value_enum, default_value = "forward")]
    rule: RuleArg,
    /// Comma-separated F/B facings, one per initial point (matching rule).
    #[arg(long)]
    facings: Option<String>,
    #[arg(long, value_enum, default_value = "over-first")]
    crossing: CrossingArg,
    /// Write the trace as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write an SVG timeline of the witness.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    source: DiagramSource,
    #[arg(long, value_enum, default_value = "forward")]
    rule: RuleArg,
    #[arg(long, value_enum, default_value = "over-first")]
    crossing: CrossingArg,
    #[arg(long, default_value_t = 3)]
    max_n: usize,
    #[arg(long, default_value_t = 1)]
    max_k: usize,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SurveyArgs {
    #[command(flatten)]
    source: DiagramSource,
    #[arg(long, value_enum, default_value = "forward")]
    rule: RuleArg,
    #[arg(long, value_enum, default_value = "over-first")]
    crossing: CrossingArg,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Under the matching rule, try every facing assignment per placement.
    #[arg(long)]
    all_facings: bool,
}

enum Failure {
    /// Invalid diagram, infeasible plan or exhausted bounds.
    Negative,
    Usage(String),
}

type CmdResult = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn read_source(diagram: Option<String>, file: Option<PathBuf>) -> Result<String, Failure> {
    match (diagram, file) {
        (Some(text), None) => Ok(text),
        (None, Some(path)) => fs::read_to_string(&path)
            .map_err(|e| usage(format!("cannot read {}: {e}", path.display()))),
        _ => Err(usage("give the diagram as an argument or with --file")),
    }
}

fn report_parse_error(text: &str, err: &ParseError) {
    eprintln!("error: {err}");
    if let Some(span) = err.span() {
        // Show the offending line with a caret under the token.
        let line_start = text[..span.byte_start].rfind('\n').map_or(0, |i| i + 1);
        let line_end = text[span.byte_start..]
            .find('\n')
            .map_or(text.len(), |i| span.byte_start + i);
        eprintln!("  {}", &text[line_start..line_end]);
        let pad = text[line_start..span.byte_start].chars().count();
        let width = text[span.byte_start..span.byte_end].chars().count().max(1);
        eprintln!("  {}{}", " ".repeat(pad), "^".repeat(width));
    }
}

fn load_diagram(source: DiagramSource) -> Result<Diagram, Failure> {
    let text = read_source(source.diagram, source.file)?;
    parse(&text).map_err(|e| {
        report_parse_error(&text, &e);
        usage("invalid diagram")
    })
}

fn write_file(path: &PathBuf, contents: &str) -> CmdResult {
    fs::write(path, contents).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn cmd_validate(diagram: Option<String>, file: Option<PathBuf>) -> CmdResult {
    let text = read_source(diagram, file)?;
    match parse(&text) {
        Ok(d) => {
            println!("{}", serialize(&d));
            Ok(())
        }
        Err(e) => {
            report_parse_error(&text, &e);
            Err(Failure::Negative)
        }
    }
}

fn cmd_dance(args: DanceArgs) -> CmdResult {
    let diagram = load_diagram(args.source)?;
    let rule = match (args.rule, args.facings) {
        (RuleArg::Forward, None) => DanceRule::Forward,
        (RuleArg::Forward, Some(_)) => {
            return Err(usage("--facings only applies to --rule matching"))
        }
        (RuleArg::Matching, None) => return Err(usage("--rule matching requires --facings")),
        (RuleArg::Matching, Some(f)) => DanceRule::Matching(
            f.parse::<FacingAssignment>()
                .map_err(|e| usage(e.to_string()))?,
        ),
    };
    let points = args.points.into_iter().map(Gap).collect();
    let plan = DancePlan::new(diagram, points, args.k, rule, args.crossing.into())
        .map_err(|e| usage(e.to_string()))?;

    let result = schedule_search(&plan);
    let schedule = match &result {
        Ok(s) => s.clone(),
        Err(_) => Schedule {
            steps: Vec::new(),
            feasible: false,
            plan: Some(plan.header()),
        },
    };
    if let Some(path) = &args.json {
        write_file(path, &trace_to_json(&schedule))?;
    }
    if let Some(path) = &args.svg {
        write_file(path, &svg_timeline(&schedule, &TimelineStyle::default()))?;
    }
    match result {
        Ok(s) => {
            println!("FEASIBLE");
            let steps: Vec<String> = s
                .steps
                .iter()
                .map(|st| format!("{}:{}", st.dancer, st.event))
                .collect();
            println!("{}", steps.join(" "));
            Ok(())
        }
        Err(e) => {
            println!(
                "INFEASIBLE({}) after {} states",
                e.reason, e.states_explored
            );
            Err(Failure::Negative)
        }
    }
}

fn join_points(points: &[Gap]) -> String {
    points
        .iter()
        .map(Gap::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn cmd_solve(args: SolveArgs) -> CmdResult {
    let diagram = load_diagram(args.source)?;
    let report = min_dancers(
        &diagram,
        args.rule.into(),
        args.crossing.into(),
        args.max_k,
        args.max_n,
    )
    .map_err(|e| usage(e.to_string()))?;
    match report.feasible() {
        Some((plan, schedule)) => {
            let mut line = format!(
                "n={} k={} points={}",
                plan.dancers(),
                plan.k(),
                join_points(plan.points())
            );
            if let DanceRule::Matching(f) = plan.rule() {
                line.push_str(&format!(" facings={f}"));
            }
            println!("{line}");
            if let Some(path) = &args.json {
                write_file(path, &trace_to_json(schedule))?;
            }
            Ok(())
        }
        None => {
            println!(
                "EXHAUSTED n<={} k<={} ({} plans tried)",
                report.n_searched.end(),
                report.k_searched.end(),
                report.placements_tried
            );
            if let Some(path) = &args.json {
                let empty = Schedule {
                    feasible: false,
                    ..Schedule::empty()
                };
                write_file(path, &trace_to_json(&empty))?;
            }
            Err(Failure::Negative)
        }
    }
}

fn cmd_survey(args: SurveyArgs) -> CmdResult {
    let diagram = load_diagram(args.source)?;
    let rows = survey(
        &diagram,
        args.rule.into(),
        args.crossing.into(),
        args.n,
        args.k,
        args.all_facings,
    )
    .map_err(|e| usage(e.to_string()))?;
    for row in &rows {
        let facings = row
            .facings
            .as_ref()
            .map_or("-".to_string(), ToString::to_string);
        let verdict = match row.reason {
            None => "FEASIBLE".to_string(),
            Some(reason) => format!("INFEASIBLE({reason})"),
        };
        println!("{}\t{facings}\t{verdict}", join_points(&row.points));
    }
    if rows.iter().any(|r| r.feasible) {
        Ok(())
    } else {
        Err(Failure::Negative)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { diagram, file } => cmd_validate(diagram, file),
        Command::Dance(args) => cmd_dance(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Survey(args) => cmd_survey(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
