//! Command-line front end. [`run`] holds everything except process exit so
//! tests can drive it in-process.
//!
//! Exit codes: 0 on success, 1 on usage errors (bad flags, out-of-range
//! indices, unwritable output), 2 when the instance file cannot be read,
//! parsed or validated.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tripost::analyzer::SweepItem;
use tripost::records::{
    sweep_record, InstanceRecord, Record, Rows, SolveRecord, SummaryRecord, VerifyRecord,
};
use tripost::service::{serve, SessionStore, StoreConfig};
use tripost::{
    analyze, enumerate, parse_instance, random_instance, search_pair, search_triple, sweep,
    AnalysisReport, EnumParams, Error, Game, GameStatus, Row, SearchBounds, SweepSummary,
    TriSystem,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INSTANCE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "tripost",
    version,
    about = "Threefold Post correspondence workbench"
)]
struct Cli {
    /// Output style; `records` prints line-delimited JSON records.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check whether a domino list wins a game.
    Verify {
        file: PathBuf,
        /// 1-based domino indices, comma separated.
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        indices: Vec<usize>,
        #[arg(long, default_value = "tmb")]
        game: Game,
    },
    /// Search one game for a shortest match.
    Solve {
        file: PathBuf,
        #[arg(long, default_value = "tmb")]
        game: Game,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Filters, search and closure on all four games.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Analyze a generated corpus and write one record per instance.
    Sweep {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        bounds: BoundArgs,
        /// Record file to write.
        #[arg(long)]
        out: PathBuf,
    },
    /// Host the session protocol on 127.0.0.1.
    Serve {
        /// 0 picks a free port; the chosen address is printed.
        #[arg(long)]
        port: u16,
    },
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[arg(long, default_value_t = 64)]
    max_depth: usize,
    #[arg(long, default_value_t = 64)]
    max_overhang: usize,
    #[arg(long, default_value_t = 1_000_000)]
    max_states: usize,
}

impl BoundArgs {
    fn bounds(&self) -> Result<SearchBounds, Failure> {
        SearchBounds::new(self.max_depth, self.max_overhang, self.max_states)
            .map_err(|e| Failure::usage(e.to_string()))
    }
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct SourceArgs {
    /// Every canonical instance for `n,len,k`.
    #[arg(long, value_name = "N,LEN,K")]
    enumerate: Option<String>,
    /// `count` random instances; instance i uses seed `seed + i`.
    #[arg(long, value_name = "COUNT,SEED,N,LEN,K")]
    random: Option<String>,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn instance(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INSTANCE,
            message: message.into(),
        }
    }

    fn io(context: &str, e: io::Error) -> Self {
        Failure::usage(format!("{context}: {e}"))
    }
}

/// Runs one command line (program name first) and returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let format = cli.format;
    match cli.command {
        Command::Verify {
            file,
            indices,
            game,
        } => {
            let system = load(&file)?;
            verify(&system, &indices, game, format, out)
        }
        Command::Solve { file, game, bounds } => {
            let bounds = bounds.bounds()?;
            let system = load(&file)?;
            let outcome = match game.pair_rows() {
                None => search_triple(&system, &bounds),
                Some(_) => search_pair(&system.project(game).map_err(core_failure)?, &bounds),
            }
            .map_err(core_failure)?;
            match format {
                Format::Text => emit(out, &format!("{outcome}")),
                Format::Records => emit(
                    out,
                    &Record::Solve(SolveRecord::new(game, bounds, &outcome)).to_line(),
                ),
            }
        }
        Command::Analyze { file, bounds } => {
            let bounds = bounds.bounds()?;
            let system = load(&file)?;
            let report = analyze(&system, &bounds).map_err(core_failure)?;
            match format {
                Format::Text => emit(out, &render_report(&report)),
                Format::Records => emit(
                    out,
                    &Record::Instance(InstanceRecord::new(0, &system, &report)).to_line(),
                ),
            }
        }
        Command::Sweep {
            source,
            bounds,
            out: path,
        } => {
            let bounds = bounds.bounds()?;
            let (label, systems) = sweep_source(&source)?;
            let summary = write_sweep(&path, &label, systems, &bounds)?;
            match format {
                Format::Text => emit(out, &render_summary(&label, &summary)),
                Format::Records => emit(
                    out,
                    &Record::Summary(SummaryRecord::new(label, bounds, &summary)).to_line(),
                ),
            }
        }
        Command::Serve { port } => {
            let listener = TcpListener::bind(("127.0.0.1", port))
                .map_err(|e| Failure::io("cannot bind", e))?;
            let addr = listener
                .local_addr()
                .map_err(|e| Failure::io("cannot bind", e))?;
            emit(out, &format!("listening on {addr}"))?;
            out.flush().map_err(|e| Failure::io("stdout", e))?;
            serve(
                listener,
                Arc::new(SessionStore::new(StoreConfig::default())),
            )
            .map_err(|e| Failure::io("server stopped", e))
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    writeln!(out, "{text}").map_err(|e| Failure::io("stdout", e))
}

fn load(path: &Path) -> Result<TriSystem, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::instance(format!("cannot read {}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| Failure::instance(format!("{}: {e}", path.display())))
}

fn core_failure(e: Error) -> Failure {
    match e {
        Error::InvalidSystem(_) => Failure::instance(e.to_string()),
        _ => Failure::usage(e.to_string()),
    }
}

fn verify(
    system: &TriSystem,
    indices: &[usize],
    game: Game,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let result = system.verify_match(indices, game).map_err(core_failure)?;
    let word = |row| {
        system
            .concat_row(row, indices)
            .map(|w| w.to_string())
            .map_err(core_failure)
    };
    let rows = Rows {
        top: word(Row::Top)?,
        middle: word(Row::Middle)?,
        bottom: word(Row::Bottom)?,
    };
    match format {
        Format::Records => {
            let rec = VerifyRecord {
                game,
                indices: indices.to_vec(),
                result,
                words: rows,
            };
            emit(out, &Record::Verify(rec).to_line())
        }
        Format::Text => {
            let pick = |row| match row {
                Row::Top => rows.top.as_str(),
                Row::Middle => rows.middle.as_str(),
                Row::Bottom => rows.bottom.as_str(),
            };
            let (first, second) = game.pair_rows().unwrap_or((Row::Top, Row::Middle));
            if result {
                emit(out, &format!("true {}", pick(first)))
            } else {
                let mut line = format!("false {} {}", pick(first), pick(second));
                if game == Game::TopMiddleBottom {
                    line.push(' ');
                    line.push_str(pick(Row::Bottom));
                }
                emit(out, &line)
            }
        }
    }
}

fn render_status(s: &GameStatus) -> String {
    match s {
        GameStatus::DecidedYes(m) => format!("yes {m}"),
        GameStatus::DecidedNo(c) => format!("no {c}"),
        GameStatus::Unknown(e) => {
            format!(
                "unknown ({}, {} states, depth {})",
                e.bound, e.stats.states, e.stats.depth_reached
            )
        }
    }
}

fn render_report(report: &AnalysisReport) -> String {
    let mut lines = Vec::new();
    for r in &report.games {
        let mut line = format!(
            "{:<4}{} via {}",
            r.game,
            render_status(&r.status),
            r.via.label()
        );
        if let Some((old, via)) = &r.superseded {
            line.push_str(&format!(
                " [was {} via {}]",
                render_status(old),
                via.label()
            ));
        }
        lines.push(line);
    }
    lines.push(format!(
        "conjecture witnessed: {}",
        report.conjecture_witnessed
    ));
    lines.push(format!("states used: {}", report.states_used));
    lines.join("\n")
}

fn render_summary(label: &str, s: &SweepSummary) -> String {
    let mut lines = vec![
        format!("source: {label}"),
        format!("instances: {} ({} errors)", s.instances, s.errors),
        format!("witnessed: {} ({:.6})", s.witnessed, s.witnessed_fraction),
    ];
    for (game, t) in &s.per_game {
        lines.push(format!(
            "{game:<4}yes {} no {} unknown {}",
            t.yes, t.no, t.unknown
        ));
    }
    for (kind, n) in &s.certificates {
        lines.push(format!("certificate {kind}: {n}"));
    }
    lines.push(format!("states used: {}", s.states_used));
    lines.join("\n")
}

fn parse_list<const N: usize>(flag: &str, text: &str) -> Result<[u64; N], Failure> {
    let bad = || Failure::usage(format!("--{flag} expects {N} comma-separated integers"));
    let values: Vec<u64> = text
        .split(',')
        .map(|p| p.trim().parse().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    values.try_into().map_err(|_| bad())
}

fn params(n: u64, len: u64, k: u64) -> Result<EnumParams, Failure> {
    EnumParams::new(n as usize, len as usize, k as usize).map_err(|e| Failure::usage(e.to_string()))
}

type Source = Box<dyn Iterator<Item = TriSystem>>;

fn sweep_source(source: &SourceArgs) -> Result<(String, Source), Failure> {
    if let Some(text) = &source.enumerate {
        let [n, len, k] = parse_list("enumerate", text)?;
        let systems = enumerate(params(n, len, k)?).map_err(core_failure)?;
        return Ok((
            format!("enumerate:{n},{len},{k}"),
            Box::new(systems.into_iter()),
        ));
    }
    let text = source.random.as_deref().expect("clap requires one source");
    let [count, seed, n, len, k] = parse_list("random", text)?;
    let p = params(n, len, k)?;
    let systems = (0..count)
        .map(move |i| random_instance(seed.wrapping_add(i), p).expect("parameters checked above"));
    Ok((
        format!("random:{count},{seed},{n},{len},{k}"),
        Box::new(systems),
    ))
}

fn write_sweep(
    path: &Path,
    label: &str,
    systems: Source,
    bounds: &SearchBounds,
) -> Result<SweepSummary, Failure> {
    let context = format!("cannot write {}", path.display());
    let file = fs::File::create(path).map_err(|e| Failure::io(&context, e))?;
    let mut w = BufWriter::new(file);
    let mut write_err = None;
    let summary = sweep(systems, bounds, |item: &SweepItem| {
        if write_err.is_none() {
            if let Err(e) = writeln!(w, "{}", sweep_record(item).to_line()) {
                write_err = Some(e);
            }
        }
    });
    if let Some(e) = write_err {
        return Err(Failure::io(&context, e));
    }
    let summary_line = Record::Summary(SummaryRecord::new(label, *bounds, &summary)).to_line();
    writeln!(w, "{summary_line}")
        .and_then(|_| w.flush())
        .map_err(|e| Failure::io(&context, e))?;
    Ok(summary)
}
