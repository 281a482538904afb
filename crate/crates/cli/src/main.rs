use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use rauzy_squares::census::{run_census, CensusConfig, CensusRow, DEFAULT_CAP, TSV_HEADER};
use rauzy_squares::conjecture::conjecture_rhs;
use rauzy_squares::dot::{cs_smallest_arcs, graph_to_dot, union_to_dot};
use rauzy_squares::rauzy::{build_rauzy, build_union, RauzyGraph};
use rauzy_squares::squares::squares_by_root;
use rauzy_squares::verifier::{verify_all, verify_many, VerificationReport};
use rauzy_squares::words::{
    conj_power_set, is_lyndon, lyndon_factors, lyndon_rotation, primitive_root,
    smallest_period,
};
use rauzy_squares::{Error, Word};

#[derive(Parser)]
#[command(name = "rauzy-squares", version, about = "Distinct squares, Rauzy graphs and their circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Tsv,
    Dot,
}

#[derive(Args)]
struct WordArg {
    /// Input word (ASCII letters; may be empty).
    word: String,
    /// Read the word as hexadecimal bytes.
    #[arg(long)]
    hex: bool,
}

impl WordArg {
    fn parse(&self) -> Result<Word, Failure> {
        parse_word(&self.word, self.hex)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Distinct squares grouped by Lyndon root, with per-root statistics.
    Squares {
        #[command(flatten)]
        input: WordArg,
        #[arg(long)]
        format: Option<Format>,
    },
    /// Period, primitive root, Lyndon rotation and Lyndon factors.
    Lyndon {
        #[command(flatten)]
        input: WordArg,
        /// Also list the conjugacy powers of length M of the Lyndon root.
        #[arg(long = "power", value_name = "M")]
        powers: Vec<usize>,
        #[arg(long)]
        format: Option<Format>,
    },
    /// Rauzy graph of one order, or the union of all orders.
    Rauzy {
        #[command(flatten)]
        input: WordArg,
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        order: Option<usize>,
        #[arg(long)]
        all: bool,
        /// Emit Graphviz DOT (same as --format dot).
        #[arg(long)]
        dot: bool,
        /// Dash the smallest arc of every CS circuit.
        #[arg(long)]
        mark_cs: bool,
        #[arg(long)]
        format: Option<Format>,
    },
    /// Run every bound and structural check; exit 1 if any fails.
    Verify {
        /// Word to check (conflicts with --file).
        #[arg(required_unless_present = "file", conflicts_with = "file")]
        word: Option<String>,
        /// File with one word per line; blank lines and lines starting with '#' are skipped.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        hex: bool,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// With --file, include passing reports too.
        #[arg(long)]
        full: bool,
        #[arg(long)]
        format: Option<Format>,
    },
    /// Exhaustive maximum of distinct squares for n = 1..=N.
    Census {
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 2)]
        sigma: usize,
        /// Worker threads (0: all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, env = "SQUARE_CENSUS_CAP", default_value_t = DEFAULT_CAP)]
        cap: usize,
        /// Run the full verifier on every K-th enumerated word.
        #[arg(long, value_name = "K")]
        verify_every: Option<u64>,
        #[arg(long, hide = true)]
        stop_after_partitions: Option<usize>,
        #[arg(long)]
        format: Option<Format>,
    },
    /// Ceiling of n + 1 - sqrt(n) - log2(sqrt(n)), exactly.
    Conjecture {
        n: u64,
        /// Print every value from n up to this bound.
        #[arg(long)]
        to: Option<u64>,
        #[arg(long)]
        format: Option<Format>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn check(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn io(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CheckFailed(_) => 1,
            Error::Checkpoint(_) => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::io(e.to_string())
    }
}

fn parse_word(s: &str, hex: bool) -> Result<Word, Failure> {
    let w = if hex {
        Word::parse_hex(s)
    } else {
        Word::parse_ascii(s)
    };
    Ok(w?)
}

fn pick(format: Option<Format>, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let f = format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        let name = f.to_possible_value().expect("no skipped variants").get_name().to_string();
        Err(Failure::input(format!("format '{name}' is not available for this subcommand")))
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn squares(input: &WordArg, format: Option<Format>) -> Result<String, Failure> {
    let format = pick(format, Format::Text, &[Format::Text, Format::Json])?;
    let w = input.parse()?;
    let inv = squares_by_root(&w);
    let mut roots = Vec::new();
    for (z, sq) in inv.iter() {
        roots.push((z, sq, inv.root_stats(z)?));
    }
    Ok(match format {
        Format::Json => {
            let roots: Vec<Value> = roots
                .iter()
                .map(|(z, sq, st)| {
                    json!({
                        "root": z,
                        "count": sq.len(),
                        "squares": sq,
                        "stats": st,
                    })
                })
                .collect();
            to_json(&json!({
                "word": w,
                "n": w.len(),
                "total": inv.total(),
                "roots": roots,
            }))
        }
        _ => {
            let mut out = format!("total {}\n", inv.total());
            for (z, sq, st) in &roots {
                let list: Vec<String> = sq.iter().map(|s| s.word.to_string()).collect();
                writeln!(out, "root {z} ({}): {}", sq.len(), list.join(" ")).unwrap();
                writeln!(
                    out,
                    "  r={} s={} k={:?} g={} M={}",
                    st.r, st.s, st.k_list, st.g, st.m_bound
                )
                .unwrap();
            }
            out
        }
    })
}

fn lyndon(input: &WordArg, powers: &[usize], format: Option<Format>) -> Result<String, Failure> {
    let format = pick(format, Format::Text, &[Format::Text, Format::Json])?;
    let w = input.parse()?;
    if w.is_empty() {
        return Err(Error::EmptyWord.into());
    }
    let period = smallest_period(&w)?;
    let (root, exponent) = primitive_root(&w)?;
    let (z, rotation) = lyndon_rotation(&root)?;
    let factors: Vec<String> = lyndon_factors(&w).iter().map(|z| z.to_string()).collect();
    let sets: Vec<(usize, Vec<String>)> = powers
        .iter()
        .map(|&m| (m, conj_power_set(&z, m).members.iter().map(|x| x.to_string()).collect()))
        .collect();
    Ok(match format {
        Format::Json => to_json(&json!({
            "word": w,
            "is_lyndon": is_lyndon(&w)?,
            "smallest_period": period,
            "primitive_root": root,
            "exponent": exponent,
            "lyndon_root": z,
            "rotation": rotation,
            "lyndon_factors": factors,
            "conj_powers": sets.iter().map(|(m, s)| json!({"m": m, "members": s})).collect::<Vec<_>>(),
        })),
        _ => {
            let mut out = String::new();
            writeln!(out, "lyndon {}", is_lyndon(&w)?).unwrap();
            writeln!(out, "period {period}").unwrap();
            writeln!(out, "primitive_root {root}^{exponent}").unwrap();
            writeln!(out, "lyndon_root {z} rotation {rotation}").unwrap();
            writeln!(out, "lyndon_factors {}", factors.join(" ")).unwrap();
            for (m, s) in &sets {
                let shown: Vec<&str> = s.iter().map(|x| if x.is_empty() { "ε" } else { x }).collect();
                writeln!(out, "[{z}]_{m} = {{{}}}", shown.join(", ")).unwrap();
            }
            out
        }
    })
}

fn graph_json(g: &RauzyGraph) -> Value {
    let arcs: Vec<Value> = g
        .arcs()
        .iter()
        .map(|a| {
            json!({
                "arc": a,
                "from": Word::from(RauzyGraph::initial(a)),
                "to": Word::from(RauzyGraph::terminal(a)),
            })
        })
        .collect();
    json!({
        "order": g.order(),
        "vertices": g.vertices(),
        "arcs": arcs,
        "components": g.component_count(),
    })
}

fn rauzy(
    input: &WordArg,
    order: Option<usize>,
    dot: bool,
    mark_cs: bool,
    format: Option<Format>,
) -> Result<String, Failure> {
    let format = if dot {
        pick(format.or(Some(Format::Dot)), Format::Dot, &[Format::Dot])?
    } else {
        pick(format, Format::Json, &[Format::Json, Format::Dot])?
    };
    let w = input.parse()?;
    let marked = if mark_cs {
        cs_smallest_arcs(&w)
    } else {
        Default::default()
    };
    Ok(match order {
        Some(l) => {
            let g = build_rauzy(&w, l)?;
            match format {
                Format::Dot => graph_to_dot(&g, &marked),
                _ => to_json(&graph_json(&g)),
            }
        }
        None => {
            let u = build_union(&w);
            match format {
                Format::Dot => union_to_dot(&u, &marked),
                _ => {
                    let mut v = json!({
                        "word": w,
                        "vertices": u.n_vertices(),
                        "arcs": u.n_arcs(),
                        "components": u.n_components(),
                        "cyclomatic_number": u.cyclomatic_number(),
                        "graphs": u.graphs().iter().map(graph_json).collect::<Vec<_>>(),
                    });
                    if mark_cs {
                        v["cs_smallest_arcs"] = json!(marked);
                    }
                    to_json(&v)
                }
            }
        }
    })
}

fn read_corpus(path: &PathBuf, hex: bool) -> Result<Vec<Word>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    let mut words = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let w = parse_word(line, hex).map_err(|f| Failure::input(format!("{}:{}: {}", path.display(), i + 1, f.message)))?;
        words.push(w);
    }
    Ok(words)
}

#[derive(Serialize)]
struct CorpusReport<'a> {
    words: usize,
    passed: usize,
    pass: bool,
    reports: Vec<&'a VerificationReport>,
}

fn verify(
    word: Option<&str>,
    file: Option<&PathBuf>,
    hex: bool,
    full: bool,
    format: Option<Format>,
) -> Result<(String, Vec<String>), Failure> {
    let format = pick(format, Format::Json, &[Format::Json, Format::Text])?;
    let reports = match (word, file) {
        (Some(w), None) => vec![verify_all(&parse_word(w, hex)?)],
        (None, Some(path)) => verify_many(&read_corpus(path, hex)?),
        _ => unreachable!("clap enforces exactly one input"),
    };
    let failures: Vec<String> = reports
        .iter()
        .filter(|r| !r.pass)
        .flat_map(|r| {
            r.checks.iter().filter(|c| !c.pass).map(move |c| {
                let witness = c.witness.as_ref().map(|w| w.to_string()).unwrap_or_default();
                format!("word {}: {c} witness {witness}", r.word)
            })
        })
        .collect();
    let body = match format {
        Format::Text => {
            let mut out = String::new();
            for r in &reports {
                writeln!(out, "{} {}", if r.pass { "PASS" } else { "FAIL" }, r.word).unwrap();
                for c in &r.checks {
                    writeln!(out, "  {c}").unwrap();
                }
            }
            out
        }
        _ if file.is_some() => to_json(&CorpusReport {
            words: reports.len(),
            passed: reports.iter().filter(|r| r.pass).count(),
            pass: failures.is_empty(),
            reports: reports.iter().filter(|r| full || !r.pass).collect(),
        }),
        _ => to_json(&reports[0]),
    };
    Ok((body, failures))
}

struct CensusArgs {
    n_max: usize,
    sigma: usize,
    jobs: usize,
    checkpoint: Option<PathBuf>,
    cap: usize,
    verify_every: Option<u64>,
    stop_after: Option<usize>,
    format: Option<Format>,
}

fn census(a: CensusArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let format = pick(a.format, Format::Tsv, &[Format::Tsv, Format::Json])?;
    let cfg = CensusConfig {
        sigma: a.sigma,
        jobs: a.jobs,
        cap: a.cap,
        verify_every: a.verify_every,
        partition_budget: a.stop_after,
    };
    let mut header = format == Format::Tsv;
    let mut write_err = None;
    let mut emit = |row: &CensusRow| {
        if std::mem::take(&mut header) {
            if let Err(e) = writeln!(out, "{TSV_HEADER}") {
                write_err.get_or_insert(e);
            }
        }
        let line = match format {
            Format::Json => serde_json::to_string(row).expect("serializable"),
            _ => row.tsv_line(),
        };
        if let Err(e) = writeln!(out, "{line}").and_then(|_| out.flush()) {
            write_err.get_or_insert(e);
        }
    };
    let outcome = run_census(a.n_max, &cfg, a.checkpoint.as_deref(), &mut emit)?;
    if let Some(e) = write_err {
        return Err(e.into());
    }
    if !outcome.complete {
        eprintln!(
            "stopped after the partition budget at n = {}; rerun with the same checkpoint to resume",
            outcome.rows.len() + 1
        );
    }
    if a.sigma == 2 {
        if let Some(bad) = outcome.rows.iter().find(|r| !r.conjecture_pass) {
            return Err(Failure::check(format!(
                "n = {}: max_sq {} exceeds {} (witness {})",
                bad.n,
                bad.max_sq,
                bad.conjecture_rhs,
                bad.witnesses.first().map(String::as_str).unwrap_or("")
            )));
        }
    }
    Ok(())
}

fn conjecture(n: u64, to: Option<u64>, format: Option<Format>) -> Result<String, Failure> {
    let format = pick(format, Format::Tsv, &[Format::Tsv, Format::Json, Format::Text])?;
    let hi = to.unwrap_or(n);
    if hi < n {
        return Err(Failure::input(format!("--to {hi} is below n = {n}")));
    }
    let mut rows = Vec::new();
    for k in n..=hi {
        rows.push((k, conjecture_rhs(k)?));
    }
    Ok(match format {
        Format::Json => to_json(&rows.iter().map(|(n, r)| json!({"n": n, "rhs": r})).collect::<Vec<_>>()),
        _ => {
            let mut out = String::from("n\trhs\n");
            for (n, r) in rows {
                writeln!(out, "{n}\t{r}").unwrap();
            }
            out
        }
    })
}

fn emit(s: &str) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    lock.write_all(s.as_bytes())?;
    lock.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Squares { input, format } => emit(&squares(&input, format)?),
        Command::Lyndon {
            input,
            powers,
            format,
        } => emit(&lyndon(&input, &powers, format)?),
        Command::Rauzy {
            input,
            order,
            all: _,
            dot,
            mark_cs,
            format,
        } => emit(&rauzy(&input, order, dot, mark_cs, format)?),
        Command::Verify {
            word,
            file,
            hex,
            out,
            full,
            format,
        } => {
            let (body, failures) = verify(word.as_deref(), file.as_ref(), hex, full, format)?;
            match out {
                Some(path) => fs::write(&path, body).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?,
                None => emit(&body)?,
            }
            if failures.is_empty() {
                Ok(())
            } else {
                Err(Failure::check(failures.join("\n")))
            }
        }
        Command::Census {
            n_max,
            sigma,
            jobs,
            checkpoint,
            cap,
            verify_every,
            stop_after_partitions,
            format,
        } => {
            let stdout = io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            census(
                CensusArgs {
                    n_max,
                    sigma,
                    jobs,
                    checkpoint,
                    cap,
                    verify_every,
                    stop_after: stop_after_partitions,
                    format,
                },
                &mut out,
            )
        }
        Command::Conjecture { n, to, format } => emit(&conjecture(n, to, format)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
