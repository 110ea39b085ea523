use std::fs::{File, OpenOptions};
use std::io::{self, BufReader, BufWriter, IsTerminal, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tigraph::families::{build, closed_form_transmissions, FamilySpec};
use tigraph::search::{
    classify_stream, enumerate_cycle_chords, scan_order_conjecture, CensusOptions, CensusReport, ChordSearchTask,
    Predicate,
};
use tigraph::session::{family_script, run_repl, Session};
use tigraph::{classify, encode_graph6, spectrum_string};

#[derive(Parser)]
#[command(name = "archer", version, about = "Vertex transmissions of cores with chordal paths")]
struct Cli {
    #[command(subcommand)]
    command: Top,
}

#[derive(Subcommand)]
enum Top {
    /// Interactive session reading archer commands from standard input.
    Repl {
        /// Append every applied command to this file.
        #[arg(long)]
        log: Option<PathBuf>,
        /// Replay a command log before reading input.
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    /// JSON session service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
    /// Parametric families.
    Families {
        #[command(subcommand)]
        command: FamiliesCmd,
    },
    /// Exhaustive searches.
    Search {
        #[command(subcommand)]
        command: SearchCmd,
    },
}

#[derive(Subcommand)]
enum FamiliesCmd {
    /// Build one family member.
    Build(BuildArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildFormat {
    /// Archer commands that load the graph into a session.
    Script,
    /// graph6 code of the expanded graph.
    G6,
    /// JSON with closed-form and computed transmissions.
    Profile,
}

#[derive(Args)]
struct BuildArgs {
    /// G1, G2, G3, G4 or DOB.
    #[arg(long)]
    tag: String,
    /// Parameters, comma separated (G4 takes n,m).
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    params: Vec<usize>,
    #[arg(long, value_enum, default_value = "script")]
    format: BuildFormat,
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Add every set of chords to a cycle and count isomorphism classes.
    CycleChords(ChordArgs),
    /// Classify every graph in a graph6 stream.
    Census(CensusArgs),
    /// List ITI graphs of order 2 mod 4 in a census report.
    Conjecture {
        /// JSON report written by `search census --json`.
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Args)]
struct ChordArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    chords: usize,
    /// ti, mti or iti.
    #[arg(long, default_value = "iti")]
    predicate: String,
    #[arg(long, default_value_t = 1)]
    shards: usize,
    #[arg(long, default_value_t = 0)]
    shard: usize,
    /// Write representatives as graph6, one per line.
    #[arg(long)]
    emit: Option<PathBuf>,
    /// Write the result as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Lift the default limit on the number of chord sets.
    #[arg(long)]
    long_run: bool,
}

#[derive(Args)]
struct CensusArgs {
    /// graph6 file, or `-` for standard input.
    #[arg(long = "in")]
    input: PathBuf,
    /// Write the graph6 code of every ITI graph here.
    #[arg(long)]
    emit_iti: Option<PathBuf>,
    /// Write the report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

type Result<T> = std::result::Result<T, String>;

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| e.to_string())?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| e.to_string())
}

fn repl(log: Option<PathBuf>, replay: Option<PathBuf>) -> Result<()> {
    let mut session = match &replay {
        Some(path) => {
            let f = File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
            Session::replay(BufReader::new(f)).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => Session::new(),
    };
    if let Some(path) = log {
        let f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|e| format!("{}: {e}", path.display()))?;
        session = session.with_log(f);
    }
    let stdin = io::stdin();
    let prompt = stdin.is_terminal();
    run_repl(&mut session, stdin.lock(), io::stdout().lock(), prompt).map_err(|e| e.to_string())
}

fn serve(host: &str, port: u16) -> Result<()> {
    let addr: SocketAddr = format!("{host}:{port}").parse().map_err(|e| format!("bad address: {e}"))?;
    let rt = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    eprintln!("listening on http://{addr}");
    rt.block_on(tigraph_server::serve(addr)).map_err(|e| e.to_string())
}

fn families_build(args: BuildArgs) -> Result<()> {
    let spec = FamilySpec::from_tag(&args.tag, &args.params).map_err(|e| e.to_string())?;
    let mut out = io::stdout().lock();
    let res = match args.format {
        BuildFormat::Script => family_script(spec)
            .map_err(|e| e.to_string())?
            .iter()
            .try_for_each(|c| writeln!(out, "{c}")),
        BuildFormat::G6 => {
            let g = build(spec).map_err(|e| e.to_string())?.expand();
            writeln!(out, "{}", encode_graph6(&g).map_err(|e| e.to_string())?)
        }
        BuildFormat::Profile => {
            let cwp = build(spec).map_err(|e| e.to_string())?;
            let computed = cwp.fast_transmissions().map_err(|e| e.to_string())?;
            let closed = closed_form_transmissions(spec).map_err(|e| e.to_string())?;
            let spectrum = classify(&computed);
            let doc = serde_json::json!({
                "spec": spec,
                "order": cwp.order(),
                "labels": closed.labels,
                "closed_form": closed.values,
                "coverage": closed.coverage,
                "transmissions": computed,
                "spectrum": spectrum_string(&spectrum),
                "ti": spectrum.is_ti,
                "mti": spectrum.is_mti,
                "iti": spectrum.is_iti,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable"))
        }
    };
    res.map_err(|e| e.to_string())
}

fn cycle_chords(args: ChordArgs) -> Result<()> {
    let predicate: Predicate = args.predicate.parse().map_err(|e: tigraph::search::SearchError| e.to_string())?;
    let mut task = ChordSearchTask::new(args.n, args.chords, predicate).shard(args.shard, args.shards);
    if args.long_run {
        task = task.long_run();
    }
    let result = enumerate_cycle_chords(&task).map_err(|e| e.to_string())?;
    println!("n={} chords={} predicate={}", result.n, result.chords, result.predicate);
    println!("shard={}/{}", args.shard, args.shards);
    println!("visited={}", result.visited);
    println!("labelled_hits={}", result.labelled_hits);
    println!("classes={}", result.classes());
    for code in &result.representatives {
        println!("representative={code}");
    }
    if let Some(path) = &args.emit {
        let mut w = create(path)?;
        for code in &result.representatives {
            writeln!(w, "{code}").map_err(|e| e.to_string())?;
        }
        w.flush().map_err(|e| e.to_string())?;
    }
    if let Some(path) = &args.json {
        write_json(path, &serde_json::to_value(&result).map_err(|e| e.to_string())?)?;
    }
    Ok(())
}

fn census(args: CensusArgs) -> Result<()> {
    let opts = CensusOptions {
        emit_iti: args.emit_iti.is_some(),
        emit_mti: false,
    };
    let report = if args.input.as_os_str() == "-" {
        classify_stream(io::stdin().lock(), opts)
    } else {
        let f = File::open(&args.input).map_err(|e| format!("{}: {e}", args.input.display()))?;
        classify_stream(BufReader::new(f), opts)
    }
    .map_err(|e| e.to_string())?;
    print!("{}", report.to_key_value());
    if let Some(path) = &args.emit_iti {
        let mut w = create(path)?;
        for code in report.iti_codes.iter().flatten() {
            writeln!(w, "{code}").map_err(|e| e.to_string())?;
        }
        w.flush().map_err(|e| e.to_string())?;
    }
    if let Some(path) = &args.json {
        write_json(path, &serde_json::to_value(&report).map_err(|e| e.to_string())?)?;
    }
    Ok(())
}

fn conjecture(input: &Path) -> Result<()> {
    let f = File::open(input).map_err(|e| format!("{}: {e}", input.display()))?;
    let report: CensusReport =
        serde_json::from_reader(BufReader::new(f)).map_err(|e| format!("{}: {e}", input.display()))?;
    let findings = scan_order_conjecture(&report);
    let examined: Vec<String> = report.orders.keys().map(|n| n.to_string()).collect();
    println!("examined_orders={}", examined.join(","));
    println!("findings={}", findings.len());
    for f in &findings {
        println!("order={} iti={}", f.order, f.count);
        for code in &f.codes {
            println!("witness={code}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Top::Repl { log, replay } => repl(log, replay),
        Top::Serve { port, host } => serve(&host, port),
        Top::Families {
            command: FamiliesCmd::Build(args),
        } => families_build(args),
        Top::Search { command } => match command {
            SearchCmd::CycleChords(args) => cycle_chords(args),
            SearchCmd::Census(args) => census(args),
            SearchCmd::Conjecture { input } => conjecture(&input),
        },
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("archer: {e}");
            ExitCode::from(2)
        }
    }
}
