//! `gossip`: command-line toolkit for the binary trust-gossip model.
//!
//! Deterministic data goes to stdout (or `--out`); timing and progress
//! diagnostics go to stderr. Exit codes: 0 success, 1 verification
//! mismatch, 2 usage or I/O error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gossip_core::classify::{class_census, count_classes, StateSource};
use gossip_core::count::{
    labeled_sequence, plane_partitions, PLANE_PARTITION_MAX_N, RECURRENCE_MAX_N,
};
use gossip_core::dynamics::{build_graph, scc};
use gossip_core::enumerate::{constructive_all, scan_all, EnumerationReport};
use gossip_core::simulate::{run_trajectory, trajectory_seed, SplitMix64};
use gossip_core::TrustMatrix;

#[derive(Parser)]
#[command(
    name = "gossip",
    version,
    about = "Simulate, enumerate, classify, and count absorbing states of the binary trust-gossip model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recompute absorbing-state counts and check them against the
    /// closed-form sequences (labeled vs. A143405, unlabeled vs. A000219)
    Verify {
        /// Largest agent count to verify (up to 6, or 7 with --slow)
        #[arg(long, default_value_t = 5)]
        n_max: u8,
        #[command(flatten)]
        workers: WorkerArgs,
        /// Allow the n=7 row (constructive route; brute force stays off)
        #[arg(long)]
        slow: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// List or count all absorbing states for one agent count
    Enumerate {
        /// Agent count (brute method up to 6, or 7 with --slow;
        /// constructive method up to 7)
        #[arg(long)]
        n: u8,
        /// How to find the states
        #[arg(long, value_enum, default_value_t = MethodArg::Brute)]
        method: MethodArg,
        /// Also write the states themselves, one hex encoding per line,
        /// ascending (brute method up to n=6)
        #[arg(long, value_name = "PATH")]
        states: Option<PathBuf>,
        #[command(flatten)]
        workers: WorkerArgs,
        /// Allow the 2^42-state brute scan at n=7
        #[arg(long)]
        slow: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print a closed-form count sequence, one `n,value` row per index
    Count {
        /// Largest index to print (labeled up to 256, unlabeled up to 10000)
        #[arg(long)]
        n: usize,
        /// Labeled counts: absorbing matrices on n distinguishable agents
        #[arg(long, group = "sequence", required = true)]
        labeled: bool,
        /// Unlabeled counts: absorbing matrices up to agent relabeling
        #[arg(long, group = "sequence")]
        unlabeled: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Census of absorbing states by class (faction size, core size)
    Classify {
        /// Agent count (constructive source up to 7, brute source up to 6)
        #[arg(long)]
        n: u8,
        /// Where the states come from
        #[arg(long, value_enum, default_value_t = SourceArg::Constructive)]
        source: SourceArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Build the full transition graph and report its structure
    Dynamics {
        /// Agent count (up to 4, or 5 with --slow)
        #[arg(long)]
        n: u8,
        /// Print the per-edge-count census of transient and absorbing
        /// states (the default output; explicit when combined with --edges)
        #[arg(long)]
        census: bool,
        /// Also write the edge list, one `src_hex dst_hex` pair per line
        #[arg(long, value_name = "PATH")]
        edges: Option<PathBuf>,
        /// Allow the 2^20-node graph at n=5
        #[arg(long)]
        slow: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run seeded gossip trajectories and log one CSV row per trajectory
    Simulate {
        /// Agent count (all-states mode up to 5; --start/--sample up to 8)
        #[arg(long)]
        n: u8,
        /// Single start state as a hex encoding (optionally 0x-prefixed)
        #[arg(long, value_name = "HEX", conflicts_with = "sample")]
        start: Option<String>,
        /// Sample this many start states from the master seed's stream
        #[arg(long, value_name = "COUNT")]
        sample: Option<u64>,
        /// Trajectories per start state
        #[arg(long, default_value_t = 1)]
        seeds_per_state: u64,
        /// Master seed; per-trajectory seeds are derived from it, the
        /// start state, and the replicate index
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Step cap per trajectory; trajectories that hit it are logged
        /// as absorbed=false
        #[arg(long, default_value_t = 1_000_000)]
        max_steps: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct WorkerArgs {
    /// Worker threads (default: GOSSIP_THREADS or the CPU count)
    #[arg(long, env = "GOSSIP_THREADS")]
    workers: Option<usize>,
}

impl WorkerArgs {
    fn resolve(&self) -> Result<usize, String> {
        match self.workers {
            Some(0) => Err("worker count must be at least 1".into()),
            Some(w) => Ok(w),
            None => Ok(std::thread::available_parallelism().map_or(1, |v| v.get())),
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output format for the data written to stdout or --out
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the data to this file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Brute,
    Constructive,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SourceArg {
    Brute,
    Constructive,
}

/// One output value; CSV renders all variants as plain text, JSON keeps
/// numbers and booleans typed and renders arbitrary-precision values as
/// decimal strings.
enum Cell {
    U64(u64),
    Big(String),
    Str(String),
    Bool(bool),
}

impl Cell {
    fn plain(&self) -> String {
        match self {
            Cell::U64(v) => v.to_string(),
            Cell::Big(s) | Cell::Str(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::U64(v) => (*v).into(),
            Cell::Big(s) | Cell::Str(s) => s.clone().into(),
            Cell::Bool(b) => (*b).into(),
        }
    }
}

/// Tabular output with one fixed column set, rendered per `--format`.
struct Table {
    columns: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut s = self.columns.join(",");
                s.push('\n');
                for row in &self.rows {
                    let fields: Vec<String> = row.iter().map(Cell::plain).collect();
                    s.push_str(&fields.join(","));
                    s.push('\n');
                }
                s
            }
            Format::Json => {
                let rows: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let mut obj = serde_json::Map::new();
                        for (column, cell) in self.columns.iter().zip(row) {
                            obj.insert((*column).to_string(), cell.json());
                        }
                        serde_json::Value::Object(obj)
                    })
                    .collect();
                let mut s = serde_json::to_string(&rows).expect("tables serialize without error");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut s = String::new();
                for row in &self.rows {
                    let fields: Vec<String> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(column, cell)| format!("{column}={}", cell.plain()))
                        .collect();
                    s.push_str(&fields.join(" "));
                    s.push('\n');
                }
                s
            }
        }
    }
}

fn emit(output: &OutputArgs, table: &Table) -> Result<(), String> {
    let data = table.render(output.format);
    match &output.out {
        Some(path) => {
            std::fs::write(path, data).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => std::io::stdout()
            .write_all(data.as_bytes())
            .map_err(|e| format!("cannot write to stdout: {e}")),
    }
}

fn write_text_file(path: &PathBuf, data: &str) -> Result<(), String> {
    std::fs::write(path, data).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<u8, String> {
    match command {
        Command::Verify {
            n_max,
            workers,
            slow,
            output,
        } => cmd_verify(n_max, workers.resolve()?, slow, &output),
        Command::Enumerate {
            n,
            method,
            states,
            workers,
            slow,
            output,
        } => cmd_enumerate(n, method, states, workers.resolve()?, slow, &output),
        Command::Count {
            n,
            labeled,
            unlabeled: _,
            output,
        } => cmd_count(n, labeled, &output),
        Command::Classify { n, source, output } => cmd_classify(n, source, &output),
        Command::Dynamics {
            n,
            census,
            edges,
            slow,
            output,
        } => cmd_dynamics(n, census, edges, slow, &output),
        Command::Simulate {
            n,
            start,
            sample,
            seeds_per_state,
            seed,
            max_steps,
            output,
        } => cmd_simulate(n, start, sample, seeds_per_state, seed, max_steps, &output),
    }
}

fn cmd_verify(n_max: u8, workers: usize, slow: bool, output: &OutputArgs) -> Result<u8, String> {
    if n_max == 0 {
        return Err("--n-max must be at least 1".into());
    }
    let limit = if slow { 7 } else { 6 };
    if n_max > limit {
        return Err(format!(
            "verify supports --n-max up to 6, or 7 with --slow (got {n_max})"
        ));
    }

    let labeled_closed = labeled_sequence(usize::from(n_max));
    let unlabeled_closed = plane_partitions(usize::from(n_max));
    let mut table = Table {
        columns: &[
            "n",
            "state_space",
            "labeled",
            "a143405",
            "unlabeled",
            "a000219",
        ],
        rows: Vec::new(),
    };
    let mut all_match = true;
    for n in 1..=n_max {
        let report = if n <= 6 {
            scan_all(n, workers, false)
        } else {
            constructive_all(n, false)
        }
        .map_err(|e| e.to_string())?;
        eprintln!("{}", report.record_line());
        let labeled = report.labeled_count;
        let unlabeled = count_classes(n, StateSource::Constructive).map_err(|e| e.to_string())?;
        let a143405: u64 = (&labeled_closed[usize::from(n)])
            .try_into()
            .expect("labeled counts fit u64 for n <= 7");
        let a000219: u64 = (&unlabeled_closed[usize::from(n)])
            .try_into()
            .expect("unlabeled counts fit u64 for n <= 7");
        let state_space = 1u64 << (u32::from(n) * u32::from(n - 1));
        if labeled != a143405 || unlabeled != a000219 {
            all_match = false;
            eprintln!(
                "mismatch at n={n}: labeled={labeled} a143405={a143405} unlabeled={unlabeled} a000219={a000219}"
            );
        }
        table.rows.push(vec![
            Cell::U64(u64::from(n)),
            Cell::U64(state_space),
            Cell::U64(labeled),
            Cell::U64(a143405),
            Cell::U64(unlabeled),
            Cell::U64(a000219),
        ]);
    }
    emit(output, &table)?;
    Ok(u8::from(!all_match))
}

fn cmd_enumerate(
    n: u8,
    method: MethodArg,
    states: Option<PathBuf>,
    workers: usize,
    slow: bool,
    output: &OutputArgs,
) -> Result<u8, String> {
    let collect = states.is_some();
    let report: EnumerationReport = match method {
        MethodArg::Brute => {
            if n == 7 && !slow {
                return Err(
                    "brute-force enumeration at n=7 scans 2^42 states; pass --slow to allow it, or use --method constructive"
                        .into(),
                );
            }
            scan_all(n, workers, collect).map_err(|e| e.to_string())?
        }
        MethodArg::Constructive => constructive_all(n, collect).map_err(|e| e.to_string())?,
    };
    eprintln!("{}", report.record_line());

    if let Some(path) = states {
        let mut listing = String::new();
        for state in report.states.as_deref().unwrap_or_default() {
            listing.push_str(&state.hex());
            listing.push('\n');
        }
        write_text_file(&path, &listing)?;
    }

    let table = Table {
        columns: &["n", "method", "count"],
        rows: vec![vec![
            Cell::U64(u64::from(report.n)),
            Cell::Str(report.method.to_string()),
            Cell::U64(report.labeled_count),
        ]],
    };
    emit(output, &table)?;
    Ok(0)
}

fn cmd_count(n: usize, labeled: bool, output: &OutputArgs) -> Result<u8, String> {
    let values = if labeled {
        if n > RECURRENCE_MAX_N {
            return Err(format!(
                "--labeled supports --n up to {RECURRENCE_MAX_N} (got {n})"
            ));
        }
        labeled_sequence(n)
    } else {
        if n > PLANE_PARTITION_MAX_N {
            return Err(format!(
                "--unlabeled supports --n up to {PLANE_PARTITION_MAX_N} (got {n})"
            ));
        }
        plane_partitions(n)
    };
    let table = Table {
        columns: &["n", "value"],
        rows: values
            .iter()
            .enumerate()
            .map(|(i, v)| vec![Cell::U64(i as u64), Cell::Big(v.to_string())])
            .collect(),
    };
    emit(output, &table)?;
    Ok(0)
}

fn cmd_classify(n: u8, source: SourceArg, output: &OutputArgs) -> Result<u8, String> {
    let source = match source {
        SourceArg::Brute => StateSource::Brute,
        SourceArg::Constructive => StateSource::Constructive,
    };
    let census = class_census(n, source).map_err(|e| e.to_string())?;
    let total: u64 = census.iter().map(|(_, count)| count).sum();
    eprintln!("n={n} classes={} states={total}", census.len());
    let table = Table {
        columns: &["k_m_multiset", "labeled_count"],
        rows: census
            .into_iter()
            .map(|(class, count)| vec![Cell::Str(class.to_string()), Cell::U64(count)])
            .collect(),
    };
    emit(output, &table)?;
    Ok(0)
}

fn cmd_dynamics(
    n: u8,
    census: bool,
    edges: Option<PathBuf>,
    slow: bool,
    output: &OutputArgs,
) -> Result<u8, String> {
    if n == 5 && !slow {
        return Err("the n=5 transition graph has 2^20 nodes; pass --slow to allow it".into());
    }
    let graph = build_graph(n).map_err(|e| e.to_string())?;
    let report = scc(&graph);
    eprintln!(
        "n={n} nodes={} edges={} components={} terminal={} suspects={}",
        graph.node_count(),
        graph.edge_count(),
        report.component_count,
        report.terminal_components.len(),
        report.limit_cycle_suspects.len()
    );

    if let Some(path) = &edges {
        let mut listing = String::new();
        for (src, dst) in graph.edge_pairs() {
            let src_hex = TrustMatrix::from_u64(n, src)
                .expect("graph node is valid")
                .hex();
            let dst_hex = TrustMatrix::from_u64(n, dst)
                .expect("graph node is valid")
                .hex();
            listing.push_str(&src_hex);
            listing.push(' ');
            listing.push_str(&dst_hex);
            listing.push('\n');
        }
        write_text_file(path, &listing)?;
    }

    if census || edges.is_none() {
        let table = Table {
            columns: &["edge_count", "transient", "absorbing"],
            rows: report
                .census
                .iter()
                .map(|row| {
                    vec![
                        Cell::U64(u64::from(row.edge_count)),
                        Cell::U64(row.transient),
                        Cell::U64(row.absorbing),
                    ]
                })
                .collect(),
        };
        emit(output, &table)?;
    }
    Ok(0)
}

fn cmd_simulate(
    n: u8,
    start: Option<String>,
    sample: Option<u64>,
    seeds_per_state: u64,
    seed: u64,
    max_steps: u64,
    output: &OutputArgs,
) -> Result<u8, String> {
    if n == 0 || n > 16 {
        return Err(format!("agent count must be between 1 and 16 (got {n})"));
    }
    let bits = u32::from(n) * u32::from(n - 1);
    let starts: Vec<TrustMatrix> = if let Some(hex) = &start {
        if n > 8 {
            return Err(format!("--start supports --n up to 8 (got {n})"));
        }
        let bare = hex.strip_prefix("0x").or_else(|| hex.strip_prefix("0X"));
        let state = TrustMatrix::from_hex(n, bare.unwrap_or(hex)).map_err(|e| e.to_string())?;
        vec![state]
    } else if let Some(count) = sample {
        if n > 8 {
            return Err(format!("--sample supports --n up to 8 (got {n})"));
        }
        let space = 1u64 << bits;
        let mut rng = SplitMix64::new(seed);
        (0..count)
            .map(|_| {
                TrustMatrix::from_u64(n, rng.uniform(space)).expect("sampled encoding in range")
            })
            .collect()
    } else {
        if n > 5 {
            return Err(format!(
                "all-states mode supports --n up to 5 (got {n}); pass --start or --sample for larger systems"
            ));
        }
        (0..1u64 << bits)
            .map(|enc| TrustMatrix::from_u64(n, enc).expect("scanned encoding in range"))
            .collect()
    };

    let mut table = Table {
        columns: &[
            "start_hex",
            "seed",
            "absorbed",
            "steps",
            "final_hex",
            "class",
        ],
        rows: Vec::new(),
    };
    let mut absorbed_count = 0u64;
    for state in &starts {
        for replicate in 0..seeds_per_state {
            let trajectory_seed = trajectory_seed(seed, state, replicate);
            let result = run_trajectory(state, trajectory_seed, max_steps);
            absorbed_count += u64::from(result.absorbed);
            table.rows.push(vec![
                Cell::Str(result.start.hex()),
                Cell::U64(result.seed),
                Cell::Bool(result.absorbed),
                Cell::U64(result.steps_taken),
                Cell::Str(result.final_state.hex()),
                Cell::Str(
                    result
                        .final_class
                        .map_or_else(String::new, |class| class.to_string()),
                ),
            ]);
        }
    }
    let total = table.rows.len() as u64;
    eprintln!(
        "n={n} trajectories={total} absorbed={absorbed_count} unabsorbed={}",
        total - absorbed_count
    );
    emit(output, &table)?;
    Ok(0)
}
