//! Command-line front end.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{self, BoundReport};
use crate::corpus::{instance_seed, standard_corpus, Family, FamilySpec, Instance};
use crate::exact::{self, SolveOptions, DEFAULT_NODE_BUDGET};
use crate::graph::Graph;
use crate::io::{self, ColoringDocument, GraphDocument, GraphFormat};
use crate::palette::{verify, Coloring};
use crate::treecactus::{self, TreePolicy};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INCOMPLETE: u8 = 2;
pub const EXIT_INVALID: u8 = 3;

const AFTER_HELP: &str = "\
Graph files are JSON ({\"name\": \"...\", \"n\": 5, \"edges\": [[0, 1], ...]}, 0-based ids)
or a plain edge list (first line \"n m\", then m lines \"u v\").

Exit codes: 0 success, 1 usage or parse error, 2 incomplete solve, 3 invalid coloring.";

const AUDIT_HELP: &str = "\
Writes one CSV row per claimed value that disagrees with the exact value.
Columns: claim, graph, n, i, claimed, oracle, direction
  direction is claimed-equality-fails or claimed-lower-bound-fails.
A file holding only the header row means no discrepancies were found.
Instances the solver cannot finish within --budget are skipped and counted
on stderr.";

#[derive(Debug, Parser)]
#[command(name = "nchroma", version, about = "Exact and bounded N_i-vertex-coloring numbers t_i(G)", after_help = AFTER_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute t_i(G) exactly.
    Solve(SolveArgs),
    /// Check a coloring against the N_i condition.
    Verify(VerifyArgs),
    /// Print every bound and claimed value for a graph.
    Bounds(BoundsArgs),
    /// Compare claimed values with exact values over a corpus.
    #[command(after_help = AUDIT_HELP)]
    Audit(AuditArgs),
    /// Build a coloring with one of the constructive methods.
    Construct(ConstructArgs),
    /// Generate a graph from a family spec such as `star:6` or `random_tree:9`.
    Gen(GenArgs),
    /// Time the exact solver over a corpus (CSV).
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Edgelist,
    Dot,
    Csv,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub graph: PathBuf,
    #[arg(long)]
    pub i: usize,
    /// Use the exhaustive partition oracle (at most 11 vertices).
    #[arg(long, conflicts_with = "budget")]
    pub oracle: bool,
    /// Search-node budget for the branch-and-bound solver.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget: u64,
    /// Single-threaded search.
    #[arg(long)]
    pub sequential: bool,
    /// Write the witness coloring here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub graph: PathBuf,
    pub coloring: PathBuf,
    /// Overrides the `i` stored in the coloring file.
    #[arg(long)]
    pub i: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    pub graph: PathBuf,
    #[arg(long)]
    pub i: usize,
    /// `json` or `csv`; a text table otherwise.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args, Clone)]
pub struct CorpusArgs {
    /// Family swept over --n.
    #[arg(long, requires = "n")]
    pub family: Option<String>,
    /// Orders for --family: `6`, `4..9` (inclusive) or `4,6,8`.
    #[arg(long)]
    pub n: Option<String>,
    /// Explicit instance `family:p1,p2,...`; repeatable.
    #[arg(long = "spec")]
    pub specs: Vec<String>,
    /// The standard corpus up to this order.
    #[arg(long)]
    pub corpus: Option<usize>,
    /// Random instances per order.
    #[arg(long, default_value_t = 1)]
    pub count: u64,
    /// Extra edges for random_connected.
    #[arg(long, default_value_t = 2)]
    pub extra: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Palette bounds: `3`, `2..4` or `2,3,4`.
    #[arg(long)]
    pub i: String,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget: u64,
    /// Audit instances one at a time.
    #[arg(long)]
    pub sequential: bool,
    /// `csv` (default) or `json`.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Layered,
    Tree,
    Cactus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Degree,
    Greedy,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(value_enum)]
    pub method: Method,
    /// Graph file; alternatively use --spec.
    #[arg(long, conflicts_with = "spec")]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub spec: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Palette bound (the cactus method always uses 3).
    #[arg(long, default_value_t = 3)]
    pub i: usize,
    #[arg(long, value_enum, default_value_t = PolicyArg::Degree)]
    pub policy: PolicyArg,
    /// Writes PREFIX.graph.json and PREFIX.coloring.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    pub spec: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long)]
    pub i: String,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget: u64,
    #[arg(long)]
    pub sequential: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Runs a parsed command, writing results to `out`; returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<u8> {
    match cli.command {
        Command::Solve(a) => cmd_solve(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Bounds(a) => cmd_bounds(a, out),
        Command::Audit(a) => cmd_audit(a, out),
        Command::Construct(a) => cmd_construct(a, out),
        Command::Gen(a) => cmd_gen(a, out),
        Command::Bench(a) => cmd_bench(a, out),
    }
}

pub fn read_graph(path: &Path) -> Result<(GraphDocument, Graph)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc = io::parse_graph(&text).with_context(|| format!("in {}", path.display()))?;
    let g = doc.to_graph()?;
    Ok((doc, g))
}

fn write_or_print(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

/// Parses `6`, `4..9`, `4..=9` (both inclusive) or `4,6,8`.
pub fn parse_range(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| anyhow!("bad number '{t}' in range '{s}'"))
    };
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            bail!("empty range '{s}'");
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(num).collect()
}

fn cmd_solve(a: SolveArgs, out: &mut dyn Write) -> Result<u8> {
    let (_, g) = read_graph(&a.graph)?;
    let res = if a.oracle {
        exact::oracle_ti(&g, a.i)?
    } else {
        exact::solve_ti_with(
            &g,
            a.i,
            SolveOptions {
                node_budget: a.budget,
                parallel: !a.sequential,
            },
        )?
    };
    let status = if res.complete {
        "complete"
    } else {
        "incomplete"
    };
    writeln!(out, "t_{} = {} ({status})", a.i, res.value)?;
    writeln!(out, "nodes: {}", res.nodes)?;
    if let Some(path) = &a.out {
        let doc = ColoringDocument {
            i: Some(a.i),
            colors: res.witness.clone(),
        };
        fs::write(path, io::write_coloring(&doc))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if res.complete {
        EXIT_OK
    } else {
        EXIT_INCOMPLETE
    })
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> Result<u8> {
    let (_, g) = read_graph(&a.graph)?;
    let text = fs::read_to_string(&a.coloring)
        .with_context(|| format!("reading {}", a.coloring.display()))?;
    let doc = io::parse_coloring(&text).with_context(|| format!("in {}", a.coloring.display()))?;
    let i = a
        .i
        .or(doc.i)
        .ok_or_else(|| anyhow!("no palette bound: pass --i or store \"i\" in the coloring file"))?;
    let verdict = verify(&g, &doc.colors, i)?;
    if verdict.valid {
        writeln!(out, "VALID (N_{i}, {} colors)", doc.colors.color_count())?;
        return Ok(EXIT_OK);
    }
    writeln!(out, "INVALID (N_{i})")?;
    for v in &verdict.violations {
        writeln!(out, "vertex {}: palette size {}", v.vertex, v.palette_size)?;
    }
    Ok(EXIT_INVALID)
}

pub fn format_report(rep: &BoundReport) -> String {
    let mut s = format!("n = {}, i = {}\n", rep.n, rep.i);
    s.push_str(&format!(
        "{:<26} {:<12} {:>6}  {:<10} {}\n",
        "entry", "kind", "value", "tier", "statement"
    ));
    for e in rep.applicable() {
        let tier = if e.sound { "sound" } else { "claimed" };
        s.push_str(&format!(
            "{:<26} {:<12} {:>6}  {:<10} {}\n",
            e.name,
            e.kind.to_string(),
            e.value,
            tier,
            e.anchor
        ));
    }
    s
}

fn cmd_bounds(a: BoundsArgs, out: &mut dyn Write) -> Result<u8> {
    let (_, g) = read_graph(&a.graph)?;
    let rep = bounds::report(&g, a.i)?;
    match a.format {
        Some(Format::Json) => writeln!(out, "{}", serde_json::to_string_pretty(&rep)?)?,
        Some(Format::Csv) => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for e in &rep.entries {
                w.serialize(e)?;
            }
            out.write_all(&w.into_inner().map_err(|e| anyhow!("{}", e.error()))?)?;
        }
        Some(other) => bail!("bounds supports --format json or csv, not {other:?}"),
        None => out.write_all(format_report(&rep).as_bytes())?,
    }
    Ok(EXIT_OK)
}

/// Instances selected by the corpus flags, in a fixed order: explicit
/// specs, then the family sweep, then the standard corpus.
pub fn select_instances(c: &CorpusArgs) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    for (k, s) in c.specs.iter().enumerate() {
        let spec: FamilySpec = s.parse()?;
        out.push(Instance::from_spec(spec, instance_seed(c.seed, k as u64))?);
    }
    if let Some(name) = &c.family {
        let family: Family = name.parse()?;
        let orders = parse_range(c.n.as_deref().unwrap_or_default())?;
        let mut k = 0;
        for n in orders {
            for params in sweep_params(family, n, c.extra)? {
                let draws = if family.is_random() { c.count } else { 1 };
                for _ in 0..draws {
                    let spec = FamilySpec::new(family, params.clone())?;
                    out.push(Instance::from_spec(spec, instance_seed(c.seed, k))?);
                    k += 1;
                }
            }
        }
    }
    if let Some(max_n) = c.corpus {
        out.extend(standard_corpus(max_n, c.count, c.seed));
    }
    if out.is_empty() {
        bail!("no instances selected: use --family with --n, --spec, or --corpus");
    }
    Ok(out)
}

/// Parameter lists of `family` that produce graphs of order `n`.
fn sweep_params(family: Family, n: usize, extra: usize) -> Result<Vec<Vec<usize>>> {
    Ok(match family {
        Family::Star
        | Family::Path
        | Family::Cycle
        | Family::Complete
        | Family::RandomTree
        | Family::RandomCactus => {
            vec![vec![n]]
        }
        Family::RandomConnected => {
            let room = (n * n.saturating_sub(1) / 2).saturating_sub(n.saturating_sub(1));
            vec![vec![n, extra.min(room)]]
        }
        Family::MaxdegExtremal => (1..n.saturating_sub(2)).map(|k| vec![n, k]).collect(),
        Family::DoubleStar => (1..n.saturating_sub(2))
            .map(|a| (a, n - 2 - a))
            .filter(|&(a, b)| a <= b)
            .map(|(a, b)| vec![a, b])
            .collect(),
        Family::VcExtremal | Family::SeqJoinComplete => {
            bail!("family {family} is not indexed by order; use --spec {family}:...")
        }
    })
}

fn cmd_audit(a: AuditArgs, out: &mut dyn Write) -> Result<u8> {
    let instances = select_instances(&a.corpus)?;
    let is = parse_range(&a.i)?;
    if is.contains(&0) {
        bail!("i must be at least 1");
    }
    let opts = SolveOptions {
        node_budget: a.budget,
        parallel: !a.sequential,
    };
    let result = bounds::audit_instances(&instances, &is, opts, !a.sequential)?;
    let text = match a.format {
        None | Some(Format::Csv) => io::discrepancies_csv(&result.discrepancies)?,
        Some(Format::Json) => io::discrepancies_json(&result.discrepancies),
        Some(other) => bail!("audit supports --format csv or json, not {other:?}"),
    };
    write_or_print(a.out.as_deref(), &text, out)?;
    eprintln!(
        "audited {} pairs: {} discrepancies, {} inconclusive",
        result.conclusive + result.inconclusive.len(),
        result.discrepancies.len(),
        result.inconclusive.len()
    );
    for (name, i) in &result.inconclusive {
        eprintln!("inconclusive: {name} i={i}");
    }
    Ok(EXIT_OK)
}

fn cmd_construct(a: ConstructArgs, out: &mut dyn Write) -> Result<u8> {
    let (doc, g) = match (&a.graph, &a.spec) {
        (Some(path), _) => read_graph(path)?,
        (None, Some(spec)) => {
            let spec: FamilySpec = spec.parse()?;
            let inst = Instance::from_spec(spec, a.seed)?;
            let doc = GraphDocument::from_graph(&inst.graph, Some(inst.name));
            (doc, inst.graph)
        }
        (None, None) => bail!("construct needs --graph or --spec"),
    };
    let policy = match a.policy {
        PolicyArg::Degree => TreePolicy::DegreeBound,
        PolicyArg::Greedy => TreePolicy::PaletteGreedy,
    };
    let (i, (coloring, count)): (usize, (Coloring, usize)) = match a.method {
        Method::Layered => (a.i, treecactus::layered_coloring(&g, a.i)?),
        Method::Tree => (a.i, treecactus::tree_inductive(&g, a.i, policy)?),
        Method::Cactus => (3, treecactus::cactus_inductive(&g)?),
    };
    let verdict = verify(&g, &coloring, i)?;
    let status = if verdict.valid { "VALID" } else { "INVALID" };
    writeln!(out, "colors: {count}")?;
    writeln!(out, "{status} (N_{i})")?;
    let cdoc = ColoringDocument {
        i: Some(i),
        colors: coloring,
    };
    match &a.out {
        Some(prefix) => {
            let base = prefix.display().to_string();
            fs::write(
                format!("{base}.graph.json"),
                io::write_graph(&doc, GraphFormat::Json, None),
            )?;
            fs::write(format!("{base}.coloring.json"), io::write_coloring(&cdoc))?;
        }
        None => out.write_all(io::write_coloring(&cdoc).as_bytes())?,
    }
    Ok(if verdict.valid { EXIT_OK } else { EXIT_INVALID })
}

fn cmd_gen(a: GenArgs, out: &mut dyn Write) -> Result<u8> {
    let spec: FamilySpec = a.spec.parse()?;
    let inst = Instance::from_spec(spec, a.seed)?;
    let doc = GraphDocument::from_graph(&inst.graph, Some(inst.name));
    let format = match a.format {
        Format::Json => GraphFormat::Json,
        Format::Edgelist => GraphFormat::EdgeList,
        Format::Dot => GraphFormat::Dot,
        Format::Csv => bail!("gen supports --format json, edgelist or dot"),
    };
    write_or_print(a.out.as_deref(), &io::write_graph(&doc, format, None), out)?;
    Ok(EXIT_OK)
}

fn cmd_bench(a: BenchArgs, out: &mut dyn Write) -> Result<u8> {
    let instances = select_instances(&a.corpus)?;
    let is = parse_range(&a.i)?;
    let opts = SolveOptions {
        node_budget: a.budget,
        parallel: !a.sequential,
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["graph", "n", "i", "value", "complete", "nodes", "micros"])?;
    for inst in &instances {
        for &i in &is {
            let start = Instant::now();
            let res = exact::solve_ti_with(&inst.graph, i, opts)?;
            let micros = start.elapsed().as_micros();
            w.write_record([
                inst.name.clone(),
                inst.graph.n().to_string(),
                i.to_string(),
                res.value.to_string(),
                res.complete.to_string(),
                res.nodes.to_string(),
                micros.to_string(),
            ])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| anyhow!("{}", e.error()))?;
    write_or_print(a.out.as_deref(), &String::from_utf8(bytes)?, out)?;
    Ok(EXIT_OK)
}
