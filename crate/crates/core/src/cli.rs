//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 scale refusal, 4 a
//! verification check failed.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::autsearch::{automorphism_group_with, SearchConfig, SearchError};
use crate::constructions::{bipartite_generator_set, predicted_order, predicted_order_cube, product_subgroup_generator_set, Generator, PredictedAut};
use crate::factorization::prime_factor_decomposition;
use crate::graph::{
    cartesian_product, complete_bipartite, complete_graph, cycle_graph, hypercube, path_graph, star_graph, BipartiteSpec,
    Graph,
};
use crate::perm::Permutation;
use crate::token::{binomial, token_graph};
use crate::verify::{exhaustive_cross_check, verify_bipartite, verify_cube, verify_product, ScaleGuard, VerificationReport, VerifyError, TOOL_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SCALE: i32 = 3;
pub const EXIT_FAILED: i32 = 4;

const GRAMMAR: &str = "kmn:M,N | kn:N | k2 | path:N | cycle:N | star:N | cube:R | prod:<spec>+<spec>+... | file:<path>";

/// A textual graph constructor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphSpecifier {
    Kmn(usize, usize),
    Kn(usize),
    Path(usize),
    Cycle(usize),
    Star(usize),
    Cube(usize),
    Prod(Vec<GraphSpecifier>),
    File(PathBuf),
}

fn parse_count(s: &str, whole: &str) -> Result<usize, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("bad number `{s}` in graph spec `{whole}`; expected {GRAMMAR}"))
}

impl FromStr for GraphSpecifier {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "k2" {
            return Ok(GraphSpecifier::Kn(2));
        }
        let Some((head, rest)) = s.split_once(':') else {
            return Err(format!("unknown graph spec `{s}`; expected {GRAMMAR}"));
        };
        match head {
            "kmn" => {
                let (a, b) = rest
                    .split_once(',')
                    .ok_or_else(|| format!("`{s}` needs two sizes; expected kmn:M,N"))?;
                Ok(GraphSpecifier::Kmn(parse_count(a, s)?, parse_count(b, s)?))
            }
            "kn" => Ok(GraphSpecifier::Kn(parse_count(rest, s)?)),
            "path" => Ok(GraphSpecifier::Path(parse_count(rest, s)?)),
            "cycle" => Ok(GraphSpecifier::Cycle(parse_count(rest, s)?)),
            "star" => Ok(GraphSpecifier::Star(parse_count(rest, s)?)),
            "cube" => Ok(GraphSpecifier::Cube(parse_count(rest, s)?)),
            "prod" => Ok(GraphSpecifier::Prod(parse_factor_list(rest)?)),
            "file" if !rest.is_empty() => Ok(GraphSpecifier::File(PathBuf::from(rest))),
            _ => Err(format!("unknown graph spec `{s}`; expected {GRAMMAR}")),
        }
    }
}

/// Parses `spec+spec+…`; nested products are not allowed.
pub fn parse_factor_list(s: &str) -> Result<Vec<GraphSpecifier>, String> {
    let parts: Vec<GraphSpecifier> = s.split('+').map(str::parse).collect::<Result<_, _>>()?;
    if parts.iter().any(|p| matches!(p, GraphSpecifier::Prod(_))) {
        return Err(format!("nested prod in `{s}`"));
    }
    if parts.len() < 2 {
        return Err(format!("a product needs at least two factors: `{s}`"));
    }
    Ok(parts)
}

impl GraphSpecifier {
    pub fn build(&self) -> Result<Graph, String> {
        let g = match self {
            GraphSpecifier::Kmn(m, n) => complete_bipartite(BipartiteSpec::new(*m, *n)),
            GraphSpecifier::Kn(n) => complete_graph(*n),
            GraphSpecifier::Path(n) => path_graph(*n),
            GraphSpecifier::Cycle(n) => cycle_graph(*n),
            GraphSpecifier::Star(n) => star_graph(*n),
            GraphSpecifier::Cube(r) => hypercube(*r),
            GraphSpecifier::Prod(parts) => {
                let factors = parts.iter().map(GraphSpecifier::build).collect::<Result<Vec<_>, _>>()?;
                cartesian_product(&factors)
            }
            GraphSpecifier::File(path) => {
                let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                Graph::parse_edge_list(&text)
            }
        };
        g.map_err(|e| e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "tokaut", version, about = "Token graphs and their automorphism groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GuardArgs {
    /// Largest token graph accepted.
    #[arg(long, default_value_t = 300)]
    pub max_vertices: usize,
    /// Largest number of search-tree nodes before giving up.
    #[arg(long, default_value_t = 10_000_000)]
    pub max_nodes: u64,
}

impl GuardArgs {
    fn guard(&self) -> ScaleGuard {
        ScaleGuard {
            max_vertices: self.max_vertices,
            max_nodes: self.max_nodes,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the edge list of F_k(G) and a rank-to-configuration sidecar.
    Build {
        #[arg(long)]
        graph: GraphSpecifier,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        guard: GuardArgs,
    },
    /// Compute the automorphism group of an edge list.
    Aut {
        #[arg(long = "in", conflicts_with = "graph", required_unless_present = "graph")]
        input: Option<PathBuf>,
        #[arg(long)]
        graph: Option<GraphSpecifier>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        guard: GuardArgs,
    },
    /// Emit the explicit generators and predicted order.
    Generators {
        #[command(subcommand)]
        family: Family,
    },
    /// Prime factorization with respect to the Cartesian product.
    Factor {
        #[arg(long = "in", conflicts_with = "graph", required_unless_present = "graph")]
        input: Option<PathBuf>,
        #[arg(long)]
        graph: Option<GraphSpecifier>,
        /// Directory receiving one edge list per factor.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare computed, predicted and generated groups.
    Verify {
        #[command(subcommand)]
        family: Family,
    },
}

#[derive(Subcommand, Debug)]
pub enum Family {
    /// F_k(K_{m,n}); each flag takes a comma-separated list.
    Bipartite {
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// F_2(Q_r).
    Cube {
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// F_2(G_1 □ … □ G_r); repeat the flag for several products.
    Product {
        #[arg(long, required = true)]
        factors: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// JSON-lines output, one object per instance; stdout if absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Worker threads for independent instances.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[command(flatten)]
    pub guard: GuardArgs,
}

/// A failure carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        let code = match e {
            VerifyError::Scale(_) => EXIT_SCALE,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

/// Writes `contents` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

fn emit(report: Option<&Path>, lines: &[String], out: &mut dyn Write) -> Result<(), CliError> {
    let mut text = lines.join("\n");
    text.push('\n');
    match report {
        Some(p) => write_atomic(p, text.as_bytes())
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::usage(format!("stdout: {e}"))),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("reports serialize")
}

fn load(input: &Option<PathBuf>, graph: &Option<GraphSpecifier>) -> Result<Graph, CliError> {
    let spec = match (input, graph) {
        (Some(p), _) => GraphSpecifier::File(p.clone()),
        (None, Some(s)) => s.clone(),
        (None, None) => return Err(CliError::usage("need --in or --graph")),
    };
    spec.build().map_err(CliError::usage)
}

fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::usage(e.to_string()))
}

#[derive(Serialize)]
struct AutReport {
    tool_version: &'static str,
    vertex_count: usize,
    edge_count: usize,
    order: String,
    generators: Vec<Permutation>,
    base: Vec<usize>,
    orbit_sizes: Vec<usize>,
    exhaustive_recount: Option<bool>,
    node_count: u64,
    wall_time_ms: u128,
}

#[derive(Serialize)]
struct GeneratorReport {
    family: &'static str,
    vertex_count: usize,
    predicted: PredictedAut,
    generated_order: String,
    generators: Vec<Generator>,
}

#[derive(Serialize)]
struct FactorReport {
    vertex_count: usize,
    prime: bool,
    factors: Vec<FactorEntry>,
}

#[derive(Serialize)]
struct FactorEntry {
    vertices: usize,
    edges: usize,
    file: Option<String>,
}

fn bipartite_params(m: &[usize], n: &[usize], k: &[usize]) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for &a in m {
        for &b in n {
            for &c in k {
                out.push((a, b, c));
            }
        }
    }
    out
}

fn parse_products(list: &[String]) -> Result<Vec<Vec<Graph>>, CliError> {
    list.iter()
        .map(|s| {
            let specs = parse_factor_list(s.strip_prefix("prod:").unwrap_or(s)).map_err(CliError::usage)?;
            specs.iter().map(|p| p.build().map_err(CliError::usage)).collect()
        })
        .collect()
}

fn generator_report(
    family: &'static str,
    predicted: PredictedAut,
    degree: usize,
    generators: Vec<Generator>,
) -> GeneratorReport {
    let perms: Vec<Permutation> = generators.iter().map(|g| g.perm.clone()).collect();
    let generated = if perms.is_empty() {
        "1".to_string()
    } else {
        crate::perm::schreier_sims(&perms).expect("shared degree").order().to_string()
    };
    GeneratorReport {
        family,
        vertex_count: degree,
        predicted,
        generated_order: generated,
        generators,
    }
}

fn run_generators(family: &Family, out: &mut dyn Write) -> Result<i32, CliError> {
    let construction = |e: crate::constructions::ConstructionError| CliError::usage(e.to_string());
    let (common, results): (&Common, Vec<Result<String, CliError>>) = match family {
        Family::Bipartite { m, n, k, common } => {
            let guard = common.guard.guard();
            let params = bipartite_params(m, n, k);
            let pool = thread_pool(common.jobs)?;
            let res = pool.install(|| {
                params
                    .par_iter()
                    .map(|&(m, n, k)| {
                        let predicted = predicted_order(m, n, k).map_err(construction)?;
                        if binomial(m + n, k) > guard.max_vertices {
                            return Err(VerifyError::Scale(format!("F_{k}(K_{{{m},{n}}}) exceeds the vertex limit")).into());
                        }
                        let (tg, gens) = bipartite_generator_set(m, n, k).map_err(construction)?;
                        Ok(to_json(&generator_report("bipartite", predicted, tg.vertex_count(), gens)))
                    })
                    .collect()
            });
            (common, res)
        }
        Family::Cube { r, common } => {
            let guard = common.guard.guard();
            let pool = thread_pool(common.jobs)?;
            let res = pool.install(|| {
                r.par_iter()
                    .map(|&r| {
                        let predicted = predicted_order_cube(r).map_err(construction)?;
                        if r >= 16 || binomial(1 << r, 2) > guard.max_vertices {
                            return Err(VerifyError::Scale(format!("F_2(Q_{r}) exceeds the vertex limit")).into());
                        }
                        let factors = vec![complete_graph(2).expect("K_2"); r];
                        let (tg, gens) = product_subgroup_generator_set(&factors).map_err(construction)?;
                        Ok(to_json(&generator_report("cube", predicted, tg.vertex_count(), gens)))
                    })
                    .collect()
            });
            (common, res)
        }
        Family::Product { factors, common } => {
            let guard = common.guard.guard();
            let products = parse_products(factors)?;
            let pool = thread_pool(common.jobs)?;
            let res = pool.install(|| {
                products
                    .par_iter()
                    .map(|fs| {
                        let size: usize = fs.iter().map(Graph::n).product();
                        if binomial(size, 2) > guard.max_vertices {
                            return Err(VerifyError::Scale("F_2 of the product exceeds the vertex limit".into()).into());
                        }
                        let (tg, gens) = product_subgroup_generator_set(fs).map_err(construction)?;
                        let base_order = crate::autsearch::automorphism_group(tg.base()).order();
                        let predicted = crate::constructions::predicted_order_product(fs, &base_order);
                        Ok(to_json(&generator_report("product", predicted, tg.vertex_count(), gens)))
                    })
                    .collect()
            });
            (common, res)
        }
    };
    let lines = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    emit(common.report.as_deref(), &lines, out)?;
    Ok(EXIT_OK)
}

fn run_verify(family: &Family, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let (common, results): (&Common, Vec<Result<VerificationReport, VerifyError>>) = match family {
        Family::Bipartite { m, n, k, common } => {
            let guard = common.guard.guard();
            let params = bipartite_params(m, n, k);
            let pool = thread_pool(common.jobs)?;
            let res = pool.install(|| params.par_iter().map(|&(m, n, k)| verify_bipartite(m, n, k, &guard)).collect());
            (common, res)
        }
        Family::Cube { r, common } => {
            let guard = common.guard.guard();
            let pool = thread_pool(common.jobs)?;
            let res = pool.install(|| r.par_iter().map(|&r| verify_cube(r, &guard)).collect());
            (common, res)
        }
        Family::Product { factors, common } => {
            let guard = common.guard.guard();
            let products = parse_products(factors)?;
            let pool = thread_pool(common.jobs)?;
            let res = pool.install(|| products.par_iter().map(|fs| verify_product(fs, &guard)).collect());
            (common, res)
        }
    };
    let reports = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let lines: Vec<String> = reports.iter().map(to_json).collect();
    emit(common.report.as_deref(), &lines, out)?;
    for r in &reports {
        let _ = writeln!(
            err,
            "{} {}: computed {} predicted {} generated {} -> {}",
            r.claim,
            serde_json::to_string(&r.parameters).unwrap_or_default(),
            r.computed_order,
            r.predicted_order,
            r.generated_order,
            if r.passed { "ok" } else { "FAILED" }
        );
    }
    Ok(if reports.iter().all(|r| r.passed) { EXIT_OK } else { EXIT_FAILED })
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Build { graph, k, out: path, guard } => {
            let base = graph.build().map_err(CliError::usage)?;
            if *k == 0 || *k >= base.n() {
                return Err(CliError::usage(format!("k = {k} out of range 1..={}", base.n().saturating_sub(1))));
            }
            let count = binomial(base.n(), *k);
            if count > guard.max_vertices {
                return Err(VerifyError::Scale(format!(
                    "F_{k} has {count} vertices, above the limit of {}",
                    guard.max_vertices
                ))
                .into());
            }
            let tg = token_graph(&base, *k).map_err(|e| CliError::usage(e.to_string()))?;
            let body = format!("# {}\n{}", tg.graph().label().unwrap_or("token graph"), tg.graph().to_edge_list());
            let io = |e: std::io::Error| CliError::usage(format!("cannot write {}: {e}", path.display()));
            write_atomic(path, body.as_bytes()).map_err(io)?;
            let mut sidecar = path.clone().into_os_string();
            sidecar.push(".map");
            write_atomic(Path::new(&sidecar), tg.rank_map_text().as_bytes()).map_err(io)?;
            let _ = writeln!(out, "{} vertices, {} edges", tg.vertex_count(), tg.graph().edge_count());
            Ok(EXIT_OK)
        }
        Command::Aut { input, graph, report, guard } => {
            let g = load(input, graph)?;
            let started = Instant::now();
            let config = SearchConfig {
                node_limit: Some(guard.max_nodes),
                ..SearchConfig::default()
            };
            let res = automorphism_group_with(&g, &config).map_err(|SearchError::NodeLimit(l)| CliError {
                code: EXIT_SCALE,
                message: format!("automorphism search exceeded {l} nodes"),
            })?;
            let order = res.order();
            let rep = AutReport {
                tool_version: TOOL_VERSION,
                vertex_count: g.n(),
                edge_count: g.edge_count(),
                order: order.to_string(),
                generators: res.generators().to_vec(),
                base: res.base.clone(),
                orbit_sizes: res.orbit_sizes.clone(),
                exhaustive_recount: exhaustive_cross_check(&g, &order),
                node_count: res.node_count,
                wall_time_ms: started.elapsed().as_millis(),
            };
            emit(report.as_deref(), &[to_json(&rep)], out)?;
            if report.is_some() {
                let _ = writeln!(out, "order {order}");
            }
            Ok(if rep.exhaustive_recount == Some(false) { EXIT_FAILED } else { EXIT_OK })
        }
        Command::Generators { family } => run_generators(family, out),
        Command::Factor { input, graph, out: dir } => {
            let g = load(input, graph)?;
            let f = prime_factor_decomposition(&g).map_err(|e| CliError::usage(e.to_string()))?;
            let mut entries = Vec::new();
            if let Some(d) = dir {
                fs::create_dir_all(d).map_err(|e| CliError::usage(format!("cannot create {}: {e}", d.display())))?;
            }
            for (i, factor) in f.factors.iter().enumerate() {
                let file = match dir {
                    Some(d) => {
                        let p = d.join(format!("factor_{}.el", i + 1));
                        write_atomic(&p, factor.to_edge_list().as_bytes())
                            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", p.display())))?;
                        Some(p.display().to_string())
                    }
                    None => None,
                };
                entries.push(FactorEntry {
                    vertices: factor.n(),
                    edges: factor.edge_count(),
                    file,
                });
            }
            let rep = FactorReport {
                vertex_count: g.n(),
                prime: f.factors.len() == 1,
                factors: entries,
            };
            emit(None, &[to_json(&rep)], out)?;
            Ok(EXIT_OK)
        }
        Command::Verify { family } => run_verify(family, out, err),
    }
}

/// Parses `args` and runs the command, writing to the given streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if code == EXIT_OK { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
