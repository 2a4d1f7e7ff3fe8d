//! Command-line front end: K-theory and K-homology reports for graphs given
//! as JSON files or as sphere/lens presets, explicit Fredholm module
//! construction and verification, and the randomized invariant suites.
//!
//! Exit codes: 0 success, 2 input parse error, 3 graph validation failure,
//! 4 missing eta value, 1 any other computation error. Reports go to
//! stdout; diagnostics go to stderr.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use khom_core::corpus;
use khom_core::fredholm::{
    build_k0_module, build_k1_module, check_star_condition, index_k0, index_k1, perturbation_rank,
    BasisOperator, ModelError,
};
use khom_core::graph::{
    lens_graph, sphere_graph, DirectedGraph, GraphData, VertexDomain, VertexFunction,
};
use khom_core::kgroups::{k_homology, k_theory};
use khom_core::lens::lens_k1_generators;
use khom_core::report::{
    edge_function_map, vertex_function_map, ClassReport, GradedModuleReport, GroupReport,
    KGroupsReport, LensReport, OddModuleReport, StarConditionReport, SuiteReport, VerifyReport,
};

#[derive(Parser)]
#[command(
    name = "khom",
    version,
    about = "Exact K-theory and K-homology of finite graph C*-algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["input", "preset"])))]
struct GraphArgs {
    /// Path to a graph JSON file: {"vertices": [...], "edges": [{"id", "src", "dst"}]}.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Built-in family: "sphere:N" or "lens:N:P".
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args)]
struct ModuleArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Integer value per vertex, repeated: --eta v1=3 --eta v2=0
    #[arg(long = "eta", value_parser = parse_eta)]
    eta: Vec<(String, i64)>,
}

#[derive(Subcommand)]
enum Command {
    /// K-theory of the graph algebra: cokernel and kernel of the vertex
    /// boundary, with generators in the vertex basis.
    Kgroups(GraphArgs),
    /// K-homology: kernel and cokernel of the dual boundary.
    Khomology(GraphArgs),
    /// Build the graded module for a harmonic eta and read its index back.
    #[command(name = "k0-module")]
    K0Module(ModuleArgs),
    /// Build the odd module for an eta on non-sinks, check the commutation
    /// condition, and report index functions and the class.
    #[command(name = "k1-module")]
    K1Module(ModuleArgs),
    /// Full quantum lens space report for the sphere rank n and weight p.
    Lens {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Run the randomized invariant suites with a fixed seed.
    Verify {
        /// Seed; defaults to the KHOM_SEED environment variable, then a
        /// built-in constant.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

fn parse_eta(s: &str) -> Result<(String, i64), String> {
    let (vertex, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected vertex=value, got {s:?}"))?;
    let value: i64 = value
        .parse()
        .map_err(|e| format!("bad integer in {s:?}: {e}"))?;
    Ok((vertex.to_string(), value))
}

enum CliError {
    Parse(String),
    Validation(Vec<String>),
    MissingEta(String),
    Other(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::MissingEta(_) => 4,
            CliError::Other(_) => 1,
        }
    }

    fn describe(&self) -> String {
        match self {
            CliError::Parse(m) => format!("parse error: {m}"),
            CliError::Validation(v) => format!("graph validation failed:\n  {}", v.join("\n  ")),
            CliError::MissingEta(v) => format!("missing --eta value for vertex {v}"),
            CliError::Other(m) => m.clone(),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::MissingEta { vertex } => CliError::MissingEta(vertex),
            other => CliError::Other(other.to_string()),
        }
    }
}

fn load_graph(args: &GraphArgs) -> Result<DirectedGraph, CliError> {
    let graph = if let Some(path) = &args.input {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        let data: GraphData =
            serde_json::from_str(&text).map_err(|e| CliError::Parse(e.to_string()))?;
        DirectedGraph::from_data(data)
    } else {
        let preset = args.preset.as_deref().expect("clap enforces one source");
        let parts: Vec<&str> = preset.split(':').collect();
        let parse_num = |s: &str| {
            s.parse::<usize>()
                .map_err(|e| CliError::Parse(format!("bad preset number {s:?}: {e}")))
        };
        match parts.as_slice() {
            ["sphere", n] => {
                sphere_graph(parse_num(n)?).map_err(|e| CliError::Parse(e.to_string()))?
            }
            ["lens", n, p] => lens_graph(parse_num(n)?, parse_num(p)?)
                .map_err(|e| CliError::Parse(e.to_string()))?,
            _ => {
                return Err(CliError::Parse(format!(
                    "unknown preset {preset:?}; expected sphere:N or lens:N:P"
                )))
            }
        }
    };
    let violations = graph.validate();
    if !violations.is_empty() {
        return Err(CliError::Validation(
            violations.iter().map(|v| v.to_string()).collect(),
        ));
    }
    Ok(graph)
}

fn eta_function(pairs: &[(String, i64)], domain: VertexDomain) -> VertexFunction {
    let mut values = BTreeMap::new();
    for (v, k) in pairs {
        values.insert(v.clone(), *k);
    }
    VertexFunction::new(domain, values)
}

fn emit<T: serde::Serialize>(format: Format, report: &T, render: impl Fn() -> String) {
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(report).expect("reports serialize")
        ),
        Format::Text => print!("{}", render()),
    }
}

fn run_kgroups(args: &GraphArgs, homology: bool) -> Result<(), CliError> {
    let graph = load_graph(args)?;
    let (g0, g1) = if homology {
        k_homology(&graph).map_err(|e| CliError::Other(e.to_string()))?
    } else {
        k_theory(&graph).map_err(|e| CliError::Other(e.to_string()))?
    };
    let report = KGroupsReport {
        vertices: graph.vertices().len(),
        edges: graph.edges().len(),
        k0: GroupReport::from_presentation(&g0),
        k1: GroupReport::from_presentation(&g1),
    };
    let (h0, h1) = if homology {
        ("K^0", "K^1")
    } else {
        ("K_0", "K_1")
    };
    emit(args.format, &report, || {
        format!(
            "graph: {} vertices, {} edges\n{}{}",
            report.vertices,
            report.edges,
            report.k0.render_text(h0),
            report.k1.render_text(h1)
        )
    });
    Ok(())
}

fn run_k0_module(args: &ModuleArgs) -> Result<(), CliError> {
    let graph = load_graph(&args.graph)?;
    let eta = eta_function(&args.eta, VertexDomain::AllVertices);
    let module = build_k0_module(&graph, &eta)?;
    let index = index_k0(&module, &graph)?;
    let round_trip = graph.vertices().iter().all(|v| index.get(v) == eta.get(v));
    let mut perturbation_ranks = BTreeMap::new();
    for v in graph.vertices() {
        let rank = perturbation_rank(
            &BasisOperator::Projection(module.vertex_ops[1][v].clone()),
            &BasisOperator::Projection(module.vertex_ops[0][v].clone()),
            module.certificate,
            v,
        )?;
        perturbation_ranks.insert(format!("rho({v})"), rank);
    }
    for e in graph.edges() {
        let rank = perturbation_rank(
            &BasisOperator::Injection(module.edge_ops[1][&e.id].clone()),
            &BasisOperator::Injection(module.edge_ops[0][&e.id].clone()),
            module.certificate,
            &e.id,
        )?;
        perturbation_ranks.insert(format!("rho({})", e.id), rank);
    }
    let report = GradedModuleReport {
        eta: vertex_function_map(&eta),
        index: vertex_function_map(&index),
        round_trip,
        perturbation_ranks,
    };
    emit(args.graph.format, &report, || {
        let mut out = String::new();
        out.push_str("graded module index function:\n");
        for (v, k) in &report.index {
            out.push_str(&format!("  {v}: {k}\n"));
        }
        out.push_str(&format!("round trip: {}\n", report.round_trip));
        out.push_str("perturbation ranks:\n");
        for (g, r) in &report.perturbation_ranks {
            out.push_str(&format!("  {g}: {r}\n"));
        }
        out
    });
    Ok(())
}

fn run_k1_module(args: &ModuleArgs) -> Result<(), CliError> {
    let graph = load_graph(&args.graph)?;
    let eta = eta_function(&args.eta, VertexDomain::NonSinksOnly);
    let module = build_k1_module(&graph, &eta)?;
    let star = check_star_condition(&module, &graph)?;
    let data = index_k1(&module, &graph)?;
    let report = OddModuleReport {
        eta: vertex_function_map(&eta),
        edge_index: edge_function_map(&data.edge_index),
        vertex_index: vertex_function_map(&data.vertex_index),
        class: ClassReport::from_element(&data.class),
        group: GroupReport::from_presentation(&data.presentation),
        star: StarConditionReport::from_star(&star),
        commutator_ranks: star.edge_ranks().into_iter().collect(),
    };
    emit(args.graph.format, &report, || {
        let mut out = String::new();
        out.push_str("edge index function:\n");
        for (e, k) in &report.edge_index {
            out.push_str(&format!("  {e}: {k}\n"));
        }
        out.push_str("vertex index function:\n");
        for (v, k) in &report.vertex_index {
            out.push_str(&format!("  {v}: {k}\n"));
        }
        out.push_str(&report.group.render_text("class group K^1"));
        out.push_str(&format!(
            "class coordinates: torsion {:?}, free {:?}\n",
            report.class.torsion_coordinates, report.class.free_coordinates
        ));
        out.push_str(&format!(
            "commutation check: {}\n",
            if report.star.pass { "pass" } else { "FAIL" }
        ));
        out.push_str("commutator ranks:\n");
        for (g, r) in &report.commutator_ranks {
            out.push_str(&format!("  {g}: {r}\n"));
        }
        out
    });
    Ok(())
}

fn run_lens(n: usize, p: usize, format: Format) -> Result<(), CliError> {
    let lens = lens_k1_generators(n, p)?;
    let report = LensReport::from_lens(&lens);
    emit(format, &report, || {
        let mut out = format!("quantum lens space: n = {n}, p = {p}\n");
        out.push_str(&report.k0.render_text("K^0"));
        out.push_str(&report.k1.render_text("K^1"));
        out.push_str("eigenspace generators:\n");
        for g in &report.generators {
            out.push_str(&format!(
                "  F_{}: index vector {:?}, order {}, order of F_{} - F_0: {}\n",
                g.m, g.index_vector, g.order, g.m, g.diff_from_first_order
            ));
        }
        out.push_str(&format!(
            "checks: index formula {}, commutation {}, generation {}, additivity {}\n",
            report.checks.index_formula,
            report.checks.star_condition,
            report.checks.generation,
            report.checks.eigenspace_additivity
        ));
        out
    });
    Ok(())
}

fn run_verify(seed: Option<u64>, format: Format) -> Result<(), CliError> {
    let seed = seed
        .or_else(|| std::env::var("KHOM_SEED").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(corpus::DEFAULT_SEED);
    eprintln!("running randomized invariant suites with seed {seed}");
    let suites = corpus::verify_all(seed);
    let pass = suites.iter().all(|s| s.passed());
    let report = VerifyReport {
        seed,
        pass,
        suites: suites
            .iter()
            .map(|s| SuiteReport {
                name: s.name.clone(),
                cases: s.cases,
                failures: s.failures.clone(),
            })
            .collect(),
    };
    emit(format, &report, || {
        let mut out = String::new();
        for s in &report.suites {
            if s.failures.is_empty() {
                out.push_str(&format!("{}: PASS ({} cases)\n", s.name, s.cases));
            } else {
                out.push_str(&format!(
                    "{}: FAIL ({} of {} cases)\n",
                    s.name,
                    s.failures.len(),
                    s.cases
                ));
                for f in &s.failures {
                    out.push_str(&format!("  {f}\n"));
                }
            }
        }
        out.push_str(&format!(
            "overall: {}\n",
            if report.pass { "PASS" } else { "FAIL" }
        ));
        out
    });
    if pass {
        Ok(())
    } else {
        Err(CliError::Other("verification failed".to_string()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Kgroups(args) => run_kgroups(args, false),
        Command::Khomology(args) => run_kgroups(args, true),
        Command::K0Module(args) => run_k0_module(args),
        Command::K1Module(args) => run_k1_module(args),
        Command::Lens { n, p, format } => run_lens(*n, *p, *format),
        Command::Verify { seed, format } => run_verify(*seed, *format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.describe());
            ExitCode::from(e.exit_code())
        }
    }
}
