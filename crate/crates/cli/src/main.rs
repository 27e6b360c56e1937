use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use stabred::basechange::{search_splittings, transform};
use stabred::contract::{contract_chains, to_stable};
use stabred::document::parse_plan;
use stabred::localmodel::{jung_hirzebruch, node_params, resolve_node};
use stabred::pipeline::StageGraph;
use stabred::saito::{maximal_chains, minimal_degree, saito_check};
use stabred::{emit_dot, parse, probe_minimality, run, validate, FiberGraph, GraphDocument, SplittingPlan};

/// Stable reduction of tame SNC fibers, computed on weighted dual graphs.
#[derive(Parser)]
#[command(name = "stabred", version)]
struct Cli {
    /// Write Graphviz files into this directory, one per stage.
    #[arg(long, global = true, value_name = "DIR")]
    dot: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural checks and genus.
    Validate { file: PathBuf },
    /// Arithmetic genus of the fiber.
    Genus { file: PathBuf },
    /// Saito's tameness criterion and the maximal chains.
    Saito { file: PathBuf },
    /// Principal components and the minimal tame degree.
    Degree { file: PathBuf },
    /// Quotient singularity above a node with branch multiplicities a, b.
    Local {
        #[arg(long)]
        a: BigInt,
        #[arg(long)]
        b: BigInt,
        #[arg(long)]
        n: BigInt,
        #[arg(long, default_value_t = 0)]
        p: u64,
    },
    /// Jung–Hirzebruch expansion of n/r.
    Jh {
        #[arg(long)]
        n: BigInt,
        #[arg(long)]
        r: BigInt,
    },
    /// Base change of degree n, normalization and minimal resolution.
    Basechange {
        file: PathBuf,
        #[arg(long)]
        n: BigInt,
        /// Splitting plan (JSON); overrides the document's `splitting`.
        #[arg(long, value_name = "FILE")]
        plan: Option<PathBuf>,
    },
    /// Every splitting plan consistent with base change of degree n.
    Search {
        file: PathBuf,
        #[arg(long)]
        n: BigInt,
    },
    /// Blow down the non-reduced chains of a resolved fiber.
    Contract { file: PathBuf },
    /// Stable dual graph of a reduced fiber.
    Stable { file: PathBuf },
    /// Full stable reduction.
    Pipeline {
        file: PathBuf,
        /// Try every consistent splitting instead of the document's plan.
        #[arg(long)]
        search: bool,
        /// Also check that no proper divisor of n reaches a reduced fiber.
        #[arg(long)]
        probe_minimality: bool,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<stabred::Error> for Failure {
    fn from(e: stabred::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<GraphDocument, Failure> {
    parse(&read(path)?).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn number(n: &BigInt) -> Value {
    Value::Number(n.to_string().parse().expect("integer literal"))
}

struct Dot<'a> {
    dir: Option<&'a Path>,
}

impl Dot<'_> {
    fn write(&self, stage: &str, text: String) -> Result<(), Failure> {
        let Some(dir) = self.dir else { return Ok(()) };
        fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
        let path = dir.join(format!("{stage}.dot"));
        fs::write(&path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }

    fn input(&self, g: &FiberGraph) -> Result<(), Failure> {
        self.write("input", emit_dot(g))
    }
}

fn execute(cli: &Cli) -> Result<Value, Failure> {
    let dot = Dot { dir: cli.dot.as_deref() };
    match &cli.command {
        Command::Validate { file } => {
            let doc = load(file)?;
            dot.input(&doc.graph)?;
            let report = validate(&doc.graph);
            if !report.is_valid() {
                emit(&to_value(&report));
                return Err(Failure::Domain(report.failures().join("\n")));
            }
            Ok(to_value(&report))
        }
        Command::Genus { file } => {
            let doc = load(file)?;
            dot.input(&doc.graph)?;
            Ok(json!({ "genus": number(&doc.graph.genus()?) }))
        }
        Command::Saito { file } => {
            let doc = load(file)?;
            dot.input(&doc.graph)?;
            let report = saito_check(&doc.graph);
            let mut v = to_value(&report);
            v["chains"] = to_value(&maximal_chains(&doc.graph));
            Ok(v)
        }
        Command::Degree { file } => {
            let doc = load(file)?;
            dot.input(&doc.graph)?;
            Ok(to_value(&minimal_degree(&doc.graph)?))
        }
        Command::Local { a, b, n, p } => {
            let params = node_params(a, b, n, *p)?;
            let chain = if params.is_regular() {
                None
            } else {
                Some(resolve_node(&params, &params.a_dd, &params.b_dd)?)
            };
            Ok(json!({ "params": to_value(&params), "chain": to_value(&chain) }))
        }
        Command::Jh { n, r } => {
            let bs = jung_hirzebruch(n, r)?;
            Ok(json!({
                "n": number(n),
                "r": number(r),
                "expansion": bs.iter().map(number).collect::<Vec<_>>(),
            }))
        }
        Command::Basechange { file, n, plan } => {
            let doc = load(file)?;
            let plan = match plan {
                Some(path) => parse_plan(&read(path)?).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?,
                None => doc.splitting.clone().unwrap_or_default(),
            };
            let out = transform(&doc.graph, n, &plan)?;
            dot.input(&doc.graph)?;
            dot.write("resolved", emit_dot(&out))?;
            Ok(json!({ "plan": to_value(&plan), "graph": to_value(&out) }))
        }
        Command::Search { file, n } => {
            let doc = load(file)?;
            let found = search_splittings(&doc.graph, n)?;
            dot.input(&doc.graph)?;
            for (i, (_, g)) in found.iter().enumerate() {
                dot.write(&format!("resolved-{i}"), emit_dot(g))?;
            }
            let list: Vec<Value> = found
                .iter()
                .map(|(p, g)| json!({ "plan": to_value(p), "graph": to_value(g) }))
                .collect();
            Ok(Value::Array(list))
        }
        Command::Contract { file } => {
            let doc = load(file)?;
            let (semi, trace) = contract_chains(&doc.graph)?;
            dot.input(&doc.graph)?;
            dot.write("semi-stable", emit_dot(&semi))?;
            Ok(json!({ "graph": to_value(&semi), "trace": to_value(&trace) }))
        }
        Command::Stable { file } => {
            let doc = load(file)?;
            let stable = to_stable(&doc.graph)?;
            dot.input(&doc.graph)?;
            dot.write("stable", emit_dot(&stable))?;
            Ok(to_value(&stable))
        }
        Command::Pipeline {
            file,
            search,
            probe_minimality: probe,
        } => {
            let doc = load(file)?;
            let plan = if *search {
                None
            } else {
                Some(doc.splitting.clone().unwrap_or_else(SplittingPlan::new))
            };
            let report = match run(&doc.graph, plan.as_ref()) {
                Err(stabred::Error::AmbiguousSplitting(graphs)) => {
                    emit(&json!({ "candidates": to_value(&graphs) }));
                    return Err(stabred::Error::AmbiguousSplitting(graphs).into());
                }
                other => other?,
            };
            for stage in &report.stages {
                let text = match &stage.graph {
                    StageGraph::Fiber(g) => emit_dot(g),
                    StageGraph::Reduced(g) => emit_dot(g),
                };
                dot.write(&stage.stage, text)?;
            }
            let mut v = to_value(&report);
            if *probe {
                v["minimality"] = to_value(&probe_minimality(&doc.graph)?);
            }
            Ok(v)
        }
    }
}

fn emit(v: &Value) {
    // a closed pipe is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(v).expect("reports serialize"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(v) => {
            emit(&v);
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
