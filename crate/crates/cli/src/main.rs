mod commands;
mod config;
mod output;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use resumkit::graph::{GraphError, SpanningTree};
use resumkit::phi4::Phi4Error;
use resumkit::positivity::DEFAULT_PSD_TOLERANCE;
use resumkit::symanzik::{AmplitudeError, ModelParams};
use resumkit::weights::WeightError;
use resumkit::BigRational;
use serde::Serialize;

use commands::{parse_count, MethodArg, ScalarArg, WSource};
use config::{Caps, Format, RunConfig};
use output::{Rendered, ResultDocument, SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "resumkit", version, about = "Constructive tree weights, positivity checks, parametric amplitudes and LVE bookkeeping")]
struct Cli {
    /// Worker threads for parallel sections.
    #[arg(long, global = true, env = "RESUMKIT_THREADS")]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Largest edge count for brute-force sector enumeration.
    #[arg(long, global = true, default_value_t = 9)]
    brute_cap: usize,
    /// Largest tree size for the symbolic integral.
    #[arg(long, global = true, default_value_t = 9)]
    symbolic_cap: usize,
    /// Largest perturbative order for vacuum graph generation.
    #[arg(long, global = true, default_value_t = resumkit::phi4::DEFAULT_ORDER_CAP)]
    order_cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Constructive weight of every spanning tree.
    Weights {
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "dc")]
        method: MethodArg,
        #[arg(long, value_parser = parse_count)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Hepp sectors whose leading tree is the given tree.
    Sectors {
        graph: PathBuf,
        /// Tree edge labels, comma separated.
        #[arg(long)]
        tree: String,
    },
    /// Weakening matrix positivity and its block decomposition.
    PsdCheck {
        graph: PathBuf,
        #[arg(long)]
        tree: String,
        /// Parameters as label=value pairs, e.g. l1=0.5,l2=3/10.
        #[arg(long, conflicts_with_all = ["samples", "seed"])]
        w: Option<String>,
        /// Number of random parameter vectors.
        #[arg(long, value_parser = parse_count, requires = "seed")]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "rational")]
        scalar: ScalarArg,
        /// Relative tolerance on the smallest eigenvalue.
        #[arg(long, default_value_t = DEFAULT_PSD_TOLERANCE)]
        tol: f64,
    },
    /// Kirchhoff-Symanzik polynomial.
    Symanzik {
        graph: PathBuf,
        /// Evaluate exactly at label=value pairs covering every edge.
        #[arg(long)]
        at: Option<String>,
    },
    /// Monte-Carlo estimate of the parametric amplitude.
    Amplitude {
        graph: PathBuf,
        #[arg(long)]
        dim: f64,
        #[arg(long)]
        mass: f64,
        #[arg(long, value_parser = parse_count)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        sector_decomposed: bool,
        /// Largest edge count for sector decomposition.
        #[arg(long, default_value_t = 8)]
        sector_cap: usize,
    },
    /// Zero-dimensional quartic model: collapsed-tree repacking of log Z.
    Phi4Lve {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Built-in consistency checks.
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let (kind, code) = classify(&e);
            eprintln!("error[{kind}]: {e:#}");
            ExitCode::from(code)
        }
    }
}

/// Error kind and exit code. Usage errors from argument parsing exit with 2.
fn classify(e: &anyhow::Error) -> (&'static str, u8) {
    for cause in e.chain() {
        let cap = matches!(cause.downcast_ref(), Some(WeightError::BruteForceCap { .. } | WeightError::SymbolicCap { .. }))
            || matches!(cause.downcast_ref(), Some(Phi4Error::OrderCap { .. }))
            || matches!(cause.downcast_ref(), Some(AmplitudeError::SectorCap { .. }));
        if cap {
            return ("cap", 4);
        }
        if cause.downcast_ref::<GraphError>().is_some() || cause.downcast_ref::<std::io::Error>().is_some() {
            return ("input", 3);
        }
    }
    ("error", 1)
}

fn tree_arg(s: &str) -> SpanningTree {
    SpanningTree::new(commands::split_list(s))
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    }
    let caps = Caps { brute_force_max_edges: cli.brute_cap, symbolic_max_tree_edges: cli.symbolic_cap, vacuum_order_cap: cli.order_cap };
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let base = |name| RunConfig::new(name, caps, cli.format);
    let with_input = |name, path: &Path| RunConfig { input: Some(path.display().to_string()), ..base(name) };

    match cli.command {
        Command::Weights { graph, method, samples, seed } => {
            let g = commands::load_graph(&graph)?;
            let mut config = with_input("weights", &graph);
            config.method = Some(format!("{method:?}").to_lowercase());
            if method == MethodArg::Mc {
                config.samples = samples;
                config.seed = seed;
            }
            emit(&argv, config, commands::weights(&g, method, samples, seed, caps)?)?;
        }
        Command::Sectors { graph, tree } => {
            let g = commands::load_graph(&graph)?;
            let t = tree_arg(&tree);
            let config = with_input("sectors", &graph).option("tree", t.labels().collect::<Vec<_>>().join(","));
            emit(&argv, config, commands::sectors(&g, &t, caps)?)?;
        }
        Command::PsdCheck { graph, tree, w, samples, seed, scalar, tol } => {
            let g = commands::load_graph(&graph)?;
            let t = tree_arg(&tree);
            let mut config = with_input("psd-check", &graph)
                .option("tree", t.labels().collect::<Vec<_>>().join(","))
                .option("scalar", format!("{scalar:?}").to_lowercase())
                .option("tol", output::format_float(tol));
            let source = match (w, samples, seed) {
                (Some(w), _, _) => {
                    let pairs = commands::parse_assignments(&w)?;
                    config = config.option("w", pairs.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(","));
                    WSource::Given(pairs)
                }
                (None, Some(samples), Some(seed)) => {
                    config.samples = Some(samples);
                    config.seed = Some(seed);
                    WSource::Random { samples, seed }
                }
                _ => anyhow::bail!("psd-check needs either --w or both --samples and --seed"),
            };
            match scalar {
                ScalarArg::Rational => emit(&argv, config, commands::psd_check::<BigRational>(&g, &t, &source, tol)?)?,
                ScalarArg::F64 => emit(&argv, config, commands::psd_check::<f64>(&g, &t, &source, tol)?)?,
                ScalarArg::F32 => emit(&argv, config, commands::psd_check::<f32>(&g, &t, &source, tol)?)?,
            }
        }
        Command::Symanzik { graph, at } => {
            let g = commands::load_graph(&graph)?;
            let mut config = with_input("symanzik", &graph);
            let pairs = at.as_deref().map(commands::parse_assignments).transpose()?;
            if let Some(p) = &pairs {
                config = config.option("at", p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(","));
            }
            emit(&argv, config, commands::symanzik(&g, pairs.as_deref())?)?;
        }
        Command::Amplitude { graph, dim, mass, samples, seed, sector_decomposed, sector_cap } => {
            let g = commands::load_graph(&graph)?;
            let mut config = with_input("amplitude", &graph)
                .option("dim", output::format_float(dim))
                .option("mass", output::format_float(mass))
                .option("sector_decomposed", sector_decomposed);
            if sector_decomposed {
                config = config.option("sector_cap", sector_cap);
            }
            config.samples = Some(samples);
            config.seed = Some(seed);
            emit(&argv, config, commands::amplitude(&g, ModelParams::new(dim, mass), samples, seed, sector_decomposed, sector_cap)?)?;
        }
        Command::Phi4Lve { order, lambda } => {
            let mut config = base("phi4-lve").option("order", order);
            if let Some(l) = lambda {
                config = config.option("lambda", output::format_float(l));
            }
            emit(&argv, config, commands::phi4_lve(order, lambda, caps)?)?;
        }
        Command::Selftest => {
            let rendered = commands::selftest(caps)?;
            let passed = rendered.payload.passed();
            emit(&argv, base("selftest"), rendered)?;
            return Ok(passed);
        }
    }
    Ok(true)
}

fn emit<P: Serialize>(argv: &[String], config: RunConfig, rendered: Rendered<P>) -> Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match config.format {
        Format::Json => {
            let doc = ResultDocument { schema_version: SCHEMA_VERSION, command: argv.to_vec(), config, payload: rendered.payload };
            output::write_json(&mut out, &doc)?;
        }
        Format::Csv => output::write_csv(&mut out, &rendered.table)?,
    }
    out.flush()?;
    Ok(())
}
