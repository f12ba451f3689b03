//! Command-line front end.

pub mod figures;
pub mod output;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use encap_core::experiments::{
    adhoc_evolution, amc_census, belt_fraction, fixed_system_sweep, layered_composition_sweep,
    starting_systems, varied_region_sweep, AddVisibility, CensusMode, Context, EvolutionConfig,
    RandomSystemParams, DEFAULT_CENSUS_CAP,
};
use encap_core::hier::{hier_psc_enumerated, layered_psc_enumerated};
use encap_core::ingest::{display_region_name, function_graph_scan, parse_manifest, scan_java_tree, Model};
use encap_core::metrics::{amc_check, configuration_efficiency, ihv_percent};
use encap_core::model::LabeledCodebase;
use encap_core::psc::{self, psc_unencapsulated, recommend_regions};
use encap_core::{EncapError, Result};

use figures::{census_table, evolution_table, figure, growth_table, labeled_table, random_table, series_table, Scale};
use output::{opt_real, real, OutputFormat, Table};

const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "encap", version, about = "Potential structural complexity of encapsulated systems")]
pub struct Cli {
    /// Worker threads for experiments (default: available processors).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct SeedArg {
    /// Seed for stochastic commands; falls back to ENCAP_SEED, then 42.
    #[arg(long, env = "ENCAP_SEED")]
    pub seed: Option<u64>,
}

impl SeedArg {
    fn get(self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Graph {
    /// Functions as nodes, top-level types as regions.
    Second,
    /// Top-level types as nodes, packages as regions.
    Third,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AddRule {
    Coin,
    Ratio,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Metrics of a manifest or a scanned Java tree.
    Analyze {
        #[arg(long, conflicts_with = "scan_java", required_unless_present = "scan_java")]
        input: Option<PathBuf>,
        #[arg(long)]
        scan_java: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Graph::Third)]
        graph: Graph,
        /// List per-region counts instead of metrics.
        #[arg(long)]
        per_region: bool,
    },
    /// The three laws and the minimum uniform P.S.C.
    Laws {
        #[arg(long)]
        nodes: u64,
        #[arg(long)]
        violations: f64,
    },
    /// CSV data for one figure.
    Figure {
        id: u32,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, value_enum, default_value_t = Scale::Small)]
        scale: Scale,
    },
    /// Fixed-system, varied-region or layer-arrangement sweeps.
    #[command(subcommand)]
    Sweep(SweepCommand),
    /// Minimum P.S.C. as the system grows.
    Growth {
        #[arg(long, value_delimiter = ',', default_value = "flat")]
        context: Vec<Context>,
        #[arg(long, default_value_t = 100)]
        max: u64,
        #[arg(long, default_value_t = 1)]
        violations: u64,
    },
    /// Random systems with their metrics.
    Random {
        #[arg(long, default_value_t = 100)]
        nodes: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Ad-hoc evolution of random systems.
    Evolve {
        #[arg(long, default_value_t = 10)]
        systems: usize,
        #[arg(long, default_value_t = 100)]
        nodes: u64,
        #[arg(long, default_value_t = 5000)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = AddRule::Ratio)]
        add: AddRule,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Census of anomalous minimised configurations.
    Amc {
        #[arg(long, default_value_t = 100)]
        nodes: u64,
        #[arg(long, default_value_t = 2)]
        regions: u64,
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
        #[arg(long, default_value_t = 200_000)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_CENSUS_CAP)]
        cap: u64,
        #[command(flatten)]
        seed: SeedArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum SweepCommand {
    Fixed {
        #[arg(long)]
        nodes: u64,
        #[arg(long, default_value_t = 2)]
        regions: usize,
        #[arg(long, default_value_t = 1)]
        violations: u64,
    },
    Varied {
        #[arg(long)]
        nodes: u64,
        #[arg(long, default_value_t = 1)]
        violations: u64,
        #[arg(long, default_value = "flat")]
        context: Context,
    },
    Layers {
        #[arg(long)]
        subsystems: u64,
        #[arg(long)]
        layers: usize,
        #[arg(long, default_value_t = 1)]
        unit_size: u64,
        #[arg(long, default_value_t = 1)]
        violations: u64,
    },
}

fn amc_label(sys: &encap_core::FlatSystem) -> String {
    let v = amc_check(sys);
    if !v.comparable {
        "n/a".into()
    } else if v.is_amc {
        "yes".into()
    } else {
        "no".into()
    }
}

const METRIC_HEADERS: &[&str] = &[
    "context", "nodes", "regions", "psc", "s_min", "s_max", "c_e", "ihv_percent", "r_min", "amc",
];

fn analyze_model(model: &Model) -> Result<Table> {
    let flat = model.flatten();
    let mut t = Table::new(METRIC_HEADERS);
    match model {
        Model::Flat(sys) => {
            let m = configuration_efficiency(sys);
            t.row(vec![
                "flat".into(),
                m.n.to_string(),
                m.r.to_string(),
                m.s.to_string(),
                opt_real(m.s_min),
                m.s_max.to_string(),
                opt_real(m.c_e),
                opt_real(m.ihv_percent),
                opt_real(m.r_min),
                amc_label(sys),
            ]);
        }
        Model::Layered(_) | Model::Hier(_) => {
            let (name, s) = match model {
                Model::Layered(l) => ("layered", layered_psc_enumerated(l)?),
                Model::Hier(h) => ("hier", hier_psc_enumerated(h)?),
                Model::Flat(_) => unreachable!(),
            };
            let n = flat.n();
            let r_min = flat.p_bar().and_then(|p| psc::r_min(n, p).ok());
            t.row(vec![
                name.into(),
                n.to_string(),
                flat.r().to_string(),
                s.to_string(),
                "n/a".into(),
                psc_unencapsulated(n).to_string(),
                "n/a".into(),
                opt_real(ihv_percent(n, flat.h()).ok()),
                opt_real(r_min),
                "n/a".into(),
            ]);
        }
    }
    Ok(t)
}

fn region_table(cb: &LabeledCodebase) -> Table {
    let mut t = Table::new(&["region", "private", "public"]);
    for name in cb.regions().keys() {
        let c = cb.region_counts(name).unwrap_or_default();
        t.row(vec![display_region_name(name).to_owned(), c.hidden.to_string(), c.violating.to_string()]);
    }
    t
}

fn analyze(input: Option<PathBuf>, scan: Option<PathBuf>, graph: Graph, per_region: bool) -> Result<Table> {
    if let Some(path) = input {
        let text = std::fs::read_to_string(&path).map_err(|e| EncapError::Io {
            path: path.clone(),
            message: e.to_string(),
        })?;
        let model = parse_manifest(&text)?.to_model()?;
        if per_region {
            let mut t = Table::new(&["region", "private", "public"]);
            for (i, g) in model.flatten().regions().iter().enumerate() {
                t.row(vec![i.to_string(), g.hidden.to_string(), g.violating.to_string()]);
            }
            return Ok(t);
        }
        return analyze_model(&model);
    }
    let dir = scan.expect("clap enforces one input");
    let report = match graph {
        Graph::Third => scan_java_tree(&dir)?,
        Graph::Second => function_graph_scan(&dir)?,
    };
    eprintln!(
        "scanned {} java file(s), {} skipped; lexical scan, sophisticated encapsulation may elude it",
        report.files_scanned,
        report.skipped.len()
    );
    for (path, why) in &report.skipped {
        eprintln!("warning: skipped {}: {why}", path.display());
    }
    if per_region {
        return Ok(region_table(&report.codebase));
    }
    analyze_model(&Model::Flat(report.codebase.to_flat()))
}

fn laws(n: u64, p: f64) -> Result<Table> {
    let rec = recommend_regions(n, p)?;
    let mut t = Table::new(&[
        "nodes",
        "violations",
        "s_max",
        "r_min",
        "r_recommended",
        "psc_recommended",
        "r_h",
        "s_min",
        "optimal_region_size",
    ]);
    t.row(vec![
        n.to_string(),
        real(p),
        psc_unencapsulated(n).to_string(),
        real(psc::r_min(n, p)?),
        rec.r.to_string(),
        real(rec.psc),
        real(psc::r_h(n, p)?),
        real(psc::s_min(n, p)?),
        real(psc::optimal_region_size(n, p)?),
    ]);
    Ok(t)
}

fn run_command(command: Command, format: OutputFormat, out: &mut impl Write) -> Result<()> {
    let (table, format) = match command {
        Command::Analyze {
            input,
            scan_java,
            graph,
            per_region,
        } => (analyze(input, scan_java, graph, per_region)?, format),
        Command::Laws { nodes, violations } => (laws(nodes, violations)?, format),
        Command::Figure { id, seed, scale } => (figure(id, seed.get(), scale)?, OutputFormat::Csv),
        Command::Sweep(SweepCommand::Fixed {
            nodes,
            regions,
            violations,
        }) => (labeled_table(&fixed_system_sweep(nodes, regions, violations)?, "split", "psc"), format),
        Command::Sweep(SweepCommand::Varied {
            nodes,
            violations,
            context,
        }) => {
            let x = if context == Context::Layered { "layers" } else { "r" };
            (series_table(&varied_region_sweep(nodes, violations, context)?, x, "psc"), format)
        }
        Command::Sweep(SweepCommand::Layers {
            subsystems,
            layers,
            unit_size,
            violations,
        }) => (
            labeled_table(
                &layered_composition_sweep(subsystems, layers, unit_size, violations)?,
                "layers",
                "psc",
            ),
            format,
        ),
        Command::Growth {
            context,
            max,
            violations,
        } => (growth_table(max, violations, &context)?, format),
        Command::Random { nodes, count, seed } => (
            random_table(&RandomSystemParams {
                n: nodes,
                system_count: count,
                seed: seed.get(),
            })?,
            format,
        ),
        Command::Evolve {
            systems,
            nodes,
            steps,
            add,
            seed,
        } => {
            let config = EvolutionConfig {
                steps,
                seed: seed.get(),
                add_visibility: match add {
                    AddRule::Coin => AddVisibility::CoinFlip,
                    AddRule::Ratio => AddVisibility::PreserveRatio,
                },
            };
            let series = adhoc_evolution(&starting_systems(nodes, systems, seed.get())?, &config)?;
            eprintln!(
                "share of c_e in [0.2, 0.6] after 20% burn-in: {}",
                real(belt_fraction(&series, 0.2, 0.2, 0.6))
            );
            (evolution_table(&series), format)
        }
        Command::Amc {
            nodes,
            regions,
            exhaustive,
            samples,
            cap,
            seed,
        } => {
            let mode = if exhaustive {
                CensusMode::Exhaustive { cap }
            } else {
                CensusMode::Sampled {
                    seed: seed.get(),
                    count: samples,
                }
            };
            let result = amc_census(nodes, regions, mode)?;
            eprintln!("configurations without a uniform equivalent are excluded from the denominator");
            (census_table(&[result]), format)
        }
    };
    table.write(format, out).map_err(|e| EncapError::Io {
        path: PathBuf::from("<stdout>"),
        message: e.to_string(),
    })
}

pub fn run(cli: Cli) -> Result<()> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .map_err(|e| EncapError::Invalid(format!("cannot start {jobs} worker(s): {e}")))?;
    }
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    run_command(cli.command, cli.format, &mut lock)
}
