//! Command-line front end.
//!
//! Every subcommand reads and writes the plain-text formats of the library:
//! whitespace edge lists, `node,infection_time` cascades, `node,state`
//! observations, `node,D,R,Cb,Cc,Ce,P,label` feature tables and JSON models.

pub mod config;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

pub use config::{resolve_path, ConfigError, NetworkSource, RunConfig, DATA_DIR_ENV};

use crate::cascade::{observe, simulate_si, Cascade, Observation};
use crate::classifiers::{self, ClassifierKind, Dataset, Model};
use crate::eval::{
    self, write_predictions_csv, write_predictiveness_csv, write_results_csv, write_summary_csv, write_sweep_dat, CentralityScope,
    EvalReport, Network, Summary,
};
use crate::features::{build_features_with_probabilities, FeatureMatrix, FeatureSet, TopologyFeatures};
use crate::graph::{self, generate, network_stats, Graph, GraphModel};
use crate::reduction::reduce_property1;
use crate::rng::{derive_seed, stage};

type Error = Box<dyn std::error::Error + Send + Sync>;
type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Parser)]
#[command(name = "latent-infection", version, about = "Find hidden infected nodes from partial SI-cascade snapshots")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print n, m, clustering, degree sd, degree skewness and diameter per edge list.
    Stats(StatsArgs),
    /// Sample a synthetic graph, e.g. `ba(1000,2)`, `er(500,0.01)`, `ws(1000,4,0.1)`.
    Generate(GenerateArgs),
    /// Run one SI cascade and draw one observation.
    Simulate(SimulateArgs),
    /// Prune provably susceptible nodes.
    Reduce(ReduceArgs),
    /// Infection-betweenness probability of every hidden node.
    Ib(IbArgs),
    /// Feature table of the hidden nodes.
    Features(FeaturesArgs),
    /// Fit a classifier on labeled feature tables.
    Train(TrainArgs),
    /// Classify the rows of a feature table.
    Predict(PredictArgs),
    /// Run the train/test protocol on every (network, observed fraction) cell.
    Run(ExperimentArgs),
    /// `run`, plus per-network sweep tables, gnuplot data and optionally the
    /// per-feature predictiveness matrix.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    pub model: GraphModel,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.1)]
    pub stop_fraction: f64,
    #[arg(long, default_value_t = 0.15)]
    pub observed: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Run index used to derive the cascade and observation seeds.
    #[arg(long, default_value_t = 0)]
    pub run: u64,
    /// Directory receiving `cascade.csv` and `observation.csv`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ObservedGraphArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub observation: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub input: ObservedGraphArgs,
    /// `node,verdict` table; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the reduced graph as an edge list.
    #[arg(long)]
    pub reduced_graph: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IbArgs {
    #[command(flatten)]
    pub input: ObservedGraphArgs,
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FeaturesArgs {
    #[command(flatten)]
    pub input: ObservedGraphArgs,
    /// Ground-truth cascade; adds the label column.
    #[arg(long)]
    pub cascade: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    #[arg(long, default_value = "original")]
    pub centrality_scope: CentralityScope,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Labeled feature tables; rows are pooled.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, default_value = "c45")]
    pub classifier: ClassifierKind,
    #[arg(long, default_value = "all")]
    pub features: FeatureSet,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// `node,label,posterior` table; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Flags shared by `run` and `sweep`; each overrides the matching config key.
#[derive(Debug, Args, Default)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Observed fractions, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub observed: Option<Vec<f64>>,
    /// Classifiers, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub classifier: Option<Vec<ClassifierKind>>,
    /// Feature sets such as `all`, `P` or `D+R`, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub features: Option<Vec<FeatureSet>>,
    /// Edge-list files replacing the configured networks.
    #[arg(long)]
    pub graph: Vec<PathBuf>,
    /// Generator specs replacing the configured networks.
    #[arg(long)]
    pub generate: Vec<GraphModel>,
    #[arg(long)]
    pub centrality_scope: Option<CentralityScope>,
    #[arg(long)]
    pub n_train: Option<usize>,
    #[arg(long)]
    pub n_test: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub experiment: ExperimentArgs,
    /// Also write the classifier x single-feature mean-F matrix at the
    /// first observed fraction.
    #[arg(long)]
    pub predictiveness: bool,
}

/// Parse `args` (program name first), run the command and return the
/// process exit code. Errors go to stderr.
pub fn main_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

pub fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Stats(a) => stats(a).map(|_| 0),
        Command::Generate(a) => generate_cmd(a).map(|_| 0),
        Command::Simulate(a) => simulate(a).map(|_| 0),
        Command::Reduce(a) => reduce(a).map(|_| 0),
        Command::Ib(a) => ib(a).map(|_| 0),
        Command::Features(a) => features(a).map(|_| 0),
        Command::Train(a) => train(a).map(|_| 0),
        Command::Predict(a) => predict(a).map(|_| 0),
        Command::Run(a) => {
            let outcome = run_experiments(&a, None)?;
            Ok(outcome.exit_code())
        }
        Command::Sweep(a) => {
            let options = SweepOptions {
                predictiveness: a.predictiveness,
            };
            let outcome = run_experiments(&a.experiment, Some(options))?;
            Ok(outcome.exit_code())
        }
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            Box::new(io::BufWriter::new(fs::File::create(p)?))
        }
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    })
}

fn load_graph(path: &Path) -> Result<Graph> {
    Ok(graph::read_edge_list(resolve_path(path, Path::new(".")))?)
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn load_observation(g: &Graph, path: &Path) -> Result<Observation> {
    Ok(Observation::read_csv(&read_text(path)?, g)?)
}

fn network_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub const STATS_HEADER: &str = "name,n,m,c,sigma,s,d";

fn stats(a: StatsArgs) -> Result<()> {
    let mut rows = Vec::new();
    for path in &a.paths {
        let g = load_graph(path)?;
        let s = network_stats(&g);
        rows.push(format!(
            "{},{},{},{:.4},{:.4},{:.4},{}",
            network_name(path),
            s.n,
            s.m,
            s.c,
            s.sigma,
            s.s,
            s.d
        ));
    }
    let mut out = output(a.out.as_deref())?;
    writeln!(out, "{STATS_HEADER}")?;
    for row in rows {
        writeln!(out, "{row}")?;
    }
    out.flush()?;
    Ok(())
}

fn generate_cmd(a: GenerateArgs) -> Result<()> {
    let g = generate(a.model, a.seed)?;
    let mut out = output(a.out.as_deref())?;
    g.write_edge_list(&mut out)?;
    out.flush()?;
    Ok(())
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let g = load_graph(&a.graph)?;
    let cascade = simulate_si(&g, a.lambda, a.stop_fraction, derive_seed(a.seed, a.run, stage::CASCADE))?;
    let obs = observe(&cascade, &g, a.observed, derive_seed(a.seed, a.run, stage::OBSERVE));
    fs::create_dir_all(&a.out)?;
    let mut c = output(Some(&a.out.join("cascade.csv")))?;
    cascade.write_csv(&g, &mut c)?;
    c.flush()?;
    let mut o = output(Some(&a.out.join("observation.csv")))?;
    obs.write_csv(&g, &mut o)?;
    o.flush()?;
    Ok(())
}

fn reduce(a: ReduceArgs) -> Result<()> {
    let g = load_graph(&a.input.graph)?;
    let obs = load_observation(&g, &a.input.observation)?;
    let red = reduce_property1(&g, &obs)?;
    let mut out = output(a.out.as_deref())?;
    writeln!(out, "node,verdict")?;
    for (v, verdict) in red.verdicts(&obs).into_iter().enumerate() {
        writeln!(out, "{},{}", g.label(v), verdict.as_str())?;
    }
    out.flush()?;
    if let Some(path) = &a.reduced_graph {
        let mut w = output(Some(path))?;
        red.graph().write_edge_list(&mut w)?;
        w.flush()?;
    }
    Ok(())
}

fn ib(a: IbArgs) -> Result<()> {
    let g = load_graph(&a.input.graph)?;
    let obs = load_observation(&g, &a.input.observation)?;
    let red = reduce_property1(&g, &obs)?;
    let p = eval::reduced_probabilities(&red, a.alpha)?;
    let mut out = output(a.out.as_deref())?;
    writeln!(out, "node,probability")?;
    for &v in obs.hidden() {
        let value = red.reduced_node(v).and_then(|k| p.get(&k).copied()).unwrap_or(0.0);
        writeln!(out, "{},{}", g.label(v), value)?;
    }
    out.flush()?;
    Ok(())
}

fn features(a: FeaturesArgs) -> Result<()> {
    let g = load_graph(&a.input.graph)?;
    let obs = load_observation(&g, &a.input.observation)?;
    let truth = match &a.cascade {
        Some(path) => Some(Cascade::read_csv(&read_text(path)?, &g, a.lambda)?),
        None => None,
    };
    let red = reduce_property1(&g, &obs)?;
    let p = eval::reduced_probabilities(&red, a.alpha)?;
    let topology = match a.centrality_scope {
        CentralityScope::Original => TopologyFeatures::compute(&g)?,
        CentralityScope::Reduced => TopologyFeatures::on_reduced(&red)?,
    };
    let fm = build_features_with_probabilities(&g, &topology, &obs, &red, &p, truth.as_ref())?;
    let mut out = output(a.out.as_deref())?;
    fm.write_csv(&mut out, |v| g.label(v))?;
    out.flush()?;
    Ok(())
}

fn train(a: TrainArgs) -> Result<()> {
    let mut parts = Vec::new();
    for path in &a.inputs {
        parts.push(FeatureMatrix::read_csv(&read_text(path)?)?);
    }
    let pooled = FeatureMatrix::concat(parts.iter())?;
    if !pooled.is_labeled() {
        return Err("training tables must carry labels".into());
    }
    let model = classifiers::fit(a.classifier, &Dataset::from_features(&pooled, &a.features), a.seed)?;
    model.save(&a.out)?;
    Ok(())
}

fn predict(a: PredictArgs) -> Result<()> {
    let model = Model::load(&a.model)?;
    let fm = FeatureMatrix::read_csv(&read_text(&a.input)?)?;
    let set: FeatureSet = model.feature_names().join("+").parse()?;
    let preds = classifiers::predict(&model, &Dataset::from_features(&fm, &set), a.seed)?;
    let mut out = output(a.out.as_deref())?;
    writeln!(out, "node,label,posterior")?;
    for p in preds {
        let label = if p.infected { "infected" } else { "susceptible" };
        writeln!(out, "{},{},{}", p.node, label, p.posterior_infected)?;
    }
    out.flush()?;
    Ok(())
}

/// Outcome of one (network, observed fraction) cell.
#[derive(Debug, Clone, Serialize)]
pub struct CellRecord {
    pub network: String,
    pub observed_fraction: f64,
    pub dir: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NetworkRecord {
    pub name: String,
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Written to `manifest.json` in the output directory.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub config_hash: String,
    pub master_seed: u64,
    pub networks: Vec<NetworkRecord>,
    pub cells: Vec<CellRecord>,
    pub failed_cells: usize,
}

impl Manifest {
    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed_cells > 0)
    }
}

/// Apply command-line overrides to a config (or the defaults).
pub fn effective_config(a: &ExperimentArgs) -> Result<RunConfig> {
    let mut config = match &a.config {
        Some(path) => {
            let mut c = RunConfig::load(path)?;
            let base = path.parent().unwrap_or(Path::new("."));
            for net in &mut c.networks {
                if let Some(p) = &net.path {
                    net.path = Some(resolve_path(p, base));
                }
            }
            c
        }
        None => RunConfig::default(),
    };
    if let Some(s) = a.seed {
        config.master_seed = s;
    }
    if let Some(o) = &a.out {
        config.out_dir = o.clone();
    }
    if let Some(v) = a.alpha {
        config.ib.alpha = v;
    }
    if let Some(v) = a.lambda {
        config.simulation.lambda = v;
    }
    if let Some(v) = &a.observed {
        config.simulation.observed_fractions = v.clone();
    }
    if let Some(v) = &a.classifier {
        config.classification.classifiers = v.clone();
    }
    if let Some(v) = &a.features {
        config.classification.feature_sets = v.clone();
    }
    if let Some(v) = a.centrality_scope {
        config.classification.centrality_scope = v;
    }
    if let Some(v) = a.n_train {
        config.simulation.n_train_runs = v;
    }
    if let Some(v) = a.n_test {
        config.simulation.n_test_runs = v;
    }
    if !a.graph.is_empty() || !a.generate.is_empty() {
        config.networks.clear();
        for path in &a.graph {
            config.networks.push(NetworkSource {
                name: network_name(path),
                path: Some(resolve_path(path, Path::new("."))),
                generator: None,
                generator_seed: None,
            });
        }
        for model in &a.generate {
            let name: String = model
                .to_string()
                .chars()
                .map(|c| if c.is_ascii_alphanumeric() || c == '.' { c } else { '_' })
                .collect();
            config.networks.push(NetworkSource {
                name: name.trim_end_matches('_').to_string(),
                path: None,
                generator: Some(*model),
                generator_seed: None,
            });
        }
    }
    config.validate()?;
    if config.networks.is_empty() {
        return Err("no networks: give --config, --graph or --generate".into());
    }
    Ok(config)
}

fn load_network(config: &RunConfig, index: usize) -> (NetworkRecord, Result<Network, String>) {
    let src = &config.networks[index];
    let (source, seed, graph) = match (&src.path, &src.generator) {
        (Some(path), _) => (
            path.display().to_string(),
            None,
            graph::read_edge_list(path).map_err(|e| e.to_string()),
        ),
        (None, Some(model)) => {
            let seed = src
                .generator_seed
                .unwrap_or_else(|| derive_seed(config.master_seed, index as u64, stage::GENERATE));
            (model.to_string(), Some(seed), generate(*model, seed).map_err(|e| e.to_string()))
        }
        (None, None) => (String::new(), None, Err("no source".to_string())),
    };
    let net = graph.and_then(|g| Network::new(src.name.clone(), g).map_err(|e| e.to_string()));
    let record = NetworkRecord {
        name: src.name.clone(),
        source,
        generator_seed: seed,
        error: net.as_ref().err().cloned(),
    };
    (record, net)
}

fn cell_dir(network: &str, fraction: f64) -> String {
    format!("{network}/observed_{fraction}")
}

struct CellOutput {
    record: CellRecord,
    reports: Vec<EvalReport>,
    summaries: Vec<Summary>,
}

fn run_cell(config: &RunConfig, net: &Result<Network, String>, name: &str, fraction: f64) -> CellOutput {
    let dir = cell_dir(name, fraction);
    let result = (|| -> Result<eval::Experiment> {
        let net = net.as_ref().map_err(|e| format!("network unavailable: {e}"))?;
        let protocol = config.protocol(fraction);
        let runs = eval::simulate_runs(net, &protocol, config.master_seed)?;
        let exp = eval::evaluate_runs(net, &protocol, config.master_seed, &runs)?;
        let path = config.out_dir.join(&dir);
        fs::create_dir_all(&path)?;
        let mut w = output(Some(&path.join("results.csv")))?;
        write_results_csv(&mut w, &exp.reports)?;
        w.flush()?;
        let mut w = output(Some(&path.join("summary.csv")))?;
        write_summary_csv(&mut w, &exp.summaries)?;
        w.flush()?;
        let mut w = output(Some(&path.join("predictions.csv")))?;
        write_predictions_csv(&mut w, &exp.reports, |v| net.graph().label(v))?;
        w.flush()?;
        let train = FeatureMatrix::concat(runs[..protocol.n_train_runs].iter().map(|r| &r.features))?;
        let mut w = output(Some(&path.join("train_features.csv")))?;
        train.write_csv(&mut w, |v| net.graph().label(v))?;
        w.flush()?;
        Ok(exp)
    })();
    match result {
        Ok(exp) => CellOutput {
            record: CellRecord {
                network: name.to_string(),
                observed_fraction: fraction,
                dir,
                status: "ok",
                error: None,
            },
            reports: exp.reports,
            summaries: exp.summaries,
        },
        Err(e) => CellOutput {
            record: CellRecord {
                network: name.to_string(),
                observed_fraction: fraction,
                dir,
                status: "failed",
                error: Some(e.to_string()),
            },
            reports: Vec::new(),
            summaries: Vec::new(),
        },
    }
}

/// Extra outputs of `sweep`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SweepOptions {
    /// Classifier x single-feature mean-F matrix per network, at the first
    /// observed fraction.
    pub predictiveness: bool,
}

/// Execute every cell of the effective config and write the merged
/// `results.csv`, `summary.csv` and `manifest.json`.
pub fn run_experiments(a: &ExperimentArgs, sweep: Option<SweepOptions>) -> Result<Manifest> {
    let config = effective_config(a)?;
    let jobs = a
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    fs::create_dir_all(&config.out_dir)?;
    fs::write(config.out_dir.join("config.toml"), config.to_toml())?;

    let fractions = &config.simulation.observed_fractions;
    let (networks, cells) = pool.install(|| {
        let networks: Vec<(NetworkRecord, Result<Network, String>)> = (0..config.networks.len())
            .into_par_iter()
            .map(|i| load_network(&config, i))
            .collect();
        let grid: Vec<(usize, f64)> = (0..networks.len())
            .flat_map(|i| fractions.iter().map(move |&f| (i, f)))
            .collect();
        let cells: Vec<CellOutput> = grid
            .par_iter()
            .map(|&(i, f)| run_cell(&config, &networks[i].1, &config.networks[i].name, f))
            .collect();
        (networks, cells)
    });

    let reports: Vec<EvalReport> = cells.iter().flat_map(|c| c.reports.iter().cloned()).collect();
    let summaries: Vec<Summary> = cells.iter().flat_map(|c| c.summaries.iter().cloned()).collect();
    let mut w = output(Some(&config.out_dir.join("results.csv")))?;
    write_results_csv(&mut w, &reports)?;
    w.flush()?;
    let mut w = output(Some(&config.out_dir.join("summary.csv")))?;
    write_summary_csv(&mut w, &summaries)?;
    w.flush()?;

    let mut extra_failures = Vec::new();
    if let Some(sweep) = sweep {
        for (i, (_, net)) in networks.iter().enumerate() {
            let name = &config.networks[i].name;
            let own: Vec<Summary> = summaries.iter().filter(|s| &s.network == name).cloned().collect();
            let dir = config.out_dir.join(name);
            fs::create_dir_all(&dir)?;
            let mut w = output(Some(&dir.join("sweep.dat")))?;
            write_sweep_dat(&mut w, &own)?;
            w.flush()?;
            let mut w = output(Some(&dir.join("sweep_summary.csv")))?;
            write_summary_csv(&mut w, &own)?;
            w.flush()?;
            if sweep.predictiveness {
                let fraction = fractions[0];
                let result = net
                    .as_ref()
                    .map_err(|e| format!("network unavailable: {e}").into())
                    .and_then(|net| pool.install(|| write_predictiveness(&config, net, fraction)));
                if let Err(e) = result {
                    extra_failures.push(CellRecord {
                        network: name.clone(),
                        observed_fraction: fraction,
                        dir: format!("{name}/predictiveness.csv"),
                        status: "failed",
                        error: Some(e.to_string()),
                    });
                }
            }
        }
    }

    let mut cell_records: Vec<CellRecord> = cells.into_iter().map(|c| c.record).collect();
    cell_records.append(&mut extra_failures);
    let failed_cells = cell_records.iter().filter(|c| c.status != "ok").count();
    let manifest = Manifest {
        config_hash: config.hash(),
        master_seed: config.master_seed,
        networks: networks.into_iter().map(|(r, _)| r).collect(),
        cells: cell_records,
        failed_cells,
    };
    fs::write(
        config.out_dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest)? + "\n",
    )?;
    Ok(manifest)
}

fn write_predictiveness(config: &RunConfig, net: &Network, fraction: f64) -> Result<()> {
    let m = eval::feature_predictiveness(net, &config.protocol(fraction), config.master_seed)?;
    let mut w = output(Some(&config.out_dir.join(net.name()).join("predictiveness.csv")))?;
    write_predictiveness_csv(&mut w, &m)?;
    w.flush()?;
    Ok(())
}
