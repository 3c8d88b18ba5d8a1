//! Command-line interface: argument definitions and subcommand handlers.

use crate::config::{validate_config, ExperimentConfig, ExperimentKind};
use crate::error::CliError;
use crate::experiments::run_experiment;
use clap::{Args, Parser, Subcommand, ValueEnum};
use pclocal::exploration::{gtilde, run_exploration, ExplorationOutcome, ExplorationParams};
use pclocal::graph::{ball, girth, io};
use pclocal::percolation::{
    estimate_pc, estimate_pc_tree_exact, giant_sweep, Observable, PcOptions, SurvivalCriterion, DEFAULT_ALPHA,
    DEFAULT_TOL,
};
use pclocal::spectral::{cheeger_bracket, lambda1_dirichlet, smallest_eigenvalue_gap, spectral_gap};
use pclocal::walks::{escape_exact, escape_mc, lemma_check, EscapeQuery};
use pclocal::{Family, Generated, GeneratorSpec, RootedBall, VertexSet};
use serde::Serialize;
use serde_json::json;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(
    name = "pclocal",
    version,
    about = "Percolation thresholds, spectra and random walks on locally tree-like graphs"
)]
pub struct Cli {
    /// Worker threads for data-parallel loops (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph and write it as an edge list.
    Gen(GenArgs),
    /// Exact girth of a graph.
    Girth(GraphArgs),
    /// Bottom of spectrum, spectral gap or Cheeger bracket.
    Spectral(SpectralArgs),
    /// Escape probability of random walk from a vertex set.
    Escape(EscapeArgs),
    /// Giant-component statistics over a grid of p.
    Sweep(SweepArgs),
    /// Threshold estimate by bisection.
    Pc(PcArgs),
    /// One run of the sprinkled exploration process.
    Explore(ExploreArgs),
    /// Named experiments driven by a JSON config.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

/// Where a graph comes from: a generator family or an edge-list file.
#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Generator family (tree_ball, random_regular, torus, slab, triangular_torus, free_product_ball).
    #[arg(long, value_parser = parse_family, conflicts_with = "graph")]
    pub family: Option<Family>,
    /// Generator parameters, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub params: Vec<u64>,
    /// Seed of randomized generators.
    #[arg(long, default_value_t = 0)]
    pub graph_seed: u64,
    /// Edge-list file written by `gen`.
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Generator family (tree_ball, random_regular, torus, slab, triangular_torus, free_product_ball).
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    /// Generator parameters, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub params: Vec<u64>,
    /// Seed of randomized generators.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Edge-list path; a `.meta.json` sidecar is written next to it.
    /// Without it the edge list goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpectralKind {
    /// Dirichlet bottom of spectrum of a rooted ball.
    Lambda1,
    /// `1 - lambda_2` of a finite regular graph.
    Gap,
    /// Gap at the bottom of the spectrum of a bipartite graph.
    Smallest,
    /// Cheeger constant bracket.
    Cheeger,
}

#[derive(Debug, Args)]
pub struct SpectralArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Quantity to estimate; defaults to lambda1 for balls and gap otherwise.
    #[arg(long, value_enum)]
    pub kind: Option<SpectralKind>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

/// A rooted ball: a ball family directly, or a ball cut from any graph.
#[derive(Debug, Clone, Args)]
pub struct BallArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Center of the ball cut from a non-ball graph.
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    /// Radius of the ball cut from a non-ball graph.
    #[arg(long)]
    pub radius: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EscapeArgs {
    #[command(flatten)]
    pub ball: BallArgs,
    /// Vertices of A, comma separated (default: the root).
    #[arg(long, value_delimiter = ',', conflicts_with = "set_radius")]
    pub set: Vec<usize>,
    /// Use the ball of this radius around the root as A.
    #[arg(long)]
    pub set_radius: Option<usize>,
    /// Add a Monte Carlo estimate.
    #[arg(long)]
    pub mc: bool,
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Values of p, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub grid: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV path (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObservableArg {
    RootSurvival,
    GiantFraction,
    Crossing,
    /// Exact survival recursion of a tree ball.
    TreeExact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    HalfOfMax,
    ScalingRatio,
}

impl From<CriterionArg> for SurvivalCriterion {
    fn from(c: CriterionArg) -> Self {
        match c {
            CriterionArg::HalfOfMax => SurvivalCriterion::HalfOfMax,
            CriterionArg::ScalingRatio => SurvivalCriterion::ScalingRatio,
        }
    }
}

#[derive(Debug, Args)]
pub struct PcArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_enum, default_value_t = ObservableArg::GiantFraction)]
    pub observable: ObservableArg,
    #[arg(long, value_enum, default_value_t = CriterionArg::HalfOfMax)]
    pub criterion: CriterionArg,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// JSON path (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExploreArgs {
    #[command(flatten)]
    pub ball: BallArgs,
    /// Bond probability of the first label.
    #[arg(long)]
    pub p: f64,
    /// Sprinkling probability of the second label.
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
    /// Bottom of spectrum used for goodness and the stopping rule
    /// (default: Dirichlet estimate of the ball).
    #[arg(long)]
    pub lambda1: Option<f64>,
    /// Path length for goodness (default: from the girth of the ball).
    #[arg(long)]
    pub gtilde: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub max_steps: usize,
    /// Start vertex (default: the root).
    #[arg(long)]
    pub start: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory for `trace.csv` and `summary.json` (default: summary to stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ExperimentCommand {
    /// Run an experiment and write its artifacts.
    Run(RunArgs),
    /// Check a config without running it.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// JSON config file.
    #[arg(long, required_unless_present = "experiment")]
    pub config: Option<PathBuf>,
    /// Run an experiment with default settings instead of a config (E1..E8 or full name).
    #[arg(long, conflicts_with = "config")]
    pub experiment: Option<String>,
    /// Master seed, replacing the config's.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Trials per point, replacing the config's.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Output directory, replacing the config's.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Exit with code 3 when an acceptance check fails.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub config: PathBuf,
}

fn parse_family(s: &str) -> Result<Family, String> {
    Family::parse(s).ok_or_else(|| format!("unknown family `{s}`"))
}

/// Runs a parsed command line, writing results to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Gen(a) => gen(a, out),
        Command::Girth(a) => girth_cmd(a, out),
        Command::Spectral(a) => spectral(a, out),
        Command::Escape(a) => escape(a, out),
        Command::Sweep(a) => sweep(a, out),
        Command::Pc(a) => pc(a, out),
        Command::Explore(a) => explore(a, out),
        Command::Experiment(ExperimentCommand::Run(a)) => experiment_run(a, out),
        Command::Experiment(ExperimentCommand::Validate(a)) => experiment_validate(a, out),
    }
}

fn print_json<T: Serialize>(out: &mut dyn Write, v: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(v)?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn write_or_print(path: Option<&Path>, bytes: &[u8], out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", p.display()))),
        None => Ok(out.write_all(bytes)?),
    }
}

impl GraphArgs {
    fn spec(&self) -> Result<Option<GeneratorSpec>, CliError> {
        let Some(family) = self.family else {
            return Ok(None);
        };
        let spec = GeneratorSpec::new(family, self.params.clone(), self.graph_seed);
        let v = spec.violations();
        if !v.is_empty() {
            return Err(CliError::Validation(v.join("; ")));
        }
        Ok(Some(spec))
    }

    fn require_spec(&self, cmd: &str) -> Result<GeneratorSpec, CliError> {
        self.spec()?
            .ok_or_else(|| CliError::Validation(format!("`{cmd}` needs --family and --params")))
    }

    fn load(&self) -> Result<Generated, CliError> {
        if let Some(spec) = self.spec()? {
            return Ok(spec.generate()?);
        }
        match &self.graph {
            Some(path) => {
                let (g, _) = io::load(path)?;
                Ok(Generated::Graph(g))
            }
            None => Err(CliError::Validation("give --family and --params, or --graph".into())),
        }
    }
}

impl BallArgs {
    fn load(&self) -> Result<RootedBall, CliError> {
        match (self.graph.load()?, self.radius) {
            (Generated::Ball(b), None) => Ok(b),
            (gen, Some(r)) => {
                let g = gen.graph();
                g.check_vertex(self.root)?;
                Ok(ball(g, self.root, r)?)
            }
            (Generated::Graph(_), None) => Err(CliError::Validation(
                "this graph is not a ball: give --radius (and --root) to cut one".into(),
            )),
        }
    }
}

fn gen(a: GenArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = GeneratorSpec::new(a.family, a.params, a.seed);
    let v = spec.violations();
    if !v.is_empty() {
        return Err(CliError::Validation(v.join("; ")));
    }
    let g = spec.generate()?.into_graph();
    match a.out {
        Some(path) => {
            io::save(&g, &spec.metadata(), &path)?;
            print_json(
                out,
                &json!({
                    "path": path,
                    "generator": spec.family,
                    "parameters": spec.parameters,
                    "seed": spec.seed,
                    "vertices": g.vertex_count(),
                    "edges": g.edge_count(),
                    "regular_degree": g.regular_degree(),
                }),
            )
        }
        None => Ok(io::write_edge_list(&g, out)?),
    }
}

fn girth_cmd(a: GraphArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let gen = a.load()?;
    let gi = girth(gen.graph());
    print_json(
        out,
        &json!({ "girth": gi.length(), "tree_radius": gi.tree_radius(), "vertices": gen.graph().vertex_count() }),
    )
}

fn spectral(a: SpectralArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let gen = a.graph.load()?;
    let kind = a.kind.unwrap_or(if gen.ball().is_some() {
        SpectralKind::Lambda1
    } else {
        SpectralKind::Gap
    });
    let est = match kind {
        SpectralKind::Lambda1 => {
            let b = gen
                .ball()
                .ok_or_else(|| CliError::Validation("lambda1 needs a ball family".into()))?;
            lambda1_dirichlet(b, a.tol)?
        }
        SpectralKind::Gap => spectral_gap(gen.graph(), a.tol)?,
        SpectralKind::Smallest => smallest_eigenvalue_gap(gen.graph(), a.tol)?
            .ok_or_else(|| CliError::Validation("graph is not bipartite".into()))?,
        SpectralKind::Cheeger => cheeger_bracket(gen.graph())?,
    };
    print_json(out, &est)
}

fn escape(a: EscapeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let b = a.ball.load()?;
    let n = b.graph().vertex_count();
    let set = match a.set_radius {
        Some(r) => b.inner_ball(r),
        None if a.set.is_empty() => VertexSet::from_vertices(n, [b.root()]),
        None => {
            if let Some(&v) = a.set.iter().find(|&&v| v >= n) {
                return Err(CliError::Validation(format!(
                    "vertex {v} out of range for {n} vertices"
                )));
            }
            VertexSet::from_vertices(n, a.set.iter().copied())
        }
    };
    let mut q = EscapeQuery::new(&b, set);
    q.trials = a.trials;
    q.seed = a.seed;
    q.validate()?;
    let exact = escape_exact(&q)?;
    let lam = lambda1_dirichlet(&b, 1e-10)?;
    let lemma = lemma_check(&q, &lam)?;
    let mc = if a.mc { Some(escape_mc(&q)?) } else { None };
    print_json(out, &json!({ "exact": exact, "monte_carlo": mc, "lemma": lemma }))
}

fn sweep(a: SweepArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = a.graph.require_spec("sweep")?;
    let res = giant_sweep(&spec, &a.grid, a.trials, a.alpha, a.seed)?;
    let mut buf = Vec::new();
    res.write_csv(
        &mut buf,
        &[
            format!("graph={} {:?} seed={}", spec.family, spec.parameters, spec.seed),
            format!("vertices={} alpha={} seed={}", res.vertex_count, res.alpha, a.seed),
        ],
    )?;
    write_or_print(a.out.as_deref(), &buf, out)
}

fn pc(a: PcArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = a.graph.require_spec("pc")?;
    let est = match a.observable {
        ObservableArg::TreeExact => {
            if spec.family != Family::TreeBall {
                return Err(CliError::Validation("tree_exact needs --family tree_ball".into()));
            }
            let (d, r) = (spec.parameters[0] as usize, spec.parameters[1] as usize);
            estimate_pc_tree_exact(d, r, a.criterion.into(), a.tol)?
        }
        other => {
            let observable = match other {
                ObservableArg::RootSurvival => Observable::RootSurvival,
                ObservableArg::GiantFraction => Observable::GiantFraction,
                _ => Observable::Crossing,
            };
            let mut o = PcOptions::new(observable, a.trials, a.seed);
            o.alpha = a.alpha;
            o.tol = a.tol;
            o.criterion = a.criterion.into();
            estimate_pc(&spec, &o)?
        }
    };
    let mut text = serde_json::to_string_pretty(&est)?;
    text.push('\n');
    write_or_print(a.out.as_deref(), text.as_bytes(), out)
}

#[derive(Serialize)]
struct ExploreSummary {
    tau: Option<usize>,
    survived: bool,
    boundary_hit: bool,
    outcome: ExplorationOutcome,
    steps: usize,
    a0_size: usize,
    final_size: usize,
    d: usize,
    start: usize,
    seed: u64,
    params: ExplorationParams,
}

fn explore(a: ExploreArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let b = a.ball.load()?;
    let lambda1 = match a.lambda1 {
        Some(l) => l,
        None => lambda1_dirichlet(&b, 1e-10)?.value,
    };
    let gt = match a.gtilde {
        Some(g) => g,
        None => match girth(b.graph()).length() {
            Some(g) => gtilde(g)?,
            None => return Err(CliError::Validation("the ball is a tree: give --gtilde".into())),
        },
    };
    let params = ExplorationParams {
        p: a.p,
        eps: a.eps,
        lambda1,
        gtilde: gt,
        max_steps: a.max_steps,
    };
    let t = run_exploration(&b, a.start.unwrap_or(b.root()), &params, a.seed)?;
    let summary = ExploreSummary {
        tau: t.tau,
        survived: t.outcome == ExplorationOutcome::Survived,
        boundary_hit: t.boundary_hit,
        outcome: t.outcome,
        steps: t.steps,
        a0_size: t.a0_size(),
        final_size: *t.sizes.last().unwrap(),
        d: t.d,
        start: t.start,
        seed: t.seed,
        params: t.params,
    };
    match a.out {
        Some(dir) => {
            fs::create_dir_all(&dir)?;
            let mut csv = String::from("t,size,xi,z\n");
            for s in 0..=t.steps {
                let xi = t.xi.get(s).map(|x| x.to_string()).unwrap_or_default();
                csv.push_str(&format!("{s},{},{xi},{}\n", t.sizes[s], t.z[s]));
            }
            fs::write(dir.join("trace.csv"), csv)?;
            let mut text = serde_json::to_string_pretty(&summary)?;
            text.push('\n');
            fs::write(dir.join("summary.json"), text)?;
            print_json(out, &summary)
        }
        None => print_json(out, &summary),
    }
}

fn load_run_config(a: &RunArgs) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match (&a.config, &a.experiment) {
        (Some(path), _) => ExperimentConfig::load(path)?,
        (None, Some(name)) => ExperimentConfig::new(
            ExperimentKind::parse(name).ok_or_else(|| CliError::Validation(format!("unknown experiment `{name}`")))?,
        ),
        (None, None) => return Err(CliError::Validation("give --config or --experiment".into())),
    };
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(t) = a.trials {
        cfg.overrides.trials = Some(t);
    }
    Ok(cfg)
}

fn experiment_run(a: RunArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = load_run_config(&a)?;
    let res = run_experiment(&cfg, a.out.as_deref())?;
    for c in &res.report.checks {
        writeln!(
            out,
            "{} {}: {} ({})",
            cfg.experiment,
            c.name,
            if c.pass { "PASS" } else { "FAIL" },
            c.detail
        )?;
    }
    writeln!(out, "artifacts in {}", res.out_dir.display())?;
    if a.check && !res.report.pass {
        let failed: Vec<&str> = res
            .report
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect();
        return Err(CliError::CheckFailed(format!(
            "{}: {}",
            cfg.experiment,
            failed.join(", ")
        )));
    }
    Ok(())
}

fn experiment_validate(a: ValidateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = ExperimentConfig::load(&a.config)?;
    let violations = validate_config(&cfg);
    print_json(
        out,
        &json!({ "experiment": cfg.experiment, "valid": violations.is_empty(), "violations": violations }),
    )?;
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(format!("{} violation(s)", violations.len())))
    }
}
