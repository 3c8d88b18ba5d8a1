//! The named experiments and their acceptance checks.

use crate::artifacts::{ArtifactDir, SeedLog};
use crate::config::{criterion_name, validate_config, ExperimentConfig, ExperimentKind, Settings};
use crate::error::CliError;
use pclocal::exploration::{
    drift_report, good_edge_census, gtilde, run_exploration, theorem1_bound, ExplorationParams, ExplorationTrace,
    Theorem1Inputs,
};
use pclocal::generators::{free_product_ball, tree_ball};
use pclocal::graph::girth;
use pclocal::percolation::{
    estimate_pc, estimate_pc_tree_exact, giant_sweep, Observable, PcEstimate, PcOptions, SweepResult,
};
use pclocal::spectral::{extrapolate_radius_limit, lambda1_dirichlet};
use pclocal::walks::{lemma_check, EscapeQuery};
use pclocal::{par, rng, RootedBall, VertexSet};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Tolerances of the acceptance checks.
pub mod tolerance {
    /// Tree threshold from the exact recursion.
    pub const TREE_PC: f64 = 0.002;
    /// Expander threshold against `1/(d-1)`.
    pub const EXPANDER_PC: f64 = 0.02;
    /// Subcritical and supercritical giant probabilities, `0.05` either side
    /// of `1/(d-1)`.
    pub const EXPANDER_OFFSET: f64 = 0.05;
    pub const EXPANDER_LOW_MAX: f64 = 0.1;
    pub const EXPANDER_HIGH_MIN: f64 = 0.9;
    pub const SQUARE_PC: f64 = 0.01;
    pub const TRIANGULAR_PC: f64 = 0.010;
    /// Ceiling on slab thresholds.
    pub const SLAB_MAX: f64 = 0.51;
    /// Minimum number of (ball, set) pairs in the escape suite.
    pub const LEMMA_PAIRS: usize = 30;
    /// Minimum number of pooled exploration steps.
    pub const DRIFT_STEPS: usize = 1000;
}

/// One named pass/fail check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub experiment: ExperimentKind,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub data: Value,
}

#[derive(Serialize)]
struct Manifest<'a> {
    experiment: ExperimentKind,
    library: Library,
    config: &'a ExperimentConfig,
    settings: &'a Settings,
    seeds: &'a SeedLog,
    artifacts: Vec<String>,
    wall_time_secs: f64,
}

#[derive(Serialize)]
struct Library {
    name: &'static str,
    version: &'static str,
    cli_version: &'static str,
}

/// Result of [`run_experiment`].
#[derive(Debug)]
pub struct RunOutcome {
    pub report: Report,
    pub out_dir: PathBuf,
    pub artifacts: Vec<String>,
    pub config_hash: String,
}

/// Default output directory for a config without `out`.
pub fn default_out_dir(kind: ExperimentKind) -> PathBuf {
    PathBuf::from("runs").join(kind.name())
}

/// Validates `cfg`, runs it and writes its artifacts, `report.json` and
/// `manifest.json` into `out` (or the config's own directory).
pub fn run_experiment(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<RunOutcome, CliError> {
    let violations = validate_config(cfg);
    if !violations.is_empty() {
        return Err(CliError::Validation(violations.join("; ")));
    }
    let start = Instant::now();
    let settings = cfg.settings();
    let hash = settings.hash();
    let dir = out
        .map(Path::to_path_buf)
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| default_out_dir(cfg.experiment));
    let mut art = ArtifactDir::create(&dir, &hash)?;
    let mut seeds = SeedLog::new(settings.seed);
    let mut ctx = Ctx {
        s: &settings,
        art: &mut art,
        seeds: &mut seeds,
    };
    let (checks, notes, data) = match cfg.experiment {
        ExperimentKind::TreePc => tree_pc(&mut ctx),
        ExperimentKind::ExpanderDichotomy => expander(&mut ctx),
        ExperimentKind::SquareLattice => lattice(&mut ctx, 0.5, tolerance::SQUARE_PC, "1/2"),
        ExperimentKind::Triangular => lattice(
            &mut ctx,
            2.0 * (std::f64::consts::PI / 18.0).sin(),
            tolerance::TRIANGULAR_PC,
            "2 sin(pi/18)",
        ),
        ExperimentKind::GirthSeries => girth_series(&mut ctx),
        ExperimentKind::SlabTrend => slab_trend(&mut ctx),
        ExperimentKind::LemmaEscape => lemma_escape(&mut ctx),
        ExperimentKind::DriftCheck => drift_check(&mut ctx),
    }
    .map_err(|e| e.context(cfg.experiment))?;
    let report = Report {
        experiment: cfg.experiment,
        pass: checks.iter().all(|c| c.pass),
        checks,
        notes,
        data,
    };
    art.json("report.json", &report)?;
    let mut artifacts = art.written().to_vec();
    artifacts.push("manifest.json".into());
    let manifest = Manifest {
        experiment: cfg.experiment,
        library: Library {
            name: "pclocal",
            version: pclocal::VERSION,
            cli_version: env!("CARGO_PKG_VERSION"),
        },
        config: cfg,
        settings: &settings,
        seeds: &seeds,
        artifacts: artifacts.clone(),
        wall_time_secs: start.elapsed().as_secs_f64(),
    };
    art.json("manifest.json", &manifest)?;
    Ok(RunOutcome {
        report,
        out_dir: dir,
        artifacts,
        config_hash: hash,
    })
}

struct Ctx<'a> {
    s: &'a Settings,
    art: &'a mut ArtifactDir,
    seeds: &'a mut SeedLog,
}

impl Ctx<'_> {
    fn seed(&mut self, task: &str) -> u64 {
        let name = format!("{}/{task}", self.s.experiment);
        self.seeds.derive(&name)
    }

    fn pc_options(&self, observable: Observable, seed: u64) -> PcOptions {
        let mut o = PcOptions::new(observable, self.s.trials, seed);
        o.alpha = self.s.alpha;
        o.tol = self.s.tol;
        o.criterion = self.s.criterion;
        o
    }

    fn sweep_csv(&mut self, sweep: &SweepResult) -> Result<(), CliError> {
        let comments = self.art.comments(&[
            format!(
                "graph={} {:?} seed={}",
                sweep.spec.family, sweep.spec.parameters, sweep.spec.seed
            ),
            format!("vertices={} alpha={}", sweep.vertex_count, sweep.alpha),
        ]);
        let mut buf = Vec::new();
        sweep.write_csv(&mut buf, &comments)?;
        self.art.write("sweep.csv", &buf)
    }
}

type Outcome = Result<(Vec<Check>, Vec<String>, Value), CliError>;

fn within(name: &str, value: f64, target: f64, tol: f64) -> Check {
    Check::new(
        name,
        (value - target).abs() <= tol,
        format!("{value} vs {target} +/- {tol}"),
    )
}

fn series_checks(name: &str, label: &str, xs: &[u64], pcs: &[f64]) -> Check {
    let pass = pcs.windows(2).all(|w| w[1] <= w[0]);
    let detail = xs
        .iter()
        .zip(pcs)
        .map(|(x, p)| format!("{label}={x}: {p}"))
        .collect::<Vec<_>>()
        .join(", ");
    Check::new(name, pass, detail)
}

fn tree_pc(ctx: &mut Ctx) -> Outcome {
    let s = ctx.s;
    let (d, r) = (s.parameters[0] as usize, s.parameters[1] as usize);
    let est = estimate_pc_tree_exact(d, r, s.criterion, s.tol)?;
    ctx.art.json("pc_estimate.json", &est)?;
    let target = 1.0 / (d as f64 - 1.0);
    let checks = vec![within("tree_pc", est.value, target, tolerance::TREE_PC)];
    let notes = vec![format!(
        "exact survival recursion at depth {r}, {} criterion",
        criterion_name(s.criterion)
    )];
    Ok((
        checks,
        notes,
        json!({ "d": d, "radius": r, "target": target, "estimate": est }),
    ))
}

fn expander(ctx: &mut Ctx) -> Outcome {
    let s = ctx.s;
    let graph_seed = match s.graph_seed {
        Some(g) => ctx.seeds.record(&format!("{}/graph", s.experiment), g),
        None => ctx.seed("graph"),
    };
    let trial_seed = ctx.seed("trials");
    let spec = s.spec(s.parameters.clone(), graph_seed);
    let sweep = giant_sweep(&spec, &s.grid, s.trials, s.alpha, trial_seed)?;
    ctx.sweep_csv(&sweep)?;
    let est = estimate_pc(&spec, &ctx.pc_options(Observable::GiantFraction, trial_seed))?;
    ctx.art.json("pc_estimate.json", &est)?;
    let d = s.parameters[1] as f64;
    let target = 1.0 / (d - 1.0);
    let mut checks = Vec::new();
    let low = target - tolerance::EXPANDER_OFFSET;
    let high = target + tolerance::EXPANDER_OFFSET;
    for row in &sweep.rows {
        if row.p <= low + 1e-9 {
            checks.push(Check::new(
                "subcritical_no_giant",
                row.prob_giant <= tolerance::EXPANDER_LOW_MAX,
                format!(
                    "P(giant) = {} at p = {} (max {})",
                    row.prob_giant,
                    row.p,
                    tolerance::EXPANDER_LOW_MAX
                ),
            ));
        }
        if row.p >= high - 1e-9 {
            checks.push(Check::new(
                "supercritical_giant",
                row.prob_giant >= tolerance::EXPANDER_HIGH_MIN,
                format!(
                    "P(giant) = {} at p = {} (min {})",
                    row.prob_giant,
                    row.p,
                    tolerance::EXPANDER_HIGH_MIN
                ),
            ));
        }
    }
    checks.push(within("threshold", est.value, target, tolerance::EXPANDER_PC));
    let notes = vec![format!(
        "giant means a component of at least {} of the {} vertices",
        s.alpha, sweep.vertex_count
    )];
    Ok((
        checks,
        notes,
        json!({ "target": target, "estimate": est, "sweep": sweep.rows }),
    ))
}

fn lattice(ctx: &mut Ctx, target: f64, tol: f64, label: &str) -> Outcome {
    let s = ctx.s;
    let trial_seed = ctx.seed("trials");
    let spec = s.spec(s.parameters.clone(), 0);
    let sweep = giant_sweep(&spec, &s.grid, s.trials, s.alpha, trial_seed)?;
    ctx.sweep_csv(&sweep)?;
    let est = estimate_pc(&spec, &ctx.pc_options(Observable::GiantFraction, trial_seed))?;
    ctx.art.json("pc_estimate.json", &est)?;
    let checks = vec![within("threshold", est.value, target, tol)];
    let notes = vec![format!(
        "threshold of P(largest >= {} n) = 1/2 on the periodic lattice; expected {label}",
        s.alpha
    )];
    Ok((
        checks,
        notes,
        json!({ "target": target, "estimate": est, "sweep": sweep.rows }),
    ))
}

#[derive(Serialize)]
struct GirthPoint {
    k: u64,
    girth: usize,
    lambda1: f64,
    lambda1_by_radius: Vec<(usize, f64)>,
    theorem1_bound: f64,
    theorem1_second_term: f64,
    estimate: PcEstimate,
}

/// Bottom of spectrum of the infinite free-product graph, extrapolated from
/// Dirichlet estimates on balls of growing radius.
fn free_product_lambda1(k: usize, radius: usize) -> Result<(f64, Vec<(usize, f64)>), CliError> {
    let lo = radius.saturating_sub(3).max(2);
    let mut points = Vec::new();
    for r in lo..=radius.max(lo + 2) {
        let b = free_product_ball(k, r)?;
        points.push((r, lambda1_dirichlet(&b, 1e-9)?.value));
    }
    let limit = extrapolate_radius_limit(&points)?;
    // keep the largest-ball value if the fit leaves the admissible range
    let last = points.last().unwrap().1;
    let lam = if limit > 0.0 && limit <= last { limit } else { last };
    Ok((lam, points))
}

fn girth_series(ctx: &mut Ctx) -> Outcome {
    let s = ctx.s;
    let d = 6usize;
    let floor = 1.0 / (d as f64 - 1.0);
    let trial_seed = ctx.seed("trials");
    let mut points = Vec::new();
    for &k in &s.series {
        let kk = k as usize;
        let g = girth(free_product_ball(kk, kk / 2 + 1)?.graph())
            .length()
            .ok_or_else(|| CliError::Runtime(format!("free_product_ball({k}) has no cycle")))?;
        let (lambda1, by_radius) = free_product_lambda1(kk, s.radius as usize)?;
        let bound = theorem1_bound(&Theorem1Inputs::new(d, g, lambda1, floor))?;
        let spec = s.spec(vec![k, s.radius], 0);
        let estimate = estimate_pc(&spec, &ctx.pc_options(Observable::RootSurvival, trial_seed))?;
        points.push(GirthPoint {
            k,
            girth: g,
            lambda1,
            lambda1_by_radius: by_radius,
            theorem1_bound: bound.bound,
            theorem1_second_term: bound.second_term,
            estimate,
        });
    }
    let rows: Vec<String> = points
        .iter()
        .map(|p| {
            format!(
                "{},{},{},{},{},{},{}",
                p.k, p.girth, p.estimate.value, p.estimate.ci_low, p.estimate.ci_high, p.lambda1, p.theorem1_bound
            )
        })
        .collect();
    ctx.art.csv(
        "series.csv",
        &[format!("free_product_ball radius={} trials={}", s.radius, s.trials)],
        "k,girth,pc,ci_low,ci_high,lambda1,theorem1_bound",
        &rows,
    )?;
    let pcs: Vec<f64> = points.iter().map(|p| p.estimate.value).collect();
    let checks = vec![
        series_checks("non_increasing_in_k", "k", &s.series, &pcs),
        Check::new(
            "above_tree_floor",
            pcs.iter().all(|&p| p >= floor),
            format!(
                "min {} vs 1/(d-1) = {floor}",
                pcs.iter().cloned().fold(f64::INFINITY, f64::min)
            ),
        ),
        Check::new(
            "below_theorem1_bound",
            points.iter().all(|p| p.estimate.value <= p.theorem1_bound),
            points
                .iter()
                .map(|p| format!("k={}: {} <= {}", p.k, p.estimate.value, p.theorem1_bound))
                .collect::<Vec<_>>()
                .join(", "),
        ),
    ];
    let notes = vec![
        format!(
            "root-survival thresholds on balls of radius {} with the {} criterion; coins are keyed by group element so runs share randomness across k",
            s.radius,
            criterion_name(s.criterion)
        ),
        "the upper bound is asymptotic in the girth and clamps to 1 at these sizes: its regime is not reachable at desk scale, so the binding checks are the 1/(d-1) floor and the monotone trend".into(),
    ];
    Ok((checks, notes, json!({ "d": d, "points": points })))
}

fn slab_trend(ctx: &mut Ctx) -> Outcome {
    let s = ctx.s;
    let trial_seed = ctx.seed("trials");
    let (k, l) = (s.parameters[0], s.parameters[1]);
    let mut ests = Vec::new();
    for &n in &s.series {
        let spec = s.spec(vec![k, l, n], 0);
        ests.push(estimate_pc(&spec, &ctx.pc_options(Observable::Crossing, trial_seed))?);
    }
    let rows: Vec<String> = s
        .series
        .iter()
        .zip(&ests)
        .map(|(n, e)| format!("{n},{},{},{}", e.value, e.ci_low, e.ci_high))
        .collect();
    ctx.art.csv(
        "series.csv",
        &[format!("slab k={k} L={l} trials={}", s.trials)],
        "n,pc,ci_low,ci_high",
        &rows,
    )?;
    let pcs: Vec<f64> = ests.iter().map(|e| e.value).collect();
    let checks = vec![
        series_checks("non_increasing_in_n", "n", &s.series, &pcs),
        Check::new(
            "below_ceiling",
            pcs.iter().all(|&p| p <= tolerance::SLAB_MAX),
            format!(
                "max {} vs {}",
                pcs.iter().cloned().fold(0.0, f64::max),
                tolerance::SLAB_MAX
            ),
        ),
    ];
    let notes = vec![
        "left-right crossing threshold of Z^k x {0..L-1} with an n-periodic extra side".into(),
        "the limit p_c(Z^3) itself is out of desk-scale reach; only the trend is checked".into(),
    ];
    let points: Vec<Value> = s
        .series
        .iter()
        .zip(&ests)
        .map(|(n, e)| json!({ "n": n, "estimate": e }))
        .collect();
    Ok((checks, notes, json!({ "points": points })))
}

/// Random connected set of interior vertices within distance `max_dist` of
/// the root, grown from `start`.
fn random_connected_set<R: Rng>(b: &RootedBall, start: usize, size: usize, max_dist: usize, rng: &mut R) -> VertexSet {
    let g = b.graph();
    let mut set = VertexSet::from_vertices(g.vertex_count(), [start]);
    let mut members = vec![start];
    while set.len() < size {
        let mut frontier: Vec<usize> = members
            .iter()
            .flat_map(|&x| g.neighbors(x).iter().map(|a| a.vertex as usize))
            .filter(|&w| !set.contains(w) && b.dist(w) <= max_dist && b.is_interior(w))
            .collect();
        frontier.sort_unstable();
        frontier.dedup();
        match frontier.choose(rng) {
            Some(&w) => {
                set.insert(w);
                members.push(w);
            }
            None => break,
        }
    }
    set
}

fn vertices_within(b: &RootedBall, max_dist: usize) -> Vec<usize> {
    (0..b.graph().vertex_count())
        .filter(|&v| b.dist(v) <= max_dist)
        .collect()
}

/// Vertices within `r` of `center`.
fn ball_around(b: &RootedBall, center: usize, r: usize) -> VertexSet {
    let dist = b.graph().bfs_distances(center);
    VertexSet::from_vertices(dist.len(), (0..dist.len()).filter(|&v| dist[v] as usize <= r))
}

#[derive(Serialize)]
struct LemmaRow {
    family: String,
    param: usize,
    radius: usize,
    set_kind: String,
    set_size: usize,
    escape: f64,
    lambda1: f64,
    lambda1_lower: f64,
    pass: bool,
}

fn lemma_escape(ctx: &mut Ctx) -> Outcome {
    let s = ctx.s;
    let seed = ctx.seed("sets");
    // (family, d or k, ball)
    let balls: Vec<(&str, usize, RootedBall)> = vec![
        ("tree_ball", 3, tree_ball(3, 9)?),
        ("tree_ball", 4, tree_ball(4, 6)?),
        ("tree_ball", 6, tree_ball(6, 4)?),
        ("free_product_ball", 5, free_product_ball(5, 5)?),
        ("free_product_ball", 7, free_product_ball(7, 5)?),
        ("free_product_ball", 9, free_product_ball(9, 5)?),
    ];
    let mut rows = Vec::new();
    for (bi, (family, param, b)) in balls.iter().enumerate() {
        let lam = lambda1_dirichlet(b, 1e-10)?;
        let n = b.graph().vertex_count();
        let r = b.radius();
        let mut rng = rng::trial_rng(seed, bi as u64);
        let mut sets: Vec<(String, VertexSet)> = vec![("root".into(), VertexSet::from_vertices(n, [0]))];
        let inner = vertices_within(b, r - 1);
        let v = *inner.choose(&mut rng).unwrap();
        sets.push(("singleton".into(), VertexSet::from_vertices(n, [v])));
        let deep = vertices_within(b, r - 3);
        for rad in 1..=2 {
            let c = *deep.choose(&mut rng).unwrap();
            sets.push((format!("ball_radius_{rad}"), ball_around(b, c, rad)));
        }
        for _ in 0..s.fixtures {
            let start = *inner.choose(&mut rng).unwrap();
            let size = rng.gen_range(2..=50);
            sets.push((
                "random_connected".into(),
                random_connected_set(b, start, size, r - 1, &mut rng),
            ));
        }
        for (kind, set) in sets {
            let q = EscapeQuery::new(b, set);
            let rep = lemma_check(&q, &lam)?;
            rows.push(LemmaRow {
                family: family.to_string(),
                param: *param,
                radius: r,
                set_kind: kind,
                set_size: rep.set_size,
                escape: rep.escape,
                lambda1: rep.lambda1,
                lambda1_lower: rep.lambda1_lower,
                pass: rep.pass,
            });
        }
    }
    let lines: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{},{},{},{},{}",
                r.family, r.param, r.radius, r.set_kind, r.set_size, r.escape, r.lambda1, r.lambda1_lower, r.pass
            )
        })
        .collect();
    ctx.art.csv(
        "lemma.csv",
        &[],
        "family,param,radius,set_kind,set_size,escape,lambda1,lambda1_lower,pass",
        &lines,
    )?;
    let failures = rows.iter().filter(|r| !r.pass).count();
    let checks = vec![
        Check::new(
            "pairs",
            rows.len() >= tolerance::LEMMA_PAIRS,
            format!("{} pairs (min {})", rows.len(), tolerance::LEMMA_PAIRS),
        ),
        Check::new("escape_at_least_lambda1", failures == 0, format!("{failures} failures")),
    ];
    let notes = vec![
        "exact escape probability from the degree measure on A versus the Dirichlet estimate of the same ball".into(),
    ];
    Ok((checks, notes, json!({ "rows": rows })))
}

fn trace_invariants(t: &ExplorationTrace) -> Result<(), String> {
    if let Some((s, &z)) = t.z.iter().enumerate().find(|&(s, &z)| z > s) {
        return Err(format!("seed {}: z[{s}] = {z}", t.seed));
    }
    if let Some(tau) = t.tau {
        let floor = t.params.lambda1 * t.d as f64 * t.a0_size() as f64 / 2.0;
        if tau as f64 <= floor {
            return Err(format!("seed {}: tau = {tau} <= {floor}", t.seed));
        }
    }
    Ok(())
}

fn drift_check(ctx: &mut Ctx) -> Outcome {
    let s = ctx.s;
    let (k, r) = (s.parameters[0] as usize, s.parameters[1] as usize);
    let census_seed = ctx.seed("census");
    let trace_seed = ctx.seed("traces");
    let b = free_product_ball(k, r)?;
    let d = b.interior_degree().ok_or(pclocal::Error::NotRegular)?;
    let g = girth(free_product_ball(k, k / 2 + 1)?.graph())
        .length()
        .ok_or_else(|| CliError::Runtime("ball has no cycle".into()))?;
    let gt = gtilde(g)?;
    let lam = lambda1_dirichlet(&b, 1e-10)?.value;

    // census on random connected sets kept inside the evaluation window
    let window = r - gt - 1;
    let starts = vertices_within(&b, window);
    let census_rows = par::map_range(s.fixtures, |i| {
        let mut rng = rng::trial_rng(census_seed, i as u64);
        let start = *starts.choose(&mut rng).unwrap();
        let size = rng.gen_range(1..=starts.len().min(30));
        let a = random_connected_set(&b, start, size, window, &mut rng);
        good_edge_census(&b, &a, lam / 2.0, gt, lam).map(|c| (a.len(), c.count, c.bound, c.holds()))
    });
    let census_rows = census_rows.into_iter().collect::<pclocal::Result<Vec<_>>>()?;
    let lines: Vec<String> = census_rows
        .iter()
        .enumerate()
        .map(|(i, (n, c, bd, ok))| format!("{i},{n},{c},{bd},{ok}"))
        .collect();
    ctx.art
        .csv("census.csv", &[], "fixture,set_size,count,bound,pass", &lines)?;
    let census_fail = census_rows.iter().filter(|r| !r.3).count();

    let params = ExplorationParams {
        p: s.p,
        eps: s.eps,
        lambda1: lam,
        gtilde: gt,
        max_steps: 1000,
    };
    let traces = par::map_range(s.trials, |i| {
        run_exploration(&b, 0, &params, rng::derive(trace_seed, i as u64))
    });
    let traces = traces.into_iter().collect::<pclocal::Result<Vec<_>>>()?;
    let broken: Vec<String> = traces.iter().filter_map(|t| trace_invariants(t).err()).collect();
    let lines: Vec<String> = traces
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let tau = t.tau.map(|x| x.to_string()).unwrap_or_default();
            format!("{i},{},{},{tau},{:?}", t.a0_size(), t.steps, t.outcome)
        })
        .collect();
    ctx.art
        .csv("traces.csv", &[], "trace,a0_size,steps,tau,outcome", &lines)?;
    let inputs = Theorem1Inputs::new(d, g, lam, s.eps);
    let drift = drift_report(&traces, &inputs)?;
    let checks = vec![
        Check::new(
            "census",
            census_fail == 0,
            format!("{census_fail} of {} sets below lambda1 d |A| / 2", census_rows.len()),
        ),
        Check::new(
            "trace_invariants",
            broken.is_empty(),
            if broken.is_empty() {
                format!("{} traces", traces.len())
            } else {
                broken.join("; ")
            },
        ),
        Check::new(
            "steps_pooled",
            drift.steps_pooled >= tolerance::DRIFT_STEPS,
            format!("{} (min {})", drift.steps_pooled, tolerance::DRIFT_STEPS),
        ),
        Check::new(
            "drift_closed_form",
            drift.pass_closed,
            format!(
                "mean {} stderr {} vs bound {}",
                drift.mean, drift.stderr, drift.bound_closed
            ),
        ),
    ];
    let notes = vec![format!(
        "lambda1 is the Dirichlet value of the radius-{r} ball, an upper estimate of the infinite-graph value, which makes the drift bound conservative"
    )];
    Ok((
        checks,
        notes,
        json!({
            "ball": format!("free_product_ball({k},{r})"),
            "girth": g,
            "gtilde": gt,
            "lambda1": lam,
            "params": params,
            "drift": drift,
        }),
    ))
}
