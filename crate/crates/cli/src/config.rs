//! Experiment configuration files, defaults and validation.

use crate::error::CliError;
use pclocal::percolation::SurvivalCriterion;
use pclocal::{Family, GeneratorSpec};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt;
use std::path::{Path, PathBuf};

pub const DEFAULT_MASTER_SEED: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExperimentKind {
    #[serde(rename = "E1_tree_pc")]
    TreePc,
    #[serde(rename = "E2_expander_dichotomy")]
    ExpanderDichotomy,
    #[serde(rename = "E3_square_lattice")]
    SquareLattice,
    #[serde(rename = "E4_triangular")]
    Triangular,
    #[serde(rename = "E5_theorem1_girth_series")]
    GirthSeries,
    #[serde(rename = "E6_gm_slab_trend")]
    SlabTrend,
    #[serde(rename = "E7_lemma_escape")]
    LemmaEscape,
    #[serde(rename = "E8_drift_check")]
    DriftCheck,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::TreePc,
        ExperimentKind::ExpanderDichotomy,
        ExperimentKind::SquareLattice,
        ExperimentKind::Triangular,
        ExperimentKind::GirthSeries,
        ExperimentKind::SlabTrend,
        ExperimentKind::LemmaEscape,
        ExperimentKind::DriftCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::TreePc => "E1_tree_pc",
            ExperimentKind::ExpanderDichotomy => "E2_expander_dichotomy",
            ExperimentKind::SquareLattice => "E3_square_lattice",
            ExperimentKind::Triangular => "E4_triangular",
            ExperimentKind::GirthSeries => "E5_theorem1_girth_series",
            ExperimentKind::SlabTrend => "E6_gm_slab_trend",
            ExperimentKind::LemmaEscape => "E7_lemma_escape",
            ExperimentKind::DriftCheck => "E8_drift_check",
        }
    }

    /// Accepts the full name or its `E<n>` prefix.
    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s || k.name().split('_').next() == Some(s))
    }

    /// Override fields the experiment reads.
    fn accepts(self) -> &'static [&'static str] {
        match self {
            ExperimentKind::TreePc => &["parameters", "tol", "criterion"],
            ExperimentKind::ExpanderDichotomy => &["parameters", "graph_seed", "grid", "trials", "alpha", "tol"],
            ExperimentKind::SquareLattice | ExperimentKind::Triangular => {
                &["parameters", "grid", "trials", "alpha", "tol"]
            }
            ExperimentKind::GirthSeries => &["series", "radius", "trials", "criterion", "tol"],
            ExperimentKind::SlabTrend => &["parameters", "series", "trials", "tol"],
            ExperimentKind::LemmaEscape => &["fixtures"],
            ExperimentKind::DriftCheck => &["parameters", "p", "eps", "trials", "fixtures"],
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Optional replacements for the experiment defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    /// Generator parameters of the main graph family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameters: Option<Vec<u64>>,
    /// Values swept across a series (`k` for E5, periodic side `n` for E6).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criterion: Option<SurvivalCriterion>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    /// Number of randomized fixtures (E7 sets per ball, E8 census sets).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixtures: Option<usize>,
}

impl Overrides {
    fn present(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let mut mark = |on: bool, name| {
            if on {
                out.push(name)
            }
        };
        mark(self.parameters.is_some(), "parameters");
        mark(self.series.is_some(), "series");
        mark(self.radius.is_some(), "radius");
        mark(self.graph_seed.is_some(), "graph_seed");
        mark(self.grid.is_some(), "grid");
        mark(self.trials.is_some(), "trials");
        mark(self.tol.is_some(), "tol");
        mark(self.alpha.is_some(), "alpha");
        mark(self.criterion.is_some(), "criterion");
        mark(self.p.is_some(), "p");
        mark(self.eps.is_some(), "eps");
        mark(self.fixtures.is_some(), "fixtures");
        out
    }
}

/// A configuration file as written by the user.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    /// Master seed; every sub-task stream is derived from it.
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Output directory, relative to the working directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub overrides: Overrides,
}

fn default_seed() -> u64 {
    DEFAULT_MASTER_SEED
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        ExperimentConfig {
            experiment,
            seed: DEFAULT_MASTER_SEED,
            out: None,
            overrides: Overrides::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| {
            CliError::Validation(format!(
                "config parse error at line {}, column {}: {e}",
                e.line(),
                e.column()
            ))
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Defaults merged with the overrides.
    pub fn settings(&self) -> Settings {
        Settings::resolve(self)
    }
}

/// Fully resolved experiment settings; the config hash is taken over these.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub experiment: ExperimentKind,
    pub seed: u64,
    pub family: Family,
    pub parameters: Vec<u64>,
    pub series: Vec<u64>,
    pub radius: u64,
    pub graph_seed: Option<u64>,
    pub grid: Vec<f64>,
    pub trials: usize,
    pub tol: f64,
    pub alpha: f64,
    pub criterion: SurvivalCriterion,
    pub p: f64,
    pub eps: f64,
    pub fixtures: usize,
}

impl Settings {
    fn defaults(kind: ExperimentKind, seed: u64) -> Self {
        let base = Settings {
            experiment: kind,
            seed,
            family: Family::TreeBall,
            parameters: Vec::new(),
            series: Vec::new(),
            radius: 0,
            graph_seed: None,
            grid: Vec::new(),
            trials: 0,
            tol: 1e-3,
            alpha: 0.01,
            criterion: SurvivalCriterion::HalfOfMax,
            p: 0.0,
            eps: 0.0,
            fixtures: 0,
        };
        match kind {
            ExperimentKind::TreePc => Settings {
                parameters: vec![3, 200],
                criterion: SurvivalCriterion::ScalingRatio,
                ..base
            },
            ExperimentKind::ExpanderDichotomy => Settings {
                family: Family::RandomRegular,
                parameters: vec![50_000, 3],
                grid: vec![0.45, 0.48, 0.5, 0.52, 0.55],
                trials: 200,
                ..base
            },
            ExperimentKind::SquareLattice => Settings {
                family: Family::Torus,
                parameters: vec![512, 512],
                grid: vec![0.45, 0.5, 0.55],
                trials: 200,
                alpha: 0.5,
                ..base
            },
            ExperimentKind::Triangular => Settings {
                family: Family::TriangularTorus,
                parameters: vec![512],
                grid: vec![0.3, 0.347, 0.4],
                trials: 200,
                alpha: 0.5,
                ..base
            },
            ExperimentKind::GirthSeries => Settings {
                family: Family::FreeProductBall,
                series: vec![5, 7, 9],
                radius: 7,
                trials: 4000,
                ..base
            },
            ExperimentKind::SlabTrend => Settings {
                family: Family::Slab,
                parameters: vec![2, 64],
                series: vec![1, 2, 4, 8],
                trials: 400,
                ..base
            },
            ExperimentKind::LemmaEscape => Settings { fixtures: 3, ..base },
            ExperimentKind::DriftCheck => Settings {
                family: Family::FreeProductBall,
                parameters: vec![9, 7],
                trials: 4000,
                p: 0.25,
                eps: 0.05,
                fixtures: 100,
                ..base
            },
        }
    }

    fn resolve(cfg: &ExperimentConfig) -> Self {
        let mut s = Self::defaults(cfg.experiment, cfg.seed);
        let o = &cfg.overrides;
        if let Some(v) = &o.parameters {
            s.parameters = v.clone();
        }
        if let Some(v) = &o.series {
            s.series = v.clone();
        }
        if let Some(v) = o.radius {
            s.radius = v;
        }
        if o.graph_seed.is_some() {
            s.graph_seed = o.graph_seed;
        }
        if let Some(v) = &o.grid {
            s.grid = v.clone();
        }
        if let Some(v) = o.trials {
            s.trials = v;
        }
        if let Some(v) = o.tol {
            s.tol = v;
        }
        if let Some(v) = o.alpha {
            s.alpha = v;
        }
        if let Some(v) = o.criterion {
            s.criterion = v;
        }
        if let Some(v) = o.p {
            s.p = v;
        }
        if let Some(v) = o.eps {
            s.eps = v;
        }
        if let Some(v) = o.fixtures {
            s.fixtures = v;
        }
        s
    }

    /// Hex SHA-256 of the canonical JSON of the settings.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("settings serialize");
        format!("{:x}", Sha256::digest(&json))
    }

    pub fn spec(&self, parameters: Vec<u64>, seed: u64) -> GeneratorSpec {
        GeneratorSpec::new(self.family, parameters, seed)
    }
}

/// Every violated constraint of `cfg`, each prefixed with the module and
/// operation whose precondition it breaks. Empty means runnable.
pub fn validate_config(cfg: &ExperimentConfig) -> Vec<String> {
    let mut out = Vec::new();
    let kind = cfg.experiment;
    for field in cfg.overrides.present() {
        if !kind.accepts().contains(&field) {
            out.push(format!("cli.overrides.{field}: not used by {kind}"));
        }
    }
    let s = cfg.settings();
    let spec = |params: Vec<u64>| GeneratorSpec::new(s.family, params, 0);
    match kind {
        ExperimentKind::TreePc => {
            out.extend(spec(s.parameters.clone()).violations());
            if s.parameters.len() == 2 {
                let r = s.parameters[1];
                if r < 1 || (s.criterion == SurvivalCriterion::ScalingRatio && r < 2) {
                    out.push(format!(
                        "percolation.estimate_pc: radius {r} too small for the {} criterion",
                        criterion_name(s.criterion)
                    ));
                }
            }
            check_tol(s.tol, &mut out);
        }
        ExperimentKind::ExpanderDichotomy | ExperimentKind::SquareLattice | ExperimentKind::Triangular => {
            out.extend(spec(s.parameters.clone()).violations());
            check_alpha(s.alpha, &mut out);
            check_grid(&s.grid, &mut out);
            check_trials(s.trials, &mut out);
            if kind == ExperimentKind::ExpanderDichotomy && s.trials < 20 {
                out.push(format!(
                    "percolation.giant_sweep: the dichotomy needs at least 20 trials per point, got {}",
                    s.trials
                ));
            }
            check_tol(s.tol, &mut out);
        }
        ExperimentKind::GirthSeries => {
            if s.series.is_empty() {
                out.push("generators.free_product_ball: series of k values is empty".into());
            }
            for &k in &s.series {
                out.extend(spec(vec![k, s.radius]).violations());
            }
            let r = s.radius;
            if r < 1 || (s.criterion == SurvivalCriterion::ScalingRatio && r < 2) {
                out.push(format!(
                    "percolation.estimate_pc: radius {r} too small for the {} criterion",
                    criterion_name(s.criterion)
                ));
            }
            check_trials(s.trials, &mut out);
            check_tol(s.tol, &mut out);
        }
        ExperimentKind::SlabTrend => {
            if s.series.is_empty() {
                out.push("generators.slab: series of periodic sides is empty".into());
            }
            if s.parameters.len() != 2 {
                out.push(format!(
                    "generators.slab: expected [k, L] with the periodic side taken from the series, got {} parameters",
                    s.parameters.len()
                ));
            } else {
                for &n in &s.series {
                    out.extend(spec(vec![s.parameters[0], s.parameters[1], n]).violations());
                }
            }
            check_trials(s.trials, &mut out);
            check_tol(s.tol, &mut out);
        }
        ExperimentKind::LemmaEscape => {
            if s.fixtures == 0 {
                out.push("walks.lemma_check: fixtures per ball must be positive".into());
            }
        }
        ExperimentKind::DriftCheck => {
            out.extend(spec(s.parameters.clone()).violations());
            if s.parameters.len() == 2 && s.parameters[0] >= 3 {
                let (k, r) = (s.parameters[0], s.parameters[1]);
                let gt = k.div_ceil(2) - 1;
                if r < gt + 2 {
                    out.push(format!(
                        "exploration.run_exploration: radius {r} leaves no room for paths of length {gt}; need R >= {}",
                        gt + 2
                    ));
                }
            }
            for (name, v) in [("p", s.p), ("eps", s.eps)] {
                if !(0.0..=1.0).contains(&v) {
                    out.push(format!(
                        "exploration.run_exploration: {name} must lie in [0, 1], got {v}"
                    ));
                }
            }
            // the free-product family is 6-regular
            if s.eps > 0.2 {
                out.push(format!(
                    "exploration.drift_report: eps must lie in [0, 1/(d-1)] = [0, 0.2], got {}",
                    s.eps
                ));
            }
            check_trials(s.trials, &mut out);
            if s.fixtures == 0 {
                out.push("exploration.good_edge_census: fixtures must be positive".into());
            }
        }
    }
    out
}

pub(crate) fn criterion_name(c: SurvivalCriterion) -> &'static str {
    match c {
        SurvivalCriterion::HalfOfMax => "half_of_max",
        SurvivalCriterion::ScalingRatio => "scaling_ratio",
    }
}

fn check_tol(tol: f64, out: &mut Vec<String>) {
    if !(1e-3..0.5).contains(&tol) {
        out.push(format!(
            "percolation.estimate_pc: tol must lie in [0.001, 0.5), got {tol}"
        ));
    }
}

fn check_alpha(alpha: f64, out: &mut Vec<String>) {
    if !(alpha > 0.0 && alpha < 1.0) {
        out.push(format!(
            "percolation.giant_sweep: alpha must lie in (0, 1), got {alpha}"
        ));
    }
}

fn check_grid(grid: &[f64], out: &mut Vec<String>) {
    if grid.is_empty() {
        out.push("percolation.giant_sweep: grid is empty".into());
    }
    for &p in grid {
        if !(0.0..=1.0).contains(&p) {
            out.push(format!("percolation.giant_sweep: grid value {p} outside [0, 1]"));
        }
    }
}

fn check_trials(trials: usize, out: &mut Vec<String>) {
    if trials == 0 {
        out.push("percolation.estimate_pc: trials must be positive".into());
    }
}
