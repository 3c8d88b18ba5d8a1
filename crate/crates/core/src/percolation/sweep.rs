use super::survival::binomial;
use super::{check_p, edge_open, UnionFind};
use crate::error::{Error, Result};
use crate::generators::GeneratorSpec;
use crate::graph::Graph;
use crate::{par, rng};
use serde::{Deserialize, Serialize};
use std::io::Write;

pub const SWEEP_CSV_HEADER: &str = "p,trials,mean_largest_frac,mean_second_frac,prob_giant,stderr";

/// Two-face spanning question: is some open cluster touching both `low`
/// and `high`?
#[derive(Clone, Debug)]
pub(crate) struct Faces {
    pub low: Vec<usize>,
    pub high: Vec<usize>,
}

/// Summary of one percolation configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialStats {
    pub largest: usize,
    pub second: usize,
    pub crossing: Option<bool>,
}

/// Largest two cluster sizes of the configuration `(p, seed)`, without
/// materializing the sample.
pub fn trial_stats(g: &Graph, p: f64, seed: u64) -> TrialStats {
    let uf = union_open(g, p, seed);
    summarize(uf, None)
}

fn union_open(g: &Graph, p: f64, seed: u64) -> UnionFind {
    let mut uf = UnionFind::new(g.vertex_count());
    for (e, (u, v)) in g.edges().enumerate() {
        if edge_open(seed, e, p) {
            uf.union(u, v);
        }
    }
    uf
}

fn summarize(mut uf: UnionFind, faces: Option<&Faces>) -> TrialStats {
    let (mut largest, mut second) = (0, 0);
    for v in 0..uf.len() {
        if uf.find(v) == v {
            let s = uf.set_size(v);
            if s > largest {
                second = largest;
                largest = s;
            } else if s > second {
                second = s;
            }
        }
    }
    let crossing = faces.map(|f| {
        let mut touched = vec![false; uf.len()];
        for &v in &f.low {
            let r = uf.find(v);
            touched[r] = true;
        }
        f.high.iter().any(|&v| {
            let r = uf.find(v);
            touched[r]
        })
    });
    TrialStats {
        largest,
        second,
        crossing,
    }
}

pub(crate) fn trial_stats_with_faces(g: &Graph, p: f64, seed: u64, faces: Option<&Faces>) -> TrialStats {
    summarize(union_open(g, p, seed), faces)
}

/// Runs `trials` configurations at `p`; trial `i` uses `trial_seed(seed, i)`.
pub(crate) fn run_trials(g: &Graph, p: f64, trials: usize, seed: u64, faces: Option<&Faces>) -> Vec<TrialStats> {
    par::map_range(trials, |i| {
        trial_stats_with_faces(g, p, rng::trial_seed(seed, i as u64), faces)
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: f64,
    pub trials: usize,
    pub mean_largest_frac: f64,
    pub mean_second_frac: f64,
    /// Fraction of trials with `largest >= alpha * n`.
    pub prob_giant: f64,
    /// Binomial standard error of `prob_giant`.
    pub stderr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub spec: GeneratorSpec,
    pub vertex_count: usize,
    pub alpha: f64,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// CSV with the fixed header, preceded by `# ` comment lines if given.
    pub fn write_csv<W: Write>(&self, mut w: W, comments: &[String]) -> Result<()> {
        for c in comments {
            writeln!(w, "# {c}")?;
        }
        writeln!(w, "{SWEEP_CSV_HEADER}")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                r.p, r.trials, r.mean_largest_frac, r.mean_second_frac, r.prob_giant, r.stderr
            )?;
        }
        Ok(())
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::param("alpha", format!("must lie in (0, 1), got {alpha}")))
    }
}

pub(crate) fn is_giant(largest: usize, n: usize, alpha: f64) -> bool {
    largest as f64 >= alpha * n as f64
}

/// Giant-component statistics over a grid of `p`. The graph is generated
/// once from `spec` and every grid point reuses the same trial seeds.
pub fn giant_sweep(spec: &GeneratorSpec, grid: &[f64], trials: usize, alpha: f64, seed: u64) -> Result<SweepResult> {
    check_alpha(alpha)?;
    for &p in grid {
        check_p("grid", p)?;
    }
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::param("grid", "must be sorted ascending"));
    }
    if trials == 0 {
        return Err(Error::param("trials", "must be positive"));
    }
    let generated = spec.generate()?;
    let g = generated.graph();
    let n = g.vertex_count();
    let rows = grid
        .iter()
        .map(|&p| {
            let stats = run_trials(g, p, trials, seed, None);
            let giants = stats.iter().filter(|s| is_giant(s.largest, n, alpha)).count();
            let (prob_giant, stderr) = binomial(giants, trials);
            let mean = |f: &dyn Fn(&TrialStats) -> usize| {
                stats.iter().map(|s| f(s) as f64 / n as f64).sum::<f64>() / trials as f64
            };
            SweepRow {
                p,
                trials,
                mean_largest_frac: mean(&|s| s.largest),
                mean_second_frac: mean(&|s| s.second),
                prob_giant,
                stderr,
            }
        })
        .collect();
    Ok(SweepResult {
        spec: spec.clone(),
        vertex_count: n,
        alpha,
        rows,
    })
}
