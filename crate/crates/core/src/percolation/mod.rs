//! Bernoulli bond percolation: sampling, clusters, observables and
//! threshold estimation.
//!
//! Edge `e` is open in trial seed `s` at parameter `p` iff
//! `rng::unit(s, e) < p`. The same seed therefore couples all values of `p`
//! monotonically: the open set at `p` is contained in the open set at any
//! `q > p`.

mod oracle;
mod survival;
mod sweep;
mod threshold;
mod union_find;

pub use oracle::{exhaustive_oracle, OracleEvent, ORACLE_EDGE_LIMIT};
pub use survival::{root_survival_prob, root_survival_prob_keyed, tree_survival_exact, RootSurvival};
pub use sweep::{giant_sweep, trial_stats, SweepResult, SweepRow, TrialStats, SWEEP_CSV_HEADER};
pub use threshold::{
    bisect, estimate_pc, estimate_pc_tree_exact, Bisection, Measurement, Observable, PcEstimate, PcOptions,
    SurvivalCriterion, DEFAULT_ALPHA, DEFAULT_TOL,
};
pub use union_find::UnionFind;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng;
use bitvec::prelude::*;

pub(crate) fn check_p(name: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::param(name, format!("must lie in [0, 1], got {p}")))
    }
}

/// State of edge `e` at `p` under trial seed `seed`.
#[inline]
pub fn edge_open(seed: u64, e: usize, p: f64) -> bool {
    rng::unit(seed, e as u64) < p
}

/// One percolation configuration on a fixed graph.
#[derive(Clone, Debug)]
pub struct PercolationSample<'g> {
    pub graph: &'g Graph,
    pub open: BitVec,
    pub p: f64,
    pub seed: u64,
}

impl PercolationSample<'_> {
    pub fn open_count(&self) -> usize {
        self.open.count_ones()
    }

    #[inline]
    pub fn is_open(&self, e: usize) -> bool {
        self.open[e]
    }
}

/// Samples every edge of `g` at parameter `p` from `seed`.
pub fn sample(g: &Graph, p: f64, seed: u64) -> Result<PercolationSample<'_>> {
    check_p("p", p)?;
    let mut open = bitvec![0; g.edge_count()];
    for e in 0..g.edge_count() {
        if edge_open(seed, e, p) {
            open.set(e, true);
        }
    }
    Ok(PercolationSample {
        graph: g,
        open,
        p,
        seed,
    })
}

/// Connected components of the open subgraph.
///
/// Labels are assigned in order of each component's smallest vertex, so two
/// correct implementations agree exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterStats {
    pub component_of: Vec<u32>,
    /// `sizes[c]` is the size of component `c`.
    pub sizes: Vec<usize>,
    pub largest: usize,
    pub second: usize,
    pub root_size: Option<usize>,
}

impl ClusterStats {
    pub fn component_count(&self) -> usize {
        self.sizes.len()
    }

    fn from_labels(component_of: Vec<u32>, sizes: Vec<usize>, root: Option<usize>) -> Self {
        let (mut largest, mut second) = (0, 0);
        for &s in &sizes {
            if s > largest {
                second = largest;
                largest = s;
            } else if s > second {
                second = s;
            }
        }
        let root_size = root.map(|r| sizes[component_of[r] as usize]);
        ClusterStats {
            component_of,
            sizes,
            largest,
            second,
            root_size,
        }
    }
}

pub(crate) fn open_union_find(s: &PercolationSample) -> UnionFind {
    let g = s.graph;
    let mut uf = UnionFind::new(g.vertex_count());
    for e in s.open.iter_ones() {
        let (u, v) = g.endpoints(e);
        uf.union(u, v);
    }
    uf
}

/// Cluster statistics of `s`, with the size of the root's cluster if given.
pub fn clusters(s: &PercolationSample, root: Option<usize>) -> Result<ClusterStats> {
    let g = s.graph;
    if let Some(r) = root {
        g.check_vertex(r)?;
    }
    let mut uf = open_union_find(s);
    let n = g.vertex_count();
    let mut label_of_root = vec![u32::MAX; n];
    let mut component_of = vec![0u32; n];
    let mut sizes = Vec::new();
    for (v, slot) in component_of.iter_mut().enumerate() {
        let r = uf.find(v);
        if label_of_root[r] == u32::MAX {
            label_of_root[r] = sizes.len() as u32;
            sizes.push(0);
        }
        let c = label_of_root[r];
        *slot = c;
        sizes[c as usize] += 1;
    }
    Ok(ClusterStats::from_labels(component_of, sizes, root))
}
