//! Two-label percolation and the good-edge exploration process.
//!
//! Each edge carries two independent labels: `X_e` (open with probability
//! `p`) and `Y_e` (open with probability `eps`). The exploration grows a set
//! `A_t` from the `p`-cluster of a vertex by checking the `eps`-label of one
//! good frontier edge per step and annexing the `p`-open tree neighborhood of
//! radius `g~` behind it.

use crate::error::{Error, Result};
use crate::graph::{count_nb_paths_avoiding, Graph, RootedBall, VertexSet};
use crate::percolation::{check_p, edge_open};
use crate::rng;
use bitvec::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, VecDeque};

/// Tree radius `ceil(g/2) - 1` implied by girth `g`.
pub fn gtilde(girth: usize) -> Result<usize> {
    if girth < 3 {
        return Err(Error::param("girth", format!("must be >= 3, got {girth}")));
    }
    Ok(girth.div_ceil(2) - 1)
}

fn y_seed(seed: u64) -> u64 {
    rng::derive(seed, rng::label("eps-labels"))
}

#[inline]
fn y_coin(seed: u64, e: usize, eps: f64) -> bool {
    rng::unit(y_seed(seed), e as u64) < eps
}

/// Both label arrays of a two-label configuration.
#[derive(Clone, Debug)]
pub struct TwoLabelSample<'g> {
    pub graph: &'g Graph,
    pub x_open: BitVec,
    pub y_open: BitVec,
    pub p: f64,
    pub eps: f64,
    pub seed: u64,
}

impl TwoLabelSample<'_> {
    pub fn is_open(&self, e: usize) -> bool {
        self.x_open[e] || self.y_open[e]
    }

    pub fn closed_count(&self) -> usize {
        (0..self.graph.edge_count()).filter(|&e| !self.is_open(e)).count()
    }
}

/// Samples both labels for every edge. The `p`-labels coincide with
/// [`crate::percolation::sample`] at the same seed.
pub fn sample_two_label(g: &Graph, p: f64, eps: f64, seed: u64) -> Result<TwoLabelSample<'_>> {
    check_p("p", p)?;
    check_p("eps", eps)?;
    let m = g.edge_count();
    let mut x_open = bitvec![0; m];
    let mut y_open = bitvec![0; m];
    for e in 0..m {
        x_open.set(e, edge_open(seed, e, p));
        y_open.set(e, y_coin(seed, e, eps));
    }
    Ok(TwoLabelSample {
        graph: g,
        x_open,
        y_open,
        p,
        eps,
        seed,
    })
}

fn threshold_paths(d: usize, alpha: f64, len: usize) -> f64 {
    alpha * ((d - 1) as f64).powi(len as i32)
}

/// Whether `(x, u)` is `(alpha, A)`-good at path length `len`: `u` lies
/// outside `A` and at least `alpha * (d-1)^len` of the non-backtracking
/// paths of length `len` from `u` (first step not `x`) avoid `A`, where `d`
/// is the degree of `x`.
pub fn is_good_edge(g: &Graph, a: &VertexSet, x: usize, u: usize, alpha: f64, len: usize) -> Result<bool> {
    g.check_vertex(x)?;
    if !a.contains(x) {
        return Err(Error::InvalidSet(format!("vertex {x} is not in A")));
    }
    if !g.has_edge(x, u) {
        return Err(Error::NotAdjacent(x, u));
    }
    Ok(good_unchecked(g, a, x, u, alpha, len))
}

fn good_unchecked(g: &Graph, a: &VertexSet, x: usize, u: usize, alpha: f64, len: usize) -> bool {
    if a.contains(u) {
        return false;
    }
    let paths = count_nb_paths_avoiding(g, u, x, len, a).expect("adjacent pair");
    paths.count as f64 >= threshold_paths(g.degree(x), alpha, len)
}

/// Good-edge count next to a set, with the spectral lower bound
/// `lambda1 * d * |A| / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Census {
    pub count: usize,
    pub bound: f64,
}

impl Census {
    pub fn holds(&self) -> bool {
        self.count as f64 >= self.bound
    }
}

/// Whether the non-backtracking paths of length at most `len` from `u` end
/// at distinct vertices, i.e. BFS to depth `len` finds no second route.
/// Edges joining two vertices of the outer sphere are allowed; they appear
/// at odd girth `2 len + 1`.
fn paths_are_distinct(g: &Graph, u: usize, len: usize) -> bool {
    let mut seen: HashMap<usize, usize> = HashMap::from([(u, usize::MAX)]);
    let mut frontier = vec![u];
    for _ in 0..len {
        let mut next = Vec::new();
        for &v in &frontier {
            let parent = seen[&v];
            for a in g.neighbors(v) {
                let w = a.vertex as usize;
                if w == parent {
                    continue;
                }
                if seen.insert(w, v).is_some() {
                    return false;
                }
                next.push(w);
            }
        }
        frontier = next;
    }
    true
}

/// Counts the `(alpha, A)`-good edges `(x, u)` with `x` in `A`.
///
/// Every vertex of `A` must lie within `R - len - 1` of the root, so that
/// each candidate `u` sees its full radius-`len` neighborhood, and the
/// paths counted from each `u` must be distinct.
pub fn good_edge_census(b: &RootedBall, a: &VertexSet, alpha: f64, len: usize, lambda1: f64) -> Result<Census> {
    let g = b.graph();
    let d = b.interior_degree().ok_or(Error::NotRegular)?;
    if a.capacity() != g.vertex_count() {
        return Err(Error::InvalidSet("A is indexed over a different graph".into()));
    }
    let safe = b.radius().checked_sub(len + 1).ok_or_else(|| {
        Error::Region(format!(
            "radius {} leaves no room for paths of length {len}",
            b.radius()
        ))
    })?;
    if let Some(x) = a.iter().find(|&x| b.dist(x) > safe) {
        return Err(Error::Region(format!(
            "vertex {x} of A is at distance {} > {safe}",
            b.dist(x)
        )));
    }
    let mut count = 0;
    for x in a.iter() {
        for adj in g.neighbors(x) {
            let u = adj.vertex as usize;
            if a.contains(u) {
                continue;
            }
            if !paths_are_distinct(g, u, len) {
                return Err(Error::Region(format!("two paths of length <= {len} from {u} meet")));
            }
            count += good_unchecked(g, a, x, u, alpha, len) as usize;
        }
    }
    Ok(Census {
        count,
        bound: lambda1 * d as f64 * a.len() as f64 / 2.0,
    })
}

/// Parameters of one exploration run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplorationParams {
    pub p: f64,
    pub eps: f64,
    pub lambda1: f64,
    pub gtilde: usize,
    pub max_steps: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExplorationOutcome {
    /// `|A_t| < 2t / (lambda1 d)` at `t = tau`.
    Stopped,
    /// No unchecked good edge remained.
    FrontierExhausted,
    /// `max_steps` steps without stopping.
    Survived,
    /// `A_t` left the window where goodness can be evaluated.
    BoundaryHit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplorationTrace {
    /// `|A_t|` for `t = 0..=steps`.
    pub sizes: Vec<usize>,
    /// `xi_t = |A_{t+1}| - |A_t|`.
    pub xi: Vec<usize>,
    /// `z[t]` is `Z_t`, the number of checked `eps`-closed edges after step
    /// `t`; `z[0] = 0`.
    pub z: Vec<usize>,
    pub tau: Option<usize>,
    pub steps: usize,
    pub gtilde: usize,
    pub outcome: ExplorationOutcome,
    pub boundary_hit: bool,
    pub d: usize,
    pub start: usize,
    pub seed: u64,
    pub params: ExplorationParams,
}

impl ExplorationTrace {
    pub fn a0_size(&self) -> usize {
        self.sizes[0]
    }

    /// The process neither stopped nor ran out of frontier: it either
    /// completed `max_steps` or left the observation window first.
    pub fn escaped(&self) -> bool {
        matches!(
            self.outcome,
            ExplorationOutcome::Survived | ExplorationOutcome::BoundaryHit
        )
    }
}

struct Explorer<'a> {
    b: &'a RootedBall,
    params: ExplorationParams,
    seed: u64,
    safe: usize,
    a: VertexSet,
    candidates: BTreeSet<u32>,
    checked: BitVec,
    escaped_window: bool,
}

impl Explorer<'_> {
    fn add(&mut self, v: usize) {
        if !self.a.insert(v) {
            return;
        }
        if self.b.dist(v) > self.safe {
            self.escaped_window = true;
        }
        for adj in self.b.graph().neighbors(v) {
            if self.a.contains(adj.vertex as usize) {
                self.candidates.remove(&adj.edge);
            } else if !self.checked[adj.edge as usize] {
                self.candidates.insert(adj.edge);
            }
        }
    }

    /// `(x, u, edge)` for the least good unchecked edge.
    fn next_good(&self) -> Option<(usize, usize, usize)> {
        let g = self.b.graph();
        self.candidates.iter().find_map(|&e| {
            let (s, t) = g.endpoints(e as usize);
            let (x, u) = if self.a.contains(s) { (s, t) } else { (t, s) };
            good_unchecked(g, &self.a, x, u, self.params.lambda1 / 2.0, self.params.gtilde)
                .then_some((x, u, e as usize))
        })
    }

    /// Vertices within `gtilde` of `u` whose path from `u` avoids `A` and is
    /// `p`-open, `u` included.
    fn annex_set(&self, x: usize, u: usize) -> Vec<usize> {
        let g = self.b.graph();
        let mut out = vec![u];
        let mut stack = vec![(u, x, 0usize)];
        while let Some((v, prev, depth)) = stack.pop() {
            if depth == self.params.gtilde {
                continue;
            }
            for adj in g.neighbors(v) {
                let w = adj.vertex as usize;
                if w == prev || self.a.contains(w) || !edge_open(self.seed, adj.edge as usize, self.params.p) {
                    continue;
                }
                out.push(w);
                stack.push((w, v, depth + 1));
            }
        }
        out
    }
}

/// Runs the exploration from `v` inside the ball `b`.
///
/// Goodness at length `g~` needs each candidate's full radius-`g~`
/// neighborhood inside the ball, so the run ends with
/// [`ExplorationOutcome::BoundaryHit`] as soon as `A_t` contains a vertex
/// farther than `R - g~ - 1` from the root. The step causing that contact is
/// still recorded. `A_0` is the complete `p`-cluster of `v` in the ball
/// graph, with the same coins as [`crate::percolation::sample`].
pub fn run_exploration(b: &RootedBall, v: usize, params: &ExplorationParams, seed: u64) -> Result<ExplorationTrace> {
    let g = b.graph();
    g.check_vertex(v)?;
    check_p("p", params.p)?;
    check_p("eps", params.eps)?;
    if !(params.lambda1 > 0.0 && params.lambda1 <= 1.0) {
        return Err(Error::param(
            "lambda1",
            format!("must lie in (0, 1], got {}", params.lambda1),
        ));
    }
    if params.gtilde == 0 {
        return Err(Error::param("gtilde", "must be >= 1"));
    }
    if !b.is_interior(v) {
        return Err(Error::param("v", format!("vertex {v} is on the boundary")));
    }
    let d = b.interior_degree().ok_or(Error::NotRegular)?;
    let safe = b.radius().saturating_sub(params.gtilde + 1);
    let mut ex = Explorer {
        b,
        params: *params,
        seed,
        safe,
        a: VertexSet::new(g.vertex_count()),
        candidates: BTreeSet::new(),
        checked: bitvec![0; g.edge_count()],
        escaped_window: b.dist(v) > safe,
    };
    // A_0: the p-cluster of v
    let mut queue = VecDeque::from([v]);
    ex.add(v);
    while let Some(x) = queue.pop_front() {
        for adj in g.neighbors(x) {
            let w = adj.vertex as usize;
            if !ex.a.contains(w) && edge_open(seed, adj.edge as usize, params.p) {
                ex.add(w);
                queue.push_back(w);
            }
        }
    }
    let mut sizes = vec![ex.a.len()];
    let mut xi = Vec::new();
    let mut z = vec![0];
    let mut closed = 0;
    let mut t = 0;
    let stop_scale = 2.0 / (params.lambda1 * d as f64);
    let outcome = loop {
        if ex.escaped_window {
            break ExplorationOutcome::BoundaryHit;
        }
        if t > 0 && (ex.a.len() as f64) < stop_scale * t as f64 {
            break ExplorationOutcome::Stopped;
        }
        if t == params.max_steps {
            break ExplorationOutcome::Survived;
        }
        let Some((x, u, e)) = ex.next_good() else {
            break ExplorationOutcome::FrontierExhausted;
        };
        t += 1;
        ex.checked.set(e, true);
        ex.candidates.remove(&(e as u32));
        let before = ex.a.len();
        if y_coin(seed, e, params.eps) {
            for w in ex.annex_set(x, u) {
                ex.add(w);
            }
        } else {
            closed += 1;
        }
        xi.push(ex.a.len() - before);
        sizes.push(ex.a.len());
        z.push(closed);
    };
    Ok(ExplorationTrace {
        sizes,
        xi,
        z,
        tau: (outcome == ExplorationOutcome::Stopped).then_some(t),
        steps: t,
        gtilde: params.gtilde,
        outcome,
        boundary_hit: outcome == ExplorationOutcome::BoundaryHit,
        d,
        start: v,
        seed,
        params: *params,
    })
}

/// Inputs of the critical-probability bound for a `d`-regular graph of
/// girth `g` with bottom of spectrum `lambda1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Inputs {
    pub d: usize,
    pub g: usize,
    pub lambda1: f64,
    #[serde(default = "default_c")]
    pub c: f64,
    pub eps: f64,
}

pub const DEFAULT_C: f64 = 128.0;

fn default_c() -> f64 {
    DEFAULT_C
}

impl Theorem1Inputs {
    pub fn new(d: usize, g: usize, lambda1: f64, eps: f64) -> Self {
        Theorem1Inputs {
            d,
            g,
            lambda1,
            c: DEFAULT_C,
            eps,
        }
    }

    fn check_common(&self) -> Result<()> {
        if self.d < 3 {
            return Err(Error::param("d", format!("must be >= 3, got {}", self.d)));
        }
        if self.g < 3 {
            return Err(Error::param("g", format!("must be >= 3, got {}", self.g)));
        }
        if !(self.lambda1 > 0.0 && self.lambda1 <= 1.0) {
            return Err(Error::param(
                "lambda1",
                format!("must lie in (0, 1], got {}", self.lambda1),
            ));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.check_common()?;
        let cap = 1.0 / (self.d as f64 - 1.0);
        if !(self.eps > 0.0 && self.eps <= cap) {
            return Err(Error::param("eps", format!("must lie in (0, {cap}], got {}", self.eps)));
        }
        if self.c.is_nan() || self.c <= 0.0 {
            return Err(Error::param("c", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Bound {
    /// `min(1, 1/(d-1) + C ln(1 + 1/lambda1^2) / (d g))`.
    pub bound: f64,
    /// The second term before clamping.
    pub second_term: f64,
    /// Smallest `eps` with `g~ >= ln(1 + 8/lambda1^2) / ln(1 + eps (d-1))`.
    pub eps_required: f64,
    pub gtilde: usize,
}

pub fn theorem1_bound(inputs: &Theorem1Inputs) -> Result<Theorem1Bound> {
    inputs.validate()?;
    let (d, g, l) = (inputs.d as f64, inputs.g as f64, inputs.lambda1);
    let second_term = inputs.c * (1.0 + 1.0 / (l * l)).ln() / (d * g);
    let gt = gtilde(inputs.g)?;
    let eps_required = ((1.0 + 8.0 / (l * l)).powf(1.0 / gt as f64) - 1.0) / (d - 1.0);
    Ok(Theorem1Bound {
        bound: (1.0 / (d - 1.0) + second_term).min(1.0),
        second_term,
        eps_required,
        gtilde: gt,
    })
}

/// Lower bounds on the expected growth per step.
///
/// Returns `(sum form, closed form)`:
/// `(eps lambda1 / 2) sum_{j=1}^{g~} (1 + eps(d-1))^j` and
/// `lambda1 ((1 + eps(d-1))^{g~} - 1) / (2(d-1))`.
pub fn drift_bounds(d: usize, gtilde: usize, eps: f64, lambda1: f64) -> (f64, f64) {
    let r = 1.0 + eps * (d as f64 - 1.0);
    let sum: f64 = (1..=gtilde).map(|j| r.powi(j as i32)).sum();
    let closed = lambda1 * (r.powi(gtilde as i32) - 1.0) / (2.0 * (d as f64 - 1.0));
    (eps * lambda1 / 2.0 * sum, closed)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    pub steps_pooled: usize,
    pub traces: usize,
    pub mean: f64,
    pub stderr: f64,
    pub bound_sum: f64,
    pub bound_closed: f64,
    /// `mean + 3 stderr >= bound_sum`.
    pub pass_sum: bool,
    /// `mean + 3 stderr >= bound_closed`.
    pub pass_closed: bool,
}

/// Pools `xi_t` over every recorded step (all taken before `tau`) and
/// compares the mean with the drift bounds. `eps = 0` is accepted.
pub fn drift_report(traces: &[ExplorationTrace], inputs: &Theorem1Inputs) -> Result<DriftReport> {
    inputs.check_common()?;
    if !(0.0..=1.0 / (inputs.d as f64 - 1.0)).contains(&inputs.eps) {
        return Err(Error::param("eps", "must lie in [0, 1/(d-1)]"));
    }
    let gt = gtilde(inputs.g)?;
    for t in traces {
        if t.d != inputs.d || t.gtilde != gt || t.params.eps != inputs.eps || t.params.lambda1 != inputs.lambda1 {
            return Err(Error::param(
                "traces",
                "traces must share d, g~, eps and lambda1 with the inputs",
            ));
        }
    }
    let pooled: Vec<f64> = traces.iter().flat_map(|t| t.xi.iter().map(|&x| x as f64)).collect();
    if pooled.is_empty() {
        return Err(Error::param("traces", "no exploration steps to pool"));
    }
    let n = pooled.len() as f64;
    let mean = pooled.iter().sum::<f64>() / n;
    let var = if pooled.len() > 1 {
        pooled.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let stderr = (var / n).sqrt();
    let (bound_sum, bound_closed) = drift_bounds(inputs.d, gt, inputs.eps, inputs.lambda1);
    Ok(DriftReport {
        steps_pooled: pooled.len(),
        traces: traces.len(),
        mean,
        stderr,
        bound_sum,
        bound_closed,
        pass_sum: mean + 3.0 * stderr >= bound_sum,
        pass_closed: mean + 3.0 * stderr >= bound_closed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{free_product_ball, tree_ball};
    use crate::percolation::{clusters, sample};
    use crate::spectral::lambda1_dirichlet;
    use approx::assert_abs_diff_eq;
    use rand::seq::SliceRandom;
    use rand::Rng;

    /// lambda1 of the 3-regular tree: 1 - 2 sqrt(2) / 3.
    fn lambda_t3() -> f64 {
        1.0 - 2.0 * 2f64.sqrt() / 3.0
    }

    #[test]
    fn gtilde_values() {
        assert_eq!(gtilde(7).unwrap(), 3);
        assert_eq!(gtilde(8).unwrap(), 3);
        assert_eq!(gtilde(3).unwrap(), 1);
        assert!(gtilde(2).is_err());
    }

    #[test]
    fn good_edges_on_tree() {
        // tree_ball(3, 4): 1 -> {4, 5}, 4 -> {10, 11}, 5 -> {12, 13}
        let b = tree_ball(3, 4).unwrap();
        let g = b.graph();
        let n = g.vertex_count();
        let a = VertexSet::from_vertices(n, [0]);
        assert!(is_good_edge(g, &a, 0, 1, 1.0, 2).unwrap());
        let a = VertexSet::from_vertices(n, [0, 1]);
        assert!(!is_good_edge(g, &a, 0, 1, 0.1, 2).unwrap());
        assert!(is_good_edge(g, &a, 4, 0, 0.5, 2).is_err());
        assert!(is_good_edge(g, &a, 0, 4, 0.5, 2).is_err());
        // A blocks the paths 1 -> 4 -> {10, 11}: two of four survive
        let a = VertexSet::from_vertices(n, [0, 4]);
        assert!(is_good_edge(g, &a, 0, 1, 0.5, 2).unwrap());
        assert!(!is_good_edge(g, &a, 0, 1, 0.6, 2).unwrap());
    }

    /// Memoized count of non-backtracking paths that avoid `a`.
    fn memo_count(
        g: &Graph,
        a: &VertexSet,
        v: usize,
        prev: usize,
        left: usize,
        memo: &mut HashMap<(usize, usize, usize), u64>,
    ) -> u64 {
        if left == 0 {
            return 1;
        }
        if let Some(&c) = memo.get(&(v, prev, left)) {
            return c;
        }
        let c = g
            .neighbors(v)
            .iter()
            .map(|adj| adj.vertex as usize)
            .filter(|&w| w != prev && !a.contains(w))
            .map(|w| memo_count(g, a, w, v, left - 1, memo))
            .sum();
        memo.insert((v, prev, left), c);
        c
    }

    fn memo_census(b: &RootedBall, a: &VertexSet, alpha: f64, len: usize) -> usize {
        let g = b.graph();
        let mut memo = HashMap::new();
        let mut count = 0;
        for x in a.iter() {
            for adj in g.neighbors(x) {
                let u = adj.vertex as usize;
                if a.contains(u) {
                    continue;
                }
                let c = memo_count(g, a, u, x, len, &mut memo);
                count += (c as f64 >= alpha * ((g.degree(x) - 1) as f64).powi(len as i32)) as usize;
            }
        }
        count
    }

    fn random_subtree(b: &RootedBall, size: usize, max_dist: usize, rng: &mut impl Rng) -> VertexSet {
        let g = b.graph();
        let mut a = VertexSet::new(g.vertex_count());
        let start = rng.gen_range(0..b.interior_count());
        let start = if b.dist(start) <= max_dist { start } else { 0 };
        a.insert(start);
        let mut members = vec![start];
        while a.len() < size {
            let x = *members.choose(rng).unwrap();
            let nb = g.neighbors(x);
            let w = nb[rng.gen_range(0..nb.len())].vertex as usize;
            if b.dist(w) <= max_dist && a.insert(w) {
                members.push(w);
            }
        }
        a
    }

    #[test]
    fn census_examples() {
        let b = tree_ball(3, 5).unwrap();
        let a = VertexSet::from_vertices(b.graph().vertex_count(), [0]);
        assert_eq!(good_edge_census(&b, &a, 0.1, 2, lambda_t3()).unwrap().count, 3);

        let b = tree_ball(3, 6).unwrap();
        let a = b.inner_ball(1);
        let c = good_edge_census(&b, &a, lambda_t3() / 2.0, 2, lambda_t3()).unwrap();
        assert_abs_diff_eq!(c.bound, lambda_t3() * 3.0 * 4.0 / 2.0, epsilon = 1e-12);
        assert!(c.holds());

        let a = VertexSet::from_vertices(b.graph().vertex_count(), [0, 150]);
        assert!(matches!(good_edge_census(&b, &a, 0.5, 2, 0.1), Err(Error::Region(_))));
        let fp = free_product_ball(5, 6).unwrap();
        let a = VertexSet::from_vertices(fp.graph().vertex_count(), [0]);
        assert!(matches!(good_edge_census(&fp, &a, 0.5, 3, 0.1), Err(Error::Region(_))));
        assert!(good_edge_census(&fp, &a, 0.5, 2, 0.1).is_ok());
    }

    #[test]
    fn census_holds_and_matches_memoized_count() {
        let b = tree_ball(3, 10).unwrap();
        let lam = lambda_t3();
        let mut rng = rng::trial_rng(5, 0);
        for _ in 0..100 {
            let a = random_subtree(&b, 30, 7, &mut rng);
            let c = good_edge_census(&b, &a, lam / 2.0, 2, lam).unwrap();
            assert!(c.holds(), "{c:?}");
            assert_eq!(c.count, memo_census(&b, &a, lam / 2.0, 2));
        }
        let fp = free_product_ball(7, 6).unwrap();
        let lam = lambda1_dirichlet(&fp, 1e-8).unwrap().value;
        for _ in 0..20 {
            let a = random_subtree(&fp, 12, 2, &mut rng);
            let c = good_edge_census(&fp, &a, lam / 2.0, 3, lam).unwrap();
            assert_eq!(c.count, memo_census(&fp, &a, lam / 2.0, 3));
        }
    }

    #[test]
    fn two_label_sampling() {
        let b = tree_ball(3, 4).unwrap();
        let g = b.graph();
        let s = sample_two_label(g, 0.3, 0.0, 9).unwrap();
        assert_eq!(s.x_open, sample(g, 0.3, 9).unwrap().open);
        assert!(s.y_open.not_any());
        let all = sample_two_label(g, 0.0, 1.0, 9).unwrap();
        assert!(all.x_open.not_any());
        assert_eq!(all.closed_count(), 0);
        assert!(sample_two_label(g, 0.3, 1.2, 0).is_err());
    }

    #[test]
    fn two_label_closed_rate() {
        let big = tree_ball(3, 16).unwrap();
        let g = big.graph();
        assert!(g.edge_count() > 100_000);
        let (p, eps) = (0.5 + 0.05, 0.05);
        let s = sample_two_label(g, p, eps, 3).unwrap();
        let m = g.edge_count() as f64;
        let q = (1.0 - p) * (1.0 - eps);
        let dev = (s.closed_count() as f64 - m * q).abs();
        assert!(dev <= 4.0 * (m * q * (1.0 - q)).sqrt());
    }

    fn params(p: f64, eps: f64, lambda1: f64, gtilde: usize, max_steps: usize) -> ExplorationParams {
        ExplorationParams {
            p,
            eps,
            lambda1,
            gtilde,
            max_steps,
        }
    }

    #[test]
    fn full_cluster_hits_boundary_at_step_zero() {
        let b = tree_ball(3, 6).unwrap();
        let t = run_exploration(&b, 0, &params(1.0, 0.0, 0.05, 2, 100), 0).unwrap();
        assert_eq!(t.a0_size(), b.graph().vertex_count());
        assert_eq!((t.steps, t.outcome), (0, ExplorationOutcome::BoundaryHit));
        assert!(t.boundary_hit && t.escaped());
    }

    #[test]
    fn closed_world_is_deterministic() {
        let b = tree_ball(3, 6).unwrap();
        let lam = lambda_t3();
        let t = run_exploration(&b, 0, &params(0.0, 0.0, lam, 2, 100), 4).unwrap();
        assert_eq!(t.a0_size(), 1);
        assert_eq!(t.z[1], 1);
        assert!(t.xi.iter().all(|&x| x == 0));
        // first t with 1 < 2t / (3 lambda1)
        let want = (1.5 * lam).floor() as usize + 1;
        assert_eq!(t.tau, Some(want));
        assert_eq!(t.outcome, ExplorationOutcome::Stopped);
    }

    #[test]
    fn a0_matches_percolation_cluster() {
        let b = free_product_ball(7, 6).unwrap();
        for seed in 0..30 {
            let t = run_exploration(&b, 0, &params(0.3, 0.0, 0.2, 3, 0), seed).unwrap();
            let c = clusters(&sample(b.graph(), 0.3, seed).unwrap(), Some(0)).unwrap();
            assert_eq!(t.a0_size(), c.root_size.unwrap());
        }
    }

    fn check_invariants(t: &ExplorationTrace) {
        let d = t.d as f64;
        assert_eq!(t.sizes.len(), t.steps + 1);
        for s in 0..t.steps {
            assert!(t.sizes[s] <= t.sizes[s + 1]);
            assert_eq!(t.xi[s], t.sizes[s + 1] - t.sizes[s]);
            // u and its whole radius-g~ tree neighborhood
            let most: usize = (0..=t.gtilde as u32).map(|j| (t.d - 1).pow(j)).sum();
            assert!(t.xi[s] <= most);
        }
        for (s, &z) in t.z.iter().enumerate() {
            assert!(z <= s);
        }
        if let Some(tau) = t.tau {
            assert!(tau as f64 > t.params.lambda1 * d * t.a0_size() as f64 / 2.0);
        }
        assert_ne!(t.outcome, ExplorationOutcome::FrontierExhausted, "{t:?}");
    }

    #[test]
    fn trace_invariants_and_drift() {
        let b = tree_ball(6, 7).unwrap();
        let lam = 1.0 - 2.0 * 5f64.sqrt() / 6.0;
        let eps = 0.05;
        let p = 0.2 + eps;
        let traces: Vec<_> = (0..300)
            .map(|s| run_exploration(&b, 0, &params(p, eps, lam, 2, 400), s).unwrap())
            .collect();
        traces.iter().for_each(check_invariants);
        let rep = drift_report(&traces, &Theorem1Inputs::new(6, 5, lam, eps)).unwrap();
        assert!(rep.steps_pooled >= 300, "{rep:?}");
        assert!(rep.pass_sum && rep.pass_closed, "{rep:?}");
        assert!(rep.bound_sum >= rep.bound_closed);
    }

    #[test]
    fn drift_arithmetic() {
        let (_, closed) = drift_bounds(6, 3, 0.1, 0.3);
        assert_abs_diff_eq!(closed, 0.3 * (1.5f64.powi(3) - 1.0) / 10.0, epsilon = 1e-15);
        assert_abs_diff_eq!(closed, 0.07125, epsilon = 1e-12);
        assert_eq!(drift_bounds(6, 3, 0.0, 0.3), (0.0, 0.0));
        let b = tree_ball(3, 5).unwrap();
        let t = run_exploration(&b, 0, &params(0.0, 0.0, 0.5, 1, 10), 0).unwrap();
        let rep = drift_report(&[t], &Theorem1Inputs::new(3, 3, 0.5, 0.0)).unwrap();
        assert!(rep.pass_closed);
        assert!(drift_report(&[], &Theorem1Inputs::new(3, 3, 0.5, 0.0)).is_err());
    }

    #[test]
    fn theorem1_arithmetic() {
        let b = theorem1_bound(&Theorem1Inputs::new(6, 30, 0.2, 0.1)).unwrap();
        assert_abs_diff_eq!(b.second_term, 128.0 * 26f64.ln() / 180.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.second_term, 2.317, epsilon = 1e-3);
        assert_eq!(b.bound, 1.0);
        let far = theorem1_bound(&Theorem1Inputs::new(6, 1_000_000_000, 0.2, 0.1)).unwrap();
        assert_abs_diff_eq!(far.bound, 0.2, epsilon = 1e-6);
        let g1 = theorem1_bound(&Theorem1Inputs::new(4, 40, 0.3, 0.1)).unwrap();
        let g2 = theorem1_bound(&Theorem1Inputs::new(4, 80, 0.3, 0.1)).unwrap();
        assert_abs_diff_eq!(g1.second_term, 2.0 * g2.second_term, epsilon = 1e-15);
        // eps_required meets the girth condition with equality
        let t = theorem1_bound(&Theorem1Inputs::new(6, 9, 0.25, 0.1)).unwrap();
        let lhs = t.gtilde as f64;
        let rhs = (1.0 + 8.0 / 0.0625f64).ln() / (1.0 + t.eps_required * 5.0).ln();
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-9);
        assert!(theorem1_bound(&Theorem1Inputs::new(6, 9, 0.25, 0.3)).is_err());
        assert!(theorem1_bound(&Theorem1Inputs::new(6, 9, 0.0, 0.1)).is_err());
    }
}
