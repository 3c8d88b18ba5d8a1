//! Escape probabilities of simple random walk from a finite set.
//!
//! "Never returns to `A`" is realized on a finite ball as "reaches the
//! boundary sphere before returning to `A`", the boundary playing the role of
//! a cofinite absorbing set. The walk starts from `pi_A`, the degree measure
//! restricted to `A` and normalized.

use crate::error::{Error, Result};
use crate::graph::{RootedBall, VertexSet};
use crate::spectral::SpectralEstimate;
use crate::{par, rng};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Largest number of unknowns `escape_exact` will solve for by default.
pub const DEFAULT_SOLVE_LIMIT: usize = 100_000;
const SOLVE_RESIDUAL: f64 = 1e-12;
const MAX_SWEEPS: usize = 5_000_000;

#[derive(Clone, Debug)]
pub struct EscapeQuery<'a> {
    pub ball: &'a RootedBall,
    pub set: VertexSet,
    /// Step cap per Monte Carlo walk; longer walks are censored.
    pub horizon: usize,
    pub trials: usize,
    pub seed: u64,
}

impl<'a> EscapeQuery<'a> {
    pub fn new(ball: &'a RootedBall, set: VertexSet) -> Self {
        let horizon = 1000 * ball.radius().max(1);
        EscapeQuery {
            ball,
            set,
            horizon,
            trials: 100_000,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.set.is_empty() {
            return Err(Error::InvalidSet("A must be non-empty".into()));
        }
        if self.set.capacity() != self.ball.graph().vertex_count() {
            return Err(Error::InvalidSet("A is indexed over a different graph".into()));
        }
        if let Some(v) = self.set.iter().find(|&v| !self.ball.is_interior(v)) {
            return Err(Error::InvalidSet(format!(
                "vertex {v} of A lies on the boundary sphere"
            )));
        }
        Ok(())
    }

    /// `pi(A)` with `pi(x) = deg(x)`.
    fn mass(&self) -> f64 {
        let g = self.ball.graph();
        self.set.iter().map(|x| g.degree(x) as f64).sum()
    }
}

/// Exact `P_{pi_A}(walk hits the boundary before returning to A)`.
pub fn escape_exact(q: &EscapeQuery) -> Result<f64> {
    escape_exact_with_limit(q, DEFAULT_SOLVE_LIMIT)
}

/// As [`escape_exact`] with an explicit cap on the number of unknowns.
///
/// Solves the harmonic system `f(x) = P_x(hit boundary before A)` on the
/// interior minus `A` by Gauss-Seidel sweeps in vertex order until the max
/// residual drops below `1e-12`, then averages one forced step from `pi_A`.
pub fn escape_exact_with_limit(q: &EscapeQuery, limit: usize) -> Result<f64> {
    q.validate()?;
    let b = q.ball;
    let g = b.graph();
    let n = g.vertex_count();
    let unknowns: Vec<usize> = (0..n).filter(|&v| b.is_interior(v) && !q.set.contains(v)).collect();
    if unknowns.len() > limit {
        return Err(Error::TooLarge {
            what: "escape system",
            size: unknowns.len(),
            limit,
        });
    }
    let mut f: Vec<f64> = (0..n)
        .map(|v| if b.boundary().contains(v) { 1.0 } else { 0.0 })
        .collect();
    let mut converged = unknowns.is_empty();
    let mut residual = 0.0;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        residual = 0.0f64;
        for &x in &unknowns {
            let nb = g.neighbors(x);
            let avg = nb.iter().map(|a| f[a.vertex as usize]).sum::<f64>() / nb.len() as f64;
            residual = residual.max((avg - f[x]).abs());
            f[x] = avg;
        }
        sweeps += 1;
        converged = residual <= SOLVE_RESIDUAL;
    }
    if !converged {
        return Err(Error::NoConvergence {
            iterations: sweeps,
            residual,
        });
    }
    let total: f64 = q
        .set
        .iter()
        .map(|x| {
            // pi(x) * sum_u f(u) / deg(x) = sum_u f(u)
            g.neighbors(x).iter().map(|a| f[a.vertex as usize]).sum::<f64>()
        })
        .sum();
    Ok(total / q.mass())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EscapeMc {
    pub estimate: f64,
    pub stderr: f64,
    pub successes: usize,
    pub censored: usize,
    pub trials: usize,
}

impl EscapeMc {
    pub fn censored_fraction(&self) -> f64 {
        self.censored as f64 / self.trials.max(1) as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum WalkEnd {
    Escaped,
    Returned,
    Censored,
}

/// Monte Carlo escape estimate. Trial `i` draws all its randomness from
/// `(seed, i)`; censored walks are excluded from the estimate and counted.
pub fn escape_mc(q: &EscapeQuery) -> Result<EscapeMc> {
    q.validate()?;
    let b = q.ball;
    let g = b.graph();
    let members: Vec<usize> = q.set.iter().collect();
    let mut cumulative = Vec::with_capacity(members.len());
    let mut acc = 0usize;
    for &x in &members {
        acc += g.degree(x);
        cumulative.push(acc);
    }
    let ends = par::map_range(q.trials, |i| {
        let mut rng = rng::trial_rng(q.seed, i as u64);
        let pick = rng.gen_range(0..acc);
        let mut x = members[cumulative.partition_point(|&c| c <= pick)];
        for _ in 0..q.horizon {
            let nb = g.neighbors(x);
            x = nb[rng.gen_range(0..nb.len())].vertex as usize;
            if b.boundary().contains(x) {
                return WalkEnd::Escaped;
            }
            if q.set.contains(x) {
                return WalkEnd::Returned;
            }
        }
        WalkEnd::Censored
    });
    let successes = ends.iter().filter(|&&e| e == WalkEnd::Escaped).count();
    let censored = ends.iter().filter(|&&e| e == WalkEnd::Censored).count();
    let decided = q.trials - censored;
    let (estimate, stderr) = if decided == 0 {
        (f64::NAN, f64::NAN)
    } else {
        let p = successes as f64 / decided as f64;
        (p, (p * (1.0 - p) / decided as f64).sqrt())
    };
    Ok(EscapeMc {
        estimate,
        stderr,
        successes,
        censored,
        trials: q.trials,
    })
}

/// Outcome of comparing the escape probability with a bottom-of-spectrum
/// estimate on the same ball.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub escape: f64,
    pub lambda1: f64,
    pub lambda1_lower: f64,
    pub radius: usize,
    pub set_size: usize,
    pub pass: bool,
}

/// Checks `P_{pi_A}(escape) >= lambda_1` with `lambda_1` from the Dirichlet
/// estimate of the same ball (its lower bracket, minus `1e-9`).
pub fn lemma_check(q: &EscapeQuery, lam: &SpectralEstimate) -> Result<LemmaReport> {
    let escape = escape_exact(q)?;
    Ok(LemmaReport {
        escape,
        lambda1: lam.value,
        lambda1_lower: lam.lower,
        radius: q.ball.radius(),
        set_size: q.set.len(),
        pass: escape >= lam.lower - 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{free_product_ball, tree_ball};
    use crate::graph::ball;
    use crate::graph::fixtures::cycle;
    use crate::spectral::lambda1_dirichlet;
    use approx::assert_abs_diff_eq;

    /// Never-return probability to depth `r` on `T_d` from a biased
    /// one-dimensional walk: step out w.p. (d-1)/d, in w.p. 1/d.
    fn tree_ruin(d: usize, r: usize) -> f64 {
        let ratio = 1.0 / (d as f64 - 1.0);
        (1.0 - ratio) / (1.0 - ratio.powi(r as i32))
    }

    fn root_query(b: &RootedBall) -> EscapeQuery<'_> {
        EscapeQuery::new(b, VertexSet::from_vertices(b.graph().vertex_count(), [0]))
    }

    #[test]
    fn radius_one_always_escapes() {
        let b = tree_ball(4, 1).unwrap();
        let q = root_query(&b);
        assert_eq!(escape_exact(&q).unwrap(), 1.0);
        let mc = escape_mc(&EscapeQuery { trials: 1000, ..q }).unwrap();
        assert_eq!((mc.estimate, mc.stderr), (1.0, 0.0));
    }

    #[test]
    fn tree_escape_matches_gamblers_ruin() {
        let b3 = tree_ball(3, 14).unwrap();
        let e3 = escape_exact(&root_query(&b3)).unwrap();
        assert_abs_diff_eq!(e3, tree_ruin(3, 14), epsilon = 1e-9);
        assert_abs_diff_eq!(e3, 0.5, epsilon = 0.01);
        let b4 = tree_ball(4, 10).unwrap();
        let e4 = escape_exact(&root_query(&b4)).unwrap();
        assert_abs_diff_eq!(e4, tree_ruin(4, 10), epsilon = 1e-9);
        assert_abs_diff_eq!(e4, 2.0 / 3.0, epsilon = 0.01);
    }

    #[test]
    fn solve_limit() {
        let b = tree_ball(4, 14).unwrap();
        assert!(matches!(escape_exact(&root_query(&b)), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn invalid_sets() {
        let b = tree_ball(3, 2).unwrap();
        let n = b.graph().vertex_count();
        assert!(escape_exact(&EscapeQuery::new(&b, VertexSet::new(n))).is_err());
        assert!(escape_exact(&EscapeQuery::new(&b, VertexSet::from_vertices(n, [n - 1]))).is_err());
    }

    #[test]
    fn mc_agrees_with_exact() {
        let b = tree_ball(3, 8).unwrap();
        let mut q = root_query(&b);
        q.trials = 100_000;
        q.seed = 17;
        let exact = escape_exact(&q).unwrap();
        let mc = escape_mc(&q).unwrap();
        assert_eq!(mc.censored, 0);
        assert!((mc.estimate - exact).abs() <= 4.0 * mc.stderr, "{mc:?} vs {exact}");

        // whole interior of a radius-2 segment of a long cycle
        let seg = ball(&cycle(30), 0, 2).unwrap();
        let interior = VertexSet::from_vertices(5, 0..seg.interior_count());
        let q = EscapeQuery {
            trials: 100_000,
            seed: 3,
            ..EscapeQuery::new(&seg, interior)
        };
        let exact = escape_exact(&q).unwrap();
        assert_abs_diff_eq!(exact, 1.0 / 3.0, epsilon = 1e-12);
        let mc = escape_mc(&q).unwrap();
        assert!((mc.estimate - exact).abs() <= 4.0 * mc.stderr);
    }

    #[test]
    fn mc_is_seed_deterministic() {
        let b = tree_ball(3, 6).unwrap();
        let q = EscapeQuery {
            trials: 5000,
            seed: 9,
            ..root_query(&b)
        };
        assert_eq!(escape_mc(&q).unwrap(), escape_mc(&q).unwrap());
    }

    #[test]
    fn growing_the_set_never_helps_escape() {
        let b = tree_ball(3, 9).unwrap();
        let n = b.graph().vertex_count();
        let mut set = VertexSet::new(n);
        let mut prev = f64::INFINITY;
        for v in 0..40 {
            set.insert(v);
            let e = escape_exact(&EscapeQuery::new(&b, set.clone())).unwrap();
            assert!(e <= prev + 1e-12);
            prev = e;
        }
    }

    #[test]
    fn lemma_examples() {
        let b = tree_ball(3, 12).unwrap();
        let lam = lambda1_dirichlet(&b, 1e-9).unwrap();
        let rep = lemma_check(&root_query(&b), &lam).unwrap();
        assert!(rep.pass);
        assert_abs_diff_eq!(rep.escape, 0.5, epsilon = 1e-3);

        let b = tree_ball(4, 9).unwrap();
        let lam = lambda1_dirichlet(&b, 1e-9).unwrap();
        let rep = lemma_check(&EscapeQuery::new(&b, b.inner_ball(2)), &lam).unwrap();
        assert!(rep.pass, "{rep:?}");

        let b = free_product_ball(7, 6).unwrap();
        let lam = lambda1_dirichlet(&b, 1e-9).unwrap();
        let rep = lemma_check(&EscapeQuery::new(&b, b.inner_ball(1)), &lam).unwrap();
        assert!(rep.pass, "{rep:?}");
    }
}
