use super::{check_p, edge_open};
use crate::error::{Error, Result};
use crate::graph::RootedBall;
use crate::{par, rng};
use serde::{Deserialize, Serialize};

/// Monte Carlo root-to-sphere connection statistics on a rooted ball.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSurvival {
    pub estimate: f64,
    pub stderr: f64,
    pub trials: usize,
    /// `depth_counts[r]`: trials whose open cluster of the root reaches
    /// distance exactly `r` and no further.
    pub depth_counts: Vec<usize>,
}

impl RootSurvival {
    /// Estimated probability (and standard error) that the root's open
    /// cluster reaches distance `r`.
    pub fn reach(&self, r: usize) -> (f64, f64) {
        let hits: usize = self.depth_counts.iter().skip(r).sum();
        binomial(hits, self.trials)
    }
}

pub(crate) fn binomial(hits: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (f64::NAN, f64::NAN);
    }
    let p = hits as f64 / trials as f64;
    (p, (p * (1.0 - p) / trials as f64).sqrt())
}

struct Scratch {
    stamp: Vec<u32>,
    epoch: u32,
    queue: Vec<u32>,
}

/// Deepest sphere reached by the open cluster of the root, stopping at the
/// first boundary vertex found.
fn reach_depth(b: &RootedBall, keys: Option<&[u64]>, p: f64, seed: u64, s: &mut Scratch) -> usize {
    let g = b.graph();
    let radius = b.radius();
    s.epoch = s.epoch.wrapping_add(1);
    if s.epoch == 0 {
        s.stamp.fill(0);
        s.epoch = 1;
    }
    s.queue.clear();
    s.queue.push(0);
    s.stamp[0] = s.epoch;
    let mut deepest = 0;
    let mut head = 0;
    while head < s.queue.len() {
        let u = s.queue[head] as usize;
        head += 1;
        for a in g.neighbors(u) {
            let w = a.vertex as usize;
            if s.stamp[w] == s.epoch {
                continue;
            }
            let open = match keys {
                Some(k) => rng::unit(seed, k[a.edge as usize]) < p,
                None => edge_open(seed, a.edge as usize, p),
            };
            if !open {
                continue;
            }
            s.stamp[w] = s.epoch;
            let dw = b.dist(w);
            deepest = deepest.max(dw);
            if dw >= radius {
                return radius;
            }
            s.queue.push(w as u32);
        }
    }
    deepest
}

/// Probability that the root connects to the boundary sphere by an open
/// path, estimated from `trials` independent configurations.
pub fn root_survival_prob(b: &RootedBall, p: f64, trials: usize, seed: u64) -> Result<RootSurvival> {
    survival_impl(b, None, p, trials, seed)
}

/// As [`root_survival_prob`], with edge `e` open iff
/// `rng::unit(trial_seed, keys[e]) < p`. Balls that assign equal keys to
/// corresponding edges then share their coins.
pub fn root_survival_prob_keyed(
    b: &RootedBall,
    keys: &[u64],
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<RootSurvival> {
    if keys.len() != b.graph().edge_count() {
        return Err(Error::param("keys", "need exactly one key per edge"));
    }
    survival_impl(b, Some(keys), p, trials, seed)
}

fn survival_impl(b: &RootedBall, keys: Option<&[u64]>, p: f64, trials: usize, seed: u64) -> Result<RootSurvival> {
    check_p("p", p)?;
    if b.radius() == 0 {
        return Err(Error::param("radius", "root survival needs a ball of radius >= 1"));
    }
    let n = b.graph().vertex_count();
    let depths = par::map_range_init(
        trials,
        || Scratch {
            stamp: vec![0; n],
            epoch: 0,
            queue: Vec::new(),
        },
        |s, i| reach_depth(b, keys, p, rng::trial_seed(seed, i as u64), s),
    );
    let mut depth_counts = vec![0; b.radius() + 1];
    for d in depths {
        depth_counts[d] += 1;
    }
    let (estimate, stderr) = binomial(depth_counts[b.radius()], trials);
    Ok(RootSurvival {
        estimate,
        stderr,
        trials,
        depth_counts,
    })
}

/// `1 - (1 - x)^k`, accurate for tiny `x`.
fn at_least_one(x: f64, k: usize) -> f64 {
    -((k as f64) * (-x).ln_1p()).exp_m1()
}

/// Exact probability that the root of the `d`-regular tree connects to
/// level `radius` at bond parameter `p`.
pub fn tree_survival_exact(d: usize, p: f64, radius: usize) -> Result<f64> {
    if d < 3 {
        return Err(Error::param("d", format!("must be >= 3, got {d}")));
    }
    check_p("p", p)?;
    if radius == 0 {
        return Ok(1.0);
    }
    let mut s = 1.0;
    for _ in 1..radius {
        s = at_least_one(p * s, d - 1);
    }
    Ok(at_least_one(p * s, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{free_product_ball, tree_ball};
    use approx::assert_abs_diff_eq;

    #[test]
    fn exact_recursion_values() {
        assert_eq!(tree_survival_exact(3, 1.0, 200).unwrap(), 1.0);
        assert_eq!(tree_survival_exact(5, 0.3, 0).unwrap(), 1.0);
        assert_abs_diff_eq!(tree_survival_exact(3, 0.5, 1).unwrap(), 0.875, epsilon = 1e-15);
        // R = 2 by hand: s_1 = 1 - (1 - p)^2
        let p: f64 = 0.4;
        let s1 = 1.0 - (1.0 - p).powi(2);
        let want = 1.0 - (1.0 - p * s1).powi(3);
        assert_abs_diff_eq!(tree_survival_exact(3, p, 2).unwrap(), want, epsilon = 1e-15);
        assert!(tree_survival_exact(3, 0.45, 200).unwrap() < 1e-3);
        assert!(tree_survival_exact(3, 0.55, 200).unwrap() > 0.2);
        assert!(tree_survival_exact(2, 0.5, 3).is_err());
        assert!(tree_survival_exact(3, 1.1, 3).is_err());
        // deep subcritical values stay positive instead of rounding to zero
        let tiny = tree_survival_exact(6, 0.1, 200).unwrap();
        assert!(tiny > 0.0 && tiny < 1e-50);
    }

    #[test]
    fn exact_recursion_monotone() {
        for d in [3, 4, 6] {
            for i in 0..=40 {
                let p = i as f64 / 40.0;
                let mut prev = f64::INFINITY;
                for r in 0..60 {
                    let s = tree_survival_exact(d, p, r).unwrap();
                    assert!(s <= prev);
                    prev = s;
                    if i > 0 {
                        let lower = tree_survival_exact(d, (i - 1) as f64 / 40.0, r).unwrap();
                        assert!(lower <= s);
                    }
                }
            }
        }
    }

    #[test]
    fn mc_extremes() {
        let b = tree_ball(3, 4).unwrap();
        assert_eq!(root_survival_prob(&b, 1.0, 100, 0).unwrap().estimate, 1.0);
        let r = root_survival_prob(&b, 0.0, 100, 0).unwrap();
        assert_eq!((r.estimate, r.depth_counts[0]), (0.0, 100));
        let b0 = tree_ball(3, 0).unwrap();
        assert!(root_survival_prob(&b0, 0.5, 10, 0).is_err());
    }

    #[test]
    fn mc_matches_tree_recursion() {
        let b = tree_ball(3, 10).unwrap();
        for (p, seed) in [(0.3, 1), (0.5, 2), (0.7, 3)] {
            let r = root_survival_prob(&b, p, 200_000, seed).unwrap();
            for depth in 1..=10 {
                let exact = tree_survival_exact(3, p, depth).unwrap();
                let (est, se) = r.reach(depth);
                assert!(
                    (est - exact).abs() <= 3.0 * se.max(1e-6),
                    "p {p} r {depth}: {est} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn identity_keys_match_edge_ids() {
        let b = tree_ball(4, 5).unwrap();
        let keys: Vec<u64> = (0..b.graph().edge_count() as u64).collect();
        let plain = root_survival_prob(&b, 0.4, 3000, 5).unwrap();
        assert_eq!(plain, root_survival_prob_keyed(&b, &keys, 0.4, 3000, 5).unwrap());
        assert!(root_survival_prob_keyed(&b, &keys[1..], 0.4, 10, 5).is_err());
    }

    #[test]
    fn mc_is_deterministic() {
        let b = free_product_ball(5, 5).unwrap();
        let a = root_survival_prob(&b, 0.3, 2000, 11).unwrap();
        assert_eq!(a, root_survival_prob(&b, 0.3, 2000, 11).unwrap());
    }
}
