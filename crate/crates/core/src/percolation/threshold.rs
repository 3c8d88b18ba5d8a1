use super::survival::{binomial, root_survival_prob, root_survival_prob_keyed, tree_survival_exact};
use super::sweep::{check_alpha, is_giant, run_trials, Faces};
use crate::error::{Error, Result};
use crate::generators::{free_product_ball_keyed, slab_faces, Family, Generated, GeneratorSpec, DEFAULT_BALL_CAP};
use serde::{Deserialize, Serialize};

/// Finite-size surrogate whose crossing locates `p_c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    /// Root-to-boundary connection on a rooted ball.
    RootSurvival,
    /// `P(largest >= alpha * n)` crossing 1/2.
    GiantFraction,
    /// Probability of an open cluster joining the two faces of a slab,
    /// crossing 1/2.
    Crossing,
}

/// How a root-survival curve is turned into a crossing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurvivalCriterion {
    /// `theta_R(p)` crosses half its value at `p = 1`.
    #[default]
    HalfOfMax,
    /// `theta_R(p) / theta_{R/2}(p)` crosses 1/2, the ratio of a one-arm
    /// probability decaying like `1/R` at criticality.
    ScalingRatio,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub value: f64,
    pub stderr: f64,
}

impl Measurement {
    pub fn exact(value: f64) -> Self {
        Measurement { value, stderr: 0.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BisectionStep {
    pub p: f64,
    pub value: f64,
    pub stderr: f64,
}

/// Result of bisecting a non-decreasing observable against a target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bisection {
    pub value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub bracket_low: f64,
    pub bracket_high: f64,
    pub target: f64,
    pub steps: Vec<BisectionStep>,
    /// Extra evaluations made while locating the confidence interval.
    pub ci_steps: Vec<BisectionStep>,
    /// Set when the measurements decrease beyond noise somewhere, or the
    /// target was never crossed inside `[0, 1]`.
    pub inconclusive: bool,
}

/// Bisection iterations for tolerance `tol`: `ceil(log2(1/tol)) + 2`.
pub fn iterations_for(tol: f64) -> usize {
    (1.0 / tol).log2().ceil() as usize + 2
}

const CI_SIGMAS: f64 = 2.0;
const MONOTONE_SIGMAS: f64 = 3.0;
const CI_SCAN_LIMIT: usize = 8;

/// Bisects `measure` on `[0, 1]` for the point where it reaches `target`.
///
/// The confidence interval is found by stepping outward from the final
/// bracket in strides of `tol` until a measurement lies more than two
/// standard errors below the target (low end), resp. at least two above it
/// (high end), giving up after a few strides.
pub fn bisect<F>(mut measure: F, target: f64, tol: f64) -> Result<Bisection>
where
    F: FnMut(f64) -> Result<Measurement>,
{
    if !(1e-3..0.5).contains(&tol) {
        return Err(Error::param("tol", format!("must lie in [1e-3, 0.5), got {tol}")));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut steps = Vec::new();
    for _ in 0..iterations_for(tol) {
        let mid = 0.5 * (lo + hi);
        let m = measure(mid)?;
        steps.push(BisectionStep {
            p: mid,
            value: m.value,
            stderr: m.stderr,
        });
        if m.value < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let value = 0.5 * (lo + hi);
    let mut ci_steps = Vec::new();
    let ci_low = ci_edge(&mut measure, &steps, &mut ci_steps, lo, value, -tol, |s| {
        s.value + CI_SIGMAS * s.stderr < target
    })?;
    let ci_high = ci_edge(&mut measure, &steps, &mut ci_steps, hi, value, tol, |s| {
        s.value - CI_SIGMAS * s.stderr >= target
    })?;
    let mut sorted: Vec<BisectionStep> = steps.iter().chain(&ci_steps).copied().collect();
    sorted.sort_by(|a, b| a.p.total_cmp(&b.p));
    let mut reversed = false;
    for (i, a) in sorted.iter().enumerate() {
        for b in &sorted[i + 1..] {
            let noise = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
            if a.value - b.value > MONOTONE_SIGMAS * noise.max(1e-12) {
                reversed = true;
            }
        }
    }
    let never_crossed = lo == 0.0 || hi == 1.0;
    Ok(Bisection {
        value,
        ci_low,
        ci_high,
        bracket_low: lo,
        bracket_high: hi,
        target,
        steps,
        ci_steps,
        inconclusive: reversed || never_crossed,
    })
}

/// Walks from the bracket end `start` outward from `value` in steps of
/// `stride` until a measurement clears the noise band (`clear`), measuring
/// only points not already evaluated.
fn ci_edge<F, C>(
    measure: &mut F,
    steps: &[BisectionStep],
    ci_steps: &mut Vec<BisectionStep>,
    start: f64,
    value: f64,
    stride: f64,
    clear: C,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<Measurement>,
    C: Fn(&BisectionStep) -> bool,
{
    let edge = if stride < 0.0 { 0.0 } else { 1.0 };
    let candidates = std::iter::once(start)
        .chain((1..=CI_SCAN_LIMIT).map(|j| value + j as f64 * stride))
        .map(|q| q.clamp(0.0, 1.0));
    for q in candidates {
        if q == edge {
            return Ok(edge);
        }
        if (q - value) * stride <= (start - value) * stride && q != start {
            continue;
        }
        let known = steps.iter().chain(ci_steps.iter()).find(|s| s.p == q).copied();
        let step = match known {
            Some(s) => s,
            None => {
                let m = measure(q)?;
                let s = BisectionStep {
                    p: q,
                    value: m.value,
                    stderr: m.stderr,
                };
                ci_steps.push(s);
                s
            }
        };
        if clear(&step) {
            return Ok(q);
        }
    }
    Ok(edge)
}

/// Finite-size estimate of the critical probability.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PcEstimate {
    pub value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub observable: Observable,
    pub trials_per_point: usize,
    /// Giant threshold fraction; `None` for observables that do not use it.
    pub alpha: Option<f64>,
    pub criterion: Option<SurvivalCriterion>,
    pub tol: f64,
    pub bisection: Bisection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PcOptions {
    pub observable: Observable,
    #[serde(default)]
    pub criterion: SurvivalCriterion,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
}

pub const DEFAULT_ALPHA: f64 = 0.01;
pub const DEFAULT_TOL: f64 = 1e-3;

fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

impl PcOptions {
    pub fn new(observable: Observable, trials: usize, seed: u64) -> Self {
        PcOptions {
            observable,
            criterion: SurvivalCriterion::default(),
            alpha: DEFAULT_ALPHA,
            tol: DEFAULT_TOL,
            trials,
            seed,
        }
    }
}

/// Bisects a survival curve `theta(p, r)` according to `criterion`.
/// `trials` is `None` for exact curves.
fn survival_bisection<F>(
    mut theta: F,
    radius: usize,
    criterion: SurvivalCriterion,
    trials: Option<usize>,
    tol: f64,
) -> Result<Bisection>
where
    F: FnMut(f64) -> Result<Vec<Measurement>>,
{
    match criterion {
        SurvivalCriterion::HalfOfMax => {
            let full = theta(1.0)?[radius].value;
            bisect(|p| Ok(theta(p)?[radius]), 0.5 * full, tol)
        }
        SurvivalCriterion::ScalingRatio => {
            if radius < 2 {
                return Err(Error::param("radius", "the scaling-ratio criterion needs R >= 2"));
            }
            bisect(|p| Ok(ratio(&theta(p)?, radius, trials)), 0.5, tol)
        }
    }
}

fn ratio(curve: &[Measurement], radius: usize, trials: Option<usize>) -> Measurement {
    let (far, near) = (curve[radius].value, curve[radius / 2].value);
    let r = if near > 0.0 { (far / near).min(1.0) } else { 0.0 };
    match trials {
        None => Measurement::exact(r),
        Some(t) => {
            // the far event is contained in the near one: r is a conditional
            // frequency over the trials that reached R/2
            let reached = (near * t as f64).round().max(1.0);
            Measurement {
                value: r,
                stderr: if near > 0.0 {
                    (r * (1.0 - r) / reached).sqrt()
                } else {
                    0.5
                },
            }
        }
    }
}

/// `p_c` of the `d`-regular tree from the exact survival recursion at
/// depth `radius`.
pub fn estimate_pc_tree_exact(d: usize, radius: usize, criterion: SurvivalCriterion, tol: f64) -> Result<PcEstimate> {
    if radius == 0 {
        return Err(Error::param("radius", "must be >= 1"));
    }
    let half = radius / 2;
    let theta = |p: f64| -> Result<Vec<Measurement>> {
        let mut curve = vec![Measurement::exact(0.0); radius + 1];
        curve[radius] = Measurement::exact(tree_survival_exact(d, p, radius)?);
        curve[half] = Measurement::exact(tree_survival_exact(d, p, half)?);
        Ok(curve)
    };
    let bisection = survival_bisection(theta, radius, criterion, None, tol)?;
    Ok(PcEstimate {
        value: bisection.value,
        ci_low: bisection.ci_low,
        ci_high: bisection.ci_high,
        observable: Observable::RootSurvival,
        trials_per_point: 0,
        alpha: None,
        criterion: Some(criterion),
        tol,
        bisection,
    })
}

/// Free-product balls measured by root survival carry word-derived edge keys
/// so that runs for different `k` share coins on common group elements.
fn generate_for(spec: &GeneratorSpec, observable: Observable) -> Result<(Generated, Option<Vec<u64>>)> {
    if spec.family == Family::FreeProductBall && observable == Observable::RootSurvival {
        if let Some(v) = spec.violations().into_iter().next() {
            return Err(Error::param("parameters", v));
        }
        let (k, r) = (spec.parameters[0] as usize, spec.parameters[1] as usize);
        let (ball, keys) = free_product_ball_keyed(k, r, DEFAULT_BALL_CAP)?;
        return Ok((Generated::Ball(ball), Some(keys)));
    }
    Ok((spec.generate()?, None))
}

/// Estimates `p_c` on the graph described by `spec`.
///
/// All evaluation points share the trial seeds derived from `opts.seed`, so
/// the giant and crossing frequencies are exactly monotone along the
/// bisection.
pub fn estimate_pc(spec: &GeneratorSpec, opts: &PcOptions) -> Result<PcEstimate> {
    if opts.trials == 0 {
        return Err(Error::param("trials", "must be positive"));
    }
    let (generated, keys) = generate_for(spec, opts.observable)?;
    let g = generated.graph();
    let n = g.vertex_count();
    let trials = opts.trials;
    let seed = opts.seed;
    let (bisection, alpha, criterion) = match opts.observable {
        Observable::RootSurvival => {
            let b = generated.ball().ok_or_else(|| {
                Error::Unsupported(format!(
                    "root survival needs a rooted ball, `{}` is not one",
                    spec.family
                ))
            })?;
            let radius = b.radius();
            let theta = |p: f64| -> Result<Vec<Measurement>> {
                let rs = match &keys {
                    Some(k) => root_survival_prob_keyed(b, k, p, trials, seed)?,
                    None => root_survival_prob(b, p, trials, seed)?,
                };
                Ok((0..=radius)
                    .map(|r| {
                        let (value, stderr) = rs.reach(r);
                        Measurement { value, stderr }
                    })
                    .collect())
            };
            let bis = survival_bisection(theta, radius, opts.criterion, Some(trials), opts.tol)?;
            (bis, None, Some(opts.criterion))
        }
        Observable::GiantFraction => {
            check_alpha(opts.alpha)?;
            let bis = bisect(
                |p| {
                    let stats = run_trials(g, p, trials, seed, None);
                    let hits = stats.iter().filter(|s| is_giant(s.largest, n, opts.alpha)).count();
                    let (value, stderr) = binomial(hits, trials);
                    Ok(Measurement { value, stderr })
                },
                0.5,
                opts.tol,
            )?;
            (bis, Some(opts.alpha), None)
        }
        Observable::Crossing => {
            if spec.family != Family::Slab {
                return Err(Error::Unsupported(format!(
                    "the crossing observable is defined on slabs, not `{}`",
                    spec.family
                )));
            }
            let sides: Vec<usize> = spec.parameters[2..].iter().map(|&s| s as usize).collect();
            let (low, high) = slab_faces(spec.parameters[0] as usize, spec.parameters[1] as usize, &sides);
            let faces = Faces { low, high };
            let bis = bisect(
                |p| {
                    let stats = run_trials(g, p, trials, seed, Some(&faces));
                    let hits = stats.iter().filter(|s| s.crossing == Some(true)).count();
                    let (value, stderr) = binomial(hits, trials);
                    Ok(Measurement { value, stderr })
                },
                0.5,
                opts.tol,
            )?;
            (bis, None, None)
        }
    };
    Ok(PcEstimate {
        value: bisection.value,
        ci_low: bisection.ci_low,
        ci_high: bisection.ci_high,
        observable: opts.observable,
        trials_per_point: trials,
        alpha,
        criterion,
        tol: opts.tol,
        bisection,
    })
}
