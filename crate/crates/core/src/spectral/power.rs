use super::{Method, SpectralEstimate};
use crate::error::{Error, Result};
use crate::graph::{Graph, RootedBall};
use crate::{par, rng};

/// Power-iteration controls. `tol` bounds the residual `|Mx - rho x|` of the
/// unit iterate.
#[derive(Clone, Copy, Debug)]
pub struct PowerOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl PowerOptions {
    pub fn new(tol: f64) -> Self {
        PowerOptions {
            tol,
            max_iter: 1_000_000,
        }
    }
}

fn normalize(x: &mut [f64]) {
    let norm = par::dot(x, x).sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}

/// `1 - mu` where `mu` is the top eigenvalue of the walk restricted to the
/// ball's interior with the boundary absorbing.
///
/// Power iteration on the lazy operator `(I + M)/2` from the all-ones vector.
/// The iterate stays positive, so the Collatz-Wielandt ratios
/// `min/max (Mx)_i / x_i` bracket `mu` and give `lower`/`upper`; `value`
/// comes from the Rayleigh quotient. This is the Dirichlet approximation to
/// the bottom of the spectrum of `I - P`, approached from above as the
/// radius grows.
pub fn lambda1_dirichlet(b: &RootedBall, tol: f64) -> Result<SpectralEstimate> {
    lambda1_dirichlet_with(b, PowerOptions::new(tol))
}

pub fn lambda1_dirichlet_with(b: &RootedBall, opts: PowerOptions) -> Result<SpectralEstimate> {
    let k = b.interior_count();
    if k == 0 {
        return Err(Error::param("ball", "radius must be >= 1 (empty interior)"));
    }
    let d = b.interior_degree().ok_or(Error::NotRegular)? as f64;
    let g = b.graph();
    let apply = |x: &[f64], y: &mut [f64]| {
        par::fill(y, |i| {
            g.neighbors(i)
                .iter()
                .filter(|a| (a.vertex as usize) < k)
                .map(|a| x[a.vertex as usize])
                .sum::<f64>()
                / d
        });
    };
    let mut x = vec![1.0; k];
    normalize(&mut x);
    let mut y = vec![0.0; k];
    let mut best = SpectralEstimate {
        value: f64::NAN,
        lower: f64::NEG_INFINITY,
        upper: f64::INFINITY,
        iterations: 0,
        residual: f64::INFINITY,
        method: Method::DirichletPower,
        converged: false,
    };
    for it in 1..=opts.max_iter {
        apply(&x, &mut y);
        let rho = par::dot(&x, &y);
        let residual = par::sum_range(k, |i| (y[i] - rho * x[i]).powi(2)).sqrt();
        let (lo, hi) = x
            .iter()
            .zip(&y)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (&xi, &yi)| {
                let r = yi / xi;
                (lo.min(r), hi.max(r))
            });
        // the bracket only tightens in the limit; keep the best seen
        let lower = (1.0 - hi).max(best.lower);
        let upper = (1.0 - lo).min(best.upper);
        best = SpectralEstimate {
            value: (1.0 - rho).clamp(lower, upper),
            lower,
            upper,
            iterations: it,
            residual,
            method: Method::DirichletPower,
            converged: residual <= opts.tol,
        };
        if best.converged {
            break;
        }
        x.iter_mut().zip(&y).for_each(|(xi, &yi)| *xi = 0.5 * (*xi + yi));
        normalize(&mut x);
    }
    Ok(best)
}

/// Deterministic zero-mean start vector.
fn centered_start(n: usize) -> Vec<f64> {
    let seed = rng::label("spectral-start");
    let mut x: Vec<f64> = (0..n).map(|i| rng::unit(seed, i as u64) - 0.5).collect();
    project_out_constant(&mut x);
    normalize(&mut x);
    x
}

fn project_out_constant(x: &mut [f64]) {
    let mean = par::sum_range(x.len(), |i| x[i]) / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= mean);
}

fn check_gap_input(g: &Graph) -> Result<f64> {
    let d = g.regular_degree().ok_or(Error::NotRegular)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.vertex_count() < 2 {
        return Err(Error::param("graph", "need at least two vertices"));
    }
    Ok(d as f64)
}

/// Top eigenvalue of `shift*I + sign*P` on the complement of the constants.
/// Returns the Rayleigh quotient of `P` at the final iterate.
fn deflated_power(g: &Graph, d: f64, sign: f64, opts: PowerOptions) -> (f64, f64, usize, bool) {
    let n = g.vertex_count();
    let mut x = centered_start(n);
    let mut y = vec![0.0; n];
    let mut out = (f64::NAN, f64::INFINITY, 0, false);
    for it in 1..=opts.max_iter {
        par::fill(&mut y, |i| {
            g.neighbors(i).iter().map(|a| x[a.vertex as usize]).sum::<f64>() / d
        });
        let rho = par::dot(&x, &y);
        let residual = par::sum_range(n, |i| (y[i] - rho * x[i]).powi(2)).sqrt();
        out = (rho, residual, it, residual <= opts.tol);
        if out.3 {
            break;
        }
        x.iter_mut().zip(&y).for_each(|(xi, &yi)| *xi = 0.5 * (*xi + sign * yi));
        project_out_constant(&mut x);
        normalize(&mut x);
    }
    out
}

/// `1 - lambda_2(P)` for a connected regular graph, where `lambda_2` is the
/// second-largest (signed) eigenvalue. Not clamped: complete graphs give
/// values above 1.
///
/// Rayleigh quotients on the complement of the constants never exceed
/// `lambda_2`, so `value` is an upper bound on the gap; `lower` subtracts the
/// final residual.
pub fn spectral_gap(g: &Graph, tol: f64) -> Result<SpectralEstimate> {
    spectral_gap_with(g, PowerOptions::new(tol))
}

pub fn spectral_gap_with(g: &Graph, opts: PowerOptions) -> Result<SpectralEstimate> {
    let d = check_gap_input(g)?;
    let (rho, residual, iterations, converged) = deflated_power(g, d, 1.0, opts);
    Ok(SpectralEstimate {
        value: 1.0 - rho,
        lower: 1.0 - rho - residual,
        upper: 1.0 - rho,
        iterations,
        residual,
        method: Method::GapPower,
        converged,
    })
}

/// `1 - |lambda_min(P)|`, reported separately for bipartite graphs (where it
/// is 0). `None` for non-bipartite graphs.
pub fn smallest_eigenvalue_gap(g: &Graph, tol: f64) -> Result<Option<SpectralEstimate>> {
    let d = check_gap_input(g)?;
    if g.bipartition().is_none() {
        return Ok(None);
    }
    let (rho, residual, iterations, converged) = deflated_power(g, d, -1.0, PowerOptions::new(tol));
    let v = 1.0 - rho.abs();
    Ok(Some(SpectralEstimate {
        value: v,
        lower: v - residual,
        upper: v + residual,
        iterations,
        residual,
        method: Method::GapPower,
        converged,
    }))
}

/// Limit of a sequence of Dirichlet estimates `lambda(R)` as `R -> inf`.
///
/// Least-squares fit of `lambda_inf + A / (R + c)^2` (the leading finite-size
/// correction for a ball with an absorbing sphere), scanning the offset `c`
/// over `[0, 5]`.
pub fn extrapolate_radius_limit(points: &[(usize, f64)]) -> Result<f64> {
    if points.len() < 3 {
        return Err(Error::param("points", "need at least three radii"));
    }
    let mut best = (f64::INFINITY, f64::NAN);
    for step in 0..=500 {
        let c = step as f64 * 0.01;
        let xs: Vec<f64> = points.iter().map(|&(r, _)| 1.0 / (r as f64 + c).powi(2)).collect();
        let n = xs.len() as f64;
        let (sx, sy) = (xs.iter().sum::<f64>(), points.iter().map(|p| p.1).sum::<f64>());
        let sxx: f64 = xs.iter().map(|x| x * x).sum();
        let sxy: f64 = xs.iter().zip(points).map(|(x, p)| x * p.1).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        let icpt = (sy - slope * sx) / n;
        let sse: f64 = xs
            .iter()
            .zip(points)
            .map(|(x, p)| (icpt + slope * x - p.1).powi(2))
            .sum();
        if sse < best.0 {
            best = (sse, icpt);
        }
    }
    Ok(best.1)
}
