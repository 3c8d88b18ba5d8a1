use super::{spectral_gap, Method, SpectralEstimate};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::par;

/// Largest vertex count for exhaustive subset enumeration.
pub const EXACT_CHEEGER_LIMIT: usize = 20;

/// Cheeger constant `h(G) = min |E(A, V\A)| / |A|` over `0 < |A| <= |V|/2`.
///
/// Exact by enumeration up to [`EXACT_CHEEGER_LIMIT`] vertices. Larger
/// `d`-regular graphs get the spectral bracket
/// `d*gap/2 <= h <= d*sqrt(2*gap)` with `value` at its midpoint.
pub fn cheeger_bracket(g: &Graph) -> Result<SpectralEstimate> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::param("graph", "need at least two vertices"));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if n <= EXACT_CHEEGER_LIMIT {
        return Ok(SpectralEstimate::exact(exact_cheeger(g), Method::ExactEnumeration));
    }
    let d = g.regular_degree().ok_or(Error::NotRegular)? as f64;
    let gap = spectral_gap(g, 1e-8)?;
    let lower = d * gap.lower.max(0.0) / 2.0;
    let upper = d * (2.0 * gap.upper.max(0.0)).sqrt();
    Ok(SpectralEstimate {
        value: 0.5 * (lower + upper),
        lower,
        upper,
        iterations: gap.iterations,
        residual: gap.residual,
        method: Method::SpectralBracket,
        converged: gap.converged,
    })
}

fn exact_cheeger(g: &Graph) -> f64 {
    let n = g.vertex_count();
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, a| m | 1 << a.vertex))
        .collect();
    // (cut, size) of the best set in each block of masks
    const BLOCK: usize = 1 << 12;
    let total = 1usize << n;
    let best = par::map_range(total.div_ceil(BLOCK), |blk| {
        let mut best: Option<(u32, u32)> = None;
        for mask in (blk * BLOCK)..((blk + 1) * BLOCK).min(total) {
            let size = mask.count_ones();
            if size == 0 || 2 * size as usize > n {
                continue;
            }
            let mask = mask as u32;
            let mut cut = 0;
            let mut rest = mask;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                cut += (adj[v] & !mask).count_ones();
            }
            // compare cut/size exactly by cross-multiplying
            if best.is_none_or(|(c, s)| (cut as u64) * (s as u64) < (c as u64) * (size as u64)) {
                best = Some((cut, size));
            }
        }
        best
    });
    let (c, s) = best
        .into_iter()
        .flatten()
        .min_by(|a, b| ((a.0 as u64) * (b.1 as u64)).cmp(&((b.0 as u64) * (a.1 as u64))))
        .expect("n >= 2 gives a non-empty candidate set");
    c as f64 / s as f64
}
