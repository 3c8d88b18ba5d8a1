use super::{check_p, UnionFind};
use crate::error::{Error, Result};
use crate::graph::{Graph, RootedBall};
use crate::par;

pub const ORACLE_EDGE_LIMIT: usize = 20;

/// Events the exhaustive oracle can evaluate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleEvent {
    /// `root` is joined by an open path to some vertex of `boundary`.
    RootToBoundary { root: usize, boundary: Vec<usize> },
    /// Some open cluster has at least `k` vertices.
    LargestAtLeast(usize),
}

impl OracleEvent {
    /// Root-to-sphere event of a rooted ball.
    pub fn root_to_boundary(b: &RootedBall) -> Self {
        OracleEvent::RootToBoundary {
            root: b.root(),
            boundary: b.boundary().iter().collect(),
        }
    }

    fn holds(&self, uf: &mut UnionFind) -> bool {
        match self {
            OracleEvent::RootToBoundary { root, boundary } => {
                let r = uf.find(*root);
                boundary.iter().any(|&v| uf.find(v) == r)
            }
            OracleEvent::LargestAtLeast(k) => (0..uf.len()).any(|v| uf.set_size(v) >= *k),
        }
    }
}

/// Exact probability of `event` at bond parameter `p`, summed over all
/// `2^m` edge configurations.
pub fn exhaustive_oracle(g: &Graph, p: f64, event: &OracleEvent) -> Result<f64> {
    check_p("p", p)?;
    let m = g.edge_count();
    if m > ORACLE_EDGE_LIMIT {
        return Err(Error::TooLarge {
            what: "exhaustive oracle edge count",
            size: m,
            limit: ORACLE_EDGE_LIMIT,
        });
    }
    if let OracleEvent::RootToBoundary { root, boundary } = event {
        g.check_vertex(*root)?;
        for &v in boundary {
            g.check_vertex(v)?;
        }
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    Ok(par::sum_range(1 << m, |mask| {
        let mut uf = UnionFind::new(g.vertex_count());
        for (e, &(u, v)) in edges.iter().enumerate() {
            if mask >> e & 1 == 1 {
                uf.union(u, v);
            }
        }
        if !event.holds(&mut uf) {
            return 0.0;
        }
        let open = mask.count_ones() as i32;
        p.powi(open) * (1.0 - p).powi(m as i32 - open)
    }))
}
