//! Graph families: regular tree balls, random regular graphs, tori, slabs,
//! triangular tori and Cayley balls of `Z * Z * Z_k`.

mod free_product;
mod lattice;
mod regular;
mod tree;

pub use free_product::{free_product_ball, free_product_ball_capped, free_product_ball_keyed, Word, DEFAULT_BALL_CAP};
pub use lattice::{slab, slab_faces, torus, triangular_torus};
pub use regular::{random_regular, random_regular_with_cap, DEFAULT_MAX_ATTEMPTS};
pub use tree::tree_ball;

use crate::error::{Error, Result};
use crate::graph::io::GraphMetadata;
use crate::graph::{Graph, RootedBall};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    TreeBall,
    RandomRegular,
    Torus,
    Slab,
    TriangularTorus,
    FreeProductBall,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::TreeBall => "tree_ball",
            Family::RandomRegular => "random_regular",
            Family::Torus => "torus",
            Family::Slab => "slab",
            Family::TriangularTorus => "triangular_torus",
            Family::FreeProductBall => "free_product_ball",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        [
            Family::TreeBall,
            Family::RandomRegular,
            Family::Torus,
            Family::Slab,
            Family::TriangularTorus,
            Family::FreeProductBall,
        ]
        .into_iter()
        .find(|f| f.name() == name)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A named graph family with its integer parameters.
///
/// | family              | parameters              |
/// |---------------------|-------------------------|
/// | `tree_ball`         | `[d, R]`                |
/// | `random_regular`    | `[n, d]` (uses `seed`)  |
/// | `torus`             | `[side, side, ...]`     |
/// | `slab`              | `[k, L, side, ...]`     |
/// | `triangular_torus`  | `[n]`                   |
/// | `free_product_ball` | `[k, R]`                |
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub parameters: Vec<u64>,
    #[serde(default)]
    pub seed: u64,
}

/// Generator output: a plain graph or a rooted ball.
#[derive(Clone, Debug)]
pub enum Generated {
    Graph(Graph),
    Ball(RootedBall),
}

impl Generated {
    pub fn graph(&self) -> &Graph {
        match self {
            Generated::Graph(g) => g,
            Generated::Ball(b) => b.graph(),
        }
    }

    pub fn ball(&self) -> Option<&RootedBall> {
        match self {
            Generated::Ball(b) => Some(b),
            Generated::Graph(_) => None,
        }
    }

    pub fn into_graph(self) -> Graph {
        match self {
            Generated::Graph(g) => g,
            Generated::Ball(b) => b.graph().clone(),
        }
    }
}

impl GeneratorSpec {
    pub fn new(family: Family, parameters: impl Into<Vec<u64>>, seed: u64) -> Self {
        GeneratorSpec {
            family,
            parameters: parameters.into(),
            seed,
        }
    }

    fn p(&self, i: usize) -> usize {
        self.parameters[i] as usize
    }

    /// Every violated precondition, each naming the generator it belongs to.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let fam = self.family.name();
        let ps = &self.parameters;
        let want = |n: usize, out: &mut Vec<String>| {
            if ps.len() != n {
                out.push(format!("generators.{fam}: expected {n} parameters, got {}", ps.len()));
                false
            } else {
                true
            }
        };
        match self.family {
            Family::TreeBall => {
                if want(2, &mut out) && ps[0] < 3 {
                    out.push(format!("generators.tree_ball: d must be >= 3 (got {})", ps[0]));
                }
            }
            Family::RandomRegular => {
                if want(2, &mut out) {
                    let (n, d) = (ps[0], ps[1]);
                    if d < 3 {
                        out.push(format!("generators.random_regular: d must be >= 3 (got {d})"));
                    }
                    if n <= d {
                        out.push(format!("generators.random_regular: n must exceed d (n={n}, d={d})"));
                    }
                    if (n * d) % 2 != 0 {
                        out.push(format!("generators.random_regular: n*d must be even (n={n}, d={d})"));
                    }
                }
            }
            Family::Torus => {
                if ps.is_empty() {
                    out.push("generators.torus: at least one side required".into());
                }
                for &s in ps {
                    if s < 3 {
                        out.push(format!("generators.torus: side must be >= 3 (got {s})"));
                    }
                }
            }
            Family::Slab => {
                if ps.len() < 2 {
                    out.push("generators.slab: expected [k, L, sides...]".into());
                } else {
                    if ps[0] < 1 {
                        out.push(format!("generators.slab: k must be >= 1 (got {})", ps[0]));
                    }
                    if ps[1] < 2 {
                        out.push(format!("generators.slab: L must be >= 2 (got {})", ps[1]));
                    }
                    for &s in &ps[2..] {
                        if s < 1 {
                            out.push(format!("generators.slab: periodic side must be >= 1 (got {s})"));
                        }
                    }
                }
            }
            Family::TriangularTorus => {
                if want(1, &mut out) && ps[0] < 3 {
                    out.push(format!("generators.triangular_torus: n must be >= 3 (got {})", ps[0]));
                }
            }
            Family::FreeProductBall => {
                if want(2, &mut out) && ps[0] < 3 {
                    out.push(format!("generators.free_product_ball: k must be >= 3 (got {})", ps[0]));
                }
            }
        }
        out
    }

    pub fn generate(&self) -> Result<Generated> {
        if let Some(first) = self.violations().into_iter().next() {
            return Err(Error::InvalidParameter {
                name: "parameters",
                reason: first,
            });
        }
        Ok(match self.family {
            Family::TreeBall => Generated::Ball(tree_ball(self.p(0), self.p(1))?),
            Family::RandomRegular => Generated::Graph(random_regular(self.p(0), self.p(1), self.seed)?),
            Family::Torus => {
                let sides: Vec<usize> = self.parameters.iter().map(|&s| s as usize).collect();
                Generated::Graph(torus(&sides)?)
            }
            Family::Slab => {
                let sides: Vec<usize> = self.parameters[2..].iter().map(|&s| s as usize).collect();
                Generated::Graph(slab(self.p(0), self.p(1), &sides)?)
            }
            Family::TriangularTorus => Generated::Graph(triangular_torus(self.p(0))?),
            Family::FreeProductBall => Generated::Ball(free_product_ball(self.p(0), self.p(1))?),
        })
    }

    /// Degree of the infinite (or periodic) graph the family models.
    pub fn declared_degree(&self) -> Option<usize> {
        match self.family {
            Family::TreeBall => Some(self.p(0)),
            Family::RandomRegular => Some(self.p(1)),
            Family::Torus => Some(2 * self.parameters.len()),
            Family::Slab => {
                let periodic: usize = self.parameters[2..]
                    .iter()
                    .map(|&s| match s {
                        1 => 0,
                        2 => 1,
                        _ => 2,
                    })
                    .sum();
                Some(2 * self.p(0) + periodic)
            }
            Family::TriangularTorus => Some(6),
            Family::FreeProductBall => Some(6),
        }
    }

    pub fn metadata(&self) -> GraphMetadata {
        GraphMetadata {
            generator: self.family.name().to_string(),
            parameters: self.parameters.clone(),
            seed: self.seed,
            declared_degree: self.declared_degree(),
        }
    }

    pub fn from_metadata(meta: &GraphMetadata) -> Result<Self> {
        let family = Family::parse(&meta.generator)
            .ok_or_else(|| Error::param("generator", format!("unknown family `{}`", meta.generator)))?;
        Ok(GeneratorSpec::new(family, meta.parameters.clone(), meta.seed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_round_trips_through_metadata() {
        let spec = GeneratorSpec::new(Family::RandomRegular, vec![10, 3], 99);
        let meta = spec.metadata();
        assert_eq!(meta.declared_degree, Some(3));
        let json = serde_json::to_string(&meta).unwrap();
        let back: GraphMetadata = serde_json::from_str(&json).unwrap();
        assert_eq!(GeneratorSpec::from_metadata(&back).unwrap(), spec);
    }

    #[test]
    fn violations_name_the_generator() {
        let bad = GeneratorSpec::new(Family::Torus, vec![2, 5], 0);
        let v = bad.violations();
        assert_eq!(v.len(), 1);
        assert!(v[0].starts_with("generators.torus"));
        assert!(bad.generate().is_err());
        let odd = GeneratorSpec::new(Family::RandomRegular, vec![5, 3], 0);
        assert!(odd.violations()[0].contains("even"));
    }

    #[test]
    fn declared_degree_matches_measured() {
        let specs = [
            GeneratorSpec::new(Family::TreeBall, vec![4, 3], 0),
            GeneratorSpec::new(Family::RandomRegular, vec![20, 4], 3),
            GeneratorSpec::new(Family::Torus, vec![4, 5, 3], 0),
            GeneratorSpec::new(Family::Slab, vec![2, 6, 4], 0),
            GeneratorSpec::new(Family::Slab, vec![1, 5, 2], 0),
            GeneratorSpec::new(Family::TriangularTorus, vec![5], 0),
            GeneratorSpec::new(Family::FreeProductBall, vec![5, 3], 0),
        ];
        for spec in specs {
            let out = spec.generate().unwrap();
            let g = out.graph();
            let d = spec.declared_degree().unwrap();
            let total: usize = (0..g.vertex_count()).map(|v| g.degree(v)).sum();
            assert_eq!(total, 2 * g.edge_count());
            assert_eq!(g.max_degree(), d, "{spec:?}");
            if let Some(b) = out.ball() {
                assert_eq!(b.interior_degree(), Some(d));
            }
        }
    }
}
