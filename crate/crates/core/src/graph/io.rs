//! Plain-text edge lists and their JSON metadata sidecar.
//!
//! The edge-list format is a header line `n m` followed by `m` lines `u v`.

use super::Graph;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphMetadata {
    pub generator: String,
    pub parameters: Vec<u64>,
    pub seed: u64,
    pub declared_degree: Option<usize>,
}

pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", g.vertex_count(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

pub fn read_edge_list<R: BufRead>(input: R) -> Result<Graph> {
    let mut lines = input.lines().enumerate();
    let parse_pair = |line: usize, text: &str| -> Result<(usize, usize)> {
        let mut it = text.split_whitespace();
        let mut next = || -> Result<usize> {
            it.next()
                .ok_or_else(|| Error::Parse {
                    line,
                    message: "expected two integers".into(),
                })?
                .parse()
                .map_err(|e| Error::Parse {
                    line,
                    message: format!("{e}"),
                })
        };
        let a = next()?;
        let b = next()?;
        Ok((a, b))
    };
    let (n, m) = match lines.next() {
        Some((i, line)) => parse_pair(i + 1, &line?)?,
        None => {
            return Err(Error::Parse {
                line: 1,
                message: "missing header".into(),
            })
        }
    };
    let mut edges = Vec::with_capacity(m);
    for (i, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        edges.push(parse_pair(i + 1, &line)?);
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: edges.len() + 2,
            message: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    Graph::from_edges_multi(n, &edges)
}

/// Sidecar path for an edge-list file: `graph.txt` -> `graph.json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("json")
}

pub fn save(g: &Graph, meta: &GraphMetadata, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    write_edge_list(g, &mut w)?;
    w.flush()?;
    let json = serde_json::to_string_pretty(meta)?;
    std::fs::write(sidecar_path(path), json + "\n")?;
    Ok(())
}

pub fn load(path: &Path) -> Result<(Graph, Option<GraphMetadata>)> {
    let file = std::fs::File::open(path)?;
    let g = read_edge_list(std::io::BufReader::new(file))?;
    let side = sidecar_path(path);
    let meta = if side.exists() && side != path {
        Some(serde_json::from_str(&std::fs::read_to_string(side)?)?)
    } else {
        None
    };
    Ok((g, meta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::cycle;

    #[test]
    fn text_format_is_exact() {
        let g = cycle(3);
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "3 3\n0 1\n1 2\n0 2\n");
        assert_eq!(read_edge_list(&buf[..]).unwrap(), g);
    }

    #[test]
    fn parse_errors_carry_line() {
        let err = read_edge_list(&b"2 1\n0 x\n"[..]).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = read_edge_list(&b"2 2\n0 1\n"[..]).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }
}
