//! Plain edge lists and line-file helpers.

use std::fs::File;
use std::io::{self, BufRead, BufWriter, Write};
use std::path::Path;

use crate::error::EngineError;

/// A graph over vertices `0..n` given by its edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<(u64, u64)>,
}

impl EdgeList {
    pub fn new(n: usize, edges: Vec<(u64, u64)>) -> Self {
        EdgeList { n, edges }
    }

    /// Sorted, deduplicated out-neighbor lists.
    pub fn out_adj(&self) -> Vec<Vec<u64>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        adj
    }

    pub fn in_adj(&self) -> Vec<Vec<u64>> {
        self.reversed().out_adj()
    }

    /// Neighbor lists with every edge taken in both directions.
    pub fn undirected_adj(&self) -> Vec<Vec<u64>> {
        let mut both = self.clone();
        both.edges.extend(self.edges.iter().map(|&(u, v)| (v, u)));
        both.out_adj()
    }

    pub fn reversed(&self) -> EdgeList {
        EdgeList { n: self.n, edges: self.edges.iter().map(|&(u, v)| (v, u)).collect() }
    }
}

/// Reads `u v` lines; the vertex count is one more than the largest id.
pub fn read_edge_list(reader: impl BufRead) -> Result<EdgeList, EngineError> {
    let mut edges = Vec::new();
    let mut n = 0;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace().map(str::parse::<u64>);
        match (it.next(), it.next()) {
            (Some(Ok(u)), Some(Ok(v))) => {
                n = n.max(u.max(v) as usize + 1);
                edges.push((u, v));
            }
            _ => return Err(EngineError::Parse { line: i + 1, message: format!("expected `u v`, got {line:?}") }),
        }
    }
    Ok(EdgeList { n, edges })
}

pub fn write_lines<S: AsRef<str>>(path: impl AsRef<Path>, lines: impl IntoIterator<Item = S>) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for l in lines {
        writeln!(out, "{}", l.as_ref())?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacency_is_deduplicated() {
        let g = EdgeList::new(3, vec![(0, 1), (0, 1), (2, 0)]);
        assert_eq!(g.out_adj(), vec![vec![1], vec![], vec![0]]);
        assert_eq!(g.in_adj(), vec![vec![2], vec![0], vec![]]);
        assert_eq!(g.undirected_adj(), vec![vec![1, 2], vec![0], vec![0]]);
    }

    #[test]
    fn edge_list_reports_bad_line() {
        let err = read_edge_list("0 1\n# c\n\n2 x\n".as_bytes()).unwrap_err();
        assert!(matches!(err, EngineError::Parse { line: 4, .. }));
        let g = read_edge_list("0 1\n3 2\n".as_bytes()).unwrap();
        assert_eq!(g.n, 4);
    }
}
