use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("graph has a cycle through vertex {0}")]
pub struct NotADag(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DfsNumbering {
    pub pre: Vec<u32>,
    pub post: Vec<u32>,
    pub parent: Vec<Option<usize>>,
}

impl DfsNumbering {
    /// Forest-ancestor test by interval nesting.
    pub fn is_ancestor(&self, u: usize, v: usize) -> bool {
        self.pre[u] <= self.pre[v] && self.post[v] <= self.post[u]
    }
}

/// DFS forest of a DAG: roots are the zero in-degree vertices in ascending
/// order and children are visited in ascending order.
pub fn dfs_number(adj: &[Vec<u64>]) -> Result<DfsNumbering, NotADag> {
    let n = adj.len();
    let mut indeg = vec![0usize; n];
    for a in adj {
        for &v in a {
            indeg[v as usize] += 1;
        }
    }
    let mut sorted: Vec<Vec<usize>> = adj.iter().map(|a| a.iter().map(|&v| v as usize).collect()).collect();
    for a in &mut sorted {
        a.sort_unstable();
        a.dedup();
    }
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Gray,
        Black,
    }
    let mut mark = vec![Mark::White; n];
    let mut pre = vec![0; n];
    let mut post = vec![0; n];
    let mut parent = vec![None; n];
    let (mut next_pre, mut next_post) = (0u32, 0u32);
    for root in (0..n).filter(|&v| indeg[v] == 0) {
        mark[root] = Mark::Gray;
        pre[root] = next_pre;
        next_pre += 1;
        let mut call = vec![(root, 0usize)];
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if let Some(&w) = sorted[v].get(*i) {
                *i += 1;
                match mark[w] {
                    Mark::White => {
                        mark[w] = Mark::Gray;
                        parent[w] = Some(v);
                        pre[w] = next_pre;
                        next_pre += 1;
                        call.push((w, 0));
                    }
                    Mark::Gray => return Err(NotADag(w)),
                    Mark::Black => {}
                }
            } else {
                mark[v] = Mark::Black;
                post[v] = next_post;
                next_post += 1;
                call.pop();
            }
        }
    }
    // anything unvisited sits on a cycle with no entry from a root
    if let Some(v) = mark.iter().position(|&m| m != Mark::Black) {
        return Err(NotADag(v));
    }
    Ok(DfsNumbering { pre, post, parent })
}
