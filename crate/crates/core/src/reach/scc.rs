use crate::graph_io::EdgeList;

/// Strongly connected components of a graph and its condensation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condensation {
    /// Component index of every original vertex. Components are numbered in
    /// order of their smallest member.
    pub comp: Vec<usize>,
    /// Sorted members of each component.
    pub members: Vec<Vec<u64>>,
    /// Deduplicated edges between components, without self-loops.
    pub dag: EdgeList,
}

impl Condensation {
    /// Smallest member id, used as the component's vertex id.
    pub fn rep(&self, c: usize) -> u64 {
        self.members[c][0]
    }
}

/// Tarjan's algorithm, iterative.
pub fn condense(g: &EdgeList) -> Condensation {
    let n = g.n;
    let adj = g.out_adj();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut raw: Vec<Vec<u64>> = Vec::new();
    let mut next = 0;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        // (vertex, next child position)
        let mut call = vec![(root, 0usize)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if let Some(&w) = adj[v].get(*i) {
                *i += 1;
                let w = w as usize;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(p, _)) = call.last() {
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut c = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        c.push(w as u64);
                        if w == v {
                            break;
                        }
                    }
                    c.sort_unstable();
                    raw.push(c);
                }
            }
        }
    }
    raw.sort_by_key(|c| c[0]);
    let mut comp = vec![0; n];
    for (i, c) in raw.iter().enumerate() {
        for &v in c {
            comp[v as usize] = i;
        }
    }
    let mut edges: Vec<(u64, u64)> = g
        .edges
        .iter()
        .map(|&(u, v)| (comp[u as usize] as u64, comp[v as usize] as u64))
        .filter(|(a, b)| a != b)
        .collect();
    edges.sort_unstable();
    edges.dedup();
    Condensation { comp, dag: EdgeList::new(raw.len(), edges), members: raw }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dag_maps_to_itself() {
        let g = EdgeList::new(3, vec![(0, 1), (1, 2)]);
        let c = condense(&g);
        assert_eq!(c.comp, [0, 1, 2]);
        assert_eq!(c.dag.edges, g.edges);
    }

    #[test]
    fn cycle_collapses() {
        let g = EdgeList::new(5, vec![(1, 2), (2, 3), (3, 1), (0, 1), (3, 4)]);
        let c = condense(&g);
        assert_eq!(c.members, [vec![0], vec![1, 2, 3], vec![4]]);
        assert_eq!(c.dag.edges, [(0, 1), (1, 2)]);
        assert_eq!(c.rep(1), 1);
    }
}
