/// DAG of the labeling figures. DFS from the ascending roots 0, 5, 6, 10
/// numbers every vertex with pre = id.
pub const FIG_EDGES: [(u64, u64); 12] =
    [(0, 1), (0, 4), (1, 2), (1, 3), (5, 4), (6, 7), (7, 8), (8, 9), (9, 3), (10, 7), (10, 11), (11, 9)];

pub const FIG_N: usize = 12;

/// Longest hop count from any root, by relaxation in topological order.
pub fn longest_levels(adj: &[Vec<u64>]) -> Vec<u32> {
    let n = adj.len();
    let mut indeg = vec![0usize; n];
    for outs in adj {
        for &v in outs {
            indeg[v as usize] += 1;
        }
    }
    let mut order: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        i += 1;
        for &v in &adj[u] {
            indeg[v as usize] -= 1;
            if indeg[v as usize] == 0 {
                order.push(v as usize);
            }
        }
    }
    assert_eq!(order.len(), n, "not a DAG");
    let mut level = vec![0u32; n];
    for &u in &order {
        for &v in &adj[u] {
            level[v as usize] = level[v as usize].max(level[u] + 1);
        }
    }
    level
}
