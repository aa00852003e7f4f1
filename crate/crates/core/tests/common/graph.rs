use std::collections::VecDeque;

/// Hop distance from `s` to `t` by queue-based BFS over `adj`.
pub fn bfs_dist(adj: &[Vec<u64>], s: usize, t: usize) -> Option<u32> {
    bfs_all(adj, s)[t]
}

pub fn bfs_all(adj: &[Vec<u64>], s: usize) -> Vec<Option<u32>> {
    let mut dist = vec![None; adj.len()];
    dist[s] = Some(0);
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        let d = dist[u].unwrap();
        for &v in &adj[u] {
            if dist[v as usize].is_none() {
                dist[v as usize] = Some(d + 1);
                q.push_back(v as usize);
            }
        }
    }
    dist
}

/// Boolean transitive closure by repeated BFS.
pub fn closure(adj: &[Vec<u64>]) -> Vec<Vec<bool>> {
    (0..adj.len()).map(|s| bfs_all(adj, s).into_iter().map(|d| d.is_some()).collect()).collect()
}
