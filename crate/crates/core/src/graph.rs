//! Small graph algorithms over adjacency lists: reachability, SCCs,
//! shortest paths with negative-cycle detection.

use std::collections::VecDeque;

use petgraph::graph::{DiGraph, NodeIndex};

/// Nodes reachable from `from` (inclusive) following `adj`, restricted to `allowed`.
pub fn reachable(adj: &[Vec<usize>], from: usize, allowed: impl Fn(usize) -> bool) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    if !allowed(from) {
        return seen;
    }
    seen[from] = true;
    let mut stack = vec![from];
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] && allowed(v) {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}

/// Shortest (fewest edges) path from `from` to a node satisfying `goal`,
/// moving only through `allowed` nodes. The path includes both endpoints and
/// has at least one edge when `nonempty` is set.
pub fn bfs_path(
    adj: &[Vec<usize>],
    from: usize,
    goal: impl Fn(usize) -> bool,
    allowed: impl Fn(usize) -> bool,
    nonempty: bool,
) -> Option<Vec<usize>> {
    if !nonempty && goal(from) {
        return Some(vec![from]);
    }
    let mut pred = vec![usize::MAX; adj.len()];
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::new();
    queue.push_back(from);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !allowed(v) || seen[v] {
                continue;
            }
            seen[v] = true;
            pred[v] = u;
            if goal(v) {
                let mut path = vec![v];
                let mut cur = u;
                loop {
                    path.push(cur);
                    if cur == from && path.len() >= 2 {
                        break;
                    }
                    cur = pred[cur];
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(v);
        }
    }
    None
}

/// Strongly connected components of the subgraph induced by `allowed`.
pub fn sccs(adj: &[Vec<usize>], allowed: impl Fn(usize) -> bool) -> Vec<Vec<usize>> {
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(adj.len(), 0);
    let idx: Vec<NodeIndex> = (0..adj.len()).map(|_| g.add_node(())).collect();
    for (u, succ) in adj.iter().enumerate() {
        if !allowed(u) {
            continue;
        }
        for &v in succ {
            if allowed(v) {
                g.add_edge(idx[u], idx[v], ());
            }
        }
    }
    petgraph::algo::tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut c: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
            c.sort_unstable();
            c
        })
        .filter(|c| allowed(c[0]))
        .collect()
}

/// Whether an SCC contains a cycle (more than one node, or a self-loop).
pub fn is_nontrivial(adj: &[Vec<usize>], scc: &[usize]) -> bool {
    scc.len() > 1 || adj[scc[0]].contains(&scc[0])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortestPaths {
    /// Minimal path weight from the source, `None` when unreachable.
    pub dist: Vec<Option<i128>>,
    pred: Vec<usize>,
    /// A reachable cycle of negative total weight, as a node sequence
    /// `c0 c1 … c_{n-1}` (closing edge `c_{n-1} → c0` implied).
    pub negative_cycle: Option<Vec<usize>>,
}

impl ShortestPaths {
    /// The recorded shortest path from the source to `v`.
    pub fn path_to(&self, v: usize) -> Option<Vec<usize>> {
        self.dist[v]?;
        let mut path = vec![v];
        let mut cur = v;
        while self.pred[cur] != usize::MAX {
            cur = self.pred[cur];
            path.push(cur);
            if path.len() > self.pred.len() {
                return None;
            }
        }
        path.reverse();
        Some(path)
    }
}

/// Bellman-Ford from `source` over weighted edges `(u, v, w)`.
pub fn bellman_ford(n: usize, edges: &[(usize, usize, i64)], source: usize) -> ShortestPaths {
    let mut dist: Vec<Option<i128>> = vec![None; n];
    let mut pred = vec![usize::MAX; n];
    dist[source] = Some(0);
    let mut last_relaxed = None;
    for _ in 0..n {
        last_relaxed = None;
        for &(u, v, w) in edges {
            if let Some(du) = dist[u] {
                let cand = du + w as i128;
                if dist[v].is_none_or(|dv| cand < dv) {
                    dist[v] = Some(cand);
                    pred[v] = u;
                    last_relaxed = Some(v);
                }
            }
        }
        if last_relaxed.is_none() {
            break;
        }
    }
    let negative_cycle = last_relaxed.map(|v| {
        let mut x = v;
        for _ in 0..n {
            x = pred[x];
        }
        let mut cycle = vec![x];
        let mut y = pred[x];
        while y != x {
            cycle.push(y);
            y = pred[y];
        }
        cycle.reverse();
        cycle
    });
    ShortestPaths {
        dist,
        pred,
        negative_cycle,
    }
}
