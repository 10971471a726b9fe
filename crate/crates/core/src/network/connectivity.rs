//! Vertex and edge connectivity, capped at a small `k_max`.
//!
//! Both routines first settle the cheap cases (disconnected graph, minimum
//! degree, cut vertices or bridges) and only then fall back to max flow.
//!
//! The flow phase follows Even's scheme: `kappa(G)` is the minimum of the
//! local connectivities `kappa(x, y)` over sources `x` taken from any
//! `kappa + 1` vertices and all non-adjacent targets `y`. Most targets never
//! need a flow. Walking targets in BFS order from `x`, a target with at
//! least `c` neighbors already known to be unseparable from `x` by fewer
//! than `c` vertices cannot be separated from `x` either: every such
//! separator would have to contain all of those neighbors. The same
//! argument with edges instead of vertices prunes the edge-connectivity
//! targets.

use std::collections::VecDeque;

use super::flow::UnitFlow;
use super::NetworkSample;

/// `min(kappa(G), k_max)`.
///
/// Disconnected graphs give 0 and complete graphs `min(n - 1, k_max)`.
pub fn vertex_connectivity(sample: &NetworkSample, k_max: u32) -> u32 {
    vertex_connectivity_adj(sample.adjacency(), k_max)
}

/// `min(lambda(G), k_max)`. Disconnected graphs give 0; a single node gives `k_max`.
pub fn edge_connectivity(sample: &NetworkSample, k_max: u32) -> u32 {
    edge_connectivity_adj(sample.adjacency(), k_max, 0)
}

pub(crate) fn is_connected(adj: &[Vec<u32>]) -> bool {
    let n = adj.len();
    if n == 0 {
        return true;
    }
    bfs_order(adj, 0).len() == n
}

fn bfs_order(adj: &[Vec<u32>], root: usize) -> Vec<u32> {
    let mut seen = vec![false; adj.len()];
    let mut order = Vec::with_capacity(adj.len());
    let mut queue = VecDeque::new();
    seen[root] = true;
    queue.push_back(root as u32);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &v in &adj[u as usize] {
            if !seen[v as usize] {
                seen[v as usize] = true;
                queue.push_back(v);
            }
        }
    }
    order
}

/// Whether the graph has a cut vertex and whether it has a bridge.
/// Iterative low-link DFS over every component.
pub(crate) fn cut_vertex_and_bridge(adj: &[Vec<u32>]) -> (bool, bool) {
    let n = adj.len();
    const UNSEEN: u32 = u32::MAX;
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut parent = vec![u32::MAX; n];
    let mut next_edge = vec![0usize; n];
    let mut timer = 0u32;
    let (mut cut_vertex, mut bridge) = (false, false);
    let mut stack: Vec<u32> = Vec::new();

    for root in 0..n {
        if disc[root] != UNSEEN {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        let mut root_children = 0;
        stack.push(root as u32);
        while let Some(&u) = stack.last() {
            let u = u as usize;
            if next_edge[u] < adj[u].len() {
                let v = adj[u][next_edge[u]] as usize;
                next_edge[u] += 1;
                if disc[v] == UNSEEN {
                    parent[v] = u as u32;
                    disc[v] = timer;
                    low[v] = timer;
                    timer += 1;
                    if u == root {
                        root_children += 1;
                    }
                    stack.push(v as u32);
                } else if v as u32 != parent[u] {
                    low[u] = low[u].min(disc[v]);
                }
            } else {
                stack.pop();
                let p = parent[u];
                if p != u32::MAX {
                    let p = p as usize;
                    low[p] = low[p].min(low[u]);
                    if low[u] > disc[p] {
                        bridge = true;
                    }
                    if p != root && low[u] >= disc[p] {
                        cut_vertex = true;
                    }
                }
            }
        }
        if root_children > 1 {
            cut_vertex = true;
        }
    }
    (cut_vertex, bridge)
}

fn min_degree(adj: &[Vec<u32>]) -> usize {
    adj.iter().map(Vec::len).min().unwrap_or(0)
}

pub(crate) fn vertex_connectivity_adj(adj: &[Vec<u32>], k_max: u32) -> u32 {
    let n = adj.len();
    if n <= 1 {
        return 0;
    }
    let delta = min_degree(adj);
    if delta == n - 1 {
        return (n as u32 - 1).min(k_max);
    }
    if !is_connected(adj) {
        return 0;
    }
    let mut bound = (delta as u32).min(k_max);
    if bound <= 1 {
        return bound;
    }
    if cut_vertex_and_bridge(adj).0 {
        return 1;
    }
    // no cut vertex: kappa >= 2
    const KNOWN: u32 = 2;
    if bound <= KNOWN {
        return bound;
    }

    let mut net = UnitFlow::vertex_split(adj);
    let mut verified = vec![false; n];
    let mut source = 0;
    while source <= bound as usize && source < n {
        verified.fill(false);
        verified[source] = true;
        for &v in &adj[source] {
            verified[v as usize] = true;
        }
        for y in bfs_order(adj, source) {
            let y = y as usize;
            if verified[y] {
                continue;
            }
            let backed = adj[y]
                .iter()
                .filter(|&&w| verified[w as usize])
                .take(bound as usize)
                .count();
            if backed < bound as usize {
                let paths = net.vertex_disjoint_paths(source, y, bound);
                if paths < bound {
                    bound = paths;
                    if bound <= KNOWN {
                        return bound;
                    }
                }
            }
            verified[y] = true;
        }
        source += 1;
    }
    bound
}

/// `lower` is a known lower bound on `lambda` (for instance `kappa`).
pub(crate) fn edge_connectivity_adj(adj: &[Vec<u32>], k_max: u32, lower: u32) -> u32 {
    let n = adj.len();
    if n <= 1 {
        return k_max;
    }
    if !is_connected(adj) {
        return 0;
    }
    let mut bound = (min_degree(adj) as u32).min(k_max);
    let mut lower = lower.max(1);
    if bound <= lower {
        return bound;
    }
    if cut_vertex_and_bridge(adj).1 {
        return 1;
    }
    lower = lower.max(2);
    if bound <= lower {
        return bound;
    }

    let mut net = UnitFlow::undirected(adj);
    let source = 0;
    let mut verified = vec![false; n];
    verified[source] = true;
    for t in bfs_order(adj, source).into_iter().skip(1) {
        let t = t as usize;
        let backed = adj[t]
            .iter()
            .filter(|&&w| verified[w as usize])
            .take(bound as usize)
            .count();
        if backed < bound as usize {
            let paths = net.edge_disjoint_paths(source, t, bound);
            if paths < bound {
                bound = paths;
                if bound <= lower {
                    return bound;
                }
            }
        }
        verified[t] = true;
    }
    bound
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, edges: &[(usize, usize)]) -> NetworkSample {
        NetworkSample::from_edges(n, edges).unwrap()
    }

    fn cycle(n: usize) -> NetworkSample {
        g(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
    }

    fn complete(n: usize) -> NetworkSample {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j));
            }
        }
        g(n, &e)
    }

    #[test]
    fn small_named_graphs() {
        assert_eq!(vertex_connectivity(&cycle(5), 5), 2);
        assert_eq!(vertex_connectivity(&g(4, &[(0, 1), (1, 2), (2, 3)]), 5), 1);
        assert_eq!(vertex_connectivity(&complete(4), 5), 3);
        assert_eq!(edge_connectivity(&cycle(5), 5), 2);
        assert_eq!(
            edge_connectivity(&g(5, &[(0, 1), (0, 2), (2, 3), (2, 4)]), 5),
            1
        );
    }

    #[test]
    fn degenerate_cases() {
        assert_eq!(vertex_connectivity(&g(1, &[]), 5), 0);
        assert_eq!(edge_connectivity(&g(1, &[]), 5), 5);
        assert_eq!(vertex_connectivity(&complete(8), 5), 5);
        assert_eq!(vertex_connectivity(&complete(2), 5), 1);
        assert_eq!(edge_connectivity(&complete(2), 5), 1);
        let two_triangles = g(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
        assert_eq!(vertex_connectivity(&two_triangles, 5), 0);
        assert_eq!(edge_connectivity(&two_triangles, 5), 0);
    }

    #[test]
    fn cliques_sharing_a_vertex() {
        // high minimum degree, kappa = 1, lambda = min degree
        let mut e = Vec::new();
        for base in [0usize, 5] {
            for i in 0..6 {
                for j in i + 1..6 {
                    e.push((base + i, base + j));
                }
            }
        }
        let s = g(11, &e);
        assert_eq!(s.min_degree(), 5);
        assert_eq!(vertex_connectivity(&s, 5), 1);
        assert_eq!(edge_connectivity(&s, 5), 5);
    }

    #[test]
    fn cubes_and_wheels() {
        // 3-cube: kappa = lambda = 3
        let mut e = Vec::new();
        for v in 0..8usize {
            for b in 0..3 {
                let w = v ^ (1 << b);
                if v < w {
                    e.push((v, w));
                }
            }
        }
        let cube = g(8, &e);
        assert_eq!(vertex_connectivity(&cube, 5), 3);
        assert_eq!(edge_connectivity(&cube, 5), 3);
        // wheel on 7 vertices: kappa = 3
        let mut w: Vec<_> = (1..7).map(|i| (0, i)).collect();
        w.extend((1..7).map(|i| (i, i % 6 + 1)));
        assert_eq!(vertex_connectivity(&g(7, &w), 5), 3);
    }

    #[test]
    fn two_k4_joined_by_two_disjoint_edges() {
        let mut e = Vec::new();
        for base in [0usize, 4] {
            for i in 0..4 {
                for j in i + 1..4 {
                    e.push((base + i, base + j));
                }
            }
        }
        e.push((0, 4));
        e.push((1, 5));
        let s = g(8, &e);
        assert_eq!(vertex_connectivity(&s, 5), 2);
        assert_eq!(edge_connectivity(&s, 5), 2);
    }

    #[test]
    fn cut_vertices_and_bridges() {
        assert_eq!(cut_vertex_and_bridge(cycle(5).adjacency()), (false, false));
        assert_eq!(
            cut_vertex_and_bridge(g(3, &[(0, 1), (1, 2)]).adjacency()),
            (true, true)
        );
        let bowtie = g(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]);
        assert_eq!(cut_vertex_and_bridge(bowtie.adjacency()), (true, false));
        assert_eq!(
            cut_vertex_and_bridge(g(2, &[(0, 1)]).adjacency()),
            (false, true)
        );
    }
}
