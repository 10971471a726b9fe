//! Unit-capacity augmenting-path max flow, capped at a target value.
//!
//! Two residual networks are built once per graph and reused across many
//! source/sink pairs: a vertex-split network for internally vertex-disjoint
//! paths and a plain undirected network for edge-disjoint paths. Only arcs
//! touched by a flow computation are restored afterwards.

use std::collections::VecDeque;

pub(crate) struct UnitFlow {
    first: Vec<u32>,
    arc_ids: Vec<u32>,
    head: Vec<u32>,
    initial: Vec<u8>,
    residual: Vec<u8>,
    touched: Vec<u32>,
    parent_arc: Vec<u32>,
    stamp: Vec<u32>,
    generation: u32,
    queue: VecDeque<u32>,
}

impl UnitFlow {
    fn from_arcs(n_nodes: usize, arcs: &[(u32, u32, u8, u8)]) -> Self {
        // arc 2k is (from -> to, cap), arc 2k+1 its reverse with cap_rev
        let mut head = Vec::with_capacity(2 * arcs.len());
        let mut initial = Vec::with_capacity(2 * arcs.len());
        let mut tail = Vec::with_capacity(2 * arcs.len());
        for &(u, v, cap, cap_rev) in arcs {
            head.push(v);
            tail.push(u);
            initial.push(cap);
            head.push(u);
            tail.push(v);
            initial.push(cap_rev);
        }
        let mut first = vec![0u32; n_nodes + 1];
        for &t in &tail {
            first[t as usize + 1] += 1;
        }
        for i in 0..n_nodes {
            first[i + 1] += first[i];
        }
        let mut fill = first.clone();
        let mut arc_ids = vec![0u32; tail.len()];
        for (a, &t) in tail.iter().enumerate() {
            arc_ids[fill[t as usize] as usize] = a as u32;
            fill[t as usize] += 1;
        }
        UnitFlow {
            first,
            arc_ids,
            head,
            residual: initial.clone(),
            initial,
            touched: Vec::new(),
            parent_arc: vec![u32::MAX; n_nodes],
            stamp: vec![0; n_nodes],
            generation: 0,
            queue: VecDeque::new(),
        }
    }

    /// Network whose `source -> sink` flows count internally vertex-disjoint paths.
    /// Vertex `v` becomes `in(v) = 2v -> out(v) = 2v + 1` with capacity one.
    pub(crate) fn vertex_split(adj: &[Vec<u32>]) -> Self {
        let n = adj.len();
        let mut arcs = Vec::with_capacity(n + adj.iter().map(Vec::len).sum::<usize>());
        for v in 0..n as u32 {
            arcs.push((2 * v, 2 * v + 1, 1, 0));
        }
        for (u, l) in adj.iter().enumerate() {
            for &v in l {
                arcs.push((2 * u as u32 + 1, 2 * v, 1, 0));
            }
        }
        Self::from_arcs(2 * n, &arcs)
    }

    /// Network whose flows count edge-disjoint paths of the undirected graph.
    pub(crate) fn undirected(adj: &[Vec<u32>]) -> Self {
        let mut arcs = Vec::new();
        for (u, l) in adj.iter().enumerate() {
            for &v in l {
                if (u as u32) < v {
                    arcs.push((u as u32, v, 1, 1));
                }
            }
        }
        Self::from_arcs(adj.len(), &arcs)
    }

    /// Number of vertex-disjoint paths between graph vertices `x` and `y`, at most `cap`.
    pub(crate) fn vertex_disjoint_paths(&mut self, x: usize, y: usize, cap: u32) -> u32 {
        self.max_flow(2 * x + 1, 2 * y, cap)
    }

    /// Number of edge-disjoint paths between `s` and `t`, at most `cap`.
    pub(crate) fn edge_disjoint_paths(&mut self, s: usize, t: usize, cap: u32) -> u32 {
        self.max_flow(s, t, cap)
    }

    fn max_flow(&mut self, source: usize, sink: usize, cap: u32) -> u32 {
        let mut flow = 0;
        while flow < cap && self.augment(source, sink) {
            flow += 1;
        }
        for &a in &self.touched {
            self.residual[a as usize] = self.initial[a as usize];
        }
        self.touched.clear();
        flow
    }

    fn next_generation(&mut self) -> u32 {
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.fill(0);
            self.generation = 1;
        }
        self.generation
    }

    /// One BFS augmenting path in the residual network.
    fn augment(&mut self, source: usize, sink: usize) -> bool {
        let gen = self.next_generation();
        self.queue.clear();
        self.stamp[source] = gen;
        self.queue.push_back(source as u32);
        let mut found = false;
        'bfs: while let Some(u) = self.queue.pop_front() {
            let u = u as usize;
            for k in self.first[u]..self.first[u + 1] {
                let a = self.arc_ids[k as usize] as usize;
                if self.residual[a] == 0 {
                    continue;
                }
                let v = self.head[a] as usize;
                if self.stamp[v] == gen {
                    continue;
                }
                self.stamp[v] = gen;
                self.parent_arc[v] = a as u32;
                if v == sink {
                    found = true;
                    break 'bfs;
                }
                self.queue.push_back(v as u32);
            }
        }
        if !found {
            return false;
        }
        let mut v = sink;
        while v != source {
            let a = self.parent_arc[v] as usize;
            self.residual[a] -= 1;
            self.residual[a ^ 1] += 1;
            self.touched.push(a as u32);
            self.touched.push((a ^ 1) as u32);
            v = self.head[a ^ 1] as usize;
        }
        true
    }
}
