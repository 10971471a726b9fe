//! One realized random network and its connectivity observables.

mod connectivity;
mod flow;
mod pairs;
mod report;
mod union_find;

use std::io::{self, Write};

use rand::Rng;

use crate::channel::ConnectionModel;
use crate::error::{Error, Result};
use crate::geometry::{Domain, Point};

pub use connectivity::{edge_connectivity, vertex_connectivity};
pub use pairs::{detect_bridged_pair, detect_isolated_pair};
pub use report::{analyze, ConnectivityReport};
pub use union_find::UnionFind;

/// Default cap on vertex and edge connectivity.
pub const DEFAULT_K_MAX: u32 = 5;

/// How candidate pairs are visited when drawing links.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LinkSampling {
    /// Skip pairs beyond the model's cutoff radius (`H < 1e-12`), found with a cell grid.
    #[default]
    Pruned,
    /// Draw a Bernoulli link for every pair. Slow; kept for validating `Pruned`.
    Exact,
}

/// Node positions plus a realized, undirected, loop-free link set.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSample {
    domain: Domain,
    positions: Vec<Point>,
    // sorted neighbor lists
    adj: Vec<Vec<u32>>,
}

/// Connected components: count, sizes (ascending) and a per-node label.
///
/// Labels are contiguous from 0 and numbered by the smallest node index in each component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub count: usize,
    pub sizes: Vec<usize>,
    pub labels: Vec<usize>,
}

/// Builds one network: a link for each unordered pair `(i, j)` is drawn with
/// probability `H(r_ij)`, visiting pairs in lexicographic order.
pub fn build_graph<R: Rng + ?Sized>(
    domain: &Domain,
    positions: Vec<Point>,
    model: &ConnectionModel,
    rng: &mut R,
    sampling: LinkSampling,
) -> Result<NetworkSample> {
    if positions.is_empty() {
        return Err(Error::param("positions", "at least one node is required"));
    }
    if let Some(p) = positions.iter().find(|p| !domain.contains(p)) {
        return Err(Error::param(
            "positions",
            format!("{:?} lies outside the domain", p.coords()),
        ));
    }
    let n = positions.len();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    fn link(i: usize, j: usize, adj: &mut [Vec<u32>]) {
        adj[i].push(j as u32);
        adj[j].push(i as u32);
    }

    let r_cut = model.cutoff_radius();
    let cells_per_axis = (domain.side() / r_cut).floor() as usize;
    match sampling {
        LinkSampling::Pruned if cells_per_axis >= 4 => {
            let grid = CellGrid::new(domain, &positions, cells_per_axis);
            let r_cut_sq = r_cut * r_cut;
            let mut candidates: Vec<(u32, f64)> = Vec::new();
            for i in 0..n {
                candidates.clear();
                grid.for_each_neighbor_cell(&positions[i], |members| {
                    for &j in members {
                        if j as usize > i {
                            let d2 = positions[i].distance_sq(&positions[j as usize]);
                            if d2 <= r_cut_sq {
                                candidates.push((j, d2));
                            }
                        }
                    }
                });
                candidates.sort_unstable_by_key(|c| c.0);
                for &(j, d2) in &candidates {
                    if model.sample_link_sq(d2, rng) {
                        link(i, j as usize, &mut adj);
                    }
                }
            }
        }
        LinkSampling::Pruned => {
            // cutoff comparable to the domain: the grid would not prune anything
            let r_cut_sq = r_cut * r_cut;
            for i in 0..n {
                for j in i + 1..n {
                    let d2 = positions[i].distance_sq(&positions[j]);
                    if d2 <= r_cut_sq && model.sample_link_sq(d2, rng) {
                        link(i, j, &mut adj);
                    }
                }
            }
        }
        LinkSampling::Exact => {
            for i in 0..n {
                for j in i + 1..n {
                    let d2 = positions[i].distance_sq(&positions[j]);
                    if model.sample_link_sq(d2, rng) {
                        link(i, j, &mut adj);
                    }
                }
            }
        }
    }
    // pushes arrive in increasing order for both endpoints, so lists are already sorted
    debug_assert!(adj.iter().all(|l| l.windows(2).all(|w| w[0] < w[1])));
    Ok(NetworkSample {
        domain: *domain,
        positions,
        adj,
    })
}

impl NetworkSample {
    /// Builds a sample from an explicit edge list. Positions are placed at the
    /// origin of a unit square; useful for exercising the graph algorithms.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "at least one node is required"));
        }
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::param("edges", format!("({u}, {v}) out of range")));
            }
            if u == v {
                return Err(Error::param("edges", format!("self loop at {u}")));
            }
            adj[u].push(v as u32);
            adj[v].push(u as u32);
        }
        for l in &mut adj {
            l.sort_unstable();
            l.dedup();
        }
        Ok(NetworkSample {
            domain: Domain::square(1.0)?,
            positions: vec![Point::xy(0.0, 0.0); n],
            adj,
        })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn positions(&self) -> &[Point] {
        &self.positions
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.adj[i]
    }

    pub fn adjacency(&self) -> &[Vec<u32>] {
        &self.adj
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&(j as u32)).is_ok()
    }

    /// Undirected edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(i, l)| {
            l.iter()
                .map(move |&j| (i, j as usize))
                .filter(|&(i, j)| i < j)
        })
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn total_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn mean_degree(&self) -> f64 {
        self.total_degree() as f64 / self.node_count() as f64
    }

    pub fn components(&self) -> Components {
        let n = self.node_count();
        let mut uf = UnionFind::new(n);
        for (i, j) in self.edges() {
            uf.union(i, j);
        }
        let mut root_label = vec![usize::MAX; n];
        let mut labels = Vec::with_capacity(n);
        let mut sizes = Vec::new();
        for i in 0..n {
            let r = uf.find(i);
            if root_label[r] == usize::MAX {
                root_label[r] = sizes.len();
                sizes.push(0);
            }
            labels.push(root_label[r]);
            sizes[root_label[r]] += 1;
        }
        let count = sizes.len();
        sizes.sort_unstable();
        Components {
            count,
            sizes,
            labels,
        }
    }

    pub fn is_connected(&self) -> bool {
        connectivity::is_connected(&self.adj)
    }

    /// Writes `u v` per line (0-indexed, `u < v`).
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (i, j) in self.edges() {
            writeln!(w, "{i} {j}")?;
        }
        Ok(())
    }

    /// Writes `id,x,y[,z]` rows, with a trailing `component` column when labels are given.
    pub fn write_positions_csv<W: Write>(
        &self,
        mut w: W,
        labels: Option<&[usize]>,
    ) -> io::Result<()> {
        let axes = if self.domain.dimension() == 3 {
            "x,y,z"
        } else {
            "x,y"
        };
        match labels {
            Some(_) => writeln!(w, "id,{axes},component")?,
            None => writeln!(w, "id,{axes}")?,
        }
        for (i, p) in self.positions.iter().enumerate() {
            write!(w, "{i}")?;
            for c in p.coords() {
                write!(w, ",{c}")?;
            }
            match labels {
                Some(l) => writeln!(w, ",{}", l[i])?,
                None => writeln!(w)?,
            }
        }
        Ok(())
    }
}

/// Minimum degree of a sample; 0 when any node is isolated.
pub fn min_degree(sample: &NetworkSample) -> usize {
    sample.min_degree()
}

pub fn components(sample: &NetworkSample) -> Components {
    sample.components()
}

/// Uniform cell lists over the domain, cell side >= the cutoff radius.
struct CellGrid {
    per_axis: usize,
    dim: usize,
    inv_cell: f64,
    start: Vec<u32>,
    members: Vec<u32>,
}

impl CellGrid {
    fn new(domain: &Domain, positions: &[Point], per_axis: usize) -> Self {
        let dim = domain.dimension();
        let inv_cell = per_axis as f64 / domain.side();
        let n_cells = per_axis.pow(dim as u32);
        let mut grid = CellGrid {
            per_axis,
            dim,
            inv_cell,
            start: vec![0; n_cells + 1],
            members: vec![0; positions.len()],
        };
        let cells: Vec<usize> = positions.iter().map(|p| grid.cell_of(p)).collect();
        for &c in &cells {
            grid.start[c + 1] += 1;
        }
        for c in 0..n_cells {
            grid.start[c + 1] += grid.start[c];
        }
        let mut fill = grid.start.clone();
        for (i, &c) in cells.iter().enumerate() {
            grid.members[fill[c] as usize] = i as u32;
            fill[c] += 1;
        }
        grid
    }

    fn axis_cell(&self, x: f64) -> usize {
        ((x * self.inv_cell) as usize).min(self.per_axis - 1)
    }

    fn cell_of(&self, p: &Point) -> usize {
        p.coords()
            .iter()
            .rev()
            .fold(0, |acc, &x| acc * self.per_axis + self.axis_cell(x))
    }

    fn for_each_neighbor_cell(&self, p: &Point, mut f: impl FnMut(&[u32])) {
        let c = p.coords();
        let m = self.per_axis as isize;
        let range = |x: f64| {
            let a = self.axis_cell(x) as isize;
            (a - 1).max(0)..=(a + 1).min(m - 1)
        };
        let zs = if self.dim == 3 { range(c[2]) } else { 0..=0 };
        for z in zs {
            for y in range(c[1]) {
                for x in range(c[0]) {
                    let cell = ((z * m + y) * m + x) as usize;
                    let (s, e) = (self.start[cell] as usize, self.start[cell + 1] as usize);
                    f(&self.members[s..e]);
                }
            }
        }
    }
}
