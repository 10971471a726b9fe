use serde::{Deserialize, Serialize};

use super::connectivity::{edge_connectivity_adj, vertex_connectivity_adj};
use super::pairs::smallest_pair_exterior;
use super::NetworkSample;

/// Per-sample connectivity observables.
///
/// For `n >= 2`: `vertex_connectivity <= edge_connectivity <= min_degree`
/// (Whitney), with both connectivities capped at `k_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectivityReport {
    pub n: usize,
    pub k_max: u32,
    pub degree_sequence: Vec<usize>,
    pub min_degree: usize,
    pub mean_degree: f64,
    pub component_count: usize,
    pub component_sizes: Vec<usize>,
    pub vertex_connectivity: u32,
    pub edge_connectivity: u32,
    pub has_isolated_pair: bool,
    /// Smallest `k <= k_max` for which a bridged pair exists. Larger `k` also
    /// qualify while `n > k`.
    pub bridged_pair_order: Option<u32>,
}

impl ConnectivityReport {
    pub fn total_degree(&self) -> usize {
        self.degree_sequence.iter().sum()
    }

    pub fn is_k_connected(&self, k: u32) -> bool {
        self.vertex_connectivity >= k
    }

    pub fn is_k_edge_connected(&self, k: u32) -> bool {
        self.edge_connectivity >= k
    }

    pub fn has_min_degree(&self, k: u32) -> bool {
        self.min_degree >= k as usize
    }

    pub fn has_bridged_pair(&self, k: u32) -> bool {
        self.bridged_pair_order.is_some_and(|o| o <= k) && self.n > k as usize
    }
}

/// Computes every observable of a sample, capping connectivities at `k_max`.
pub fn analyze(sample: &NetworkSample, k_max: u32) -> ConnectivityReport {
    let adj = sample.adjacency();
    let n = sample.node_count();
    let degree_sequence = sample.degrees();
    let min_degree = sample.min_degree();
    let comps = sample.components();

    let kappa = if comps.count > 1 {
        0
    } else {
        vertex_connectivity_adj(adj, k_max)
    };
    let lambda = if comps.count > 1 {
        0
    } else if n >= 2 && kappa == (min_degree as u32).min(k_max) {
        kappa
    } else {
        edge_connectivity_adj(adj, k_max, kappa)
    };

    let bridged_pair_order = if k_max == 0 {
        None
    } else {
        smallest_pair_exterior(adj, k_max as usize - 1)
            .map(|ext| ext as u32 + 1)
            .filter(|&k| n > k as usize)
    };

    ConnectivityReport {
        n,
        k_max,
        min_degree,
        mean_degree: sample.mean_degree(),
        degree_sequence,
        component_count: comps.count,
        has_isolated_pair: comps.sizes.contains(&2),
        component_sizes: comps.sizes,
        vertex_connectivity: kappa,
        edge_connectivity: lambda,
        bridged_pair_order,
    }
}
