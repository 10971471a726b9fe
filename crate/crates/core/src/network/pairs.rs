//! Isolated and bridged node pairs.

use super::NetworkSample;
use crate::error::{Error, Result};

/// Whether some connected component has exactly two nodes.
pub fn detect_isolated_pair(sample: &NetworkSample) -> bool {
    sample.components().sizes.contains(&2)
}

/// Whether some linked pair `(i, j)` reaches the rest of the network only
/// through a set of exactly `k - 1` other nodes.
///
/// For `k = 1` this is an isolated pair. Each pair is checked on its own;
/// bridging sets shared between several pairs are not combined.
pub fn detect_bridged_pair(sample: &NetworkSample, k: u32) -> Result<bool> {
    if !(1..=5).contains(&k) {
        return Err(Error::param("k", format!("must be in 1..=5, got {k}")));
    }
    Ok(smallest_pair_exterior(sample.adjacency(), k as usize - 1)
        .is_some_and(|ext| ext < k as usize && sample.node_count() > k as usize))
}

/// Smallest `|N(i) ∪ N(j) \ {i, j}|` over linked pairs, ignoring pairs above `limit`.
pub(crate) fn smallest_pair_exterior(adj: &[Vec<u32>], limit: usize) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, ni) in adj.iter().enumerate() {
        if ni.len() > limit + 1 {
            continue;
        }
        for &j in ni {
            let j = j as usize;
            if j < i || adj[j].len() > limit + 1 {
                continue;
            }
            let ext = union_size_without(ni, &adj[j], i as u32, j as u32);
            if best.is_none_or(|b| ext < b) {
                best = Some(ext);
            }
        }
    }
    best.filter(|&b| b <= limit)
}

fn union_size_without(a: &[u32], b: &[u32], x: u32, y: u32) -> usize {
    let (mut p, mut q, mut count) = (0, 0, 0);
    while p < a.len() || q < b.len() {
        let v = match (a.get(p), b.get(q)) {
            (Some(&u), Some(&w)) if u == w => {
                p += 1;
                q += 1;
                u
            }
            (Some(&u), Some(&w)) if u < w => {
                p += 1;
                u
            }
            (Some(_), Some(&w)) => {
                q += 1;
                w
            }
            (Some(&u), None) => {
                p += 1;
                u
            }
            (None, Some(&w)) => {
                q += 1;
                w
            }
            (None, None) => unreachable!(),
        };
        if v != x && v != y {
            count += 1;
        }
    }
    count
}
