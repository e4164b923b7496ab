use std::collections::VecDeque;

use super::{CentralityMode, MetricsError};
use crate::network::{Digraph, NodeId};

/// Harmonic closeness of every node, normalized by `n - 1`: the mean over
/// other nodes of `1 / d`, unreachable nodes contributing 0.
///
/// `Out` follows arcs forward from the node, `In` backward, `All` ignores
/// direction.
pub fn harmonic_closeness(graph: &Digraph, mode: CentralityMode) -> Vec<f64> {
    let n = graph.node_count();
    if n < 2 {
        return vec![0.0; n];
    }
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    (0..n)
        .map(|source| {
            dist.fill(usize::MAX);
            dist[source] = 0;
            queue.clear();
            queue.push_back(source);
            let mut sum = 0.0;
            while let Some(v) = queue.pop_front() {
                let next = dist[v] + 1;
                let mut visit = |w: NodeId| {
                    if dist[w] == usize::MAX {
                        dist[w] = next;
                        sum += 1.0 / next as f64;
                        queue.push_back(w);
                    }
                };
                match mode {
                    CentralityMode::Out => graph.successors(v).iter().copied().for_each(&mut visit),
                    CentralityMode::In => graph.predecessors(v).iter().copied().for_each(&mut visit),
                    CentralityMode::All => {
                        graph.successors(v).iter().copied().for_each(&mut visit);
                        graph.predecessors(v).iter().copied().for_each(&mut visit);
                    }
                }
            }
            sum / (n - 1) as f64
        })
        .collect()
}

/// Freeman centralization of harmonic closeness.
///
/// The spread `Σ (c_max - c_i)` is divided by its value on the extremal star:
/// `n - 1` for directed closeness (hub 1, leaves 0) and `(n - 2) / 2` for the
/// undirected view (hub 1, leaves `n / (2 (n - 1))`).
pub fn closeness_centralization(graph: &Digraph, mode: CentralityMode) -> Result<f64, MetricsError> {
    let n = graph.node_count();
    if n < 3 {
        return Err(MetricsError::TooFewNodes { needed: 3, found: n });
    }
    let c = harmonic_closeness(graph, mode);
    let max = c.iter().copied().fold(0.0, f64::max);
    let spread: f64 = c.iter().map(|ci| max - ci).sum();
    let bound = match mode {
        CentralityMode::In | CentralityMode::Out => (n - 1) as f64,
        CentralityMode::All => (n - 2) as f64 / 2.0,
    };
    Ok(spread / bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn out_star() {
        for n in 3..10 {
            let g = Digraph::from_arcs(n, (1..n).map(|v| (0, v)));
            let c = harmonic_closeness(&g, CentralityMode::Out);
            assert_eq!(c[0], 1.0);
            assert!(c[1..].iter().all(|&x| x == 0.0));
            assert!((closeness_centralization(&g, CentralityMode::Out).unwrap() - 1.0).abs() < 1e-15);
            assert!((closeness_centralization(&g, CentralityMode::All).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_graph() {
        let g = Digraph::from_arcs(5, []);
        for mode in [CentralityMode::All, CentralityMode::In, CentralityMode::Out] {
            assert_eq!(closeness_centralization(&g, mode).unwrap(), 0.0);
        }
    }

    #[test]
    fn path_distances() {
        // 0 -> 1 -> 2 -> 3
        let g = Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 3)]);
        let c = harmonic_closeness(&g, CentralityMode::Out);
        assert!((c[0] - (1.0 + 0.5 + 1.0 / 3.0) / 3.0).abs() < 1e-15);
        assert!((c[2] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(c[3], 0.0);
        let c_in = harmonic_closeness(&g, CentralityMode::In);
        assert!((c_in[3] - c[0]).abs() < 1e-15);
    }

    #[test]
    fn needs_three_nodes() {
        assert!(closeness_centralization(&Digraph::from_arcs(2, [(0, 1)]), CentralityMode::In).is_err());
    }

    #[test]
    fn undirected_view_is_bounded_on_all_small_graphs() {
        // Every undirected graph (as symmetric digraph) on 4 and 5 nodes.
        for n in [4usize, 5] {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            for mask in 0u32..(1 << pairs.len()) {
                let arcs = pairs
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .map(|(_, &p)| p);
                let g = Digraph::from_arcs(n, arcs);
                let v = closeness_centralization(&g, CentralityMode::All).unwrap();
                assert!((0.0..=1.0 + 1e-12).contains(&v), "n={n} mask={mask} -> {v}");
            }
        }
    }
}
