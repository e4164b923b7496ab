use num_rational::Ratio;

use super::{CentralityMode, MetricsError};
use crate::network::Digraph;

/// `|L| / (n (n - 1))` on the binary graph.
pub fn density(graph: &Digraph) -> Result<Ratio<u64>, MetricsError> {
    density_of(graph.arc_count() as u64, graph.node_count() as u64)
}

/// Density of `arcs` arcs over `n` nodes.
pub fn density_of(arcs: u64, n: u64) -> Result<Ratio<u64>, MetricsError> {
    if n < 2 {
        return Err(MetricsError::TooFewNodes {
            needed: 2,
            found: n as usize,
        });
    }
    Ok(Ratio::new(arcs, n * (n - 1)))
}

fn degrees(graph: &Digraph, mode: CentralityMode) -> impl Iterator<Item = u64> + '_ {
    (0..graph.node_count()).map(move |v| {
        (match mode {
            CentralityMode::In => graph.in_degree(v),
            CentralityMode::Out => graph.out_degree(v),
            CentralityMode::All => graph.in_degree(v) + graph.out_degree(v),
        }) as u64
    })
}

/// Freeman degree centralization: `Σ (c_max - c_i)` over the value reached by
/// a star. The maximum is `(n-1)^2` for in/out degree and
/// `2 (n-1) (n-2)` for total degree.
pub fn degree_centralization(graph: &Digraph, mode: CentralityMode) -> Result<Ratio<u64>, MetricsError> {
    let n = graph.node_count() as u64;
    if n < 3 {
        return Err(MetricsError::TooFewNodes {
            needed: 3,
            found: n as usize,
        });
    }
    let max = degrees(graph, mode).max().unwrap_or(0);
    let spread: u64 = degrees(graph, mode).map(|c| max - c).sum();
    let bound = match mode {
        CentralityMode::In | CentralityMode::Out => (n - 1) * (n - 1),
        CentralityMode::All => 2 * (n - 1) * (n - 2),
    };
    Ok(Ratio::new(spread, bound))
}

/// Fraction of arcs whose reverse arc also exists.
pub fn reciprocity(graph: &Digraph) -> Result<Ratio<u64>, MetricsError> {
    let arcs = graph.arc_count() as u64;
    if arcs == 0 {
        return Err(MetricsError::TooFewArcs { needed: 1, found: 0 });
    }
    let reciprocated = graph.arcs().filter(|&(s, d)| graph.has_arc(d, s)).count() as u64;
    Ok(Ratio::new(reciprocated, arcs))
}
