use serde::Serialize;

use super::{Direction, MetricsError};
use crate::ingest::InstitutionCode;
use crate::network::{Digraph, Network, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankingEntry {
    pub institution: InstitutionCode,
    pub degree: usize,
    pub direction: Direction,
}

/// Nodes with positive degree, by degree descending then node id.
///
/// Node ids follow the lexicographic order of institution codes, so the tie
/// break is lexicographic on the normalized code.
pub fn degree_ranking(graph: &Digraph, direction: Direction) -> Vec<(NodeId, usize)> {
    let mut ranked: Vec<(NodeId, usize)> = (0..graph.node_count())
        .map(|v| {
            let d = match direction {
                Direction::In => graph.in_degree(v),
                Direction::Out => graph.out_degree(v),
            };
            (v, d)
        })
        .filter(|&(_, d)| d > 0)
        .collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    ranked
}

/// The `k` highest-degree institutions; shorter when fewer are active.
pub fn top_k(network: &Network, direction: Direction, k: usize) -> Result<Vec<RankingEntry>, MetricsError> {
    if k == 0 {
        return Err(MetricsError::InvalidK);
    }
    Ok(degree_ranking(network.graph(), direction)
        .into_iter()
        .take(k)
        .map(|(v, degree)| RankingEntry {
            institution: network.node(v).code.clone(),
            degree,
            direction,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::testing::sn;
    use crate::ingest::Gender::F;
    use crate::network::{build_universe, ConnectionSplit, UniversePolicy};

    fn net(pairs: &[(&str, &str)]) -> Network {
        let records: Vec<_> = pairs.iter().map(|&(s, d)| sn(2008, s, d, F, false)).collect();
        let u = build_universe(&records, UniversePolicy::SpecialNeeds).unwrap();
        Network::build(2008, &records, &u, None, ConnectionSplit::StemClass).unwrap()
    }

    fn names(entries: &[RankingEntry]) -> Vec<(&str, usize)> {
        entries.iter().map(|e| (e.institution.as_str(), e.degree)).collect()
    }

    #[test]
    fn reversed_star_hub_first() {
        let n = net(&[("B01", "A01"), ("C01", "A01"), ("D01", "A01")]);
        assert_eq!(names(&top_k(&n, Direction::In, 1).unwrap()), [("A01", 3)]);
    }

    #[test]
    fn ties_are_lexicographic() {
        let n = net(&[
            ("Z01", "A01"),
            ("Z01", "B01"),
            ("M01", "A01"),
            ("M01", "C01"),
            ("C01", "B01"),
        ]);
        assert_eq!(
            names(&top_k(&n, Direction::Out, 5).unwrap()),
            [("M01", 2), ("Z01", 2), ("C01", 1)]
        );
    }

    #[test]
    fn k_zero_rejected() {
        let n = net(&[("A01", "B01")]);
        assert!(matches!(top_k(&n, Direction::Out, 0), Err(MetricsError::InvalidK)));
    }
}
