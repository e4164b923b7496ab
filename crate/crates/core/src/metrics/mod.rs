//! Network statistics: counts, density, Freeman centralizations, degree
//! assortativity, reciprocity, strength, HITS and degree rankings.
//!
//! All structural metrics work on the binary view ([`Digraph`]) of a
//! network over its full universe, so isolates count toward `n`. Counts and
//! the integer-valued ratios (density, degree centralization, reciprocity)
//! are exact rationals; closeness and assortativity are floating point.

mod assortativity;
mod closeness;
mod hits;
mod ranking;
mod structural;
mod table;

use std::fmt;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{Gender, StemClass};
use crate::network::{sending_receiving, CohortSlice, Digraph, Network};

pub use assortativity::{assortativity, Assortativity, DegreePairing};
pub use closeness::{closeness_centralization, harmonic_closeness};
pub use hits::{hits, HitsParams, HitsScores};
pub use ranking::{degree_ranking, top_k, RankingEntry};
pub use structural::{degree_centralization, density, density_of, reciprocity};
pub use table::{write_report_csv, write_report_table, write_top_csv, TABLE_COLUMNS};

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("needs at least {needed} nodes, network has {found}")]
    TooFewNodes { needed: usize, found: usize },
    #[error("needs at least {needed} arcs, network has {found}")]
    TooFewArcs { needed: usize, found: usize },
    #[error("k must be at least 1")]
    InvalidK,
    #[error("HITS did not converge within {} iterations", .0.iterations)]
    HitsNotConverged(Box<HitsScores>),
    #[error("write failed: {0}")]
    Write(String),
}

/// Degree direction used for rankings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    In,
    Out,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::In => "in",
            Direction::Out => "out",
        })
    }
}

/// Which ties a centrality looks at: incoming, outgoing, or both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CentralityMode {
    All,
    Out,
    In,
}

/// One value per [`CentralityMode`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ByMode<T> {
    pub all: T,
    pub out: T,
    pub inward: T,
}

impl<T> ByMode<T> {
    fn compute(mut f: impl FnMut(CentralityMode) -> T) -> Self {
        Self {
            all: f(CentralityMode::All),
            out: f(CentralityMode::Out),
            inward: f(CentralityMode::In),
        }
    }
}

/// Total flow, split by STEM class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Strength {
    pub total: u64,
    pub stem: u64,
    pub non_stem: u64,
}

/// Sum of the weights matching `slice`.
pub fn strength(network: &Network, slice: &CohortSlice) -> Strength {
    network
        .weights()
        .iter()
        .filter(|(k, _)| slice.matches(k))
        .fold(Strength::default(), |mut s, (k, &w)| {
            s.total += w;
            match k.stem {
                StemClass::Stem => s.stem += w,
                StemClass::NonStem => s.non_stem += w,
            }
            s
        })
}

/// Statistics of one `(year, slice)` network.
///
/// Metrics whose preconditions fail on the slice (too few nodes or arcs)
/// are `None`, rendered as `Undefined`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub year: i32,
    pub slice: CohortSlice,
    pub universe: usize,
    pub active: usize,
    pub sending: usize,
    pub receiving: usize,
    pub partnerships: usize,
    pub active_connections: usize,
    pub isolates: usize,
    pub density: Option<Ratio<u64>>,
    pub degree_centralization: ByMode<Option<Ratio<u64>>>,
    pub closeness_centralization: ByMode<Option<f64>>,
    pub assortativity: Assortativity,
    pub reciprocity: Option<Ratio<u64>>,
    pub strength: Strength,
}

impl MetricsReport {
    /// Compute every statistic for `network` restricted to `slice`.
    pub fn compute(network: &Network, slice: &CohortSlice, pairing: DegreePairing) -> Self {
        let sub = network.subnetwork(slice);
        let g: &Digraph = sub.graph();
        let roles = sub.node_roles();
        let (sending, receiving) = sending_receiving(&roles);
        let (closeness, degree) = rayon::join(
            || ByMode::compute(|m| closeness_centralization(g, m).ok()),
            || ByMode::compute(|m| degree_centralization(g, m).ok()),
        );
        Self {
            year: network.year(),
            slice: *slice,
            universe: sub.node_count(),
            active: sub.active(),
            sending,
            receiving,
            partnerships: sub.partnerships(),
            active_connections: sub.active_connections(),
            isolates: sub.isolates(),
            density: density(g).ok(),
            degree_centralization: degree,
            closeness_centralization: closeness,
            assortativity: assortativity(g, pairing).unwrap_or(Assortativity::Undefined),
            reciprocity: reciprocity(g).ok(),
            strength: strength(&sub, &CohortSlice::ALL),
        }
    }
}

/// Reports for the all / M / F columns of a summary table, computed
/// concurrently. `base` (e.g. a STEM restriction) is combined with each
/// gender.
pub fn gender_columns(network: &Network, base: &CohortSlice, pairing: DegreePairing) -> Vec<MetricsReport> {
    let slices: Vec<CohortSlice> = [None, Some(Gender::M), Some(Gender::F)]
        .into_iter()
        .map(|g| CohortSlice {
            gender: g.or(base.gender),
            stem: base.stem,
        })
        .collect();
    slices
        .par_iter()
        .map(|s| MetricsReport::compute(network, s, pairing))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::testing::sn;
    use crate::ingest::Gender::{F, M};
    use crate::network::{build_universe, ConnectionSplit, UniversePolicy};

    #[test]
    fn strength_split() {
        // weights {2, 1, 1}: 1 STEM, 3 non-STEM
        let records = [
            sn(2008, "A01", "B01", F, false),
            sn(2008, "A01", "B01", F, false),
            sn(2008, "B01", "C01", M, false),
            sn(2008, "C01", "A01", F, true),
        ];
        let u = build_universe(&records, UniversePolicy::SpecialNeeds).unwrap();
        let net = Network::build(2008, &records, &u, None, ConnectionSplit::StemClass).unwrap();
        let mut weights: Vec<u64> = net.weights().values().copied().collect();
        weights.sort_unstable();
        assert_eq!(weights, [1, 1, 2]);
        assert_eq!(
            strength(&net, &CohortSlice::ALL),
            Strength {
                total: 4,
                stem: 1,
                non_stem: 3
            }
        );
        assert_eq!(
            strength(&net, &CohortSlice::gender(F)),
            Strength {
                total: 3,
                stem: 1,
                non_stem: 2
            }
        );
    }

    #[test]
    fn empty_network_strength_and_report() {
        let r = sn(2008, "A01", "B01", F, false);
        let u = build_universe([&r], UniversePolicy::SpecialNeeds).unwrap();
        let net = Network::build(2008, std::iter::empty(), &u, None, ConnectionSplit::StemClass).unwrap();
        assert_eq!(strength(&net, &CohortSlice::ALL), Strength::default());
        let report = MetricsReport::compute(&net, &CohortSlice::ALL, DegreePairing::OutIn);
        assert_eq!(report.active, 0);
        assert_eq!(report.isolates, 2);
        assert_eq!(report.density, Some(Ratio::from_integer(0)));
        // n = 2 < 3
        assert_eq!(report.degree_centralization.all, None);
        assert_eq!(report.reciprocity, None);
        assert_eq!(report.assortativity, Assortativity::Undefined);
    }

    #[test]
    fn report_counts() {
        let records = [
            sn(2008, "A01", "B01", F, false),
            sn(2008, "A01", "B01", F, true),
            sn(2008, "B01", "A01", M, false),
            sn(2008, "C01", "B01", M, false),
        ];
        let u = build_universe(
            [&records[..], &[sn(2008, "D01", "E01", F, false)]].concat().iter(),
            UniversePolicy::SpecialNeeds,
        )
        .unwrap();
        let net = Network::build(2008, &records, &u, None, ConnectionSplit::StemClass).unwrap();
        let cols = gender_columns(&net, &CohortSlice::ALL, DegreePairing::OutIn);
        let all = &cols[0];
        assert_eq!((all.universe, all.active, all.isolates), (5, 3, 2));
        assert_eq!((all.sending, all.receiving), (3, 2));
        assert_eq!((all.partnerships, all.active_connections), (3, 4));
        assert_eq!(all.density, Some(Ratio::new(3, 20)));
        assert_eq!(all.reciprocity, Some(Ratio::new(2, 3)));
        assert_eq!(
            all.strength,
            Strength {
                total: 4,
                stem: 1,
                non_stem: 3
            }
        );
        let (m, f) = (&cols[1], &cols[2]);
        assert_eq!(m.slice.gender, Some(M));
        assert_eq!(f.slice.gender, Some(F));
        assert_eq!(m.active_connections + f.active_connections, all.active_connections);
        assert_eq!(f.partnerships, 1);
        assert_eq!(f.reciprocity, Some(Ratio::from_integer(0)));
    }
}
