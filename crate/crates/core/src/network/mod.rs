//! Yearly directed weighted mobility networks over a fixed institution
//! universe.
//!
//! A [`Network`] holds the node universe (isolates included), the flow
//! weights keyed by `(src, dst, gender, field class)`, the binary arc set
//! derived from the positive weights, and per-node attributes.

mod digraph;
mod geo;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{CountryCode, Gender, InstitutionCode, IscedField, MobilityRecord, StemClass};

pub use digraph::{Digraph, NodeId};
pub use geo::{GeoEntry, GeoTable, LonLat};

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("no records to build a universe from")]
    EmptyUniverse,
    #[error("institution {institution} attributed to both {first} and {second}")]
    ConflictingCountry {
        institution: String,
        first: CountryCode,
        second: CountryCode,
    },
    #[error("institution {0} is not in the universe")]
    OutsideUniverse(String),
    #[error("record for {found} passed to the {expected} network")]
    WrongYear { expected: i32, found: i32 },
    #[error("geo table line {line}: {cause}")]
    GeoTable { line: usize, cause: String },
}

/// Which records define the node universe.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UniversePolicy {
    /// Institutions touched by at least one special-needs record in any year.
    #[default]
    SpecialNeeds,
    /// Institutions touched by any record.
    AllParticipants,
}

/// Granularity of "active connections": pairs split by the binary STEM class,
/// or by the full ISCED broad field.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConnectionSplit {
    #[default]
    StemClass,
    Field,
}

/// Node set shared by all yearly networks, with each institution's country.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    nodes: BTreeMap<InstitutionCode, CountryCode>,
}

impl Universe {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, code: &InstitutionCode) -> bool {
        self.nodes.contains_key(code)
    }

    pub fn country(&self, code: &InstitutionCode) -> Option<CountryCode> {
        self.nodes.get(code).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&InstitutionCode, &CountryCode)> {
        self.nodes.iter()
    }
}

/// Union of home and host institutions across all supplied years.
pub fn build_universe<'a, I>(records: I, policy: UniversePolicy) -> Result<Universe, NetworkError>
where
    I: IntoIterator<Item = &'a MobilityRecord>,
{
    let mut nodes: BTreeMap<InstitutionCode, CountryCode> = BTreeMap::new();
    let mut add = |code: &InstitutionCode, country: CountryCode| match nodes.get(code) {
        Some(&first) if first != country => Err(NetworkError::ConflictingCountry {
            institution: code.to_string(),
            first,
            second: country,
        }),
        Some(_) => Ok(()),
        None => {
            nodes.insert(code.clone(), country);
            Ok(())
        }
    };
    for r in records {
        if policy == UniversePolicy::SpecialNeeds && !r.has_special_needs() {
            continue;
        }
        add(&r.home_institution, r.home_country)?;
        add(&r.host_institution, r.host_country)?;
    }
    if nodes.is_empty() {
        return Err(NetworkError::EmptyUniverse);
    }
    Ok(Universe { nodes })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeAttrs {
    pub code: InstitutionCode,
    pub country: CountryCode,
    pub city: Option<String>,
    pub location: Option<LonLat>,
}

/// Weight key: one directed pair, one gender, one field class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlowKey {
    pub src: NodeId,
    pub dst: NodeId,
    pub gender: Gender,
    pub stem: StemClass,
    /// Set only under [`ConnectionSplit::Field`].
    pub field: Option<IscedField>,
}

/// Restriction of a network to one gender and/or one STEM class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct CohortSlice {
    pub gender: Option<Gender>,
    pub stem: Option<StemClass>,
}

impl CohortSlice {
    pub const ALL: CohortSlice = CohortSlice {
        gender: None,
        stem: None,
    };

    pub fn gender(gender: Gender) -> Self {
        Self {
            gender: Some(gender),
            stem: None,
        }
    }

    pub fn stem(stem: StemClass) -> Self {
        Self {
            gender: None,
            stem: Some(stem),
        }
    }

    pub fn matches(&self, key: &FlowKey) -> bool {
        self.gender.is_none_or(|g| key.gender == g) && self.stem.is_none_or(|s| key.stem == s)
    }

    /// Conjunction of two slices; `None` when they demand different values on
    /// one axis (the result would select nothing).
    pub fn and(&self, other: &CohortSlice) -> Option<CohortSlice> {
        fn axis<T: PartialEq + Copy>(a: Option<T>, b: Option<T>) -> Result<Option<T>, ()> {
            match (a, b) {
                (Some(x), Some(y)) if x != y => Err(()),
                (Some(x), _) | (_, Some(x)) => Ok(Some(x)),
                (None, None) => Ok(None),
            }
        }
        Some(CohortSlice {
            gender: axis(self.gender, other.gender).ok()?,
            stem: axis(self.stem, other.stem).ok()?,
        })
    }
}

impl fmt::Display for CohortSlice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.gender.map_or("all", |g| g.as_str());
        match self.stem {
            None => write!(f, "{g}"),
            Some(s) => write!(f, "{g}/{s}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeRole {
    Sender,
    Receiver,
    Both,
    Inactive,
}

impl NodeRole {
    pub fn from_degrees(in_degree: usize, out_degree: usize) -> Self {
        match (out_degree > 0, in_degree > 0) {
            (true, true) => NodeRole::Both,
            (true, false) => NodeRole::Sender,
            (false, true) => NodeRole::Receiver,
            (false, false) => NodeRole::Inactive,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            NodeRole::Sender => "sender",
            NodeRole::Receiver => "receiver",
            NodeRole::Both => "both",
            NodeRole::Inactive => "inactive",
        }
    }

    pub fn sends(&self) -> bool {
        matches!(self, NodeRole::Sender | NodeRole::Both)
    }

    pub fn receives(&self) -> bool {
        matches!(self, NodeRole::Receiver | NodeRole::Both)
    }
}

impl fmt::Display for NodeRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The mobility network of one year.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    year: i32,
    nodes: Vec<NodeAttrs>,
    index: HashMap<InstitutionCode, NodeId>,
    weights: BTreeMap<FlowKey, u64>,
    graph: Digraph,
    split: ConnectionSplit,
}

impl Network {
    /// Aggregate the records of `year` into flow weights over `universe`.
    pub fn build<'a, I>(
        year: i32,
        records: I,
        universe: &Universe,
        geo: Option<&GeoTable>,
        split: ConnectionSplit,
    ) -> Result<Self, NetworkError>
    where
        I: IntoIterator<Item = &'a MobilityRecord>,
    {
        let nodes: Vec<NodeAttrs> = universe
            .iter()
            .map(|(code, &country)| {
                let entry = geo.and_then(|g| g.get(code));
                NodeAttrs {
                    code: code.clone(),
                    country,
                    city: entry.and_then(|e| e.city.clone()),
                    location: entry.map(|e| e.location),
                }
            })
            .collect();
        let index: HashMap<InstitutionCode, NodeId> =
            nodes.iter().enumerate().map(|(i, n)| (n.code.clone(), i)).collect();

        let mut weights = BTreeMap::new();
        for r in records {
            if r.year != year {
                return Err(NetworkError::WrongYear {
                    expected: year,
                    found: r.year,
                });
            }
            let lookup = |code: &InstitutionCode| {
                index
                    .get(code)
                    .copied()
                    .ok_or_else(|| NetworkError::OutsideUniverse(code.to_string()))
            };
            let key = FlowKey {
                src: lookup(&r.home_institution)?,
                dst: lookup(&r.host_institution)?,
                gender: r.gender,
                stem: r.field_of_study.stem_class(),
                field: match split {
                    ConnectionSplit::StemClass => None,
                    ConnectionSplit::Field => Some(r.field_of_study),
                },
            };
            *weights.entry(key).or_insert(0u64) += 1;
        }
        Ok(Self::assemble(year, nodes, index, weights, split))
    }

    fn assemble(
        year: i32,
        nodes: Vec<NodeAttrs>,
        index: HashMap<InstitutionCode, NodeId>,
        weights: BTreeMap<FlowKey, u64>,
        split: ConnectionSplit,
    ) -> Self {
        let graph = Digraph::from_arcs(nodes.len(), weights.keys().map(|k| (k.src, k.dst)));
        Self {
            year,
            nodes,
            index,
            weights,
            graph,
            split,
        }
    }

    /// Keep only the weight keys matching `slice`; the universe is unchanged.
    pub fn subnetwork(&self, slice: &CohortSlice) -> Network {
        let weights = self
            .weights
            .iter()
            .filter(|(k, _)| slice.matches(k))
            .map(|(k, &w)| (*k, w))
            .collect();
        Self::assemble(self.year, self.nodes.clone(), self.index.clone(), weights, self.split)
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn split(&self) -> ConnectionSplit {
        self.split
    }

    /// Binary adjacency view.
    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[NodeAttrs] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &NodeAttrs {
        &self.nodes[id]
    }

    pub fn node_id(&self, code: &InstitutionCode) -> Option<NodeId> {
        self.index.get(code).copied()
    }

    pub fn weights(&self) -> &BTreeMap<FlowKey, u64> {
        &self.weights
    }

    /// Distinct ordered `(src, dst)` pairs with positive flow.
    pub fn partnerships(&self) -> usize {
        self.graph.arc_count()
    }

    /// Distinct weight keys: pairs split by gender and field class.
    pub fn active_connections(&self) -> usize {
        self.weights.len()
    }

    pub fn isolates(&self) -> usize {
        self.graph.isolate_count()
    }

    pub fn active(&self) -> usize {
        self.node_count() - self.isolates()
    }

    /// Total flow into each node.
    pub fn in_strengths(&self) -> Vec<u64> {
        let mut s = vec![0; self.node_count()];
        for (k, &w) in &self.weights {
            s[k.dst] += w;
        }
        s
    }

    pub fn in_strength(&self, code: &InstitutionCode) -> Option<u64> {
        let id = self.node_id(code)?;
        Some(self.weights.iter().filter(|(k, _)| k.dst == id).map(|(_, &w)| w).sum())
    }

    pub fn node_roles(&self) -> Vec<NodeRole> {
        (0..self.node_count())
            .map(|v| NodeRole::from_degrees(self.graph.in_degree(v), self.graph.out_degree(v)))
            .collect()
    }

    pub fn node_roles_by_code(&self) -> BTreeMap<InstitutionCode, NodeRole> {
        self.nodes
            .iter()
            .map(|n| n.code.clone())
            .zip(self.node_roles())
            .collect()
    }
}

/// `(sending, receiving)`: nodes with out-degree > 0 and in-degree > 0.
pub fn sending_receiving(roles: &[NodeRole]) -> (usize, usize) {
    (
        roles.iter().filter(|r| r.sends()).count(),
        roles.iter().filter(|r| r.receives()).count(),
    )
}

/// Free-function form of [`Network::build`] with the default connection split.
pub fn build_network<'a, I>(
    year: i32,
    records: I,
    universe: &Universe,
    geo: Option<&GeoTable>,
) -> Result<Network, NetworkError>
where
    I: IntoIterator<Item = &'a MobilityRecord>,
{
    Network::build(year, records, universe, geo, ConnectionSplit::default())
}

pub fn subnetwork(network: &Network, slice: &CohortSlice) -> Network {
    network.subnetwork(slice)
}

pub fn node_roles(network: &Network) -> BTreeMap<InstitutionCode, NodeRole> {
    network.node_roles_by_code()
}
