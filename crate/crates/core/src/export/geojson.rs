use std::io::Write;

use serde::Serialize;

use super::ExportError;
use crate::network::{GeoTable, LonLat, Network, NodeRole};

#[derive(Serialize)]
struct FeatureCollection<'a> {
    #[serde(rename = "type")]
    kind: &'static str,
    features: Vec<Feature<'a>>,
}

#[derive(Serialize)]
struct Feature<'a> {
    #[serde(rename = "type")]
    kind: &'static str,
    geometry: Option<Geometry>,
    properties: Properties<'a>,
}

#[derive(Serialize)]
#[serde(tag = "type", content = "coordinates")]
enum Geometry {
    Point([f64; 2]),
    LineString([[f64; 2]; 2]),
}

#[derive(Serialize)]
#[serde(untagged)]
enum Properties<'a> {
    Node {
        institution: &'a str,
        country: &'a str,
        role: NodeRole,
    },
    Flow {
        src: &'a str,
        dst: &'a str,
        gender: &'static str,
        stem: &'static str,
        #[serde(skip_serializing_if = "Option::is_none")]
        field: Option<&'static str>,
        weight: u64,
    },
}

/// A GeoJSON document plus the institutions exported without coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct GeoJsonExport {
    pub document: serde_json::Value,
    pub missing_locations: Vec<String>,
}

fn position(p: LonLat) -> [f64; 2] {
    [p.lon, p.lat]
}

/// FeatureCollection with one Point per universe node and one LineString per
/// weighted flow key. Coordinates are `[lon, lat]`. A node without a location
/// (neither in `geo` nor attached at build time) gets a null geometry, as do
/// flows touching it.
///
/// `roles` is indexed by node id; it is usually `network.node_roles()`, but
/// may come from a different slice of the same universe.
pub fn export_geojson(network: &Network, roles: &[NodeRole], geo: Option<&GeoTable>) -> GeoJsonExport {
    let locations: Vec<Option<LonLat>> = network
        .nodes()
        .iter()
        .map(|n| geo.and_then(|g| g.get(&n.code)).map(|e| e.location).or(n.location))
        .collect();
    let mut missing_locations = Vec::new();
    let mut features = Vec::with_capacity(network.node_count() + network.weights().len());
    for (id, node) in network.nodes().iter().enumerate() {
        if locations[id].is_none() {
            missing_locations.push(node.code.to_string());
        }
        features.push(Feature {
            kind: "Feature",
            geometry: locations[id].map(|p| Geometry::Point(position(p))),
            properties: Properties::Node {
                institution: node.code.as_str(),
                country: node.country.as_str(),
                role: roles.get(id).copied().unwrap_or(NodeRole::Inactive),
            },
        });
    }
    for (key, &weight) in network.weights() {
        let geometry = locations[key.src]
            .zip(locations[key.dst])
            .map(|(a, b)| Geometry::LineString([position(a), position(b)]));
        features.push(Feature {
            kind: "Feature",
            geometry,
            properties: Properties::Flow {
                src: network.node(key.src).code.as_str(),
                dst: network.node(key.dst).code.as_str(),
                gender: key.gender.as_str(),
                stem: key.stem.as_str(),
                field: key.field.map(|f| f.code()),
                weight,
            },
        });
    }
    let collection = FeatureCollection {
        kind: "FeatureCollection",
        features,
    };
    GeoJsonExport {
        document: serde_json::to_value(&collection).expect("GeoJSON values are serializable"),
        missing_locations,
    }
}

/// Pretty-printed document followed by a newline.
pub fn write_geojson<W: Write>(mut sink: W, export: &GeoJsonExport) -> Result<(), ExportError> {
    serde_json::to_writer_pretty(&mut sink, &export.document).map_err(|e| ExportError::Write(e.to_string()))?;
    writeln!(sink).map_err(|e| ExportError::Write(e.to_string()))
}
