use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use super::ExportError;
use crate::network::{CohortSlice, Network};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz digraph of the `slice` sub-network: one node line per universe
/// member in code order, one edge line per arc labelled with its summed
/// weight.
pub fn export_dot(network: &Network, slice: &CohortSlice) -> String {
    let sub = network.subnetwork(slice);
    let mut arcs: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for (key, &w) in sub.weights() {
        *arcs.entry((key.src, key.dst)).or_default() += w;
    }
    let mut out = String::new();
    let name = format!("mobility_{}_{}", sub.year(), slice).replace(' ', "_");
    writeln!(out, "digraph {} {{", quote(&name)).unwrap();
    for node in sub.nodes() {
        writeln!(
            out,
            "  {} [country={}];",
            quote(node.code.as_str()),
            quote(node.country.as_str())
        )
        .unwrap();
    }
    for ((s, d), w) in arcs {
        writeln!(
            out,
            "  {} -> {} [label=\"{w}\", weight={w}];",
            quote(sub.node(s).code.as_str()),
            quote(sub.node(d).code.as_str())
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn write_dot<W: Write>(mut sink: W, network: &Network, slice: &CohortSlice) -> Result<(), ExportError> {
    sink.write_all(export_dot(network, slice).as_bytes())
        .map_err(|e| ExportError::Write(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::testing::sn;
    use crate::ingest::Gender;
    use crate::network::{build_universe, ConnectionSplit, UniversePolicy};

    #[test]
    fn one_arc() {
        let recs = [
            sn(2008, "A X01", "B X01", Gender::F, true),
            sn(2008, "A X01", "B X01", Gender::M, false),
        ];
        let u = build_universe(&recs, UniversePolicy::SpecialNeeds).unwrap();
        let net = Network::build(2008, &recs, &u, None, ConnectionSplit::StemClass).unwrap();
        let dot = export_dot(&net, &CohortSlice::ALL);
        let lines: Vec<_> = dot.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[1], "  \"A X01\" [country=\"AX\"];");
        assert_eq!(lines[3], "  \"A X01\" -> \"B X01\" [label=\"2\", weight=2];");
        let female = export_dot(&net, &CohortSlice::gender(Gender::F));
        assert!(female.contains("weight=1]"));
        let empty = export_dot(
            &net.subnetwork(&CohortSlice::gender(Gender::Unknown)),
            &CohortSlice::ALL,
        );
        assert_eq!(empty.lines().filter(|l| l.contains("->")).count(), 0);
    }
}
