use std::collections::BTreeSet;

/// Index of a node in a network's universe.
pub type NodeId = usize;

/// Binary directed graph without self-loops, stored as sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    out: Vec<Vec<NodeId>>,
    inc: Vec<Vec<NodeId>>,
    arc_count: usize,
}

impl Digraph {
    /// Self-loops and duplicate arcs are dropped.
    ///
    /// # Panics
    ///
    /// If an endpoint is `>= n`.
    pub fn from_arcs<I: IntoIterator<Item = (NodeId, NodeId)>>(n: usize, arcs: I) -> Self {
        let set: BTreeSet<(NodeId, NodeId)> = arcs.into_iter().filter(|(s, d)| s != d).collect();
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for &(s, d) in &set {
            assert!(s < n && d < n, "arc ({s}, {d}) outside 0..{n}");
            out[s].push(d);
            inc[d].push(s);
        }
        for list in &mut inc {
            list.sort_unstable();
        }
        Self {
            out,
            inc,
            arc_count: set.len(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.out.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn successors(&self, v: NodeId) -> &[NodeId] {
        &self.out[v]
    }

    pub fn predecessors(&self, v: NodeId) -> &[NodeId] {
        &self.inc[v]
    }

    pub fn out_degree(&self, v: NodeId) -> usize {
        self.out[v].len()
    }

    pub fn in_degree(&self, v: NodeId) -> usize {
        self.inc[v].len()
    }

    pub fn has_arc(&self, s: NodeId, d: NodeId) -> bool {
        self.out[s].binary_search(&d).is_ok()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(s, ds)| ds.iter().map(move |&d| (s, d)))
    }

    /// Nodes with no incoming and no outgoing arc.
    pub fn isolate_count(&self) -> usize {
        (0..self.node_count())
            .filter(|&v| self.out[v].is_empty() && self.inc[v].is_empty())
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drops_loops_and_duplicates() {
        let g = Digraph::from_arcs(3, [(0, 1), (0, 1), (1, 1), (2, 0)]);
        assert_eq!(g.arc_count(), 2);
        assert!(g.has_arc(0, 1));
        assert!(!g.has_arc(1, 0));
        assert_eq!(g.predecessors(0), &[2]);
        assert_eq!(g.isolate_count(), 0);
        assert_eq!(g.arcs().collect::<Vec<_>>(), vec![(0, 1), (2, 0)]);
    }
}
