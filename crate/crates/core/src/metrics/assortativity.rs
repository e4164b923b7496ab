use std::fmt;

use serde::{Deserialize, Serialize};

use super::MetricsError;
use crate::network::Digraph;

/// Which endpoint degrees are correlated across arcs: `(source, target)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegreePairing {
    /// Source out-degree against target in-degree.
    #[default]
    OutIn,
    OutOut,
    InIn,
    InOut,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Assortativity {
    Value(f64),
    /// One of the two degree sequences has zero variance.
    Undefined,
}

impl Assortativity {
    pub fn value(&self) -> Option<f64> {
        match self {
            Assortativity::Value(v) => Some(*v),
            Assortativity::Undefined => None,
        }
    }
}

impl fmt::Display for Assortativity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assortativity::Value(v) => write!(f, "{v}"),
            Assortativity::Undefined => f.write_str("Undefined"),
        }
    }
}

/// Pearson correlation, over the arcs of the binary graph, of the chosen
/// source and target degrees.
pub fn assortativity(graph: &Digraph, pairing: DegreePairing) -> Result<Assortativity, MetricsError> {
    let m = graph.arc_count();
    if m < 2 {
        return Err(MetricsError::TooFewArcs { needed: 2, found: m });
    }
    let out = |v| graph.out_degree(v) as i128;
    let inn = |v| graph.in_degree(v) as i128;
    let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0i128, 0i128, 0i128, 0i128, 0i128);
    for (s, d) in graph.arcs() {
        let (x, y) = match pairing {
            DegreePairing::OutIn => (out(s), inn(d)),
            DegreePairing::OutOut => (out(s), out(d)),
            DegreePairing::InIn => (inn(s), inn(d)),
            DegreePairing::InOut => (inn(s), out(d)),
        };
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    // Integer moments: m Σxy - Σx Σy etc. are exact.
    let m = m as i128;
    let cov = m * sxy - sx * sy;
    let var_x = m * sxx - sx * sx;
    let var_y = m * syy - sy * sy;
    if var_x == 0 || var_y == 0 {
        return Ok(Assortativity::Undefined);
    }
    let r = cov as f64 / ((var_x as f64).sqrt() * (var_y as f64).sqrt());
    Ok(Assortativity::Value(r.clamp(-1.0, 1.0)))
}
