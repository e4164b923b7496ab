//! Library metrics compared against the oracle on one graph.

use super::oracle::{self, Mode};
use super::Matrix;
use mobnet::metrics::{
    assortativity, closeness_centralization, degree_centralization, density, hits, reciprocity, top_k, Assortativity,
    CentralityMode, DegreePairing, Direction, HitsParams,
};
use num_rational::Ratio;

fn frac(f: oracle::Frac) -> Ratio<u64> {
    Ratio::new(f.0, f.1)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// Compare every metric on one graph; returns a description of the first
/// mismatch.
pub fn check(m: &Matrix) -> Result<(), String> {
    let g = m.digraph();
    let label = |what: &str| format!("{what} on {:?}", m.arcs());

    if density(&g).ok() != oracle::density(m).map(frac) {
        return Err(label("density"));
    }
    for (mode, omode) in [
        (CentralityMode::Out, Mode::Out),
        (CentralityMode::In, Mode::In),
        (CentralityMode::All, Mode::All),
    ] {
        let (lib_d, ora_d) = (
            degree_centralization(&g, mode).ok(),
            oracle::degree_centralization(m, omode),
        );
        if lib_d != ora_d.map(frac) {
            return Err(label(&format!("degree centralization {mode:?}")));
        }
    }
    for (mode, omode) in [
        (CentralityMode::Out, Mode::Out),
        (CentralityMode::In, Mode::In),
        (CentralityMode::All, Mode::All),
    ] {
        match (
            closeness_centralization(&g, mode).ok(),
            oracle::closeness_centralization(m, omode),
        ) {
            (None, None) => {}
            (Some(a), Some(b)) if close(a, b, 1e-12) && (-1e-12..=1.0 + 1e-12).contains(&a) => {}
            (a, b) => return Err(label(&format!("closeness {mode:?}: {a:?} vs {b:?}"))),
        }
    }
    match (assortativity(&g, DegreePairing::OutIn).ok(), oracle::assortativity(m)) {
        (None, None) | (Some(Assortativity::Undefined), Some(None)) => {}
        (Some(Assortativity::Value(a)), Some(Some(b))) if close(a, b, 1e-12) => {}
        (a, b) => return Err(label(&format!("assortativity {a:?} vs {b:?}"))),
    }
    if reciprocity(&g).ok() != oracle::reciprocity(m).map(frac) {
        return Err(label("reciprocity"));
    }

    // A network needs at least one institution pair.
    let net = if m.n() >= 2 { m.network() } else { return hits_check(m) };
    for (dir, out) in [(Direction::Out, true), (Direction::In, false)] {
        let full = oracle::ranking(m, out);
        for k in 1..=m.n() + 1 {
            let got: Vec<(usize, u64)> = top_k(&net, dir, k)
                .unwrap()
                .iter()
                .map(|e| (net.node_id(&e.institution).unwrap(), e.degree as u64))
                .collect();
            if got[..] != full[..k.min(full.len())] {
                return Err(label(&format!("top_k {dir:?} k={k}")));
            }
        }
    }
    hits_check(m)
}

pub fn hits_check(m: &Matrix) -> Result<(), String> {
    let label = |what: &str| format!("{what} on {:?}", m.arcs());
    match (hits(&m.digraph(), HitsParams::default()), oracle::hits(m)) {
        (Err(_), None) => {}
        (Ok(s), Some((hubs, auths))) => {
            let diff = s
                .hubs
                .iter()
                .zip(&hubs)
                .chain(s.authorities.iter().zip(&auths))
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            if diff > 1e-9 {
                return Err(label(&format!("hits differs by {diff}")));
            }
        }
        (a, b) => return Err(label(&format!("hits {:?} vs {:?}", a.is_ok(), b.is_some()))),
    }
    Ok(())
}
