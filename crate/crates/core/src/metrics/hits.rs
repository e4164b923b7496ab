use super::MetricsError;
use crate::network::Digraph;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HitsParams {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for HitsParams {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: 100_000,
        }
    }
}

/// L2-normalized hub and authority scores, indexed by node.
#[derive(Debug, Clone, PartialEq)]
pub struct HitsScores {
    pub hubs: Vec<f64>,
    pub authorities: Vec<f64>,
    pub iterations: usize,
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Power iteration on the binary adjacency, starting from uniform hub
/// scores. Each step sets `auth = Aᵀ hub` and `hub = A auth`, normalizing
/// both. Stops once neither vector moves by `tolerance` or more in max-norm.
///
/// Running out of iterations yields [`MetricsError::HitsNotConverged`] with
/// the last iterate.
pub fn hits(graph: &Digraph, params: HitsParams) -> Result<HitsScores, MetricsError> {
    let n = graph.node_count();
    if graph.arc_count() == 0 {
        return Err(MetricsError::TooFewArcs { needed: 1, found: 0 });
    }
    let mut hubs = vec![1.0; n];
    let mut auths = vec![0.0; n];
    let mut next_auths = vec![0.0; n];
    let mut next_hubs = vec![0.0; n];
    for iteration in 1..=params.max_iterations {
        for (v, a) in next_auths.iter_mut().enumerate() {
            *a = graph.predecessors(v).iter().map(|&u| hubs[u]).sum();
        }
        normalize(&mut next_auths);
        for (u, h) in next_hubs.iter_mut().enumerate() {
            *h = graph.successors(u).iter().map(|&v| next_auths[v]).sum();
        }
        normalize(&mut next_hubs);
        let delta = max_abs_diff(&next_auths, &auths).max(max_abs_diff(&next_hubs, &hubs));
        std::mem::swap(&mut auths, &mut next_auths);
        std::mem::swap(&mut hubs, &mut next_hubs);
        if delta < params.tolerance {
            return Ok(HitsScores {
                hubs,
                authorities: auths,
                iterations: iteration,
            });
        }
    }
    Err(MetricsError::HitsNotConverged(Box::new(HitsScores {
        hubs,
        authorities: auths,
        iterations: params.max_iterations,
    })))
}
