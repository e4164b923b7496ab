//! Shared test helpers: fixture paths, random graphs and a brute-force
//! oracle that works on a dense adjacency matrix and shares no code with the
//! library's metric implementations.

#![allow(dead_code)]

use std::path::PathBuf;

use mobnet::ingest::testing::sn;
use mobnet::ingest::Gender;
use mobnet::network::{build_universe, ConnectionSplit, Digraph, Network, UniversePolicy};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;

pub mod check;

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

/// Dense boolean adjacency; `adj[i][j]` is the arc `i -> j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub adj: Vec<Vec<bool>>,
}

impl Matrix {
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n() {
            for j in 0..self.n() {
                if self.adj[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn digraph(&self) -> Digraph {
        Digraph::from_arcs(self.n(), self.arcs())
    }

    /// Network over institutions `N00`, `N01`, ... (code order equals index
    /// order), one special-needs record per arc.
    pub fn network(&self) -> Network {
        let codes: Vec<String> = (0..self.n()).map(|i| format!("N{i:02}")).collect();
        let records: Vec<_> = self
            .arcs()
            .into_iter()
            .map(|(i, j)| sn(2008, &codes[i], &codes[j], Gender::F, false))
            .collect();
        // Records touching every node so the universe has size n.
        let anchors: Vec<_> = (0..self.n())
            .map(|i| sn(2008, &codes[i], &codes[(i + 1) % self.n()], Gender::F, false))
            .collect();
        let universe = build_universe(records.iter().chain(&anchors), UniversePolicy::SpecialNeeds).unwrap();
        Network::build(2008, &records, &universe, None, ConnectionSplit::StemClass).unwrap()
    }

    pub fn out_degree(&self, v: usize) -> u64 {
        self.adj[v].iter().filter(|&&a| a).count() as u64
    }

    pub fn in_degree(&self, v: usize) -> u64 {
        (0..self.n()).filter(|&u| self.adj[u][v]).count() as u64
    }
}

/// Every digraph without loops on `n` nodes, `2^(n(n-1))` of them.
pub fn all_digraphs(n: usize) -> impl Iterator<Item = Matrix> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let count = 1u64 << pairs.len();
    (0..count).map(move |mask| {
        let mut adj = vec![vec![false; n]; n];
        for (bit, &(i, j)) in pairs.iter().enumerate() {
            adj[i][j] = mask >> bit & 1 == 1;
        }
        Matrix { adj }
    })
}

pub fn random_digraph<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let p: f64 = rng.gen_range(0.1..0.7);
    let adj = (0..n)
        .map(|i| (0..n).map(|j| i != j && rng.gen_bool(p)).collect())
        .collect();
    Matrix { adj }
}

pub mod oracle {
    use super::*;

    /// `(numerator, denominator)` before reduction.
    pub type Frac = (u64, u64);

    pub fn density(m: &Matrix) -> Option<Frac> {
        let n = m.n() as u64;
        (n >= 2).then(|| (m.arcs().len() as u64, n * (n - 1)))
    }

    pub enum Mode {
        Out,
        In,
        All,
    }

    pub fn degree_centralization(m: &Matrix, mode: Mode) -> Option<Frac> {
        let n = m.n();
        if n < 3 {
            return None;
        }
        let deg: Vec<u64> = (0..n)
            .map(|v| match mode {
                Mode::Out => m.out_degree(v),
                Mode::In => m.in_degree(v),
                Mode::All => m.out_degree(v) + m.in_degree(v),
            })
            .collect();
        let top = *deg.iter().max().unwrap();
        let spread = deg.iter().map(|d| top - d).sum();
        let n = n as u64;
        let worst = match mode {
            // Star: the hub reaches n-1 others, each leaf scores 0 (or 1).
            Mode::Out | Mode::In => (n - 1) * (n - 1),
            Mode::All => (n - 1) * (2 * (n - 1) - 2),
        };
        Some((spread, worst))
    }

    /// Floyd-Warshall shortest paths; `None` means unreachable.
    fn distances(adj: &[Vec<bool>]) -> Vec<Vec<Option<u32>>> {
        let n = adj.len();
        let mut d = vec![vec![None; n]; n];
        for i in 0..n {
            d[i][i] = Some(0);
            for j in 0..n {
                if adj[i][j] && i != j {
                    d[i][j] = Some(1);
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                        if d[i][j].is_none_or(|c| a + b < c) {
                            d[i][j] = Some(a + b);
                        }
                    }
                }
            }
        }
        d
    }

    pub fn closeness(m: &Matrix, mode: Mode) -> Vec<f64> {
        let n = m.n();
        let adj: Vec<Vec<bool>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match mode {
                        Mode::Out => m.adj[i][j],
                        Mode::In => m.adj[j][i],
                        Mode::All => m.adj[i][j] || m.adj[j][i],
                    })
                    .collect()
            })
            .collect();
        let d = distances(&adj);
        (0..n)
            .map(|i| {
                let s: f64 = (0..n)
                    .filter(|&j| j != i)
                    .filter_map(|j| d[i][j].map(|x| 1.0 / x as f64))
                    .sum();
                s / (n - 1) as f64
            })
            .collect()
    }

    pub fn closeness_centralization(m: &Matrix, mode: Mode) -> Option<f64> {
        let n = m.n();
        if n < 3 {
            return None;
        }
        let undirected = matches!(mode, Mode::All);
        let c = closeness(m, mode);
        let top = c.iter().cloned().fold(f64::MIN, f64::max);
        let spread: f64 = c.iter().map(|x| top - x).sum();
        // Directed star: hub 1, leaves 0. Undirected star: hub 1, each leaf
        // (1 + (n-2)/2) / (n-1).
        let worst = if undirected {
            let leaf = (1.0 + (n as f64 - 2.0) / 2.0) / (n as f64 - 1.0);
            (n as f64 - 1.0) * (1.0 - leaf)
        } else {
            n as f64 - 1.0
        };
        Some(spread / worst)
    }

    /// Pearson correlation of source out-degree and target in-degree over
    /// arcs, two-pass. `None` for fewer than two arcs, `Some(None)` when a
    /// variance is zero.
    pub fn assortativity(m: &Matrix) -> Option<Option<f64>> {
        let arcs = m.arcs();
        if arcs.len() < 2 {
            return None;
        }
        let xs: Vec<f64> = arcs.iter().map(|&(s, _)| m.out_degree(s) as f64).collect();
        let ys: Vec<f64> = arcs.iter().map(|&(_, t)| m.in_degree(t) as f64).collect();
        let len = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / len;
        let my = ys.iter().sum::<f64>() / len;
        let vx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
        if vx.abs() < 1e-12 || vy.abs() < 1e-12 {
            return Some(None);
        }
        let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        Some(Some(cov / (vx.sqrt() * vy.sqrt())))
    }

    /// Dyad census: 2 * mutual / (2 * mutual + asymmetric).
    pub fn reciprocity(m: &Matrix) -> Option<Frac> {
        let (mut mutual, mut asym) = (0u64, 0u64);
        for i in 0..m.n() {
            for j in i + 1..m.n() {
                match (m.adj[i][j], m.adj[j][i]) {
                    (true, true) => mutual += 1,
                    (true, false) | (false, true) => asym += 1,
                    _ => {}
                }
            }
        }
        let arcs = 2 * mutual + asym;
        (arcs > 0).then_some((2 * mutual, arcs))
    }

    /// Full ranking by sorting `(degree desc, index asc)`, zero degrees out.
    pub fn ranking(m: &Matrix, out: bool) -> Vec<(usize, u64)> {
        let mut all: Vec<(usize, u64)> = (0..m.n())
            .map(|v| (v, if out { m.out_degree(v) } else { m.in_degree(v) }))
            .filter(|&(_, d)| d > 0)
            .collect();
        all.sort_by_key(|&(v, d)| (std::cmp::Reverse(d), v));
        all
    }

    /// Projection of `start` onto the dominant eigenspace of the symmetric
    /// matrix `s`, L2-normalized.
    fn dominant_projection(s: &DMatrix<f64>, start: &DVector<f64>) -> DVector<f64> {
        let eig = SymmetricEigen::new(s.clone());
        let top = eig.eigenvalues.iter().cloned().fold(f64::MIN, f64::max);
        let mut p = DVector::zeros(s.nrows());
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            if (top - lambda).abs() <= 1e-9 * top.max(1.0) {
                let v = eig.eigenvectors.column(k);
                p += v * v.dot(start);
            }
        }
        let norm = p.norm();
        if norm > 0.0 {
            p / norm
        } else {
            p
        }
    }

    /// `(hubs, authorities)` as the limits of power iteration from uniform
    /// hubs: hubs in the dominant eigenspace of `A Aᵀ`, authorities in that
    /// of `Aᵀ A`.
    pub fn hits(m: &Matrix) -> Option<(Vec<f64>, Vec<f64>)> {
        let n = m.n();
        if m.arcs().is_empty() {
            return None;
        }
        let a = DMatrix::from_fn(n, n, |i, j| if m.adj[i][j] { 1.0 } else { 0.0 });
        let ones = DVector::from_element(n, 1.0);
        let hubs = dominant_projection(&(&a * a.transpose()), &ones);
        let auths = dominant_projection(&(a.transpose() * &a), &(a.transpose() * &ones));
        Some((hubs.iter().cloned().collect(), auths.iter().cloned().collect()))
    }
}
