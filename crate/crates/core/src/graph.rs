//! Weighted spin graphs and the geometries used by the numerical studies.
//!
//! A [`SpinGraph`] holds `N` spin-1/2 sites and one exchange coupling per
//! unordered pair. Couplings given more than once for the same pair are
//! summed at construction, so generators can expand lattice sums term by
//! term and let coincident wrap-around terms accumulate.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on reseeded attempts in [`random_graph`].
pub const RANDOM_GRAPH_ATTEMPTS: usize = 1000;

/// One exchange coupling `J * S_i . S_j` with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub coupling: f64,
}

/// `N` spins with isotropic exchange couplings on a weighted edge list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GraphFile", into = "GraphFile")]
pub struct SpinGraph {
    n_spins: usize,
    edges: Vec<Edge>,
}

/// On-disk form: `{"n": N, "edges": [[i, j, J], ...]}`.
#[derive(Serialize, Deserialize)]
struct GraphFile {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl TryFrom<GraphFile> for SpinGraph {
    type Error = Error;

    fn try_from(f: GraphFile) -> Result<Self> {
        SpinGraph::new(f.n, f.edges)
    }
}

impl From<SpinGraph> for GraphFile {
    fn from(g: SpinGraph) -> Self {
        GraphFile {
            n: g.n_spins,
            edges: g.edges.iter().map(|e| (e.i, e.j, e.coupling)).collect(),
        }
    }
}

impl SpinGraph {
    /// Builds a graph from `(i, j, J)` terms. Pairs may be given in either
    /// order; repeated pairs are summed.
    pub fn new<I>(n_spins: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        if n_spins == 0 {
            return Err(Error::InvalidGraph(
                "a graph needs at least one spin".into(),
            ));
        }
        let mut acc: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (a, b, coupling) in terms {
            for index in [a, b] {
                if index >= n_spins {
                    return Err(Error::SiteOutOfRange { index, n_spins });
                }
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-coupling on site {a}")));
            }
            if !coupling.is_finite() {
                return Err(Error::InvalidGraph(format!(
                    "non-finite coupling on ({a}, {b})"
                )));
            }
            *acc.entry((a.min(b), a.max(b))).or_insert(0.0) += coupling;
        }
        let edges = acc
            .into_iter()
            .map(|((i, j), coupling)| Edge { i, j, coupling })
            .collect();
        Ok(SpinGraph { n_spins, edges })
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    /// Edges sorted by `(i, j)`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Coupling on the pair, zero when absent.
    pub fn coupling(&self, a: usize, b: usize) -> f64 {
        let key = (a.min(b), a.max(b));
        self.edges
            .binary_search_by(|e| (e.i, e.j).cmp(&key))
            .map(|k| self.edges[k].coupling)
            .unwrap_or(0.0)
    }

    /// Sum of all couplings. A quarter of this is the energy of every
    /// fully symmetric state.
    pub fn total_coupling(&self) -> f64 {
        self.edges.iter().map(|e| e.coupling).sum()
    }

    /// All couplings nonpositive.
    pub fn is_ferromagnetic(&self) -> bool {
        self.edges.iter().all(|e| e.coupling <= 0.0)
    }

    /// Number of nonzero couplings touching `site`.
    pub fn degree(&self, site: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e.coupling != 0.0 && (e.i == site || e.j == site))
            .count()
    }

    /// True iff the nonzero couplings connect all sites.
    pub fn is_connected(&self) -> bool {
        is_connected(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        let s = fs::read_to_string(path).map_err(|source| Error::File {
            path: path.to_owned(),
            source,
        })?;
        Self::from_json(&s)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()).map_err(|source| Error::File {
            path: path.to_owned(),
            source,
        })
    }
}

/// Connectivity over strictly nonzero couplings.
pub fn is_connected(g: &SpinGraph) -> bool {
    let n = g.n_spins;
    let mut adj = vec![Vec::new(); n];
    for e in g.edges.iter().filter(|e| e.coupling != 0.0) {
        adj[e.i].push(e.j);
        adj[e.j].push(e.i);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}

/// Couplings of the extended Majumdar-Ghosh chain
/// `g1 S_i.S_{i+1} + g2 S_i.S_{i+2} + g3 S_i.S_{i+3} + B S_i^z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XmgParams {
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
    pub b_field: f64,
    pub n_spins: usize,
    pub periodic: bool,
}

impl XmgParams {
    pub fn new(n_spins: usize, g1: f64, g2: f64, g3: f64, periodic: bool) -> Self {
        XmgParams {
            g1,
            g2,
            g3,
            b_field: 0.0,
            n_spins,
            periodic,
        }
    }

    pub fn with_field(mut self, b_field: f64) -> Self {
        self.b_field = b_field;
        self
    }

    fn check(&self) -> Result<()> {
        if self.n_spins < 2 {
            return Err(Error::InvalidGraph(format!(
                "chain needs at least 2 spins, got {}",
                self.n_spins
            )));
        }
        Ok(())
    }

    /// `(range, g)` for the nonzero couplings.
    fn couplings(&self) -> impl Iterator<Item = (usize, f64)> {
        [(1, self.g1), (2, self.g2), (3, self.g3)]
            .into_iter()
            .filter(|&(_, g)| g != 0.0)
    }
}

/// Term-by-term expansion of the periodic chain. Pairs reached by more
/// than one term accumulate; ranges with `g_k = 0` add no edges. A term that wraps onto its own site
/// (`k` a multiple of `N`) is the constant `3/4 g_k` and is dropped.
/// The field is not stored in the graph.
pub fn ring_xmg(p: &XmgParams) -> Result<SpinGraph> {
    p.check()?;
    if !p.periodic {
        return Err(Error::InvalidGraph(
            "ring_xmg requires periodic = true".into(),
        ));
    }
    let n = p.n_spins;
    let mut terms = Vec::new();
    for (k, g) in p.couplings() {
        for i in 0..n {
            let j = (i + k) % n;
            if j != i {
                terms.push((i, j, g));
            }
        }
    }
    SpinGraph::new(n, terms)
}

/// Open-boundary version of [`ring_xmg`]: terms with `i + k > N - 1` are
/// omitted.
pub fn open_chain_xmg(p: &XmgParams) -> Result<SpinGraph> {
    p.check()?;
    if p.periodic {
        return Err(Error::InvalidGraph(
            "open_chain_xmg requires periodic = false".into(),
        ));
    }
    let n = p.n_spins;
    let mut terms = Vec::new();
    for (k, g) in p.couplings() {
        for i in 0..n.saturating_sub(k) {
            terms.push((i, i + k, g));
        }
    }
    SpinGraph::new(n, terms)
}

/// Dispatches on `p.periodic`.
pub fn xmg_graph(p: &XmgParams) -> Result<SpinGraph> {
    if p.periodic {
        ring_xmg(p)
    } else {
        open_chain_xmg(p)
    }
}

/// Nearest-neighbour `rows x cols` lattice, site `r * cols + c`. With
/// `periodic`, torus wrap edges are added; on a width-2 dimension the
/// wrap edge coincides with the bulk edge and the couplings add.
pub fn grid_graph(rows: usize, cols: usize, periodic: bool, coupling: f64) -> Result<SpinGraph> {
    if rows == 0 || cols == 0 || rows * cols < 2 {
        return Err(Error::InvalidGraph(format!(
            "grid {rows}x{cols} needs at least 2 sites"
        )));
    }
    let site = |r: usize, c: usize| r * cols + c;
    let mut terms = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                terms.push((site(r, c), site(r, c + 1), coupling));
            } else if periodic && cols > 1 {
                terms.push((site(r, c), site(r, 0), coupling));
            }
            if r + 1 < rows {
                terms.push((site(r, c), site(r + 1, c), coupling));
            } else if periodic && rows > 1 {
                terms.push((site(r, c), site(0, c), coupling));
            }
        }
    }
    SpinGraph::new(rows * cols, terms)
}

/// Eight spins on the corners of a cube; vertices are 3-bit labels and
/// edges join labels differing in one bit.
pub fn cube_graph(coupling: f64) -> SpinGraph {
    let mut terms = Vec::with_capacity(12);
    for v in 0..8usize {
        for bit in 0..3 {
            let w = v ^ (1 << bit);
            if v < w {
                terms.push((v, w, coupling));
            }
        }
    }
    SpinGraph::new(8, terms).expect("cube edges are valid")
}

/// Site 0 coupled to every other site; no couplings among the leaves.
pub fn star_graph(n: usize, coupling: f64) -> Result<SpinGraph> {
    if n < 2 {
        return Err(Error::InvalidGraph("star needs at least 2 spins".into()));
    }
    SpinGraph::new(n, (1..n).map(|leaf| (0, leaf, coupling)))
}

/// Erdős–Rényi graph with couplings drawn uniformly from `j_range`.
///
/// Draws come from a ChaCha8 stream seeded with `seed`. If a draw is not
/// connected the stream continues with a fresh draw, up to
/// [`RANDOM_GRAPH_ATTEMPTS`] times.
pub fn random_graph(
    n: usize,
    edge_probability: f64,
    j_range: (f64, f64),
    seed: u64,
) -> Result<SpinGraph> {
    let (lo, hi) = j_range;
    if n < 2 {
        return Err(Error::InvalidGraph(
            "random graph needs at least 2 spins".into(),
        ));
    }
    if !(0.0..=1.0).contains(&edge_probability) {
        return Err(Error::InvalidGraph(format!(
            "edge probability {edge_probability} outside [0, 1]"
        )));
    }
    if !(lo <= hi && hi <= 0.0) {
        return Err(Error::InvalidGraph(format!(
            "coupling range ({lo}, {hi}) must satisfy lo <= hi <= 0"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_GRAPH_ATTEMPTS {
        let mut terms = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random::<f64>() < edge_probability {
                    let coupling = if lo == hi {
                        lo
                    } else {
                        rng.random_range(lo..=hi)
                    };
                    terms.push((i, j, coupling));
                }
            }
        }
        let g = SpinGraph::new(n, terms)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::NoConnectedGraph {
        attempts: RANDOM_GRAPH_ATTEMPTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(g: &SpinGraph) -> Vec<(usize, usize, f64)> {
        g.edges().iter().map(|e| (e.i, e.j, e.coupling)).collect()
    }

    #[test]
    fn ring_nearest_neighbour() {
        let g = ring_xmg(&XmgParams::new(4, -1.0, 0.0, 0.0, true)).unwrap();
        assert_eq!(
            pairs(&g),
            vec![(0, 1, -1.0), (0, 3, -1.0), (1, 2, -1.0), (2, 3, -1.0)]
        );
    }

    #[test]
    fn ring_second_neighbour_accumulates_on_four_sites() {
        let g = ring_xmg(&XmgParams::new(4, 0.0, -1.0, 0.0, true)).unwrap();
        assert_eq!(pairs(&g), vec![(0, 2, -2.0), (1, 3, -2.0)]);
    }

    #[test]
    fn ring_six_all_ranges() {
        let g = ring_xmg(&XmgParams::new(6, -1.0, -1.0, -1.0, true)).unwrap();
        assert_eq!(g.edges().len(), 15);
        assert_eq!(g.coupling(0, 3), -2.0);
        assert_eq!(g.coupling(1, 4), -2.0);
        assert_eq!(g.coupling(0, 1), -1.0);
        assert_eq!(g.coupling(0, 2), -1.0);
        // 6 + 6 + 6 terms
        assert!((g.total_coupling() + 18.0).abs() < 1e-15);
    }

    #[test]
    fn ring_drops_self_terms() {
        // k = 2 on two sites and k = 3 on three sites are constants
        let g = ring_xmg(&XmgParams::new(2, -1.0, -1.0, -1.0, true)).unwrap();
        assert_eq!(pairs(&g), vec![(0, 1, -4.0)]);
        let g = ring_xmg(&XmgParams::new(3, -1.0, 0.0, -5.0, true)).unwrap();
        assert_eq!(g.edges().len(), 3);
        assert!((g.total_coupling() + 3.0).abs() < 1e-15);
    }

    #[test]
    fn open_chain_examples() {
        let g = open_chain_xmg(&XmgParams::new(2, -1.0, 0.0, 0.0, false)).unwrap();
        assert_eq!(pairs(&g), vec![(0, 1, -1.0)]);

        let g = open_chain_xmg(&XmgParams::new(5, -1.0, -1.0, 0.0, false)).unwrap();
        assert_eq!(g.edges().len(), 7);
        assert!(g.edges().iter().all(|e| e.coupling == -1.0));

        let g = open_chain_xmg(&XmgParams::new(4, -1.0, -1.0, -1.0, false)).unwrap();
        assert_eq!(g.edges().len(), 6);
        assert!(g.edges().iter().all(|e| e.coupling == -1.0));
    }

    #[test]
    fn chain_periodicity_is_checked() {
        assert!(ring_xmg(&XmgParams::new(4, -1.0, 0.0, 0.0, false)).is_err());
        assert!(open_chain_xmg(&XmgParams::new(4, -1.0, 0.0, 0.0, true)).is_err());
        assert!(ring_xmg(&XmgParams::new(1, -1.0, 0.0, 0.0, true)).is_err());
    }

    #[test]
    fn ring_and_open_differ_by_wrap_edge() {
        for n in 3..10 {
            let ring = ring_xmg(&XmgParams::new(n, -1.0, 0.0, 0.0, true)).unwrap();
            let open = open_chain_xmg(&XmgParams::new(n, -1.0, 0.0, 0.0, false)).unwrap();
            assert_eq!(ring.edges().len(), open.edges().len() + 1);
            assert_eq!(ring.coupling(0, n - 1), -1.0);
            assert_eq!(open.coupling(0, n - 1), if n == 2 { -1.0 } else { 0.0 });
        }
    }

    #[test]
    fn grid_counts() {
        assert_eq!(grid_graph(3, 3, false, -1.0).unwrap().edges().len(), 12);
        assert_eq!(grid_graph(3, 3, true, -1.0).unwrap().edges().len(), 18);
        assert_eq!(grid_graph(1, 2, false, -1.0).unwrap().edges().len(), 1);
        assert!(grid_graph(1, 1, false, -1.0).is_err());
        // width-2 wrap coincides with the bulk edge
        let g = grid_graph(1, 2, true, -1.0).unwrap();
        assert_eq!(pairs(&g), vec![(0, 1, -2.0)]);
    }

    #[test]
    fn cube_shape() {
        let g = cube_graph(-1.0);
        assert_eq!(g.n_spins(), 8);
        assert_eq!(g.edges().len(), 12);
        assert!(g.edges().iter().all(|e| e.coupling == -1.0));
        assert!((0..8).all(|v| g.degree(v) == 3));
        assert!(g.is_connected());
    }

    #[test]
    fn random_graph_examples() {
        let g = random_graph(4, 1.0, (-1.0, -1.0), 123).unwrap();
        assert_eq!(g.edges().len(), 6);
        assert!(g.edges().iter().all(|e| e.coupling == -1.0));

        let a = random_graph(5, 0.5, (-2.0, 0.0), 7).unwrap();
        let b = random_graph(5, 0.5, (-2.0, 0.0), 7).unwrap();
        assert_eq!(a, b);
        assert!(a.is_ferromagnetic());

        assert!(matches!(
            random_graph(3, 0.0, (-1.0, 0.0), 1),
            Err(Error::NoConnectedGraph { .. })
        ));
        assert!(random_graph(3, 0.5, (-1.0, 0.5), 1).is_err());
        assert!(random_graph(3, 1.5, (-1.0, 0.0), 1).is_err());
    }

    #[test]
    fn connectivity() {
        let ring = ring_xmg(&XmgParams::new(5, -1.0, 0.0, 0.0, true)).unwrap();
        assert!(ring.is_connected());
        let split = SpinGraph::new(4, [(0, 1, -1.0), (2, 3, -1.0)]).unwrap();
        assert!(!split.is_connected());
        let cut = SpinGraph::new(4, [(0, 1, -1.0), (1, 2, 0.0), (2, 3, -1.0)]).unwrap();
        assert!(!cut.is_connected());
        assert!(star_graph(6, -1.0).unwrap().is_connected());
    }

    #[test]
    fn construction_validates() {
        assert!(SpinGraph::new(3, [(0, 3, -1.0)]).is_err());
        assert!(SpinGraph::new(3, [(1, 1, -1.0)]).is_err());
        assert!(SpinGraph::new(3, [(0, 1, f64::NAN)]).is_err());
        let g = SpinGraph::new(3, [(2, 0, -1.0), (0, 2, -0.5)]).unwrap();
        assert_eq!(pairs(&g), vec![(0, 2, -1.5)]);
    }

    #[test]
    fn json_format() {
        let g = SpinGraph::from_json(r#"{"n": 3, "edges": [[0, 1, -1.0], [1, 2, -0.5]]}"#).unwrap();
        assert_eq!(g.n_spins(), 3);
        assert_eq!(g.coupling(1, 2), -0.5);
        assert_eq!(SpinGraph::from_json(&g.to_json()).unwrap(), g);
        assert!(SpinGraph::from_json(r#"{"n": 2, "edges": [[0, 2, -1.0]]}"#).is_err());
    }
}
