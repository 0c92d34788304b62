//! Network topologies: square 2D grid, square torus and Watts-Strogatz
//! small-world graphs.
//!
//! All builders return a [`Graph`] whose adjacency lists are sorted, symmetric,
//! free of self-loops and duplicates, and connected.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::rng::{SimRng, StreamTree};

/// Number of regeneration attempts before Watts-Strogatz gives up on
/// producing a connected sample.
pub const WS_MAX_ATTEMPTS: usize = 100;

/// Undirected simple graph stored as sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an undirected edge list. Rejects self-loops,
    /// duplicate edges and out-of-range endpoints. Connectivity is not
    /// required here; see [`Graph::is_connected`].
    pub fn from_edges(node_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); node_count];
        for &(a, b) in edges {
            if a >= node_count || b >= node_count {
                return Err(Error::InvalidTopology(format!("edge ({a}, {b}) out of range for {node_count} nodes")));
            }
            if a == b {
                return Err(Error::InvalidTopology(format!("self-loop at node {a}")));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for (i, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidTopology(format!("duplicate edge at node {i}")));
            }
        }
        Ok(Self { adjacency })
    }

    fn from_sorted_adjacency(adjacency: Vec<Vec<usize>>) -> Self {
        let g = Self { adjacency };
        debug_assert!(g.check_simple().is_ok());
        g
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    #[inline]
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Position of `neighbor` inside `node`'s adjacency list.
    pub fn neighbor_slot(&self, node: usize, neighbor: usize) -> Option<usize> {
        self.adjacency[node].binary_search(&neighbor).ok()
    }

    /// Sorted `(degree, count)` pairs.
    pub fn degree_histogram(&self) -> Vec<(usize, usize)> {
        let mut hist = std::collections::BTreeMap::new();
        for list in &self.adjacency {
            *hist.entry(list.len()).or_insert(0usize) += 1;
        }
        hist.into_iter().collect()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == n
    }

    /// Hop distances from `source`; `usize::MAX` for unreachable nodes.
    pub fn bfs_distances(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.node_count()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    fn check_simple(&self) -> Result<()> {
        for (i, list) in self.adjacency.iter().enumerate() {
            for w in list.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::InvalidTopology(format!("node {i}: unsorted or duplicate adjacency")));
                }
            }
            for &j in list {
                if j == i {
                    return Err(Error::InvalidTopology(format!("self-loop at node {i}")));
                }
                if j >= self.node_count() || !self.has_edge(j, i) {
                    return Err(Error::InvalidTopology(format!("asymmetric edge {i} -> {j}")));
                }
            }
        }
        Ok(())
    }

    /// Checks every structural invariant, including connectivity.
    pub fn validate(&self) -> Result<()> {
        self.check_simple()?;
        if !self.is_connected() {
            return Err(Error::InvalidTopology("graph is not connected".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TopologyKind {
    Grid2D,
    Torus,
    WattsStrogatz,
}

impl TopologyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TopologyKind::Grid2D => "grid",
            TopologyKind::Torus => "torus",
            TopologyKind::WattsStrogatz => "watts-strogatz",
        }
    }
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for TopologyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "grid" | "grid2d" | "2d-grid" => Ok(TopologyKind::Grid2D),
            "torus" => Ok(TopologyKind::Torus),
            "watts-strogatz" | "ws" | "wattsstrogatz" | "watts_strogatz" => Ok(TopologyKind::WattsStrogatz),
            other => Err(Error::InvalidParameter(format!("unknown topology `{other}`"))),
        }
    }
}

/// Description of a topology to build.
///
/// Grid and torus sizes are given by `side` (N = side²). Watts-Strogatz uses
/// `n`; when `n` is unset it falls back to `side²`, which lets a sweep vary
/// size uniformly across all three kinds.
#[derive(Debug, Clone, PartialEq)]
pub struct TopologySpec {
    pub kind: TopologyKind,
    pub side: Option<usize>,
    pub n: Option<usize>,
    pub k: usize,
    pub p_rewire: f64,
}

impl TopologySpec {
    pub fn grid(side: usize) -> Self {
        Self { kind: TopologyKind::Grid2D, side: Some(side), n: None, k: 10, p_rewire: 1.0 }
    }

    pub fn torus(side: usize) -> Self {
        Self { kind: TopologyKind::Torus, side: Some(side), n: None, k: 10, p_rewire: 1.0 }
    }

    pub fn watts_strogatz(n: usize, k: usize, p_rewire: f64) -> Self {
        Self { kind: TopologyKind::WattsStrogatz, side: None, n: Some(n), k, p_rewire }
    }

    pub fn node_count(&self) -> Option<usize> {
        match self.kind {
            TopologyKind::Grid2D | TopologyKind::Torus => self.side.map(|s| s * s),
            TopologyKind::WattsStrogatz => self.n.or(self.side.map(|s| s * s)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            TopologyKind::Grid2D => match self.side {
                Some(s) if s >= 1 => Ok(()),
                _ => Err(Error::InvalidTopology("grid requires side >= 1".into())),
            },
            TopologyKind::Torus => match self.side {
                Some(s) if s >= 3 => Ok(()),
                _ => Err(Error::InvalidTopology("torus requires side >= 3".into())),
            },
            TopologyKind::WattsStrogatz => {
                let n = self.node_count().ok_or_else(|| Error::InvalidTopology("watts-strogatz requires n".into()))?;
                check_ws_params(n, self.k, self.p_rewire)
            }
        }
    }

    /// Builds the graph. Only Watts-Strogatz consumes randomness.
    pub fn build(&self, streams: &StreamTree) -> Result<Graph> {
        self.validate()?;
        match self.kind {
            TopologyKind::Grid2D => build_grid(self.side.unwrap_or(0)),
            TopologyKind::Torus => build_torus(self.side.unwrap_or(0)),
            TopologyKind::WattsStrogatz => build_watts_strogatz(
                self.node_count().unwrap_or(0),
                self.k,
                self.p_rewire,
                streams.seed(crate::rng::Purpose::Topology, &[]),
            ),
        }
    }
}

/// Square lattice with von Neumann neighborhoods, row-major indices.
pub fn build_grid(side: usize) -> Result<Graph> {
    if side == 0 {
        return Err(Error::InvalidTopology("grid requires side >= 1".into()));
    }
    let idx = |r: usize, c: usize| r * side + c;
    let mut adjacency = Vec::with_capacity(side * side);
    for r in 0..side {
        for c in 0..side {
            let mut list = Vec::with_capacity(4);
            if r > 0 {
                list.push(idx(r - 1, c));
            }
            if c > 0 {
                list.push(idx(r, c - 1));
            }
            if c + 1 < side {
                list.push(idx(r, c + 1));
            }
            if r + 1 < side {
                list.push(idx(r + 1, c));
            }
            adjacency.push(list);
        }
    }
    Ok(Graph::from_sorted_adjacency(adjacency))
}

/// Square lattice with both pairs of opposite edges glued together.
pub fn build_torus(side: usize) -> Result<Graph> {
    if side < 3 {
        return Err(Error::InvalidTopology(format!(
            "torus requires side >= 3 (got {side}); smaller sides create duplicate wraparound edges"
        )));
    }
    let idx = |r: usize, c: usize| r * side + c;
    let mut adjacency = Vec::with_capacity(side * side);
    for r in 0..side {
        for c in 0..side {
            let mut list = vec![
                idx((r + side - 1) % side, c),
                idx((r + 1) % side, c),
                idx(r, (c + side - 1) % side),
                idx(r, (c + 1) % side),
            ];
            list.sort_unstable();
            adjacency.push(list);
        }
    }
    Ok(Graph::from_sorted_adjacency(adjacency))
}

fn check_ws_params(n: usize, k: usize, p_rewire: f64) -> Result<()> {
    if k < 2 || !k.is_multiple_of(2) {
        return Err(Error::InvalidTopology(format!("watts-strogatz requires an even k >= 2 (got {k})")));
    }
    if k >= n {
        return Err(Error::InvalidTopology(format!("watts-strogatz requires k < n (got k={k}, n={n})")));
    }
    if !(0.0..=1.0).contains(&p_rewire) {
        return Err(Error::InvalidTopology(format!("rewiring probability {p_rewire} outside [0, 1]")));
    }
    Ok(())
}

fn insert_sorted(list: &mut Vec<usize>, v: usize) {
    if let Err(pos) = list.binary_search(&v) {
        list.insert(pos, v);
    }
}

fn remove_sorted(list: &mut Vec<usize>, v: usize) {
    if let Ok(pos) = list.binary_search(&v) {
        list.remove(pos);
    }
}

/// One Watts-Strogatz sample, which may be disconnected.
///
/// Lattice edges `(i, i + j mod n)` are visited by node `i`, then offset
/// `j = 1..=k/2`. With probability `p_rewire` the far endpoint is replaced by
/// a uniform node that is neither `i` nor already adjacent to `i`; if no such
/// node exists the edge stays put.
pub fn watts_strogatz_sample(n: usize, k: usize, p_rewire: f64, rng: &mut SimRng) -> Result<Graph> {
    check_ws_params(n, k, p_rewire)?;
    let half = k / 2;
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::with_capacity(k + 4); n];
    for i in 0..n {
        for j in 1..=half {
            let t = (i + j) % n;
            insert_sorted(&mut adjacency[i], t);
            insert_sorted(&mut adjacency[t], i);
        }
    }
    for i in 0..n {
        for j in 1..=half {
            let old = (i + j) % n;
            if !rng.bernoulli(p_rewire) {
                continue;
            }
            let legal = n - 1 - adjacency[i].len();
            if legal == 0 {
                continue;
            }
            let new = loop {
                let w = rng.below(n);
                if w != i && adjacency[i].binary_search(&w).is_err() {
                    break w;
                }
            };
            remove_sorted(&mut adjacency[i], old);
            remove_sorted(&mut adjacency[old], i);
            insert_sorted(&mut adjacency[i], new);
            insert_sorted(&mut adjacency[new], i);
        }
    }
    Ok(Graph::from_sorted_adjacency(adjacency))
}

/// Connected Watts-Strogatz graph. Disconnected samples are discarded and
/// regenerated from a derived sub-seed, up to [`WS_MAX_ATTEMPTS`] times.
pub fn build_watts_strogatz(n: usize, k: usize, p_rewire: f64, seed: u64) -> Result<Graph> {
    build_watts_strogatz_within(n, k, p_rewire, seed, WS_MAX_ATTEMPTS)
}

fn build_watts_strogatz_within(n: usize, k: usize, p_rewire: f64, seed: u64, attempts: usize) -> Result<Graph> {
    check_ws_params(n, k, p_rewire)?;
    let tree = StreamTree::new(seed);
    for attempt in 0..attempts {
        let mut rng = tree.stream(crate::rng::Purpose::Topology, &[attempt as u64]);
        let g = watts_strogatz_sample(n, k, p_rewire, &mut rng)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::GenerationFailure { attempts })
}
