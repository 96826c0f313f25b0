//! Vertex links and their classification.

use std::collections::{BTreeSet, VecDeque};

use crate::complex::PolygonalComplex;
use crate::error::{Cell, Error, Result};

/// The link of a vertex: one node per complex-edge at the vertex, two nodes
/// joined when the edges are consecutive in a face containing the vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkGraph {
    /// Complex-edge represented by each link node.
    pub nodes: Vec<usize>,
    /// Adjacency lists over node positions, sorted.
    pub adjacency: Vec<Vec<usize>>,
}

impl LinkGraph {
    /// Builds a graph from an explicit edge list on `n` nodes.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![BTreeSet::new(); n];
        for &(a, b) in edges {
            if a != b {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        LinkGraph {
            nodes: (0..n).collect(),
            adjacency: adj.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn bfs(&self, s: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        dist[s] = Some(0);
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adjacency[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    q.push_back(w);
                }
            }
        }
        dist
    }
}

/// Link of a complete vertex.
pub fn link(x: &PolygonalComplex, v: usize) -> Result<LinkGraph> {
    if !x.vertex_is_complete(v) {
        return Err(Error::Incomplete(Cell::Vertex(v)));
    }
    let nodes = x.vertex_edges(v).to_vec();
    let pos = |e: usize| nodes.iter().position(|&n| n == e).expect("edge at vertex");
    let mut edges = Vec::new();
    for &f in x.vertex_faces(v) {
        let cycle = x.face(f);
        let fe = x.face_edges(f);
        let i = cycle.iter().position(|&w| w == v).unwrap();
        // edges before and after v in the cycle
        let before = fe[(i + cycle.len() - 1) % cycle.len()];
        let after = fe[i];
        edges.push((pos(before), pos(after)));
    }
    let mut g = LinkGraph::from_edges(nodes.len(), &edges);
    g.nodes = nodes;
    Ok(g)
}

/// Classification of a link graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinkClass {
    /// Length when the graph is a single cycle.
    pub cycle_length: Option<usize>,
    /// `m` when the graph is a generalized m-gon.
    pub generalized_polygon: Option<usize>,
}

impl LinkClass {
    pub fn is_other(&self) -> bool {
        self.cycle_length.is_none() && self.generalized_polygon.is_none()
    }
}

/// Recognises cycles and generalized m-gons (connected, bipartite, diameter
/// m, girth 2m, minimum degree at least 2).
pub fn classify_link(l: &LinkGraph) -> LinkClass {
    let n = l.len();
    if n == 0 {
        return LinkClass::default();
    }
    let dists: Vec<_> = (0..n).map(|s| l.bfs(s)).collect();
    let connected = dists[0].iter().all(Option::is_some);
    let min_degree = l.adjacency.iter().map(Vec::len).min().unwrap_or(0);
    let n_edges: usize = l.adjacency.iter().map(Vec::len).sum::<usize>() / 2;

    let cycle_length =
        (connected && n >= 3 && l.adjacency.iter().all(|a| a.len() == 2)).then_some(n);

    let generalized_polygon = if connected && min_degree >= 2 && n_edges > 0 {
        let bipartite = l.adjacency.iter().enumerate().all(|(u, a)| {
            a.iter()
                .all(|&w| dists[0][u].unwrap() % 2 != dists[0][w].unwrap() % 2)
        });
        let diameter = dists.iter().flatten().map(|d| d.unwrap()).max().unwrap();
        let girth = girth(l, &dists);
        (bipartite && girth == Some(2 * diameter)).then_some(diameter)
    } else {
        None
    };
    LinkClass {
        cycle_length,
        generalized_polygon,
    }
}

/// Length of a shortest cycle, from all-pairs BFS distances.
fn girth(l: &LinkGraph, dists: &[Vec<Option<usize>>]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (s, d) in dists.iter().enumerate().take(l.len()) {
        // shortest cycle through s: for each non-tree edge (u,w), d(s,u)+d(s,w)+1
        // bounded below by the true girth and attained for some s
        let parent = bfs_parents(l, s);
        for u in 0..l.len() {
            for &w in &l.adjacency[u] {
                if u < w && parent[w] != Some(u) && parent[u] != Some(w) {
                    let c = d[u].unwrap() + d[w].unwrap() + 1;
                    best = Some(best.map_or(c, |b| b.min(c)));
                }
            }
        }
    }
    best
}

fn bfs_parents(l: &LinkGraph, s: usize) -> Vec<Option<usize>> {
    let mut parent = vec![None; l.len()];
    let mut seen = vec![false; l.len()];
    seen[s] = true;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &w in &l.adjacency[u] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(u);
                q.push_back(w);
            }
        }
    }
    parent
}

/// The Heawood graph (incidence graph of the Fano plane).
pub fn heawood_graph() -> LinkGraph {
    let mut edges = Vec::new();
    for i in 0..14 {
        edges.push((i, (i + 1) % 14));
        if i % 2 == 0 {
            edges.push((i, (i + 5) % 14));
        }
    }
    LinkGraph::from_edges(14, &edges)
}
