//! Products T_r × T_s of regular trees.
//!
//! Faces are pairs of tree edges; the dual graph is the product of the two
//! line graphs, so the distance of face (e, e') from the center face is
//! the sum of the line-graph distances of e and e' from the root edges.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::{build_complex, PolygonalComplex, RawComplex, Truncation};
use crate::error::{Error, Result};

/// Default number of product apartments kept before sampling kicks in.
pub const DEFAULT_APARTMENT_BUDGET: usize = 1 << 16;

/// Regular tree of degree `r` to a fixed depth, rooted at vertex 0. Edge
/// ids are child vertex ids minus one.
struct Tree {
    parent: Vec<usize>,
    children: Vec<Vec<usize>>,
    /// Line-graph distance of each edge from edge 0.
    line_dist: Vec<usize>,
}

impl Tree {
    fn new(r: usize, depth: usize) -> Self {
        let mut parent = vec![usize::MAX];
        let mut children = vec![Vec::new()];
        let mut frontier = vec![0usize];
        for _ in 0..depth {
            let mut next = Vec::new();
            for &u in &frontier {
                let k = if u == 0 { r } else { r - 1 };
                for _ in 0..k {
                    let c = parent.len();
                    parent.push(u);
                    children.push(Vec::new());
                    children[u].push(c);
                    next.push(c);
                }
            }
            frontier = next;
        }
        let n_edges = parent.len() - 1;
        let mut line_dist = vec![usize::MAX; n_edges];
        line_dist[0] = 0;
        let mut q = VecDeque::from([0usize]);
        let mut tree = Tree {
            parent,
            children,
            line_dist: Vec::new(),
        };
        while let Some(e) = q.pop_front() {
            for g in tree.edges_adjacent(e) {
                if line_dist[g] == usize::MAX {
                    line_dist[g] = line_dist[e] + 1;
                    q.push_back(g);
                }
            }
        }
        tree.line_dist = line_dist;
        tree
    }

    fn ends(&self, e: usize) -> (usize, usize) {
        (self.parent[e + 1], e + 1)
    }

    fn neighbors(&self, u: usize) -> Vec<usize> {
        let mut n = self.children[u].clone();
        if u != 0 {
            n.push(self.parent[u]);
        }
        n
    }

    fn edge_of(&self, u: usize, v: usize) -> usize {
        if self.parent[v] == u {
            v - 1
        } else {
            u - 1
        }
    }

    fn edges_adjacent(&self, e: usize) -> Vec<usize> {
        let (p, c) = self.ends(e);
        let mut out = Vec::new();
        for u in [p, c] {
            for w in self.neighbors(u) {
                let g = self.edge_of(u, w);
                if g != e {
                    out.push(g);
                }
            }
        }
        out
    }

    fn path(&self, mut a: usize, mut b: usize) -> Vec<usize> {
        let depth = |mut u: usize| {
            let mut d = 0;
            while u != 0 {
                u = self.parent[u];
                d += 1;
            }
            d
        };
        let (mut left, mut right) = (vec![a], vec![b]);
        let (mut da, mut db) = (depth(a), depth(b));
        while da > db {
            a = self.parent[a];
            left.push(a);
            da -= 1;
        }
        while db > da {
            b = self.parent[b];
            right.push(b);
            db -= 1;
        }
        while a != b {
            a = self.parent[a];
            b = self.parent[b];
            left.push(a);
            right.push(b);
        }
        right.pop();
        right.reverse();
        left.extend(right);
        left
    }

    /// Extends a vertex path at its last vertex until it ends at a leaf.
    fn extend_to_leaf(&self, path: &mut Vec<usize>) {
        loop {
            let u = *path.last().unwrap();
            let back = path.len().checked_sub(2).map(|i| path[i]);
            if self.children[u].is_empty() && back.is_some() {
                break;
            }
            match self.neighbors(u).into_iter().find(|&w| Some(w) != back) {
                Some(w) => path.push(w),
                None => break,
            }
        }
    }

    /// Edge set of a bi-infinite-looking geodesic (leaf to leaf) through
    /// both edges.
    fn geodesic_through(&self, e: usize, f: usize) -> Vec<usize> {
        let (e0, e1) = self.ends(e);
        let (f0, f1) = self.ends(f);
        let mut best = self.path(e0, e1);
        if e != f {
            for &u in &[e0, e1] {
                for &w in &[f0, f1] {
                    let p = self.path(u, w);
                    if p.len() > best.len() {
                        best = p;
                    }
                }
            }
        }
        let mut path = best;
        self.extend_to_leaf(&mut path);
        path.reverse();
        self.extend_to_leaf(&mut path);
        let mut edges: Vec<usize> = path.windows(2).map(|w| self.edge_of(w[0], w[1])).collect();
        edges.sort_unstable();
        edges
    }

    /// Leaf-to-leaf geodesics covering every pair of edges within
    /// line distance `radius` of edge 0.
    fn covering_geodesics(&self, radius: usize) -> Vec<Vec<usize>> {
        let relevant: Vec<usize> = (0..self.line_dist.len())
            .filter(|&e| self.line_dist[e] <= radius)
            .collect();
        let mut set = BTreeSet::new();
        for (i, &e) in relevant.iter().enumerate() {
            for &f in &relevant[i..] {
                set.insert(self.geodesic_through(e, f));
            }
        }
        set.into_iter().collect()
    }
}

/// T_r × T_s with trusted ball of radius R around the product of the root
/// edges, and an apartment system of products of leaf-to-leaf geodesics.
/// When the product family exceeds `apartment_budget` (default
/// [`DEFAULT_APARTMENT_BUDGET`]), that many products are sampled with `seed`.
pub fn gen_product_trees(
    r: usize,
    s: usize,
    radius: usize,
    seed: u64,
    apartment_budget: Option<usize>,
) -> Result<PolygonalComplex> {
    if r < 2 || s < 2 {
        return Err(Error::Infeasible("tree degrees must be >= 2".into()));
    }
    let depth = radius + 3;
    let t1 = Tree::new(r, depth);
    let t2 = Tree::new(s, depth);
    let limit = radius + 2;
    let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
    for e in 0..t1.line_dist.len() {
        for f in 0..t2.line_dist.len() {
            let d = t1.line_dist[e] + t2.line_dist[f];
            if d <= limit {
                pairs.push((d, e, f));
            }
        }
    }
    pairs.sort_unstable();
    if pairs.len() > crate::generators::DEFAULT_FACE_CAP {
        return Err(Error::CapExceeded {
            what: "generator face count",
            needed: pairs.len() as u128,
            cap: crate::generators::DEFAULT_FACE_CAP as u128,
        });
    }

    let mut vid: HashMap<(usize, usize), usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut edge_ids: HashSet<(usize, usize)> = HashSet::new();
    let mut faces = Vec::with_capacity(pairs.len());
    let mut face_of: HashMap<(usize, usize), usize> = HashMap::with_capacity(pairs.len());
    let mut trusted = Vec::new();
    for &(d, e, f) in &pairs {
        let (x1, x2) = t1.ends(e);
        let (y1, y2) = t2.ends(f);
        let corners = [(x1, y1), (x2, y1), (x2, y2), (x1, y2)];
        let cycle: Vec<usize> = corners
            .iter()
            .map(|c| {
                let n = vid.len();
                *vid.entry(*c).or_insert(n)
            })
            .collect();
        for i in 0..4 {
            let (u, v) = (
                cycle[i].min(cycle[(i + 1) % 4]),
                cycle[i].max(cycle[(i + 1) % 4]),
            );
            if edge_ids.insert((u, v)) {
                edges.push([u, v]);
            }
        }
        face_of.insert((e, f), faces.len());
        if d <= radius {
            trusted.push(faces.len());
        }
        faces.push(cycle);
    }

    let g1 = t1.covering_geodesics(radius);
    let g2 = t2.covering_geodesics(radius);
    let total = g1.len() * g2.len();
    let budget = apartment_budget.unwrap_or(DEFAULT_APARTMENT_BUDGET).max(1);
    let chosen: Vec<usize> = if total <= budget {
        (0..total).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut idx = sample(&mut rng, total, budget).into_vec();
        idx.sort_unstable();
        idx
    };
    let face_of = &face_of;
    let apartments: Vec<Vec<usize>> = chosen
        .into_iter()
        .map(|k| {
            let (a, b) = (&g1[k / g2.len()], &g2[k % g2.len()]);
            let mut fs: Vec<usize> = a
                .iter()
                .flat_map(|&e| b.iter().filter_map(move |&f| face_of.get(&(e, f)).copied()))
                .collect();
            fs.sort_unstable();
            fs
        })
        .collect();

    let x = build_complex(RawComplex {
        vertices: vid.len(),
        edges,
        faces,
        apartments: Vec::new(),
        truncation: None,
    })?;
    for &f in &trusted {
        for &v in x.face(f) {
            if x.vertex_faces(v).len() != r * s {
                return Err(Error::Infeasible(format!(
                    "trusted face {f} has an incomplete vertex {v}"
                )));
            }
        }
    }
    x.with_truncation(Some(Truncation {
        trusted_faces: trusted,
        center: Some(0),
        radius: Some(radius),
        ..Default::default()
    }))?
    .with_apartments(apartments)
}
