//! Sphere-by-sphere construction of planar tessellations.
//!
//! The built region is a disk whose boundary is kept as a cyclic,
//! counter-clockwise linked list of open vertices. Vertices are closed in
//! breadth-first order: while a vertex `v` still misses faces, a new face is
//! attached along the boundary edge leaving `v`, absorbing every following
//! boundary vertex that needs exactly one more face. Such vertices right
//! behind `v` force the face on the edge entering `v`, which is attached
//! first. The local rules (face sizes,
//! vertex degrees, vertex colours) come from a [`LayerRule`]. Correctness
//! of the result is certified afterwards by the validators.

use std::collections::{HashSet, VecDeque};

use crate::complex::{build_complex, PolygonalComplex, RawComplex, Truncation};
use crate::error::{Error, Result};
use crate::metric::FaceMetric;

/// Local rules of a layered tessellation.
pub trait LayerRule {
    /// Colours of the center face's vertices, in cyclic order.
    fn center_colors(&self) -> Vec<u8>;

    /// Size of a new face of generation `generation` whose already-built
    /// boundary path has the given colours (in face order).
    fn face_size(&self, generation: usize, path_colors: &[u8]) -> usize;

    /// Colours of the `count` fresh vertices completing a face whose built
    /// path has colours `path_colors`; fresh vertices follow the path's last
    /// vertex and precede its first.
    fn fresh_colors(&self, path_colors: &[u8], count: usize) -> Result<Vec<u8>>;

    /// Degree of a vertex with the given colour and generation.
    fn vertex_degree(&self, color: u8, generation: usize) -> usize;
}

struct Builder<'r, R: LayerRule> {
    rule: &'r R,
    faces: Vec<Vec<usize>>,
    edges: Vec<[usize; 2]>,
    edge_set: HashSet<(usize, usize)>,
    color: Vec<u8>,
    generation: Vec<usize>,
    target: Vec<usize>,
    n_faces_at: Vec<usize>,
    next: Vec<usize>,
    prev: Vec<usize>,
    open: Vec<bool>,
    queue: VecDeque<usize>,
    face_cap: usize,
}

impl<R: LayerRule> Builder<'_, R> {
    fn gap(&self, v: usize) -> usize {
        self.target[v].saturating_sub(self.n_faces_at[v])
    }

    fn add_vertex(&mut self, color: u8, generation: usize) -> usize {
        let v = self.color.len();
        self.color.push(color);
        self.generation.push(generation);
        self.target.push(self.rule.vertex_degree(color, generation));
        self.n_faces_at.push(0);
        self.next.push(usize::MAX);
        self.prev.push(usize::MAX);
        self.open.push(true);
        self.queue.push_back(v);
        v
    }

    fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if !self.edge_set.insert((u.min(v), u.max(v))) {
            return Err(Error::Infeasible(format!(
                "layered construction would duplicate edge {{{u}, {v}}}"
            )));
        }
        self.edges.push([u.min(v), u.max(v)]);
        Ok(())
    }

    /// Attaches a face along the boundary path `a = path[0] → … → path[last] = b`.
    fn attach(&mut self, path: &[usize], generation: usize) -> Result<()> {
        if self.faces.len() >= self.face_cap {
            return Err(Error::CapExceeded {
                what: "generator face count",
                needed: self.faces.len() as u128 + 1,
                cap: self.face_cap as u128,
            });
        }
        let (a, b) = (path[0], *path.last().unwrap());
        let face_order: Vec<usize> = path.iter().rev().copied().collect();
        let colors: Vec<u8> = face_order.iter().map(|&v| self.color[v]).collect();
        let p = self.rule.face_size(generation, &colors);
        let len = path.len() - 1;
        if p < len + 1 || (p == len + 1 && a == b) {
            return Err(Error::Infeasible(format!(
                "boundary path of {len} edges cannot be closed by a {p}-gon"
            )));
        }
        let m = p - len - 1;
        let fresh_colors = self.rule.fresh_colors(&colors, m)?;
        let fresh: Vec<usize> = fresh_colors
            .into_iter()
            .map(|c| self.add_vertex(c, generation))
            .collect();

        let mut chain = vec![a];
        chain.extend(&fresh);
        chain.push(b);
        for w in chain.windows(2) {
            self.add_edge(w[0], w[1])?;
        }
        for w in chain.windows(2) {
            self.next[w[0]] = w[1];
            self.prev[w[1]] = w[0];
        }
        let mut face = face_order;
        face.extend(&fresh);
        for &v in &face {
            self.n_faces_at[v] += 1;
        }
        for &v in &path[1..len] {
            self.open[v] = false;
            if self.n_faces_at[v] != self.target[v] {
                return Err(Error::Infeasible(format!(
                    "vertex {v} closed with wrong degree"
                )));
            }
        }
        for &v in &face {
            if self.n_faces_at[v] > self.target[v] {
                return Err(Error::Infeasible(format!("vertex {v} exceeds its degree")));
            }
        }
        self.faces.push(face);
        Ok(())
    }

    fn fill(&mut self, v: usize) -> Result<()> {
        while self.open[v] {
            let gap = self.gap(v);
            if gap == 0 {
                return Err(Error::Infeasible(format!(
                    "vertex {v} saturated while still on the boundary"
                )));
            }
            // Boundary vertices behind `v` that miss exactly one face force
            // the face on the edge entering `v`; attach it first.
            let mut path = Vec::new();
            let mut a = self.prev[v];
            while self.gap(a) == 1 && a != v {
                path.push(a);
                a = self.prev[a];
            }
            let forced_behind = !path.is_empty();
            if forced_behind || gap == 1 {
                path.push(a);
                path.reverse();
            }
            path.push(v);
            if gap == 1 || !forced_behind {
                let mut b = self.next[v];
                while self.gap(b) == 1 && b != v && !path.contains(&b) {
                    path.push(b);
                    b = self.next[b];
                }
                path.push(b);
            }
            if gap == 1 {
                self.open[v] = false;
            }
            let generation = self.generation[v] + 1;
            self.attach(&path, generation)?;
            if gap == 1 && self.n_faces_at[v] != self.target[v] {
                return Err(Error::Infeasible(format!(
                    "vertex {v} closed with wrong degree"
                )));
            }
        }
        Ok(())
    }
}

/// Output of a layered construction.
pub struct Layered {
    pub complex: PolygonalComplex,
    /// Generation of each face (0 for the center face).
    pub face_generation: Vec<usize>,
    /// Colour of each vertex.
    pub vertex_color: Vec<u8>,
}

/// Builds around a center face (index 0) until every vertex of generation
/// `≤ radius + 1` is closed, then trusts the dual ball B_radius.
pub fn build_layered<R: LayerRule>(rule: &R, radius: usize, face_cap: usize) -> Result<Layered> {
    let center = rule.center_colors();
    let p0 = rule.face_size(0, &[]);
    if center.len() != p0 || p0 < 3 {
        return Err(Error::Infeasible(
            "center face colouring does not match its size".into(),
        ));
    }
    let mut bld = Builder {
        rule,
        faces: Vec::new(),
        edges: Vec::new(),
        edge_set: HashSet::new(),
        color: Vec::new(),
        generation: Vec::new(),
        target: Vec::new(),
        n_faces_at: Vec::new(),
        next: Vec::new(),
        prev: Vec::new(),
        open: Vec::new(),
        queue: VecDeque::new(),
        face_cap,
    };
    let vs: Vec<usize> = center.iter().map(|&c| bld.add_vertex(c, 0)).collect();
    for i in 0..p0 {
        let (u, v) = (vs[i], vs[(i + 1) % p0]);
        bld.add_edge(u, v)?;
        bld.next[u] = v;
        bld.prev[v] = u;
        bld.n_faces_at[u] += 1;
    }
    bld.faces.push(vs);
    let mut face_generation = vec![0];

    while let Some(v) = bld.queue.pop_front() {
        if bld.generation[v] > radius + 1 {
            break;
        }
        if bld.open[v] {
            bld.fill(v)?;
        }
        while face_generation.len() < bld.faces.len() {
            face_generation.push(bld.generation[v] + 1);
        }
    }

    let complex = build_complex(RawComplex {
        vertices: bld.color.len(),
        edges: bld.edges,
        faces: bld.faces,
        apartments: Vec::new(),
        truncation: None,
    })?;
    let trusted = {
        let metric = FaceMetric::new(&complex);
        let b = metric.compute_ball(0, radius as u32);
        let mut t: Vec<usize> = b.within(radius as u32).collect();
        t.sort_unstable();
        t
    };
    for &f in &trusted {
        if let Some(&v) = complex.face(f).iter().find(|&&v| bld.open[v]) {
            return Err(Error::Infeasible(format!(
                "trusted face {f} has open vertex {v}"
            )));
        }
    }
    let n = complex.n_faces();
    let complex = complex
        .with_truncation(Some(Truncation {
            trusted_faces: trusted,
            center: Some(0),
            radius: Some(radius),
            ..Default::default()
        }))?
        .with_apartments(vec![(0..n).collect()])?;
    Ok(Layered {
        complex,
        face_generation,
        vertex_color: bld.color,
    })
}
