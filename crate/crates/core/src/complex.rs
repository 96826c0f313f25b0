//! Combinatorial polygonal complexes: cells, incidences and degrees.
//!
//! A complex is stored as a vertex count, an indexed list of edges and an
//! indexed list of faces, each face being a cyclic sequence of vertices.
//! Infinite complexes are represented by a finite *truncation*: a built
//! region together with a set of trusted faces whose full neighbourhoods are
//! present, plus optional true-degree overrides for cells whose stars were
//! cut off.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Cell, Error, Result};

/// A degree that may be infinite (non-locally-finite complexes).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Degree {
    Finite(usize),
    Infinite,
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::Infinite => None,
        }
    }
}

impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Degree::Finite(d) => s.serialize_u64(*d as u64),
            Degree::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Degree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct DegreeVisitor;
        impl Visitor<'_> for DegreeVisitor {
            type Value = Degree;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a nonnegative integer or \"inf\"")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Degree, E> {
                Ok(Degree::Finite(v as usize))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Degree, E> {
                usize::try_from(v)
                    .map(Degree::Finite)
                    .map_err(|_| E::custom("negative degree"))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Degree, E> {
                if v == "inf" {
                    Ok(Degree::Infinite)
                } else {
                    Err(E::custom(format!("unknown degree {v:?}")))
                }
            }
        }
        d.deserialize_any(DegreeVisitor)
    }
}

/// True degrees of cells whose stars are not fully built.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrueDegrees {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub vertices: BTreeMap<usize, Degree>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub edges: BTreeMap<usize, Degree>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub faces: BTreeMap<usize, Degree>,
}

/// Finite-generation metadata of a truncated complex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    /// Faces whose vertices (and hence edges and neighbours) carry their
    /// complete stars. Kept sorted and free of duplicates.
    pub trusted_faces: Vec<usize>,
    #[serde(default)]
    pub true_degrees: TrueDegrees,
    /// Center face the trusted ball was grown around, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<usize>,
    /// Radius of the trusted ball around `center`, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
}

/// Cell lists exactly as they appear in a complex file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawComplex {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
    pub faces: Vec<Vec<usize>>,
    pub apartments: Vec<Vec<usize>>,
    pub truncation: Option<Truncation>,
}

/// Degree data of one face.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaceDegrees {
    /// Length of the boundary cycle, |∂f|.
    pub boundary: usize,
    /// Number of neighbouring faces, |f| = Σ_{e∈∂f}(|e|−1).
    pub degree: usize,
    /// min over boundary edges of |e|−1.
    pub min_edge: usize,
    /// max over boundary edges of |e|−1.
    pub max_edge: usize,
}

/// Degree table over the cells whose degrees are known.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DegreeProfile {
    pub vertices: BTreeMap<usize, usize>,
    pub edges: BTreeMap<usize, usize>,
    pub faces: BTreeMap<usize, FaceDegrees>,
    /// inf of m_E(f) over the listed faces.
    pub m_e: Option<usize>,
    /// sup of M_E(f) over the listed faces.
    pub big_m_e: Option<usize>,
    /// sup of |v| over the listed vertices.
    pub big_m_v: Option<usize>,
    /// sup of |f| over the listed faces.
    pub big_m_f: Option<usize>,
    /// inf of |f| over the listed faces.
    pub m_f: Option<usize>,
}

/// An immutable polygonal complex with cached incidences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonalComplex {
    raw: RawComplex,
    edge_index: HashMap<(usize, usize), usize>,
    face_edges: Vec<Vec<usize>>,
    vertex_edges: Vec<Vec<usize>>,
    vertex_faces: Vec<Vec<usize>>,
    edge_faces: Vec<Vec<usize>>,
    trusted: Vec<bool>,
    vertex_complete: Vec<bool>,
    edge_complete: Vec<bool>,
}

fn key(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

fn invariant(axiom: &str, cells: Vec<Vec<usize>>) -> Error {
    Error::Invariant {
        axiom: axiom.to_string(),
        cells,
    }
}

/// Builds a complex from raw cell lists, checking structural invariants.
pub fn build_complex(raw: RawComplex) -> Result<PolygonalComplex> {
    let n = raw.vertices;
    let mut edge_index = HashMap::with_capacity(raw.edges.len());
    for (i, &[u, v]) in raw.edges.iter().enumerate() {
        for w in [u, v] {
            if w >= n {
                return Err(Error::DanglingIndex {
                    kind: "vertex",
                    index: w,
                    len: n,
                });
            }
        }
        if u == v {
            return Err(Error::LoopEdge(u));
        }
        if edge_index.insert(key(u, v), i).is_some() {
            return Err(Error::DuplicateEdge(u, v));
        }
    }

    let mut face_edges = Vec::with_capacity(raw.faces.len());
    let mut vertex_faces = vec![Vec::new(); n];
    let mut edge_faces = vec![Vec::new(); raw.edges.len()];
    for (fi, face) in raw.faces.iter().enumerate() {
        if face.len() < 3 {
            return Err(Error::ShortFace {
                face: fi,
                len: face.len(),
            });
        }
        let mut seen = BTreeSet::new();
        for &v in face {
            if v >= n {
                return Err(Error::DanglingIndex {
                    kind: "vertex",
                    index: v,
                    len: n,
                });
            }
            if !seen.insert(v) {
                return Err(Error::RepeatedVertex {
                    face: fi,
                    vertex: v,
                });
            }
            vertex_faces[v].push(fi);
        }
        let mut fe = Vec::with_capacity(face.len());
        for i in 0..face.len() {
            let (u, v) = (face[i], face[(i + 1) % face.len()]);
            let e = *edge_index.get(&key(u, v)).ok_or_else(|| {
                invariant("boundary edge missing from edge set", vec![vec![fi, u, v]])
            })?;
            edge_faces[e].push(fi);
            fe.push(e);
        }
        face_edges.push(fe);
    }

    let mut vertex_edges = vec![Vec::new(); n];
    for (i, &[u, v]) in raw.edges.iter().enumerate() {
        vertex_edges[u].push(i);
        vertex_edges[v].push(i);
    }

    // Pairwise intersections of closed faces: at most one shared edge, and
    // the shared vertices are either a single vertex or that edge's ends.
    for (f, fe) in face_edges.iter().enumerate() {
        let mut shared_vertices: HashMap<usize, usize> = HashMap::new();
        for &v in &raw.faces[f] {
            for &g in &vertex_faces[v] {
                if g > f {
                    *shared_vertices.entry(g).or_default() += 1;
                }
            }
        }
        let mut shared_edges: HashMap<usize, usize> = HashMap::new();
        for &e in fe {
            for &g in &edge_faces[e] {
                if g > f {
                    *shared_edges.entry(g).or_default() += 1;
                }
            }
        }
        let mut bad: Vec<_> = shared_vertices
            .iter()
            .filter(|&(g, &sv)| {
                let se = shared_edges.get(g).copied().unwrap_or(0);
                se > 1 || (se == 0 && sv > 1) || (se == 1 && sv != 2)
            })
            .map(|(&g, _)| vec![f, g])
            .collect();
        if !bad.is_empty() {
            bad.sort();
            return Err(invariant(
                "faces intersect in more than a vertex or a single edge",
                bad,
            ));
        }
    }

    for ap in &raw.apartments {
        for &f in ap {
            if f >= raw.faces.len() {
                return Err(Error::DanglingIndex {
                    kind: "face",
                    index: f,
                    len: raw.faces.len(),
                });
            }
        }
    }

    let mut complex = PolygonalComplex {
        edge_index,
        face_edges,
        vertex_edges,
        vertex_faces,
        edge_faces,
        trusted: Vec::new(),
        vertex_complete: Vec::new(),
        edge_complete: Vec::new(),
        raw,
    };
    complex.attach_truncation()?;
    Ok(complex)
}

impl PolygonalComplex {
    fn attach_truncation(&mut self) -> Result<()> {
        let (nv, ne, nf) = (
            self.raw.vertices,
            self.raw.edges.len(),
            self.raw.faces.len(),
        );
        match &self.raw.truncation {
            None => {
                self.trusted = vec![true; nf];
                self.vertex_complete = vec![true; nv];
                self.edge_complete = vec![true; ne];
            }
            Some(t) => {
                let check = |kind, i: usize, len| {
                    if i >= len {
                        Err(Error::DanglingIndex {
                            kind,
                            index: i,
                            len,
                        })
                    } else {
                        Ok(())
                    }
                };
                for &f in &t.trusted_faces {
                    check("face", f, nf)?;
                }
                for &v in t.true_degrees.vertices.keys() {
                    check("vertex", v, nv)?;
                }
                for &e in t.true_degrees.edges.keys() {
                    check("edge", e, ne)?;
                }
                for &f in t.true_degrees.faces.keys() {
                    check("face", f, nf)?;
                }
                if let Some(c) = t.center {
                    check("face", c, nf)?;
                }
                self.trusted = vec![false; nf];
                self.vertex_complete = vec![false; nv];
                for &f in &t.trusted_faces {
                    self.trusted[f] = true;
                    for &v in &self.raw.faces[f] {
                        self.vertex_complete[v] = true;
                    }
                }
                // an edge with a complete endpoint has every face through it built
                self.edge_complete = self
                    .raw
                    .edges
                    .iter()
                    .map(|&[u, v]| self.vertex_complete[u] || self.vertex_complete[v])
                    .collect();
            }
        }
        Ok(())
    }

    /// Replaces the truncation metadata, re-deriving completeness flags.
    pub fn with_truncation(mut self, truncation: Option<Truncation>) -> Result<Self> {
        let truncation = truncation.map(|mut t| {
            t.trusted_faces.sort_unstable();
            t.trusted_faces.dedup();
            t
        });
        self.raw.truncation = truncation;
        self.attach_truncation()?;
        Ok(self)
    }

    /// Replaces the apartment list (each apartment sorted, duplicates removed).
    pub fn with_apartments(mut self, apartments: Vec<Vec<usize>>) -> Result<Self> {
        let nf = self.n_faces();
        let mut aps = Vec::with_capacity(apartments.len());
        for mut ap in apartments {
            ap.sort_unstable();
            ap.dedup();
            if let Some(&f) = ap.iter().find(|&&f| f >= nf) {
                return Err(Error::DanglingIndex {
                    kind: "face",
                    index: f,
                    len: nf,
                });
            }
            aps.push(ap);
        }
        self.raw.apartments = aps;
        Ok(self)
    }

    pub fn raw(&self) -> &RawComplex {
        &self.raw
    }

    pub fn into_raw(self) -> RawComplex {
        self.raw
    }

    pub fn n_vertices(&self) -> usize {
        self.raw.vertices
    }

    pub fn n_edges(&self) -> usize {
        self.raw.edges.len()
    }

    pub fn n_faces(&self) -> usize {
        self.raw.faces.len()
    }

    pub fn edge(&self, e: usize) -> [usize; 2] {
        self.raw.edges[e]
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.edge_index.get(&key(u, v)).copied()
    }

    /// Boundary cycle of a face.
    pub fn face(&self, f: usize) -> &[usize] {
        &self.raw.faces[f]
    }

    /// Boundary edges of a face, aligned with the cycle: edge `i` joins
    /// vertices `i` and `i+1`.
    pub fn face_edges(&self, f: usize) -> &[usize] {
        &self.face_edges[f]
    }

    pub fn vertex_edges(&self, v: usize) -> &[usize] {
        &self.vertex_edges[v]
    }

    pub fn vertex_faces(&self, v: usize) -> &[usize] {
        &self.vertex_faces[v]
    }

    pub fn edge_faces(&self, e: usize) -> &[usize] {
        &self.edge_faces[e]
    }

    pub fn apartments(&self) -> &[Vec<usize>] {
        &self.raw.apartments
    }

    pub fn truncation(&self) -> Option<&Truncation> {
        self.raw.truncation.as_ref()
    }

    /// True when no truncation metadata is attached: every cell is complete.
    pub fn is_complete(&self) -> bool {
        self.raw.truncation.is_none()
    }

    /// Center face recorded by the generator, if any.
    pub fn center(&self) -> Option<usize> {
        self.raw.truncation.as_ref().and_then(|t| t.center)
    }

    /// Radius of the trusted ball recorded by the generator, if any.
    pub fn trusted_radius(&self) -> Option<usize> {
        self.raw.truncation.as_ref().and_then(|t| t.radius)
    }

    pub fn is_trusted(&self, f: usize) -> bool {
        self.trusted[f]
    }

    pub fn trusted_faces(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_faces()).filter(move |&f| self.trusted[f])
    }

    pub fn vertex_is_complete(&self, v: usize) -> bool {
        self.vertex_complete[v]
    }

    pub fn edge_is_complete(&self, e: usize) -> bool {
        self.edge_complete[e]
    }

    /// Whether every neighbour of `f` is built (all boundary edges complete).
    pub fn neighbors_built(&self, f: usize) -> bool {
        self.face_edges[f].iter().all(|&e| self.edge_complete[e])
    }

    fn overrides(&self) -> Option<&TrueDegrees> {
        self.raw.truncation.as_ref().map(|t| &t.true_degrees)
    }

    /// |v|: number of neighbouring vertices (edges at v).
    pub fn true_vertex_degree(&self, v: usize) -> Result<usize> {
        if let Some(d) = self.overrides().and_then(|o| o.vertices.get(&v)) {
            return d.finite().ok_or(Error::NotLocallyFinite(Cell::Vertex(v)));
        }
        if self.vertex_complete[v] {
            Ok(self.vertex_edges[v].len())
        } else {
            Err(Error::Incomplete(Cell::Vertex(v)))
        }
    }

    /// |e|: number of faces containing e.
    pub fn true_edge_degree(&self, e: usize) -> Result<usize> {
        if let Some(d) = self.overrides().and_then(|o| o.edges.get(&e)) {
            return d.finite().ok_or(Error::NotLocallyFinite(Cell::Edge(e)));
        }
        if self.edge_complete[e] {
            Ok(self.edge_faces[e].len())
        } else {
            Err(Error::Incomplete(Cell::Edge(e)))
        }
    }

    /// |f| = Σ_{e∈∂f}(|e|−1).
    pub fn true_face_degree(&self, f: usize) -> Result<usize> {
        if let Some(d) = self.overrides().and_then(|o| o.faces.get(&f)) {
            return d.finite().ok_or(Error::NotLocallyFinite(Cell::Face(f)));
        }
        self.face_edges[f]
            .iter()
            .map(|&e| self.true_edge_degree(e).map(|d| d.saturating_sub(1)))
            .sum::<Result<usize>>()
            .map_err(|err| match err {
                Error::Incomplete(_) => Error::Incomplete(Cell::Face(f)),
                other => other,
            })
    }

    /// Full degree data of a face; errors if an edge degree is unknown.
    pub fn face_degrees(&self, f: usize) -> Result<FaceDegrees> {
        let mut min_edge = usize::MAX;
        let mut max_edge = 0;
        for &e in &self.face_edges[f] {
            let d = self.true_edge_degree(e)?.saturating_sub(1);
            min_edge = min_edge.min(d);
            max_edge = max_edge.max(d);
        }
        Ok(FaceDegrees {
            boundary: self.raw.faces[f].len(),
            degree: self.true_face_degree(f)?,
            min_edge,
            max_edge,
        })
    }

    /// Neighbouring faces of `f` (sharing an edge) that are built.
    pub fn built_neighbors(&self, f: usize) -> impl Iterator<Item = usize> + '_ {
        self.face_edges[f]
            .iter()
            .flat_map(move |&e| self.edge_faces[e].iter().copied().filter(move |&g| g != f))
    }
}

/// Degree table over every cell whose degree is known.
pub fn degree_profile(x: &PolygonalComplex) -> DegreeProfile {
    let mut p = DegreeProfile::default();
    for v in 0..x.n_vertices() {
        if let Ok(d) = x.true_vertex_degree(v) {
            p.vertices.insert(v, d);
        }
    }
    for e in 0..x.n_edges() {
        if let Ok(d) = x.true_edge_degree(e) {
            p.edges.insert(e, d);
        }
    }
    for f in 0..x.n_faces() {
        if let Ok(d) = x.face_degrees(f) {
            p.faces.insert(f, d);
        }
    }
    let faces = p.faces.values();
    p.m_e = faces.clone().map(|d| d.min_edge).min();
    p.big_m_e = faces.clone().map(|d| d.max_edge).max();
    p.big_m_f = faces.clone().map(|d| d.degree).max();
    p.m_f = faces.map(|d| d.degree).min();
    p.big_m_v = p.vertices.values().copied().max();
    p
}

/// Builds a complex from face cycles alone, creating edges in order of
/// first appearance.
pub fn complex_from_faces(n_vertices: usize, faces: Vec<Vec<usize>>) -> Result<PolygonalComplex> {
    let mut seen = HashMap::new();
    let mut edges = Vec::new();
    for face in &faces {
        for i in 0..face.len() {
            let (u, v) = (face[i], face[(i + 1) % face.len()]);
            seen.entry(key(u, v)).or_insert_with(|| {
                edges.push([u.min(v), u.max(v)]);
                edges.len() - 1
            });
        }
    }
    build_complex(RawComplex {
        vertices: n_vertices,
        edges,
        faces,
        apartments: Vec::new(),
        truncation: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::spherical::{gen_spherical, SphericalKind};

    #[test]
    fn single_square() {
        let x = complex_from_faces(4, vec![vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(x.n_edges(), 4);
        let d = x.face_degrees(0).unwrap();
        assert_eq!((d.boundary, d.degree), (4, 0));
    }

    #[test]
    fn cube_profile() {
        let x = gen_spherical(SphericalKind::Cube).unwrap();
        assert_eq!((x.n_vertices(), x.n_edges(), x.n_faces()), (8, 12, 6));
        let p = degree_profile(&x);
        assert!(p.vertices.values().all(|&d| d == 3));
        assert!(p.edges.values().all(|&d| d == 2));
        for d in p.faces.values() {
            assert_eq!(
                *d,
                FaceDegrees {
                    boundary: 4,
                    degree: 4,
                    min_edge: 1,
                    max_edge: 1
                }
            );
        }
        assert_eq!(
            (p.m_e, p.big_m_e, p.big_m_f, p.m_f, p.big_m_v),
            (Some(1), Some(1), Some(4), Some(4), Some(3))
        );
    }

    #[test]
    fn two_triangles_sharing_two_edges_rejected() {
        let raw = RawComplex {
            vertices: 3,
            edges: vec![[0, 1], [1, 2], [0, 2]],
            faces: vec![vec![0, 1, 2], vec![0, 2, 1]],
            ..Default::default()
        };
        assert!(matches!(build_complex(raw), Err(Error::Invariant { .. })));
    }

    #[test]
    fn structural_errors() {
        let mk = |vertices, edges: Vec<[usize; 2]>, faces: Vec<Vec<usize>>| {
            build_complex(RawComplex {
                vertices,
                edges,
                faces,
                ..Default::default()
            })
        };
        assert!(matches!(
            mk(2, vec![[0, 5]], vec![]),
            Err(Error::DanglingIndex { .. })
        ));
        assert!(matches!(
            mk(3, vec![[0, 1], [1, 0]], vec![]),
            Err(Error::DuplicateEdge(1, 0))
        ));
        assert!(matches!(
            mk(3, vec![[1, 1]], vec![]),
            Err(Error::LoopEdge(1))
        ));
        assert!(matches!(
            mk(3, vec![[0, 1], [1, 2], [0, 2]], vec![vec![0, 1, 0]]),
            Err(Error::RepeatedVertex { face: 0, vertex: 0 })
        ));
        assert!(matches!(
            mk(3, vec![[0, 1]], vec![vec![0, 1]]),
            Err(Error::ShortFace { .. })
        ));
        assert!(matches!(
            mk(3, vec![[0, 1], [1, 2]], vec![vec![0, 1, 2]]),
            Err(Error::Invariant { .. })
        ));
    }

    #[test]
    fn faces_touching_in_two_vertices_rejected() {
        // two squares glued at opposite corners only
        let x = complex_from_faces(6, vec![vec![0, 1, 2, 3], vec![0, 4, 2, 5]]);
        assert!(matches!(x, Err(Error::Invariant { .. })));
    }

    #[test]
    fn overrides_take_precedence() {
        let x = complex_from_faces(4, vec![vec![0, 1, 2, 3]]).unwrap();
        let mut t = Truncation {
            trusted_faces: vec![],
            ..Default::default()
        };
        t.true_degrees.faces.insert(0, Degree::Finite(7));
        t.true_degrees.edges.insert(1, Degree::Infinite);
        let x = x.with_truncation(Some(t)).unwrap();
        assert_eq!(x.true_face_degree(0).unwrap(), 7);
        assert!(matches!(
            x.true_edge_degree(1),
            Err(Error::NotLocallyFinite(Cell::Edge(1)))
        ));
        assert!(matches!(
            x.true_edge_degree(0),
            Err(Error::Incomplete(Cell::Edge(0)))
        ));
        assert!(matches!(
            x.true_vertex_degree(0),
            Err(Error::Incomplete(Cell::Vertex(0)))
        ));
    }
}
