//! Apartments: distinguished face subsets forming planar tessellations.

use std::collections::BTreeSet;

use crate::complex::PolygonalComplex;
use crate::error::{Cell, Error, Result};

/// A face subset of a parent complex, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Apartment {
    faces: Vec<usize>,
}

impl Apartment {
    pub fn new(mut faces: Vec<usize>) -> Self {
        faces.sort_unstable();
        faces.dedup();
        Apartment { faces }
    }

    /// The whole complex as a single apartment.
    pub fn whole(x: &PolygonalComplex) -> Self {
        Apartment {
            faces: (0..x.n_faces()).collect(),
        }
    }

    /// Apartments declared in the complex file.
    pub fn declared(x: &PolygonalComplex) -> Vec<Self> {
        x.apartments()
            .iter()
            .map(|a| Apartment::new(a.clone()))
            .collect()
    }

    /// Declared apartments, or the whole complex when none are declared.
    pub fn declared_or_whole(x: &PolygonalComplex) -> Vec<Self> {
        if x.apartments().is_empty() {
            vec![Apartment::whole(x)]
        } else {
            Apartment::declared(x)
        }
    }

    pub fn faces(&self) -> &[usize] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn contains(&self, f: usize) -> bool {
        self.faces.binary_search(&f).is_ok()
    }

    /// Σ-faces at vertex v.
    pub fn faces_at<'a>(
        &'a self,
        x: &'a PolygonalComplex,
        v: usize,
    ) -> impl Iterator<Item = usize> + 'a {
        x.vertex_faces(v)
            .iter()
            .copied()
            .filter(|&f| self.contains(f))
    }

    /// |v|_Σ: number of distinct Σ-edges at v (edges on a Σ-face).
    pub fn vertex_degree(&self, x: &PolygonalComplex, v: usize) -> Result<usize> {
        if !x.vertex_is_complete(v) {
            return Err(Error::Incomplete(Cell::Vertex(v)));
        }
        let edges: BTreeSet<usize> = x
            .vertex_edges(v)
            .iter()
            .copied()
            .filter(|&e| x.edge_faces(e).iter().any(|&f| self.contains(f)))
            .collect();
        Ok(edges.len())
    }

    /// Number of Σ-faces containing edge e.
    pub fn edge_degree(&self, x: &PolygonalComplex, e: usize) -> usize {
        x.edge_faces(e)
            .iter()
            .filter(|&&f| self.contains(f))
            .count()
    }
}
