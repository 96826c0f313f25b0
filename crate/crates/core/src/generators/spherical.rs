//! Finite spherical tessellations: the platonic solids and the two wheel
//! families (bipyramids over an n-gon and trapezohedra).

use std::collections::HashMap;

use crate::complex::{complex_from_faces, PolygonalComplex};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SphericalKind {
    Tetrahedron,
    Cube,
    Octahedron,
    Dodecahedron,
    Icosahedron,
    /// Two wheels of n triangles glued along their rims.
    Prism(usize),
    /// Two wheels of n quadrilaterals glued along their zigzag rims.
    Antiprism(usize),
}

impl std::str::FromStr for SphericalKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let param = |prefix: &str| -> Option<Result<usize>> {
            s.strip_prefix(prefix).map(|rest| {
                rest.trim_start_matches('(')
                    .trim_end_matches(')')
                    .parse()
                    .map_err(|_| Error::Infeasible(format!("bad parameter in {s:?}")))
            })
        };
        Ok(match s {
            "tetrahedron" => SphericalKind::Tetrahedron,
            "cube" => SphericalKind::Cube,
            "octahedron" => SphericalKind::Octahedron,
            "dodecahedron" => SphericalKind::Dodecahedron,
            "icosahedron" => SphericalKind::Icosahedron,
            _ => {
                if let Some(n) = param("antiprism") {
                    SphericalKind::Antiprism(n?)
                } else if let Some(n) = param("prism") {
                    SphericalKind::Prism(n?)
                } else {
                    return Err(Error::Infeasible(format!("unknown spherical kind {s:?}")));
                }
            }
        })
    }
}

fn octahedron_faces() -> Vec<Vec<usize>> {
    let ring = |i: usize| 1 + (i % 4);
    let mut faces: Vec<Vec<usize>> = (0..4).map(|i| vec![0, ring(i), ring(i + 1)]).collect();
    faces.extend((0..4).map(|i| vec![5, ring(i + 1), ring(i)]));
    faces
}

fn icosahedron_faces() -> Vec<Vec<usize>> {
    let u = |i: usize| 1 + (i % 5);
    let l = |i: usize| 6 + (i % 5);
    let mut faces = Vec::new();
    for i in 0..5 {
        faces.push(vec![0, u(i), u(i + 1)]);
        faces.push(vec![u(i), l(i), u(i + 1)]);
        faces.push(vec![u(i + 1), l(i), l(i + 1)]);
        faces.push(vec![11, l(i + 1), l(i)]);
    }
    faces
}

/// Dual of a closed, consistently oriented surface given by face cycles:
/// one vertex per face, one face per vertex.
fn dual_faces(n_vertices: usize, faces: &[Vec<usize>]) -> Vec<Vec<usize>> {
    // directed edge (u, v) → face containing it in its cycle order
    let mut owner = HashMap::new();
    for (f, c) in faces.iter().enumerate() {
        for i in 0..c.len() {
            owner.insert((c[i], c[(i + 1) % c.len()]), f);
        }
    }
    (0..n_vertices)
        .map(|v| {
            // start at any face through v, rotate by crossing the edge entering v
            let start = faces.iter().position(|c| c.contains(&v)).unwrap();
            let mut cycle = vec![start];
            let mut f = start;
            loop {
                let c = &faces[f];
                let i = c.iter().position(|&w| w == v).unwrap();
                let before = c[(i + c.len() - 1) % c.len()];
                // the other face on edge {before, v} traverses it as (v, before)
                f = owner[&(v, before)];
                if f == start {
                    break;
                }
                cycle.push(f);
            }
            cycle
        })
        .collect()
}

/// Builds a finite spherical tessellation; every cell is complete.
pub fn gen_spherical(kind: SphericalKind) -> Result<PolygonalComplex> {
    let (n_vertices, faces) = match kind {
        SphericalKind::Tetrahedron => (
            4,
            vec![vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 1], vec![1, 3, 2]],
        ),
        SphericalKind::Octahedron => (6, octahedron_faces()),
        SphericalKind::Cube => (8, dual_faces(6, &octahedron_faces())),
        SphericalKind::Icosahedron => (12, icosahedron_faces()),
        SphericalKind::Dodecahedron => (20, dual_faces(12, &icosahedron_faces())),
        SphericalKind::Prism(n) | SphericalKind::Antiprism(n) if n < 3 => {
            return Err(Error::Infeasible(format!("wheel size {n} < 3")));
        }
        SphericalKind::Prism(n) => {
            let e = |i: usize| 2 + (i % n);
            let mut faces: Vec<Vec<usize>> = (0..n).map(|i| vec![0, e(i), e(i + 1)]).collect();
            faces.extend((0..n).map(|i| vec![1, e(i + 1), e(i)]));
            (n + 2, faces)
        }
        SphericalKind::Antiprism(n) => {
            let s = |i: usize| 2 + (i % n);
            let t = |i: usize| 2 + n + (i % n);
            let mut faces: Vec<Vec<usize>> =
                (0..n).map(|i| vec![0, s(i), t(i), s(i + 1)]).collect();
            faces.extend((0..n).map(|i| vec![1, t(i + 1), s(i + 1), t(i)]));
            (2 * n + 2, faces)
        }
    };
    complex_from_faces(n_vertices, faces)
}
