//! Planar tessellation families built by the layered construction:
//! regular {p,q}, Coxeter triangle tessellations, the bipartite square
//! tessellations Σ_n and a mixed square/octagon tessellation.

use crate::complex::PolygonalComplex;
use crate::error::{Error, Result};
use crate::generators::layered::{build_layered, LayerRule, Layered};
use crate::generators::spherical::{gen_spherical, SphericalKind};
use crate::generators::DEFAULT_FACE_CAP;

/// Every face a p-gon, every vertex of degree q.
#[derive(Clone, Copy, Debug)]
pub struct RegularRule {
    pub p: usize,
    pub q: usize,
}

impl LayerRule for RegularRule {
    fn center_colors(&self) -> Vec<u8> {
        vec![0; self.p]
    }
    fn face_size(&self, _: usize, _: &[u8]) -> usize {
        self.p
    }
    fn fresh_colors(&self, _: &[u8], count: usize) -> Result<Vec<u8>> {
        Ok(vec![0; count])
    }
    fn vertex_degree(&self, _: u8, _: usize) -> usize {
        self.q
    }
}

/// Triangles whose vertices are coloured 0, 1, 2 with degrees 2r, 2s, 2t.
#[derive(Clone, Copy, Debug)]
pub struct CoxeterTriangleRule {
    pub r: usize,
    pub s: usize,
    pub t: usize,
}

impl LayerRule for CoxeterTriangleRule {
    fn center_colors(&self) -> Vec<u8> {
        vec![0, 1, 2]
    }
    fn face_size(&self, _: usize, _: &[u8]) -> usize {
        3
    }
    fn fresh_colors(&self, path: &[u8], count: usize) -> Result<Vec<u8>> {
        let distinct =
            |c: &[u8]| c.iter().collect::<std::collections::BTreeSet<_>>().len() == c.len();
        match count {
            0 if distinct(path) => Ok(vec![]),
            1 if path.len() == 2 && distinct(path) => Ok(vec![3 - path[0] - path[1]]),
            _ => Err(Error::Infeasible(
                "triangle colouring cannot be completed".into(),
            )),
        }
    }
    fn vertex_degree(&self, color: u8, _: usize) -> usize {
        2 * [self.r, self.s, self.t][color as usize]
    }
}

/// Squares alternating between colour 0 (degree 2n) and colour 1 (degree 3).
#[derive(Clone, Copy, Debug)]
pub struct SigmaRule {
    pub n: usize,
}

impl LayerRule for SigmaRule {
    fn center_colors(&self) -> Vec<u8> {
        vec![0, 1, 0, 1]
    }
    fn face_size(&self, _: usize, _: &[u8]) -> usize {
        4
    }
    fn fresh_colors(&self, path: &[u8], count: usize) -> Result<Vec<u8>> {
        let mut out = Vec::with_capacity(count);
        let mut c = *path.last().unwrap();
        for _ in 0..count {
            c = 1 - c;
            out.push(c);
        }
        if c == path[0] || path.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Infeasible(
                "square colouring cannot alternate".into(),
            ));
        }
        Ok(out)
    }
    fn vertex_degree(&self, color: u8, _: usize) -> usize {
        if color == 0 {
            2 * self.n
        } else {
            3
        }
    }
}

/// Squares with degree-4 vertices up to a core generation, then octagons
/// with degree-3 vertices.
#[derive(Clone, Copy, Debug)]
pub struct MixedCoreRule {
    /// Faces of generation `<= core` are squares; vertices of generation
    /// `< core` have degree 4.
    pub core: usize,
    pub outer_p: usize,
    pub outer_q: usize,
}

impl LayerRule for MixedCoreRule {
    fn center_colors(&self) -> Vec<u8> {
        vec![0; 4]
    }
    fn face_size(&self, generation: usize, _: &[u8]) -> usize {
        if generation <= self.core {
            4
        } else {
            self.outer_p
        }
    }
    fn fresh_colors(&self, _: &[u8], count: usize) -> Result<Vec<u8>> {
        Ok(vec![0; count])
    }
    fn vertex_degree(&self, _: u8, generation: usize) -> usize {
        if generation < self.core {
            4
        } else {
            self.outer_q
        }
    }
}

/// {p,q} tessellation ball with trusted radius R (spherical pairs give the
/// corresponding platonic solid).
pub fn gen_regular_tessellation(p: usize, q: usize, radius: usize) -> Result<PolygonalComplex> {
    gen_regular_tessellation_capped(p, q, radius, DEFAULT_FACE_CAP)
}

pub fn gen_regular_tessellation_capped(
    p: usize,
    q: usize,
    radius: usize,
    cap: usize,
) -> Result<PolygonalComplex> {
    if p < 3 || q < 3 {
        return Err(Error::Infeasible(format!(
            "{{{p},{q}}} needs p >= 3 and q >= 3"
        )));
    }
    if (p - 2) * (q - 2) < 4 {
        let kind = match (p, q) {
            (3, 3) => SphericalKind::Tetrahedron,
            (4, 3) => SphericalKind::Cube,
            (3, 4) => SphericalKind::Octahedron,
            (5, 3) => SphericalKind::Dodecahedron,
            (3, 5) => SphericalKind::Icosahedron,
            _ => unreachable!(),
        };
        return gen_spherical(kind);
    }
    Ok(build_layered(&RegularRule { p, q }, radius, cap)?.complex)
}

/// Triangle tessellation with vertex classes of degree 2r, 2s, 2t.
pub fn gen_coxeter_triangle(r: usize, s: usize, t: usize, radius: usize) -> Result<Layered> {
    gen_coxeter_triangle_capped(r, s, t, radius, DEFAULT_FACE_CAP)
}

pub fn gen_coxeter_triangle_capped(
    r: usize,
    s: usize,
    t: usize,
    radius: usize,
    cap: usize,
) -> Result<Layered> {
    if r < 2 || s < 2 || t < 2 {
        return Err(Error::Infeasible(
            "Coxeter triangle parameters must be >= 2".into(),
        ));
    }
    // 1/r + 1/s + 1/t <= 1
    if r * s + s * t + t * r > r * s * t {
        return Err(Error::Infeasible(format!(
            "({r},{s},{t}) is spherical; only Euclidean or hyperbolic triangles tile the plane"
        )));
    }
    build_layered(&CoxeterTriangleRule { r, s, t }, radius, cap)
}

/// Bipartite square tessellation Σ_n (degrees 2n and 3).
pub fn gen_sigma_n(n: usize, radius: usize) -> Result<Layered> {
    gen_sigma_n_capped(n, radius, DEFAULT_FACE_CAP)
}

pub fn gen_sigma_n_capped(n: usize, radius: usize, cap: usize) -> Result<Layered> {
    if n < 3 {
        return Err(Error::Infeasible("Σ_n needs n >= 3".into()));
    }
    build_layered(&SigmaRule { n }, radius, cap)
}

/// Square core around the center (3×3 block) continued by {p,q} faces.
pub fn gen_mixed_core(outer_p: usize, outer_q: usize, radius: usize) -> Result<PolygonalComplex> {
    Ok(build_layered(
        &MixedCoreRule {
            core: 1,
            outer_p,
            outer_q,
        },
        radius,
        DEFAULT_FACE_CAP,
    )?
    .complex)
}
