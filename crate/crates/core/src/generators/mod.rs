//! Finite trusted balls of the example families.

pub mod book;
pub mod lattice;
pub mod layered;
pub mod product_trees;
pub mod regular;
pub mod spherical;

use crate::complex::PolygonalComplex;
use crate::error::{Error, Result};

pub use book::gen_book;
pub use lattice::{cubic_lattice, SquareGrid};
pub use product_trees::gen_product_trees;
pub use regular::{gen_coxeter_triangle, gen_mixed_core, gen_regular_tessellation, gen_sigma_n};
pub use spherical::{gen_spherical, SphericalKind};

/// Hard cap on generated faces (hyperbolic balls grow exponentially).
pub const DEFAULT_FACE_CAP: usize = 1_000_000;

/// A family and its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    RegularPq { p: usize, q: usize },
    CoxeterTriangle { r: usize, s: usize, t: usize },
    ProductTrees { r: usize, s: usize },
    Book { k: usize },
    SigmaN { n: usize },
    Spherical(SphericalKind),
}

/// What to generate: family, trusted radius and resource limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub radius: usize,
    pub face_cap: usize,
    /// Seed for apartment sampling (products of trees only).
    pub seed: u64,
    /// Apartment budget for products of trees.
    pub apartment_budget: Option<usize>,
}

impl GeneratorSpec {
    pub fn new(family: Family, radius: usize) -> Self {
        GeneratorSpec {
            family,
            radius,
            face_cap: DEFAULT_FACE_CAP,
            seed: 0,
            apartment_budget: None,
        }
    }
}

/// Builds the complex described by `spec`.
pub fn generate(spec: &GeneratorSpec) -> Result<PolygonalComplex> {
    if spec.face_cap == 0 {
        return Err(Error::Infeasible("face cap must be positive".into()));
    }
    let x = match spec.family {
        Family::RegularPq { p, q } => {
            regular::gen_regular_tessellation_capped(p, q, spec.radius, spec.face_cap)?
        }
        Family::CoxeterTriangle { r, s, t } => {
            regular::gen_coxeter_triangle_capped(r, s, t, spec.radius, spec.face_cap)?.complex
        }
        Family::ProductTrees { r, s } => {
            gen_product_trees(r, s, spec.radius, spec.seed, spec.apartment_budget)?
        }
        Family::Book { k } => gen_book(k, spec.radius)?,
        Family::SigmaN { n } => regular::gen_sigma_n_capped(n, spec.radius, spec.face_cap)?.complex,
        Family::Spherical(kind) => gen_spherical(kind)?,
    };
    if x.n_faces() > spec.face_cap {
        return Err(Error::CapExceeded {
            what: "generator face count",
            needed: x.n_faces() as u128,
            cap: spec.face_cap as u128,
        });
    }
    Ok(x)
}
