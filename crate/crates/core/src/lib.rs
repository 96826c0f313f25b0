//! Polygonal complexes with planar substructures: construction, sectional
//! curvature, face-metric geometry, isoperimetry and face-Laplacian spectra.
//!
//! The combinatorial and curvature layers are generic over the scalar type
//! (see [`scalar`]); the aliases below fix the exact rational type used by
//! default.

pub mod apartment;
pub mod complex;
pub mod curvature;
pub mod dashboard;
pub mod error;
pub mod format;
pub mod generators;
pub mod isoperimetry;
pub mod link;
pub mod metric;
pub mod scalar;
pub mod spectral;
pub mod validate;

pub use apartment::Apartment;
pub use complex::{
    build_complex, degree_profile, Degree, PolygonalComplex, RawComplex, Truncation,
};
pub use error::{Cell, Error, Result};
pub use metric::FaceMetric;
pub use scalar::{ExactScalar, Scalar};

/// Default exact scalar.
pub type Rational = num_rational::Ratio<i64>;
/// Arbitrary-precision exact scalar.
pub type BigRational = num_rational::BigRational;
/// Default floating-point scalar.
pub type Real = f64;

pub type CurvatureReport = curvature::CurvatureReport<Rational>;
pub type CoxeterClass = curvature::CoxeterClass<Rational>;
pub type CheegerWitness = isoperimetry::CheegerWitness<Rational>;
pub type CheegerBounds = isoperimetry::CheegerBounds<Rational>;
pub type SpectralReport = spectral::SpectralReport<Real>;
