//! Sectional curvature of apartments, Gauss–Bonnet sums, Coxeter polygon
//! classification and the positive/nonpositive size dichotomy.
//!
//! All arithmetic is exact: functions are generic over [`ExactScalar`] so
//! that signs (which decide every classification below) are never subject
//! to rounding.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::apartment::Apartment;
use crate::complex::PolygonalComplex;
use crate::error::{Error, Result};
use crate::metric::FaceMetric;
use crate::scalar::{reciprocal, ExactScalar};
use crate::validate::{validate_tessellation, SurfaceKind};

/// κ_c^(Σ)(v,f) = 1/|v|_Σ − 1/2 + 1/|∂f|.
pub fn corner_curvature<T: ExactScalar>(
    x: &PolygonalComplex,
    ap: &Apartment,
    v: usize,
    f: usize,
) -> Result<T> {
    if f >= x.n_faces() || !ap.contains(f) || !x.face(f).contains(&v) {
        return Err(Error::Precondition(format!(
            "corner ({v}, {f}) is not a corner of the apartment"
        )));
    }
    let deg = ap.vertex_degree(x, v)?;
    Ok(corner_value(deg, x.face(f).len()))
}

fn corner_value<T: ExactScalar>(vertex_degree: usize, boundary: usize) -> T {
    reciprocal::<T>(vertex_degree) - T::from_ratio(1, 2) + reciprocal::<T>(boundary)
}

/// κ^(Σ)(f): the sum of the corner curvatures of f.
pub fn face_curvature<T: ExactScalar>(x: &PolygonalComplex, ap: &Apartment, f: usize) -> Result<T> {
    if f >= x.n_faces() || !ap.contains(f) {
        return Err(Error::Precondition(format!(
            "face {f} is not in the apartment"
        )));
    }
    x.face(f).iter().try_fold(T::zero(), |acc, &v| {
        Ok(acc + corner_curvature::<T>(x, ap, v, f)?)
    })
}

/// Σ_f κ(f) over a finite sphere tessellation (the whole complex is the
/// apartment). Equals the Euler characteristic 2.
pub fn gauss_bonnet_sum<T: ExactScalar>(x: &PolygonalComplex) -> Result<T> {
    if !x.is_complete() {
        return Err(Error::Precondition(
            "Gauss–Bonnet sum needs a finite, completely built complex".into(),
        ));
    }
    let all: Vec<usize> = (0..x.n_faces()).collect();
    let check = validate_tessellation(x, &all);
    if check.kind != SurfaceKind::Spherical {
        return Err(Error::Precondition(format!(
            "complex is not a sphere tessellation ({:?})",
            check.kind
        )));
    }
    let ap = Apartment::whole(x);
    all.iter().try_fold(T::zero(), |acc, &f| {
        Ok(acc + face_curvature::<T>(x, &ap, f)?)
    })
}

/// Curvature tables of the trusted ball B_R(o) in a family of apartments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureReport<T> {
    pub center: usize,
    pub radius: usize,
    /// (apartment index, vertex, face) → κ_c.
    pub corners: BTreeMap<(usize, usize, usize), T>,
    /// (apartment index, face) → κ.
    pub faces: BTreeMap<(usize, usize), T>,
    pub min_corner: Option<T>,
    pub max_corner: Option<T>,
    pub min_face: Option<T>,
    pub max_face: Option<T>,
    /// Every corner has κ_c ≤ 0.
    pub all_nonpositive: bool,
    /// Every corner has κ_c < 0.
    pub all_negative: bool,
    /// Every corner has κ_c > 0.
    pub all_positive: bool,
    /// Entry r: sup of κ over faces of B_R ∖ B_r (None when that annulus
    /// meets no apartment). A proxy for κ_∞ built from nested balls.
    pub kappa_infinity_proxy: Vec<Option<T>>,
}

impl<T: ExactScalar> CurvatureReport<T> {
    /// Every face curvature is > 0.
    pub fn all_faces_positive(&self) -> bool {
        self.faces.values().all(|k| k.is_positive())
    }

    /// Every face curvature is ≤ 0.
    pub fn all_faces_nonpositive(&self) -> bool {
        self.faces.values().all(|k| !k.is_positive())
    }
}

/// Corner and face curvature over B_R(o) ∩ Σ for every supplied apartment.
pub fn curvature_report<T: ExactScalar>(
    x: &PolygonalComplex,
    apartments: &[Apartment],
    o: usize,
    radius: usize,
) -> Result<CurvatureReport<T>> {
    let metric = FaceMetric::new(x);
    let ball = metric.trusted_ball(o, radius)?;
    let members: Vec<(usize, usize)> = ball
        .within(radius as u32)
        .map(|f| (f, ball.get(f).unwrap() as usize))
        .collect();

    type Corners<T> = Vec<(usize, usize, Vec<(usize, T)>)>;
    let per_apartment: Vec<Result<Corners<T>>> = apartments
        .par_iter()
        .enumerate()
        .map(|(i, ap)| {
            let mut degree_cache: BTreeMap<usize, usize> = BTreeMap::new();
            let mut out = Vec::new();
            for &(f, _) in &members {
                if !ap.contains(f) {
                    continue;
                }
                let boundary = x.face(f).len();
                let mut corners = Vec::with_capacity(boundary);
                for &v in x.face(f) {
                    let deg = match degree_cache.get(&v) {
                        Some(&deg) => deg,
                        None => {
                            let deg = ap.vertex_degree(x, v)?;
                            degree_cache.insert(v, deg);
                            deg
                        }
                    };
                    corners.push((v, corner_value::<T>(deg, boundary)));
                }
                out.push((i, f, corners));
            }
            Ok(out)
        })
        .collect();

    let dist: BTreeMap<usize, usize> = members.iter().copied().collect();
    let mut report = CurvatureReport {
        center: o,
        radius,
        corners: BTreeMap::new(),
        faces: BTreeMap::new(),
        min_corner: None,
        max_corner: None,
        min_face: None,
        max_face: None,
        all_nonpositive: true,
        all_negative: true,
        all_positive: true,
        kappa_infinity_proxy: vec![None; radius],
    };
    for block in per_apartment {
        for (i, f, corners) in block? {
            let mut kappa = T::zero();
            for (v, k) in corners {
                report.all_nonpositive &= !k.is_positive();
                report.all_negative &= k.is_negative();
                report.all_positive &= k.is_positive();
                update_min_max(&mut report.min_corner, &mut report.max_corner, &k);
                kappa = kappa + k.clone();
                report.corners.insert((i, v, f), k);
            }
            update_min_max(&mut report.min_face, &mut report.max_face, &kappa);
            for r in 0..dist[&f].min(radius) {
                let slot = &mut report.kappa_infinity_proxy[r];
                if slot.as_ref().is_none_or(|s| kappa > *s) {
                    *slot = Some(kappa.clone());
                }
            }
            report.faces.insert((i, f), kappa);
        }
    }
    if report.corners.is_empty() {
        report.all_nonpositive = false;
        report.all_negative = false;
        report.all_positive = false;
    }
    Ok(report)
}

fn update_min_max<T: ExactScalar>(min: &mut Option<T>, max: &mut Option<T>, k: &T) {
    if min.as_ref().is_none_or(|m| k < m) {
        *min = Some(k.clone());
    }
    if max.as_ref().is_none_or(|m| k > m) {
        *max = Some(k.clone());
    }
}

/// Geometry of a Coxeter polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Spherical,
    Euclidean,
    Hyperbolic,
}

/// Predicted apartment data for a Coxeter k-gon with angles π/m_i.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoxeterClass<T> {
    pub arity: usize,
    pub m: Vec<usize>,
    pub geometry: Geometry,
    /// Vertex degrees 2m_i in the apartments.
    pub vertex_degrees: Vec<usize>,
    /// κ_c at a corner of type i: 1/(2m_i) − 1/2 + 1/k.
    pub corner_values: Vec<T>,
    /// κ of a face: the sum of the corner values.
    pub face_value: T,
    /// (2m + k − mk)/(2mk) when all m_i equal m.
    pub regular_constant: Option<T>,
}

/// Classifies the Coxeter polygon with angle denominators `m` by the sign of
/// (k−2) − Σ 1/m_i and predicts the curvature of its tessellation.
pub fn coxeter_classify<T: ExactScalar>(m: &[usize]) -> Result<CoxeterClass<T>> {
    let k = m.len();
    if k < 3 {
        return Err(Error::Precondition(format!(
            "a Coxeter polygon needs at least 3 sides, got {k}"
        )));
    }
    if let Some(&bad) = m.iter().find(|&&mi| mi < 2) {
        return Err(Error::Precondition(format!(
            "angle denominators must be >= 2, got {bad}"
        )));
    }
    let excess = m
        .iter()
        .fold(T::from_count(k - 2), |acc, &mi| acc - reciprocal::<T>(mi));
    let geometry = if excess.is_positive() {
        Geometry::Hyperbolic
    } else if excess.is_zero() {
        Geometry::Euclidean
    } else {
        Geometry::Spherical
    };
    let corner_values: Vec<T> = m.iter().map(|&mi| corner_value::<T>(2 * mi, k)).collect();
    let face_value = corner_values.iter().cloned().fold(T::zero(), |a, b| a + b);
    let regular_constant = m.iter().all(|&mi| mi == m[0]).then(|| {
        let (mm, kk) = (m[0] as i64, k as i64);
        T::from_ratio(2 * mm + kk - mm * kk, 2 * mm * kk)
    });
    Ok(CoxeterClass {
        arity: k,
        m: m.to_vec(),
        geometry,
        vertex_degrees: m.iter().map(|&mi| 2 * mi).collect(),
        corner_values,
        face_value,
        regular_constant,
    })
}

/// Which side of the positive/nonpositive size dichotomy the data supports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dichotomy {
    /// All face curvatures positive and the complex is finite.
    PositiveFinite,
    /// All face curvatures nonpositive and the ball kept growing to radius R.
    NonpositiveUnbounded,
    NoClaim,
}

/// Evidence for the size dichotomy drawn from a curvature report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MyersEvidence {
    pub verdict: Dichotomy,
    /// |S_n(o)| for n = 0..=R.
    pub sphere_sizes: Vec<usize>,
    pub finite: bool,
    pub note: String,
}

/// Positive face curvature with a finite complex supports the spherical
/// case; nonpositive face curvature with spheres that stay nonempty up to
/// R supports the infinite case. The face (not corner) sign decides.
pub fn myers_evidence<T: ExactScalar>(
    x: &PolygonalComplex,
    report: &CurvatureReport<T>,
) -> Result<MyersEvidence> {
    let metric = FaceMetric::new(x);
    let ball = metric.trusted_ball(report.center, report.radius)?;
    let sphere_sizes: Vec<usize> = (0..=report.radius as u32)
        .map(|k| ball.sphere(k).count())
        .collect();
    let finite = x.is_complete();
    let growing = sphere_sizes.iter().all(|&s| s > 0);
    let (verdict, note) = if report.faces.is_empty() {
        (
            Dichotomy::NoClaim,
            "no apartment faces in the trusted ball".to_string(),
        )
    } else if report.all_faces_positive() {
        if finite {
            (
                Dichotomy::PositiveFinite,
                format!(
                    "all face curvatures > 0; complex is finite with {} faces",
                    x.n_faces()
                ),
            )
        } else {
            (
                Dichotomy::NoClaim,
                "all trusted face curvatures > 0 but the complex is a truncation".to_string(),
            )
        }
    } else if report.all_faces_nonpositive() {
        if growing && !finite {
            (
                Dichotomy::NonpositiveUnbounded,
                format!(
                    "all face curvatures <= 0; spheres nonempty up to radius {}",
                    report.radius
                ),
            )
        } else {
            (
                Dichotomy::NoClaim,
                "all face curvatures <= 0 but the ball stopped growing".to_string(),
            )
        }
    } else {
        (
            Dichotomy::NoClaim,
            "face curvatures of both signs".to_string(),
        )
    };
    Ok(MyersEvidence {
        verdict,
        sphere_sizes,
        finite,
        note,
    })
}
