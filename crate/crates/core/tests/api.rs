use curvcx::curvature::{curvature_report, gauss_bonnet_sum};
use curvcx::format::{emit, parse};
use curvcx::generators::{generate, Family, GeneratorSpec, SphericalKind, DEFAULT_FACE_CAP};
use curvcx::spectral::{spectrum, Operator};
use curvcx::{Apartment, BigRational, Error, FaceMetric, PolygonalComplex, Rational};

fn build(family: Family, radius: usize) -> PolygonalComplex {
    generate(&GeneratorSpec {
        family,
        radius,
        face_cap: DEFAULT_FACE_CAP,
        seed: 0,
        apartment_budget: None,
    })
    .unwrap()
}

#[test]
fn generated_complexes_survive_a_file_round_trip() {
    for family in [
        Family::RegularPq { p: 5, q: 4 },
        Family::CoxeterTriangle { r: 2, s: 3, t: 7 },
        Family::ProductTrees { r: 2, s: 3 },
        Family::Book { k: 3 },
        Family::Spherical(SphericalKind::Cube),
    ] {
        let x = build(family, 2);
        let text = emit(&x);
        let y = parse(&text).unwrap();
        assert_eq!(emit(&y), text);
        assert_eq!(y.n_faces(), x.n_faces());
    }
}

#[test]
fn unknown_fields_and_versions_are_rejected() {
    let ok = r#"{"version":1,"vertices":3,"edges":[[0,1],[1,2],[0,2]],"faces":[[0,1,2]]}"#;
    assert!(parse(ok).is_ok());
    let bad_version = ok.replace("\"version\":1", "\"version\":2");
    assert!(matches!(parse(&bad_version), Err(Error::Format(_))));
    let extra = ok.replace("\"faces\"", "\"colour\":1,\"faces\"");
    assert!(parse(&extra).is_err());
}

#[test]
fn gauss_bonnet_agrees_in_both_exact_scalars() {
    for kind in [
        SphericalKind::Tetrahedron,
        SphericalKind::Cube,
        SphericalKind::Dodecahedron,
    ] {
        let x = build(Family::Spherical(kind), 0);
        let small: Rational = gauss_bonnet_sum(&x).unwrap();
        let big: BigRational = gauss_bonnet_sum(&x).unwrap();
        assert_eq!(small, Rational::from_integer(2));
        assert_eq!(big, BigRational::from_integer(2.into()));
    }
}

#[test]
fn curvature_is_uniform_on_regular_tessellations() {
    // {p,q}: every corner has 1/q - 1/2 + 1/p
    for (p, q) in [(4, 4), (5, 4), (7, 3), (3, 7)] {
        let x = build(Family::RegularPq { p, q }, 2);
        let rep =
            curvature_report::<Rational>(&x, &Apartment::declared_or_whole(&x), 0, 2).unwrap();
        let expected =
            Rational::new(1, q as i64) - Rational::new(1, 2) + Rational::new(1, p as i64);
        assert_eq!(rep.min_corner, Some(expected), "{{{p},{q}}}");
        assert_eq!(rep.max_corner, Some(expected), "{{{p},{q}}}");
    }
}

#[test]
fn sphere_sizes_grow_in_the_hyperbolic_plane_and_stop_on_a_solid() {
    let x = build(Family::RegularPq { p: 7, q: 3 }, 4);
    let m = FaceMetric::new(&x);
    let sizes: Vec<usize> = (0..=4)
        .map(|r| m.trusted_ball(0, r).unwrap().within(r as u32).count())
        .collect();
    assert_eq!(&sizes[..3], [1, 8, 29]);
    assert!(sizes.windows(2).all(|w| w[1] > w[0]));

    let cube = build(Family::Spherical(SphericalKind::Cube), 0);
    let b = FaceMetric::new(&cube).ball(0, u32::MAX);
    assert_eq!(b.order.len(), 6);
}

#[test]
fn laplacian_spectrum_of_a_ball_is_sorted_and_positive() {
    let x = build(Family::RegularPq { p: 4, q: 4 }, 3);
    let rep = spectrum::<f64>(&x, 0, 2, &Operator::Laplacian).unwrap();
    assert_eq!(rep.faces.len(), 13);
    assert!(rep.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    assert!(rep.eigenvalues[0] > 0.0);
    assert!(rep.residuals.iter().all(|r| *r < 1e-9));
}
