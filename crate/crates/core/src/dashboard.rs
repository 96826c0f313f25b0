//! Consolidated property dashboard: for each curvature-driven property,
//! check its hypothesis and its conclusion on a trusted ball and record a
//! status. A row is only ever marked violated together with the cells that
//! witness the failure.

use std::fmt;

use serde::Serialize;

use crate::apartment::Apartment;
use crate::complex::PolygonalComplex;
use crate::curvature::{curvature_report, myers_evidence, CurvatureReport, Dichotomy};
use crate::error::{Cell, Error, Result};
use crate::isoperimetry::{cheeger_bruteforce, cheeger_lower_bounds, nearest_region};
use crate::metric::FaceMetric;
use crate::spectral::{finite_support_eigenfunctions, half_sphere_indicator, solve_dirichlet};
use crate::Rational;

/// Outcome of one dashboard row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum Status {
    /// Hypothesis and conclusion both hold on the checked ball.
    VerifiedAtScale,
    /// The hypothesis fails, so the property makes no claim.
    HypothesisNotMet,
    /// A cap or the trusted radius prevented the check.
    SkippedBudget,
    /// Hypothesis holds but the conclusion fails at these cells.
    Violated { cells: Vec<Cell> },
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::VerifiedAtScale => write!(f, "verified-at-scale"),
            Status::HypothesisNotMet => write!(f, "hypothesis-not-met"),
            Status::SkippedBudget => write!(f, "skipped-budget"),
            Status::Violated { cells } => {
                write!(f, "violated at ")?;
                for (i, c) in cells.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                Ok(())
            }
        }
    }
}

/// One property row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub property: &'static str,
    pub hypothesis: String,
    pub hypothesis_met: Option<bool>,
    pub conclusion: String,
    pub status: Status,
    pub detail: String,
    /// Extra evidence shown even when the hypothesis fails (e.g. an
    /// eigenfunction).
    pub exhibit: Option<String>,
}

/// Scope of a dashboard run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DashboardConfig {
    pub center: usize,
    pub radius: usize,
    /// Size of the connected region handed to the Cheeger brute force.
    pub cheeger_region: usize,
    /// Cap on geodesics enumerated per bigon.
    pub bigon_cap: usize,
    /// Also solve two Dirichlet problems on the ball.
    pub dirichlet: bool,
}

impl Default for DashboardConfig {
    fn default() -> Self {
        DashboardConfig {
            center: 0,
            radius: 3,
            cheeger_region: 14,
            bigon_cap: 10_000,
            dirichlet: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dashboard {
    pub center: usize,
    pub radius: usize,
    pub rows: Vec<Row>,
}

impl Dashboard {
    pub fn row(&self, property: &str) -> Option<&Row> {
        self.rows.iter().find(|r| r.property == property)
    }
}

fn budget_row(property: &'static str, hypothesis: &str, conclusion: &str, e: Error) -> Result<Row> {
    match e {
        Error::CapExceeded { .. } | Error::Untrusted { .. } => Ok(Row {
            property,
            hypothesis: hypothesis.into(),
            hypothesis_met: None,
            conclusion: conclusion.into(),
            status: Status::SkippedBudget,
            detail: e.to_string(),
            exhibit: None,
        }),
        e => Err(e),
    }
}

/// Status from a hypothesis flag and the failing cells of the conclusion.
fn judge(met: bool, failures: Vec<Cell>) -> Status {
    if !met {
        Status::HypothesisNotMet
    } else if failures.is_empty() {
        Status::VerifiedAtScale
    } else {
        Status::Violated { cells: failures }
    }
}

fn faces(cells: impl IntoIterator<Item = usize>) -> Vec<Cell> {
    cells.into_iter().map(Cell::Face).collect()
}

/// Runs every row on B_R(o) of `x`, with curvature measured in `apartments`.
pub fn report(
    x: &PolygonalComplex,
    apartments: &[Apartment],
    cfg: &DashboardConfig,
) -> Result<Dashboard> {
    let (o, radius) = (cfg.center, cfg.radius);
    let curvature = curvature_report::<Rational>(x, apartments, o, radius)?;
    let metric = FaceMetric::new(x);
    let rows = vec![
        geodesic_extension(&metric, &curvature, o, radius)?,
        thin_bigons(&metric, &curvature, o, radius, cfg.bigon_cap)?,
        backward_degree(&metric, &curvature, o, radius)?,
        cheeger(x, o, radius, cfg.cheeger_region)?,
        size_dichotomy(x, &curvature)?,
        unique_continuation(x, &curvature, o, radius)?,
    ];
    let mut rows = rows;
    if cfg.dirichlet {
        rows.push(dirichlet(x, &curvature, o, radius)?);
    }
    Ok(Dashboard {
        center: o,
        radius,
        rows,
    })
}

fn corner_range(c: &CurvatureReport<Rational>) -> String {
    match (c.min_corner, c.max_corner) {
        (Some(lo), Some(hi)) => format!("corner curvature in [{lo}, {hi}]"),
        _ => "no corners in the ball".into(),
    }
}

fn geodesic_extension(
    m: &FaceMetric,
    c: &CurvatureReport<Rational>,
    o: usize,
    radius: usize,
) -> Result<Row> {
    let (hyp, con) = (
        "every corner curvature <= 0",
        "every geodesic from the center extends (empty cut locus)",
    );
    let cut = match m.cut_locus(o, radius) {
        Ok(cut) => cut,
        Err(e) => return budget_row("geodesic-extension", hyp, con, e),
    };
    let met = c.all_nonpositive && !c.corners.is_empty();
    Ok(Row {
        property: "geodesic-extension",
        hypothesis: hyp.into(),
        hypothesis_met: Some(met),
        conclusion: con.into(),
        detail: format!(
            "{}; cut locus inside B_{radius} has {} faces",
            corner_range(c),
            cut.len()
        ),
        status: judge(met, faces(cut)),
        exhibit: None,
    })
}

fn thin_bigons(
    m: &FaceMetric,
    c: &CurvatureReport<Rational>,
    o: usize,
    radius: usize,
    cap: usize,
) -> Result<Row> {
    let (hyp, con) = (
        "every corner curvature < 0",
        "geodesic bigons are thin (certificate <= 2, spread <= 1)",
    );
    let half = radius / 2;
    let ball = match m.trusted_ball(o, radius) {
        Ok(b) => b,
        Err(e) => return budget_row("thin-bigons", hyp, con, e),
    };
    let inner: Vec<usize> = ball.within(half as u32).collect();
    let (mut pairs, mut worst_cert, mut worst_delta, mut unenumerated) =
        (0usize, 0usize, 0u32, 0usize);
    let mut failures = Vec::new();
    for (i, &f) in inner.iter().enumerate() {
        for &g in &inner[i + 1..] {
            pairs += 1;
            let cert = match m.bigon_certificate(f, g) {
                Ok(w) => w,
                Err(e) => return budget_row("thin-bigons", hyp, con, e),
            };
            worst_cert = worst_cert.max(cert);
            let delta = match m.enumerate_bigons(f, g, cap) {
                Ok(b) => b.delta,
                Err(Error::CapExceeded { .. }) => {
                    unenumerated += 1;
                    0
                }
                Err(e) => return Err(e),
            };
            worst_delta = worst_delta.max(delta);
            if cert > 2 || delta > 1 {
                failures.extend([Cell::Face(f), Cell::Face(g)]);
            }
        }
    }
    failures.sort_unstable();
    failures.dedup();
    let met = c.all_negative && !c.corners.is_empty();
    Ok(Row {
        property: "thin-bigons",
        hypothesis: hyp.into(),
        hypothesis_met: Some(met),
        conclusion: con.into(),
        detail: format!(
            "{pairs} pairs in B_{half}: max certificate {worst_cert}, max spread {worst_delta}{}",
            if unenumerated > 0 {
                format!(" ({unenumerated} pairs over the geodesic cap)")
            } else {
                String::new()
            }
        ),
        status: judge(met, failures),
        exhibit: None,
    })
}

fn backward_degree(
    m: &FaceMetric,
    c: &CurvatureReport<Rational>,
    o: usize,
    radius: usize,
) -> Result<Row> {
    let (hyp, con) = (
        "every corner curvature <= 0",
        "every face has at most 2 neighbours one step closer to the center",
    );
    let s = match m.spheres(o, radius) {
        Ok(s) => s,
        Err(e) => return budget_row("backward-degree", hyp, con, e),
    };
    let mut bad: Vec<usize> = s
        .degrees
        .iter()
        .filter(|(_, d)| d.1 > 2)
        .map(|(&f, _)| f)
        .collect();
    bad.sort_unstable();
    let max_minus = s.degrees.values().map(|d| d.1).max().unwrap_or(0);
    let met = c.all_nonpositive && !c.corners.is_empty();
    Ok(Row {
        property: "backward-degree",
        hypothesis: hyp.into(),
        hypothesis_met: Some(met),
        conclusion: con.into(),
        detail: format!("max backward degree {max_minus} over B_{radius}"),
        status: judge(met, faces(bad)),
        exhibit: None,
    })
}

fn cheeger(x: &PolygonalComplex, o: usize, radius: usize, size: usize) -> Result<Row> {
    let (hyp, con) = (
        "the ball is locally finite",
        "brute-force Cheeger ratio of a region >= the degree bound",
    );
    let bounds = match cheeger_lower_bounds::<Rational>(x, o, radius) {
        Ok(b) => b,
        Err(Error::NotLocallyFinite(cell)) => {
            return Ok(Row {
                property: "cheeger-bounds",
                hypothesis: hyp.into(),
                hypothesis_met: Some(false),
                conclusion: con.into(),
                status: Status::HypothesisNotMet,
                detail: format!("{cell} has infinite degree"),
                exhibit: None,
            })
        }
        Err(e) => return budget_row("cheeger-bounds", hyp, con, e),
    };
    let ball: Vec<usize> = FaceMetric::new(x)
        .trusted_ball(o, radius)?
        .within(radius as u32)
        .collect();
    let region = nearest_region(x, &ball, o, size);
    let witness = match cheeger_bruteforce::<Rational>(x, &region, region.len()) {
        Ok(w) => w,
        Err(e) => return budget_row("cheeger-bounds", hyp, con, e),
    };
    let best = bounds.best();
    let failures = if witness.ratio < best {
        faces(witness.faces.iter().copied())
    } else {
        vec![]
    };
    Ok(Row {
        property: "cheeger-bounds",
        hypothesis: hyp.into(),
        hypothesis_met: Some(true),
        conclusion: con.into(),
        detail: format!(
            "bound1 {}, bound2 {}, certificate {}; minimal ratio {} over {} faces near the center",
            bounds.bound1,
            bounds.bound2,
            bounds.certificate,
            witness.ratio,
            region.len()
        ),
        status: judge(true, failures),
        exhibit: None,
    })
}

fn size_dichotomy(x: &PolygonalComplex, c: &CurvatureReport<Rational>) -> Result<Row> {
    let ev = match myers_evidence(x, c) {
        Ok(ev) => ev,
        Err(e) => {
            return budget_row(
                "size-dichotomy",
                "face curvature has one sign",
                "positive: finite; nonpositive: unbounded",
                e,
            )
        }
    };
    let (hyp, con, met) = match ev.verdict {
        Dichotomy::PositiveFinite => ("every face curvature > 0", "the complex is finite", true),
        Dichotomy::NonpositiveUnbounded => (
            "every face curvature <= 0",
            "spheres stay nonempty (infinite complex)",
            true,
        ),
        Dichotomy::NoClaim => (
            "face curvature has one sign",
            "positive: finite; nonpositive: unbounded",
            false,
        ),
    };
    Ok(Row {
        property: "size-dichotomy",
        hypothesis: hyp.into(),
        hypothesis_met: Some(met),
        conclusion: con.into(),
        status: judge(met, vec![]),
        detail: format!("{}; sphere sizes {:?}", ev.note, ev.sphere_sizes),
        exhibit: None,
    })
}

fn unique_continuation(
    x: &PolygonalComplex,
    c: &CurvatureReport<Rational>,
    o: usize,
    radius: usize,
) -> Result<Row> {
    let (hyp, con) = (
        "every corner curvature <= 0",
        "no eigenfunction of the Laplacian has finite support in the ball",
    );
    let found = match finite_support_eigenfunctions(x, o, radius) {
        Ok(f) => f,
        Err(e) => return budget_row("unique-continuation", hyp, con, e),
    };
    let met = c.all_nonpositive && !c.corners.is_empty();
    let exhibit = found.first().map(|cert| {
        let lambda = cert
            .lambda_exact
            .map(|l| l.to_string())
            .unwrap_or_else(|| format!("{:.9}", cert.lambda));
        let values = match &cert.exact_values {
            Some(v) => v
                .iter()
                .map(|(f, q)| format!("{f}:{q}"))
                .collect::<Vec<_>>()
                .join(" "),
            None => cert
                .values
                .iter()
                .map(|(f, q)| format!("{f}:{q:.9}"))
                .collect::<Vec<_>>()
                .join(" "),
        };
        let verified = match cert.verified_exact {
            Some(true) => "verified exactly",
            Some(false) => "exact check failed",
            None => "floating point only",
        };
        format!(
            "lambda = {lambda} on {} faces ({verified}): {values}",
            cert.support.len()
        )
    });
    let failures = found
        .iter()
        .flat_map(|cert| cert.support.iter().copied())
        .collect::<std::collections::BTreeSet<_>>();
    Ok(Row {
        property: "unique-continuation",
        hypothesis: hyp.into(),
        hypothesis_met: Some(met),
        conclusion: con.into(),
        detail: format!(
            "{} finitely supported eigenfunctions in B_{radius}; {}",
            found.len(),
            corner_range(c)
        ),
        status: judge(met, faces(failures)),
        exhibit,
    })
}

fn dirichlet(
    x: &PolygonalComplex,
    c: &CurvatureReport<Rational>,
    o: usize,
    radius: usize,
) -> Result<Row> {
    let (hyp, con) = (
        "every corner curvature < 0",
        "two boundary data give independent nonconstant harmonic functions",
    );
    let solve = |shift: usize| -> Result<_> {
        let data: std::collections::BTreeMap<usize, f64> =
            half_sphere_indicator(x, o, radius, shift)?;
        solve_dirichlet(x, o, radius, &data, 1e-10)
    };
    let k = FaceMetric::new(x).neighbors(o).len().max(1);
    let (a, b) = match (solve(0), solve(k / 4 + 1)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return budget_row("dirichlet", hyp, con, e),
    };
    let interior = |s: &crate::spectral::DirichletSolution<f64>| -> Vec<f64> {
        (0..s.faces.len())
            .filter(|&i| s.interior[i])
            .map(|i| s.values[i])
            .collect()
    };
    let (ua, ub) = (interior(&a), interior(&b));
    let spread = |u: &[f64]| {
        u.iter().cloned().fold(f64::MIN, f64::max) - u.iter().cloned().fold(f64::MAX, f64::min)
    };
    // rank of {1, u_a, u_b} restricted to the interior, via Gram determinant
    let ones = vec![1.0; ua.len()];
    let vecs = [&ones[..], &ua[..], &ub[..]];
    let gram = nalgebra::Matrix3::from_fn(|i, j| {
        vecs[i].iter().zip(vecs[j]).map(|(p, q)| p * q).sum::<f64>()
    });
    let independent = gram.determinant() > 1e-9 * gram.trace().powi(3);
    let principle = a.maximum_principle(1e-12) && b.maximum_principle(1e-12);
    let ok = independent && principle && spread(&ua) > 1e-9 && spread(&ub) > 1e-9;
    let met = c.all_negative && !c.corners.is_empty();
    let failures = if ok { vec![] } else { faces([o]) };
    Ok(Row {
        property: "dirichlet",
        hypothesis: hyp.into(),
        hypothesis_met: Some(met),
        conclusion: con.into(),
        detail: format!(
            "residuals {:.1e} and {:.1e}; maximum principle {}; independent {}",
            a.residual,
            b.residual,
            if principle { "holds" } else { "fails" },
            independent
        ),
        status: judge(met, failures),
        exhibit: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_regular_tessellation, gen_sigma_n, gen_spherical, SphericalKind};

    #[test]
    fn heptagonal_rows_verified() {
        let x = gen_regular_tessellation(7, 3, 4).unwrap();
        let cfg = DashboardConfig {
            radius: 3,
            dirichlet: true,
            ..Default::default()
        };
        let d = report(&x, &Apartment::declared_or_whole(&x), &cfg).unwrap();
        for row in &d.rows {
            assert_eq!(row.status, Status::VerifiedAtScale, "{row:?}");
        }
    }

    #[test]
    fn sigma_four_exhibits_eigenfunction() {
        let l = gen_sigma_n(4, 4).unwrap();
        let cfg = DashboardConfig {
            radius: 4,
            ..Default::default()
        };
        let d = report(&l.complex, &Apartment::declared_or_whole(&l.complex), &cfg).unwrap();
        let row = d.row("unique-continuation").unwrap();
        assert_eq!(row.status, Status::HypothesisNotMet);
        let exhibit = row.exhibit.as_ref().unwrap();
        assert!(
            exhibit.contains("lambda = 6") && exhibit.contains("verified exactly"),
            "{exhibit}"
        );
    }

    #[test]
    fn cube_size_row_verified() {
        let x = gen_spherical(SphericalKind::Cube).unwrap();
        let d = report(
            &x,
            &[Apartment::whole(&x)],
            &DashboardConfig {
                radius: 2,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(
            d.row("size-dichotomy").unwrap().status,
            Status::VerifiedAtScale
        );
        assert_eq!(
            d.row("geodesic-extension").unwrap().status,
            Status::HypothesisNotMet
        );
        assert!(d
            .rows
            .iter()
            .all(|r| !matches!(r.status, Status::Violated { .. })));
    }

    #[test]
    fn untrusted_radius_is_skipped() {
        let x = gen_regular_tessellation(4, 4, 2).unwrap();
        let m = FaceMetric::new(&x);
        let row = backward_degree(
            &m,
            &curvature_report(&x, &[Apartment::whole(&x)], 0, 1).unwrap(),
            0,
            9,
        )
        .unwrap();
        assert_eq!(row.status, Status::SkippedBudget);
    }

    #[test]
    fn violated_always_carries_cells() {
        assert_eq!(judge(true, vec![]), Status::VerifiedAtScale);
        assert_eq!(judge(false, faces([3])), Status::HypothesisNotMet);
        assert_eq!(
            judge(true, faces([3])),
            Status::Violated {
                cells: vec![Cell::Face(3)]
            }
        );
        assert_eq!(
            Status::Violated {
                cells: vec![Cell::Face(3)]
            }
            .to_string(),
            "violated at face 3"
        );
    }
}
