//! Acceptance suite: one PASS/FAIL line per criterion, with runtimes
//! checked against each criterion's budget. Runs without the libtest
//! harness so the lines are always printed.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use curvcx::apartment::Apartment;
use curvcx::curvature::{
    coxeter_classify, curvature_report, gauss_bonnet_sum, CoxeterClass, CurvatureReport,
};
use curvcx::generators::{
    gen_book, gen_mixed_core, gen_product_trees, gen_regular_tessellation, gen_sigma_n,
    gen_spherical, SphericalKind,
};
use curvcx::isoperimetry::{
    cheeger_at_infinity, cheeger_bruteforce, cheeger_lower_bounds, nearest_region,
};
use curvcx::spectral::{
    finite_support_eigenfunctions, half_sphere_indicator, solve_dirichlet, spectrum,
    verify_eigenfunction, Operator,
};
use curvcx::{FaceMetric, PolygonalComplex, Rational};

type Outcome = Result<String, String>;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn report(
    x: &PolygonalComplex,
    aps: &[Apartment],
    o: usize,
    radius: usize,
) -> Result<CurvatureReport<Rational>, String> {
    curvature_report(x, aps, o, radius).map_err(err)
}

fn exact_curvature() -> Outcome {
    let flat = gen_regular_tessellation(4, 4, 3).map_err(err)?;
    let rep = report(&flat, &Apartment::declared_or_whole(&flat), 0, 3)?;
    ensure!(
        rep.corners.values().all(|k| *k == r(0, 1)),
        "{{4,4}} has a nonzero corner"
    );
    for (a, b) in [(2, 3), (3, 3), (3, 4), (4, 4)] {
        let x = gen_product_trees(a, b, 2, 0, None).map_err(err)?;
        let rep = report(&x, &Apartment::declared(&x), x.center().unwrap(), 2)?;
        ensure!(
            !rep.corners.is_empty() && rep.corners.values().all(|k| *k == r(0, 1)),
            "T_{a}xT_{b} has a nonzero corner"
        );
    }
    for p in 5..=9 {
        let c: CoxeterClass<Rational> = coxeter_classify(&vec![2; p]).map_err(err)?;
        let want = r(1, p as i64) - r(1, 4);
        ensure!(
            c.corner_values.iter().all(|k| *k == want),
            "right-angled {p}-gon corner {:?}",
            c.corner_values
        );
        // the generated {p,4} tessellation realizes the same corners
        let x = gen_regular_tessellation(p, 4, 1).map_err(err)?;
        let rep = report(&x, &[Apartment::whole(&x)], 0, 1)?;
        ensure!(
            rep.corners.values().all(|k| *k == want),
            "generated {{{p},4}} corner differs"
        );
    }
    for n in 3..=6i64 {
        let l = gen_sigma_n(n as usize, 1).map_err(err)?;
        let rep = report(&l.complex, &[Apartment::whole(&l.complex)], 0, 1)?;
        ensure!(
            rep.faces.values().all(|k| *k == r(-(n - 3), 3 * n)),
            "Σ_{n} face curvature"
        );
        for (&(_, v, _), k) in &rep.corners {
            let want = if l.vertex_color[v] == 0 {
                r(-(n - 2), 4 * n)
            } else {
                r(1, 12)
            };
            ensure!(*k == want, "Σ_{n} corner at vertex {v} is {k}, want {want}");
        }
    }
    let mut checked = 0;
    for m in 2..=6i64 {
        for p in 3..=9i64 {
            let c: CoxeterClass<Rational> =
                coxeter_classify(&vec![m as usize; p as usize]).map_err(err)?;
            let want = r(2 * m + p - m * p, 2 * m * p);
            ensure!(
                c.regular_constant == Some(want),
                "regular ({m},{p}) constant"
            );
            ensure!(
                c.corner_values.iter().all(|k| *k == want),
                "regular ({m},{p}) corners"
            );
            checked += 1;
        }
    }
    Ok(format!("closed forms hold; {checked} regular (m,p) pairs"))
}

fn gauss_bonnet() -> Outcome {
    let mut kinds = vec![
        SphericalKind::Tetrahedron,
        SphericalKind::Cube,
        SphericalKind::Octahedron,
        SphericalKind::Dodecahedron,
        SphericalKind::Icosahedron,
    ];
    for n in 3..=8 {
        kinds.push(SphericalKind::Prism(n));
        kinds.push(SphericalKind::Antiprism(n));
    }
    for &kind in &kinds {
        let x = gen_spherical(kind).map_err(err)?;
        let sum: Rational = gauss_bonnet_sum(&x).map_err(err)?;
        ensure!(sum == r(2, 1), "{kind:?}: sum {sum}");
    }
    Ok(format!("sum = 2 on {} solids", kinds.len()))
}

fn cut_locus_case(name: &str, x: &PolygonalComplex, o: usize) -> Result<usize, String> {
    let m = FaceMetric::new(x);
    let cut = m.cut_locus(o, 4).map_err(|e| format!("{name}: {e}"))?;
    ensure!(cut.is_empty(), "{name}: cut locus {cut:?}");
    let s = m.spheres(o, 4).map_err(err)?;
    let worst = s.degrees.values().map(|d| d.1).max().unwrap_or(0);
    ensure!(worst <= 2, "{name}: backward degree {worst}");
    Ok(worst)
}

fn hadamard_cartan() -> Outcome {
    let mut cases = 0;
    for (p, q) in [(4, 4), (3, 6), (6, 3), (7, 3), (4, 5), (5, 4)] {
        let x = gen_regular_tessellation(p, q, 4).map_err(err)?;
        cut_locus_case(&format!("{{{p},{q}}}"), &x, 0)?;
        cases += 1;
    }
    for a in [3, 4] {
        let x = gen_product_trees(a, a, 4, 0, None).map_err(err)?;
        cut_locus_case(&format!("T_{a}xT_{a}"), &x, x.center().unwrap())?;
        cases += 1;
    }
    for k in [2, 3] {
        let x = gen_book(k, 4).map_err(err)?;
        cut_locus_case(&format!("book k={k}"), &x, x.center().unwrap())?;
        cases += 1;
    }
    Ok(format!(
        "{cases} complexes: empty cut locus, backward degree <= 2"
    ))
}

/// Pairs with d ≤ 4 inside B_6: count, worst certificate, worst spread,
/// and the first pair breaking either bound.
/// (pairs, worst certificate, worst spread, first offending pair)
type BigonScan = (usize, usize, u32, Option<(usize, usize)>);

fn bigon_scan(x: &PolygonalComplex) -> Result<BigonScan, String> {
    let pairs = FaceMetric::new(x).local_bigons(0, 6, 4).map_err(err)?;
    let cert = pairs.iter().map(|b| b.certificate).max().unwrap_or(0);
    let spread = pairs.iter().map(|b| b.spread_upper).max().unwrap_or(0);
    let witness = pairs
        .iter()
        .find(|b| b.certificate > 2 || b.spread_upper > 1)
        .map(|b| (b.from, b.to));
    Ok((pairs.len(), cert, spread, witness))
}

fn thin_bigons() -> Outcome {
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    for (p, q) in [(7, 3), (4, 5)] {
        let x = gen_regular_tessellation(p, q, 7).map_err(err)?;
        let (pairs, cert, spread, witness) = bigon_scan(&x)?;
        let line = format!("{{{p},{q}}} {pairs} pairs: certificate {cert}, spread {spread}");
        match witness {
            None => notes.push(line),
            Some((f, g)) => {
                // the spread is an upper bound; confirm it with the exact enumeration
                let exact = FaceMetric::new(&x)
                    .enumerate_bigons(f, g, 100_000)
                    .map_err(err)?;
                let layers: Vec<String> = exact
                    .interval
                    .layers
                    .iter()
                    .map(|l| format!("{l:?}"))
                    .collect();
                failures.push(format!(
                    "{line}; faces ({f}, {g}) have exact spread {} (layers {})",
                    exact.delta,
                    layers.join(" ")
                ));
            }
        }
    }
    let flat = gen_regular_tessellation(4, 4, 6).map_err(err)?;
    let control = FaceMetric::new(&flat).local_bigons(0, 2, 4).map_err(err)?;
    match control.iter().find(|b| b.certificate == 3) {
        Some(b) => notes.push(format!(
            "{{4,4}} control pair ({}, {}) has certificate 3",
            b.from, b.to
        )),
        None => failures.push("{4,4} control has no pair with certificate 3".into()),
    }
    if failures.is_empty() {
        Ok(notes.join("; "))
    } else {
        Err(failures
            .into_iter()
            .chain(notes)
            .collect::<Vec<_>>()
            .join("; "))
    }
}

fn cheeger_sandwich() -> Outcome {
    let h = gen_regular_tessellation(7, 3, 4).map_err(err)?;
    let b = cheeger_lower_bounds::<Rational>(&h, 0, 4).map_err(err)?;
    ensure!(b.bound1 == r(1, 7), "{{7,3}} bound1 {}", b.bound1);
    let min_h = brute_force_min(&h, 0, 4)?;
    ensure!(min_h >= r(1, 7), "{{7,3}} brute force {min_h} < 1/7");

    let t = gen_product_trees(4, 4, 4, 0, None).map_err(err)?;
    let o = t.center().unwrap();
    let b = cheeger_lower_bounds::<Rational>(&t, o, 4).map_err(err)?;
    ensure!(b.bound2 == r(1, 12), "T_4xT_4 bound2 {}", b.bound2);
    let min_t = brute_force_min(&t, o, 4)?;
    ensure!(min_t >= r(1, 12), "T_4xT_4 brute force {min_t} < 1/12");
    Ok(format!(
        "{{7,3}} min ratio {min_h} >= 1/7; T_4xT_4 min ratio {min_t} >= 1/12"
    ))
}

/// Minimum Cheeger ratio over connected regions of ≤ 14 faces, scanning
/// the 14 faces nearest each face of B_R(o).
fn brute_force_min(x: &PolygonalComplex, o: usize, radius: usize) -> Result<Rational, String> {
    let ball: Vec<usize> = FaceMetric::new(x)
        .trusted_ball(o, radius)
        .map_err(err)?
        .within(radius as u32)
        .collect();
    let mut best: Option<Rational> = None;
    for &f in &ball {
        let region = nearest_region(x, &ball, f, 14);
        let w = cheeger_bruteforce::<Rational>(x, &region, 14).map_err(err)?;
        if best.is_none_or(|b| w.ratio < b) {
            best = Some(w.ratio);
        }
    }
    best.ok_or_else(|| "empty ball".into())
}

fn spectral_bound() -> Outcome {
    let cube = gen_spherical(SphericalKind::Cube).map_err(err)?;
    let rep = spectrum::<f64>(&cube, 0, 2, &Operator::Laplacian).map_err(err)?;
    let want = [0.0, 4.0, 4.0, 4.0, 6.0, 6.0];
    ensure!(
        rep.eigenvalues.len() == 6,
        "cube has {} eigenvalues",
        rep.eigenvalues.len()
    );
    for (got, w) in rep.eigenvalues.iter().zip(want) {
        ensure!((got - w).abs() <= 1e-10, "cube eigenvalue {got} vs {w}");
    }
    let bound = 7.0 - 4.0 * 3f64.sqrt();
    let h = gen_regular_tessellation(7, 3, 4).map_err(err)?;
    let mut lambdas = Vec::new();
    for radius in 2..=4 {
        let rep = spectrum::<f64>(&h, 0, radius, &Operator::Laplacian).map_err(err)?;
        ensure!(
            (rep.lambda0_bound - bound).abs() <= 1e-9,
            "λ₀ estimate {}",
            rep.lambda0_bound
        );
        lambdas.push(rep.laplacian[0]);
    }
    ensure!(
        lambdas.iter().all(|&l| l >= bound - 1e-9),
        "λ₀ below {bound}: {lambdas:?}"
    );
    ensure!(
        lambdas.windows(2).all(|w| w[1] <= w[0] + 1e-9),
        "λ₀ increases: {lambdas:?}"
    );
    Ok(format!(
        "cube spectrum ok; λ₀(Δ_R) for R=2,3,4: {lambdas:.6?} >= {bound:.6}"
    ))
}

fn unique_continuation() -> Outcome {
    let mut cases: Vec<(String, PolygonalComplex, usize)> = Vec::new();
    for (p, q) in [(4, 4), (7, 3), (3, 6)] {
        cases.push((
            format!("{{{p},{q}}}"),
            gen_regular_tessellation(p, q, 4).map_err(err)?,
            0,
        ));
    }
    let t = gen_product_trees(3, 3, 4, 0, None).map_err(err)?;
    let o = t.center().unwrap();
    cases.push(("T_3xT_3".into(), t, o));
    let book = gen_book(3, 4).map_err(err)?;
    let o = book.center().unwrap();
    cases.push(("book k=3".into(), book, o));
    for (name, x, o) in &cases {
        let found = finite_support_eigenfunctions(x, *o, 4).map_err(err)?;
        ensure!(
            found.is_empty(),
            "{name}: {} finitely supported eigenfunctions",
            found.len()
        );
    }
    let l = gen_sigma_n(4, 4).map_err(err)?;
    let found = finite_support_eigenfunctions(&l.complex, 0, 4).map_err(err)?;
    let cert = found
        .iter()
        .find(|c| c.lambda_exact == Some(r(6, 1)))
        .ok_or_else(|| format!("Σ_4: no λ = 6 certificate among {} found", found.len()))?;
    let values = cert
        .exact_values
        .as_ref()
        .ok_or("Σ_4 certificate is not rational")?;
    let check = verify_eigenfunction(&l.complex, values, r(6, 1)).map_err(err)?;
    ensure!(check.pass, "Σ_4 certificate fails exact verification");
    Ok(format!(
        "none on {} complexes; Σ_4: λ = 6 on {} faces, exact",
        cases.len(),
        cert.support.len()
    ))
}

fn dirichlet() -> Outcome {
    let h = gen_regular_tessellation(7, 3, 5).map_err(err)?;
    let mut interiors = Vec::new();
    for shift in [0, 2] {
        let data: BTreeMap<usize, f64> = half_sphere_indicator(&h, 0, 5, shift).map_err(err)?;
        let sol = solve_dirichlet(&h, 0, 5, &data, 1e-10).map_err(err)?;
        ensure!(sol.residual <= 1e-10, "residual {:e}", sol.residual);
        ensure!(
            sol.maximum_principle(1e-12),
            "maximum principle fails for shift {shift}"
        );
        interiors.push(
            (0..sol.faces.len())
                .filter(|&i| sol.interior[i])
                .map(|i| sol.values[i])
                .collect::<Vec<f64>>(),
        );
    }
    // {1, u_a, u_b} has rank 3 on the interior: both nonconstant, independent modulo constants
    let n = interiors[0].len();
    let m = nalgebra::DMatrix::from_fn(n, 3, |i, j| if j == 0 { 1.0 } else { interiors[j - 1][i] });
    let sv = m.svd(false, false).singular_values;
    let smallest = sv.min();
    ensure!(
        smallest > 1e-6,
        "rank-deficient boundary responses (σ_min = {smallest:e})"
    );
    Ok(format!(
        "{n} interior faces; σ_min of [1, u_a, u_b] = {smallest:.3e}"
    ))
}

fn substituted_checks() -> Outcome {
    let h = gen_regular_tessellation(7, 3, 8).map_err(err)?;
    let rep = spectrum::<f64>(&h, 0, 4, &Operator::Laplacian).map_err(err)?;
    let window = match (rep.window, rep.window_fraction) {
        (Some((lo, hi)), Some(frac)) => format!(
            "ratio window [{lo:.4}, {hi:.4}] holds {:.1}% of indices (reported)",
            100.0 * frac
        ),
        _ => "no ratio window".into(),
    };
    let m = FaceMetric::new(&h);
    let mut deltas = Vec::new();
    for radius in [3u32, 4] {
        let sample: Vec<usize> = m.ball(0, radius).within(radius).collect();
        deltas.push(m.four_point_delta(&sample, Some(0), 1 << 34).map_err(err)?);
    }
    ensure!(
        deltas[0] == deltas[1],
        "four-point δ moves from {} to {}",
        deltas[0],
        deltas[1]
    );

    let mixed = gen_mixed_core(8, 3, 4).map_err(err)?;
    let curv = report(&mixed, &[Apartment::whole(&mixed)], 0, 4)?;
    let kappa: Vec<Rational> = curv
        .kappa_infinity_proxy
        .iter()
        .flatten()
        .copied()
        .collect();
    ensure!(
        kappa.windows(2).all(|w| w[1] <= w[0]),
        "κ_∞ proxy not monotone: {kappa:?}"
    );
    let alpha = cheeger_at_infinity::<Rational>(&mixed, 0, 4).map_err(err)?;
    ensure!(
        alpha.windows(2).all(|w| w[0] <= w[1]),
        "α_∞ proxy not monotone: {alpha:?}"
    );
    let fmt = |v: &[Rational]| {
        v.iter()
            .map(|q| q.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    Ok(format!(
        "{window}; δ(B_3) = δ(B_4) = {}; κ_∞ proxy [{}]; α_∞ proxy [{}]",
        deltas[0],
        fmt(&kappa),
        fmt(&alpha)
    ))
}

fn main() {
    type Criterion = (&'static str, Duration, fn() -> Outcome);
    let criteria: Vec<Criterion> = vec![
        ("1 exact curvature", Duration::from_secs(1), exact_curvature),
        ("2 Gauss-Bonnet", Duration::from_secs(1), gauss_bonnet),
        (
            "3 empty cut locus and backward degree",
            Duration::from_secs(10),
            hadamard_cartan,
        ),
        ("4 thin bigons", Duration::from_secs(30), thin_bigons),
        (
            "5 Cheeger bounds",
            Duration::from_secs(120),
            cheeger_sandwich,
        ),
        ("6 spectral bound", Duration::from_secs(60), spectral_bound),
        (
            "7 finitely supported eigenfunctions",
            Duration::from_secs(120),
            unique_continuation,
        ),
        ("8 Dirichlet problem", Duration::from_secs(30), dirichlet),
        (
            "9 substituted checks",
            Duration::from_secs(120),
            substituted_checks,
        ),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over the {budget:?} budget")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {name}: {} ({:.2}s) {detail}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
