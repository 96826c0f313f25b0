//! `curvcx`: generate, validate and analyze polygonal complexes.
//!
//! Exit codes: 0 success, 1 validation or analysis failure, 2 usage error
//! (bad flags or an unreadable/malformed input file).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use curvcx::apartment::Apartment;
use curvcx::curvature::{curvature_report, myers_evidence};
use curvcx::dashboard::{report, DashboardConfig};
use curvcx::format::{read_file, write_file};
use curvcx::generators::{generate, Family, GeneratorSpec, SphericalKind, DEFAULT_FACE_CAP};
use curvcx::isoperimetry::{cheeger_bruteforce, cheeger_lower_bounds, MAX_BRUTEFORCE_REGION};
use curvcx::spectral::{
    finite_support_eigenfunctions, half_sphere_indicator, solve_dirichlet, spectrum,
    verify_eigenfunction, Operator,
};
use curvcx::validate::{validate_pcps, validate_tessellation};
use curvcx::{Error, FaceMetric, PolygonalComplex, Rational};

#[derive(Parser)]
#[command(
    name = "curvcx",
    version,
    about = "Curvature, geometry and spectra of polygonal complexes"
)]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a trusted ball of an example family and write it as a complex file.
    Generate(GenerateArgs),
    /// Check the tessellation and apartment-system axioms.
    Validate(BallArgs),
    /// Corner and face curvature tables.
    Curvature(CurvatureArgs),
    /// Distance, geodesic interval and bigons between two faces.
    Geodesics(GeodesicsArgs),
    /// Four-point δ of the balls B_1..B_R.
    Hyperbolicity(HyperbolicityArgs),
    /// Cheeger lower bounds and brute-force minimal ratios.
    Cheeger(CheegerArgs),
    /// Dirichlet spectrum of the Laplacian or degree operator on a ball.
    Spectrum(SpectrumArgs),
    /// Search for finitely supported eigenfunctions.
    Eigenfunctions(EigenArgs),
    /// Harmonic extension of boundary data on the sphere S_R.
    Dirichlet(DirichletArgs),
    /// Property dashboard for a complex.
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    #[value(name = "regular_pq", alias = "regular-pq")]
    RegularPq,
    #[value(name = "coxeter_triangle", alias = "coxeter-triangle")]
    CoxeterTriangle,
    #[value(name = "product_trees", alias = "product-trees")]
    ProductTrees,
    Book,
    #[value(name = "sigma_n", alias = "sigma-n")]
    SigmaN,
    Spherical,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    family: FamilyName,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    /// Pages of a book.
    #[arg(long)]
    k: Option<usize>,
    /// Half-degree of the high-degree vertices of Σ_n.
    #[arg(long)]
    n: Option<usize>,
    /// Solid for the spherical family, e.g. cube or prism(5).
    #[arg(long)]
    kind: Option<String>,
    #[arg(long, default_value_t = 2)]
    radius: usize,
    /// Seed for apartment sampling (products of trees only).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of sampled apartments for products of trees.
    #[arg(long)]
    apartment_budget: Option<usize>,
    /// Face cap for the generator.
    #[arg(long, env = "CURVCX_BUDGET", default_value_t = DEFAULT_FACE_CAP)]
    face_cap: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BallArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Center face (default: the generator's center, else 0).
    #[arg(long)]
    center: Option<usize>,
    /// Ball radius (default: the trusted radius, else the eccentricity).
    #[arg(long)]
    radius: Option<usize>,
}

#[derive(Args)]
struct CurvatureArgs {
    #[command(flatten)]
    ball: BallArgs,
    /// Corner table (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Face table.
    #[arg(long)]
    faces_out: Option<PathBuf>,
}

#[derive(Args)]
struct GeodesicsArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    from: usize,
    #[arg(long)]
    to: usize,
    /// List every geodesic and the bigon spread.
    #[arg(long)]
    enumerate: bool,
    #[arg(long, default_value_t = 10_000)]
    cap: usize,
}

#[derive(Args)]
struct HyperbolicityArgs {
    #[command(flatten)]
    ball: BallArgs,
    /// Cap on four-point quadruples per radius.
    #[arg(long, default_value_t = 1 << 32)]
    budget: u128,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheegerArgs {
    #[command(flatten)]
    ball: BallArgs,
    /// Also run the brute force over a region.
    #[arg(long)]
    exact: bool,
    /// Region for the brute force, as ball:r around the center.
    #[arg(long, default_value = "ball:1")]
    region: String,
    #[arg(long, default_value_t = MAX_BRUTEFORCE_REGION)]
    cap: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OperatorName {
    Delta,
    Degree,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    ball: BallArgs,
    #[arg(long, value_enum, default_value = "delta")]
    operator: OperatorName,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EigenArgs {
    #[command(flatten)]
    ball: BallArgs,
    /// Search the ball for eigenfunctions supported in it.
    #[arg(long)]
    search: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DirichletArgs {
    #[command(flatten)]
    ball: BallArgs,
    /// CSV with columns face,value covering S_R.
    #[arg(long, conflicts_with = "half_sphere")]
    boundary: Option<PathBuf>,
    /// Use the half-sphere indicator, rotated by this many sectors.
    #[arg(long)]
    half_sphere: Option<usize>,
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    ball: BallArgs,
    /// Also solve two Dirichlet problems.
    #[arg(long)]
    dirichlet: bool,
    /// Emit JSON instead of a table.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// How a command failed, which fixes the exit code.
enum Failure {
    Usage(String),
    Validation(String),
    Run(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Run(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("thread pool is configured once");
    }
    let outcome = match cli.command {
        Command::Generate(a) => run_generate(a),
        Command::Validate(a) => run_validate(a),
        Command::Curvature(a) => run_curvature(a),
        Command::Geodesics(a) => run_geodesics(a),
        Command::Hyperbolicity(a) => run_hyperbolicity(a),
        Command::Cheeger(a) => run_cheeger(a),
        Command::Spectrum(a) => run_spectrum(a),
        Command::Eigenfunctions(a) => run_eigenfunctions(a),
        Command::Dirichlet(a) => run_dirichlet(a),
        Command::Report(a) => run_report(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Validation(msg)) => {
            eprintln!("validation failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn load(path: &Path) -> Result<PolygonalComplex, Failure> {
    read_file(path)
        .map_err(|e| Failure::Usage(format!("cannot read complex {}: {e}", path.display())))
}

fn check_paths(input: &Path, out: Option<&Path>) -> Outcome {
    if out.is_some_and(|o| o == input) {
        return Err(Failure::Usage("--out must differ from --in".into()));
    }
    Ok(())
}

/// Center and radius of the analysed ball.
fn resolve(x: &PolygonalComplex, ball: &BallArgs) -> Result<(usize, usize), Failure> {
    let center = ball.center.or(x.center()).unwrap_or(0);
    if center >= x.n_faces() {
        return Err(Failure::Usage(format!(
            "--center {center} is not a face (the complex has {})",
            x.n_faces()
        )));
    }
    let radius = match ball.radius.or(x.trusted_radius()) {
        Some(r) => r,
        None => {
            let m = FaceMetric::new(x);
            let b = m.ball(center, u32::MAX);
            b.order.iter().filter_map(|&f| b.get(f)).max().unwrap_or(0) as usize
        }
    };
    Ok((center, radius))
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .context("writing to stdout")?,
    }
    Ok(())
}

/// Rational as "num/den".
fn q(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn need(name: &str, v: Option<usize>) -> Result<usize, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("--{name} is required for this family")))
}

fn run_generate(a: GenerateArgs) -> Outcome {
    let family = match a.family {
        FamilyName::RegularPq => Family::RegularPq {
            p: need("p", a.p)?,
            q: need("q", a.q)?,
        },
        FamilyName::CoxeterTriangle => Family::CoxeterTriangle {
            r: need("r", a.r)?,
            s: need("s", a.s)?,
            t: need("t", a.t)?,
        },
        FamilyName::ProductTrees => Family::ProductTrees {
            r: need("r", a.r)?,
            s: need("s", a.s)?,
        },
        FamilyName::Book => Family::Book { k: need("k", a.k)? },
        FamilyName::SigmaN => Family::SigmaN { n: need("n", a.n)? },
        FamilyName::Spherical => {
            let kind = a
                .kind
                .as_deref()
                .ok_or_else(|| Failure::Usage("--kind is required for this family".into()))?;
            Family::Spherical(
                kind.parse::<SphericalKind>()
                    .map_err(|e| Failure::Usage(format!("--kind: {e}")))?,
            )
        }
    };
    if a.face_cap == 0 {
        return Err(Failure::Usage("--face-cap must be positive".into()));
    }
    let spec = GeneratorSpec {
        family,
        radius: a.radius,
        face_cap: a.face_cap,
        seed: a.seed,
        apartment_budget: a.apartment_budget,
    };
    let x = generate(&spec)?;
    write_file(&a.out, &x)?;
    println!(
        "wrote {} vertices, {} edges, {} faces, {} apartments to {}",
        x.n_vertices(),
        x.n_edges(),
        x.n_faces(),
        x.apartments().len(),
        a.out.display()
    );
    Ok(())
}

fn run_validate(a: BallArgs) -> Outcome {
    let x = load(&a.input)?;
    let (o, radius) = resolve(&x, &a)?;
    let aps = Apartment::declared_or_whole(&x);
    let mut text = String::new();
    let mut failed = Vec::new();
    for (i, ap) in aps.iter().enumerate() {
        let check = validate_tessellation(&x, ap.faces());
        writeln!(text, "apartment {i}: {:?}", check.kind).unwrap();
        for r in &check.reports {
            writeln!(
                text,
                "  {}: {} ({})",
                r.axiom,
                if r.pass { "PASS" } else { "FAIL" },
                r.scope_note
            )
            .unwrap();
            if !r.pass {
                writeln!(text, "    offending: {:?}", r.offending).unwrap();
                failed.push(format!("apartment {i} {}", r.axiom));
            }
        }
    }
    let reports = validate_pcps(&x, &aps, radius, o)?;
    writeln!(text, "apartment system on B_{radius}({o}):").unwrap();
    for r in &reports {
        writeln!(
            text,
            "  {}: {} ({})",
            r.axiom,
            if r.pass { "PASS" } else { "FAIL" },
            r.scope_note
        )
        .unwrap();
        if !r.pass {
            writeln!(text, "    offending: {:?}", r.offending).unwrap();
            failed.push(r.axiom.clone());
        }
    }
    emit(None, &text)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Validation(failed.join(", ")))
    }
}

fn run_curvature(a: CurvatureArgs) -> Outcome {
    check_paths(&a.ball.input, a.out.as_deref())?;
    check_paths(&a.ball.input, a.faces_out.as_deref())?;
    let x = load(&a.ball.input)?;
    let (o, radius) = resolve(&x, &a.ball)?;
    let rep = curvature_report::<Rational>(&x, &Apartment::declared_or_whole(&x), o, radius)?;
    let mut corners = String::from("apartment,vertex,face,kappa_c_num,kappa_c_den,kappa_c\n");
    for (&(ap, v, f), k) in &rep.corners {
        writeln!(corners, "{ap},{v},{f},{},{},{}", k.numer(), k.denom(), q(k)).unwrap();
    }
    emit(a.out.as_deref(), &corners)?;
    if let Some(path) = &a.faces_out {
        let mut faces = String::from("apartment,face,kappa_num,kappa_den,kappa\n");
        for (&(ap, f), k) in &rep.faces {
            writeln!(faces, "{ap},{f},{},{},{}", k.numer(), k.denom(), q(k)).unwrap();
        }
        emit(Some(path), &faces)?;
    }
    if a.out.is_some() {
        let ev = myers_evidence(&x, &rep)?;
        let range = |lo: Option<Rational>, hi: Option<Rational>| match (lo, hi) {
            (Some(lo), Some(hi)) => format!("[{}, {}]", q(&lo), q(&hi)),
            _ => "[]".into(),
        };
        println!(
            "{} corners, {} faces on B_{radius}({o}); corner range {}; face range {}; {}",
            rep.corners.len(),
            rep.faces.len(),
            range(rep.min_corner, rep.max_corner),
            range(rep.min_face, rep.max_face),
            ev.note
        );
    }
    Ok(())
}

fn run_geodesics(a: GeodesicsArgs) -> Outcome {
    let x = load(&a.input)?;
    for f in [a.from, a.to] {
        if f >= x.n_faces() {
            return Err(Failure::Usage(format!(
                "face {f} does not exist (the complex has {})",
                x.n_faces()
            )));
        }
    }
    let m = FaceMetric::new(&x);
    let iv = m.interval(a.from, a.to)?;
    let mut text = String::new();
    writeln!(text, "distance,{}", iv.distance()).unwrap();
    writeln!(text, "certificate,{}", iv.width()).unwrap();
    writeln!(text, "geodesics,{}", m.count_geodesics(&iv)).unwrap();
    for (k, layer) in iv.layers.iter().enumerate() {
        writeln!(text, "layer {k},{}", join(layer)).unwrap();
    }
    if a.enumerate {
        let b = m.enumerate_bigons(a.from, a.to, a.cap)?;
        writeln!(text, "delta_bigon,{}", b.delta).unwrap();
        for (i, g) in b.geodesics.iter().enumerate() {
            writeln!(text, "geodesic {i},{}", join(g)).unwrap();
        }
    }
    emit(None, &text)
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(|f| f.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn run_hyperbolicity(a: HyperbolicityArgs) -> Outcome {
    check_paths(&a.ball.input, a.out.as_deref())?;
    let x = load(&a.ball.input)?;
    let (o, radius) = resolve(&x, &a.ball)?;
    let m = FaceMetric::new(&x);
    let mut text = String::from("radius,sample,delta\n");
    for r in 1..=radius as u32 {
        let sample: Vec<usize> = m.ball(o, r).within(r).collect();
        match m.four_point_delta(&sample, Some(o), a.budget) {
            Ok(d) => writeln!(text, "{r},{},{}", sample.len(), q(&d)).unwrap(),
            Err(e @ (Error::CapExceeded { .. } | Error::Untrusted { .. })) => {
                eprintln!("stopping at radius {r}: {e}");
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    emit(a.out.as_deref(), &text)
}

fn run_cheeger(a: CheegerArgs) -> Outcome {
    check_paths(&a.ball.input, a.out.as_deref())?;
    let x = load(&a.ball.input)?;
    let (o, radius) = resolve(&x, &a.ball)?;
    let b = cheeger_lower_bounds::<Rational>(&x, o, radius)?;
    let mut text = String::from("quantity,value\n");
    writeln!(text, "center,{o}\nradius,{radius}").unwrap();
    writeln!(
        text,
        "bound1,{}\nbound2,{}\ncertificate,{}",
        q(&b.bound1),
        q(&b.bound2),
        q(&b.certificate)
    )
    .unwrap();
    writeln!(
        text,
        "certificate_valid,{}\nbest_bound,{}",
        b.certificate_valid,
        q(&b.best())
    )
    .unwrap();
    if a.exact {
        let r: u32 = a
            .region
            .strip_prefix("ball:")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| {
                Failure::Usage(format!("--region {:?}: expected ball:<radius>", a.region))
            })?;
        let region: Vec<usize> = FaceMetric::new(&x)
            .trusted_ball(o, r as usize)?
            .within(r)
            .collect();
        let w = cheeger_bruteforce::<Rational>(&x, &region, a.cap)?;
        writeln!(
            text,
            "region_size,{}\nmin_ratio,{}",
            region.len(),
            q(&w.ratio)
        )
        .unwrap();
        writeln!(
            text,
            "witness_boundary,{}\nwitness_volume,{}",
            w.boundary, w.volume
        )
        .unwrap();
        writeln!(text, "witness_faces,{}", join(&w.faces)).unwrap();
    }
    emit(a.out.as_deref(), &text)
}

fn run_spectrum(a: SpectrumArgs) -> Outcome {
    check_paths(&a.ball.input, a.out.as_deref())?;
    let x = load(&a.ball.input)?;
    let (o, radius) = resolve(&x, &a.ball)?;
    let op = match a.operator {
        OperatorName::Delta => Operator::Laplacian,
        OperatorName::Degree => Operator::Degree,
    };
    let rep = spectrum::<f64>(&x, o, radius, &op)?;
    let mut text = String::from("index,eigenvalue,residual,laplacian,degree,ratio\n");
    for i in 0..rep.eigenvalues.len() {
        writeln!(
            text,
            "{i},{:.12},{:.3e},{:.12},{:.12},{:.12}",
            rep.eigenvalues[i], rep.residuals[i], rep.laplacian[i], rep.degree[i], rep.ratios[i]
        )
        .unwrap();
    }
    emit(a.out.as_deref(), &text)?;
    if a.out.is_some() {
        let window = match (rep.window, rep.window_fraction) {
            (Some((lo, hi)), Some(fr)) => {
                format!("ratio window [{lo:.6}, {hi:.6}] holds {:.1}%", 100.0 * fr)
            }
            _ => "no ratio window".into(),
        };
        let c = rep
            .balance
            .constant
            .map(|c| q(&c))
            .unwrap_or_else(|| "none".into());
        println!(
            "{} faces on B_{radius}({o}); lambda0 {:.12}; estimate {:.12} (alpha {}, m_F {}); {window}; balance constant {c}, strongly balanced {}",
            rep.faces.len(),
            rep.laplacian.first().copied().unwrap_or(f64::NAN),
            rep.lambda0_bound,
            q(&rep.cheeger_lower),
            rep.m_f,
            rep.balance.strongly_balanced
        );
    }
    Ok(())
}

fn run_eigenfunctions(a: EigenArgs) -> Outcome {
    if !a.search {
        return Err(Failure::Usage("nothing to do: pass --search".into()));
    }
    check_paths(&a.ball.input, a.out.as_deref())?;
    let x = load(&a.ball.input)?;
    let (o, radius) = resolve(&x, &a.ball)?;
    let found = finite_support_eigenfunctions(&x, o, radius)?;
    let mut text =
        String::from("certificate,lambda,lambda_exact,verified_exact,face,value,value_exact\n");
    for (i, c) in found.iter().enumerate() {
        let lam = c.lambda_exact.map(|l| q(&l)).unwrap_or_default();
        let verified = match c.verified_exact {
            Some(v) => v.to_string(),
            None => "unknown".into(),
        };
        let exact: BTreeMap<usize, Rational> = c.exact_values.iter().flatten().copied().collect();
        for &(f, v) in &c.values {
            let ev = exact.get(&f).map(q).unwrap_or_default();
            writeln!(
                text,
                "{i},{:.12},{lam},{verified},{f},{v:.12},{ev}",
                c.lambda
            )
            .unwrap();
        }
        // re-check in exact arithmetic before reporting success
        if let (Some(vals), Some(l)) = (&c.exact_values, c.lambda_exact) {
            if !verify_eigenfunction(&x, vals, l)?.pass {
                return Err(Failure::Run(anyhow!(
                    "certificate {i} fails exact verification"
                )));
            }
        }
    }
    emit(a.out.as_deref(), &text)?;
    if a.out.is_some() {
        println!(
            "{} finitely supported eigenfunctions in B_{radius}({o})",
            found.len()
        );
    }
    Ok(())
}

fn read_boundary(path: &Path) -> Result<BTreeMap<usize, f64>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut data = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (n == 0 && line.starts_with("face")) {
            continue;
        }
        let parsed = line.split_once(',').and_then(|(f, v)| {
            Some((
                f.trim().parse::<usize>().ok()?,
                v.trim().parse::<f64>().ok()?,
            ))
        });
        let (f, v) = parsed.ok_or_else(|| {
            Failure::Usage(format!("{}:{}: expected face,value", path.display(), n + 1))
        })?;
        data.insert(f, v);
    }
    Ok(data)
}

fn run_dirichlet(a: DirichletArgs) -> Outcome {
    check_paths(&a.ball.input, a.out.as_deref())?;
    let x = load(&a.ball.input)?;
    let (o, radius) = resolve(&x, &a.ball)?;
    let data = match (&a.boundary, a.half_sphere) {
        (Some(path), _) => read_boundary(path)?,
        (None, Some(shift)) => half_sphere_indicator(&x, o, radius, shift)?,
        (None, None) => {
            return Err(Failure::Usage(
                "pass --boundary <file> or --half-sphere <shift>".into(),
            ))
        }
    };
    let sol = solve_dirichlet(&x, o, radius, &data, a.tolerance)?;
    let mut text = String::from("face,value,interior\n");
    for i in 0..sol.faces.len() {
        writeln!(
            text,
            "{},{:.15},{}",
            sol.faces[i], sol.values[i], sol.interior[i]
        )
        .unwrap();
    }
    emit(a.out.as_deref(), &text)?;
    if a.out.is_some() {
        println!(
            "{} faces; residual {:.3e} after {} iterations; maximum principle {}",
            sol.faces.len(),
            sol.residual,
            sol.iterations,
            if sol.maximum_principle(1e-12) {
                "holds"
            } else {
                "fails"
            }
        );
    }
    Ok(())
}

fn run_report(a: ReportArgs) -> Outcome {
    check_paths(&a.ball.input, a.out.as_deref())?;
    let x = load(&a.ball.input)?;
    let (center, radius) = resolve(&x, &a.ball)?;
    let cfg = DashboardConfig {
        center,
        radius,
        dirichlet: a.dirichlet,
        ..Default::default()
    };
    let d = report(&x, &Apartment::declared_or_whole(&x), &cfg)?;
    let text = if a.json {
        let mut s = serde_json::to_string_pretty(&d).context("serialising the dashboard")?;
        s.push('\n');
        s
    } else {
        let mut s = format!("dashboard for B_{radius}({center})\n");
        for row in &d.rows {
            writeln!(s, "{:<20} {}", row.property, row.status).unwrap();
            writeln!(
                s,
                "  hypothesis: {} ({})",
                row.hypothesis,
                match row.hypothesis_met {
                    Some(true) => "met",
                    Some(false) => "not met",
                    None => "unchecked",
                }
            )
            .unwrap();
            writeln!(s, "  conclusion: {}", row.conclusion).unwrap();
            writeln!(s, "  {}", row.detail).unwrap();
            if let Some(e) = &row.exhibit {
                writeln!(s, "  exhibit: {e}").unwrap();
            }
        }
        s
    };
    emit(a.out.as_deref(), &text)
}
