//! Face Laplacian on finite balls: Dirichlet spectra, the degree operator,
//! the Cheeger λ₀ estimate, finitely supported eigenfunctions with exact
//! certificates, and the discrete Dirichlet problem.
//!
//! Δφ(f) = Σ_{g∼f}(φ(f) − φ(g)). On a ball B_R the Dirichlet convention
//! keeps the full true degree |f| on the diagonal and drops the entries of
//! neighbours outside the ball, so λ₀(Δ_R) bounds λ₀ of the infinite
//! operator from above.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, DVector, RealField, SymmetricEigen};

use crate::complex::PolygonalComplex;
use crate::error::{Error, Result};
use crate::isoperimetry::{cheeger_at_infinity, cheeger_lower_bounds};
use crate::metric::FaceMetric;
use crate::scalar::{rationalize, ExactScalar};
use crate::Rational;

/// Largest matrix the dense eigensolver accepts.
pub const DENSE_BUDGET: usize = 4000;
/// Eigenvalues closer than this (relative to 1 + |λ|) form one cluster.
const CLUSTER_TOL: f64 = 1e-6;
/// Acceptance tolerance for eigenpair and halo residuals.
const PAIR_TOL: f64 = 1e-8;
/// Largest denominator tried when rationalizing eigenfunction values.
const MAX_DENOMINATOR: i64 = 64;

fn to_f64<T: RealField + Copy>(t: T) -> f64 {
    t.to_subset().unwrap_or(f64::NAN)
}

fn from_f64<T: RealField + Copy>(v: f64) -> T {
    nalgebra::convert(v)
}

fn distinct_neighbors(x: &PolygonalComplex, f: usize) -> Vec<usize> {
    let mut n: Vec<usize> = x.built_neighbors(f).collect();
    n.sort_unstable();
    n.dedup();
    n
}

/// An operator restricted to a list of faces.
#[derive(Clone, Debug, PartialEq)]
pub struct BallOperator<T: RealField> {
    /// Row/column faces, in BFS order from the center.
    pub faces: Vec<usize>,
    pub matrix: DMatrix<T>,
}

fn ball_faces(x: &PolygonalComplex, o: usize, radius: usize) -> Result<Vec<usize>> {
    let metric = FaceMetric::new(x);
    let b = metric.trusted_ball(o, radius)?;
    let faces: Vec<usize> = b.within(radius as u32).collect();
    if faces.len() > DENSE_BUDGET {
        return Err(Error::CapExceeded {
            what: "dense eigensolver size",
            needed: faces.len() as u128,
            cap: DENSE_BUDGET as u128,
        });
    }
    Ok(faces)
}

fn dirichlet_laplacian<T: RealField + Copy>(
    x: &PolygonalComplex,
    faces: &[usize],
) -> Result<DMatrix<T>> {
    let index: BTreeMap<usize, usize> = faces.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let n = faces.len();
    let mut m = DMatrix::<T>::zeros(n, n);
    for (i, &f) in faces.iter().enumerate() {
        m[(i, i)] = from_f64(x.true_face_degree(f)? as f64);
        for g in distinct_neighbors(x, f) {
            if let Some(&j) = index.get(&g) {
                m[(i, j)] = -T::one();
            }
        }
    }
    Ok(m)
}

/// Dirichlet Laplacian Δ_R on the trusted ball B_R(o).
pub fn laplacian_matrix<T: RealField + Copy>(
    x: &PolygonalComplex,
    o: usize,
    radius: usize,
) -> Result<BallOperator<T>> {
    let faces = ball_faces(x, o, radius)?;
    let matrix = dirichlet_laplacian(x, &faces)?;
    Ok(BallOperator { faces, matrix })
}

/// Degree operator D_F restricted to B_R(o).
pub fn degree_matrix<T: RealField + Copy>(
    x: &PolygonalComplex,
    o: usize,
    radius: usize,
) -> Result<BallOperator<T>> {
    let faces = ball_faces(x, o, radius)?;
    let diag: Vec<T> = faces
        .iter()
        .map(|&f| x.true_face_degree(f).map(|d| from_f64(d as f64)))
        .collect::<Result<_>>()?;
    Ok(BallOperator {
        matrix: DMatrix::from_diagonal(&DVector::from_vec(diag)),
        faces,
    })
}

/// Operator with coefficients a(f,g), nonzero exactly on adjacent pairs
/// (diagonal entries act as a potential).
#[derive(Clone, Debug, PartialEq)]
pub struct NearestNeighborOperator<T> {
    pub faces: Vec<usize>,
    pub coefficients: BTreeMap<(usize, usize), T>,
}

impl<T: RealField + Copy> NearestNeighborOperator<T> {
    /// Δ_R written as a nearest neighbour operator.
    pub fn laplacian(x: &PolygonalComplex, o: usize, radius: usize) -> Result<Self> {
        let op = laplacian_matrix::<T>(x, o, radius)?;
        let mut coefficients = BTreeMap::new();
        for (i, &f) in op.faces.iter().enumerate() {
            for (j, &g) in op.faces.iter().enumerate() {
                if op.matrix[(i, j)] != T::zero() {
                    coefficients.insert((f, g), op.matrix[(i, j)]);
                }
            }
        }
        Ok(NearestNeighborOperator {
            faces: op.faces,
            coefficients,
        })
    }

    /// Checks that off-diagonal coefficients are nonzero exactly on
    /// adjacent pairs of the operator's faces.
    pub fn check(&self, x: &PolygonalComplex) -> Result<()> {
        let set: BTreeSet<usize> = self.faces.iter().copied().collect();
        for (&(f, g), a) in &self.coefficients {
            if !set.contains(&f) || !set.contains(&g) {
                return Err(Error::Precondition(format!(
                    "coefficient ({f}, {g}) outside the operator's faces"
                )));
            }
            if f != g && *a != T::zero() && !distinct_neighbors(x, f).contains(&g) {
                return Err(Error::Precondition(format!(
                    "coefficient on non-adjacent faces ({f}, {g})"
                )));
            }
        }
        for &f in &self.faces {
            for g in distinct_neighbors(x, f) {
                if set.contains(&g)
                    && self
                        .coefficients
                        .get(&(f, g))
                        .is_none_or(|a| *a == T::zero())
                {
                    return Err(Error::Precondition(format!(
                        "missing coefficient on adjacent faces ({f}, {g})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_symmetric(&self) -> bool {
        self.coefficients
            .iter()
            .all(|(&(f, g), a)| self.coefficients.get(&(g, f)) == Some(a))
    }

    pub fn matrix(&self) -> DMatrix<T> {
        let index: BTreeMap<usize, usize> = self
            .faces
            .iter()
            .enumerate()
            .map(|(i, &f)| (f, i))
            .collect();
        let n = self.faces.len();
        let mut m = DMatrix::zeros(n, n);
        for (&(f, g), &a) in &self.coefficients {
            m[(index[&f], index[&g])] = a;
        }
        m
    }
}

/// Which operator a spectrum is computed for.
#[derive(Clone, Debug, PartialEq)]
pub enum Operator<T> {
    Laplacian,
    Degree,
    Custom(NearestNeighborOperator<T>),
}

/// Ascending eigenpairs of a symmetric matrix with residual norms.
pub struct Eigenpairs<T: RealField> {
    pub values: Vec<T>,
    /// Column i belongs to `values[i]`.
    pub vectors: DMatrix<T>,
    pub residuals: Vec<T>,
}

/// Dense symmetric eigendecomposition, sorted ascending.
pub fn eigenpairs<T: RealField + Copy>(m: &DMatrix<T>) -> Eigenpairs<T> {
    let n = m.nrows();
    if n == 0 {
        return Eigenpairs {
            values: vec![],
            vectors: DMatrix::zeros(0, 0),
            residuals: vec![],
        };
    }
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values: Vec<T> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    let residuals = (0..n)
        .map(|c| {
            let v = vectors.column(c);
            (m * v - v * values[c]).norm()
        })
        .collect();
    Eigenpairs {
        values,
        vectors,
        residuals,
    }
}

/// The Cheeger λ₀ estimate m_F(1 − √(1 − α²)).
pub fn lambda0_bound<T: RealField + Copy>(m_f: T, alpha: T) -> Result<T> {
    if alpha < T::zero() || alpha > T::one() {
        return Err(Error::Precondition(format!(
            "Cheeger bound {alpha} outside [0, 1]"
        )));
    }
    Ok(m_f * (T::one() - (T::one() - alpha * alpha).sqrt()))
}

/// Balance of edge degrees: inf of m_E/M_E over annuli B_R ∖ B_r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Balance {
    /// Entry r: inf over B_R ∖ B_r of m_E(f)/M_E(f), r = 0..R−1.
    pub annulus_ratios: Vec<Rational>,
    /// Smallest C with C·m_E(f) ≥ M_E(f) on the ball (None if some m_E = 0).
    pub constant: Option<Rational>,
    pub balanced: bool,
    /// The outermost annulus ratio is 1.
    pub strongly_balanced: bool,
}

/// Balance classification over B_R(o).
pub fn balance(x: &PolygonalComplex, o: usize, radius: usize) -> Result<Balance> {
    let metric = FaceMetric::new(x);
    let s = metric.spheres(o, radius)?;
    let mut per_sphere = Vec::with_capacity(radius + 1);
    let mut constant = Some(Rational::from_integer(0));
    for sphere in &s.spheres {
        let mut inf: Option<Rational> = None;
        for &f in sphere {
            let d = x.face_degrees(f)?;
            let q = if d.max_edge == 0 {
                Rational::from_integer(1)
            } else {
                Rational::new(d.min_edge as i64, d.max_edge as i64)
            };
            if inf.is_none_or(|i| q < i) {
                inf = Some(q);
            }
            constant = match (constant, d.min_edge) {
                (Some(_), 0) => None,
                (Some(c), m) => Some(c.max(Rational::new(d.max_edge as i64, m as i64))),
                (None, _) => None,
            };
        }
        per_sphere.push(inf.unwrap_or(Rational::from_integer(1)));
    }
    let mut annulus_ratios = vec![Rational::from_integer(1); radius];
    let mut acc = Rational::from_integer(1);
    for r in (0..radius).rev() {
        acc = acc.min(per_sphere[r + 1]);
        annulus_ratios[r] = acc;
    }
    let strongly_balanced = annulus_ratios
        .last()
        .is_some_and(|r| *r == Rational::from_integer(1));
    Ok(Balance {
        balanced: constant.is_some(),
        strongly_balanced,
        annulus_ratios,
        constant,
    })
}

/// Spectral data of a ball.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralReport<T> {
    pub center: usize,
    pub radius: usize,
    pub faces: Vec<usize>,
    /// Ascending spectrum of the requested operator.
    pub eigenvalues: Vec<T>,
    /// ‖Aφ − λφ‖ for each computed eigenpair.
    pub residuals: Vec<T>,
    /// Ascending spectrum of Δ_R.
    pub laplacian: Vec<T>,
    /// Ascending spectrum of D_F on the ball.
    pub degree: Vec<T>,
    /// λ_n(Δ_R)/λ_n(D_F).
    pub ratios: Vec<T>,
    /// min |f| over the ball.
    pub m_f: usize,
    /// max(bound1, bound2, 0) from the degree bounds.
    pub cheeger_lower: Rational,
    /// m_F(1 − √(1 − α²)) with α = `cheeger_lower`.
    pub lambda0_bound: T,
    /// [1 − √(1−a²), 1 + √(1−a²)] with a the outermost α_∞ proxy, if a > 0.
    pub window: Option<(T, T)>,
    /// Fraction of ratios inside the window (reported, not asserted).
    pub window_fraction: Option<T>,
    pub balance: Balance,
}

/// Spectrum of the chosen operator on B_R(o), with the Δ/D_F comparison.
pub fn spectrum<T: RealField + Copy>(
    x: &PolygonalComplex,
    o: usize,
    radius: usize,
    operator: &Operator<T>,
) -> Result<SpectralReport<T>> {
    let lap = laplacian_matrix::<T>(x, o, radius)?;
    let deg = degree_matrix::<T>(x, o, radius)?;
    let lap_pairs = eigenpairs(&lap.matrix);
    let mut degree: Vec<T> = deg.matrix.diagonal().iter().copied().collect();
    degree.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let (eigenvalues, residuals) = match operator {
        Operator::Laplacian => (lap_pairs.values.clone(), lap_pairs.residuals.clone()),
        Operator::Degree => (degree.clone(), vec![T::zero(); degree.len()]),
        Operator::Custom(nno) => {
            nno.check(x)?;
            if !nno.is_symmetric() {
                return Err(Error::Precondition(
                    "custom operator is not symmetric".into(),
                ));
            }
            if nno.faces.len() > DENSE_BUDGET {
                return Err(Error::CapExceeded {
                    what: "dense eigensolver size",
                    needed: nno.faces.len() as u128,
                    cap: DENSE_BUDGET as u128,
                });
            }
            let p = eigenpairs(&nno.matrix());
            (p.values, p.residuals)
        }
    };
    let ratios = lap_pairs
        .values
        .iter()
        .zip(&degree)
        .map(|(&l, &d)| l / d)
        .collect::<Vec<T>>();
    let m_f = lap
        .faces
        .iter()
        .map(|&f| x.true_face_degree(f))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min()
        .unwrap_or(0);

    let bounds = cheeger_lower_bounds::<Rational>(x, o, radius)?;
    let zero = Rational::from_integer(0);
    let cheeger_lower = bounds
        .bound1
        .max(bounds.bound2)
        .max(zero)
        .min(Rational::from_integer(1));
    let lambda0 = lambda0_bound(
        from_f64::<T>(m_f as f64),
        from_f64(cheeger_lower.to_f64_lossy()),
    )?;
    let window = if radius > 0 {
        cheeger_at_infinity::<Rational>(x, o, radius)?
            .last()
            .copied()
            .filter(|a| *a > zero)
            .map(|a| {
                let a: T = from_f64(a.to_f64_lossy().min(1.0));
                let w = (T::one() - a * a).sqrt();
                (T::one() - w, T::one() + w)
            })
    } else {
        None
    };
    let window_fraction = window.map(|(lo, hi)| {
        let inside = ratios.iter().filter(|&&q| q >= lo && q <= hi).count();
        from_f64::<T>(inside as f64) / from_f64(ratios.len().max(1) as f64)
    });
    Ok(SpectralReport {
        center: o,
        radius,
        faces: lap.faces,
        eigenvalues,
        residuals,
        laplacian: lap_pairs.values,
        degree,
        ratios,
        m_f,
        cheeger_lower,
        lambda0_bound: lambda0,
        window,
        window_fraction,
        balance: balance(x, o, radius)?,
    })
}

trait LossyF64 {
    fn to_f64_lossy(&self) -> f64;
}

impl LossyF64 for Rational {
    fn to_f64_lossy(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

/// A finitely supported eigenfunction found inside a ball.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenfunctionCertificate {
    pub lambda: f64,
    /// λ as a small-denominator rational, when one matches.
    pub lambda_exact: Option<Rational>,
    /// Faces where φ ≠ 0, sorted.
    pub support: Vec<usize>,
    /// (face, φ(face)) on the support.
    pub values: Vec<(usize, f64)>,
    /// Rational values, when every entry rationalizes.
    pub exact_values: Option<Vec<(usize, Rational)>>,
    /// Faces adjacent to the support but outside it.
    pub halo: Vec<usize>,
    /// max |Δφ − λφ| over the support (floating point).
    pub residual: f64,
    /// max |Σ_{f∼g} φ(f)| over halo faces g (floating point).
    pub halo_residual: f64,
    /// Outcome of the exact check, when rational data is available.
    pub verified_exact: Option<bool>,
}

/// Every eigenfunction of Δ supported in B_R(o): eigenvectors of the
/// restriction to B_R that also satisfy the eigen-equation at every face of
/// S_{R+1} (where φ = 0, so Σ_{f∼g} φ(f) must vanish). Each eigenspace is
/// returned as a basis in reduced row echelon form, rationalized and
/// verified exactly when possible. An empty list means no such function.
pub fn finite_support_eigenfunctions(
    x: &PolygonalComplex,
    o: usize,
    radius: usize,
) -> Result<Vec<EigenfunctionCertificate>> {
    let faces = ball_faces(x, o, radius)?;
    let n = faces.len();
    let index: BTreeMap<usize, usize> = faces.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let l = dirichlet_laplacian::<f64>(x, &faces)?;
    let mut halo_rows: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &f) in faces.iter().enumerate() {
        for g in distinct_neighbors(x, f) {
            if !index.contains_key(&g) {
                halo_rows.entry(g).or_default().push(i);
            }
        }
    }
    let mut h = DMatrix::<f64>::zeros(halo_rows.len(), n);
    for (r, cols) in halo_rows.values().enumerate() {
        for &c in cols {
            h[(r, c)] = 1.0;
        }
    }

    let pairs = eigenpairs(&l);
    let mut out = Vec::new();
    let mut start = 0;
    while start < n {
        let lambda0 = pairs.values[start];
        let mut end = start + 1;
        while end < n
            && pairs.values[end] - pairs.values[end - 1] <= CLUSTER_TOL * (1.0 + lambda0.abs())
        {
            end += 1;
        }
        let u = pairs.vectors.columns(start, end - start).into_owned();
        let lambda = pairs.values[start..end].iter().sum::<f64>() / (end - start) as f64;
        start = end;

        let basis = if h.nrows() == 0 {
            u
        } else {
            let hu = &h * &u;
            let gram = hu.transpose() * &hu;
            let ge = eigenpairs(&gram);
            let null: Vec<usize> = (0..ge.values.len())
                .filter(|&i| ge.values[i] <= 1e-12)
                .collect();
            if null.is_empty() {
                continue;
            }
            let nmat = DMatrix::from_fn(ge.vectors.nrows(), null.len(), |r, c| {
                ge.vectors[(r, null[c])]
            });
            u * nmat
        };
        for phi in rref_rows(&basis) {
            let c = certify(x, &faces, &l, &h, &halo_rows, lambda, &phi)?;
            if c.residual <= PAIR_TOL * (1.0 + lambda.abs()) && c.halo_residual <= PAIR_TOL {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// Rows of the reduced row echelon form of basisᵀ (pivots scaled to 1).
fn rref_rows(basis: &DMatrix<f64>) -> Vec<Vec<f64>> {
    let mut m = basis.transpose();
    let (rows, cols) = m.shape();
    let mut pivot_row = 0;
    for c in 0..cols {
        if pivot_row == rows {
            break;
        }
        let (best, val) = (pivot_row..rows)
            .map(|r| (r, m[(r, c)].abs()))
            .fold((pivot_row, 0.0), |a, b| if b.1 > a.1 { b } else { a });
        if val < 1e-9 {
            continue;
        }
        m.swap_rows(pivot_row, best);
        let p = m[(pivot_row, c)];
        for k in 0..cols {
            m[(pivot_row, k)] /= p;
        }
        for r in 0..rows {
            if r != pivot_row {
                let factor = m[(r, c)];
                if factor != 0.0 {
                    for k in 0..cols {
                        let v = m[(pivot_row, k)];
                        m[(r, k)] -= factor * v;
                    }
                }
            }
        }
        pivot_row += 1;
    }
    (0..pivot_row)
        .map(|r| m.row(r).iter().copied().collect())
        .collect()
}

fn certify(
    x: &PolygonalComplex,
    faces: &[usize],
    l: &DMatrix<f64>,
    h: &DMatrix<f64>,
    halo_rows: &BTreeMap<usize, Vec<usize>>,
    lambda: f64,
    phi: &[f64],
) -> Result<EigenfunctionCertificate> {
    let v = DVector::from_column_slice(phi);
    let residual = (l * &v - &v * lambda).amax();
    let halo_residual = if h.nrows() == 0 { 0.0 } else { (h * &v).amax() };
    let values: Vec<(usize, f64)> = phi
        .iter()
        .enumerate()
        .filter(|(_, a)| a.abs() > 1e-9)
        .map(|(i, &a)| (faces[i], a))
        .collect();
    let mut support: Vec<usize> = values.iter().map(|&(f, _)| f).collect();
    support.sort_unstable();
    let halo: Vec<usize> = halo_rows
        .iter()
        .filter(|(_, cols)| cols.iter().any(|&c| phi[c].abs() > 1e-9))
        .map(|(&g, _)| g)
        .collect();
    let lambda_exact = rationalize(lambda, MAX_DENOMINATOR, 1e-7);
    let exact_values: Option<Vec<(usize, Rational)>> = values
        .iter()
        .map(|&(f, a)| rationalize(a, MAX_DENOMINATOR, 1e-7).map(|q| (f, q)))
        .collect();
    let verified_exact = match (&exact_values, lambda_exact) {
        (Some(vals), Some(lam)) => Some(verify_eigenfunction(x, vals, lam)?.pass),
        _ => None,
    };
    Ok(EigenfunctionCertificate {
        lambda,
        lambda_exact,
        support,
        values,
        exact_values,
        halo,
        residual,
        halo_residual,
        verified_exact,
    })
}

/// Exact check of Δφ = λφ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenVerification<T> {
    pub pass: bool,
    /// Δφ(f) − λφ(f) on support ∪ halo.
    pub residuals: BTreeMap<usize, T>,
}

/// Checks Δφ = λφ exactly on the support of φ and every face adjacent to
/// it. Support faces must have every neighbour built; halo faces need not,
/// since φ vanishes there and their support neighbours are known.
pub fn verify_eigenfunction<T: ExactScalar>(
    x: &PolygonalComplex,
    phi: &[(usize, T)],
    lambda: T,
) -> Result<EigenVerification<T>> {
    let values: BTreeMap<usize, T> = phi.iter().filter(|(_, v)| !v.is_zero()).cloned().collect();
    if values.is_empty() {
        return Err(Error::Precondition(
            "the zero function is not an eigenfunction".into(),
        ));
    }
    let mut check: BTreeSet<usize> = BTreeSet::new();
    for &f in values.keys() {
        if f >= x.n_faces() || !x.neighbors_built(f) {
            return Err(Error::Untrusted {
                face: f,
                context: "eigenfunction support".into(),
            });
        }
        check.insert(f);
        check.extend(distinct_neighbors(x, f));
    }
    let zero = T::zero();
    let mut residuals = BTreeMap::new();
    for &f in &check {
        let here = values.get(&f).unwrap_or(&zero).clone();
        let mut delta = T::zero();
        if !here.is_zero() {
            delta = T::from_count(x.true_face_degree(f)?) * here.clone();
        }
        for g in distinct_neighbors(x, f) {
            if let Some(v) = values.get(&g) {
                delta = delta - v.clone();
            }
        }
        residuals.insert(f, delta - lambda.clone() * here);
    }
    Ok(EigenVerification {
        pass: residuals.values().all(|r| r.is_zero()),
        residuals,
    })
}

/// Harmonic extension of boundary data on S_R into B_{R−1}.
#[derive(Clone, Debug, PartialEq)]
pub struct DirichletSolution<T> {
    /// Faces of B_R in BFS order.
    pub faces: Vec<usize>,
    pub values: Vec<T>,
    /// Whether each face is interior (in B_{R−1}).
    pub interior: Vec<bool>,
    /// max over interior faces of |deg(f)u(f) − Σ_{g∼f} u(g)|.
    pub residual: T,
    pub iterations: usize,
}

impl<T: RealField + Copy> DirichletSolution<T> {
    pub fn value(&self, f: usize) -> Option<T> {
        self.faces
            .iter()
            .position(|&g| g == f)
            .map(|i| self.values[i])
    }

    /// min boundary ≤ u ≤ max boundary on the interior (up to `tol`).
    pub fn maximum_principle(&self, tol: T) -> bool {
        let boundary: Vec<T> = (0..self.faces.len())
            .filter(|&i| !self.interior[i])
            .map(|i| self.values[i])
            .collect();
        let (lo, hi) = boundary.iter().fold(
            (T::max_value().unwrap(), T::min_value().unwrap()),
            |(a, b), &v| (a.min(v), b.max(v)),
        );
        (0..self.faces.len())
            .filter(|&i| self.interior[i])
            .all(|i| self.values[i] >= lo - tol && self.values[i] <= hi + tol)
    }
}

/// Solves Pu = u on B_{R−1}(o) with u = `boundary` on S_R, where
/// Pu(f) = (1/deg f) Σ_{g∼f} u(g), by conjugate gradients on the
/// (symmetric positive definite) interior Laplacian.
pub fn solve_dirichlet<T: RealField + Copy>(
    x: &PolygonalComplex,
    o: usize,
    radius: usize,
    boundary: &BTreeMap<usize, T>,
    tolerance: T,
) -> Result<DirichletSolution<T>> {
    if radius == 0 {
        return Err(Error::Precondition(
            "the Dirichlet problem needs radius >= 1".into(),
        ));
    }
    let metric = FaceMetric::new(x);
    let ball = metric.trusted_ball(o, radius)?;
    let faces: Vec<usize> = ball.within(radius as u32).collect();
    let interior: Vec<bool> = faces
        .iter()
        .map(|&f| (ball.get(f).unwrap() as usize) < radius)
        .collect();
    let mut values = vec![T::zero(); faces.len()];
    let mut unknown = BTreeMap::new();
    for (i, &f) in faces.iter().enumerate() {
        if interior[i] {
            let k = unknown.len();
            unknown.insert(f, k);
        } else {
            values[i] = *boundary.get(&f).ok_or_else(|| {
                Error::Precondition(format!("no boundary value for face {f} of S_{radius}"))
            })?;
        }
    }
    let pos: BTreeMap<usize, usize> = faces.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    // interior rows: (degree, interior neighbour indices), right-hand side
    let n = unknown.len();
    let mut rows: Vec<(T, Vec<usize>)> = Vec::with_capacity(n);
    let mut rhs = DVector::<T>::zeros(n);
    for (i, &f) in faces.iter().enumerate() {
        if !interior[i] {
            continue;
        }
        let nbrs = distinct_neighbors(x, f);
        let k = unknown[&f];
        let mut inner = Vec::new();
        for g in &nbrs {
            match (unknown.get(g), pos.get(g)) {
                (Some(&j), _) => inner.push(j),
                (None, Some(&p)) => rhs[k] += values[p],
                (None, None) => {
                    return Err(Error::Precondition(format!(
                        "interior face {f} has a neighbour {g} outside B_{radius}"
                    )))
                }
            }
        }
        rows.push((from_f64(nbrs.len() as f64), inner));
    }
    let apply = |u: &DVector<T>| -> DVector<T> {
        DVector::from_fn(n, |k, _| {
            rows[k].0 * u[k] - rows[k].1.iter().fold(T::zero(), |s, &j| s + u[j])
        })
    };

    let mut u = DVector::<T>::zeros(n);
    let mut r = rhs.clone();
    let mut p = r.clone();
    let mut rr = r.dot(&r);
    let mut iterations = 0;
    let max_iter = 20 * n + 100;
    let stop = tolerance * from_f64(0.01);
    while r.amax() > stop && iterations < max_iter {
        let ap = apply(&p);
        let alpha = rr / p.dot(&ap);
        u += &p * alpha;
        r -= &ap * alpha;
        let rr_new = r.dot(&r);
        p = &r + &p * (rr_new / rr);
        rr = rr_new;
        iterations += 1;
    }
    let residual = (apply(&u) - &rhs).amax();
    if residual > tolerance {
        return Err(Error::Residual {
            target: to_f64(tolerance),
            achieved: to_f64(residual),
        });
    }
    for (i, &f) in faces.iter().enumerate() {
        if let Some(&k) = unknown.get(&f) {
            values[i] = u[k];
        }
    }
    Ok(DirichletSolution {
        faces,
        values,
        interior,
        residual,
        iterations,
    })
}

/// 0/1 data on S_R splitting the sphere into two halves: S_1(o) is taken in
/// cyclic order around o, each face of S_R joins the sector of its nearest
/// S_1 face (distance in the built complex, ties to the earlier face), and
/// faces in sectors `shift .. shift + ⌈k/2⌉` (mod k) get 1.
pub fn half_sphere_indicator(
    x: &PolygonalComplex,
    o: usize,
    radius: usize,
    shift: usize,
) -> Result<BTreeMap<usize, f64>> {
    let metric = FaceMetric::new(x);
    let ball = metric.trusted_ball(o, radius)?;
    let mut ring: Vec<usize> = Vec::new();
    for &e in x.face_edges(o) {
        let mut across: Vec<usize> = x
            .edge_faces(e)
            .iter()
            .copied()
            .filter(|&g| g != o)
            .collect();
        across.sort_unstable();
        for g in across {
            if !ring.contains(&g) {
                ring.push(g);
            }
        }
    }
    let k = ring.len();
    if k == 0 {
        return Err(Error::Precondition(format!("face {o} has no neighbours")));
    }
    let balls: Vec<_> = ring
        .iter()
        .map(|&s| metric.compute_ball(s, 2 * radius as u32 + 2))
        .collect();
    let half = k.div_ceil(2);
    let mut data = BTreeMap::new();
    for g in ball.sphere(radius as u32) {
        let sector = (0..k)
            .min_by_key(|&i| (balls[i].get(g).unwrap_or(u32::MAX), i))
            .unwrap();
        let inside = (sector + k - shift % k) % k < half;
        data.insert(g, if inside { 1.0 } else { 0.0 });
    }
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_regular_tessellation, gen_sigma_n, gen_spherical, SphericalKind};

    #[test]
    fn single_face_matrix() {
        let x = gen_regular_tessellation(7, 3, 1).unwrap();
        let op = laplacian_matrix::<f64>(&x, 0, 0).unwrap();
        assert_eq!(op.matrix, DMatrix::from_element(1, 1, 7.0));
    }

    #[test]
    fn cube_spectrum_is_octahedral() {
        let x = gen_spherical(SphericalKind::Cube).unwrap();
        let op = laplacian_matrix::<f64>(&x, 0, 3).unwrap();
        for i in 0..6 {
            assert_eq!(op.matrix.row(i).sum(), 0.0);
        }
        // oracle: 4I − A with A the octahedron adjacency (K_{2,2,2})
        let a = DMatrix::<f64>::from_fn(
            6,
            6,
            |i, j| if i != j && i / 2 != j / 2 { 1.0 } else { 0.0 },
        );
        let oracle = eigenpairs(&(DMatrix::identity(6, 6) * 4.0 - a)).values;
        let rep = spectrum::<f64>(&x, 0, 3, &Operator::Laplacian).unwrap();
        for (got, want) in rep.eigenvalues.iter().zip(&oracle) {
            assert!((got - want).abs() < 1e-10);
        }
        for (got, want) in rep.eigenvalues.iter().zip([0.0, 4.0, 4.0, 4.0, 6.0, 6.0]) {
            assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn square_lattice_b1_matches_closed_form() {
        // center with four arms: eigenvalues 4 (×3), 4 ± 2
        let x = gen_regular_tessellation(4, 4, 2).unwrap();
        let rep = spectrum::<f64>(&x, 0, 1, &Operator::Laplacian).unwrap();
        let want = [2.0, 4.0, 4.0, 4.0, 6.0];
        for (got, w) in rep.eigenvalues.iter().zip(want) {
            assert!((got - w).abs() < 1e-10, "{:?}", rep.eigenvalues);
        }
        let d = spectrum::<f64>(&x, 0, 2, &Operator::Degree).unwrap();
        assert!(d.eigenvalues.iter().all(|&v| v == 4.0));
    }

    #[test]
    fn lambda0_bound_examples() {
        assert_eq!(lambda0_bound(7.0, 0.0).unwrap(), 0.0);
        assert_eq!(lambda0_bound(7.0, 1.0).unwrap(), 7.0);
        let v = lambda0_bound(7.0f64, 1.0 / 7.0).unwrap();
        assert!((v - (7.0 - 4.0 * 3f64.sqrt())).abs() < 1e-12);
        assert!(lambda0_bound(7.0, 1.5).is_err());
        assert!(lambda0_bound(7.0, -0.1).is_err());
    }

    #[test]
    fn heptagonal_lambda0_above_bound() {
        let x = gen_regular_tessellation(7, 3, 3).unwrap();
        let rep = spectrum::<f64>(&x, 0, 3, &Operator::Laplacian).unwrap();
        assert_eq!(rep.cheeger_lower, Rational::new(1, 7));
        assert!(rep.laplacian[0] >= rep.lambda0_bound);
        assert!(rep.residuals.iter().all(|&r| r < 1e-8));
        assert!(rep.balance.strongly_balanced);
        assert!(rep.window.is_some());
    }

    #[test]
    fn custom_operator_checks() {
        let x = gen_regular_tessellation(4, 4, 2).unwrap();
        let mut nno = NearestNeighborOperator::<f64>::laplacian(&x, 0, 1).unwrap();
        assert!(nno.check(&x).is_ok());
        let via_custom = spectrum(&x, 0, 1, &Operator::Custom(nno.clone())).unwrap();
        let via_lap = spectrum::<f64>(&x, 0, 1, &Operator::Laplacian).unwrap();
        assert_eq!(via_custom.eigenvalues.len(), via_lap.eigenvalues.len());
        let (f, g) = (nno.faces[1], nno.faces[2]);
        nno.coefficients.insert((f, g), 1.0);
        assert!(nno.check(&x).is_err());
        nno.coefficients.remove(&(f, g));
        let c = nno.faces[0];
        nno.coefficients.insert((c, f), -2.0);
        assert!(!nno.is_symmetric());
        assert!(spectrum(&x, 0, 1, &Operator::Custom(nno)).is_err());
    }

    fn wheel(x: &PolygonalComplex, v: usize) -> Vec<(usize, Rational)> {
        // faces around v in cyclic order, alternating ±1
        let faces = x.vertex_faces(v);
        let mut order = vec![faces[0]];
        while order.len() < faces.len() {
            let last = *order.last().unwrap();
            let next = faces
                .iter()
                .copied()
                .find(|&g| !order.contains(&g) && distinct_neighbors(x, last).contains(&g))
                .unwrap();
            order.push(next);
        }
        order
            .into_iter()
            .enumerate()
            .map(|(i, f)| (f, Rational::from_integer(if i % 2 == 0 { 1 } else { -1 })))
            .collect()
    }

    #[test]
    fn sigma_wheel_verifies_exactly() {
        // Σ_6 balls that contain a whole wheel exceed the default face cap
        for n in 3..=5 {
            let l = gen_sigma_n(n, n - 1).unwrap();
            let v = *l
                .complex
                .face(0)
                .iter()
                .find(|&&v| l.vertex_color[v] == 0)
                .unwrap();
            let phi = wheel(&l.complex, v);
            assert_eq!(phi.len(), 2 * n);
            let ok = verify_eigenfunction(&l.complex, &phi, Rational::from_integer(6)).unwrap();
            assert!(ok.pass, "n = {n}");
            let bad = verify_eigenfunction(&l.complex, &phi, Rational::from_integer(5)).unwrap();
            assert!(!bad.pass);
            for (f, val) in &phi {
                assert_eq!(bad.residuals[f], *val);
            }
        }
        let l = gen_sigma_n(4, 2).unwrap();
        assert!(verify_eigenfunction::<Rational>(
            &l.complex,
            &[(0, Rational::from_integer(0))],
            Rational::from_integer(6)
        )
        .is_err());
    }

    #[test]
    fn eigenfunction_search() {
        let l = gen_sigma_n(4, 4).unwrap();
        let found = finite_support_eigenfunctions(&l.complex, 0, 4).unwrap();
        assert!(!found.is_empty());
        assert!(found.iter().all(|c| c.verified_exact == Some(true)));
        assert!(found
            .iter()
            .any(|c| c.lambda_exact == Some(Rational::from_integer(6))));

        let h = gen_regular_tessellation(7, 3, 3).unwrap();
        assert!(finite_support_eigenfunctions(&h, 0, 3).unwrap().is_empty());
    }

    #[test]
    fn dirichlet_constant_and_half_sphere() {
        let x = gen_regular_tessellation(7, 3, 3).unwrap();
        let m = FaceMetric::new(&x);
        let sphere: Vec<usize> = m.ball(0, 3).sphere(3).collect();
        let constant: BTreeMap<usize, f64> = sphere.iter().map(|&f| (f, 2.5)).collect();
        let sol = solve_dirichlet(&x, 0, 3, &constant, 1e-10).unwrap();
        assert!(sol.values.iter().all(|v| (v - 2.5).abs() < 1e-9));

        let data = half_sphere_indicator(&x, 0, 3, 0).unwrap();
        assert!(data.values().any(|&v| v == 1.0) && data.values().any(|&v| v == 0.0));
        let sol = solve_dirichlet(&x, 0, 3, &data, 1e-10).unwrap();
        assert!(sol.residual <= 1e-10);
        assert!(sol.maximum_principle(1e-12));
        for (i, &inner) in sol.interior.iter().enumerate() {
            if inner {
                assert!(sol.values[i] > 0.0 && sol.values[i] < 1.0);
            }
        }
        let mut missing = data.clone();
        missing.pop_first();
        assert!(solve_dirichlet(&x, 0, 3, &missing, 1e-10).is_err());
    }

    #[test]
    fn dirichlet_is_generic_over_floats() {
        let x = gen_regular_tessellation(4, 4, 3).unwrap();
        let data: BTreeMap<usize, f32> = half_sphere_indicator(&x, 0, 3, 1)
            .unwrap()
            .into_iter()
            .map(|(f, v)| (f, v as f32))
            .collect();
        let sol = solve_dirichlet(&x, 0, 3, &data, 1e-4f32).unwrap();
        assert!(sol.maximum_principle(1e-5));
    }
}
