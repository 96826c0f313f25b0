//! Cheeger constants: exhaustive minimization over small regions, the
//! degree-based lower bounds and the forward/backward certificate, and a
//! nested-ball proxy for the Cheeger constant at infinity.
//!
//! Volumes and boundaries use true face degrees, so a region of a truncated
//! complex is measured exactly as in the infinite complex: for a face set K,
//! vol(K) = Σ|f| and |∂K| = vol(K) − 2·#{adjacent pairs inside K}.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::complex::PolygonalComplex;
use crate::error::{Error, Result};
use crate::metric::FaceMetric;
use crate::scalar::ExactScalar;

/// Largest region the brute force accepts (2^22 subsets).
pub const MAX_BRUTEFORCE_REGION: usize = 22;

/// A face set with its isoperimetric ratio |∂K| / vol(K).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheegerWitness<T> {
    /// Sorted faces of K.
    pub faces: Vec<usize>,
    /// Ordered pairs (f, g) with f ∈ K, g ∉ K, f ∼ g.
    pub boundary: usize,
    pub volume: usize,
    pub ratio: T,
}

impl<T: ExactScalar> CheegerWitness<T> {
    /// Measures an arbitrary face set.
    pub fn of(x: &PolygonalComplex, faces: &[usize]) -> Result<Self> {
        let mut faces = faces.to_vec();
        faces.sort_unstable();
        faces.dedup();
        if faces.is_empty() {
            return Err(Error::Precondition("Cheeger ratio of the empty set".into()));
        }
        let mut volume = 0;
        let mut inner = 0;
        for &f in &faces {
            volume += x.true_face_degree(f)?;
            inner += distinct_neighbors(x, f)
                .filter(|g| faces.binary_search(g).is_ok())
                .count();
        }
        let boundary = volume - inner;
        Ok(CheegerWitness {
            ratio: ratio_of(boundary, volume),
            faces,
            boundary,
            volume,
        })
    }
}

fn ratio_of<T: ExactScalar>(boundary: usize, volume: usize) -> T {
    T::from_count(boundary) / T::from_count(volume)
}

fn distinct_neighbors(x: &PolygonalComplex, f: usize) -> impl Iterator<Item = usize> {
    let mut n: Vec<usize> = x.built_neighbors(f).collect();
    n.sort_unstable();
    n.dedup();
    n.into_iter()
}

/// Best (boundary, volume, mask) found so far; ratios compared exactly.
#[derive(Clone, Copy, Debug)]
struct Best {
    boundary: u64,
    volume: u64,
    mask: u32,
}

impl Best {
    fn better_than(&self, other: &Best) -> bool {
        let lhs = self.boundary * other.volume;
        let rhs = other.boundary * self.volume;
        match lhs.cmp(&rhs) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => {
                (self.mask.count_ones(), self.mask) < (other.mask.count_ones(), other.mask)
            }
        }
    }
}

struct Region {
    adjacency: Vec<u32>,
    degree: Vec<u64>,
}

impl Region {
    /// Visits every connected subset whose smallest index is `root`.
    fn scan_root(&self, root: usize) -> (Best, u64) {
        let bit = 1u32 << root;
        let below = bit - 1;
        let mut best = Best {
            boundary: self.degree[root],
            volume: self.degree[root],
            mask: bit,
        };
        let mut count = 0;
        self.extend(
            bit,
            self.degree[root],
            0,
            self.adjacency[root] & !below,
            below | bit,
            &mut best,
            &mut count,
        );
        (best, count)
    }

    /// `excluded` holds vertices that may not join (below the root or
    /// already branched on); `candidates` are neighbours of `set` that may.
    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        set: u32,
        volume: u64,
        inner: u64,
        candidates: u32,
        excluded: u32,
        best: &mut Best,
        count: &mut u64,
    ) {
        *count += 1;
        let here = Best {
            boundary: volume - 2 * inner,
            volume,
            mask: set,
        };
        if here.better_than(best) {
            *best = here;
        }
        let mut cand = candidates;
        let mut excl = excluded;
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            let vb = 1u32 << v;
            cand &= !vb;
            let new_inner = inner + (self.adjacency[v] & set).count_ones() as u64;
            let fresh = self.adjacency[v] & !set & !excl & !cand & !vb;
            self.extend(
                set | vb,
                volume + self.degree[v],
                new_inner,
                cand | fresh,
                excl | vb,
                best,
                count,
            );
            excl |= vb;
        }
    }
}

/// Exact minimum of |∂K|/vol(K) over nonempty K ⊆ region.
///
/// Only connected subsets are scanned: a disconnected set has ratio at least
/// that of its best component. The result is an upper bound for the Cheeger
/// constant of the infinite complex, which is an infimum over a larger
/// family.
pub fn cheeger_bruteforce<T: ExactScalar>(
    x: &PolygonalComplex,
    region: &[usize],
    max_size: usize,
) -> Result<CheegerWitness<T>> {
    let mut faces = region.to_vec();
    faces.sort_unstable();
    faces.dedup();
    let cap = max_size.min(MAX_BRUTEFORCE_REGION);
    if faces.len() > cap {
        return Err(Error::CapExceeded {
            what: "brute-force region size",
            needed: faces.len() as u128,
            cap: cap as u128,
        });
    }
    if faces.is_empty() {
        return Err(Error::Precondition("empty region".into()));
    }
    let degree: Vec<u64> = faces
        .iter()
        .map(|&f| x.true_face_degree(f).map(|d| d as u64))
        .collect::<Result<_>>()?;
    let adjacency: Vec<u32> = faces
        .iter()
        .map(|&f| {
            distinct_neighbors(x, f)
                .filter_map(|g| faces.binary_search(&g).ok())
                .fold(0u32, |m, j| m | (1 << j))
        })
        .collect();
    let reg = Region { adjacency, degree };
    let best = (0..faces.len())
        .into_par_iter()
        .map(|root| reg.scan_root(root).0)
        .reduce_with(|a, b| if b.better_than(&a) { b } else { a })
        .expect("region is nonempty");
    let members: Vec<usize> = (0..faces.len())
        .filter(|&i| best.mask >> i & 1 == 1)
        .map(|i| faces[i])
        .collect();
    Ok(CheegerWitness {
        faces: members,
        boundary: best.boundary as usize,
        volume: best.volume as usize,
        ratio: ratio_of(best.boundary as usize, best.volume as usize),
    })
}

/// The `size` faces of `region` nearest to `f` (BFS inside the region,
/// ties by face index). Always connected.
pub fn nearest_region(x: &PolygonalComplex, region: &[usize], f: usize, size: usize) -> Vec<usize> {
    let mut inside = region.to_vec();
    inside.sort_unstable();
    let mut out = vec![f];
    let mut head = 0;
    while head < out.len() && out.len() < size {
        let h = out[head];
        head += 1;
        for g in distinct_neighbors(x, h) {
            if out.len() >= size {
                break;
            }
            if inside.binary_search(&g).is_ok() && !out.contains(&g) {
                out.push(g);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Lower bounds on the Cheeger constant evaluated over B_R(o).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheegerBounds<T> {
    /// inf (m_E(f)/M_E(f))(1 − 6/|∂f|).
    pub bound1: T,
    /// inf (m_E(f) − 2)/|f|.
    pub bound2: T,
    /// inf (|f|₊ − |f|₋)/|f| with respect to the center.
    pub certificate: T,
    /// The certificate is a Cheeger bound when it is nonnegative.
    pub certificate_valid: bool,
    pub center: usize,
    pub radius: usize,
}

impl<T: ExactScalar> CheegerBounds<T> {
    /// The strongest valid bound, clamped at 0.
    pub fn best(&self) -> T {
        let mut b = T::zero();
        for c in [&self.bound1, &self.bound2] {
            if *c > b {
                b = c.clone();
            }
        }
        if self.certificate_valid && self.certificate > b {
            b = self.certificate.clone();
        }
        b
    }
}

fn bound1_of<T: ExactScalar>(x: &PolygonalComplex, f: usize) -> Result<T> {
    let d = x.face_degrees(f)?;
    if d.max_edge == 0 {
        return Ok(T::zero());
    }
    Ok(T::from_ratio(d.min_edge as i64, d.max_edge as i64)
        * (T::one() - T::from_ratio(6, d.boundary as i64)))
}

fn bound2_of<T: ExactScalar>(x: &PolygonalComplex, f: usize) -> Result<T> {
    let d = x.face_degrees(f)?;
    Ok(T::from_ratio(d.min_edge as i64 - 2, d.degree as i64))
}

fn infimum<T: ExactScalar>(values: impl Iterator<Item = Result<T>>) -> Result<T> {
    let mut best: Option<T> = None;
    for v in values {
        let v = v?;
        if best.as_ref().is_none_or(|b| v < *b) {
            best = Some(v);
        }
    }
    best.ok_or_else(|| Error::Precondition("no faces to take an infimum over".into()))
}

/// The degree bounds and the sphere certificate over the trusted ball.
/// Infima run over B_R(o) only, so they are inner approximations of the
/// infima over all faces.
pub fn cheeger_lower_bounds<T: ExactScalar>(
    x: &PolygonalComplex,
    o: usize,
    radius: usize,
) -> Result<CheegerBounds<T>> {
    let metric = FaceMetric::new(x);
    let s = metric.spheres(o, radius)?;
    let faces: Vec<usize> = s.spheres.iter().flatten().copied().collect();
    let bound1 = infimum(faces.iter().map(|&f| bound1_of::<T>(x, f)))?;
    let bound2 = infimum(faces.iter().map(|&f| bound2_of::<T>(x, f)))?;
    let certificate = infimum(faces.iter().map(|&f| {
        let (plus, minus, _) = s.degrees[&f];
        let deg = x.true_face_degree(f)?;
        Ok(T::from_ratio(plus as i64 - minus as i64, deg as i64))
    }))?;
    let certificate_valid = !certificate.is_negative();
    Ok(CheegerBounds {
        bound1,
        bound2,
        certificate,
        certificate_valid,
        center: o,
        radius,
    })
}

/// Entry r: inf over B_R(o) ∖ B_r(o) of (m_E/M_E)(1 − 6/|∂f|), for
/// r = 0..R−1. Nondecreasing in r; a lower-bound proxy for α_∞. On a
/// finite complex R is clamped to the eccentricity of o.
pub fn cheeger_at_infinity<T: ExactScalar>(
    x: &PolygonalComplex,
    o: usize,
    radius: usize,
) -> Result<Vec<T>> {
    let metric = FaceMetric::new(x);
    let s = metric.spheres(o, radius)?;
    let radius = s
        .spheres
        .iter()
        .rposition(|sp| !sp.is_empty())
        .unwrap_or(0)
        .min(radius);
    let per_sphere: Vec<T> = s.spheres[..=radius]
        .iter()
        .map(|sphere| infimum(sphere.iter().map(|&f| bound1_of::<T>(x, f))))
        .collect::<Result<_>>()?;
    // suffix minima over spheres r+1..=R
    let mut out = vec![T::zero(); radius];
    let mut acc: Option<T> = None;
    for r in (0..radius).rev() {
        let v = per_sphere[r + 1].clone();
        acc = Some(match acc {
            Some(a) if a < v => a,
            _ => v,
        });
        out[r] = acc.clone().unwrap();
    }
    Ok(out)
}
