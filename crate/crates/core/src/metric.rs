//! The face metric: distances in the dual graph, geodesic intervals,
//! spheres, cut loci, bigons and four-point hyperbolicity.
//!
//! Every query on a truncated complex is certified: a BFS from `f` over the
//! built faces is exact for all faces strictly closer than the nearest face
//! whose neighbours are not all built. Answers that could be changed by
//! unbuilt cells are refused with [`Error::Untrusted`].

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, RwLock};

use num_rational::Ratio;
use rayon::prelude::*;

use crate::apartment::Apartment;
use crate::complex::PolygonalComplex;
use crate::error::{Error, Result};

/// A BFS ball over built faces.
#[derive(Clone, Debug)]
pub struct Ball {
    pub source: usize,
    /// Depth the BFS was run to.
    pub radius: u32,
    /// Faces in BFS order (nondecreasing distance).
    pub order: Vec<usize>,
    dist: HashMap<usize, u32>,
    /// Every face found at distance `< closed_below` has all neighbours built.
    closed_below: u32,
    /// BFS ran out of faces before reaching `radius`.
    pub exhausted: bool,
}

impl Ball {
    pub fn get(&self, f: usize) -> Option<u32> {
        self.dist.get(&f).copied()
    }

    /// The set of faces at distance `<= r` is exactly `{h : get(h) <= r}`.
    pub fn set_exact(&self, r: u32) -> bool {
        r <= self.radius && (r <= self.closed_below || self.fully_closed())
    }

    /// A built face found at distance `d` truly lies at distance `d`.
    pub fn distance_exact(&self, d: u32) -> bool {
        d <= self.radius && (d <= self.closed_below.saturating_add(1) || self.fully_closed())
    }

    fn fully_closed(&self) -> bool {
        self.exhausted && self.closed_below == u32::MAX
    }

    /// Faces at distance `<= r`, in BFS order.
    pub fn within(&self, r: u32) -> impl Iterator<Item = usize> + '_ {
        self.order
            .iter()
            .copied()
            .take_while(move |h| self.dist[h] <= r)
    }

    /// Faces at exactly distance `k`.
    pub fn sphere(&self, k: u32) -> impl Iterator<Item = usize> + '_ {
        self.order
            .iter()
            .copied()
            .filter(move |&h| self.dist[&h] == k)
    }
}

/// Geodesic interval between two faces, split into layers by distance
/// from the first endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeodesicInterval {
    pub from: usize,
    pub to: usize,
    /// `layers[k]` = members at distance k from `from`, sorted.
    pub layers: Vec<Vec<usize>>,
}

impl GeodesicInterval {
    pub fn distance(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.layers.iter().flatten().copied()
    }

    pub fn contains(&self, f: usize) -> bool {
        self.layers.iter().any(|l| l.binary_search(&f).is_ok())
    }

    /// max_k |B_k(from) ∩ B_{n−k}(to)|, which equals the widest layer.
    pub fn width(&self) -> usize {
        self.layers.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Sphere decomposition around a center with forward/backward degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereStructure {
    pub center: usize,
    pub radius: usize,
    /// `spheres[n]` = S_n, sorted.
    pub spheres: Vec<Vec<usize>>,
    /// face → (|f|₊, |f|₋, same-sphere neighbours), for faces of B_R.
    pub degrees: HashMap<usize, (usize, usize, usize)>,
}

impl SphereStructure {
    pub fn distance(&self, f: usize) -> Option<usize> {
        self.spheres
            .iter()
            .position(|s| s.binary_search(&f).is_ok())
    }
}

/// Result of enumerating the geodesics between two faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigonEnumeration {
    pub interval: GeodesicInterval,
    pub geodesics: Vec<Vec<usize>>,
    /// For each pair `i < j` of geodesics, the index-wise distances.
    pub pair_spreads: Vec<(usize, usize, Vec<u32>)>,
    /// max over pairs and indices of d(γ_i(k), γ_j(k)).
    pub delta: u32,
}

/// Bigon data of a pair certified by [`FaceMetric::local_bigons`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalBigon {
    pub from: usize,
    pub to: usize,
    pub distance: u32,
    /// max_k |B_k(from) ∩ B_{n−k}(to)| (exact).
    pub certificate: usize,
    /// Upper bound on the largest distance between two faces of one layer
    /// of the interval, i.e. on the bigon spread.
    pub spread_upper: u32,
}

/// Outcome of a lemma-style invariant check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantCheck {
    pub name: &'static str,
    pub checked: usize,
    pub violations: Vec<Vec<usize>>,
}

impl InvariantCheck {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Dual-graph metric over a complex, with a per-source ball cache.
pub struct FaceMetric<'a> {
    x: &'a PolygonalComplex,
    adjacency: Vec<Vec<usize>>,
    closed: Vec<bool>,
    cache: RwLock<HashMap<usize, Arc<Ball>>>,
}

impl<'a> FaceMetric<'a> {
    pub fn new(x: &'a PolygonalComplex) -> Self {
        let adjacency = (0..x.n_faces())
            .into_par_iter()
            .map(|f| {
                let mut n: Vec<usize> = x.built_neighbors(f).collect();
                n.sort_unstable();
                n.dedup();
                n
            })
            .collect();
        let closed = (0..x.n_faces()).map(|f| x.neighbors_built(f)).collect();
        FaceMetric {
            x,
            adjacency,
            closed,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn complex(&self) -> &'a PolygonalComplex {
        self.x
    }

    /// Built neighbours of a face, sorted.
    pub fn neighbors(&self, f: usize) -> &[usize] {
        &self.adjacency[f]
    }

    pub fn is_adjacent(&self, f: usize, g: usize) -> bool {
        self.adjacency[f].binary_search(&g).is_ok()
    }

    /// BFS ball of the given radius (cached; larger cached balls are reused).
    pub fn ball(&self, f: usize, radius: u32) -> Arc<Ball> {
        if let Some(b) = self.cache.read().unwrap().get(&f) {
            if b.radius >= radius || b.exhausted {
                return b.clone();
            }
        }
        let b = Arc::new(self.compute_ball(f, radius));
        let mut cache = self.cache.write().unwrap();
        let entry = cache.entry(f).or_insert_with(|| b.clone());
        if entry.radius < b.radius {
            *entry = b.clone();
        }
        b
    }

    /// BFS without touching the cache.
    pub fn compute_ball(&self, f: usize, radius: u32) -> Ball {
        let mut dist = HashMap::new();
        dist.insert(f, 0u32);
        let mut order = vec![f];
        let mut closed_below = u32::MAX;
        let mut truncated = false;
        let mut head = 0;
        while head < order.len() {
            let h = order[head];
            head += 1;
            let d = dist[&h];
            if !self.closed[h] {
                closed_below = closed_below.min(d);
            }
            if d == radius {
                truncated |= self.adjacency[h].iter().any(|g| !dist.contains_key(g));
                continue;
            }
            for &g in &self.adjacency[h] {
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(g) {
                    e.insert(d + 1);
                    order.push(g);
                }
            }
        }
        let exhausted = !truncated;
        if closed_below == u32::MAX && truncated {
            // every face found is closed, but nothing is known past the rim
            closed_below = radius.saturating_add(1);
        }
        Ball {
            source: f,
            radius,
            order,
            dist,
            closed_below,
            exhausted,
        }
    }

    /// Certified distance between two built faces.
    pub fn distance(&self, f: usize, g: usize) -> Result<u32> {
        let mut radius = 4u32;
        loop {
            let b = self.ball(f, radius);
            if let Some(d) = b.get(g) {
                return if b.distance_exact(d) {
                    Ok(d)
                } else {
                    Err(Error::Untrusted {
                        face: f,
                        context: format!("distance to face {g} not certified"),
                    })
                };
            }
            if b.exhausted {
                return if b.fully_closed() {
                    Err(Error::Disconnected(f, g))
                } else {
                    Err(Error::Untrusted {
                        face: f,
                        context: format!("face {g} not reached inside built region"),
                    })
                };
            }
            if !b.set_exact(radius) {
                return Err(Error::Untrusted {
                    face: f,
                    context: format!("face {g} beyond certified radius"),
                });
            }
            radius *= 2;
        }
    }

    /// Geodesic interval {h : d(f,h)+d(h,g) = d(f,g)}.
    pub fn interval(&self, f: usize, g: usize) -> Result<GeodesicInterval> {
        let n = self.distance(f, g)?;
        let b = self.ball(f, n);
        self.interval_in_ball(&b, g)
    }

    /// Interval computed by tracing d_f-decreasing paths back from `g`.
    pub fn interval_in_ball(&self, b: &Ball, g: usize) -> Result<GeodesicInterval> {
        let n = b.get(g).ok_or(Error::Untrusted {
            face: g,
            context: "outside ball".into(),
        })?;
        if !b.distance_exact(n) {
            return Err(Error::Untrusted {
                face: b.source,
                context: format!("interval to {g} not certified"),
            });
        }
        Ok(self.trace_interval(b, g, n))
    }

    fn trace_interval(&self, b: &Ball, g: usize, n: u32) -> GeodesicInterval {
        let mut layers = vec![Vec::new(); n as usize + 1];
        layers[n as usize].push(g);
        let mut seen = HashSet::from([g]);
        for k in (1..=n as usize).rev() {
            let mut next = Vec::new();
            for &h in &layers[k] {
                for &p in &self.adjacency[h] {
                    if b.get(p) == Some(k as u32 - 1) && seen.insert(p) {
                        next.push(p);
                    }
                }
            }
            next.sort_unstable();
            layers[k - 1] = next;
        }
        GeodesicInterval {
            from: b.source,
            to: g,
            layers,
        }
    }

    /// Every pair f < g of B_r(o) with d(f,g) ≤ `max_d`, with its exact
    /// interval width and an upper bound on its bigon spread.
    ///
    /// Along a path of length L ≤ `max_d` between faces of B_r(o), every
    /// step has an end within ⌊(L−1)/2⌋ of the nearer endpoint, so a
    /// trusted B_{r+⌊(max_d−1)/2⌋}(o) makes every such step a built
    /// adjacency: distances and intervals up to `max_d` are exact. Layer
    /// distances are measured in the built graph, whose paths are real, so
    /// they bound the true spread from above.
    pub fn local_bigons(&self, o: usize, r: usize, max_d: u32) -> Result<Vec<LocalBigon>> {
        let reach = r + (max_d.saturating_sub(1) / 2) as usize;
        self.trusted_ball(o, reach)?;
        let inner = self.ball(o, r as u32);
        let faces: Vec<usize> = inner.within(r as u32).collect();
        let mut out: Vec<LocalBigon> = faces
            .par_iter()
            .flat_map_iter(|&f| {
                let b = self.compute_ball(f, max_d);
                let mut rows = Vec::new();
                for g in b.within(max_d) {
                    if g <= f || inner.get(g).is_none() {
                        continue;
                    }
                    let n = b.get(g).unwrap();
                    let iv = self.trace_interval(&b, g, n);
                    let mut spread = 0;
                    for layer in &iv.layers {
                        for (i, &a) in layer.iter().enumerate() {
                            if layer.len() > i + 1 {
                                let ba = self.compute_ball(a, n);
                                for &c in &layer[i + 1..] {
                                    spread = spread.max(ba.get(c).unwrap_or(u32::MAX));
                                }
                            }
                        }
                    }
                    rows.push(LocalBigon {
                        from: f,
                        to: g,
                        distance: n,
                        certificate: iv.width(),
                        spread_upper: spread,
                    });
                }
                rows
            })
            .collect();
        out.sort_unstable_by_key(|b| (b.from, b.to));
        Ok(out)
    }

    /// Requires every face of B_R(o) to be trusted and returns that ball.
    pub fn trusted_ball(&self, o: usize, radius: usize) -> Result<Arc<Ball>> {
        let b = self.ball(o, radius as u32);
        for h in b.within(radius as u32) {
            if !self.x.is_trusted(h) {
                return Err(Error::Untrusted {
                    face: h,
                    context: format!("inside B_{radius} of face {o}"),
                });
            }
        }
        Ok(b)
    }

    /// S_0..S_R around `o` with forward/backward/same-sphere degrees.
    pub fn spheres(&self, o: usize, radius: usize) -> Result<SphereStructure> {
        let b = self.trusted_ball(o, radius)?;
        let mut spheres = vec![Vec::new(); radius + 1];
        for h in b.within(radius as u32) {
            spheres[b.get(h).unwrap() as usize].push(h);
        }
        for s in &mut spheres {
            s.sort_unstable();
        }
        let mut degrees = HashMap::with_capacity(b.order.len());
        for h in b.within(radius as u32) {
            let d = b.get(h).unwrap();
            let (mut plus, mut minus, mut same) = (0, 0, 0);
            for &g in &self.adjacency[h] {
                // trusted faces have every neighbour built; anything outside
                // the ball lies on S_{R+1}
                match b.get(g) {
                    Some(e) if e == d => same += 1,
                    Some(e) if e + 1 == d => minus += 1,
                    _ => plus += 1,
                }
            }
            degrees.insert(h, (plus, minus, same));
        }
        Ok(SphereStructure {
            center: o,
            radius,
            spheres,
            degrees,
        })
    }

    /// Faces of B_{R−1}(o) with no forward neighbour.
    pub fn cut_locus(&self, o: usize, radius: usize) -> Result<Vec<usize>> {
        let s = self.spheres(o, radius)?;
        let mut cut: Vec<usize> = s.spheres[..radius]
            .iter()
            .flatten()
            .copied()
            .filter(|h| s.degrees[h].0 == 0)
            .collect();
        cut.sort_unstable();
        Ok(cut)
    }

    /// max_k |B_k(f) ∩ B_{n−k}(g)| with n = d(f,g).
    pub fn bigon_certificate(&self, f: usize, g: usize) -> Result<usize> {
        Ok(self.interval(f, g)?.width())
    }

    /// Number of geodesics from `from` to `to` through the interval.
    pub fn count_geodesics(&self, iv: &GeodesicInterval) -> u128 {
        let mut counts: HashMap<usize, u128> = HashMap::from([(iv.from, 1)]);
        for k in 1..iv.layers.len() {
            for &h in &iv.layers[k] {
                let c = iv.layers[k - 1]
                    .iter()
                    .filter(|&&p| self.is_adjacent(p, h))
                    .map(|p| counts[p])
                    .fold(0u128, u128::saturating_add);
                counts.insert(h, c);
            }
        }
        counts[&iv.to]
    }

    /// All geodesics between `f` and `g` (at most `cap`) with their
    /// index-wise spreads.
    pub fn enumerate_bigons(&self, f: usize, g: usize, cap: usize) -> Result<BigonEnumeration> {
        let iv = self.interval(f, g)?;
        let count = self.count_geodesics(&iv);
        if count > cap as u128 {
            return Err(Error::CapExceeded {
                what: "geodesic enumeration",
                needed: count,
                cap: cap as u128,
            });
        }
        let mut geodesics = Vec::new();
        let mut path = vec![f];
        self.extend_geodesics(&iv, &mut path, &mut geodesics);
        geodesics.sort();

        // distances between members of the same layer
        let mut layer_dist: HashMap<(usize, usize), u32> = HashMap::new();
        for layer in &iv.layers {
            for (i, &a) in layer.iter().enumerate() {
                for &b in &layer[i + 1..] {
                    let d = self.distance(a, b)?;
                    layer_dist.insert((a, b), d);
                }
            }
        }
        let lookup = |a: usize, b: usize| -> u32 {
            if a == b {
                0
            } else {
                layer_dist[&(a.min(b), a.max(b))]
            }
        };
        let mut pair_spreads = Vec::new();
        for i in 0..geodesics.len() {
            for j in i + 1..geodesics.len() {
                let s: Vec<u32> = geodesics[i]
                    .iter()
                    .zip(&geodesics[j])
                    .map(|(&a, &b)| lookup(a, b))
                    .collect();
                pair_spreads.push((i, j, s));
            }
        }
        let delta = layer_dist.values().copied().max().unwrap_or(0);
        Ok(BigonEnumeration {
            interval: iv,
            geodesics,
            pair_spreads,
            delta,
        })
    }

    fn extend_geodesics(
        &self,
        iv: &GeodesicInterval,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let k = path.len();
        if k == iv.layers.len() {
            out.push(path.clone());
            return;
        }
        let last = *path.last().unwrap();
        for &h in &iv.layers[k] {
            if self.is_adjacent(last, h) {
                path.push(h);
                self.extend_geodesics(iv, path, out);
                path.pop();
            }
        }
    }

    /// Pairwise certified distances of a sample, as a dense matrix.
    ///
    /// With `center = Some(o)`, the sample must lie in B_r(o) and B_{2r}(o)
    /// must consist of faces with all neighbours built; then every geodesic
    /// between sample faces runs through such faces and all distances are
    /// exact. Without a center each pair is certified from its own ball.
    pub fn distance_matrix(
        &self,
        sample: &[usize],
        center: Option<usize>,
    ) -> Result<Vec<Vec<u32>>> {
        let mut per_pair = true;
        let mut radius = 0u32;
        if let Some(o) = center {
            let far = self.ball(o, u32::MAX);
            for &s in sample {
                let d = far.get(s).ok_or(Error::Disconnected(o, s))?;
                radius = radius.max(d);
            }
            let inner = self.ball(o, 2 * radius);
            if inner.within(2 * radius).all(|h| self.closed[h]) && inner.set_exact(radius) {
                per_pair = false;
            }
        }
        let rows: Result<Vec<Vec<u32>>> = sample
            .par_iter()
            .map(|&a| {
                let b = self.compute_ball(a, if per_pair { u32::MAX } else { 2 * radius });
                sample
                    .iter()
                    .map(|&c| match b.get(c) {
                        Some(d) if !per_pair || b.distance_exact(d) => Ok(d),
                        Some(_) => Err(Error::Untrusted {
                            face: a,
                            context: format!("distance to {c} not certified"),
                        }),
                        None if b.fully_closed() => Err(Error::Disconnected(a, c)),
                        None => Err(Error::Untrusted {
                            face: a,
                            context: format!("face {c} not reached"),
                        }),
                    })
                    .collect()
            })
            .collect();
        rows
    }

    /// Four-point hyperbolicity constant of a sample.
    pub fn four_point_delta(
        &self,
        sample: &[usize],
        center: Option<usize>,
        budget: u128,
    ) -> Result<Ratio<i64>> {
        let n = sample.len() as u128;
        let quads = if n >= 4 {
            n * (n - 1) * (n - 2) * (n - 3) / 24
        } else {
            0
        };
        if quads > budget {
            return Err(Error::CapExceeded {
                what: "four-point quadruples",
                needed: quads,
                cap: budget,
            });
        }
        let d = self.distance_matrix(sample, center)?;
        Ok(four_point_delta_of_matrix(&d))
    }

    /// d(f,g) = d_Σ(f,g) for faces of Σ ∩ B_r(o); requires certified distances
    /// among B_r(o) (see [`Self::distance_matrix`]).
    pub fn check_apartment_distances(
        &self,
        apartment: &Apartment,
        o: usize,
        r: usize,
    ) -> Result<InvariantCheck> {
        let b = self.ball(o, r as u32);
        let faces: Vec<usize> = b
            .within(r as u32)
            .filter(|&h| apartment.contains(h))
            .collect();
        let dx = self.distance_matrix(&faces, Some(o))?;
        let mut violations = Vec::new();
        for (i, &f) in faces.iter().enumerate() {
            let ds = self.apartment_bfs(apartment, f);
            for (j, &g) in faces.iter().enumerate().skip(i + 1) {
                if ds.get(&g) != Some(&dx[i][j]) {
                    violations.push(vec![f, g]);
                }
            }
        }
        Ok(InvariantCheck {
            name: "apartment-distance-agreement",
            checked: faces.len(),
            violations,
        })
    }

    fn apartment_bfs(&self, apartment: &Apartment, f: usize) -> HashMap<usize, u32> {
        let mut dist = HashMap::from([(f, 0u32)]);
        let mut q = VecDeque::from([f]);
        while let Some(h) = q.pop_front() {
            let d = dist[&h];
            for &g in &self.adjacency[h] {
                if apartment.contains(g) && !dist.contains_key(&g) {
                    dist.insert(g, d + 1);
                    q.push_back(g);
                }
            }
        }
        dist
    }

    /// For any two apartments, their common faces inside the trusted ball
    /// B_R(o) are connected through common faces (possibly leaving the ball
    /// but staying in the built complex).
    pub fn check_apartment_intersections(
        &self,
        apartments: &[Apartment],
        o: usize,
        radius: usize,
    ) -> Result<InvariantCheck> {
        let b = self.trusted_ball(o, radius)?;
        let mut violations = Vec::new();
        let mut checked = 0;
        for i in 0..apartments.len() {
            for j in i + 1..apartments.len() {
                let (a, c) = (&apartments[i], &apartments[j]);
                let common: Vec<usize> = b
                    .within(radius as u32)
                    .filter(|&h| a.contains(h) && c.contains(h))
                    .collect();
                if common.len() < 2 {
                    continue;
                }
                checked += 1;
                let mut seen = HashSet::from([common[0]]);
                let mut q = VecDeque::from([common[0]]);
                while let Some(h) = q.pop_front() {
                    for &g in &self.adjacency[h] {
                        if a.contains(g) && c.contains(g) && seen.insert(g) {
                            q.push_back(g);
                        }
                    }
                }
                if let Some(&bad) = common.iter().find(|h| !seen.contains(h)) {
                    violations.push(vec![i, j, common[0], bad]);
                }
            }
        }
        Ok(InvariantCheck {
            name: "apartment-intersection-connected",
            checked,
            violations,
        })
    }

    /// The three clauses on faces sharing an edge with a face and one of its
    /// forward / same-sphere / backward neighbours, on B_{R−1}(o).
    pub fn check_sphere_structure(&self, o: usize, radius: usize) -> Result<InvariantCheck> {
        let s = self.spheres(o, radius)?;
        let dist = |h: usize| s.distance(h).unwrap_or(radius + 1);
        let mut violations = Vec::new();
        let mut checked = 0;
        for n in 0..radius {
            for &f in &s.spheres[n] {
                for &e in self.x.face_edges(f) {
                    let others: Vec<usize> = self
                        .x
                        .edge_faces(e)
                        .iter()
                        .copied()
                        .filter(|&g| g != f)
                        .collect();
                    for &nb in &others {
                        let dn = dist(nb);
                        for &g in &others {
                            if g == nb {
                                continue;
                            }
                            checked += 1;
                            let dg = dist(g);
                            let ok = if dn == n + 1 {
                                dg == n + 1
                            } else if dn == n {
                                dg == n || dg + 1 == n
                            } else {
                                dg == n
                            };
                            if !ok {
                                violations.push(vec![f, nb, g]);
                            }
                        }
                    }
                }
            }
        }
        Ok(InvariantCheck {
            name: "sphere-structure",
            checked,
            violations,
        })
    }
}

/// max over quadruples of (largest − second largest pair sum)/2.
pub fn four_point_delta_of_matrix(d: &[Vec<u32>]) -> Ratio<i64> {
    let n = d.len();
    let best = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = 0u32;
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in k + 1..n {
                        let a = d[i][j] + d[k][l];
                        let b = d[i][k] + d[j][l];
                        let c = d[i][l] + d[j][k];
                        let (hi, mid) = if a >= b {
                            if b >= c {
                                (a, b)
                            } else if a >= c {
                                (a, c)
                            } else {
                                (c, a)
                            }
                        } else if a >= c {
                            (b, a)
                        } else if b >= c {
                            (b, c)
                        } else {
                            (c, b)
                        };
                        best = best.max(hi - mid);
                    }
                }
            }
            best
        })
        .max()
        .unwrap_or(0);
    Ratio::new(best as i64, 2)
}
