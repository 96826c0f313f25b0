//! Axiom validators producing reports instead of errors.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::apartment::Apartment;
use crate::complex::PolygonalComplex;
use crate::error::Result;
use crate::link::{classify_link, LinkGraph};
use crate::metric::FaceMetric;

/// Cap on offending tuples kept per report.
const MAX_OFFENDERS: usize = 256;

/// Outcome of checking one axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub axiom: String,
    pub pass: bool,
    /// Offending cell tuples; nonempty exactly when `pass` is false.
    pub offending: Vec<Vec<usize>>,
    pub scope_note: String,
}

impl ValidationReport {
    fn new(axiom: &str, mut offending: Vec<Vec<usize>>, scope_note: String) -> Self {
        offending.sort();
        offending.dedup();
        offending.truncate(MAX_OFFENDERS);
        ValidationReport {
            axiom: axiom.to_string(),
            pass: offending.is_empty(),
            offending,
            scope_note,
        }
    }
}

/// Global shape of a validated tessellation region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfaceKind {
    /// Finite, closed, connected, Euler characteristic 2.
    Spherical,
    /// Finite and closed with another Euler characteristic.
    ClosedOther,
    /// A checked region inside a larger (possibly infinite) surface.
    PlanarRegion,
    /// Some check failed.
    Invalid,
}

/// Reports for T1–T4 and the disk-neighbourhood surface check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TessellationCheck {
    pub reports: Vec<ValidationReport>,
    pub kind: SurfaceKind,
}

impl TessellationCheck {
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }

    pub fn report(&self, axiom: &str) -> Option<&ValidationReport> {
        self.reports.iter().find(|r| r.axiom == axiom)
    }
}

/// Checks the tessellation axioms on the trusted part of `scope`.
///
/// Edge and vertex degrees are taken inside the scope, so an apartment of a
/// thick complex is checked as a surface in its own right.
pub fn validate_tessellation(x: &PolygonalComplex, scope: &[usize]) -> TessellationCheck {
    let sigma = Apartment::new(scope.to_vec());
    let checked: Vec<usize> = sigma
        .faces()
        .iter()
        .copied()
        .filter(|&f| x.is_trusted(f))
        .collect();
    let note = format!(
        "checked {} of {} scope faces (trusted part); attaching maps are homeomorphisms by the face-cycle representation",
        checked.len(),
        sigma.len()
    );

    // T1: every boundary edge of a checked face lies in exactly two scope faces
    let mut t1 = Vec::new();
    let mut checked_edges = BTreeSet::new();
    let mut checked_vertices = BTreeSet::new();
    for &f in &checked {
        checked_edges.extend(x.face_edges(f).iter().copied());
        checked_vertices.extend(x.face(f).iter().copied());
    }
    for &e in &checked_edges {
        let faces: Vec<usize> = x
            .edge_faces(e)
            .iter()
            .copied()
            .filter(|&g| sigma.contains(g))
            .collect();
        if faces.len() != 2 {
            let mut t = vec![e];
            t.extend(faces);
            t1.push(t);
        }
    }

    // T2: two faces meet in nothing, a vertex, or one edge with its endpoints
    let mut t2 = Vec::new();
    for &f in &checked {
        let vf: HashSet<usize> = x.face(f).iter().copied().collect();
        let ef: HashSet<usize> = x.face_edges(f).iter().copied().collect();
        let mut others = BTreeSet::new();
        for &v in x.face(f) {
            others.extend(sigma.faces_at(x, v).filter(|&g| g != f));
        }
        for g in others {
            let sv = x.face(g).iter().filter(|v| vf.contains(v)).count();
            let se = x.face_edges(g).iter().filter(|e| ef.contains(e)).count();
            if !(se == 0 && sv == 1 || se == 1 && sv == 2) {
                t2.push(vec![f.min(g), f.max(g)]);
            }
        }
    }

    // T3: boundaries are closed simple edge cycles
    let mut t3 = Vec::new();
    for &f in &checked {
        let c = x.face(f);
        let simple = c.iter().collect::<HashSet<_>>().len() == c.len();
        let closed = (0..c.len()).all(|i| x.edge_between(c[i], c[(i + 1) % c.len()]).is_some());
        if !simple || !closed || c.len() < 3 {
            t3.push(vec![f]);
        }
    }

    // T4: local finiteness of the vertices of checked faces
    let mut t4 = Vec::new();
    for &v in &checked_vertices {
        if x.true_vertex_degree(v).is_err() {
            t4.push(vec![v]);
        }
    }

    // disk neighbourhoods: each vertex link inside the scope is one cycle
    let mut disk = Vec::new();
    for &v in &checked_vertices {
        if !x.vertex_is_complete(v) {
            continue;
        }
        if scope_link_cycle(x, &sigma, v).is_none() {
            disk.push(vec![v]);
        }
    }
    // connectivity of the checked faces through scope faces
    if let Some(&start) = checked.first() {
        let mut seen = HashSet::from([start]);
        let mut q = VecDeque::from([start]);
        while let Some(h) = q.pop_front() {
            for g in x.built_neighbors(h) {
                if sigma.contains(g) && seen.insert(g) {
                    q.push_back(g);
                }
            }
        }
        if let Some(&bad) = checked.iter().find(|f| !seen.contains(f)) {
            disk.push(vec![start, bad]);
        }
    }

    let all_checked = checked.len() == sigma.len();
    let pass_all = [&t1, &t2, &t3, &t4, &disk].iter().all(|v| v.is_empty());
    let kind = if !pass_all {
        SurfaceKind::Invalid
    } else if all_checked && x.is_complete() && !checked.is_empty() {
        let edges: BTreeSet<usize> = checked
            .iter()
            .flat_map(|&f| x.face_edges(f).iter().copied())
            .collect();
        let chi = checked_vertices.len() as i64 - edges.len() as i64 + checked.len() as i64;
        if chi == 2 {
            SurfaceKind::Spherical
        } else {
            SurfaceKind::ClosedOther
        }
    } else {
        SurfaceKind::PlanarRegion
    };
    let surface_note = format!(
        "planarity proxy: every complete vertex link is a single cycle and the region is connected; {}",
        match kind {
            SurfaceKind::Spherical => "finite closed region with Euler characteristic 2: spherical",
            SurfaceKind::ClosedOther => "finite closed region, not a sphere",
            SurfaceKind::PlanarRegion => "region of a larger surface",
            SurfaceKind::Invalid => "failed",
        }
    );
    TessellationCheck {
        reports: vec![
            ValidationReport::new("T1", t1, note.clone()),
            ValidationReport::new("T2", t2, note.clone()),
            ValidationReport::new("T3", t3, note.clone()),
            ValidationReport::new("T4", t4, note),
            ValidationReport::new("surface", disk, surface_note),
        ],
        kind,
    }
}

/// Length of the link of `v` inside the scope, if it is a single cycle.
fn scope_link_cycle(x: &PolygonalComplex, sigma: &Apartment, v: usize) -> Option<usize> {
    let nodes: Vec<usize> = x
        .vertex_edges(v)
        .iter()
        .copied()
        .filter(|&e| sigma.edge_degree(x, e) > 0)
        .collect();
    let pos = |e: usize| nodes.iter().position(|&n| n == e);
    let mut edges = Vec::new();
    for f in sigma.faces_at(x, v) {
        let c = x.face(f);
        let fe = x.face_edges(f);
        let i = c.iter().position(|&w| w == v).unwrap();
        edges.push((pos(fe[(i + c.len() - 1) % c.len()])?, pos(fe[i])?));
    }
    let g = LinkGraph::from_edges(nodes.len(), &edges);
    // a simple link graph with one edge per face: the face count must match
    (edges.len() == nodes.len()).then_some(())?;
    classify_link(&g).cycle_length
}

/// Checks the apartment-system axioms on B_R(o).
pub fn validate_pcps(
    x: &PolygonalComplex,
    apartments: &[Apartment],
    radius: usize,
    o: usize,
) -> Result<Vec<ValidationReport>> {
    let metric = FaceMetric::new(x);
    let ball = metric.trusted_ball(o, radius)?;
    let faces: Vec<usize> = ball.within(radius as u32).collect();

    // PCPS1: each pair of faces of B_R lies in a common apartment
    let words = apartments.len().div_ceil(64);
    let masks: Vec<Vec<u64>> = faces
        .iter()
        .map(|&f| {
            let mut m = vec![0u64; words];
            for (i, a) in apartments.iter().enumerate() {
                if a.contains(f) {
                    m[i / 64] |= 1 << (i % 64);
                }
            }
            m
        })
        .collect();
    let mut p1 = Vec::new();
    for i in 0..faces.len() {
        for j in i..faces.len() {
            if !masks[i].iter().zip(&masks[j]).any(|(a, b)| a & b != 0) {
                p1.push(vec![faces[i].min(faces[j]), faces[i].max(faces[j])]);
            }
        }
    }

    // PCPS2: intervals between faces of Σ ∩ B_{⌊R/2⌋} stay in Σ
    let half = radius / 2;
    let inner: Vec<usize> = ball.within(half as u32).collect();
    let mut p2 = Vec::new();
    let mut intervals = Vec::new();
    for (i, &f) in inner.iter().enumerate() {
        for &g in &inner[i + 1..] {
            intervals.push((f, g, metric.interval(f, g)?));
        }
    }
    for (ai, a) in apartments.iter().enumerate() {
        for (f, g, iv) in &intervals {
            if a.contains(*f) && a.contains(*g) {
                if let Some(h) = iv.members().find(|&h| !a.contains(h)) {
                    p2.push(vec![ai, *f, *g, h]);
                }
            }
        }
    }

    // PCPS3: every apartment is a planar tessellation
    let mut p3 = Vec::new();
    for (ai, a) in apartments.iter().enumerate() {
        let check = validate_tessellation(x, a.faces());
        for r in check.reports.iter().filter(|r| !r.pass) {
            for t in &r.offending {
                let mut row = vec![ai];
                row.extend(t);
                p3.push(row);
            }
        }
    }

    let n_ap = apartments.len();
    Ok(vec![
        ValidationReport::new(
            "PCPS1",
            p1,
            format!("all face pairs of B_{radius}(face {o}) against {n_ap} apartments"),
        ),
        ValidationReport::new(
            "PCPS2",
            p2,
            format!("interval criterion for face pairs of B_{half}(face {o}); rows are [apartment, f, g, escaping face]"),
        ),
        ValidationReport::new(
            "PCPS3",
            p3,
            "tessellation checks on the trusted part of each apartment; rows are [apartment, cells...]".to_string(),
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::book::gen_book;
    use crate::generators::lattice::cubic_lattice;
    use crate::generators::product_trees::gen_product_trees;
    use crate::generators::regular::gen_regular_tessellation;
    use crate::generators::spherical::{gen_spherical, SphericalKind};

    #[test]
    fn square_lattice_ball_passes() {
        let x = gen_regular_tessellation(4, 4, 3).unwrap();
        let all: Vec<usize> = (0..x.n_faces()).collect();
        let c = validate_tessellation(&x, &all);
        assert!(c.all_pass(), "{:?}", c.reports);
        assert_eq!(c.kind, SurfaceKind::PlanarRegion);
        assert_eq!(c.reports.len(), 5);
    }

    #[test]
    fn cube_is_spherical() {
        let x = gen_spherical(SphericalKind::Cube).unwrap();
        let c = validate_tessellation(&x, &(0..6).collect::<Vec<_>>());
        assert!(c.all_pass());
        assert_eq!(c.kind, SurfaceKind::Spherical);
    }

    #[test]
    fn third_page_breaks_t1_on_spine() {
        let x = gen_book(3, 2).unwrap();
        let all: Vec<usize> = (0..x.n_faces()).collect();
        let c = validate_tessellation(&x, &all);
        let t1 = c.report("T1").unwrap();
        assert!(!t1.pass);
        for row in &t1.offending {
            assert_eq!(row.len(), 4, "spine edge with three cells: {row:?}");
            assert_eq!(x.true_edge_degree(row[0]).unwrap(), 3);
        }
        // each page pair on its own is fine
        for a in Apartment::declared(&x) {
            assert!(validate_tessellation(&x, a.faces()).all_pass());
        }
    }

    #[test]
    fn single_apartment_tessellation_satisfies_pcps() {
        let x = gen_regular_tessellation(5, 4, 3).unwrap();
        let aps = vec![Apartment::whole(&x)];
        let reports = validate_pcps(&x, &aps, 3, x.center().unwrap()).unwrap();
        assert!(reports.iter().all(|r| r.pass), "{reports:?}");
    }

    #[test]
    fn cubic_lattice_fails_pcps1() {
        let x = cubic_lattice(4);
        let aps = Apartment::declared(&x);
        let reports = validate_pcps(&x, &aps, 2, x.center().unwrap()).unwrap();
        let p1 = &reports[0];
        assert!(!p1.pass);
        // every reported pair genuinely shares no apartment
        for pair in &p1.offending {
            assert!(!aps
                .iter()
                .any(|a| a.contains(pair[0]) && a.contains(pair[1])));
        }
    }

    #[test]
    fn product_of_trees_apartments_pass() {
        let x = gen_product_trees(3, 3, 3, 0, None).unwrap();
        let aps = Apartment::declared(&x);
        let reports = validate_pcps(&x, &aps, 3, x.center().unwrap()).unwrap();
        assert!(reports[0].pass, "{:?}", reports[0]);
        assert!(reports[1].pass, "{:?}", reports[1]);
        assert!(reports[2].pass, "{:?}", reports[2]);
    }
}
