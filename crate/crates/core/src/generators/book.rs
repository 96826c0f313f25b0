//! Books: k square-tiled half-planes glued along a common boundary line.

use std::collections::HashMap;

use crate::complex::{complex_from_faces, PolygonalComplex, Truncation};
use crate::error::{Error, Result};
use crate::metric::FaceMetric;

/// Book with `k` pages, trusted ball of radius R around a cell touching
/// the spine. Apartments are all unions of two pages.
pub fn gen_book(k: usize, radius: usize) -> Result<PolygonalComplex> {
    if k < 2 {
        return Err(Error::Infeasible("a book needs at least 2 pages".into()));
    }
    let w = (radius + 3) as i64;
    let h = (radius + 3) as i64;
    let mut ids: HashMap<(usize, i64, i64), usize> = HashMap::new();
    let mut id = |page: usize, x: i64, y: i64| -> usize {
        let key = if y == 0 { (0, x, 0) } else { (page, x, y) };
        let next = ids.len();
        *ids.entry(key).or_insert(next)
    };
    let mut faces = Vec::new();
    let mut page_faces = vec![Vec::new(); k];
    let mut center = None;
    for (page, pf) in page_faces.iter_mut().enumerate() {
        for x in -w..w {
            for y in 0..h {
                if page == 0 && x == 0 && y == 0 {
                    center = Some(faces.len());
                }
                pf.push(faces.len());
                faces.push(vec![
                    id(page, x, y),
                    id(page, x + 1, y),
                    id(page, x + 1, y + 1),
                    id(page, x, y + 1),
                ]);
            }
        }
    }
    let interior: Vec<bool> = {
        let mut v = vec![false; ids.len()];
        for (&(_, x, y), &i) in &ids {
            v[i] = x.abs() < w && y < h;
        }
        v
    };
    let center = center.unwrap();
    let x = complex_from_faces(ids.len(), faces)?;
    let trusted = {
        let m = FaceMetric::new(&x);
        let b = m.compute_ball(center, radius as u32);
        let mut t: Vec<usize> = b.within(radius as u32).collect();
        t.sort_unstable();
        t
    };
    if let Some(&f) = trusted
        .iter()
        .find(|&&f| x.face(f).iter().any(|&v| !interior[v]))
    {
        return Err(Error::Infeasible(format!(
            "trusted cell {f} touches the cut-off rim"
        )));
    }
    let mut apartments = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let mut a = page_faces[i].clone();
            a.extend(&page_faces[j]);
            apartments.push(a);
        }
    }
    x.with_truncation(Some(Truncation {
        trusted_faces: trusted,
        center: Some(center),
        radius: Some(radius),
        ..Default::default()
    }))?
    .with_apartments(apartments)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spine_edges_have_k_cells() {
        let x = gen_book(3, 2).unwrap();
        let o = x.center().unwrap();
        let spine = x.face_edges(o)[0];
        assert_eq!(x.true_edge_degree(spine).unwrap(), 3);
        assert_eq!(x.apartments().len(), 3);
    }

    #[test]
    fn two_pages_make_a_plane() {
        let x = gen_book(2, 3).unwrap();
        for f in x.trusted_faces() {
            for &v in x.face(f) {
                assert_eq!(x.true_vertex_degree(v).unwrap(), 4);
            }
            assert_eq!(x.true_face_degree(f).unwrap(), 4);
        }
    }
}
