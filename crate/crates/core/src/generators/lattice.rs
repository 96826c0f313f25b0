//! Square lattices: a planar grid fixture with cell coordinates, and the
//! unit-square complex of ℤ³ with coordinate-plane apartments.

use std::collections::HashMap;

use crate::complex::{complex_from_faces, PolygonalComplex, Truncation};

/// Cells `[-n, n)²` of the square grid, addressable by coordinates.
pub struct SquareGrid {
    pub n: i64,
    pub complex: PolygonalComplex,
    cells: HashMap<(i64, i64), usize>,
}

impl SquareGrid {
    pub fn new(n: i64) -> Self {
        let side = 2 * n + 1;
        let vid = |x: i64, y: i64| ((x + n) * side + (y + n)) as usize;
        let mut faces = Vec::new();
        let mut cells = HashMap::new();
        let mut trusted = Vec::new();
        for x in -n..n {
            for y in -n..n {
                cells.insert((x, y), faces.len());
                if x > -n && x < n - 1 && y > -n && y < n - 1 {
                    trusted.push(faces.len());
                }
                faces.push(vec![
                    vid(x, y),
                    vid(x + 1, y),
                    vid(x + 1, y + 1),
                    vid(x, y + 1),
                ]);
            }
        }
        let center = cells[&(0, 0)];
        let complex = complex_from_faces((side * side) as usize, faces)
            .and_then(|c| {
                c.with_truncation(Some(Truncation {
                    trusted_faces: trusted,
                    center: Some(center),
                    ..Default::default()
                }))
            })
            .expect("grid is a valid complex");
        SquareGrid { n, complex, cells }
    }

    pub fn cell(&self, x: i64, y: i64) -> usize {
        self.cells[&(x, y)]
    }
}

/// Unit squares of ℤ³ inside the box `[-n, n]³`; apartments are the
/// coordinate planes. Squares whose vertices are all strictly inside the
/// box are trusted.
pub fn cubic_lattice(n: i64) -> PolygonalComplex {
    let side = 2 * n + 1;
    let vid = |p: [i64; 3]| (((p[0] + n) * side + (p[1] + n)) * side + (p[2] + n)) as usize;
    let inside = |p: [i64; 3]| p.iter().all(|c| c.abs() < n);
    let mut faces = Vec::new();
    let mut trusted = Vec::new();
    let mut planes: HashMap<(usize, i64), Vec<usize>> = HashMap::new();
    let mut center = 0;
    for a in -n..=n {
        for b in -n..=n {
            for c in -n..=n {
                let p = [a, b, c];
                // normal axis k, square spanned by the other two axes
                for k in (0..3).rev() {
                    let (i, j) = ((k + 1) % 3, (k + 2) % 3);
                    if p[i] == n || p[j] == n {
                        continue;
                    }
                    let mut q1 = p;
                    q1[i] += 1;
                    let mut q2 = q1;
                    q2[j] += 1;
                    let mut q3 = p;
                    q3[j] += 1;
                    let corners = [p, q1, q2, q3];
                    if p == [0, 0, 0] && k == 2 {
                        center = faces.len();
                    }
                    if corners.iter().all(|&q| inside(q)) {
                        trusted.push(faces.len());
                    }
                    planes.entry((k, p[k])).or_default().push(faces.len());
                    faces.push(corners.iter().map(|&q| vid(q)).collect());
                }
            }
        }
    }
    let mut keys: Vec<_> = planes.keys().copied().collect();
    keys.sort_unstable();
    let apartments = keys
        .into_iter()
        .map(|k| planes.remove(&k).unwrap())
        .collect();
    complex_from_faces((side * side * side) as usize, faces)
        .and_then(|c| {
            c.with_truncation(Some(Truncation {
                trusted_faces: trusted,
                center: Some(center),
                ..Default::default()
            }))
        })
        .and_then(|c| c.with_apartments(apartments))
        .expect("cubic lattice is a valid complex")
}
