//! Versioned JSON complex file.
//!
//! ```json
//! {"version":1,"vertices":4,"edges":[[0,1],[1,2],[2,3],[0,3]],
//!  "faces":[[0,1,2,3]],"apartments":[],"truncation":null}
//! ```
//!
//! Emission is deterministic and `parse(emit(X)) == X` holds exactly.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::complex::{build_complex, PolygonalComplex, RawComplex, Truncation};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexFile {
    version: u32,
    vertices: usize,
    edges: Vec<[usize; 2]>,
    faces: Vec<Vec<usize>>,
    #[serde(default)]
    apartments: Vec<Vec<usize>>,
    #[serde(default)]
    truncation: Option<Truncation>,
}

/// Serialises a complex to the file format.
pub fn emit(x: &PolygonalComplex) -> String {
    let raw = x.raw();
    let file = ComplexFile {
        version: FORMAT_VERSION,
        vertices: raw.vertices,
        edges: raw.edges.clone(),
        faces: raw.faces.clone(),
        apartments: raw.apartments.clone(),
        truncation: raw.truncation.clone(),
    };
    let mut s = serde_json::to_string(&file).expect("complex serialisation cannot fail");
    s.push('\n');
    s
}

/// Parses and validates a complex file.
pub fn parse(text: &str) -> Result<PolygonalComplex> {
    let file: ComplexFile = serde_json::from_str(text)?;
    if file.version != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported version {} (expected {FORMAT_VERSION})",
            file.version
        )));
    }
    build_complex(RawComplex {
        vertices: file.vertices,
        edges: file.edges,
        faces: file.faces,
        apartments: file.apartments,
        truncation: file.truncation,
    })
}

pub fn read_file(path: impl AsRef<Path>) -> Result<PolygonalComplex> {
    parse(&std::fs::read_to_string(path)?)
}

pub fn write_file(path: impl AsRef<Path>, x: &PolygonalComplex) -> Result<()> {
    std::fs::write(path, emit(x))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Degree;
    use crate::generators::regular::gen_regular_tessellation;

    #[test]
    fn round_trip_is_identity() {
        let x = gen_regular_tessellation(5, 4, 2).unwrap();
        let text = emit(&x);
        let y = parse(&text).unwrap();
        assert_eq!(x, y);
        assert_eq!(text, emit(&y));
    }

    #[test]
    fn infinite_override_round_trips() {
        let text = r#"{"version":1,"vertices":3,"edges":[[0,1],[1,2],[0,2]],"faces":[[0,1,2]],"apartments":[],"truncation":{"trusted_faces":[],"true_degrees":{"edges":{"0":"inf"},"faces":{"0":9}}}}"#;
        let x = parse(text).unwrap();
        let t = x.truncation().unwrap();
        assert_eq!(t.true_degrees.edges[&0], Degree::Infinite);
        assert_eq!(parse(&emit(&x)).unwrap(), x);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse("{"), Err(Error::Json(_))));
        assert!(matches!(
            parse(r#"{"version":2,"vertices":0,"edges":[],"faces":[]}"#),
            Err(Error::Format(_))
        ));
        assert!(matches!(
            parse(r#"{"version":1,"vertices":1,"edges":[[0,3]],"faces":[]}"#),
            Err(Error::DanglingIndex { .. })
        ));
    }
}
