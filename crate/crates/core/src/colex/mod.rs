//! Two-dimensional color-code lattices (2-colexes).
//!
//! A colex is stored as a vertex count plus a list of faces, each face giving
//! its vertices in cyclic boundary order, and one color in `{0, 1, 2}` per
//! face. Edges are never stored; they are the consecutive vertex pairs along
//! face boundaries. Genus is always derived from Euler's formula.

mod generators;
mod validate;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

pub use generators::{
    generate, generate_hexagonal, generate_hexagonal_twisted, generate_square_octagon, generate_square_octagon_twisted,
    scan_dimensions, LatticeKind,
};
pub use validate::{ValidationReport, Violation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Colex {
    vertex_count: usize,
    faces: Vec<Vec<usize>>,
    face_colors: Vec<u8>,
}

/// Counting data of a valid colex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedQuantities {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub chi: i64,
    pub genus: usize,
    /// Logical qubits encoded by the color code, `4 * genus`.
    pub encoded_qubits: usize,
}

impl Colex {
    /// Builds a colex and validates it.
    pub fn new(vertex_count: usize, faces: Vec<Vec<usize>>, face_colors: Vec<u8>) -> Result<Self> {
        let c = Self::new_unchecked(vertex_count, faces, face_colors);
        let report = c.validate();
        if report.is_ok() {
            Ok(c)
        } else {
            Err(Error::InvalidColex(report))
        }
    }

    /// Builds a colex without validation. Operations other than
    /// [`Colex::validate`] assume a valid colex.
    pub fn new_unchecked(vertex_count: usize, faces: Vec<Vec<usize>>, face_colors: Vec<u8>) -> Self {
        Self {
            vertex_count,
            faces,
            face_colors,
        }
    }

    /// Parses the JSON file format without validating.
    pub fn from_json_unvalidated(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("colex serialization cannot fail")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn face_colors(&self) -> &[u8] {
        &self.face_colors
    }

    /// Distinct undirected edges, each as `(min, max)`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = self
            .faces
            .iter()
            .flat_map(|f| {
                (0..f.len()).map(move |k| {
                    let (a, b) = (f[k], f[(k + 1) % f.len()]);
                    (a.min(b), a.max(b))
                })
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    pub fn validate(&self) -> ValidationReport {
        validate::validate(self)
    }

    /// `V x F` vertex-face incidence matrix; column order is face order.
    pub fn incidence_matrix(&self) -> BitMatrix {
        let mut b = BitMatrix::zeros(self.vertex_count, self.faces.len());
        for (f, face) in self.faces.iter().enumerate() {
            for &v in face {
                b.set(v, f, true);
            }
        }
        b
    }

    pub fn derived_quantities(&self) -> DerivedQuantities {
        let vertices = self.vertex_count;
        let edges = self.edges().len();
        let faces = self.faces.len();
        let chi = vertices as i64 - edges as i64 + faces as i64;
        let genus = ((2 - chi) / 2).max(0) as usize;
        DerivedQuantities {
            vertices,
            edges,
            faces,
            chi,
            genus,
            encoded_qubits: 4 * genus,
        }
    }

    /// For every vertex, the three faces containing it, in ascending order.
    pub fn vertex_face_triples(&self) -> Vec<[usize; 3]> {
        let mut incident: Vec<Vec<usize>> = vec![Vec::with_capacity(3); self.vertex_count];
        for (f, face) in self.faces.iter().enumerate() {
            for &v in face {
                incident[v].push(f);
            }
        }
        incident
            .into_iter()
            .enumerate()
            .map(|(v, mut fs)| {
                fs.sort_unstable();
                fs.as_slice()
                    .try_into()
                    .unwrap_or_else(|_| panic!("vertex {v} lies on {} faces, expected 3", fs.len()))
            })
            .collect()
    }
}

impl std::str::FromStr for Colex {
    type Err = Error;

    /// Parses and validates the JSON file format.
    fn from_str(text: &str) -> Result<Self> {
        let c = Self::from_json_unvalidated(text).map_err(|e| Error::Domain(format!("colex json: {e}")))?;
        let report = c.validate();
        if report.is_ok() {
            Ok(c)
        } else {
            Err(Error::InvalidColex(report))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::{self, is_self_orthogonal};

    /// Tetrahedron-like genus-0 colex: the cube. Eight vertices, six square
    /// faces, opposite faces share a color.
    pub(crate) fn cube() -> Colex {
        // vertices: bottom 0..4 (ccw), top 4..8 above them
        let faces = vec![
            vec![0, 1, 2, 3],
            vec![4, 7, 6, 5],
            vec![0, 4, 5, 1],
            vec![2, 6, 7, 3],
            vec![1, 5, 6, 2],
            vec![0, 3, 7, 4],
        ];
        Colex::new(8, faces, vec![0, 0, 1, 1, 2, 2]).unwrap()
    }

    #[test]
    fn cube_is_genus_zero() {
        let c = cube();
        let d = c.derived_quantities();
        assert_eq!(d.genus, 0);
        assert_eq!(d.encoded_qubits, 0);
        assert_eq!(d.faces, d.vertices / 2 + 2);
        assert_eq!(d.edges, 3 * d.vertices / 2);
        let b = c.incidence_matrix();
        assert!(is_self_orthogonal(&b));
        assert_eq!(gf2::rank(&b), d.faces - 2);
    }

    #[test]
    fn incidence_weights() {
        let c = generate_hexagonal_twisted(3, 3, 1).unwrap();
        let b = c.incidence_matrix();
        for v in 0..c.vertex_count() {
            assert_eq!(b.row_weight(v), 3);
        }
        for (f, face) in c.faces().iter().enumerate() {
            assert_eq!(b.column(f).weight(), face.len());
        }
    }

    #[test]
    fn triples_are_colorful_and_double_count() {
        let c = generate_square_octagon_twisted(2, 4, 2).unwrap();
        let triples = c.vertex_face_triples();
        assert_eq!(triples.len(), c.vertex_count());
        let mut appearances = vec![0; c.face_count()];
        for t in &triples {
            assert!(t[0] < t[1] && t[1] < t[2]);
            let mut colors: Vec<u8> = t.iter().map(|&f| c.face_colors()[f]).collect();
            colors.sort_unstable();
            assert_eq!(colors, vec![0, 1, 2]);
            for &f in t {
                appearances[f] += 1;
            }
        }
        for (f, face) in c.faces().iter().enumerate() {
            assert_eq!(appearances[f], face.len());
        }
    }

    #[test]
    fn json_round_trip() {
        let c = generate_hexagonal_twisted(3, 6, 1).unwrap();
        let text = c.to_json();
        let back: Colex = text.parse().unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn loader_rejects_invalid() {
        let text = r#"{"vertex_count": 3, "faces": [[0,1,2]], "face_colors": [0]}"#;
        let err = text.parse::<Colex>().unwrap_err();
        assert!(matches!(err, Error::InvalidColex(_)));
    }
}
