mod common;

use colorz::colex::{generate, scan_dimensions, Colex, LatticeKind, Violation};
use colorz::Error;

fn cube_faces() -> Vec<Vec<usize>> {
    common::cube().faces().to_vec()
}

fn violations(vertices: usize, faces: Vec<Vec<usize>>, colors: Vec<u8>) -> Vec<Violation> {
    match Colex::new(vertices, faces, colors) {
        Err(Error::InvalidColex(report)) => report.violations,
        other => panic!("expected a validation failure, got {other:?}"),
    }
}

fn cube_colors() -> Vec<u8> {
    common::cube().face_colors().to_vec()
}

#[test]
fn json_round_trip() {
    for (r, c, t) in scan_dimensions(LatticeKind::SquareOctagon, 4, 8, true) {
        let colex = generate(LatticeKind::SquareOctagon, r, c, t).unwrap();
        let parsed: Colex = colex.to_json().parse().unwrap();
        assert_eq!(parsed, colex);
    }
    let prism: Colex = common::prism(5).to_json().parse().unwrap();
    assert_eq!(prism.derived_quantities().genus, 0);
}

#[test]
fn unknown_fields_are_rejected() {
    let text = r#"{"vertex_count": 8, "faces": [], "face_colors": [], "extra": 1}"#;
    assert!(Colex::from_json_unvalidated(text).is_err());
}

#[test]
fn odd_face() {
    let mut faces = cube_faces();
    faces[0].push(8);
    let v = violations(9, faces, cube_colors());
    assert!(
        v.iter().any(|v| matches!(v, Violation::OddFace { face: 0, size: 5 })),
        "{v:?}"
    );
}

#[test]
fn bad_coloring() {
    let mut colors = cube_colors();
    colors[3] = colors[2];
    let v = violations(8, cube_faces(), colors);
    assert!(
        v.iter().any(|v| matches!(v, Violation::AdjacentFacesSameColor { .. })),
        "{v:?}"
    );
}

#[test]
fn single_vertex_overlap() {
    let mut faces = cube_faces();
    faces.push(vec![0, 8, 9, 10]);
    let mut colors = cube_colors();
    colors.push(1);
    let v = violations(11, faces, colors);
    assert!(
        v.iter().any(|v| matches!(v, Violation::FaceOverlap { shared: 1, .. })),
        "{v:?}"
    );
}

#[test]
fn degree_four_vertex() {
    let mut faces = cube_faces();
    let (a, b) = (faces[0][0], faces[0][2]);
    let (c, d) = (faces[1][0], faces[1][2]);
    faces.push(vec![a, b, c, d]);
    let mut colors = cube_colors();
    colors.push(0);
    let v = violations(8, faces, colors);
    assert!(
        v.iter()
            .any(|v| matches!(v, Violation::VertexFaceDegree { faces: 4, .. })),
        "{v:?}"
    );
}

#[test]
fn prisms_are_spheres() {
    for n in 2..=10 {
        let q = common::prism(n).derived_quantities();
        assert_eq!(
            (q.vertices, q.faces, q.genus, q.encoded_qubits),
            (4 * n, 2 * n + 2, 0, 0)
        );
    }
}
