use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use super::Colex;

/// One broken colex invariant, with the offending indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    EmptyLattice,
    ColorCountMismatch { faces: usize, colors: usize },
    ColorOutOfRange { face: usize, color: u8 },
    VertexOutOfRange { face: usize, vertex: usize },
    RepeatedVertexInFace { face: usize, vertex: usize },
    OddFace { face: usize, size: usize },
    FaceTooSmall { face: usize, size: usize },
    VertexFaceDegree { vertex: usize, faces: usize },
    VertexEdgeDegree { vertex: usize, edges: usize },
    EdgeFaceCount { edge: (usize, usize), faces: usize },
    FaceOverlap { faces: (usize, usize), shared: usize },
    AdjacentFacesSameColor { faces: (usize, usize), color: u8 },
    VertexColors { vertex: usize, colors: Vec<u8> },
    OddVertexCount { vertices: usize },
    EdgeCount { edges: usize, expected: usize },
    EulerCharacteristic { chi: i64 },
    FaceCountIdentity { faces: usize, expected: i64 },
    Disconnected { components: usize },
    NonOrientable,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            EmptyLattice => write!(f, "lattice has no vertices or faces"),
            ColorCountMismatch { faces, colors } => {
                write!(f, "face color count {colors} does not match face count {faces}")
            }
            ColorOutOfRange { face, color } => write!(f, "face {face} has color {color} outside {{0,1,2}}"),
            VertexOutOfRange { face, vertex } => write!(f, "face {face} references vertex {vertex} out of range"),
            RepeatedVertexInFace { face, vertex } => write!(f, "face {face} repeats vertex {vertex}"),
            OddFace { face, size } => write!(f, "face with odd vertex count: face {face} has {size} vertices"),
            FaceTooSmall { face, size } => write!(f, "face {face} has {size} vertices, fewer than 4"),
            VertexFaceDegree { vertex, faces } => {
                write!(f, "vertex degree: vertex {vertex} lies on {faces} faces, expected 3")
            }
            VertexEdgeDegree { vertex, edges } => {
                write!(f, "vertex degree: vertex {vertex} has {edges} edges, expected 3")
            }
            EdgeFaceCount { edge, faces } => {
                write!(f, "edge ({}, {}) borders {faces} faces, expected 2", edge.0, edge.1)
            }
            FaceOverlap { faces, shared } => write!(
                f,
                "face overlap size {shared}: faces {} and {} must share 0 or 2 vertices",
                faces.0, faces.1
            ),
            AdjacentFacesSameColor { faces, color } => write!(
                f,
                "face coloring: adjacent faces {} and {} both have color {color}",
                faces.0, faces.1
            ),
            VertexColors { vertex, colors } => {
                write!(f, "face coloring: faces around vertex {vertex} have colors {colors:?}")
            }
            OddVertexCount { vertices } => write!(f, "vertex count {vertices} is odd"),
            EdgeCount { edges, expected } => write!(f, "edge count {edges} differs from 3V/2 = {expected}"),
            EulerCharacteristic { chi } => write!(f, "Euler characteristic {chi} is odd or exceeds 2"),
            FaceCountIdentity { faces, expected } => {
                write!(f, "face count {faces} differs from (V - 4g)/2 + 2 = {expected}")
            }
            Disconnected { components } => write!(f, "lattice has {components} connected components"),
            NonOrientable => write!(f, "surface is not orientable"),
        }
    }
}

/// Outcome of [`Colex::validate`]: empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// True if any violation satisfies the predicate.
    pub fn any(&self, pred: impl Fn(&Violation) -> bool) -> bool {
        self.violations.iter().any(pred)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

pub(super) fn validate(c: &Colex) -> ValidationReport {
    let mut out = Vec::new();
    let n = c.vertex_count;

    if n == 0 || c.faces.is_empty() {
        out.push(Violation::EmptyLattice);
        return ValidationReport { violations: out };
    }
    if c.face_colors.len() != c.faces.len() {
        out.push(Violation::ColorCountMismatch {
            faces: c.faces.len(),
            colors: c.face_colors.len(),
        });
    }
    for (face, &color) in c.face_colors.iter().enumerate() {
        if color > 2 {
            out.push(Violation::ColorOutOfRange { face, color });
        }
    }

    // Structural checks on individual faces. Anything referencing missing
    // vertices makes the remaining checks meaningless.
    let mut structurally_sound = true;
    for (fi, face) in c.faces.iter().enumerate() {
        let mut seen = HashMap::new();
        for &v in face {
            if v >= n {
                out.push(Violation::VertexOutOfRange { face: fi, vertex: v });
                structurally_sound = false;
            } else if seen.insert(v, ()).is_some() {
                out.push(Violation::RepeatedVertexInFace { face: fi, vertex: v });
                structurally_sound = false;
            }
        }
        if face.len() % 2 == 1 {
            out.push(Violation::OddFace {
                face: fi,
                size: face.len(),
            });
        }
        if face.len() < 4 {
            out.push(Violation::FaceTooSmall {
                face: fi,
                size: face.len(),
            });
        }
    }
    if !structurally_sound {
        return ValidationReport { violations: out };
    }

    let color = |f: usize| c.face_colors.get(f).copied();

    // vertex -> faces
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (fi, face) in c.faces.iter().enumerate() {
        for &v in face {
            incident[v].push(fi);
        }
    }
    for (v, fs) in incident.iter().enumerate() {
        if fs.len() != 3 {
            out.push(Violation::VertexFaceDegree {
                vertex: v,
                faces: fs.len(),
            });
        } else if let (Some(a), Some(b), Some(d)) = (color(fs[0]), color(fs[1]), color(fs[2])) {
            let mut cs = vec![a, b, d];
            cs.sort_unstable();
            if cs != [0, 1, 2] {
                out.push(Violation::VertexColors { vertex: v, colors: cs });
            }
        }
    }

    // edge -> faces, with the direction each face traverses it
    let mut edge_faces: HashMap<(usize, usize), Vec<(usize, bool)>> = HashMap::new();
    for (fi, face) in c.faces.iter().enumerate() {
        for k in 0..face.len() {
            let (a, b) = (face[k], face[(k + 1) % face.len()]);
            edge_faces.entry((a.min(b), a.max(b))).or_default().push((fi, a < b));
        }
    }
    let mut edge_list: Vec<_> = edge_faces.keys().copied().collect();
    edge_list.sort_unstable();
    let mut neighbor_count = vec![0usize; n];
    let mut manifold = true;
    for e in &edge_list {
        neighbor_count[e.0] += 1;
        neighbor_count[e.1] += 1;
        let fs = &edge_faces[e];
        if fs.len() != 2 {
            manifold = false;
            out.push(Violation::EdgeFaceCount {
                edge: *e,
                faces: fs.len(),
            });
            continue;
        }
        let (f, g) = (fs[0].0.min(fs[1].0), fs[0].0.max(fs[1].0));
        if let (Some(cf), Some(cg)) = (color(f), color(g)) {
            if cf == cg {
                let v = Violation::AdjacentFacesSameColor {
                    faces: (f, g),
                    color: cf,
                };
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
    }
    for (v, &d) in neighbor_count.iter().enumerate() {
        if d != 3 {
            out.push(Violation::VertexEdgeDegree { vertex: v, edges: d });
        }
    }

    // pairwise face overlaps, gathered through shared vertices
    let mut shared: HashMap<(usize, usize), usize> = HashMap::new();
    for fs in &incident {
        for i in 0..fs.len() {
            for j in i + 1..fs.len() {
                let key = (fs[i].min(fs[j]), fs[i].max(fs[j]));
                *shared.entry(key).or_default() += 1;
            }
        }
    }
    let mut overlaps: Vec<_> = shared.into_iter().filter(|&(_, k)| k != 2).collect();
    overlaps.sort_unstable();
    for (faces, k) in overlaps {
        out.push(Violation::FaceOverlap { faces, shared: k });
    }

    let edges = edge_list.len();
    if n % 2 == 1 {
        out.push(Violation::OddVertexCount { vertices: n });
    }
    if edges * 2 != 3 * n {
        out.push(Violation::EdgeCount {
            edges,
            expected: 3 * n / 2,
        });
    }
    let chi = n as i64 - edges as i64 + c.faces.len() as i64;
    if chi % 2 != 0 || chi > 2 {
        out.push(Violation::EulerCharacteristic { chi });
    } else {
        let genus = (2 - chi) / 2;
        let expected = (n as i64 - 4 * genus) / 2 + 2;
        if (n as i64 - 4 * genus) % 2 == 0 && expected != c.faces.len() as i64 {
            out.push(Violation::FaceCountIdentity {
                faces: c.faces.len(),
                expected,
            });
        }
    }

    let components = count_components(n, &edge_list);
    if components > 1 {
        out.push(Violation::Disconnected { components });
    }

    if manifold && !is_orientable(c.faces.len(), &edge_faces) {
        out.push(Violation::NonOrientable);
    }

    ValidationReport { violations: out }
}

fn count_components(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = n;
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            components -= 1;
        }
    }
    components
}

/// Tries to orient every face so that each edge is traversed in opposite
/// directions by its two faces.
fn is_orientable(face_count: usize, edge_faces: &HashMap<(usize, usize), Vec<(usize, bool)>>) -> bool {
    let mut adjacency: Vec<Vec<(usize, bool)>> = vec![Vec::new(); face_count];
    for fs in edge_faces.values() {
        let [(f, df), (g, dg)] = [fs[0], fs[1]];
        // same traversal direction forces opposite orientations
        let flip = df == dg;
        adjacency[f].push((g, flip));
        adjacency[g].push((f, flip));
    }
    let mut orientation: Vec<Option<bool>> = vec![None; face_count];
    for start in 0..face_count {
        if orientation[start].is_some() {
            continue;
        }
        orientation[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            let of = orientation[f].unwrap();
            for &(g, flip) in &adjacency[f] {
                let want = of ^ flip;
                match orientation[g] {
                    None => {
                        orientation[g] = Some(want);
                        queue.push_back(g);
                    }
                    Some(og) if og != want => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colex::generate_hexagonal_twisted;

    fn violations(c: &Colex) -> Vec<Violation> {
        c.validate().violations
    }

    #[test]
    fn triangle_face_is_odd() {
        let c = Colex::new_unchecked(3, vec![vec![0, 1, 2]], vec![0]);
        let v = violations(&c);
        assert!(v.contains(&Violation::OddFace { face: 0, size: 3 }));
        assert!(c.validate().to_string().contains("face with odd vertex count"));
    }

    #[test]
    fn single_shared_vertex_is_flagged() {
        // two squares glued at vertex 0 only
        let c = Colex::new_unchecked(7, vec![vec![0, 1, 2, 3], vec![0, 4, 5, 6]], vec![0, 1]);
        assert!(violations(&c).contains(&Violation::FaceOverlap {
            faces: (0, 1),
            shared: 1
        }));
        assert!(c.validate().to_string().contains("face overlap size 1"));
    }

    #[test]
    fn bad_coloring_is_flagged() {
        let good = generate_hexagonal_twisted(3, 3, 1).unwrap();
        let mut colors = good.face_colors().to_vec();
        colors[0] = colors[1];
        let bad = Colex::new_unchecked(good.vertex_count(), good.faces().to_vec(), colors);
        let r = bad.validate();
        assert!(r.any(|v| matches!(v, Violation::AdjacentFacesSameColor { .. })));
        assert!(r.any(|v| matches!(v, Violation::VertexColors { .. })));
    }

    #[test]
    fn out_of_range_vertex_short_circuits() {
        let c = Colex::new_unchecked(2, vec![vec![0, 1, 5, 3]], vec![0]);
        let v = violations(&c);
        assert!(v.contains(&Violation::VertexOutOfRange { face: 0, vertex: 5 }));
    }

    #[test]
    fn empty_lattice() {
        let c = Colex::new_unchecked(0, vec![], vec![]);
        assert_eq!(violations(&c), vec![Violation::EmptyLattice]);
    }

    #[test]
    fn disjoint_union_is_disconnected() {
        let a = generate_hexagonal_twisted(3, 3, 1).unwrap();
        let n = a.vertex_count();
        let mut faces = a.faces().to_vec();
        faces.extend(a.faces().iter().map(|f| f.iter().map(|v| v + n).collect::<Vec<_>>()));
        let mut colors = a.face_colors().to_vec();
        colors.extend_from_slice(a.face_colors());
        let c = Colex::new_unchecked(2 * n, faces, colors);
        assert!(violations(&c).contains(&Violation::Disconnected { components: 2 }));
    }
}
