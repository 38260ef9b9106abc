#![allow(dead_code)]

use colorz::colex::{generate, Colex, LatticeKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Prism over a `2n`-gon: two `2n`-gon caps (color 0) joined by `2n` squares
/// alternating colors 1 and 2. Genus 0, `V = 4n`, `F = 2n + 2`.
pub fn prism(n: usize) -> Colex {
    let m = 2 * n;
    let top = |i: usize| i % m;
    let bottom = |i: usize| m + i % m;
    let mut faces = vec![(0..m).map(top).collect::<Vec<_>>(), (0..m).rev().map(bottom).collect()];
    let mut colors = vec![0, 0];
    for i in 0..m {
        faces.push(vec![top(i + 1), top(i), bottom(i), bottom(i + 1)]);
        colors.push(1 + (i % 2) as u8);
    }
    Colex::new(2 * m, faces, colors).expect("prism is a valid colex")
}

pub fn cube() -> Colex {
    prism(2)
}

/// Torus lattices with at most 22 faces, both families.
pub fn small_tori() -> Vec<(String, Colex)> {
    use LatticeKind::*;
    let dims = [
        (Hexagonal, 3, 3, 1),
        (Hexagonal, 1, 12, 4),
        (Hexagonal, 1, 12, 7),
        (Hexagonal, 2, 6, 3),
        (Hexagonal, 4, 3, 0),
        (Hexagonal, 5, 3, 1),
        (Hexagonal, 2, 9, 3),
        (Hexagonal, 2, 9, 6),
        (Hexagonal, 3, 6, 1),
        (Hexagonal, 3, 6, 4),
        (Hexagonal, 6, 3, 0),
        (Hexagonal, 7, 3, 1),
        (SquareOctagon, 1, 8, 3),
        (SquareOctagon, 1, 8, 5),
        (SquareOctagon, 2, 4, 2),
        (SquareOctagon, 1, 10, 3),
        (SquareOctagon, 1, 10, 7),
    ];
    dims.iter()
        .map(|&(kind, r, c, t)| (format!("{kind:?} {r}x{c} t{t}"), generate(kind, r, c, t).unwrap()))
        .collect()
}

/// Tori plus genus-0 prisms.
pub fn oracle_lattices() -> Vec<(String, Colex)> {
    let mut out = small_tori();
    out.extend((2..=6).map(|n| (format!("prism {}", 2 * n), prism(n))));
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_couplings(rng: &mut impl Rng, n: usize, max: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-max..=max)).collect()
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}
