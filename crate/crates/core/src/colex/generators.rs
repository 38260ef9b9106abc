//! Periodic hexagonal and square-octagon lattices on a torus.
//!
//! Both generators tile a `rows x cols` block of unit cells and identify
//! cell `(c, r)` with `(c + cols, r)` and with `(c + shift, r + rows)`.
//! Square cells stack straight up, so the shift is the twist. Hexagonal rows
//! are offset by half a cell to the left per row, so the shift is
//! `twist - floor(rows / 2)`; a zero twist then gives the rectangular
//! (brick-wall) torus whenever `rows` is even. Cells are numbered
//! row-major, `cell = r * cols + c`, and every index below derives from the
//! cell number:
//!
//! * hexagonal: vertices `2*cell` (up) and `2*cell + 1` (down), face `cell`,
//!   face color `(c - r) mod 3`;
//! * square-octagon: vertices `4*cell + {0,1,2,3}` (the right, top, left and
//!   bottom corners of the cell's square), faces `2*cell` (octagon, color
//!   `(c + r) mod 2`) and `2*cell + 1` (square, color 2).
//!
//! The generators never assume a period is admissible. Each output is run
//! through the validator and rejected with the failed invariants otherwise.

use serde::{Deserialize, Serialize};

use super::Colex;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeKind {
    Hexagonal,
    SquareOctagon,
}

struct Torus {
    rows: i64,
    cols: i64,
    twist: i64,
}

impl Torus {
    /// Canonical cell index of the (unwrapped) cell coordinate `(c, r)`.
    fn cell(&self, c: i64, r: i64) -> usize {
        let rr = r.rem_euclid(self.rows);
        let wraps = (r - rr) / self.rows;
        let cc = (c - wraps * self.twist).rem_euclid(self.cols);
        (rr * self.cols + cc) as usize
    }
}

pub fn generate_hexagonal(rows: usize, cols: usize) -> Result<Colex> {
    generate_hexagonal_twisted(rows, cols, 0)
}

pub fn generate_square_octagon(rows: usize, cols: usize) -> Result<Colex> {
    generate_square_octagon_twisted(rows, cols, 0)
}

pub fn generate(kind: LatticeKind, rows: usize, cols: usize, twist: usize) -> Result<Colex> {
    match kind {
        LatticeKind::Hexagonal => generate_hexagonal_twisted(rows, cols, twist),
        LatticeKind::SquareOctagon => generate_square_octagon_twisted(rows, cols, twist),
    }
}

pub fn generate_hexagonal_twisted(rows: usize, cols: usize, twist: usize) -> Result<Colex> {
    let torus = Torus {
        rows: rows as i64,
        cols: cols as i64,
        twist: twist as i64 - (rows / 2) as i64,
    };
    let cells = rows * cols;
    let mut faces = Vec::with_capacity(cells);
    let mut colors = Vec::with_capacity(cells);
    let up = |c: i64, r: i64| 2 * torus.cell(c, r);
    let down = |c: i64, r: i64| 2 * torus.cell(c, r) + 1;
    for r in 0..torus.rows {
        for c in 0..torus.cols {
            faces.push(vec![
                down(c, r - 1),
                up(c, r),
                down(c - 1, r),
                up(c - 1, r),
                down(c - 1, r - 1),
                up(c, r - 1),
            ]);
            colors.push((c - r).rem_euclid(3) as u8);
        }
    }
    finish(Colex::new_unchecked(2 * cells, faces, colors), rows, cols, twist)
}

pub fn generate_square_octagon_twisted(rows: usize, cols: usize, twist: usize) -> Result<Colex> {
    let torus = Torus {
        rows: rows as i64,
        cols: cols as i64,
        twist: twist as i64,
    };
    let cells = rows * cols;
    let corner = |c: i64, r: i64, k: usize| 4 * torus.cell(c, r) + k;
    let (right, top, left, bottom) = (0, 1, 2, 3);
    let mut faces = Vec::with_capacity(2 * cells);
    let mut colors = Vec::with_capacity(2 * cells);
    for r in 0..torus.rows {
        for c in 0..torus.cols {
            faces.push(vec![
                corner(c, r - 1, top),
                corner(c, r, bottom),
                corner(c, r, left),
                corner(c - 1, r, right),
                corner(c - 1, r, bottom),
                corner(c - 1, r - 1, top),
                corner(c - 1, r - 1, right),
                corner(c, r - 1, left),
            ]);
            colors.push((c + r).rem_euclid(2) as u8);
            faces.push(vec![
                corner(c, r, right),
                corner(c, r, top),
                corner(c, r, left),
                corner(c, r, bottom),
            ]);
            colors.push(2);
        }
    }
    finish(Colex::new_unchecked(4 * cells, faces, colors), rows, cols, twist)
}

fn finish(c: Colex, rows: usize, cols: usize, twist: usize) -> Result<Colex> {
    let report = c.validate();
    if !report.is_ok() {
        return Err(Error::InvalidDimensions {
            rows,
            cols,
            twist,
            report,
        });
    }
    debug_assert_eq!(c.derived_quantities().genus, 1);
    Ok(c)
}

/// All `(rows, cols, twist)` with `rows <= max_rows`, `cols <= max_cols` and
/// `twist < cols` that the generator accepts. With `twisted == false` only
/// `twist = 0` is tried.
pub fn scan_dimensions(
    kind: LatticeKind,
    max_rows: usize,
    max_cols: usize,
    twisted: bool,
) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for rows in 1..=max_rows {
        for cols in 1..=max_cols {
            let twists = if twisted { cols } else { 1 };
            for twist in 0..twists {
                if generate(kind, rows, cols, twist).is_ok() {
                    out.push((rows, cols, twist));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2;

    #[test]
    fn smallest_hexagonal_torus() {
        let valid = scan_dimensions(LatticeKind::Hexagonal, 6, 6, false);
        let &(rows, cols, _) = valid.iter().min_by_key(|(r, c, _)| r * c).unwrap();
        assert_eq!((rows, cols), (4, 3));
        let c = generate_hexagonal(rows, cols).unwrap();
        let d = c.derived_quantities();
        assert_eq!(d.vertices, 2 * rows * cols);
        assert_eq!(d.faces, rows * cols);
        assert_eq!(d.genus, 1);
        assert_eq!(d.faces as i64, (d.vertices as i64 - 4) / 2 + 2);
        assert_eq!(gf2::rank(&c.incidence_matrix()), d.faces - 2);
    }

    #[test]
    fn rectangular_hexagonal_needs_even_rows_and_columns_divisible_by_three() {
        // exhaustive over small untwisted periods
        for rows in 1..=12 {
            for cols in 1..=12 {
                let ok = generate_hexagonal(rows, cols).is_ok();
                let expected = rows % 2 == 0 && rows >= 4 && cols % 3 == 0;
                assert_eq!(ok, expected, "{rows}x{cols}");
            }
        }
    }

    #[test]
    fn rejected_dimensions_name_the_invariant() {
        let err = generate_hexagonal(2, 3).unwrap_err();
        let Error::InvalidDimensions { report, .. } = err else {
            panic!("wrong error kind");
        };
        assert!(!report.is_ok());
        let err = generate_hexagonal(4, 4).unwrap_err();
        assert!(err.to_string().contains("face coloring"), "{err}");
    }

    #[test]
    fn square_octagon_faces_and_edges() {
        let c = generate_square_octagon(4, 4).unwrap();
        let d = c.derived_quantities();
        assert_eq!(d.genus, 1);
        assert_eq!(d.edges * 2, 3 * d.vertices);
        assert!(c.faces().iter().all(|f| f.len() == 4 || f.len() == 8));
        assert!(generate_square_octagon(2, 4).is_err());
        assert!(generate_square_octagon(3, 4).is_err());
    }

    #[test]
    fn twisted_tori_extend_the_size_ladder() {
        let hex = scan_dimensions(LatticeKind::Hexagonal, 7, 6, true);
        for dims in [(2, 6, 3), (3, 3, 1), (5, 3, 1), (7, 3, 1)] {
            assert!(hex.contains(&dims), "{dims:?} missing from {hex:?}");
        }
        for &(r, c, t) in &hex {
            let colex = generate_hexagonal_twisted(r, c, t).unwrap();
            assert_eq!(colex.derived_quantities().genus, 1);
        }
    }
}
