//! Stabilizer states in tableau form.
//!
//! The tableau keeps `n` destabilizer rows, `n` stabilizer rows and one
//! scratch row, each a Pauli word `(-1)^sign X^x Z^z` with `x_j = z_j = 1`
//! meaning `Y` on qubit `j`. Words stay Hermitian under Clifford conjugation
//! in this encoding, so one sign bit per row is enough. Measurement follows
//! the destabilizer procedure of Aaronson and Gottesman; when several
//! stabilizers anticommute with the measured `Z`, the lowest-index one is the
//! pivot.

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::{self, BitMatrix, BitVector};

/// Supported single-qubit Clifford gates. `HP` applies `P` first, then `H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    H,
    P,
    Z,
    HP,
}

/// A Hermitian Pauli word `(-1)^sign X(x) Z(z)` (with `Y` where both bits are set).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliWord {
    pub x: BitVector,
    pub z: BitVector,
    pub negative: bool,
}

impl PauliWord {
    pub fn x_type(u: BitVector) -> Self {
        let n = u.len();
        Self {
            x: u,
            z: BitVector::zeros(n),
            negative: false,
        }
    }

    pub fn z_type(v: BitVector) -> Self {
        let n = v.len();
        Self {
            x: BitVector::zeros(n),
            z: v,
            negative: false,
        }
    }

    /// True iff the two words commute (symplectic product zero).
    pub fn commutes_with(&self, other: &PauliWord) -> bool {
        self.x.dot(&other.z) == other.x.dot(&self.z)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    /// words per x (or z) half
    half: usize,
    /// `2 * half` words per row: x half then z half
    stride: usize,
    data: Vec<u64>,
    signs: Vec<bool>,
}

impl Tableau {
    /// The computational basis state `|0...0>`.
    pub fn zero_state(n: usize) -> Self {
        let mut t = Self::blank(n);
        for q in 0..n {
            t.set_x(q, q, true);
            t.set_z(n + q, q, true);
        }
        t
    }

    fn blank(n: usize) -> Self {
        let half = n.div_ceil(64).max(1);
        let stride = 2 * half;
        Self {
            n,
            half,
            stride,
            data: vec![0; (2 * n + 1) * stride],
            signs: vec![false; 2 * n + 1],
        }
    }

    pub fn qubit_count(&self) -> usize {
        self.n
    }

    #[inline]
    fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn x_bit(&self, r: usize, q: usize) -> bool {
        (self.data[r * self.stride + q / 64] >> (q % 64)) & 1 == 1
    }

    fn set_x(&mut self, r: usize, q: usize, v: bool) {
        let w = &mut self.data[r * self.stride + q / 64];
        let m = 1u64 << (q % 64);
        *w = if v { *w | m } else { *w & !m };
    }

    fn set_z(&mut self, r: usize, q: usize, v: bool) {
        let w = &mut self.data[r * self.stride + self.half + q / 64];
        let m = 1u64 << (q % 64);
        *w = if v { *w | m } else { *w & !m };
    }

    fn write_word(&mut self, r: usize, p: &PauliWord) {
        let (half, stride) = (self.half, self.stride);
        let row = &mut self.data[r * stride..(r + 1) * stride];
        row.fill(0);
        row[..p.x.words().len()].copy_from_slice(p.x.words());
        row[half..half + p.z.words().len()].copy_from_slice(p.z.words());
        self.signs[r] = p.negative;
    }

    fn word(&self, r: usize) -> PauliWord {
        let row = self.row(r);
        PauliWord {
            x: BitVector::from_words(self.n, row[..self.half].to_vec()),
            z: BitVector::from_words(self.n, row[self.half..].to_vec()),
            negative: self.signs[r],
        }
    }

    /// The `n` stabilizer generators.
    pub fn stabilizers(&self) -> Vec<PauliWord> {
        (self.n..2 * self.n).map(|r| self.word(r)).collect()
    }

    pub fn destabilizers(&self) -> Vec<PauliWord> {
        (0..self.n).map(|r| self.word(r)).collect()
    }

    /// Replaces row `h` by `row(i) * row(h)`, tracking the sign exactly.
    fn rowsum(&mut self, h: usize, i: usize) {
        let half = self.half;
        let s = self.stride;
        let (src, dst) = if i < h {
            let (lo, hi) = self.data.split_at_mut(h * s);
            (&lo[i * s..(i + 1) * s], &mut hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(i * s);
            (&hi[..s], &mut lo[h * s..(h + 1) * s])
        };
        let mut plus = 0u32;
        let mut minus = 0u32;
        for w in 0..half {
            let (x1, z1) = (src[w], src[half + w]);
            let (x2, z2) = (dst[w], dst[half + w]);
            let y1 = x1 & z1;
            let xo = x1 & !z1;
            let zo = !x1 & z1;
            let p = (y1 & !x2 & z2) | (xo & x2 & z2) | (zo & x2 & !z2);
            let m = (y1 & x2 & !z2) | (xo & !x2 & z2) | (zo & x2 & z2);
            plus += p.count_ones();
            minus += m.count_ones();
            dst[w] ^= x1;
            dst[half + w] ^= z1;
        }
        let total = 2 * u32::from(self.signs[h]) + 2 * u32::from(self.signs[i]) + plus + 4 * half as u32 * 64 - minus;
        // destabilizer phases are irrelevant and may come out imaginary
        debug_assert!(h < self.n || total.is_multiple_of(2));
        self.signs[h] = total % 4 == 2;
    }

    /// Conjugates every row by `gate` on `qubit`, in place.
    pub fn apply(&mut self, qubit: usize, gate: Gate) {
        assert!(qubit < self.n, "qubit {qubit} out of range {}", self.n);
        let word = qubit / 64;
        let mask = 1u64 << (qubit % 64);
        let half = self.half;
        for r in 0..2 * self.n {
            let base = r * self.stride;
            let x = self.data[base + word] & mask != 0;
            let z = self.data[base + half + word] & mask != 0;
            let (nx, nz, flip) = match gate {
                // X -> Z, Z -> X, Y -> -Y
                Gate::H => (z, x, x && z),
                // X -> Y, Y -> -X, Z -> Z
                Gate::P => (x, x ^ z, x && z),
                // X -> -X, Y -> -Y
                Gate::Z => (x, z, x),
                Gate::HP => {
                    // P then H: X -> Y -> -Y, Y -> -X -> -Z, Z -> Z -> X
                    let (px, pz, pf) = (x, x ^ z, x && z);
                    (pz, px, pf ^ (px && pz))
                }
            };
            self.signs[r] ^= flip;
            let xw = &mut self.data[base + word];
            *xw = if nx { *xw | mask } else { *xw & !mask };
            let zw = &mut self.data[base + half + word];
            *zw = if nz { *zw | mask } else { *zw & !mask };
        }
    }

    /// Returns a copy conjugated by `gate` on `qubit`.
    pub fn apply_clifford(&self, qubit: usize, gate: Gate) -> Tableau {
        let mut t = self.clone();
        t.apply(qubit, gate);
        t
    }

    /// Measures qubit `q` in the Z basis, collapsing the state.
    fn measure(&mut self, q: usize, rng: &mut impl Rng) -> bool {
        let n = self.n;
        if let Some(p) = (n..2 * n).find(|&r| self.x_bit(r, q)) {
            for i in 0..2 * n {
                if i != p && self.x_bit(i, q) {
                    self.rowsum(i, p);
                }
            }
            let s = self.stride;
            self.data.copy_within(p * s..(p + 1) * s, (p - n) * s);
            self.signs[p - n] = self.signs[p];
            self.data[p * s..(p + 1) * s].fill(0);
            self.set_z(p, q, true);
            let outcome = rng.gen::<bool>();
            self.signs[p] = outcome;
            outcome
        } else {
            let scratch = 2 * n;
            let s = self.stride;
            self.data[scratch * s..(scratch + 1) * s].fill(0);
            self.signs[scratch] = false;
            for i in 0..n {
                if self.x_bit(i, q) {
                    self.rowsum(scratch, i + n);
                }
            }
            self.signs[scratch]
        }
    }

    /// Draws one computational-basis outcome `x` with probability
    /// `|<x|psi>|^2`, measuring qubits in index order on a private copy.
    pub fn sample_basis(&self, rng: &mut impl Rng) -> BitVector {
        let mut t = self.clone();
        let mut out = BitVector::zeros(self.n);
        for q in 0..self.n {
            if t.measure(q, rng) {
                out.set(q, true);
            }
        }
        out
    }

    /// If `p` (up to sign) lies in the stabilizer group, returns the sign the
    /// group assigns it (`true` for `-1`); otherwise `None`.
    pub fn group_sign(&self, p: &PauliWord) -> Option<bool> {
        let n = self.n;
        let stabs = self.stabilizers();
        if !stabs.iter().all(|s| s.commutes_with(p)) {
            return None;
        }
        let mut t = self.clone();
        let scratch = 2 * n;
        let s = t.stride;
        t.data[scratch * s..(scratch + 1) * s].fill(0);
        t.signs[scratch] = false;
        for i in 0..n {
            if !t.word(i).commutes_with(p) {
                t.rowsum(scratch, i + n);
            }
        }
        let product = t.word(scratch);
        (product.x == p.x && product.z == p.z).then_some(product.negative)
    }

    /// Checks the tableau invariants: stabilizers pairwise commute and are
    /// independent, and each destabilizer anticommutes with exactly its
    /// paired stabilizer.
    pub fn check_invariants(&self) -> bool {
        let n = self.n;
        let stabs = self.stabilizers();
        let destabs = self.destabilizers();
        for i in 0..n {
            for j in 0..n {
                if !stabs[i].commutes_with(&stabs[j]) || !destabs[i].commutes_with(&destabs[j]) {
                    return false;
                }
                if destabs[i].commutes_with(&stabs[j]) == (i == j) {
                    return false;
                }
            }
        }
        let rows: Vec<BitVector> = stabs
            .iter()
            .map(|s| {
                let mut bits = s.x.to_bools();
                bits.extend(s.z.to_bools());
                BitVector::from_bools(&bits)
            })
            .collect();
        gf2::rank(&BitMatrix::from_rows(2 * n, &rows)) == n
    }
}

/// Tableau of the CSS state `|S> ∝ Σ_{s ∈ S} |s>`, where `S` is the column
/// space of the self-orthogonal matrix `b`.
///
/// Stabilizers are `X(u_i)` for the reduced echelon basis `u_i` of `S`,
/// followed by `Z(v_q)` for the matching basis of the orthogonal complement,
/// one per non-pivot qubit `q`. All signs are `+1`.
pub fn css_tableau(b: &BitMatrix) -> Result<Tableau> {
    if !gf2::is_self_orthogonal(b) {
        return Err(Error::NotSelfOrthogonal);
    }
    let n = b.rows();
    let (basis, pivots) = gf2::reduced_row_basis(&b.transpose());
    let mut t = Tableau::blank(n);
    let mut is_pivot = vec![false; n];
    for (i, (u, &p)) in basis.iter().zip(&pivots).enumerate() {
        is_pivot[p] = true;
        t.write_word(n + i, &PauliWord::x_type(u.clone()));
        t.set_z(i, p, true);
    }
    let mut r = basis.len();
    for q in (0..n).filter(|&q| !is_pivot[q]) {
        let mut v = BitVector::unit(n, q);
        for (u, &p) in basis.iter().zip(&pivots) {
            if u.get(q) {
                v.set(p, true);
            }
        }
        t.write_word(n + r, &PauliWord::z_type(v));
        t.set_x(r, q, true);
        r += 1;
    }
    debug_assert_eq!(r, n);
    Ok(t)
}
