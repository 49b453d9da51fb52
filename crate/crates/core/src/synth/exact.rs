// SPDX-License-Identifier: Apache-2.0

//! Exact NCV unitaries.
//!
//! Every product of NOT, CNOT, CV and CV† has entries in `Z[i][1/2]`, so a
//! matrix is stored as Gaussian-integer numerators over a shared `2^exp`
//! denominator, kept in lowest terms. Phase classes are compared through
//! `U * conj(z)`, where `z` is the first nonzero entry in row-major order:
//! that product is identical for `U` and `e^{it} U` and stays exact.

use std::hash::{DefaultHasher, Hash, Hasher};

use crate::quantum::{PrimKind, Primitive};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct DyadicMatrix {
    width: usize,
    dim: usize,
    exp: u32,
    re: Vec<i64>,
    im: Vec<i64>,
}

/// Digest of a phase class.
pub(crate) type ClassKey = u128;

#[inline]
fn mul_one_plus_i(a: i64, b: i64) -> (i64, i64) {
    (a - b, a + b)
}

#[inline]
fn mul_one_minus_i(a: i64, b: i64) -> (i64, i64) {
    (a + b, b - a)
}

impl DyadicMatrix {
    pub fn identity(width: usize) -> Self {
        let dim = 1usize << width;
        let mut re = vec![0; dim * dim];
        for i in 0..dim {
            re[i * dim + i] = 1;
        }
        Self {
            width,
            dim,
            exp: 0,
            re,
            im: vec![0; dim * dim],
        }
    }

    pub fn from_permutation(width: usize, map: &[u8]) -> Self {
        let dim = 1usize << width;
        let mut re = vec![0; dim * dim];
        for (col, &row) in map.iter().enumerate() {
            re[row as usize * dim + col] = 1;
        }
        Self {
            width,
            dim,
            exp: 0,
            re,
            im: vec![0; dim * dim],
        }
    }

    fn tmask(&self, line: usize) -> usize {
        1 << (self.width - 1 - line)
    }

    fn control_set(&self, index: usize, p: &Primitive) -> bool {
        p.control.is_none_or(|c| index & self.tmask(c) != 0)
    }

    fn normalize(&mut self) {
        while self.exp > 0 && self.re.iter().chain(&self.im).all(|&v| v & 1 == 0) {
            self.re
                .iter_mut()
                .chain(self.im.iter_mut())
                .for_each(|v| *v >>= 1);
            self.exp -= 1;
        }
    }

    /// `self <- P * self` (the primitive acts after the current circuit).
    pub fn apply_left(&mut self, p: &Primitive) {
        let n = self.dim;
        let tmask = self.tmask(p.target);
        match p.kind {
            PrimKind::X | PrimKind::CX => {
                for r0 in (0..n).filter(|r| r & tmask == 0) {
                    if self.control_set(r0, p) {
                        let r1 = r0 | tmask;
                        for c in 0..n {
                            self.re.swap(r0 * n + c, r1 * n + c);
                            self.im.swap(r0 * n + c, r1 * n + c);
                        }
                    }
                }
            }
            PrimKind::CV | PrimKind::CVDG => {
                self.re
                    .iter_mut()
                    .chain(self.im.iter_mut())
                    .for_each(|v| *v <<= 1);
                for r0 in (0..n).filter(|r| r & tmask == 0) {
                    if !self.control_set(r0, p) {
                        continue;
                    }
                    let r1 = r0 | tmask;
                    for c in 0..n {
                        let (i0, i1) = (r0 * n + c, r1 * n + c);
                        // Undo the blanket doubling on the two mixed rows.
                        let (a0, b0) = (self.re[i0] >> 1, self.im[i0] >> 1);
                        let (a1, b1) = (self.re[i1] >> 1, self.im[i1] >> 1);
                        let (new0, new1) = mix(p.kind, (a0, b0), (a1, b1));
                        (self.re[i0], self.im[i0]) = new0;
                        (self.re[i1], self.im[i1]) = new1;
                    }
                }
                self.exp += 1;
                self.normalize();
            }
        }
    }

    /// `self <- self * P` (the primitive acts before the current circuit).
    pub fn apply_right(&mut self, p: &Primitive) {
        let n = self.dim;
        let tmask = self.tmask(p.target);
        match p.kind {
            PrimKind::X | PrimKind::CX => {
                for c0 in (0..n).filter(|c| c & tmask == 0) {
                    if self.control_set(c0, p) {
                        let c1 = c0 | tmask;
                        for r in 0..n {
                            self.re.swap(r * n + c0, r * n + c1);
                            self.im.swap(r * n + c0, r * n + c1);
                        }
                    }
                }
            }
            PrimKind::CV | PrimKind::CVDG => {
                self.re
                    .iter_mut()
                    .chain(self.im.iter_mut())
                    .for_each(|v| *v <<= 1);
                for c0 in (0..n).filter(|c| c & tmask == 0) {
                    if !self.control_set(c0, p) {
                        continue;
                    }
                    let c1 = c0 | tmask;
                    for r in 0..n {
                        let (i0, i1) = (r * n + c0, r * n + c1);
                        let (a0, b0) = (self.re[i0] >> 1, self.im[i0] >> 1);
                        let (a1, b1) = (self.re[i1] >> 1, self.im[i1] >> 1);
                        // V and V† are symmetric, so column mixing uses the
                        // same kernel as row mixing.
                        let (new0, new1) = mix(p.kind, (a0, b0), (a1, b1));
                        (self.re[i0], self.im[i0]) = new0;
                        (self.re[i1], self.im[i1]) = new1;
                    }
                }
                self.exp += 1;
                self.normalize();
            }
        }
    }

    /// Canonical representative of the phase class, in lowest terms.
    fn phase_canonical(&self) -> (u32, Vec<i64>, Vec<i64>) {
        let first = (0..self.re.len())
            .find(|&i| self.re[i] != 0 || self.im[i] != 0)
            .expect("unitary matrices have a nonzero entry");
        let (zr, zi) = (self.re[first], self.im[first]);
        let mut re = Vec::with_capacity(self.re.len());
        let mut im = Vec::with_capacity(self.im.len());
        for (&a, &b) in self.re.iter().zip(&self.im) {
            // (a + bi)(zr - zi i)
            re.push(a * zr + b * zi);
            im.push(b * zr - a * zi);
        }
        let mut exp = 2 * self.exp;
        while exp > 0 && re.iter().chain(&im).all(|&v| v & 1 == 0) {
            re.iter_mut().chain(im.iter_mut()).for_each(|v| *v >>= 1);
            exp -= 1;
        }
        (exp, re, im)
    }

    pub fn class_key(&self) -> ClassKey {
        let (exp, re, im) = self.phase_canonical();
        let mut lo = DefaultHasher::new();
        let mut hi = DefaultHasher::new();
        0u8.hash(&mut lo);
        1u8.hash(&mut hi);
        for h in [&mut lo, &mut hi] {
            exp.hash(h);
            re.hash(h);
            im.hash(h);
        }
        (u128::from(hi.finish()) << 64) | u128::from(lo.finish())
    }

    /// If the matrix is a permutation up to global phase, its code map.
    pub fn as_permutation(&self) -> Option<Vec<u8>> {
        let (exp, re, im) = self.phase_canonical();
        if exp != 0 || im.iter().any(|&v| v != 0) {
            return None;
        }
        let n = self.dim;
        let mut map = vec![0u8; n];
        for (col, slot) in map.iter_mut().enumerate() {
            let mut hit = None;
            for row in 0..n {
                match re[row * n + col] {
                    0 => {}
                    1 if hit.is_none() => hit = Some(row),
                    _ => return None,
                }
            }
            *slot = hit? as u8;
        }
        Some(map)
    }
}

type GaussMul = fn(i64, i64) -> (i64, i64);

#[inline]
fn mix(kind: PrimKind, x0: (i64, i64), x1: (i64, i64)) -> ((i64, i64), (i64, i64)) {
    // V = 1/2 [[1+i, 1-i], [1-i, 1+i]], V† = 1/2 [[1-i, 1+i], [1+i, 1-i]].
    // The 1/2 is carried by the exponent.
    let (diag, off): (GaussMul, GaussMul) = match kind {
        PrimKind::CV => (mul_one_plus_i, mul_one_minus_i),
        _ => (mul_one_minus_i, mul_one_plus_i),
    };
    let (d0, o1) = (diag(x0.0, x0.1), off(x1.0, x1.1));
    let (o0, d1) = (off(x0.0, x0.1), diag(x1.0, x1.1));
    ((d0.0 + o1.0, d0.1 + o1.1), (o0.0 + d1.0, o0.1 + d1.1))
}
