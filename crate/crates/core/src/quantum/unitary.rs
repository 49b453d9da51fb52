// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;

use super::{PrimKind, Primitive, QuantumCircuit, QuantumError};
use crate::perm::{code_bit, Permutation};

pub const MAX_UNITARY_WIDTH: usize = 6;

/// Default entrywise tolerance for permutation equivalence.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Dense `2^width x 2^width` complex matrix, row-major. Column `j` is the
/// image of basis state `|j>`.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    width: usize,
    dim: usize,
    entries: Vec<Complex64>,
}

/// `V = ((1+i)/2) I + ((1-i)/2) X`, a square root of NOT.
pub fn v_matrix() -> [[Complex64; 2]; 2] {
    let a = Complex64::new(0.5, 0.5);
    let b = Complex64::new(0.5, -0.5);
    [[a, b], [b, a]]
}

fn kernel(kind: PrimKind) -> [[Complex64; 2]; 2] {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    match kind {
        PrimKind::X | PrimKind::CX => [[zero, one], [one, zero]],
        PrimKind::CV => v_matrix(),
        PrimKind::CVDG => {
            let v = v_matrix();
            [
                [v[0][0].conj(), v[1][0].conj()],
                [v[0][1].conj(), v[1][1].conj()],
            ]
        }
    }
}

impl Unitary {
    pub fn identity(width: usize) -> Result<Self, QuantumError> {
        if width > MAX_UNITARY_WIDTH {
            return Err(QuantumError::TooWide(width));
        }
        let dim = 1 << width;
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Ok(Self {
            width,
            dim,
            entries,
        })
    }

    pub fn from_entries(width: usize, entries: Vec<Complex64>) -> Result<Self, QuantumError> {
        let dim = Self::identity(width)?.dim;
        if entries.len() != dim * dim {
            return Err(QuantumError::DimensionMismatch {
                left: entries.len(),
                right: dim * dim,
            });
        }
        Ok(Self {
            width,
            dim,
            entries,
        })
    }

    pub fn from_permutation(p: &Permutation) -> Result<Self, QuantumError> {
        let mut u = Self::identity(p.width())?;
        u.entries
            .iter_mut()
            .for_each(|e| *e = Complex64::new(0.0, 0.0));
        for col in 0..u.dim {
            u.entries[p.apply(col) * u.dim + col] = Complex64::new(1.0, 0.0);
        }
        Ok(u)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            entries: self.entries.iter().map(|&e| e * factor).collect(),
            ..self.clone()
        }
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Unitary) -> Result<Unitary, QuantumError> {
        if self.dim != rhs.dim {
            return Err(QuantumError::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * rhs.entries[k * n + j];
                }
            }
        }
        Ok(Unitary {
            width: self.width,
            dim: n,
            entries: out,
        })
    }

    pub fn adjoint(&self) -> Unitary {
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                out[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        Unitary {
            width: self.width,
            dim: n,
            entries: out,
        }
    }

    /// Largest entrywise distance to `other`.
    pub fn max_distance(&self, other: &Unitary) -> Result<f64, QuantumError> {
        if self.dim != other.dim {
            return Err(QuantumError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &Unitary, tol: f64) -> bool {
        self.max_distance(other).is_ok_and(|d| d <= tol)
    }

    /// `U U† = I` entrywise within `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let id = Unitary::identity(self.width).expect("width already validated");
        self.mul(&self.adjoint())
            .is_ok_and(|p| p.approx_eq(&id, tol))
    }
}

/// Embeds a primitive into the full `2^width` space.
pub fn primitive_unitary(p: &Primitive, width: usize) -> Result<Unitary, QuantumError> {
    p.validate(width)?;
    let mut u = Unitary::identity(width)?;
    let n = u.dim;
    u.entries
        .iter_mut()
        .for_each(|e| *e = Complex64::new(0.0, 0.0));
    let m = kernel(p.kind);
    for col in 0..n {
        if p.control.is_some_and(|c| !code_bit(col, c, width)) {
            u.entries[col * n + col] = Complex64::new(1.0, 0.0);
            continue;
        }
        let tmask = 1 << (width - 1 - p.target);
        let b = usize::from(col & tmask != 0);
        for (nb, m_row) in m.iter().enumerate() {
            let row = (col & !tmask) | if nb == 1 { tmask } else { 0 };
            u.entries[row * n + col] += m_row[b];
        }
    }
    Ok(u)
}

/// Product of the primitive unitaries; the first listed primitive acts first.
pub fn circuit_unitary(c: &QuantumCircuit) -> Result<Unitary, QuantumError> {
    let mut u = Unitary::identity(c.width())?;
    for p in c.prims() {
        u = primitive_unitary(p, c.width())?.mul(&u)?;
    }
    Ok(u)
}

/// True iff `u` equals the permutation matrix of `p` times one global phase.
pub fn equals_permutation(u: &Unitary, p: &Permutation, tol: f64) -> Result<bool, QuantumError> {
    let pdim = 1usize << p.width();
    if u.dim != pdim {
        return Err(QuantumError::DimensionMismatch {
            left: u.dim,
            right: pdim,
        });
    }
    let phase = u.get(p.apply(0), 0);
    if (phase.norm() - 1.0).abs() > tol {
        return Ok(false);
    }
    for col in 0..u.dim {
        let target = p.apply(col);
        for row in 0..u.dim {
            let expected = if row == target {
                phase
            } else {
                Complex64::new(0.0, 0.0)
            };
            if (u.get(row, col) - expected).norm() > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// State-vector run of `c` on basis input `code`, applying each primitive in
/// place rather than through the matrix product.
pub fn simulate_basis(c: &QuantumCircuit, code: usize) -> Result<Vec<Complex64>, QuantumError> {
    let width = c.width();
    if width > MAX_UNITARY_WIDTH {
        return Err(QuantumError::TooWide(width));
    }
    let dim = 1usize << width;
    let mut state = vec![Complex64::new(0.0, 0.0); dim];
    state[code] = Complex64::new(1.0, 0.0);
    for p in c.prims() {
        let m = kernel(p.kind);
        let tmask = 1 << (width - 1 - p.target);
        for i0 in (0..dim).filter(|i| i & tmask == 0) {
            if p.control.is_some_and(|ctl| !code_bit(i0, ctl, width)) {
                continue;
            }
            let i1 = i0 | tmask;
            let (a0, a1) = (state[i0], state[i1]);
            state[i0] = m[0][0] * a0 + m[0][1] * a1;
            state[i1] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
    Ok(state)
}
