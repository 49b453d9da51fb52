// SPDX-License-Identifier: Apache-2.0

//! Exhaustive minimum-cost synthesis over the NCV primitive set.
//!
//! The search runs breadth-first over primitive sequences in
//! [`enumerate_primitives`] order and keeps one representative per unitary
//! (up to global phase). Within a level, survivors are generated in
//! lexicographic order of their primitive indices, so the first sequence that
//! reaches a permutation is both of minimum length and lexicographically
//! smallest among minimum-length realizations. Every tie-break downstream
//! follows from that.

mod atlas;
mod certify;
mod constrained;
mod exact;

use thiserror::Error;

use crate::perm::PermError;
use crate::quantum::{Primitive, QuantumCircuit, QuantumError};

pub use atlas::{
    build_cost_atlas, build_cost_atlas_with, min_cost_synthesis, AtlasEntry, AtlasLimits,
    BuildMode, CostAtlas, SNAPSHOT_FORMAT,
};
pub use certify::{Certificate, CostCertifier};
pub use constrained::{
    constrained_synthesis, derive_mpg, mpg_constraint, ConstrainedResult, MpgDerivation,
    SynthesisConstraint, MPG_SEARCH_BOUND,
};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("width {width} is outside the supported range {min}..={max}")]
    WidthOutOfRange {
        width: usize,
        min: usize,
        max: usize,
    },
    #[error("{what} {requested} exceeds the configured limit {limit}; raise the limit to run a larger search")]
    BoundExceeded {
        what: &'static str,
        requested: u32,
        limit: u32,
    },
    #[error("atlas snapshot line {line}: {message}")]
    Snapshot { line: usize, message: String },
    #[error("witness for {perm} does not realize it: {reason}")]
    BadWitness { perm: String, reason: String },
    #[error("constraint: {0}")]
    Constraint(String),
    #[error("no permutation satisfies the MPG constraints within cost {bound}")]
    Infeasible { bound: u32 },
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// All primitives on `width` lines: every `X`, then `CX`, `CV`, `CVDG` over
/// ordered (control, target) pairs, control-major.
pub fn enumerate_primitives(width: usize) -> Result<Vec<Primitive>, SynthError> {
    if !(1..=4).contains(&width) {
        return Err(SynthError::WidthOutOfRange {
            width,
            min: 1,
            max: 4,
        });
    }
    let mut out: Vec<Primitive> = (0..width).map(Primitive::x).collect();
    for ctor in [Primitive::cx, Primitive::cv, Primitive::cvdg] {
        for c in 0..width {
            for t in (0..width).filter(|&t| t != c) {
                out.push(ctor(c, t));
            }
        }
    }
    Ok(out)
}

/// Position of `p` in [`enumerate_primitives`] order.
pub fn primitive_index(width: usize, p: &Primitive) -> Result<usize, SynthError> {
    let prims = enumerate_primitives(width)?;
    prims.iter().position(|q| q == p).ok_or_else(|| {
        SynthError::Quantum(QuantumError::LineOutOfRange {
            line: p.lines().max().unwrap_or(0),
            width,
        })
    })
}

pub(crate) fn circuit_from_indices(
    width: usize,
    prims: &[Primitive],
    seq: &[u8],
) -> Result<QuantumCircuit, SynthError> {
    Ok(QuantumCircuit::new(
        width,
        seq.iter().map(|&i| prims[i as usize]).collect(),
    )?)
}
