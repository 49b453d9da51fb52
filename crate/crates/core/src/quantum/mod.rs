// SPDX-License-Identifier: Apache-2.0

//! Circuits over the NCV primitive set (NOT, CNOT, controlled-V,
//! controlled-V†), their exact unitaries, and the cost/depth metrics.

mod registry;
mod unitary;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use registry::{registered_decomposition, verify_registry, RegistryEntry, RegistryReport};
pub use unitary::{
    circuit_unitary, equals_permutation, primitive_unitary, simulate_basis, v_matrix, Unitary,
    DEFAULT_TOLERANCE, MAX_UNITARY_WIDTH,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuantumError {
    #[error("line {line} is out of range for a {width}-line circuit")]
    LineOutOfRange { line: usize, width: usize },
    #[error("primitive {0} uses the same line as control and target")]
    ControlIsTarget(Primitive),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("unitaries are limited to {MAX_UNITARY_WIDTH} lines, got {0}")]
    TooWide(usize),
    #[error("no registered decomposition for gate `{0}`")]
    UnknownDecomposition(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PrimKind {
    X,
    CX,
    CV,
    CVDG,
}

impl PrimKind {
    pub fn mnemonic(self) -> &'static str {
        match self {
            PrimKind::X => "X",
            PrimKind::CX => "CX",
            PrimKind::CV => "CV",
            PrimKind::CVDG => "CVDG",
        }
    }
}

/// One NCV primitive. `X` has no control; the others have exactly one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Primitive {
    pub kind: PrimKind,
    pub target: usize,
    pub control: Option<usize>,
}

impl Primitive {
    pub const fn x(target: usize) -> Self {
        Self {
            kind: PrimKind::X,
            target,
            control: None,
        }
    }

    pub const fn cx(control: usize, target: usize) -> Self {
        Self {
            kind: PrimKind::CX,
            target,
            control: Some(control),
        }
    }

    pub const fn cv(control: usize, target: usize) -> Self {
        Self {
            kind: PrimKind::CV,
            target,
            control: Some(control),
        }
    }

    pub const fn cvdg(control: usize, target: usize) -> Self {
        Self {
            kind: PrimKind::CVDG,
            target,
            control: Some(control),
        }
    }

    /// The primitive undoing this one.
    pub fn inverse(self) -> Self {
        let kind = match self.kind {
            PrimKind::CV => PrimKind::CVDG,
            PrimKind::CVDG => PrimKind::CV,
            k => k,
        };
        Self { kind, ..self }
    }

    pub fn lines(&self) -> impl Iterator<Item = usize> {
        std::iter::once(self.target).chain(self.control)
    }

    /// Moves the primitive onto other lines: line `i` becomes `map[i]`.
    pub fn remap(&self, map: &[usize]) -> Self {
        Self {
            kind: self.kind,
            target: map[self.target],
            control: self.control.map(|c| map[c]),
        }
    }

    pub fn validate(&self, width: usize) -> Result<(), QuantumError> {
        for line in self.lines() {
            if line >= width {
                return Err(QuantumError::LineOutOfRange { line, width });
            }
        }
        if self.control == Some(self.target) {
            return Err(QuantumError::ControlIsTarget(*self));
        }
        match (self.kind, self.control) {
            (PrimKind::X, None) => Ok(()),
            (PrimKind::X, Some(_)) | (_, None) => Err(QuantumError::ControlIsTarget(*self)),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.control {
            None => write!(f, "{}({})", self.kind.mnemonic(), self.target),
            Some(c) => write!(f, "{}({}->{})", self.kind.mnemonic(), c, self.target),
        }
    }
}

/// Primitives listed in application order (first element acts first).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct QuantumCircuit {
    width: usize,
    prims: Vec<Primitive>,
}

impl QuantumCircuit {
    pub fn new(width: usize, prims: Vec<Primitive>) -> Result<Self, QuantumError> {
        for p in &prims {
            p.validate(width)?;
        }
        Ok(Self { width, prims })
    }

    pub fn empty(width: usize) -> Self {
        Self {
            width,
            prims: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn prims(&self) -> &[Primitive] {
        &self.prims
    }

    pub fn push(&mut self, p: Primitive) -> Result<(), QuantumError> {
        p.validate(self.width)?;
        self.prims.push(p);
        Ok(())
    }

    /// `self` followed by `other`; both must have the same width.
    pub fn concat(&self, other: &QuantumCircuit) -> Result<Self, QuantumError> {
        if self.width != other.width {
            return Err(QuantumError::DimensionMismatch {
                left: self.width,
                right: other.width,
            });
        }
        let mut prims = self.prims.clone();
        prims.extend_from_slice(&other.prims);
        Ok(Self {
            width: self.width,
            prims,
        })
    }

    pub fn inverse(&self) -> Self {
        Self {
            width: self.width,
            prims: self.prims.iter().rev().map(|p| p.inverse()).collect(),
        }
    }
}

impl fmt::Display for QuantumCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prims.is_empty() {
            return f.write_str("(empty)");
        }
        for (i, p) in self.prims.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Every NCV primitive counts one unit.
pub fn quantum_cost(c: &QuantumCircuit) -> u32 {
    c.prims.len() as u32
}

/// Longest chain of primitives that pairwise share a line, in listing order.
pub fn logical_depth(c: &QuantumCircuit) -> u32 {
    let mut frontier = vec![0u32; c.width];
    let mut depth = 0;
    for p in &c.prims {
        let level = 1 + p.lines().map(|l| frontier[l]).max().unwrap_or(0);
        for l in p.lines() {
            frontier[l] = level;
        }
        depth = depth.max(level);
    }
    depth
}

/// Cost summary for a gate or a netlist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Metrics {
    pub quantum_cost: u32,
    /// Dependency depth of the primitive-level circuit.
    pub delay: u32,
    /// Delay counted as one unit per primitive.
    pub serial_delay: u32,
    pub garbage: u32,
    pub gate_count: u32,
}

impl Metrics {
    pub fn of_circuit(c: &QuantumCircuit) -> Self {
        let cost = quantum_cost(c);
        Self {
            quantum_cost: cost,
            delay: logical_depth(c),
            serial_delay: cost,
            garbage: 0,
            gate_count: cost,
        }
    }
}
