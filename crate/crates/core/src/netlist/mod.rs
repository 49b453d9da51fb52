// SPDX-License-Identifier: Apache-2.0

//! Cascades of reversible gates on persistent lines.
//!
//! A line holds one value at a time and every cell rewrites its lines in
//! place, so there is no fan-out: a value needed twice has to be copied
//! through FG or DFG. Feedback arcs carry a final line value back to the
//! initial value of another line on the next evaluation.

mod parse;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::perm::{builtin_gate, code_bit, Permutation};
use crate::quantum::{logical_depth, registered_decomposition, Metrics, QuantumCircuit};

pub use parse::{parse_netlist, parse_stimulus, StimulusTrace};

/// Widest netlist the parser accepts.
pub const MAX_NETLIST_WIDTH: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetlistError {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: unknown gate `{name}`")]
    UnknownGate {
        line: usize,
        column: usize,
        name: String,
    },
    #[error("{line}:{column}: gate {gate} takes {expected} lines, got {found}")]
    Arity {
        line: usize,
        column: usize,
        gate: String,
        expected: usize,
        found: usize,
    },
    #[error("{line}:{column}: gate {gate} uses line {index} more than once")]
    RepeatedOperand {
        line: usize,
        column: usize,
        gate: String,
        index: usize,
    },
    #[error("{line}:{column}: line {index} is declared twice")]
    DuplicateLine {
        line: usize,
        column: usize,
        index: usize,
    },
    #[error("{line}:{column}: line index {index} is out of range for width {width}")]
    IndexOutOfRange {
        line: usize,
        column: usize,
        index: usize,
        width: usize,
    },
    #[error("{line}:{column}: {message}")]
    Invalid {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("input `{0}` is not assigned")]
    Unassigned(String),
    #[error("no input line is labelled `{0}`")]
    UnknownLabel(String),
    #[error("expected {expected} feedback values, got {found}")]
    StateLength { expected: usize, found: usize },
    #[error("gate {0} has no registered decomposition")]
    NoDecomposition(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineRole {
    /// Labeled input; a feedback into it overrides the label.
    Input(String),
    Const(bool),
    /// Initialized from a feedback arc.
    Wire,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    /// Canonical (upper-case) gate name.
    pub gate: String,
    pub lines: Vec<usize>,
    perm: Permutation,
}

impl Cell {
    pub fn new(gate: &str, lines: Vec<usize>) -> Result<Self, NetlistError> {
        let def = builtin_gate(gate).map_err(|_| NetlistError::UnknownGate {
            line: 0,
            column: 0,
            name: gate.to_string(),
        })?;
        if lines.len() != def.width() {
            return Err(NetlistError::Arity {
                line: 0,
                column: 0,
                expected: def.width(),
                gate: def.name,
                found: lines.len(),
            });
        }
        if let Some(&index) = lines
            .iter()
            .enumerate()
            .find_map(|(i, l)| lines[..i].contains(l).then_some(l))
        {
            return Err(NetlistError::RepeatedOperand {
                line: 0,
                column: 0,
                gate: def.name,
                index,
            });
        }
        Ok(Self {
            gate: def.name,
            lines,
            perm: def.perm,
        })
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub line: usize,
    pub label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Feedback {
    pub src: usize,
    pub dst: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Netlist {
    width: usize,
    roles: Vec<LineRole>,
    cells: Vec<Cell>,
    outputs: Vec<Output>,
    feedbacks: Vec<Feedback>,
}

/// A located element of a netlist, for diagnostics.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Item {
    Cell(usize),
    Output(usize),
    Feedback(usize),
    Line(usize),
}

/// Labeled input values.
pub type Assignment = BTreeMap<String, bool>;

impl Netlist {
    /// Assembles and checks a netlist. Diagnostics carry no source position.
    pub fn new(
        roles: Vec<LineRole>,
        cells: Vec<Cell>,
        outputs: Vec<Output>,
        feedbacks: Vec<Feedback>,
    ) -> Result<Self, NetlistError> {
        let n = Self {
            width: roles.len(),
            roles,
            cells,
            outputs,
            feedbacks,
        };
        n.check(|_| (0, 0))?;
        Ok(n)
    }

    /// Structural invariants; `pos` locates an item for diagnostics.
    pub(crate) fn check(&self, pos: impl Fn(Item) -> (usize, usize)) -> Result<(), NetlistError> {
        let width = self.width;
        let range = |index: usize, k: Item| -> Result<(), NetlistError> {
            if index >= width {
                let (line, column) = pos(k);
                return Err(NetlistError::IndexOutOfRange {
                    line,
                    column,
                    index,
                    width,
                });
            }
            Ok(())
        };
        let invalid = |k: Item, message: String| {
            let (line, column) = pos(k);
            NetlistError::Invalid {
                line,
                column,
                message,
            }
        };

        for (k, cell) in self.cells.iter().enumerate() {
            for &l in &cell.lines {
                range(l, Item::Cell(k))?;
            }
        }
        let mut used_finals: BTreeMap<usize, &str> = BTreeMap::new();
        let mut labels = Vec::new();
        for (k, out) in self.outputs.iter().enumerate() {
            range(out.line, Item::Output(k))?;
            if labels.contains(&out.label.as_str()) {
                return Err(invalid(
                    Item::Output(k),
                    format!("output label `{}` is used twice", out.label),
                ));
            }
            labels.push(&out.label);
            if let Some(prev) = used_finals.insert(out.line, "an output") {
                return Err(invalid(
                    Item::Output(k),
                    format!("line {} already drives {prev}", out.line),
                ));
            }
        }
        let mut dsts = Vec::new();
        for (k, fb) in self.feedbacks.iter().enumerate() {
            range(fb.src, Item::Feedback(k))?;
            range(fb.dst, Item::Feedback(k))?;
            if let Some(prev) = used_finals.insert(fb.src, "a feedback") {
                return Err(invalid(
                    Item::Feedback(k),
                    format!("line {} already drives {prev}", fb.src),
                ));
            }
            if dsts.contains(&fb.dst) {
                return Err(invalid(
                    Item::Feedback(k),
                    format!("line {} receives two feedbacks", fb.dst),
                ));
            }
            if matches!(self.roles[fb.dst], LineRole::Const(_)) {
                return Err(invalid(
                    Item::Feedback(k),
                    format!("feedback destination {} is a constant", fb.dst),
                ));
            }
            dsts.push(fb.dst);
        }
        let mut inputs: Vec<&str> = Vec::new();
        for (i, role) in self.roles.iter().enumerate() {
            match role {
                LineRole::Wire if !dsts.contains(&i) => {
                    return Err(invalid(
                        Item::Line(i),
                        format!("wire line {i} is not driven by a feedback"),
                    ));
                }
                LineRole::Input(label) if inputs.contains(&label.as_str()) => {
                    return Err(invalid(
                        Item::Line(i),
                        format!("input label `{label}` is used twice"),
                    ));
                }
                LineRole::Input(label) => inputs.push(label),
                _ => {}
            }
        }
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn roles(&self) -> &[LineRole] {
        &self.roles
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn outputs(&self) -> &[Output] {
        &self.outputs
    }

    pub fn feedbacks(&self) -> &[Feedback] {
        &self.feedbacks
    }

    /// Input labels in line order.
    pub fn input_labels(&self) -> Vec<&str> {
        self.roles
            .iter()
            .filter_map(|r| match r {
                LineRole::Input(l) => Some(l.as_str()),
                _ => None,
            })
            .collect()
    }

    pub fn input_line(&self, label: &str) -> Option<usize> {
        self.roles
            .iter()
            .position(|r| matches!(r, LineRole::Input(l) if l == label))
    }

    pub fn output_line(&self, label: &str) -> Option<usize> {
        self.outputs
            .iter()
            .find(|o| o.label == label)
            .map(|o| o.line)
    }

    /// The same netlist with one more cell at the end.
    pub fn with_cell(&self, cell: Cell) -> Result<Self, NetlistError> {
        let mut cells = self.cells.clone();
        cells.push(cell);
        Self::new(
            self.roles.clone(),
            cells,
            self.outputs.clone(),
            self.feedbacks.clone(),
        )
    }

    /// Runs the cells over explicit initial line values.
    pub fn apply(&self, mut values: Vec<bool>) -> Vec<bool> {
        for cell in &self.cells {
            let w = cell.lines.len();
            let code = cell
                .lines
                .iter()
                .fold(0usize, |acc, &l| (acc << 1) | usize::from(values[l]));
            let out = cell.perm.apply(code);
            for (i, &l) in cell.lines.iter().enumerate() {
                values[l] = code_bit(out, i, w);
            }
        }
        values
    }

    /// Final values of every line, given the labeled inputs and one value per
    /// feedback arc (in declaration order).
    pub fn evaluate(
        &self,
        inputs: &Assignment,
        feedback_state: &[bool],
    ) -> Result<Vec<bool>, NetlistError> {
        if feedback_state.len() != self.feedbacks.len() {
            return Err(NetlistError::StateLength {
                expected: self.feedbacks.len(),
                found: feedback_state.len(),
            });
        }
        if let Some(label) = inputs.keys().find(|l| self.input_line(l).is_none()) {
            return Err(NetlistError::UnknownLabel(label.clone()));
        }
        let mut values = vec![false; self.width];
        for (i, role) in self.roles.iter().enumerate() {
            values[i] = match role {
                LineRole::Input(label) => *inputs
                    .get(label)
                    .ok_or_else(|| NetlistError::Unassigned(label.clone()))?,
                LineRole::Const(b) => *b,
                LineRole::Wire => false,
            };
        }
        for (fb, &v) in self.feedbacks.iter().zip(feedback_state) {
            values[fb.dst] = v;
        }
        Ok(self.apply(values))
    }

    /// End-to-end map of the cascade with every line treated as free.
    pub fn permutation(&self) -> Result<Permutation, NetlistError> {
        if self.width > crate::perm::MAX_WIDTH {
            return Err(NetlistError::Invalid {
                line: 0,
                column: 0,
                message: format!("width {} is too wide to tabulate", self.width),
            });
        }
        let w = self.width;
        let codes: Vec<usize> = (0..1usize << w)
            .map(|code| {
                let out = self.apply((0..w).map(|l| code_bit(code, l, w)).collect());
                out.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
            })
            .collect();
        Permutation::from_codes(w, &codes).map_err(|e| NetlistError::Invalid {
            line: 0,
            column: 0,
            message: e.to_string(),
        })
    }

    /// Registered decompositions of the cells, moved onto their lines and
    /// concatenated.
    pub fn primitive_circuit(&self) -> Result<QuantumCircuit, NetlistError> {
        let mut prims = Vec::new();
        for cell in &self.cells {
            let dec = registered_decomposition(&cell.gate)
                .map_err(|_| NetlistError::NoDecomposition(cell.gate.clone()))?;
            prims.extend(dec.prims().iter().map(|p| p.remap(&cell.lines)));
        }
        Ok(QuantumCircuit::new(self.width, prims).expect("cell lines are validated"))
    }

    /// Final lines that are neither outputs nor feedback sources.
    pub fn garbage_lines(&self) -> Vec<usize> {
        (0..self.width)
            .filter(|&l| {
                !self.outputs.iter().any(|o| o.line == l)
                    && !self.feedbacks.iter().any(|f| f.src == l)
            })
            .collect()
    }

    pub fn metrics(&self) -> Result<Metrics, NetlistError> {
        let circuit = self.primitive_circuit()?;
        let cost = circuit.prims().len() as u32;
        Ok(Metrics {
            quantum_cost: cost,
            delay: logical_depth(&circuit),
            serial_delay: cost,
            garbage: self.garbage_lines().len() as u32,
            gate_count: self.cells.len() as u32,
        })
    }

    /// Sum of per-gate costs from `cost_of`, e.g. published figures instead
    /// of registered circuits.
    pub fn cost_with(&self, cost_of: impl Fn(&str) -> Option<u32>) -> Result<u32, NetlistError> {
        self.cells
            .iter()
            .map(|c| cost_of(&c.gate).ok_or_else(|| NetlistError::NoDecomposition(c.gate.clone())))
            .sum()
    }
}
