// SPDX-License-Identifier: Apache-2.0

//! Line-oriented text format.
//!
//! ```text
//! width N
//! line IDX (input LABEL | const 0|1 | wire)
//! gate NAME IDX...
//! output IDX LABEL
//! feedback SRC -> DST
//! ```
//!
//! `#` starts a comment. Serialization is canonical: width, lines in index
//! order, then gates, outputs and feedbacks in declaration order.

use std::fmt::{self, Write as _};

use super::{
    Assignment, Cell, Feedback, Item, LineRole, Netlist, NetlistError, Output, MAX_NETLIST_WIDTH,
};
use crate::perm::builtin_gate;

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let code = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (col, (i, ch)) in code.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((i, col + 1)),
            (true, Some((s, c))) => {
                out.push(Token {
                    text: &code[s..i],
                    column: c,
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some((s, c)) = start {
        out.push(Token {
            text: &code[s..],
            column: c,
        });
    }
    out
}

fn valid_label(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Parser {
    line: usize,
}

impl Parser {
    fn syntax(&self, column: usize, message: impl Into<String>) -> NetlistError {
        NetlistError::Syntax {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn index(&self, t: Token<'_>, width: usize) -> Result<usize, NetlistError> {
        let index: usize = t.text.parse().map_err(|_| {
            self.syntax(
                t.column,
                format!("expected a line index, found `{}`", t.text),
            )
        })?;
        if index >= width {
            return Err(NetlistError::IndexOutOfRange {
                line: self.line,
                column: t.column,
                index,
                width,
            });
        }
        Ok(index)
    }

    fn label(&self, t: Option<Token<'_>>, end: usize) -> Result<String, NetlistError> {
        let t = t.ok_or_else(|| self.syntax(end, "expected a label"))?;
        if !valid_label(t.text) {
            return Err(self.syntax(t.column, format!("`{}` is not a valid label", t.text)));
        }
        Ok(t.text.to_string())
    }

    fn no_more(&self, rest: &[Token<'_>]) -> Result<(), NetlistError> {
        match rest.first() {
            Some(t) => Err(self.syntax(t.column, format!("unexpected `{}`", t.text))),
            None => Ok(()),
        }
    }
}

/// Parses the netlist text format.
pub fn parse_netlist(text: &str) -> Result<Netlist, NetlistError> {
    let mut width: Option<(usize, usize)> = None;
    let mut roles: Vec<Option<LineRole>> = Vec::new();
    let mut cells = Vec::new();
    let mut outputs = Vec::new();
    let mut feedbacks = Vec::new();
    // Source positions of cells, outputs and feedbacks, for later checks.
    let mut cell_pos = Vec::new();
    let mut output_pos = Vec::new();
    let mut feedback_pos = Vec::new();
    let mut line_pos = Vec::new();

    for (n, raw) in text.lines().enumerate() {
        let p = Parser { line: n + 1 };
        let tokens = tokenize(raw);
        let Some(&head) = tokens.first() else {
            continue;
        };
        let end = raw.chars().count() + 1;
        let args = &tokens[1..];

        if head.text != "width" && width.is_none() {
            return Err(p.syntax(head.column, "the first declaration must be `width N`"));
        }
        let w = width.map_or(0, |(w, _)| w);
        match head.text {
            "width" => {
                if width.is_some() {
                    return Err(NetlistError::Invalid {
                        line: p.line,
                        column: head.column,
                        message: "width is declared twice".into(),
                    });
                }
                let t = *args
                    .first()
                    .ok_or_else(|| p.syntax(end, "expected a width"))?;
                let value: usize = t.text.parse().map_err(|_| {
                    p.syntax(t.column, format!("expected a width, found `{}`", t.text))
                })?;
                if !(1..=MAX_NETLIST_WIDTH).contains(&value) {
                    return Err(NetlistError::Invalid {
                        line: p.line,
                        column: t.column,
                        message: format!("width must be between 1 and {MAX_NETLIST_WIDTH}"),
                    });
                }
                p.no_more(&args[1..])?;
                width = Some((value, p.line));
                roles = vec![None; value];
                line_pos = vec![(p.line, head.column); value];
            }
            "line" => {
                let t = *args
                    .first()
                    .ok_or_else(|| p.syntax(end, "expected a line index"))?;
                let index = p.index(t, w)?;
                if roles[index].is_some() {
                    return Err(NetlistError::DuplicateLine {
                        line: p.line,
                        column: t.column,
                        index,
                    });
                }
                let kind = args
                    .get(1)
                    .ok_or_else(|| p.syntax(end, "expected `input`, `const` or `wire`"))?;
                let (role, used) = match kind.text {
                    "input" => (LineRole::Input(p.label(args.get(2).copied(), end)?), 3),
                    "const" => {
                        let v = args
                            .get(2)
                            .ok_or_else(|| p.syntax(end, "expected 0 or 1"))?;
                        let bit = match v.text {
                            "0" => false,
                            "1" => true,
                            other => {
                                return Err(
                                    p.syntax(v.column, format!("expected 0 or 1, found `{other}`"))
                                )
                            }
                        };
                        (LineRole::Const(bit), 3)
                    }
                    "wire" => (LineRole::Wire, 2),
                    other => {
                        return Err(p.syntax(
                            kind.column,
                            format!("expected `input`, `const` or `wire`, found `{other}`"),
                        ))
                    }
                };
                p.no_more(&args[used.min(args.len())..])?;
                roles[index] = Some(role);
                line_pos[index] = (p.line, head.column);
            }
            "gate" => {
                let name = *args
                    .first()
                    .ok_or_else(|| p.syntax(end, "expected a gate name"))?;
                let def = builtin_gate(name.text).map_err(|_| NetlistError::UnknownGate {
                    line: p.line,
                    column: name.column,
                    name: name.text.to_string(),
                })?;
                let operands = &args[1..];
                if operands.len() != def.width() {
                    return Err(NetlistError::Arity {
                        line: p.line,
                        column: name.column,
                        expected: def.width(),
                        gate: def.name,
                        found: operands.len(),
                    });
                }
                let mut lines = Vec::with_capacity(operands.len());
                for &t in operands {
                    let index = p.index(t, w)?;
                    if lines.contains(&index) {
                        return Err(NetlistError::RepeatedOperand {
                            line: p.line,
                            column: t.column,
                            gate: def.name,
                            index,
                        });
                    }
                    lines.push(index);
                }
                cells.push(Cell::new(&def.name, lines)?);
                cell_pos.push((p.line, head.column));
            }
            "output" => {
                let t = *args
                    .first()
                    .ok_or_else(|| p.syntax(end, "expected a line index"))?;
                let line = p.index(t, w)?;
                let label = p.label(args.get(1).copied(), end)?;
                p.no_more(&args[2.min(args.len())..])?;
                outputs.push(Output { line, label });
                output_pos.push((p.line, head.column));
            }
            "feedback" => {
                let [src, arrow, dst, rest @ ..] = args else {
                    return Err(p.syntax(end, "expected `feedback SRC -> DST`"));
                };
                let src = p.index(*src, w)?;
                if arrow.text != "->" {
                    return Err(p.syntax(
                        arrow.column,
                        format!("expected `->`, found `{}`", arrow.text),
                    ));
                }
                let dst = p.index(*dst, w)?;
                p.no_more(rest)?;
                feedbacks.push(Feedback { src, dst });
                feedback_pos.push((p.line, head.column));
            }
            other => return Err(p.syntax(head.column, format!("unknown declaration `{other}`"))),
        }
    }

    let Some((_, width_line)) = width else {
        return Err(NetlistError::Syntax {
            line: 1,
            column: 1,
            message: "missing `width N` declaration".into(),
        });
    };
    let roles: Vec<LineRole> = roles
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            r.ok_or_else(|| NetlistError::Invalid {
                line: width_line,
                column: 1,
                message: format!("line {i} is never declared"),
            })
        })
        .collect::<Result<_, _>>()?;

    let netlist = Netlist {
        width: roles.len(),
        roles,
        cells,
        outputs,
        feedbacks,
    };
    netlist.check(|item| match item {
        Item::Cell(k) => cell_pos[k],
        Item::Output(k) => output_pos[k],
        Item::Feedback(k) => feedback_pos[k],
        Item::Line(k) => line_pos[k],
    })?;
    Ok(netlist)
}

impl Netlist {
    /// Canonical text form; parsing it gives back an identical netlist.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Netlist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "width {}", self.width)?;
        for (i, role) in self.roles.iter().enumerate() {
            match role {
                LineRole::Input(label) => writeln!(f, "line {i} input {label}")?,
                LineRole::Const(b) => writeln!(f, "line {i} const {}", u8::from(*b))?,
                LineRole::Wire => writeln!(f, "line {i} wire")?,
            }
        }
        for cell in &self.cells {
            let mut s = format!("gate {}", cell.gate);
            for l in &cell.lines {
                let _ = write!(s, " {l}");
            }
            writeln!(f, "{s}")?;
        }
        for o in &self.outputs {
            writeln!(f, "output {} {}", o.line, o.label)?;
        }
        for fb in &self.feedbacks {
            writeln!(f, "feedback {} -> {}", fb.src, fb.dst)?;
        }
        Ok(())
    }
}

/// Input assignments over time. Each step lists only the labels it changes;
/// earlier values persist.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StimulusTrace {
    pub steps: Vec<Vec<(String, bool)>>,
}

impl StimulusTrace {
    /// Full assignment at every step. Fails on labels the netlist does not
    /// have, or on inputs still unassigned at some step.
    pub fn resolve(&self, n: &Netlist) -> Result<Vec<Assignment>, NetlistError> {
        let mut cur = Assignment::new();
        let mut out = Vec::with_capacity(self.steps.len());
        for step in &self.steps {
            for (label, v) in step {
                if n.input_line(label).is_none() {
                    return Err(NetlistError::UnknownLabel(label.clone()));
                }
                cur.insert(label.clone(), *v);
            }
            if let Some(missing) = n.input_labels().into_iter().find(|l| !cur.contains_key(*l)) {
                return Err(NetlistError::Unassigned(missing.to_string()));
            }
            out.push(cur.clone());
        }
        Ok(out)
    }
}

/// One step per non-blank line, each a list of `LABEL=0|1` tokens.
pub fn parse_stimulus(text: &str) -> Result<StimulusTrace, NetlistError> {
    let mut steps = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let p = Parser { line: n + 1 };
        let tokens = tokenize(raw);
        if tokens.is_empty() {
            continue;
        }
        let mut step = Vec::new();
        for t in tokens {
            let Some((label, value)) = t.text.split_once('=') else {
                return Err(p.syntax(
                    t.column,
                    format!("expected `LABEL=0|1`, found `{}`", t.text),
                ));
            };
            if !valid_label(label) {
                return Err(p.syntax(t.column, format!("`{label}` is not a valid label")));
            }
            let bit = match value {
                "0" => false,
                "1" => true,
                _ => {
                    return Err(p.syntax(
                        t.column + label.chars().count() + 1,
                        format!("expected 0 or 1, found `{value}`"),
                    ))
                }
            };
            step.push((label.to_string(), bit));
        }
        steps.push(step);
    }
    Ok(StimulusTrace { steps })
}
