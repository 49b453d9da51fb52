// SPDX-License-Identifier: Apache-2.0

//! Sequential behaviour of netlists with feedback: level-sensitive settling,
//! two-phase master-slave clocking, and exhaustive checks against
//! characteristic equations.

mod designs;
mod ledger;

use serde::Serialize;
use thiserror::Error;

use crate::netlist::{Assignment, Netlist, NetlistError};

pub use designs::{builtin_design, design_source, BUILTIN_DESIGNS};
pub use ledger::{
    claims_ledger, improvement_percent, improvement_rows, published_design, ClaimRecord,
    DesignClaims, ImprovementRow, PriorDesign, Verdict, MPG_IMPLIED_COST, TABLE_METRICS,
};

/// Evaluation cap for [`settle`].
pub const SETTLE_CAP: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeqError {
    #[error("illegal input: {predicate} is violated")]
    Illegal { predicate: &'static str },
    #[error("no fixed point: feedback state revisited after {iterations} evaluations")]
    Oscillation { iterations: usize },
    #[error("no fixed point within {0} evaluations")]
    CapExceeded(usize),
    #[error("unknown design `{0}`")]
    UnknownDesign(String),
    #[error("design `{0}` is not master-slave")]
    NotMasterSlave(String),
    #[error("improvement needs a positive baseline, got {0}")]
    BadBaseline(i64),
    #[error(transparent)]
    Netlist(#[from] NetlistError),
}

/// Next-state functions. Inputs are read by label; the gated forms read
/// `CLK` as well.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Characteristic {
    Sr,
    GatedSr,
    Jk,
    GatedJk,
    D,
    GatedD,
}

impl Characteristic {
    pub fn name(self) -> &'static str {
        match self {
            Characteristic::Sr => "SR",
            Characteristic::GatedSr => "gated-SR",
            Characteristic::Jk => "JK",
            Characteristic::GatedJk => "gated-JK",
            Characteristic::D => "D",
            Characteristic::GatedD => "gated-D",
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            Characteristic::Sr => "Q+ = S + R'Q",
            Characteristic::GatedSr => "Q+ = CLK'Q + CLK(S + R'Q)",
            Characteristic::Jk => "Q+ = JQ' + K'Q",
            Characteristic::GatedJk => "Q+ = CLK'Q + CLK(JQ' + K'Q)",
            Characteristic::D => "Q+ = D",
            Characteristic::GatedD => "Q+ = CLK'Q + CLK D",
        }
    }

    /// Labels the function reads, in enumeration order.
    pub fn inputs(self) -> &'static [&'static str] {
        match self {
            Characteristic::Sr => &["S", "R"],
            Characteristic::GatedSr => &["CLK", "S", "R"],
            Characteristic::Jk => &["J", "K"],
            Characteristic::GatedJk => &["CLK", "J", "K"],
            Characteristic::D => &["D"],
            Characteristic::GatedD => &["CLK", "D"],
        }
    }

    fn sr_family(self) -> bool {
        matches!(self, Characteristic::Sr | Characteristic::GatedSr)
    }

    /// The forbidden-input predicate, if any.
    pub fn legality(self) -> Option<&'static str> {
        self.sr_family().then_some("not (S and R)")
    }

    pub fn is_legal(self, inputs: &Assignment) -> bool {
        !(self.sr_family() && bit(inputs, "S") && bit(inputs, "R"))
    }

    pub fn next(self, q: bool, inputs: &Assignment) -> bool {
        let clk = bit(inputs, "CLK");
        let gate = |f: bool| (!clk && q) || (clk && f);
        let sr = || bit(inputs, "S") || (!bit(inputs, "R") && q);
        let jk = || (bit(inputs, "J") && !q) || (!bit(inputs, "K") && q);
        match self {
            Characteristic::Sr => sr(),
            Characteristic::GatedSr => gate(sr()),
            Characteristic::Jk => jk(),
            Characteristic::GatedJk => gate(jk()),
            Characteristic::D => bit(inputs, "D"),
            Characteristic::GatedD => gate(bit(inputs, "D")),
        }
    }

    /// Every legal assignment of [`Self::inputs`], in binary counting order.
    pub fn legal_inputs(self) -> Vec<Assignment> {
        let labels = self.inputs();
        (0..1usize << labels.len())
            .map(|code| {
                labels
                    .iter()
                    .enumerate()
                    .map(|(i, l)| (l.to_string(), code >> (labels.len() - 1 - i) & 1 == 1))
                    .collect::<Assignment>()
            })
            .filter(|a| self.is_legal(a))
            .collect()
    }
}

fn bit(inputs: &Assignment, label: &str) -> bool {
    inputs.get(label).copied().unwrap_or(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Clocking {
    /// State follows the inputs whenever they allow it.
    Level,
    /// Master captures while `CLK = 1`, slave commits when `CLK` falls.
    MasterSlave,
}

/// A latch or flip-flop: a netlist plus how to read and drive it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatchSpec {
    pub id: String,
    pub netlist: Netlist,
    pub characteristic: Characteristic,
    pub clocking: Clocking,
    pub clock: Option<String>,
    pub q_output: String,
    pub qn_output: Option<String>,
}

/// Outcome of [`settle`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Settled {
    pub state: Vec<bool>,
    /// Evaluations performed, including the one that confirmed the fixed
    /// point.
    pub iterations: usize,
    pub values: Vec<bool>,
}

fn feedback_values(n: &Netlist, values: &[bool]) -> Vec<bool> {
    n.feedbacks().iter().map(|f| values[f.src]).collect()
}

/// Re-evaluates `n` until the feedback values stop changing.
pub fn settle(n: &Netlist, inputs: &Assignment, state: &[bool]) -> Result<Settled, SeqError> {
    let mut state = state.to_vec();
    let mut seen = vec![state.clone()];
    for iterations in 1..=SETTLE_CAP {
        let values = n.evaluate(inputs, &state)?;
        let next = feedback_values(n, &values);
        if next == state {
            return Ok(Settled {
                state,
                iterations,
                values,
            });
        }
        if seen.contains(&next) {
            return Err(SeqError::Oscillation { iterations });
        }
        seen.push(next.clone());
        state = next;
    }
    Err(SeqError::CapExceeded(SETTLE_CAP))
}

/// One clock-free settling step of a netlist per stimulus step; the state
/// starts at all zeros and carries over.
pub fn simulate(n: &Netlist, steps: &[Assignment]) -> Result<Vec<Settled>, SeqError> {
    let mut state = vec![false; n.feedbacks().len()];
    let mut out = Vec::with_capacity(steps.len());
    for inputs in steps {
        let s = settle(n, inputs, &state)?;
        state = s.state.clone();
        out.push(s);
    }
    Ok(out)
}

/// Result of one full clock on a master-slave design.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClockResult {
    pub state: Vec<bool>,
    /// Q before the clock, after phase 1, and after phase 2.
    pub q_trace: [bool; 3],
    pub values: Vec<bool>,
}

impl ClockResult {
    pub fn q(&self) -> bool {
        self.q_trace[2]
    }

    pub fn q_changes(&self) -> usize {
        self.q_trace.windows(2).filter(|w| w[0] != w[1]).count()
    }
}

impl LatchSpec {
    fn line_of(&self, label: &str) -> usize {
        self.netlist
            .output_line(label)
            .expect("design outputs are checked at construction")
    }

    pub fn q(&self, values: &[bool]) -> bool {
        values[self.line_of(&self.q_output)]
    }

    pub fn qn(&self, values: &[bool]) -> Option<bool> {
        self.qn_output.as_deref().map(|l| values[self.line_of(l)])
    }

    /// Feedback state of a settled latch holding `q`: every arc carries a
    /// copy of the state.
    pub fn committed(&self, q: bool) -> Vec<bool> {
        vec![q; self.netlist.feedbacks().len()]
    }

    fn check_legal(&self, inputs: &Assignment) -> Result<(), SeqError> {
        if self.characteristic.is_legal(inputs) {
            Ok(())
        } else {
            Err(SeqError::Illegal {
                predicate: self.characteristic.legality().unwrap_or("legal input"),
            })
        }
    }

    /// [`settle`] with the legal-input check.
    pub fn settle(&self, inputs: &Assignment, state: &[bool]) -> Result<Settled, SeqError> {
        self.check_legal(inputs)?;
        settle(&self.netlist, inputs, state)
    }

    /// One evaluation: the feedback values produced from `state`.
    pub fn step(
        &self,
        inputs: &Assignment,
        state: &[bool],
    ) -> Result<(Vec<bool>, Vec<bool>), SeqError> {
        self.check_legal(inputs)?;
        let values = self.netlist.evaluate(inputs, state)?;
        Ok((feedback_values(&self.netlist, &values), values))
    }

    fn with_clock(&self, inputs: &Assignment, clk: bool) -> Assignment {
        let mut a = inputs.clone();
        if let Some(c) = &self.clock {
            a.insert(c.clone(), clk);
        }
        a
    }

    /// Full clock: settle with `CLK = 1`, then with `CLK = 0`.
    pub fn clock_step(&self, inputs: &Assignment, state: &[bool]) -> Result<ClockResult, SeqError> {
        if self.clocking != Clocking::MasterSlave || self.clock.is_none() {
            return Err(SeqError::NotMasterSlave(self.id.clone()));
        }
        let low = self.with_clock(inputs, false);
        let before = self.q(&self.netlist.evaluate(&low, state)?);
        let high = self.settle(&self.with_clock(inputs, true), state)?;
        let fall = self.settle(&low, &high.state)?;
        Ok(ClockResult {
            state: fall.state,
            q_trace: [before, self.q(&high.values), self.q(&fall.values)],
            values: fall.values,
        })
    }
}

/// One enumerated (state, input) configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckRow {
    pub state: bool,
    pub inputs: Assignment,
    pub expected: bool,
    pub got: Option<bool>,
    pub passed: bool,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharacteristicReport {
    pub design: String,
    pub characteristic: Characteristic,
    pub formula: &'static str,
    pub rows: Vec<CheckRow>,
    /// Largest settle count seen where a fixed point exists.
    pub max_iterations: usize,
}

impl CharacteristicReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn pass_count(&self) -> usize {
        self.rows.iter().filter(|r| r.passed).count()
    }
}

fn fmt_inputs(a: &Assignment) -> String {
    a.iter()
        .map(|(k, v)| format!("{k}={}", u8::from(*v)))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Checks every (state, legal input) pair of a level-sensitive design with one
/// evaluation per transition, and confirms that settling agrees: it must
/// reach the fixed point when the equation has one and report oscillation
/// when it toggles forever.
fn verify_level(spec: &LatchSpec) -> Result<CharacteristicReport, SeqError> {
    let ch = spec.characteristic;
    let mut rows = Vec::new();
    let mut max_iterations = 0;
    for q in [false, true] {
        for inputs in ch.legal_inputs() {
            let expected = ch.next(q, &inputs);
            let (next, values) = spec.step(&inputs, &spec.committed(q))?;
            let mut problems = Vec::new();
            if next.iter().any(|&b| b != expected) {
                problems.push(format!("feedback {next:?}"));
            }
            let got = spec.q(&values);
            if got != expected {
                problems.push(format!("Q output {}", u8::from(got)));
            }
            let fixed = ch.next(expected, &inputs) == expected;
            let note = match spec.settle(&inputs, &spec.committed(q)) {
                Ok(s) if fixed => {
                    max_iterations = max_iterations.max(s.iterations);
                    if s.state != spec.committed(expected) {
                        problems.push(format!("settled to {:?}", s.state));
                    }
                    if spec.qn(&s.values).is_some_and(|qn| qn == spec.q(&s.values)) {
                        problems.push("QN equals Q".to_string());
                    }
                    format!("settles in {}", s.iterations)
                }
                Ok(s) => {
                    problems.push(format!(
                        "settled to {:?} although the equation toggles",
                        s.state
                    ));
                    String::new()
                }
                Err(SeqError::Oscillation { .. }) if !fixed => {
                    "oscillates (race-around)".to_string()
                }
                Err(e) => {
                    problems.push(e.to_string());
                    String::new()
                }
            };
            let passed = problems.is_empty();
            rows.push(CheckRow {
                state: q,
                inputs,
                expected,
                got: Some(got),
                passed,
                note: if passed { note } else { problems.join("; ") },
            });
        }
    }
    Ok(CharacteristicReport {
        design: spec.id.clone(),
        characteristic: ch,
        formula: ch.formula(),
        rows,
        max_iterations,
    })
}

/// Checks every (state, legal input) pair of a master-slave design over one
/// full clock: Q must hold through phase 1 and take the characteristic value
/// after phase 2.
fn verify_master_slave(spec: &LatchSpec) -> Result<CharacteristicReport, SeqError> {
    let ch = spec.characteristic;
    let mut rows = Vec::new();
    for q in [false, true] {
        for inputs in ch.legal_inputs() {
            let expected = ch.next(q, &inputs);
            let (got, note) = match spec.clock_step(&inputs, &spec.committed(q)) {
                Ok(r) => {
                    let mut problems = Vec::new();
                    if r.q_trace[0] != q || r.q_trace[1] != q {
                        problems.push(format!("Q moved before the falling edge {:?}", r.q_trace));
                    }
                    if r.q() != expected {
                        problems.push(format!("Q output {}", u8::from(r.q())));
                    }
                    if r.state != spec.committed(expected) {
                        problems.push(format!("committed {:?}", r.state));
                    }
                    if r.q_changes() > 1 {
                        problems.push("Q changed twice".to_string());
                    }
                    if spec.qn(&r.values).is_some_and(|qn| qn == r.q()) {
                        problems.push("QN equals Q".to_string());
                    }
                    (Some(r.q()), problems.join("; "))
                }
                Err(e) => (None, e.to_string()),
            };
            let passed = got == Some(expected) && note.is_empty();
            rows.push(CheckRow {
                state: q,
                inputs,
                expected,
                got,
                passed,
                note: if passed {
                    "one full clock".to_string()
                } else {
                    note
                },
            });
        }
    }
    Ok(CharacteristicReport {
        design: spec.id.clone(),
        characteristic: ch,
        formula: ch.formula(),
        rows,
        max_iterations: 0,
    })
}

/// Exhaustive characteristic check of a built-in design.
pub fn verify_characteristic(id: &str) -> Result<CharacteristicReport, SeqError> {
    verify_spec(&builtin_design(id)?)
}

pub fn verify_spec(spec: &LatchSpec) -> Result<CharacteristicReport, SeqError> {
    match spec.clocking {
        Clocking::Level => verify_level(spec),
        Clocking::MasterSlave => verify_master_slave(spec),
    }
}

impl CheckRow {
    pub fn describe(&self) -> String {
        format!(
            "Q={} {} -> expected {} got {} {}",
            u8::from(self.state),
            fmt_inputs(&self.inputs),
            u8::from(self.expected),
            self.got
                .map_or("-".to_string(), |g| u8::from(g).to_string()),
            self.note
        )
    }
}
