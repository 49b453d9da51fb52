// SPDX-License-Identifier: Apache-2.0

//! Reversible gates modelled as permutations of basis codes.
//!
//! A `k`-line gate acts on `2^k` codes. Line 0 (input `A`) is the most
//! significant bit of a code, so code order is exactly truth-table row order:
//! code 4 on three lines is `A=1, B=0, C=0`.

use std::fmt;

use thiserror::Error;

/// Widest gate or bit vector this module accepts.
pub const MAX_WIDTH: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("table length {0} is not a power of two")]
    LengthNotPowerOfTwo(usize),
    #[error("entry {value} at index {index} is out of range for a table of {len} codes")]
    EntryOutOfRange {
        index: usize,
        value: usize,
        len: usize,
    },
    #[error("code {0} appears more than once; the table is not a bijection")]
    NotBijective(usize),
    #[error("width {0} is outside 1..={MAX_WIDTH}")]
    BadWidth(usize),
    #[error("code {code} does not fit in {width} bits")]
    CodeOutOfRange { code: usize, width: usize },
    #[error("width mismatch: gate `{gate}` has {expected} lines but the input has {found}")]
    WidthMismatch {
        gate: String,
        expected: usize,
        found: usize,
    },
    #[error("output index {index} is out of range for a {width}-line gate")]
    OutputIndex { index: usize, width: usize },
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("gate `{name}`: {reason}")]
    BadGate { name: String, reason: String },
}

fn check_width(width: usize) -> Result<(), PermError> {
    if (1..=MAX_WIDTH).contains(&width) {
        Ok(())
    } else {
        Err(PermError::BadWidth(width))
    }
}

/// Reads bit `line` of `code` on a `width`-line gate (line 0 is the MSB).
#[inline]
pub fn code_bit(code: usize, line: usize, width: usize) -> bool {
    (code >> (width - 1 - line)) & 1 == 1
}

/// Ordered line values; index 0 is line `A`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    bits: Vec<bool>,
}

impl BitVector {
    pub fn new(bits: Vec<bool>) -> Result<Self, PermError> {
        check_width(bits.len())?;
        Ok(Self { bits })
    }

    pub fn from_code(width: usize, code: usize) -> Result<Self, PermError> {
        check_width(width)?;
        if code >= 1 << width {
            return Err(PermError::CodeOutOfRange { code, width });
        }
        Ok(Self {
            bits: (0..width).map(|line| code_bit(code, line, width)).collect(),
        })
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn code(&self) -> usize {
        self.bits
            .iter()
            .fold(0, |acc, &b| (acc << 1) | usize::from(b))
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Checks that a raw output-code table is a bijection on `0..table.len()`.
///
/// Returns `Ok(false)` for a well-formed table with a repeated code, and an
/// error if the table itself is malformed.
pub fn is_bijective(table: &[usize]) -> Result<bool, PermError> {
    let len = table.len();
    if !len.is_power_of_two() {
        return Err(PermError::LengthNotPowerOfTwo(len));
    }
    let mut seen = vec![false; len];
    let mut bijective = true;
    for (index, &value) in table.iter().enumerate() {
        if value >= len {
            return Err(PermError::EntryOutOfRange { index, value, len });
        }
        if std::mem::replace(&mut seen[value], true) {
            bijective = false;
        }
    }
    Ok(bijective)
}

/// A bijection on the `2^width` basis codes: `map[i]` is the output code for
/// input code `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    width: usize,
    map: Vec<u8>,
}

impl Permutation {
    pub fn new(width: usize, map: Vec<u8>) -> Result<Self, PermError> {
        check_width(width)?;
        let len = 1usize << width;
        if map.len() != len {
            return Err(PermError::BadGate {
                name: "<table>".into(),
                reason: format!(
                    "expected {len} entries for width {width}, got {}",
                    map.len()
                ),
            });
        }
        let table: Vec<usize> = map.iter().map(|&c| c as usize).collect();
        if !is_bijective(&table)? {
            let mut seen = vec![false; len];
            let dup = table
                .iter()
                .copied()
                .find(|&c| std::mem::replace(&mut seen[c], true))
                .unwrap_or_default();
            return Err(PermError::NotBijective(dup));
        }
        Ok(Self { width, map })
    }

    pub fn from_codes(width: usize, codes: &[usize]) -> Result<Self, PermError> {
        let len = 1usize << width.min(MAX_WIDTH);
        if let Some((index, &value)) = codes.iter().enumerate().find(|(_, &c)| c >= len) {
            return Err(PermError::EntryOutOfRange { index, value, len });
        }
        Self::new(width, codes.iter().map(|&c| c as u8).collect())
    }

    /// Builds a permutation from a per-row function on line values.
    pub fn from_fn(width: usize, f: impl Fn(&[bool]) -> Vec<bool>) -> Result<Self, PermError> {
        check_width(width)?;
        let mut map = Vec::with_capacity(1 << width);
        for code in 0..1usize << width {
            let input = BitVector::from_code(width, code)?;
            let out = BitVector::new(f(input.bits()))?;
            if out.width() != width {
                return Err(PermError::BadWidth(out.width()));
            }
            map.push(out.code() as u8);
        }
        Self::new(width, map)
    }

    pub fn identity(width: usize) -> Result<Self, PermError> {
        check_width(width)?;
        Ok(Self {
            width,
            map: (0..1u16 << width).map(|c| c as u8).collect(),
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn map(&self) -> &[u8] {
        &self.map
    }

    pub fn codes(&self) -> Vec<usize> {
        self.map.iter().map(|&c| c as usize).collect()
    }

    #[inline]
    pub fn apply(&self, code: usize) -> usize {
        self.map[code] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &c)| i == c as usize)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.map.len()];
        for (i, &o) in self.map.iter().enumerate() {
            inv[o as usize] = i as u8;
        }
        Self {
            width: self.width,
            map: inv,
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Permutation) -> Result<Self, PermError> {
        if next.width != self.width {
            return Err(PermError::WidthMismatch {
                gate: "<compose>".into(),
                expected: self.width,
                found: next.width,
            });
        }
        Ok(Self {
            width: self.width,
            map: self.map.iter().map(|&c| next.map[c as usize]).collect(),
        })
    }

    /// Output line `index` as a boolean function over all input codes.
    pub fn column(&self, index: usize) -> Result<Vec<bool>, PermError> {
        if index >= self.width {
            return Err(PermError::OutputIndex {
                index,
                width: self.width,
            });
        }
        Ok(self
            .map
            .iter()
            .map(|&c| code_bit(c as usize, index, self.width))
            .collect())
    }

    /// True when every output column has exactly `2^(width-1)` ones.
    pub fn is_balanced(&self) -> bool {
        let half = 1usize << (self.width - 1);
        (0..self.width).all(|i| {
            self.column(i)
                .map(|col| col.iter().filter(|&&b| b).count() == half)
                .unwrap_or(false)
        })
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

/// A named reversible gate with its port labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateDef {
    pub name: String,
    pub perm: Permutation,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    /// Published quantum cost for the gate, if one was stated.
    pub claimed_cost: Option<u32>,
}

impl GateDef {
    pub fn new(
        name: impl Into<String>,
        perm: Permutation,
        inputs: &[&str],
        outputs: &[&str],
        claimed_cost: Option<u32>,
    ) -> Result<Self, PermError> {
        let name = name.into();
        if inputs.len() != perm.width() || outputs.len() != perm.width() {
            return Err(PermError::BadGate {
                name,
                reason: format!(
                    "{} input and {} output labels for a {}-line permutation",
                    inputs.len(),
                    outputs.len(),
                    perm.width()
                ),
            });
        }
        Ok(Self {
            name,
            perm,
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            outputs: outputs.iter().map(|s| s.to_string()).collect(),
            claimed_cost,
        })
    }

    pub fn width(&self) -> usize {
        self.perm.width()
    }
}

pub fn apply_gate(gate: &GateDef, input: &BitVector) -> Result<BitVector, PermError> {
    if input.width() != gate.width() {
        return Err(PermError::WidthMismatch {
            gate: gate.name.clone(),
            expected: gate.width(),
            found: input.width(),
        });
    }
    BitVector::from_code(gate.width(), gate.perm.apply(input.code()))
}

pub fn output_column(gate: &GateDef, output_index: usize) -> Result<Vec<bool>, PermError> {
    gate.perm.column(output_index)
}

/// Names accepted by [`builtin_gate`], in listing order.
pub const BUILTIN_GATES: [&str; 8] = ["NOT", "FG", "DFG", "TG", "FRG", "PG", "SAM", "MPG"];

/// Frozen MPG permutation over inputs `(Q, R, S)`.
///
/// Produced by `synth::derive_mpg` with an exhaustive cost-6 search: output 2 is
/// the SR next state `S + R'Q` on every row with `R·S = 0`, output 0 is its
/// complement on the four rows where the latch is stable (codes 0, 2, 4, 5).
/// No permutation meeting those constraints costs less than 6.
pub const MPG_MAP: [u8; 8] = [4, 7, 6, 5, 3, 1, 0, 2];

fn three_line(
    name: &str,
    claimed: Option<u32>,
    outputs: &[&str],
    f: impl Fn(bool, bool, bool) -> (bool, bool, bool),
) -> GateDef {
    let perm = Permutation::from_fn(3, |x| {
        let (p, q, r) = f(x[0], x[1], x[2]);
        vec![p, q, r]
    })
    .expect("builtin gate tables are bijective");
    GateDef::new(name, perm, &["A", "B", "C"], outputs, claimed).expect("three labels")
}

/// Looks up one of the built-in gates by name (case-insensitive).
pub fn builtin_gate(name: &str) -> Result<GateDef, PermError> {
    let pqr = ["P", "Q", "R"];
    let gate = match name.to_ascii_uppercase().as_str() {
        "NOT" => {
            let perm = Permutation::new(1, vec![1, 0])?;
            GateDef::new("NOT", perm, &["A"], &["P"], Some(1))?
        }
        "FG" => {
            let perm = Permutation::from_fn(2, |x| vec![x[0], x[0] ^ x[1]])?;
            GateDef::new("FG", perm, &["A", "B"], &["P", "Q"], Some(1))?
        }
        "DFG" => three_line("DFG", Some(2), &pqr, |a, b, c| (a, a ^ b, a ^ c)),
        "TG" => three_line("TG", Some(5), &pqr, |a, b, c| (a, b, (a & b) ^ c)),
        // Fredkin: A=1 swaps B and C.
        "FRG" => three_line("FRG", Some(5), &pqr, |a, b, c| {
            (a, (!a & b) ^ (a & c), (!a & c) ^ (a & b))
        }),
        "PG" => three_line("PG", Some(4), &pqr, |a, b, c| (a, a ^ b, (a & b) ^ c)),
        // Closed form of the published SAM truth table.
        "SAM" => three_line("SAM", Some(4), &pqr, |a, b, c| {
            (!a, (!a & b) ^ (a & !c), (!a & c) ^ (a & b))
        }),
        "MPG" => {
            let perm = Permutation::new(3, MPG_MAP.to_vec())?;
            GateDef::new("MPG", perm, &["A", "B", "C"], &pqr, None)?
        }
        _ => return Err(PermError::UnknownGate(name.to_string())),
    };
    Ok(gate)
}

/// The SAM output table obtained by evaluating the printed closed form
/// `P = A', Q = A'B ^ A'C, R = A'C ^ AB`, which disagrees with the truth table
/// on rows 4..8 and is not a bijection.
pub fn sam_printed_formula_table() -> Vec<usize> {
    (0..8usize)
        .map(|code| {
            let a = code_bit(code, 0, 3);
            let b = code_bit(code, 1, 3);
            let c = code_bit(code, 2, 3);
            let p = !a;
            let q = (!a & b) ^ (!a & c);
            let r = (!a & c) ^ (a & b);
            (usize::from(p) << 2) | (usize::from(q) << 1) | usize::from(r)
        })
        .collect()
}
