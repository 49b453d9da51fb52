// SPDX-License-Identifier: Apache-2.0

//! Published figures paired with recomputed values.

use serde::Serialize;

use super::{builtin_design, verify_spec, Characteristic, SeqError, BUILTIN_DESIGNS};
use crate::netlist::Assignment;
use crate::perm::{builtin_gate, code_bit, is_bijective, sam_printed_formula_table, BUILTIN_GATES};
use crate::quantum::verify_registry;

/// MPG cost implied by the published SR figures (5 = MPG + one FG).
pub const MPG_IMPLIED_COST: u32 = 4;

/// Per-design metrics carried by the comparison tables, in column order.
pub const TABLE_METRICS: [&str; 3] = ["quantum_cost", "delay", "garbage"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Every published value equals the achieved one.
    Match,
    /// The prose and table disagree; the prose value is achieved.
    TextMatches,
    /// The prose and table disagree; the table value is achieved.
    TableMatches,
    Mismatch,
}

impl Verdict {
    pub fn of(text: Option<i64>, table: Option<i64>, achieved: i64) -> Self {
        match (text, table) {
            (Some(t), Some(b)) if t != b => {
                if t == achieved {
                    Verdict::TextMatches
                } else if b == achieved {
                    Verdict::TableMatches
                } else {
                    Verdict::Mismatch
                }
            }
            (None, None) => Verdict::Mismatch,
            _ if text.or(table) == Some(achieved) => Verdict::Match,
            _ => Verdict::Mismatch,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Match => "match",
            Verdict::TextMatches => "text-matches",
            Verdict::TableMatches => "table-matches",
            Verdict::Mismatch => "mismatch",
        }
    }

    /// Prose and table disagree.
    pub fn is_conflict(self) -> bool {
        matches!(self, Verdict::TextMatches | Verdict::TableMatches)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimRecord {
    pub design: String,
    pub metric: String,
    pub text_claim: Option<i64>,
    pub table_claim: Option<i64>,
    pub achieved: i64,
    pub verdict: Verdict,
}

impl ClaimRecord {
    pub fn new(
        design: impl Into<String>,
        metric: impl Into<String>,
        text_claim: Option<i64>,
        table_claim: Option<i64>,
        achieved: i64,
    ) -> Self {
        Self {
            design: design.into(),
            metric: metric.into(),
            text_claim,
            table_claim,
            achieved,
            verdict: Verdict::of(text_claim, table_claim, achieved),
        }
    }
}

/// Published (cost, delay, garbage) of one design, from the prose and from
/// its table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DesignClaims {
    pub id: &'static str,
    pub prose: [i64; 3],
    pub table: [i64; 3],
}

const DESIGN_CLAIMS: [DesignClaims; 8] = [
    DesignClaims {
        id: "sr",
        prose: [5, 5, 1],
        table: [5, 5, 1],
    },
    DesignClaims {
        id: "gated_sr",
        prose: [10, 10, 2],
        table: [11, 11, 2],
    },
    DesignClaims {
        id: "ms_sr",
        prose: [14, 14, 4],
        table: [15, 15, 4],
    },
    DesignClaims {
        id: "jk",
        prose: [5, 5, 1],
        table: [5, 5, 1],
    },
    DesignClaims {
        id: "gated_jk",
        prose: [10, 10, 2],
        table: [10, 10, 2],
    },
    DesignClaims {
        id: "ms_jk",
        prose: [15, 15, 4],
        table: [15, 15, 4],
    },
    DesignClaims {
        id: "gated_d",
        prose: [6, 6, 1],
        table: [6, 6, 1],
    },
    DesignClaims {
        id: "ms_d",
        prose: [11, 11, 3],
        table: [11, 11, 3],
    },
];

pub fn published_design(id: &str) -> Option<DesignClaims> {
    DESIGN_CLAIMS.iter().copied().find(|d| d.id == id)
}

/// A prior design a table compares against, with the printed percentages.
/// `prose_percent` is `None` where the prose gives no figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PriorDesign {
    pub design: &'static str,
    pub label: &'static str,
    pub existing: [i64; 3],
    pub table_percent: [i64; 3],
    pub prose_percent: [Option<i64>; 3],
}

const fn same(p: [i64; 3]) -> [Option<i64>; 3] {
    [Some(p[0]), Some(p[1]), Some(p[2])]
}

const PRIOR_DESIGNS: [PriorDesign; 14] = [
    PriorDesign {
        design: "sr",
        label: "rice2008",
        existing: [10, 10, 2],
        table_percent: [50, 50, 50],
        prose_percent: same([50, 50, 50]),
    },
    PriorDesign {
        design: "sr",
        label: "thapliyal2010",
        existing: [8, 8, 2],
        table_percent: [37, 37, 50],
        prose_percent: same([37, 37, 50]),
    },
    PriorDesign {
        design: "gated_sr",
        label: "thapliyal2010",
        existing: [17, 17, 3],
        table_percent: [41, 41, 33],
        prose_percent: same([41, 41, 33]),
    },
    PriorDesign {
        design: "ms_sr",
        label: "thapliyal2010",
        existing: [22, 22, 4],
        table_percent: [36, 36, 0],
        prose_percent: [Some(36), Some(36), None],
    },
    PriorDesign {
        design: "jk",
        label: "thapliyal2010",
        existing: [13, 13, 3],
        table_percent: [62, 62, 67],
        prose_percent: same([62, 62, 67]),
    },
    PriorDesign {
        design: "jk",
        label: "jamal2012",
        existing: [12, 12, 3],
        table_percent: [58, 58, 67],
        prose_percent: same([58, 58, 67]),
    },
    PriorDesign {
        design: "gated_jk",
        label: "thapliyal2007",
        existing: [16, 16, 3],
        table_percent: [37, 37, 33],
        prose_percent: same([37, 37, 33]),
    },
    PriorDesign {
        design: "gated_jk",
        label: "thapliyal2010",
        existing: [13, 13, 3],
        table_percent: [23, 23, 33],
        prose_percent: same([23, 23, 33]),
    },
    PriorDesign {
        design: "ms_jk",
        label: "thapliyal2007",
        existing: [24, 23, 5],
        table_percent: [37, 37, 20],
        prose_percent: [Some(37), Some(37), None],
    },
    PriorDesign {
        design: "ms_jk",
        label: "thapliyal2010",
        existing: [19, 19, 4],
        table_percent: [21, 21, 0],
        prose_percent: [Some(21), Some(21), None],
    },
    PriorDesign {
        design: "gated_d",
        label: "thapliyal2010",
        existing: [7, 7, 2],
        table_percent: [14, 14, 50],
        prose_percent: same([14, 14, 50]),
    },
    PriorDesign {
        design: "gated_d",
        label: "jamal2012",
        existing: [7, 7, 2],
        table_percent: [14, 14, 50],
        prose_percent: same([14, 14, 50]),
    },
    PriorDesign {
        design: "ms_d",
        label: "chuang2008",
        existing: [14, 14, 3],
        table_percent: [21, 21, 0],
        prose_percent: [Some(21), Some(21), None],
    },
    PriorDesign {
        design: "ms_d",
        label: "thapliyal2010",
        existing: [13, 13, 3],
        table_percent: [15, 15, 0],
        prose_percent: [Some(21), Some(21), None],
    },
];

/// Percentage saving of `new` over `old`, rounded to the nearest integer
/// with ties toward zero.
pub fn improvement_percent(old: i64, new: i64) -> Result<i64, SeqError> {
    if old <= 0 {
        return Err(SeqError::BadBaseline(old));
    }
    let num = (old - new) * 100;
    let (mut q, r) = (num.abs() / old, num.abs() % old);
    if 2 * r > old {
        q += 1;
    }
    Ok(q * num.signum())
}

/// One recomputed improvement cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImprovementRow {
    pub design: String,
    pub versus: String,
    pub metric: String,
    pub existing: i64,
    /// The prose value where prose and table disagree.
    pub proposed: i64,
    pub printed: i64,
    pub prose_printed: Option<i64>,
    pub achieved: i64,
}

impl ImprovementRow {
    pub fn reproduced(&self) -> bool {
        self.achieved == self.printed
    }
}

/// Every improvement cell of the comparison tables, in table order.
pub fn improvement_rows() -> Vec<ImprovementRow> {
    let mut rows = Vec::new();
    for prior in &PRIOR_DESIGNS {
        let claims = published_design(prior.design).expect("every prior design has claims");
        for (k, metric) in TABLE_METRICS.iter().enumerate() {
            rows.push(ImprovementRow {
                design: prior.design.to_string(),
                versus: prior.label.to_string(),
                metric: metric.to_string(),
                existing: prior.existing[k],
                proposed: claims.prose[k],
                printed: prior.table_percent[k],
                prose_printed: prior.prose_percent[k],
                achieved: improvement_percent(prior.existing[k], claims.prose[k])
                    .expect("published baselines are positive"),
            });
        }
    }
    rows
}

fn bit(a: &Assignment, label: &str) -> bool {
    a.get(label).copied().unwrap_or(false)
}

/// Next-state equations exactly as printed, where the prose prints one.
fn printed_characteristic(id: &str) -> Option<fn(bool, &Assignment) -> bool> {
    Some(match id {
        "sr" => |q, a| bit(a, "S") || (!bit(a, "R") && q),
        // Q = JQ' + Q'K
        "jk" => |q, a| (bit(a, "J") && !q) || (!q && bit(a, "K")),
        "gated_jk" => |q, a| {
            (!bit(a, "CLK") && q) || (bit(a, "CLK") && ((bit(a, "J") && !q) || (q && !bit(a, "K"))))
        },
        // Q = CLK.Q + CLK.D
        "gated_d" => |q, a| (bit(a, "CLK") && q) || (bit(a, "CLK") && bit(a, "D")),
        _ => return None,
    })
}

fn agrees(ch: Characteristic, f: fn(bool, &Assignment) -> bool) -> bool {
    [false, true]
        .iter()
        .all(|&q| ch.legal_inputs().iter().all(|a| f(q, a) == ch.next(q, a)))
}

/// SAM with C = 0 yields (NOT A, A OR B, A AND B).
fn sam_universal_with_c0() -> bool {
    let sam = builtin_gate("SAM").expect("SAM is built in");
    (0..4).all(|ab| {
        let (a, b) = (ab >> 1 & 1 == 1, ab & 1 == 1);
        let out = sam.perm.apply(ab << 1);
        code_bit(out, 0, 3) == !a
            && code_bit(out, 1, 3) == (a || b)
            && code_bit(out, 2, 3) == (a && b)
    })
}

fn gate_records() -> Vec<ClaimRecord> {
    let registry = verify_registry();
    let mut out = Vec::new();
    for name in BUILTIN_GATES {
        let entry = registry.get(name).expect("registry covers every gate");
        let achieved = i64::from(entry.cost);
        if name == "MPG" {
            out.push(ClaimRecord::new(
                name,
                "quantum_cost",
                None,
                Some(i64::from(MPG_IMPLIED_COST)),
                achieved,
            ));
        } else if let Some(c) = entry.claimed {
            out.push(ClaimRecord::new(
                name,
                "quantum_cost",
                Some(i64::from(c)),
                None,
                achieved,
            ));
        }
    }
    let printed = is_bijective(&sam_printed_formula_table()).expect("the table has eight rows");
    let table = builtin_gate("SAM").expect("SAM is built in").perm;
    let table_ok = is_bijective(&table.codes()).expect("the table has eight rows");
    out.push(ClaimRecord::new(
        "SAM",
        "printed_formula_bijective",
        Some(1),
        None,
        i64::from(printed),
    ));
    out.push(ClaimRecord::new(
        "SAM",
        "table_bijective",
        None,
        Some(1),
        i64::from(table_ok),
    ));
    out.push(ClaimRecord::new(
        "SAM",
        "universal_with_c0",
        Some(1),
        None,
        i64::from(sam_universal_with_c0()),
    ));
    out
}

fn design_records(id: &str) -> Result<Vec<ClaimRecord>, SeqError> {
    let spec = builtin_design(id)?;
    let claims = published_design(id).ok_or_else(|| SeqError::UnknownDesign(id.to_string()))?;
    let m = spec.netlist.metrics()?;
    let nominal = spec.netlist.cost_with(|g| {
        let def = builtin_gate(g).ok()?;
        def.claimed_cost
            .or((def.name == "MPG").then_some(MPG_IMPLIED_COST))
    })?;
    let achieved = [m.quantum_cost, m.serial_delay, m.garbage].map(i64::from);
    let mut out = Vec::new();
    for (k, metric) in TABLE_METRICS.iter().enumerate() {
        out.push(ClaimRecord::new(
            id,
            *metric,
            Some(claims.prose[k]),
            Some(claims.table[k]),
            achieved[k],
        ));
        if k == 0 {
            out.push(ClaimRecord::new(
                id,
                "quantum_cost_claimed_gates",
                Some(claims.prose[0]),
                Some(claims.table[0]),
                i64::from(nominal),
            ));
        }
    }
    let verified = verify_spec(&spec)?.passed();
    out.push(ClaimRecord::new(
        id,
        "characteristic",
        Some(1),
        None,
        i64::from(verified),
    ));
    if let Some(f) = printed_characteristic(id) {
        out.push(ClaimRecord::new(
            id,
            "printed_characteristic",
            Some(1),
            None,
            i64::from(agrees(spec.characteristic, f)),
        ));
    }
    for prior in PRIOR_DESIGNS.iter().filter(|p| p.design == id) {
        for (k, metric) in TABLE_METRICS.iter().enumerate() {
            out.push(ClaimRecord::new(
                id,
                format!("improvement_{metric}_vs_{}", prior.label),
                prior.prose_percent[k],
                Some(prior.table_percent[k]),
                improvement_percent(prior.existing[k], claims.prose[k])?,
            ));
        }
    }
    Ok(out)
}

/// Every published claim with its recomputed value: gates first, then the
/// designs in listing order.
pub fn claims_ledger() -> Result<Vec<ClaimRecord>, SeqError> {
    let mut out = gate_records();
    for id in BUILTIN_DESIGNS {
        out.extend(design_records(id)?);
    }
    Ok(out)
}
