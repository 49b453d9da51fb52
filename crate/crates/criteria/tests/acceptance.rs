// SPDX-License-Identifier: Apache-2.0

//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use revlogic::perm::{builtin_gate, code_bit, is_bijective, Permutation, BUILTIN_GATES, MPG_MAP};
use revlogic::quantum::{
    registered_decomposition, simulate_basis, v_matrix, verify_registry, Unitary,
};
use revlogic::seq::{
    builtin_design, claims_ledger, improvement_percent, improvement_rows, verify_spec, ClaimRecord,
    Clocking, Verdict, BUILTIN_DESIGNS,
};
use revlogic::synth::{build_cost_atlas, derive_mpg, min_cost_synthesis, CostAtlas, CostCertifier};

/// Unitary identities.
const ALGEBRA_TOL: f64 = 1e-12;
/// Decomposition equivalence on basis states.
const EQUIV_TOL: f64 = 1e-9;
/// Gate-library and sequential checks.
const FAST_BUDGET: Duration = Duration::from_secs(1);
/// Atlas build.
const ATLAS_BUDGET: Duration = Duration::from_secs(300);

type Outcome = Result<String, String>;

fn report(n: u32, title: &str, outcome: Outcome, failures: &mut u32) {
    match outcome {
        Ok(detail) => println!("PASS  {n:>2}  {title}: {detail}"),
        Err(detail) => {
            *failures += 1;
            println!("FAIL  {n:>2}  {title}: {detail}");
        }
    }
}

fn all_or(problems: Vec<String>, ok: String) -> Outcome {
    if problems.is_empty() {
        Ok(ok)
    } else {
        Err(problems.join("; "))
    }
}

/// Published SAM truth table: rows (A,B,C) -> (P,Q,R).
const SAM_TABLE: [[u8; 6]; 8] = [
    [0, 0, 0, 1, 0, 0],
    [0, 0, 1, 1, 0, 1],
    [0, 1, 0, 1, 1, 0],
    [0, 1, 1, 1, 1, 1],
    [1, 0, 0, 0, 1, 0],
    [1, 0, 1, 0, 0, 0],
    [1, 1, 0, 0, 1, 1],
    [1, 1, 1, 0, 0, 1],
];

fn gate_library() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    for name in BUILTIN_GATES {
        let g = builtin_gate(name).map_err(|e| e.to_string())?;
        if !is_bijective(&g.perm.codes()).unwrap() || !g.perm.is_balanced() {
            problems.push(format!("{name} is not a balanced bijection"));
        }
    }
    let sam = builtin_gate("SAM").unwrap();
    for row in SAM_TABLE {
        let input = usize::from(row[0] << 2 | row[1] << 1 | row[2]);
        let out = sam.perm.apply(input);
        let expected = usize::from(row[3] << 2 | row[4] << 1 | row[5]);
        if out != expected {
            problems.push(format!("SAM row {input}: {out} != {expected}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= FAST_BUDGET {
        problems.push(format!("took {elapsed:?}"));
    }
    all_or(
        problems,
        format!("8 gates balanced and bijective, SAM 8/8 rows, {elapsed:?}"),
    )
}

fn quantum_algebra() -> Outcome {
    let v = v_matrix();
    let v = Unitary::from_entries(1, v.iter().flatten().copied().collect()).unwrap();
    let x = Unitary::from_permutation(&Permutation::new(1, vec![1, 0]).unwrap()).unwrap();
    let id = Unitary::identity(1).unwrap();
    let v2 = v.mul(&v).unwrap().max_distance(&x).unwrap();
    let vvd = v.mul(&v.adjoint()).unwrap().max_distance(&id).unwrap();
    let mut problems = Vec::new();
    if v2 > ALGEBRA_TOL || vvd > ALGEBRA_TOL {
        problems.push(format!("|V^2 - X| = {v2:e}, |VV' - I| = {vvd:e}"));
    }
    let mut worst: f64 = 0.0;
    for name in BUILTIN_GATES {
        let perm = builtin_gate(name).unwrap().perm;
        let c = registered_decomposition(name).unwrap();
        let mut phase = None;
        for code in 0..1usize << c.width() {
            let state = simulate_basis(&c, code).unwrap();
            let target = perm.apply(code);
            let here = state[target];
            let reference = *phase.get_or_insert(here);
            let stray = state
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != target)
                .map(|(_, a)| a.norm())
                .fold(0.0, f64::max);
            worst = worst
                .max(stray)
                .max((here - reference).norm())
                .max((here.norm() - 1.0).abs());
        }
    }
    if worst > EQUIV_TOL {
        problems.push(format!("basis-state deviation {worst:e}"));
    }
    all_or(
        problems,
        format!("|V^2 - X| = {v2:.1e}, |VV' - I| = {vvd:.1e}, 8 decompositions within {worst:.1e}"),
    )
}

fn cost_claims(atlas: &CostAtlas, build: Duration) -> Outcome {
    let registry = verify_registry();
    let mut problems = Vec::new();
    let mut seen = Vec::new();
    for (name, claim) in [("FG", 1), ("DFG", 2), ("TG", 5), ("FRG", 5), ("PG", 4)] {
        let cost = registry.get(name).unwrap().cost;
        seen.push(format!("{name}={cost}"));
        if cost != claim {
            problems.push(format!("{name} registered cost {cost}, claim {claim}"));
        }
    }
    for (name, min) in [("TG", 5), ("PG", 4)] {
        let got = atlas.cost(&builtin_gate(name).unwrap().perm);
        if got != Some(min) {
            problems.push(format!("{name} atlas cost {got:?}, expected {min}"));
        }
    }
    if build >= ATLAS_BUDGET {
        problems.push(format!("atlas build took {build:?}"));
    }
    let summary = format!(
        "{}; TG none <= 4, PG none <= 3; atlas(3,5) in {build:.1?}",
        seen.join(" ")
    );
    all_or(problems, summary.clone()).map_err(|p| format!("{p} [{summary}]"))
}

fn sam_cost(atlas: &CostAtlas, certifier: &CostCertifier, ledger: &[ClaimRecord]) -> Outcome {
    let sam = builtin_gate("SAM").unwrap().perm;
    let found = min_cost_synthesis(atlas, &sam, 5).map_err(|e| e.to_string())?;
    let exact = certifier
        .cost(&sam, certifier.reach())
        .map_err(|e| e.to_string())?;
    let row = ledger
        .iter()
        .find(|r| r.design == "SAM" && r.metric == "quantum_cost")
        .ok_or("no ledger row")?;
    let detail = format!(
        "exact minimum {exact:?} (searched to {}), ledger claim {:?} achieved {} ({})",
        certifier.reach(),
        row.text_claim,
        row.achieved,
        row.verdict.as_str()
    );
    match found {
        Some((c, _)) if c <= 5 => Ok(detail),
        _ => Err(format!("no realization at cost <= 5; {detail}")),
    }
}

fn sr_next(code: usize) -> bool {
    let (q, r, s) = (
        code_bit(code, 0, 3),
        code_bit(code, 1, 3),
        code_bit(code, 2, 3),
    );
    s || (!r && q)
}

fn mpg_derivation(atlas: &CostAtlas, certifier: &CostCertifier) -> Outcome {
    let d = derive_mpg(atlas, certifier).map_err(|e| e.to_string())?;
    let again = derive_mpg(atlas, certifier).map_err(|e| e.to_string())?;
    let mut problems = Vec::new();
    let (mut legal, mut stable) = (0, 0);
    for code in 0..8 {
        let (q, r, s) = (
            code_bit(code, 0, 3),
            code_bit(code, 1, 3),
            code_bit(code, 2, 3),
        );
        if r && s {
            continue;
        }
        let out = d.perm.apply(code);
        legal += usize::from(code_bit(out, 2, 3) == sr_next(code));
        if sr_next(code) == q {
            stable += usize::from(code_bit(out, d.complement_output, 3) == !q);
        }
    }
    if (legal, stable) != (6, 4) {
        problems.push(format!(
            "constraints hold on {legal}/6 legal and {stable}/4 stable rows"
        ));
    }
    if !is_bijective(&d.perm.codes()).unwrap() {
        problems.push("not a bijection".into());
    }
    let certified = certifier
        .cost(&d.perm, certifier.reach())
        .map_err(|e| e.to_string())?;
    let floor = d.placement_costs.iter().flatten().min().copied();
    if certified != Some(d.cost) || floor != Some(d.cost) {
        problems.push(format!(
            "cost {} vs certified {certified:?}, floor {floor:?}",
            d.cost
        ));
    }
    if again.perm != d.perm || d.perm.map() != MPG_MAP {
        problems.push(format!("nondeterministic or unfrozen result {}", d.perm));
    }
    all_or(
        problems,
        format!(
            "{} at certified minimum cost {}, complement on output {}, 6/6 legal and 4/4 stable rows",
            d.perm, d.cost, d.complement_output
        ),
    )
}

fn sequential() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut counts = Vec::new();
    for id in BUILTIN_DESIGNS {
        let spec = builtin_design(id).map_err(|e| e.to_string())?;
        let r = verify_spec(&spec).map_err(|e| e.to_string())?;
        counts.push(format!("{id} {}/{}", r.pass_count(), r.rows.len()));
        if !r.passed() {
            problems.push(format!("{id} fails {} rows", r.rows.len() - r.pass_count()));
        }
        if spec.clocking == Clocking::MasterSlave {
            for inputs in spec.characteristic.legal_inputs() {
                let mut state = spec.committed(false);
                for _ in 0..4 {
                    let c = spec
                        .clock_step(&inputs, &state)
                        .map_err(|e| e.to_string())?;
                    if c.q_changes() > 1 {
                        problems.push(format!("{id} changed twice in one clock"));
                    }
                    state = c.state;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= FAST_BUDGET {
        problems.push(format!("took {elapsed:?}"));
    }
    all_or(problems, format!("{}, {elapsed:?}", counts.join(", ")))
}

fn record<'a>(ledger: &'a [ClaimRecord], design: &str, metric: &str) -> &'a ClaimRecord {
    ledger
        .iter()
        .find(|r| r.design == design && r.metric == metric)
        .unwrap_or_else(|| panic!("ledger lacks {design}/{metric}"))
}

fn table_costs(ledger: &[ClaimRecord]) -> Outcome {
    let mut problems = Vec::new();
    let mut seen = Vec::new();
    let targets = [
        ("sr", 5),
        ("gated_jk", 10),
        ("ms_jk", 15),
        ("gated_d", 6),
        ("ms_d", 11),
        ("ms_sr", 15),
    ];
    for (id, target) in targets {
        let m = builtin_design(id)
            .unwrap()
            .netlist
            .metrics()
            .map_err(|e| e.to_string())?;
        let nominal = record(ledger, id, "quantum_cost_claimed_gates").achieved;
        seen.push(format!(
            "{id} {} (gate claims sum {nominal})",
            m.quantum_cost
        ));
        if m.quantum_cost != target {
            problems.push(format!("{id} {} != {target}", m.quantum_cost));
        }
        if m.serial_delay != m.quantum_cost {
            problems.push(format!("{id} serial delay {} != cost", m.serial_delay));
        }
    }
    let gsr = builtin_design("gated_sr")
        .unwrap()
        .netlist
        .metrics()
        .unwrap()
        .quantum_cost;
    seen.push(format!("gated_sr {gsr}"));
    if gsr != 10 && gsr != 11 {
        problems.push(format!("gated_sr {gsr} matches neither 10 nor 11"));
    }
    let conflict = record(ledger, "gated_sr", "quantum_cost");
    if conflict.text_claim == conflict.table_claim {
        problems.push("gated_sr conflict not recorded".into());
    }
    let summary = format!(
        "{}; gated_sr conflict recorded ({:?} vs {:?})",
        seen.join(", "),
        conflict.text_claim,
        conflict.table_claim
    );
    all_or(problems, summary.clone()).map_err(|p| format!("{p} [{summary}]"))
}

fn improvements() -> Outcome {
    let mut problems = Vec::new();
    let rows = improvement_rows();
    for r in rows.iter().filter(|r| !r.reproduced()) {
        problems.push(format!(
            "{} vs {} {}: ({}, {}) gives {}, printed {}",
            r.design, r.versus, r.metric, r.existing, r.proposed, r.achieved, r.printed
        ));
    }
    let printed: Vec<i64> = rows.iter().map(|r| r.printed).collect();
    for p in [50, 37, 41, 36, 62, 58, 23, 21, 20, 14, 15, 33, 67, 0] {
        if !printed.contains(&p) {
            problems.push(format!("printed value {p} not covered"));
        }
    }
    for (old, new) in [(16, 10), (8, 5)] {
        if improvement_percent(old, new).ok() != Some(37) {
            problems.push(format!("({old}, {new}) does not round to 37"));
        }
    }
    let ok = rows.iter().filter(|r| r.reproduced()).count();
    all_or(
        problems,
        format!(
            "{ok}/{} cells reproduced, both 37.5 ties give 37",
            rows.len()
        ),
    )
    .map_err(|p| format!("{ok}/{} cells reproduced; {p}", rows.len()))
}

fn garbage(ledger: &[ClaimRecord]) -> Outcome {
    let mut problems = Vec::new();
    let mut seen = Vec::new();
    for (id, target) in [
        ("sr", 1),
        ("jk", 1),
        ("ms_sr", 4),
        ("ms_jk", 4),
        ("ms_d", 3),
    ] {
        let g = builtin_design(id)
            .unwrap()
            .netlist
            .metrics()
            .unwrap()
            .garbage;
        seen.push(format!("{id} {g}"));
        if g != target {
            problems.push(format!("{id} garbage {g} != {target}"));
        }
    }
    for id in ["gated_sr", "gated_jk", "gated_d"] {
        let r = record(ledger, id, "garbage");
        let claim = r.table_claim.unwrap_or_default();
        seen.push(format!(
            "{id} {} vs {claim} ({})",
            r.achieved,
            r.verdict.as_str()
        ));
        if r.achieved > claim && r.verdict != Verdict::Mismatch {
            problems.push(format!("{id} excess garbage not flagged"));
        }
    }
    let summary = seen.join(", ");
    all_or(problems, summary.clone()).map_err(|p| format!("{p} [{summary}]"))
}

fn properties(atlas: &CostAtlas, rebuilt: &CostAtlas) -> Outcome {
    let designs = common::round_trip_designs()?;
    let cases = common::lifting_cases(50)?;
    if atlas.to_snapshot() != rebuilt.to_snapshot() {
        return Err("two atlas builds differ".into());
    }
    let sampled = common::minimality_spot_check(atlas, 4)?;
    if sampled < 20 {
        return Err(format!("only {sampled} entries sampled"));
    }
    Ok(format!(
        "{designs} designs round-trip, {cases} random netlists lift, atlas builds identical, {sampled} entries oracle-minimal"
    ))
}

fn main() -> ExitCode {
    let mut failures = 0;
    report(1, "gate library", gate_library(), &mut failures);
    report(2, "quantum algebra", quantum_algebra(), &mut failures);

    let start = Instant::now();
    let atlas = build_cost_atlas(3, 5).expect("atlas(3,5) builds");
    let build = start.elapsed();
    let certifier = CostCertifier::new(3, 5, 3).expect("certifier builds");
    let ledger = claims_ledger().expect("ledger assembles");

    report(3, "cost claims", cost_claims(&atlas, build), &mut failures);
    report(
        4,
        "SAM cost claim",
        sam_cost(&atlas, &certifier, &ledger),
        &mut failures,
    );
    report(
        5,
        "MPG derivation",
        mpg_derivation(&atlas, &certifier),
        &mut failures,
    );
    report(6, "sequential correctness", sequential(), &mut failures);
    report(7, "table reproduction", table_costs(&ledger), &mut failures);
    report(8, "improvement arithmetic", improvements(), &mut failures);
    report(9, "garbage counts", garbage(&ledger), &mut failures);
    let rebuilt = build_cost_atlas(3, 5).expect("atlas(3,5) builds");
    report(
        10,
        "property suites",
        properties(&atlas, &rebuilt),
        &mut failures,
    );

    println!("{} of 10 criteria pass", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
