// SPDX-License-Identifier: Apache-2.0

//! Independent oracles shared by the property suite and the acceptance run.

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use revlogic::netlist::{parse_netlist, Cell, LineRole, Netlist, Output};
use revlogic::perm::{builtin_gate, is_bijective, Permutation};
use revlogic::quantum::{
    circuit_unitary, equals_permutation, primitive_unitary, Unitary, DEFAULT_TOLERANCE,
};
use revlogic::seq::{design_source, BUILTIN_DESIGNS};
use revlogic::synth::{enumerate_primitives, CostAtlas};

/// Parses, prints and reparses every shipped design. Returns the count.
pub fn round_trip_designs() -> Result<usize, String> {
    for id in BUILTIN_DESIGNS {
        let text = design_source(id).map_err(|e| e.to_string())?;
        let first = parse_netlist(text).map_err(|e| format!("{id}: {e}"))?;
        let printed = first.to_text();
        let second = parse_netlist(&printed).map_err(|e| format!("{id} reprinted: {e}"))?;
        if first != second {
            return Err(format!("{id}: reparsed netlist differs"));
        }
        if second.to_text() != printed {
            return Err(format!("{id}: printing is not stable"));
        }
    }
    Ok(BUILTIN_DESIGNS.len())
}

/// Gates usable on a netlist of `width` lines.
fn gate_pool(width: usize) -> Vec<&'static str> {
    ["NOT", "FG", "DFG", "TG", "FRG", "PG", "SAM", "MPG"]
        .into_iter()
        .filter(|g| builtin_gate(g).unwrap().width() <= width)
        .collect()
}

/// A feedback-free netlist: width 1..=4, up to 6 cells on distinct lines.
pub fn netlist_strategy() -> impl Strategy<Value = Netlist> {
    (1usize..=4)
        .prop_flat_map(|w| {
            let pool = gate_pool(w);
            let cell = (
                0..pool.len(),
                Just((0..w).collect::<Vec<usize>>()).prop_shuffle(),
            )
                .prop_map(move |(g, lines)| {
                    let name = pool[g];
                    let k = builtin_gate(name).unwrap().width();
                    Cell::new(name, lines[..k].to_vec()).unwrap()
                });
            (Just(w), prop::collection::vec(cell, 0..=6))
        })
        .prop_map(|(w, cells)| {
            let roles = (0..w).map(|i| LineRole::Input(format!("I{i}"))).collect();
            let outputs = (0..w)
                .map(|i| Output {
                    line: i,
                    label: format!("O{i}"),
                })
                .collect();
            Netlist::new(roles, cells, outputs, vec![]).unwrap()
        })
}

/// Line-by-line evaluation from the gate tables alone.
fn oracle_map(n: &Netlist) -> Vec<usize> {
    let w = n.width();
    (0..1usize << w)
        .map(|code| {
            let mut bits: Vec<bool> = (0..w).map(|l| code >> (w - 1 - l) & 1 == 1).collect();
            for cell in n.cells() {
                let gate = builtin_gate(&cell.gate).unwrap();
                let k = cell.lines.len();
                let local = cell
                    .lines
                    .iter()
                    .fold(0usize, |acc, &l| (acc << 1) | usize::from(bits[l]));
                let out = gate.perm.apply(local);
                for (j, &l) in cell.lines.iter().enumerate() {
                    bits[l] = out >> (k - 1 - j) & 1 == 1;
                }
            }
            bits.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
        })
        .collect()
}

/// The netlist map is a bijection and equals the oracle evaluation.
pub fn check_lifting(n: &Netlist) -> Result<(), String> {
    let expected = oracle_map(n);
    if !is_bijective(&expected).map_err(|e| e.to_string())? {
        return Err(format!("oracle map is not bijective: {expected:?}"));
    }
    let got = n.permutation().map_err(|e| e.to_string())?;
    if got.codes() != expected {
        return Err(format!("netlist map {got} differs from {expected:?}"));
    }
    Ok(())
}

/// Runs [`check_lifting`] on `cases` random netlists from a fixed seed.
pub fn lifting_cases(cases: u32) -> Result<u32, String> {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner =
        TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner
        .run(&netlist_strategy(), |n| {
            check_lifting(&n).map_err(TestCaseError::fail)
        })
        .map_err(|e| e.to_string())?;
    Ok(cases)
}

/// Whether some sequence of at most `max` primitives realizes `p` up to
/// global phase, by plain depth-first enumeration of floating-point products.
pub fn brute_force_within(p: &Permutation, max: u32) -> bool {
    let w = p.width();
    let mats: Vec<Unitary> = enumerate_primitives(w)
        .unwrap()
        .iter()
        .map(|q| primitive_unitary(q, w).unwrap())
        .collect();
    fn search(u: &Unitary, left: u32, mats: &[Unitary], p: &Permutation) -> bool {
        if equals_permutation(u, p, DEFAULT_TOLERANCE).unwrap() {
            return true;
        }
        left > 0
            && mats
                .iter()
                .any(|m| search(&m.mul(u).unwrap(), left - 1, mats, p))
    }
    search(&Unitary::identity(w).unwrap(), max, &mats, p)
}

/// `per_cost` entries of each nonzero cost level, evenly spaced in atlas
/// order.
pub fn sample_entries(atlas: &CostAtlas, per_cost: usize) -> Vec<(Permutation, u32)> {
    let mut out = Vec::new();
    for cost in 1..=atlas.max_cost() {
        let level: Vec<Permutation> = atlas
            .iter()
            .filter(|(_, e)| e.cost == cost)
            .map(|(p, _)| p)
            .collect();
        let step = (level.len() / per_cost).max(1);
        out.extend(
            level
                .into_iter()
                .step_by(step)
                .take(per_cost)
                .map(|p| (p, cost)),
        );
    }
    out
}

/// Each sampled witness is re-simulated, and the oracle confirms nothing
/// shorter exists. Returns how many entries were checked.
pub fn minimality_spot_check(atlas: &CostAtlas, per_cost: usize) -> Result<usize, String> {
    let samples = sample_entries(atlas, per_cost);
    for (p, cost) in &samples {
        let entry = atlas.get(p).unwrap();
        let witness = atlas.witness_circuit(entry).map_err(|e| e.to_string())?;
        let u = circuit_unitary(&witness).map_err(|e| e.to_string())?;
        if witness.prims().len() as u32 != *cost
            || !equals_permutation(&u, p, DEFAULT_TOLERANCE).unwrap()
        {
            return Err(format!(
                "{p}: witness {witness} does not realize it at cost {cost}"
            ));
        }
        if brute_force_within(p, cost - 1) {
            return Err(format!("{p}: oracle finds a realization below cost {cost}"));
        }
    }
    Ok(samples.len())
}
