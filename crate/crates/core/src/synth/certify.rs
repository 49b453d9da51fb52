// SPDX-License-Identifier: Apache-2.0

//! Exact minimum costs beyond the atlas bound, by meeting in the middle.
//!
//! A table holds the level of every phase class reachable within `depth`
//! primitives. A target `U` of cost `d > depth` splits as `U = S * R` with `R`
//! a prefix of `d - depth` primitives and `S` in the table, so scanning the
//! class representatives up to level `split` decides every cost up to
//! `depth + split` exactly.

use std::collections::HashMap;

use super::atlas::explore;
use super::exact::{ClassKey, DyadicMatrix};
use super::{circuit_from_indices, enumerate_primitives, SynthError};
use crate::perm::Permutation;
use crate::quantum::{
    circuit_unitary, equals_permutation, Primitive, QuantumCircuit, DEFAULT_TOLERANCE,
};

/// A certified minimum cost with its lexicographically smallest witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub cost: u32,
    pub circuit: QuantumCircuit,
    /// Every cost up to this bound was ruled out or confirmed exhaustively.
    pub searched_to: u32,
}

#[derive(Debug)]
pub struct CostCertifier {
    width: usize,
    depth: u32,
    split: u32,
    prims: Vec<Primitive>,
    levels: HashMap<ClassKey, u8>,
    // Class representatives up to level `split`, as (level, sequence).
    prefixes: Vec<(u32, Vec<u8>)>,
}

impl CostCertifier {
    /// Builds the class table. `depth = 5, split = 3` certifies costs up to 8
    /// on three lines.
    pub fn new(width: usize, depth: u32, split: u32) -> Result<Self, SynthError> {
        if !(1..=3).contains(&width) {
            return Err(SynthError::WidthOutOfRange {
                width,
                min: 1,
                max: 3,
            });
        }
        if depth > 5 || split > depth {
            return Err(SynthError::BoundExceeded {
                what: "certifier table depth",
                requested: depth.max(split),
                limit: 5,
            });
        }
        let prims = enumerate_primitives(width)?;
        let mut levels = HashMap::new();
        let mut prefixes = Vec::new();
        explore(width, &prims, depth, None, |level, seq, _, key| {
            levels.insert(key, level as u8);
            if level <= split {
                prefixes.push((level, seq.to_vec()));
            }
        });
        Ok(Self {
            width,
            depth,
            split,
            prims,
            levels,
            prefixes,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Largest cost this certifier decides exactly.
    pub fn reach(&self) -> u32 {
        self.depth + self.split
    }

    /// Number of phase classes in the table.
    pub fn classes(&self) -> usize {
        self.levels.len()
    }

    /// Exact distance from the identity to the class of `u`, if it is at most
    /// [`Self::reach`].
    fn distance(&self, u: &DyadicMatrix) -> Option<u32> {
        let mut best = self.levels.get(&u.class_key()).map(|&l| u32::from(l));
        if best.is_some_and(|b| b <= self.depth) {
            // Table hits are already exact.
            return best;
        }
        for (k, seq) in &self.prefixes {
            if *k == 0 || best.is_some_and(|b| *k + 1 > b) {
                continue;
            }
            // S = U * R^-1, with R = P_k ... P_1.
            let mut s = u.clone();
            for &i in seq {
                s.apply_right(&self.prims[i as usize].inverse());
            }
            if let Some(&l) = self.levels.get(&s.class_key()) {
                let total = k + u32::from(l);
                if best.is_none_or(|b| total < b) {
                    best = Some(total);
                }
            }
        }
        best
    }

    /// Exact minimum cost of `p` if it is at most `bound`, without a witness.
    pub fn cost(&self, p: &Permutation, bound: u32) -> Result<Option<u32>, SynthError> {
        self.check(p, bound)?;
        let target = DyadicMatrix::from_permutation(self.width, p.map());
        Ok(self.distance(&target).filter(|&d| d <= bound))
    }

    fn check(&self, p: &Permutation, bound: u32) -> Result<(), SynthError> {
        if bound > self.reach() {
            return Err(SynthError::BoundExceeded {
                what: "certification bound",
                requested: bound,
                limit: self.reach(),
            });
        }
        if p.width() != self.width {
            return Err(SynthError::WidthOutOfRange {
                width: p.width(),
                min: self.width,
                max: self.width,
            });
        }
        Ok(())
    }

    /// Exact minimum cost of `p` if it is at most `bound`, with the
    /// lexicographically smallest minimum-cost witness.
    pub fn min_cost(&self, p: &Permutation, bound: u32) -> Result<Option<Certificate>, SynthError> {
        let Some(cost) = self.cost(p, bound)? else {
            return Ok(None);
        };
        let target = DyadicMatrix::from_permutation(self.width, p.map());

        // Peel off the smallest first primitive that keeps the remainder on a
        // shortest path.
        let mut seq = Vec::with_capacity(cost as usize);
        let mut cur = target;
        for remaining in (0..cost).rev() {
            let next = self
                .prims
                .iter()
                .enumerate()
                .find_map(|(i, prim)| {
                    let mut rest = cur.clone();
                    rest.apply_right(&prim.inverse());
                    (self.distance(&rest) == Some(remaining)).then_some((i, rest))
                })
                .expect("a shortest path continues through some primitive");
            seq.push(next.0 as u8);
            cur = next.1;
        }

        let circuit = circuit_from_indices(self.width, &self.prims, &seq)?;
        if !equals_permutation(&circuit_unitary(&circuit)?, p, DEFAULT_TOLERANCE)? {
            return Err(SynthError::BadWitness {
                perm: p.to_string(),
                reason: format!("simulated unitary differs ({circuit})"),
            });
        }
        Ok(Some(Certificate {
            cost,
            circuit,
            searched_to: bound,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::builtin_gate;
    use crate::synth::build_cost_atlas;

    #[test]
    fn agrees_with_atlas_on_small_tables() {
        // depth 2 + split 2 must reproduce atlas(3,4) exactly.
        let cert = CostCertifier::new(3, 2, 2).unwrap();
        let atlas = build_cost_atlas(3, 4).unwrap();
        for (perm, entry) in atlas.iter().step_by(7) {
            let c = cert.min_cost(&perm, 4).unwrap().unwrap();
            assert_eq!(c.cost, entry.cost, "{perm}");
            assert_eq!(c.circuit, atlas.witness_circuit(entry).unwrap(), "{perm}");
        }
        let tg = builtin_gate("TG").unwrap();
        assert!(cert.min_cost(&tg.perm, 4).unwrap().is_none());
        assert!(cert.min_cost(&tg.perm, 5).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(CostCertifier::new(4, 3, 1).is_err());
        assert!(CostCertifier::new(3, 6, 1).is_err());
        assert!(CostCertifier::new(3, 2, 3).is_err());
    }
}
