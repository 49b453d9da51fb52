// SPDX-License-Identifier: Apache-2.0

use super::{CostAtlas, CostCertifier, SynthError};
use crate::perm::{code_bit, Permutation};
use crate::quantum::QuantumCircuit;

/// Cost bound of the MPG search. Nothing satisfying the MPG constraints costs
/// 5 or less, so the search has to reach one level past the default atlas.
pub const MPG_SEARCH_BOUND: u32 = 6;

/// Partial truth table: for each output column, the (input code, bit) pairs
/// it must reproduce. Unlisted codes are don't-cares.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthesisConstraint {
    width: usize,
    columns: Vec<Vec<(usize, bool)>>,
}

impl SynthesisConstraint {
    pub fn new(width: usize) -> Result<Self, SynthError> {
        if !(1..=3).contains(&width) {
            return Err(SynthError::WidthOutOfRange {
                width,
                min: 1,
                max: 3,
            });
        }
        Ok(Self {
            width,
            columns: vec![Vec::new(); width],
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn columns(&self) -> &[Vec<(usize, bool)>] {
        &self.columns
    }

    /// Requires output `column` to equal `bit` on input `code`.
    pub fn require(&mut self, column: usize, code: usize, bit: bool) -> Result<(), SynthError> {
        let rows = 1usize << self.width;
        if column >= self.width || code >= rows {
            return Err(SynthError::Constraint(format!(
                "column {column}, code {code} out of range for width {}",
                self.width
            )));
        }
        let col = &mut self.columns[column];
        match col.iter().find(|(c, _)| *c == code) {
            Some(&(_, b)) if b != bit => Err(SynthError::Constraint(format!(
                "column {column} already requires {} on code {code}",
                u8::from(b)
            ))),
            Some(_) => Ok(()),
            None => {
                col.push((code, bit));
                Ok(())
            }
        }
    }

    pub fn satisfied_by(&self, p: &Permutation) -> bool {
        p.width() == self.width
            && self.columns.iter().enumerate().all(|(col, reqs)| {
                reqs.iter()
                    .all(|&(code, bit)| code_bit(p.apply(code), col, self.width) == bit)
            })
    }

    /// Every satisfying permutation, in lexicographic order of the map.
    pub fn candidates(&self) -> Vec<Permutation> {
        let n = 1usize << self.width;
        let mut map: Vec<u8> = (0..n as u8).collect();
        let mut out = Vec::new();
        loop {
            let p = Permutation::new(self.width, map.clone()).expect("a rearrangement of 0..n");
            if self.satisfied_by(&p) {
                out.push(p);
            }
            if !next_permutation(&mut map) {
                break;
            }
        }
        out
    }
}

fn next_permutation(a: &mut [u8]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len())
        .rev()
        .find(|&j| a[j] > a[i - 1])
        .expect("a[i] qualifies");
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstrainedResult {
    pub perm: Permutation,
    pub cost: u32,
    pub circuit: QuantumCircuit,
}

/// Cheapest permutation satisfying `c` within `max_cost`; ties go to the
/// smallest map.
pub fn constrained_synthesis(
    c: &SynthesisConstraint,
    atlas: &CostAtlas,
    max_cost: u32,
) -> Result<Option<ConstrainedResult>, SynthError> {
    if max_cost > atlas.max_cost() {
        return Err(SynthError::BoundExceeded {
            what: "synthesis bound",
            requested: max_cost,
            limit: atlas.max_cost(),
        });
    }
    if c.width() != atlas.width() {
        return Err(SynthError::Constraint(format!(
            "constraint width {} does not match atlas width {}",
            c.width(),
            atlas.width()
        )));
    }
    let mut best: Option<(u32, Permutation)> = None;
    for p in c.candidates() {
        if let Some(cost) = atlas.cost(&p).filter(|&k| k <= max_cost) {
            // Candidates arrive in map order, so strict improvement keeps the
            // smallest map on ties.
            if best.as_ref().is_none_or(|(b, _)| cost < *b) {
                best = Some((cost, p));
            }
        }
    }
    let Some((cost, perm)) = best else {
        return Ok(None);
    };
    let entry = atlas.get(&perm).expect("cost came from the atlas");
    let circuit = atlas.witness_circuit(entry)?;
    Ok(Some(ConstrainedResult {
        perm,
        cost,
        circuit,
    }))
}

/// SR next state `N = S + R'Q` on inputs `(Q, R, S)`.
fn sr_next(code: usize) -> bool {
    let (q, r, s) = (
        code_bit(code, 0, 3),
        code_bit(code, 1, 3),
        code_bit(code, 2, 3),
    );
    s || (!r && q)
}

/// MPG constraints over inputs `(Q, R, S)`: output 2 carries `N` on the six
/// rows with `R·S = 0`, and `complement_output` carries `N'` on the stable
/// rows, where `N = Q`.
pub fn mpg_constraint(complement_output: usize) -> Result<SynthesisConstraint, SynthError> {
    if complement_output >= 2 {
        return Err(SynthError::Constraint(format!(
            "complement output must be 0 or 1, got {complement_output}"
        )));
    }
    let mut c = SynthesisConstraint::new(3)?;
    for code in 0..8 {
        let (q, r, s) = (
            code_bit(code, 0, 3),
            code_bit(code, 1, 3),
            code_bit(code, 2, 3),
        );
        if r && s {
            continue;
        }
        let n = sr_next(code);
        c.require(2, code, n)?;
        if n == q {
            c.require(complement_output, code, !n)?;
        }
    }
    Ok(c)
}

/// Outcome of the MPG search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MpgDerivation {
    pub perm: Permutation,
    pub cost: u32,
    pub circuit: QuantumCircuit,
    /// Output index carrying the stability complement.
    pub complement_output: usize,
    /// Cost bound of the atlas that found nothing, if the atlas came up empty.
    pub atlas_miss: Option<u32>,
    /// Minimum certified cost for each complement placement (0, then 1).
    pub placement_costs: [Option<u32>; 2],
}

/// Derives MPG: both placements of the complement column are tried, the
/// atlas first and then the certifier up to [`MPG_SEARCH_BOUND`]. The winner
/// is the minimum of (cost, placement, map).
pub fn derive_mpg(
    atlas: &CostAtlas,
    certifier: &CostCertifier,
) -> Result<MpgDerivation, SynthError> {
    let mut from_atlas = Vec::new();
    for placement in 0..2 {
        if let Some(r) =
            constrained_synthesis(&mpg_constraint(placement)?, atlas, atlas.max_cost())?
        {
            from_atlas.push((r.cost, placement, r));
        }
    }
    if let Some((_, placement, r)) = from_atlas
        .into_iter()
        .min_by(|a, b| (a.0, a.1, a.2.perm.map()).cmp(&(b.0, b.1, b.2.perm.map())))
    {
        let mut placement_costs = [None; 2];
        placement_costs[placement] = Some(r.cost);
        return Ok(MpgDerivation {
            perm: r.perm,
            cost: r.cost,
            circuit: r.circuit,
            complement_output: placement,
            atlas_miss: None,
            placement_costs,
        });
    }

    let bound = MPG_SEARCH_BOUND
        .max(atlas.max_cost() + 1)
        .min(certifier.reach());
    let mut best: Option<(u32, usize, Permutation)> = None;
    let mut placement_costs = [None; 2];
    for (placement, slot) in placement_costs.iter_mut().enumerate() {
        // The other placement may be pricier than the bound; search it to the
        // certifier's reach so its minimum is reported too.
        for p in mpg_constraint(placement)?.candidates() {
            let Some(cost) = certifier.cost(&p, certifier.reach())? else {
                continue;
            };
            if slot.is_none_or(|c| cost < c) {
                *slot = Some(cost);
            }
            if cost <= bound
                && best
                    .as_ref()
                    .is_none_or(|(c, pl, bp)| (cost, placement, p.map()) < (*c, *pl, bp.map()))
            {
                best = Some((cost, placement, p));
            }
        }
    }
    let (cost, complement_output, perm) = best.ok_or(SynthError::Infeasible { bound })?;
    let circuit = certifier
        .min_cost(&perm, cost)?
        .expect("cost was just certified")
        .circuit;
    Ok(MpgDerivation {
        perm,
        cost,
        circuit,
        complement_output,
        atlas_miss: Some(atlas.max_cost()),
        placement_costs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::build_cost_atlas;

    #[test]
    fn permutation_enumeration() {
        let c = SynthesisConstraint::new(2).unwrap();
        let all = c.candidates();
        assert_eq!(all.len(), 24);
        assert_eq!(all[0].map(), &[0, 1, 2, 3]);
        assert_eq!(all[23].map(), &[3, 2, 1, 0]);
    }

    #[test]
    fn empty_constraint_gives_identity() {
        let atlas = build_cost_atlas(3, 2).unwrap();
        let c = SynthesisConstraint::new(3).unwrap();
        let r = constrained_synthesis(&c, &atlas, 2).unwrap().unwrap();
        assert!(r.perm.is_identity());
        assert_eq!(r.cost, 0);
    }

    #[test]
    fn unbalanced_requirement_is_infeasible() {
        // N = C + AB' has five ones, so no balanced column can equal it.
        let atlas = build_cost_atlas(3, 2).unwrap();
        let mut c = SynthesisConstraint::new(3).unwrap();
        for code in 0..8 {
            let (a, b, cc) = (
                code_bit(code, 0, 3),
                code_bit(code, 1, 3),
                code_bit(code, 2, 3),
            );
            let n = cc || (a && !b);
            c.require(1, code, n).unwrap();
            c.require(2, code, !n).unwrap();
        }
        assert!(c.candidates().is_empty());
        assert!(constrained_synthesis(&c, &atlas, 2).unwrap().is_none());
    }

    #[test]
    fn conflicting_requirement_is_rejected() {
        let mut c = SynthesisConstraint::new(3).unwrap();
        c.require(0, 3, true).unwrap();
        c.require(0, 3, true).unwrap();
        assert!(c.require(0, 3, false).is_err());
        assert!(c.require(3, 0, true).is_err());
        assert!(c.require(0, 8, true).is_err());
    }

    #[test]
    fn mpg_constraint_shape() {
        let c = mpg_constraint(0).unwrap();
        assert_eq!(c.columns()[2].len(), 6);
        let stable: Vec<usize> = c.columns()[0].iter().map(|&(code, _)| code).collect();
        assert_eq!(stable, vec![0, 2, 4, 5]);
        assert!(c.columns()[1].is_empty());
        assert_eq!(c.candidates().len(), 32);
        assert_eq!(mpg_constraint(1).unwrap().candidates().len(), 32);
        assert!(mpg_constraint(2).is_err());
    }
}
