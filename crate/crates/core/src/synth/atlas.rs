// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;

use super::exact::{ClassKey, DyadicMatrix};
use super::{circuit_from_indices, enumerate_primitives, SynthError};
use crate::perm::Permutation;
use crate::quantum::{
    circuit_unitary, equals_permutation, Primitive, QuantumCircuit, DEFAULT_TOLERANCE,
};

/// Header line of the text snapshot format.
pub const SNAPSHOT_FORMAT: &str = "revlogic-atlas 1";

/// Desk-scale guard for atlas builds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AtlasLimits {
    pub max_width: usize,
    pub max_cost: u32,
}

impl Default for AtlasLimits {
    fn default() -> Self {
        Self {
            max_width: 3,
            max_cost: 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuildMode {
    Sequential,
    /// One worker per first primitive; the merge is bit-identical to a
    /// sequential build.
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtlasEntry {
    pub cost: u32,
    /// Indices into `enumerate_primitives(width)`.
    pub witness: Vec<u8>,
}

/// Every permutation realizable within `max_cost`, with its minimum cost and
/// the lexicographically smallest minimum-cost witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostAtlas {
    width: usize,
    max_cost: u32,
    entries: BTreeMap<Vec<u8>, AtlasEntry>,
}

/// Breadth-first walk over phase classes of primitive sequences.
///
/// `visit` sees each new class once, in generation order, with its level and
/// representative sequence. With `seed = Some(i)` only sequences starting with
/// primitive `i` are explored and the identity is not reported.
pub(super) fn explore(
    width: usize,
    prims: &[Primitive],
    max_cost: u32,
    seed: Option<u8>,
    mut visit: impl FnMut(u32, &[u8], &DyadicMatrix, ClassKey),
) {
    let rebuild = |seq: &[u8]| {
        let mut m = DyadicMatrix::identity(width);
        for &i in seq {
            m.apply_left(&prims[i as usize]);
        }
        m
    };

    let mut seen: HashSet<ClassKey> = HashSet::new();
    let (mut frontier, first_level) = match seed {
        None => {
            let id = DyadicMatrix::identity(width);
            let key = id.class_key();
            seen.insert(key);
            visit(0, &[], &id, key);
            (vec![Vec::new()], 1)
        }
        Some(i) => {
            let m = rebuild(&[i]);
            let key = m.class_key();
            seen.insert(key);
            if max_cost >= 1 {
                visit(1, &[i], &m, key);
            }
            (vec![vec![i]], 2)
        }
    };

    for level in first_level..=max_cost {
        let mut next = Vec::new();
        for seq in &frontier {
            let parent = rebuild(seq);
            for (i, p) in prims.iter().enumerate() {
                let mut child = parent.clone();
                child.apply_left(p);
                let key = child.class_key();
                if !seen.insert(key) {
                    continue;
                }
                let mut s = Vec::with_capacity(seq.len() + 1);
                s.extend_from_slice(seq);
                s.push(i as u8);
                visit(level, &s, &child, key);
                if level < max_cost {
                    next.push(s);
                }
            }
        }
        frontier = next;
    }
}

fn check_bounds(width: usize, max_cost: u32, limits: &AtlasLimits) -> Result<(), SynthError> {
    if width == 0 || width > limits.max_width {
        return Err(SynthError::WidthOutOfRange {
            width,
            min: 1,
            max: limits.max_width,
        });
    }
    if max_cost > limits.max_cost {
        return Err(SynthError::BoundExceeded {
            what: "atlas cost bound",
            requested: max_cost,
            limit: limits.max_cost,
        });
    }
    Ok(())
}

/// Builds an atlas under the default desk-scale limits, in parallel.
pub fn build_cost_atlas(width: usize, max_cost: u32) -> Result<CostAtlas, SynthError> {
    build_cost_atlas_with(
        width,
        max_cost,
        &AtlasLimits::default(),
        BuildMode::Parallel,
    )
}

pub fn build_cost_atlas_with(
    width: usize,
    max_cost: u32,
    limits: &AtlasLimits,
    mode: BuildMode,
) -> Result<CostAtlas, SynthError> {
    check_bounds(width, max_cost, limits)?;
    let prims = enumerate_primitives(width)?;

    let collect = |seed: Option<u8>| {
        let mut found: BTreeMap<Vec<u8>, AtlasEntry> = BTreeMap::new();
        explore(width, &prims, max_cost, seed, |level, seq, m, _| {
            if let Some(map) = m.as_permutation() {
                found.entry(map).or_insert_with(|| AtlasEntry {
                    cost: level,
                    witness: seq.to_vec(),
                });
            }
        });
        found
    };

    let entries = match mode {
        BuildMode::Sequential => collect(None),
        BuildMode::Parallel => {
            let mut merged: BTreeMap<Vec<u8>, AtlasEntry> = BTreeMap::new();
            let identity: Vec<u8> = (0..1u16 << width).map(|c| c as u8).collect();
            merged.insert(
                identity,
                AtlasEntry {
                    cost: 0,
                    witness: Vec::new(),
                },
            );
            if max_cost > 0 {
                let parts: Vec<_> = (0..prims.len() as u8)
                    .into_par_iter()
                    .map(|i| collect(Some(i)))
                    .collect();
                for part in parts {
                    for (map, entry) in part {
                        merged
                            .entry(map)
                            .and_modify(|cur| {
                                if (entry.cost, &entry.witness) < (cur.cost, &cur.witness) {
                                    *cur = entry.clone();
                                }
                            })
                            .or_insert(entry);
                    }
                }
            }
            merged
        }
    };

    Ok(CostAtlas {
        width,
        max_cost,
        entries,
    })
}

impl CostAtlas {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn max_cost(&self) -> u32 {
        self.max_cost
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, p: &Permutation) -> Option<&AtlasEntry> {
        if p.width() != self.width {
            return None;
        }
        self.entries.get(p.map())
    }

    pub fn cost(&self, p: &Permutation) -> Option<u32> {
        self.get(p).map(|e| e.cost)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Permutation, &AtlasEntry)> + '_ {
        self.entries.iter().map(move |(map, e)| {
            (
                Permutation::new(self.width, map.clone()).expect("atlas keys are bijections"),
                e,
            )
        })
    }

    /// Number of permutations at each cost, index = cost.
    pub fn histogram(&self) -> Vec<usize> {
        let mut h = vec![0; self.max_cost as usize + 1];
        for e in self.entries.values() {
            h[e.cost as usize] += 1;
        }
        h
    }

    pub fn witness_circuit(&self, entry: &AtlasEntry) -> Result<QuantumCircuit, SynthError> {
        let prims = enumerate_primitives(self.width)?;
        circuit_from_indices(self.width, &prims, &entry.witness)
    }

    /// Re-checks every witness by floating-point simulation.
    pub fn verify(&self) -> Result<(), SynthError> {
        for (perm, entry) in self.iter() {
            let circuit = self.witness_circuit(entry)?;
            let bad = |reason: String| SynthError::BadWitness {
                perm: perm.to_string(),
                reason,
            };
            if circuit.prims().len() as u32 != entry.cost {
                return Err(bad(format!(
                    "witness has {} primitives, recorded cost {}",
                    circuit.prims().len(),
                    entry.cost
                )));
            }
            let u = circuit_unitary(&circuit)?;
            if !equals_permutation(&u, &perm, DEFAULT_TOLERANCE)? {
                return Err(bad(format!("simulated unitary differs ({circuit})")));
            }
        }
        Ok(())
    }

    /// Text snapshot: header, width, bound, then one line per permutation
    /// (`codes cost witness`), sorted by code array.
    pub fn to_snapshot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{SNAPSHOT_FORMAT}");
        let _ = writeln!(out, "width {}", self.width);
        let _ = writeln!(out, "max_cost {}", self.max_cost);
        let _ = writeln!(out, "entries {}", self.entries.len());
        for (map, e) in &self.entries {
            let codes: Vec<String> = map.iter().map(|c| c.to_string()).collect();
            let witness = if e.witness.is_empty() {
                "-".to_string()
            } else {
                e.witness
                    .iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            };
            let _ = writeln!(out, "{} {} {}", codes.join(","), e.cost, witness);
        }
        out
    }

    pub fn from_snapshot(text: &str) -> Result<Self, SynthError> {
        let err = |line: usize, message: &str| SynthError::Snapshot {
            line,
            message: message.to_string(),
        };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let mut header = |key: &str| -> Result<(usize, String), SynthError> {
            let (n, l) = lines.next().ok_or_else(|| err(0, "truncated header"))?;
            match l.strip_prefix(key) {
                Some(rest) => Ok((n, rest.trim().to_string())),
                None => Err(err(n, &format!("expected `{key}`"))),
            }
        };
        let (n, fmt) = header("revlogic-atlas")?;
        if format!("revlogic-atlas {fmt}") != SNAPSHOT_FORMAT {
            return Err(err(n, &format!("unsupported format version `{fmt}`")));
        }
        let (n, w) = header("width")?;
        let width: usize = w.parse().map_err(|_| err(n, "bad width"))?;
        let prims = enumerate_primitives(width).map_err(|e| err(n, &e.to_string()))?;
        let (n, c) = header("max_cost")?;
        let max_cost: u32 = c.parse().map_err(|_| err(n, "bad max_cost"))?;
        let (n, c) = header("entries")?;
        let count: usize = c.parse().map_err(|_| err(n, "bad entry count"))?;

        let mut entries = BTreeMap::new();
        for (n, l) in lines {
            if l.is_empty() {
                continue;
            }
            let fields: Vec<&str> = l.split_whitespace().collect();
            let [codes, cost, witness] = fields[..] else {
                return Err(err(n, "expected `codes cost witness`"));
            };
            let codes: Vec<usize> = codes
                .split(',')
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|_| err(n, "bad code list"))?;
            let perm =
                Permutation::from_codes(width, &codes).map_err(|e| err(n, &e.to_string()))?;
            let cost: u32 = cost.parse().map_err(|_| err(n, "bad cost"))?;
            let witness: Vec<u8> = if witness == "-" {
                Vec::new()
            } else {
                witness
                    .split(',')
                    .map(str::parse)
                    .collect::<Result<_, _>>()
                    .map_err(|_| err(n, "bad witness"))?
            };
            if witness.iter().any(|&i| i as usize >= prims.len()) {
                return Err(err(n, "witness index out of range"));
            }
            if witness.len() as u32 != cost || cost > max_cost {
                return Err(err(n, "cost disagrees with witness length or bound"));
            }
            if entries
                .insert(perm.map().to_vec(), AtlasEntry { cost, witness })
                .is_some()
            {
                return Err(err(n, "duplicate permutation"));
            }
        }
        if entries.len() != count {
            return Err(err(
                0,
                &format!("header says {count} entries, found {}", entries.len()),
            ));
        }
        Ok(Self {
            width,
            max_cost,
            entries,
        })
    }
}

/// Exact minimum cost of `p` within `max_cost`, looked up in `atlas`. The
/// witness is re-simulated before it is returned.
pub fn min_cost_synthesis(
    atlas: &CostAtlas,
    p: &Permutation,
    max_cost: u32,
) -> Result<Option<(u32, QuantumCircuit)>, SynthError> {
    if max_cost > atlas.max_cost {
        return Err(SynthError::BoundExceeded {
            what: "synthesis bound",
            requested: max_cost,
            limit: atlas.max_cost,
        });
    }
    let Some(entry) = atlas.get(p).filter(|e| e.cost <= max_cost) else {
        return Ok(None);
    };
    let circuit = atlas.witness_circuit(entry)?;
    if !equals_permutation(&circuit_unitary(&circuit)?, p, DEFAULT_TOLERANCE)? {
        return Err(SynthError::BadWitness {
            perm: p.to_string(),
            reason: format!("simulated unitary differs ({circuit})"),
        });
    }
    Ok(Some((entry.cost, circuit)))
}
