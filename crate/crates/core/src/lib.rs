// SPDX-License-Identifier: Apache-2.0

//! Reversible gates as permutations, their NCV realizations and costs, and
//! reversible latches built from them.

pub mod netlist;
pub mod perm;
pub mod quantum;
pub mod seq;
pub mod synth;
