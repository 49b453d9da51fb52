// SPDX-License-Identifier: Apache-2.0

use super::{Characteristic, Clocking, LatchSpec, SeqError};
use crate::netlist::parse_netlist;

/// Identifiers of the shipped designs, in listing order.
pub const BUILTIN_DESIGNS: [&str; 8] = [
    "sr", "gated_sr", "ms_sr", "jk", "gated_jk", "ms_jk", "gated_d", "ms_d",
];

/// Netlist text of a shipped design.
pub fn design_source(id: &str) -> Result<&'static str, SeqError> {
    Ok(match id {
        "sr" => include_str!("../../designs/sr.net"),
        "gated_sr" => include_str!("../../designs/gated_sr.net"),
        "ms_sr" => include_str!("../../designs/ms_sr.net"),
        "jk" => include_str!("../../designs/jk.net"),
        "gated_jk" => include_str!("../../designs/gated_jk.net"),
        "ms_jk" => include_str!("../../designs/ms_jk.net"),
        "gated_d" => include_str!("../../designs/gated_d.net"),
        "ms_d" => include_str!("../../designs/ms_d.net"),
        _ => return Err(SeqError::UnknownDesign(id.to_string())),
    })
}

/// A shipped design with its expected behaviour.
pub fn builtin_design(id: &str) -> Result<LatchSpec, SeqError> {
    use Characteristic as C;
    use Clocking::{Level, MasterSlave};
    let (characteristic, clocking, clocked, qn) = match id {
        "sr" => (C::Sr, Level, false, true),
        "gated_sr" => (C::GatedSr, Level, true, true),
        "ms_sr" => (C::Sr, MasterSlave, true, false),
        "jk" => (C::Jk, Level, false, true),
        "gated_jk" => (C::GatedJk, Level, true, true),
        "ms_jk" => (C::Jk, MasterSlave, true, true),
        "gated_d" => (C::GatedD, Level, true, true),
        "ms_d" => (C::D, MasterSlave, true, true),
        _ => return Err(SeqError::UnknownDesign(id.to_string())),
    };
    Ok(LatchSpec {
        id: id.to_string(),
        netlist: parse_netlist(design_source(id)?)?,
        characteristic,
        clocking,
        clock: clocked.then(|| "CLK".to_string()),
        q_output: "Q".to_string(),
        qn_output: qn.then(|| "QN".to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn designs_parse_with_expected_metrics() {
        // (id, cost, garbage)
        let expected = [
            ("sr", 7, 1),
            ("gated_sr", 16, 4),
            ("ms_sr", 23, 5),
            ("jk", 8, 1),
            ("gated_jk", 16, 3),
            ("ms_jk", 24, 4),
            ("gated_d", 9, 2),
            ("ms_d", 17, 3),
        ];
        for (id, cost, garbage) in expected {
            let spec = builtin_design(id).unwrap();
            let m = spec.netlist.metrics().unwrap();
            assert_eq!((m.quantum_cost, m.garbage), (cost, garbage), "{id}");
            assert!(spec.netlist.output_line("Q").is_some(), "{id}");
        }
        assert!(matches!(
            builtin_design("t"),
            Err(SeqError::UnknownDesign(_))
        ));
    }
}
