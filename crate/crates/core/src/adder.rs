//! Reversible ripple-carry adder `|i⟩|j⟩|0⟩ → |i⟩|j⟩|i+j⟩`.
//!
//! Layout on `3m + 1` qubits: `i` on qubits `0..m`, `j` on `m..2m`, and the
//! `(m+1)`-bit output on `2m..=3m`, each register most significant bit first.
//! The carry into position `p+1` is written straight into output bit `p+1`;
//! output bit `p` then absorbs `i_p ⊕ j_p` and becomes the sum bit. No carry
//! ancillas are needed, so nothing is left to uncompute.

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::{toffoli, toffoli_elementary, GateOp};

struct Layout {
    m: usize,
}

impl Layout {
    /// Qubit holding bit `p` (weight `2^p`) of the first input.
    fn i(&self, p: usize) -> usize {
        self.m - 1 - p
    }

    fn j(&self, p: usize) -> usize {
        2 * self.m - 1 - p
    }

    fn out(&self, p: usize) -> usize {
        3 * self.m - p
    }
}

fn adder_ops(m: usize, expand_toffoli: bool) -> Result<(usize, Vec<GateOp>)> {
    if m == 0 {
        return Err(Error::invalid("adder needs at least one bit"));
    }
    let l = Layout { m };
    let mut ops = Vec::new();
    let ccx = |a: usize, b: usize, t: usize, ops: &mut Vec<GateOp>| {
        if expand_toffoli {
            ops.extend(toffoli_elementary(a, b, t));
        } else {
            ops.push(toffoli(a, b, t));
        }
    };
    for p in 0..m {
        // carry_{p+1} = i_p j_p ⊕ i_p c_p ⊕ j_p c_p, with c_p held in out[p]
        ccx(l.i(p), l.j(p), l.out(p + 1), &mut ops);
        if p > 0 {
            ccx(l.i(p), l.out(p), l.out(p + 1), &mut ops);
            ccx(l.j(p), l.out(p), l.out(p + 1), &mut ops);
        }
        ops.push(GateOp::cnot(l.i(p), l.out(p)));
        ops.push(GateOp::cnot(l.j(p), l.out(p)));
    }
    Ok((3 * m + 1, ops))
}

/// Adder built from Toffoli compounds (declared cost 15 elementary gates each).
pub fn reversible_add(m: usize) -> Result<Circuit> {
    let (n, ops) = adder_ops(m, false)?;
    Circuit::from_ops(n, ops)
}

/// The same adder spelled out in `{W, P_θ, CNOT}` only.
pub fn reversible_add_elementary(m: usize) -> Result<Circuit> {
    let (n, ops) = adder_ops(m, true)?;
    Circuit::from_ops(n, ops)
}

/// Basis index of `|i⟩|j⟩|k⟩` for the adder layout.
pub fn adder_basis_index(m: usize, i: usize, j: usize, k: usize) -> usize {
    (i << (2 * m + 1)) | (j << (m + 1)) | k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{apply_circuit, tally_cost};
    use crate::state::init_classical;

    #[test]
    fn small_sums() {
        let c = reversible_add(3).unwrap();
        assert_eq!(c.num_qubits(), 10);
        assert_eq!(c.apply_classical(adder_basis_index(3, 3, 5, 0)), Some(adder_basis_index(3, 3, 5, 8)));
        assert_eq!(c.apply_classical(0), Some(0));
    }

    #[test]
    fn elementary_version_agrees_on_statevectors() {
        let c = reversible_add_elementary(2).unwrap();
        assert!(c.ops().iter().all(GateOp::is_elementary));
        for i in 0..4 {
            for j in 0..4 {
                let mut s = init_classical(7, adder_basis_index(2, i, j, 0)).unwrap();
                apply_circuit(&mut s, &c).unwrap();
                let expected = init_classical(7, adder_basis_index(2, i, j, i + j)).unwrap();
                assert!(s.max_distance(&expected) < 1e-12, "{i} + {j}");
            }
        }
    }

    #[test]
    fn compound_cost_matches_expansion() {
        let compact = tally_cost(&reversible_add(3).unwrap());
        let expanded = tally_cost(&reversible_add_elementary(3).unwrap());
        assert_eq!(compact.num_elementary_gates, expanded.num_elementary_gates);
        assert_eq!(compact.num_queries, 0);
    }

    #[test]
    fn zero_bits_rejected() {
        assert!(reversible_add(0).is_err());
    }
}
