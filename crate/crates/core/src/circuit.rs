use serde::Serialize;

use crate::error::{Error, Result};
use crate::gate::{apply_gate, GateOp};
use crate::state::{check_register, StateVector};

/// Ordered gate sequence `U_1, ..., U_n` on a fixed register.
#[derive(Clone, Debug)]
pub struct Circuit {
    num_qubits: usize,
    ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Result<Self> {
        check_register(num_qubits)?;
        Ok(Circuit { num_qubits, ops: Vec::new() })
    }

    pub fn from_ops(num_qubits: usize, ops: Vec<GateOp>) -> Result<Self> {
        let mut c = Circuit::new(num_qubits)?;
        for op in ops {
            c.push(op)?;
        }
        Ok(c)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push(&mut self, op: GateOp) -> Result<&mut Self> {
        op.validate(self.num_qubits)?;
        self.ops.push(op);
        Ok(self)
    }

    /// Appends `other`'s ops with qubit indices moved up by `offset`.
    pub fn append_shifted(&mut self, other: &Circuit, offset: usize) -> Result<&mut Self> {
        for op in &other.ops {
            self.push(op.shifted(offset))?;
        }
        Ok(self)
    }

    /// `U_1^† ... U_n^†` in reverse order.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            ops: self.ops.iter().rev().map(GateOp::inverse).collect(),
        }
    }

    /// Oracle calls made by one run of the circuit.
    pub fn query_count(&self) -> u64 {
        self.ops.iter().map(GateOp::queries).sum()
    }

    /// Runs the circuit on a classical input, if every op permutes basis states.
    pub fn apply_classical(&self, index: usize) -> Option<usize> {
        self.ops
            .iter()
            .try_fold(index, |i, op| op.classical_image(i, self.num_qubits))
    }
}

/// Applies every op of `circuit` to `state` in order.
pub fn apply_circuit(state: &mut StateVector, circuit: &Circuit) -> Result<()> {
    if state.num_qubits() != circuit.num_qubits {
        return Err(Error::QubitCountMismatch {
            state: state.num_qubits(),
            circuit: circuit.num_qubits,
        });
    }
    for op in &circuit.ops {
        apply_gate(state, op)?;
    }
    Ok(())
}

/// Cost under the query model: queries times qubits plus gates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CostReport {
    pub num_queries: u64,
    pub num_qubits: u64,
    pub num_elementary_gates: u64,
    pub total_cost: u64,
}

impl CostReport {
    pub fn new(num_queries: u64, num_qubits: u64, num_elementary_gates: u64) -> Self {
        CostReport {
            num_queries,
            num_qubits,
            num_elementary_gates,
            total_cost: num_queries * num_qubits + num_elementary_gates,
        }
    }

    /// Cost of running the same circuit `times` times.
    pub fn repeated(&self, times: u64) -> Self {
        CostReport::new(self.num_queries * times, self.num_qubits, self.num_elementary_gates * times)
    }
}

pub fn tally_cost(circuit: &Circuit) -> CostReport {
    let gates = circuit.ops.iter().map(GateOp::gate_cost).sum();
    CostReport::new(circuit.query_count(), circuit.num_qubits as u64, gates)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::gate::{Compound, PermutationAction};
    use crate::state::init_classical;

    fn query_gate(targets: Vec<usize>) -> GateOp {
        let action = PermutationAction::new(targets.len(), (0..1 << targets.len()).collect()).unwrap();
        GateOp::Compound(Compound::new("Q", targets, Arc::new(action)).with_queries(1))
    }

    #[test]
    fn empty_circuit_is_identity() {
        let c = Circuit::new(2).unwrap();
        let mut s = init_classical(2, 1).unwrap();
        apply_circuit(&mut s, &c).unwrap();
        assert_eq!(s, init_classical(2, 1).unwrap());
        assert_eq!(tally_cost(&c).total_cost, 0);
    }

    #[test]
    fn self_inverse_pairs() {
        let c = Circuit::from_ops(1, vec![GateOp::w(0), GateOp::w(0)]).unwrap();
        let mut s = init_classical(1, 0).unwrap();
        apply_circuit(&mut s, &c).unwrap();
        assert!(s.max_distance(&init_classical(1, 0).unwrap()) < 1e-15);

        let c = Circuit::from_ops(2, vec![GateOp::cnot(0, 1), GateOp::cnot(0, 1)]).unwrap();
        let mut s = init_classical(2, 2).unwrap();
        apply_circuit(&mut s, &c).unwrap();
        assert_eq!(s, init_classical(2, 2).unwrap());
    }

    #[test]
    fn mismatched_register() {
        let c = Circuit::new(3).unwrap();
        let mut s = init_classical(2, 0).unwrap();
        assert!(matches!(apply_circuit(&mut s, &c), Err(Error::QubitCountMismatch { state: 2, circuit: 3 })));
        let mut c = Circuit::new(2).unwrap();
        assert!(c.push(GateOp::w(5)).is_err());
    }

    #[test]
    fn cost_formula() {
        let c = Circuit::from_ops(3, (0..5).map(|i| GateOp::w(i % 3)).collect()).unwrap();
        assert_eq!(tally_cost(&c), CostReport::new(0, 3, 5));
        assert_eq!(tally_cost(&c).total_cost, 5);

        let mut c = Circuit::new(4).unwrap();
        for i in 0..10 {
            c.push(GateOp::phase(i % 4, 0.3)).unwrap();
        }
        c.push(query_gate(vec![0, 1, 2, 3])).unwrap();
        c.push(query_gate(vec![0, 1, 2, 3])).unwrap();
        let report = tally_cost(&c);
        assert_eq!((report.num_queries, report.num_elementary_gates), (2, 10));
        assert_eq!(report.total_cost, 18);
    }
}
