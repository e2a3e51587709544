#![allow(dead_code)]

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use qmcsim::compiler::Unitary2;
use qmcsim::gate::action_matrix;
use qmcsim::{apply_gate, Circuit, GateOp, StateVector};
use rand::Rng;
use rand_distr::StandardNormal;

/// Haar-distributed 2×2 unitary: Gram–Schmidt on a complex Gaussian matrix.
pub fn haar_unitary<R: Rng>(rng: &mut R) -> Unitary2 {
    let mut g = || Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    let (a, b, c, d) = (g(), g(), g(), g());
    let n1 = (a.norm_sqr() + c.norm_sqr()).sqrt();
    let (a, c) = (a / n1, c / n1);
    let proj = a.conj() * b + c.conj() * d;
    let (b, d) = (b - proj * a, d - proj * c);
    let n2 = (b.norm_sqr() + d.norm_sqr()).sqrt();
    Matrix2::new(a, b / n2, c, d / n2)
}

pub fn random_state<R: Rng>(m: usize, rng: &mut R) -> StateVector {
    let amps: Vec<Complex64> =
        (0..1usize << m).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(amps.into_iter().map(|z| z / norm).collect()).unwrap()
}

pub fn random_elementary_gate<R: Rng>(m: usize, rng: &mut R) -> GateOp {
    match rng.random_range(0..3) {
        0 => GateOp::w(rng.random_range(0..m)),
        1 => GateOp::phase(rng.random_range(0..m), rng.random_range(0.0..std::f64::consts::TAU)),
        _ if m >= 2 => {
            let k = rng.random_range(0..m);
            let l = (k + rng.random_range(1..m)) % m;
            GateOp::cnot(k, l)
        }
        _ => GateOp::w(0),
    }
}

pub fn random_circuit<R: Rng>(m: usize, len: usize, rng: &mut R) -> Circuit {
    Circuit::from_ops(m, (0..len).map(|_| random_elementary_gate(m, rng)).collect()).unwrap()
}

/// Dense matrix of a circuit, column `j` being the image of `|j⟩`, row-major.
pub fn circuit_matrix(c: &Circuit) -> Vec<Complex64> {
    let m = c.num_qubits();
    let dim = 1usize << m;
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    for j in 0..dim {
        let mut s = StateVector::classical(m, j).unwrap();
        for op in c.ops() {
            apply_gate(&mut s, op).unwrap();
        }
        for (i, a) in s.amplitudes().iter().enumerate() {
            out[i * dim + j] = *a;
        }
    }
    out
}

/// `max |(U†U − I)_{ij}|`.
pub fn unitarity_error(u: &[Complex64]) -> f64 {
    let dim = (u.len() as f64).sqrt() as usize;
    let mut worst: f64 = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..dim {
                s += u[k * dim + i].conj() * u[k * dim + j];
            }
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((s - target).norm());
        }
    }
    worst
}

pub fn compound_matrix(op: &GateOp) -> Vec<Complex64> {
    match op {
        GateOp::Compound(c) => action_matrix(c.action.as_ref()),
        _ => panic!("not a compound"),
    }
}

fn kron_all(factors: &[DMatrix<Complex64>]) -> DMatrix<Complex64> {
    factors.iter().skip(1).fold(factors[0].clone(), |acc, f| acc.kronecker(f))
}

/// Dense matrix of an elementary gate built from Kronecker products, qubit 0
/// as the leftmost factor. Independent of the simulator's index arithmetic.
pub fn kron_gate_matrix(op: &GateOp, m: usize) -> DMatrix<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let id = DMatrix::<Complex64>::identity(2, 2);
    let with_factor = |q: usize, f: DMatrix<Complex64>| -> DMatrix<Complex64> {
        kron_all(&(0..m).map(|k| if k == q { f.clone() } else { id.clone() }).collect::<Vec<_>>())
    };
    match op {
        GateOp::WalshHadamard(q) => {
            let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            with_factor(*q, DMatrix::from_row_slice(2, 2, &[h, h, h, -h]))
        }
        GateOp::PhaseShift(qubit, theta) => {
            with_factor(*qubit, DMatrix::from_row_slice(2, 2, &[one, zero, zero, Complex64::from_polar(1.0, *theta)]))
        }
        GateOp::ControlledNot(control, target) => {
            let p0 = DMatrix::from_row_slice(2, 2, &[one, zero, zero, zero]);
            let p1 = DMatrix::from_row_slice(2, 2, &[zero, zero, zero, one]);
            let x = DMatrix::from_row_slice(2, 2, &[zero, one, one, zero]);
            let term = |c: &DMatrix<Complex64>, t: &DMatrix<Complex64>| {
                kron_all(
                    &(0..m)
                        .map(|k| if k == *control { c.clone() } else if k == *target { t.clone() } else { id.clone() })
                        .collect::<Vec<_>>(),
                )
            };
            term(&p0, &id) + term(&p1, &x)
        }
        GateOp::Compound(_) => panic!("compound gates have no Kronecker form here"),
    }
}
