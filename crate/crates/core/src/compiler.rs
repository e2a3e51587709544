//! Single-qubit compilation into `{W, P_θ}` and brute-force approximation
//! over the finite alphabet `{W, T = P_{π/4}}`.
//!
//! Matrices are compared up to a global phase throughout.

use std::collections::HashSet;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, TAU};
use std::fmt;

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gate::{normalize_angle, GateOp};

pub type Unitary2 = Matrix2<Complex64>;

/// Tolerance for the degenerate cases of the exact compiler.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;
/// Longest word `approx_search` will enumerate.
pub const MAX_SEARCH_LENGTH: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Letter {
    W,
    /// `P_θ` with θ in `[0, 2π)`.
    Phase(f64),
    /// `P_{π/4}`.
    T,
}

impl Letter {
    pub fn matrix(self) -> Unitary2 {
        let c = |re: f64| Complex64::new(re, 0.0);
        match self {
            Letter::W => Matrix2::new(c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2), c(-FRAC_1_SQRT_2)),
            Letter::Phase(theta) => Matrix2::new(c(1.0), c(0.0), c(0.0), Complex64::from_polar(1.0, theta)),
            Letter::T => Letter::Phase(FRAC_PI_4).matrix(),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::W => write!(f, "W"),
            Letter::Phase(theta) => write!(f, "P({theta:.12})"),
            Letter::T => write!(f, "T"),
        }
    }
}

/// A sequence of single-qubit letters, stored in application order.
#[derive(Clone, Debug, PartialEq)]
pub struct GateWord {
    pub letters: Vec<Letter>,
    pub target_qubit: usize,
}

impl GateWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        GateWord { letters, target_qubit: 0 }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Product of the letter matrices, last-applied letter leftmost.
    pub fn matrix(&self) -> Unitary2 {
        self.letters.iter().fold(Unitary2::identity(), |acc, l| l.matrix() * acc)
    }

    pub fn to_ops(&self) -> Vec<GateOp> {
        self.letters
            .iter()
            .map(|l| match *l {
                Letter::W => GateOp::w(self.target_qubit),
                Letter::Phase(theta) => GateOp::phase(self.target_qubit, theta),
                Letter::T => GateOp::phase(self.target_qubit, FRAC_PI_4),
            })
            .collect()
    }
}

impl fmt::Display for GateWord {
    /// Operator-product notation: the leftmost factor acts last.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "I");
        }
        let parts: Vec<String> = self.letters.iter().rev().map(Letter::to_string).collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// Builds a 2×2 matrix from 8 reals, row-major, re/im interleaved.
pub fn unitary_from_reals(v: &[f64; 8]) -> Unitary2 {
    Matrix2::new(
        Complex64::new(v[0], v[1]),
        Complex64::new(v[2], v[3]),
        Complex64::new(v[4], v[5]),
        Complex64::new(v[6], v[7]),
    )
}

/// `‖U†U − I‖` in the max-entry norm.
pub fn unitarity_deviation(u: &Unitary2) -> f64 {
    (u.adjoint() * u - Unitary2::identity()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest singular value of a 2×2 complex matrix.
fn spectral_norm(b: &Unitary2) -> f64 {
    let h = b.adjoint() * b;
    let half_trace = 0.5 * (h[(0, 0)].re + h[(1, 1)].re);
    let half_gap = 0.5 * (h[(0, 0)].re - h[(1, 1)].re);
    let lambda = half_trace + (half_gap * half_gap + h[(0, 1)].norm_sqr()).sqrt();
    lambda.max(0.0).sqrt()
}

/// `min_φ ‖V − e^{iφ}U‖` in the operator norm, for unitary `U` and `V`.
pub fn phase_distance(u: &Unitary2, v: &Unitary2) -> f64 {
    let a = u.adjoint() * v;
    let trace = a[(0, 0)] + a[(1, 1)];
    // the optimal phase sits between the two eigenphases of U†V
    let phase = if trace.norm() > 0.0 { Complex64::from_polar(1.0, trace.arg()) } else { Complex64::new(1.0, 0.0) };
    spectral_norm(&(a - Unitary2::identity() * phase))
}

fn push_phase(letters: &mut Vec<Letter>, theta: f64) {
    let theta = normalize_angle(theta);
    if theta > DEGENERACY_TOLERANCE && TAU - theta > DEGENERACY_TOLERANCE {
        letters.push(Letter::Phase(theta));
    }
}

/// Exact decomposition `U ≃ P_δ · W · P_γ · W · P_β` up to global phase.
///
/// Diagonal targets become a single phase shift, targets with equal-modulus
/// rows become `P_δ · W · P_β`, and zero-angle letters are dropped.
pub fn compile_single_qubit(u: &Unitary2) -> Result<GateWord> {
    let deviation = unitarity_deviation(u);
    if deviation > 1e-10 {
        return Err(Error::NotUnitary { deviation });
    }
    let (u00, u01, u10, u11) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
    let mut letters = Vec::new();

    if u01.norm() <= DEGENERACY_TOLERANCE {
        push_phase(&mut letters, u11.arg() - u00.arg());
        return Ok(GateWord::new(letters));
    }
    if (u00.norm() - u01.norm()).abs() <= DEGENERACY_TOLERANCE {
        // P_δ W P_β = [[1, e^{iβ}], [e^{iδ}, −e^{i(β+δ)}]] / √2
        push_phase(&mut letters, u01.arg() - u00.arg());
        letters.push(Letter::W);
        push_phase(&mut letters, u10.arg() - u00.arg());
        return Ok(GateWord::new(letters));
    }

    // W P_γ W = e^{iγ/2} [[cos(γ/2), −i sin(γ/2)], [−i sin(γ/2), cos(γ/2)]]
    let gamma = 2.0 * u01.norm().atan2(u00.norm());
    let off_phase = 0.5 * gamma - FRAC_PI_2;
    let (beta, delta) = if u00.norm() > DEGENERACY_TOLERANCE {
        let global = u00.arg() - 0.5 * gamma;
        (u01.arg() - global - off_phase, u10.arg() - global - off_phase)
    } else {
        // anti-diagonal: only β + global and δ + global are determined
        let global = u01.arg() - off_phase;
        (0.0, u10.arg() - global - off_phase)
    };
    push_phase(&mut letters, beta);
    letters.push(Letter::W);
    push_phase(&mut letters, gamma);
    letters.push(Letter::W);
    push_phase(&mut letters, delta);
    Ok(GateWord::new(letters))
}

/// Key identifying a matrix up to global phase.
fn phase_key(m: &Unitary2) -> [i64; 8] {
    let pivot = m.iter().find(|z| z.norm() > 1e-6).copied().unwrap_or(Complex64::new(1.0, 0.0));
    let phase = Complex64::from_polar(1.0, -pivot.arg());
    let mut key = [0i64; 8];
    // column-major iteration order is fixed, which is all the key needs
    for (k, z) in m.iter().enumerate() {
        let w = z * phase;
        key[2 * k] = (w.re * 1e9).round() as i64;
        key[2 * k + 1] = (w.im * 1e9).round() as i64;
    }
    key
}

const SEARCH_ALPHABET: [Letter; 2] = [Letter::W, Letter::T];

fn trailing_t(word: &[Letter]) -> usize {
    word.iter().rev().take_while(|l| matches!(l, Letter::T)).count()
}

/// Best distance achieved by words of each length `0..=max_len`, and the
/// overall best word. Words are visited in (length, lexicographic) order and
/// a word only wins on a strict improvement, so ties go to the shortest and
/// then lexicographically smallest word.
fn search(u: &Unitary2, max_len: usize) -> Result<(GateWord, f64, Vec<f64>)> {
    if max_len > MAX_SEARCH_LENGTH {
        return Err(Error::invalid(format!("word length {max_len} exceeds {MAX_SEARCH_LENGTH}")));
    }
    let mut seen = HashSet::new();
    seen.insert(phase_key(&Unitary2::identity()));
    let mut frontier: Vec<(Vec<Letter>, Unitary2)> = vec![(Vec::new(), Unitary2::identity())];
    let mut best_word = Vec::new();
    let mut best = phase_distance(u, &Unitary2::identity());
    let mut profile = vec![best];

    for _ in 0..max_len {
        let mut next = Vec::new();
        for (word, m) in &frontier {
            for &letter in &SEARCH_ALPHABET {
                match letter {
                    Letter::W if matches!(word.last(), Some(Letter::W)) => continue,
                    Letter::T if trailing_t(word) == 7 => continue,
                    _ => {}
                }
                let product = letter.matrix() * m;
                if !seen.insert(phase_key(&product)) {
                    continue;
                }
                let mut extended = word.clone();
                extended.push(letter);
                let d = phase_distance(u, &product);
                if d < best - 1e-14 {
                    best = d;
                    best_word = extended.clone();
                }
                next.push((extended, product));
            }
        }
        profile.push(best);
        frontier = next;
    }
    Ok((GateWord::new(best_word), best, profile))
}

/// Closest word over `{W, T}` of length at most `max_len`, with its distance.
pub fn approx_search(u: &Unitary2, max_len: usize) -> Result<(GateWord, f64)> {
    let (word, d, _) = search(u, max_len)?;
    Ok((word, d))
}

/// Best distance reachable with words of length `≤ ℓ`, for `ℓ = 0..=max_len`.
pub fn approx_profile(u: &Unitary2, max_len: usize) -> Result<Vec<f64>> {
    Ok(search(u, max_len)?.2)
}
