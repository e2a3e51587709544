//! Query oracles: the bit-encoded `Q_f`, the Boolean xor query, and an
//! amplitude-loading rotation oracle for real-valued sequences.
//!
//! Register layout for every oracle is `|i⟩|y⟩` with the index register first.
//! Builders return compound gates on qubits `0..width`; shift them to place
//! them inside a larger circuit.

use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gate::{Compound, GateOp, UnitaryAction};

/// Largest value register accepted by the encoders.
pub const MAX_VALUE_BITS: u32 = 30;

/// `[v]_{m₂} = ⌊2^{m₂}(v−a)/(b−a)⌋`, with `v = b` mapped to `2^{m₂}−1`.
pub fn encode_value(v: f64, lo: f64, hi: f64, value_bits: u32) -> Result<u64> {
    check_interval(lo, hi)?;
    check_value_bits(value_bits)?;
    if !(lo..=hi).contains(&v) {
        return Err(Error::ValueOutOfRange { value: v, lo, hi });
    }
    let levels = 1u64 << value_bits;
    if v == hi {
        return Ok(levels - 1);
    }
    let code = (levels as f64 * (v - lo) / (hi - lo)).floor() as u64;
    Ok(code.min(levels - 1))
}

/// Fraction of the interval represented by a code, `k / (2^{m₂} − 1)`.
///
/// Both endpoints decode exactly, and the decoded value differs from the
/// encoded one by less than one quantization step `2^{−m₂}`.
pub fn decode_fraction(code: u64, value_bits: u32) -> f64 {
    code as f64 / ((1u64 << value_bits) - 1) as f64
}

fn check_interval(lo: f64, hi: f64) -> Result<()> {
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Error::invalid(format!("invalid range [{lo}, {hi}]")));
    }
    Ok(())
}

fn check_value_bits(value_bits: u32) -> Result<()> {
    if value_bits == 0 || value_bits > MAX_VALUE_BITS {
        return Err(Error::invalid(format!("value register needs 1..={MAX_VALUE_BITS} bits, got {value_bits}")));
    }
    Ok(())
}

fn index_bits_of(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::invalid(format!("sequence length {len} is not a power of two")));
    }
    Ok(len.trailing_zeros() as usize)
}

/// A real sequence `f: {0..N−1} → [a, b]` with its m₂-bit encoding.
#[derive(Clone, Debug)]
pub struct SequenceOracle {
    values: Arc<Vec<f64>>,
    lo: f64,
    hi: f64,
    value_bits: u32,
    codes: Arc<Vec<u64>>,
}

impl SequenceOracle {
    pub fn new(values: Vec<f64>, lo: f64, hi: f64, value_bits: u32) -> Result<Self> {
        index_bits_of(values.len())?;
        let codes = values
            .iter()
            .map(|&v| encode_value(v, lo, hi, value_bits))
            .collect::<Result<Vec<_>>>()?;
        Ok(SequenceOracle {
            values: Arc::new(values),
            lo,
            hi,
            value_bits,
            codes: Arc::new(codes),
        })
    }

    /// Same values under a different interval.
    pub fn with_range(&self, lo: f64, hi: f64) -> Result<Self> {
        SequenceOracle::new(self.values.to_vec(), lo, hi, self.value_bits)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn index_bits(&self) -> usize {
        self.values.len().trailing_zeros() as usize
    }

    pub fn value_bits(&self) -> u32 {
        self.value_bits
    }

    pub fn range(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    /// Decoded fractions `g(i) ∈ [0, 1]`.
    pub fn fractions(&self) -> Vec<f64> {
        self.codes.iter().map(|&k| decode_fraction(k, self.value_bits)).collect()
    }

    pub fn decode(&self, fraction: f64) -> f64 {
        self.lo + (self.hi - self.lo) * fraction
    }

    /// Exact mean of the raw values.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Mean of the decoded fractions, the quantity the rotation oracle loads.
    pub fn fraction_mean(&self) -> f64 {
        self.fractions().iter().sum::<f64>() / self.values.len() as f64
    }
}

/// A Boolean sequence `f: {0..N−1} → {0, 1}`.
#[derive(Clone, Debug)]
pub struct BooleanOracle {
    values: Arc<Vec<bool>>,
    promise_unique_marked: bool,
}

impl BooleanOracle {
    pub fn new(values: Vec<bool>) -> Result<Self> {
        index_bits_of(values.len())?;
        Ok(BooleanOracle { values: Arc::new(values), promise_unique_marked: false })
    }

    /// Search instance with the single marked index `marked`.
    pub fn unique(len: usize, marked: usize) -> Result<Self> {
        index_bits_of(len)?;
        if marked >= len {
            return Err(Error::invalid(format!("marked index {marked} outside 0..{len}")));
        }
        let values = (0..len).map(|i| i == marked).collect();
        Ok(BooleanOracle { values: Arc::new(values), promise_unique_marked: true })
    }

    /// Declares the unique-marked promise after checking it.
    pub fn with_unique_promise(mut self) -> Result<Self> {
        let marked = self.values.iter().filter(|&&v| v).count();
        if marked != 1 {
            return Err(Error::invalid(format!("promise violated: {marked} marked entries")));
        }
        self.promise_unique_marked = true;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn index_bits(&self) -> usize {
        self.values.len().trailing_zeros() as usize
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn has_unique_promise(&self) -> bool {
        self.promise_unique_marked
    }

    pub fn evaluate(&self, i: usize) -> bool {
        self.values[i]
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().filter(|&&v| v).count() as f64 / self.values.len() as f64
    }
}

/// `|i⟩|y⟩ → |i⟩|y ⊕ f(i)⟩` with a one-qubit target.
#[derive(Clone, Debug)]
pub struct XorQuery {
    values: Arc<Vec<bool>>,
}

impl UnitaryAction for XorQuery {
    fn width(&self) -> usize {
        self.values.len().trailing_zeros() as usize + 1
    }

    fn apply(&self, local: &mut [Complex64]) {
        for (i, &f) in self.values.iter().enumerate() {
            if f {
                local.swap(2 * i, 2 * i + 1);
            }
        }
    }

    fn inverse(&self) -> Arc<dyn UnitaryAction> {
        Arc::new(self.clone())
    }

    fn classical_image(&self, local: usize) -> Option<usize> {
        Some(if self.values[local >> 1] { local ^ 1 } else { local })
    }
}

/// `|i⟩|y⟩ → |i⟩|y + k_i mod 2^{m₂}⟩` (or minus, for the inverse).
#[derive(Clone, Debug)]
pub struct ModAddQuery {
    codes: Arc<Vec<u64>>,
    value_bits: u32,
    subtract: bool,
}

impl ModAddQuery {
    fn shift(&self, i: usize) -> usize {
        let modulus = 1u64 << self.value_bits;
        let k = self.codes[i] % modulus;
        (if self.subtract { (modulus - k) % modulus } else { k }) as usize
    }
}

impl UnitaryAction for ModAddQuery {
    fn width(&self) -> usize {
        self.codes.len().trailing_zeros() as usize + self.value_bits as usize
    }

    fn apply(&self, local: &mut [Complex64]) {
        let block = 1usize << self.value_bits;
        for (i, chunk) in local.chunks_exact_mut(block).enumerate() {
            // y -> y + k is a cyclic right rotation of the value block by k
            chunk.rotate_right(self.shift(i));
        }
    }

    fn inverse(&self) -> Arc<dyn UnitaryAction> {
        Arc::new(ModAddQuery { subtract: !self.subtract, ..self.clone() })
    }

    fn classical_image(&self, local: usize) -> Option<usize> {
        let block = 1usize << self.value_bits;
        let (i, y) = (local / block, local % block);
        Some(i * block + (y + self.shift(i)) % block)
    }
}

/// Rotates the target qubit by `|0⟩ → √(1−g)|0⟩ + √g|1⟩` for each index.
#[derive(Clone, Debug)]
pub struct RotationQuery {
    fractions: Arc<Vec<f64>>,
    adjoint: bool,
}

impl RotationQuery {
    pub fn new(fractions: Vec<f64>) -> Self {
        RotationQuery { fractions: Arc::new(fractions), adjoint: false }
    }
}

fn rotate_pair(pair: &mut [Complex64], g: f64, adjoint: bool) {
    let c = (1.0 - g).max(0.0).sqrt();
    let s = g.max(0.0).sqrt();
    let s = if adjoint { -s } else { s };
    let (a0, a1) = (pair[0], pair[1]);
    pair[0] = a0 * c - a1 * s;
    pair[1] = a0 * s + a1 * c;
}

impl UnitaryAction for RotationQuery {
    fn width(&self) -> usize {
        self.fractions.len().trailing_zeros() as usize + 1
    }

    fn apply(&self, local: &mut [Complex64]) {
        for (pair, &g) in local.chunks_exact_mut(2).zip(self.fractions.iter()) {
            rotate_pair(pair, g, self.adjoint);
        }
    }

    fn inverse(&self) -> Arc<dyn UnitaryAction> {
        Arc::new(RotationQuery { adjoint: !self.adjoint, ..self.clone() })
    }
}

/// Rotation of an ancilla conditioned on an m₂-bit value register:
/// `|k⟩|0⟩ → |k⟩(√(1−g_k)|0⟩ + √g_k|1⟩)` with `g_k = k/(2^{m₂}−1)`.
#[derive(Clone, Debug)]
pub struct ValueRotation {
    value_bits: u32,
    adjoint: bool,
}

impl UnitaryAction for ValueRotation {
    fn width(&self) -> usize {
        self.value_bits as usize + 1
    }

    fn apply(&self, local: &mut [Complex64]) {
        for (k, pair) in local.chunks_exact_mut(2).enumerate() {
            rotate_pair(pair, decode_fraction(k as u64, self.value_bits), self.adjoint);
        }
    }

    fn inverse(&self) -> Arc<dyn UnitaryAction> {
        Arc::new(ValueRotation { adjoint: !self.adjoint, ..self.clone() })
    }
}

/// `Q_f: |i⟩|y⟩ → |i⟩|y ⊕ [f(i)]_{m₂}⟩` on `m₁ + m₂` qubits, addition mod `2^{m₂}`.
pub fn build_bit_query(oracle: &SequenceOracle) -> GateOp {
    let action = ModAddQuery {
        codes: oracle.codes.clone(),
        value_bits: oracle.value_bits,
        subtract: false,
    };
    let width = action.width();
    GateOp::Compound(Compound::new("Q_f", (0..width).collect(), Arc::new(action)).with_queries(1))
}

/// `Q_f: |i⟩|y⟩ → |i⟩|y ⊕ f(i)⟩` on `m₁ + 1` qubits.
///
/// With the last qubit prepared in `(|0⟩ − |1⟩)/√2` this acts as the phase
/// flip `(−1)^{f(i)}` on the index register.
pub fn build_boolean_query(oracle: &BooleanOracle) -> GateOp {
    let action = XorQuery { values: oracle.values.clone() };
    let width = action.width();
    GateOp::Compound(Compound::new("Q_f", (0..width).collect(), Arc::new(action)).with_queries(1))
}

/// Amplitude-loading oracle on `m₁ + 1` qubits using the decoded fractions.
pub fn build_rotation_query(oracle: &SequenceOracle) -> GateOp {
    let action = RotationQuery::new(oracle.fractions());
    let width = action.width();
    GateOp::Compound(Compound::new("R_f", (0..width).collect(), Arc::new(action)).with_queries(1))
}

/// Value-register-controlled ancilla rotation on `m₂ + 1` qubits. Combined
/// with [`build_bit_query`] it loads the same amplitudes as the rotation
/// oracle, through the value register.
pub fn build_value_rotation(value_bits: u32) -> Result<GateOp> {
    check_value_bits(value_bits)?;
    let action = ValueRotation { value_bits, adjoint: false };
    let width = action.width();
    // one controlled rotation per value bit
    Ok(GateOp::Compound(
        Compound::new("R_value", (0..width).collect(), Arc::new(action)).with_cost(value_bits as u64),
    ))
}

/// Parses a sequence file: a header line `a,b,m2`, one line with those three
/// numbers, then one value per line. Blank lines and `#` comments are skipped.
pub fn parse_sequence_csv(text: &str) -> Result<SequenceOracle> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line, header) = lines.next().ok_or(Error::Parse { line: 0, message: "empty file".into() })?;
    let names: Vec<&str> = header.split(',').map(str::trim).collect();
    if names != ["a", "b", "m2"] {
        return Err(Error::Parse { line, message: format!("expected header 'a,b,m2', found '{header}'") });
    }
    let (line, params) = lines.next().ok_or(Error::Parse { line, message: "missing a,b,m2 values".into() })?;
    let fields: Vec<&str> = params.split(',').map(str::trim).collect();
    if fields.len() != 3 {
        return Err(Error::Parse { line, message: "expected three fields a,b,m2".into() });
    }
    let num = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse { line, message: format!("'{s}': {e}") });
    let (lo, hi) = (num(fields[0])?, num(fields[1])?);
    let value_bits: u32 = fields[2]
        .parse()
        .map_err(|e| Error::Parse { line, message: format!("m2 '{}': {e}", fields[2]) })?;

    let values = lines
        .map(|(line, l)| l.parse::<f64>().map_err(|e| Error::Parse { line, message: format!("'{l}': {e}") }))
        .collect::<Result<Vec<_>>>()?;
    SequenceOracle::new(values, lo, hi, value_bits)
}

pub fn load_sequence_csv(path: impl AsRef<Path>) -> Result<SequenceOracle> {
    parse_sequence_csv(&std::fs::read_to_string(path)?)
}

pub fn format_sequence_csv(oracle: &SequenceOracle) -> String {
    let mut out = format!("a,b,m2\n{},{},{}\n", oracle.lo, oracle.hi, oracle.value_bits);
    for v in oracle.values.iter() {
        out.push_str(&format!("{v}\n"));
    }
    out
}
