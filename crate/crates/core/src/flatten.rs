//! Dense standard interpretation of the building blocks and of circuit terms.
//!
//! Everything here is floating point and exists to check the exact layers
//! against matrices. Basis ordering: wire 0 is the leftmost tensor factor,
//! i.e. the most significant bit of a basis index.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{CliffordCircuit, GateApp, GateKind};
use crate::pauli::{PauliLetter, PauliString, Phase};

pub type DenseMatrix = DMatrix<Complex64>;
pub type DenseVector = DVector<Complex64>;

/// Largest wire (or leg) count the dense oracle accepts.
pub const MAX_DENSE_WIRES: usize = 12;

/// Default max-norm tolerance for matrix equality checks.
pub const MATRIX_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlattenError {
    #[error("{0} wires exceeds the dense limit of {MAX_DENSE_WIRES}")]
    TooManyWires(usize),
    #[error("{0} legs exceeds the dense limit of {MAX_DENSE_WIRES}")]
    TooManyLegs(usize),
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn phase_value(p: Phase) -> Complex64 {
    match p.exponent() {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    }
}

fn mat2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> DenseMatrix {
    DenseMatrix::from_row_slice(2, 2, &[a, b, c, d])
}

pub fn letter_matrix(l: PauliLetter) -> DenseMatrix {
    match l {
        PauliLetter::I => mat2(ONE, ZERO, ZERO, ONE),
        PauliLetter::X => mat2(ZERO, ONE, ONE, ZERO),
        PauliLetter::Y => mat2(ZERO, -I, I, ZERO),
        PauliLetter::Z => mat2(ONE, ZERO, ZERO, -ONE),
    }
}

pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    a.kronecker(b)
}

pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a DenseMatrix>) -> DenseMatrix {
    factors
        .into_iter()
        .fold(DenseMatrix::from_element(1, 1, ONE), |acc, m| kron(&acc, m))
}

pub fn identity(dim: usize) -> DenseMatrix {
    DenseMatrix::identity(dim, dim)
}

/// Largest entrywise modulus of `a - b`; infinite on shape mismatch.
pub fn max_norm_diff(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn approx_eq(a: &DenseMatrix, b: &DenseMatrix) -> bool {
    max_norm_diff(a, b) <= MATRIX_TOL
}

/// `u * m * u^dagger`.
pub fn conjugate(u: &DenseMatrix, m: &DenseMatrix) -> DenseMatrix {
    u * m * u.adjoint()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpiderColor {
    Z,
    X,
}

/// Spider angle as a multiple of pi/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuarterTurns(pub u8);

impl QuarterTurns {
    pub const ZERO: QuarterTurns = QuarterTurns(0);
    pub const HALF_PI: QuarterTurns = QuarterTurns(1);
    pub const PI: QuarterTurns = QuarterTurns(2);
    pub const THREE_HALVES_PI: QuarterTurns = QuarterTurns(3);

    pub fn phase(self) -> Phase {
        Phase::from_exponent(self.0 as i64)
    }
}

/// A stabilizer-fragment spider with `in_legs` inputs and `out_legs` outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Spider {
    pub color: SpiderColor,
    pub in_legs: usize,
    pub out_legs: usize,
    pub alpha: QuarterTurns,
}

impl Spider {
    pub fn z(in_legs: usize, out_legs: usize, alpha: QuarterTurns) -> Self {
        Spider {
            color: SpiderColor::Z,
            in_legs,
            out_legs,
            alpha,
        }
    }

    pub fn x(in_legs: usize, out_legs: usize, alpha: QuarterTurns) -> Self {
        Spider {
            color: SpiderColor::X,
            in_legs,
            out_legs,
            alpha,
        }
    }
}

fn tensor_power(v: &DenseVector, k: usize) -> DenseVector {
    let mut out = DenseVector::from_element(1, ONE);
    for _ in 0..k {
        out = out.kronecker(v);
    }
    out
}

/// `|a>^m <b|^n + e^{i alpha} |c>^m <d|^n` in the spider's basis.
pub fn flatten_spider(s: Spider) -> Result<DenseMatrix, FlattenError> {
    let legs = s.in_legs + s.out_legs;
    if legs > MAX_DENSE_WIRES {
        return Err(FlattenError::TooManyLegs(legs));
    }
    let (first, second) = match s.color {
        SpiderColor::Z => (
            DenseVector::from_column_slice(&[ONE, ZERO]),
            DenseVector::from_column_slice(&[ZERO, ONE]),
        ),
        SpiderColor::X => {
            let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
            (
                DenseVector::from_column_slice(&[h, h]),
                DenseVector::from_column_slice(&[h, -h]),
            )
        }
    };
    let term = |v: &DenseVector| tensor_power(v, s.out_legs) * tensor_power(v, s.in_legs).adjoint();
    Ok(term(&first) + term(&second) * phase_value(s.alpha.phase()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Primitive {
    Identity,
    Cup,
    Cap,
    Swap,
    Hadamard,
}

/// Generator table entries. Cup and cap are unnormalized (`|00> + |11>`).
pub fn flatten_primitive(p: Primitive) -> DenseMatrix {
    match p {
        Primitive::Identity => identity(2),
        Primitive::Cup => DenseMatrix::from_column_slice(4, 1, &[ONE, ZERO, ZERO, ONE]),
        Primitive::Cap => DenseMatrix::from_row_slice(1, 4, &[ONE, ZERO, ZERO, ONE]),
        Primitive::Swap => {
            let mut m = DenseMatrix::zeros(4, 4);
            for (r, c) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
                m[(r, c)] = ONE;
            }
            m
        }
        Primitive::Hadamard => {
            let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
            mat2(h, h, h, -h)
        }
    }
}

/// The 2x2 (or 4x4 for CX, control first) matrix of a gate kind.
pub fn gate_matrix(kind: GateKind) -> DenseMatrix {
    match kind {
        GateKind::H => flatten_primitive(Primitive::Hadamard),
        GateKind::S => mat2(ONE, ZERO, ZERO, I),
        GateKind::X => letter_matrix(PauliLetter::X),
        GateKind::Y => letter_matrix(PauliLetter::Y),
        GateKind::Z => letter_matrix(PauliLetter::Z),
        GateKind::CX => {
            let p0 = mat2(ONE, ZERO, ZERO, ZERO);
            let p1 = mat2(ZERO, ZERO, ZERO, ONE);
            kron(&p0, &identity(2)) + kron(&p1, &letter_matrix(PauliLetter::X))
        }
    }
}

fn check_wires(n: usize) -> Result<(), FlattenError> {
    if n > MAX_DENSE_WIRES {
        Err(FlattenError::TooManyWires(n))
    } else {
        Ok(())
    }
}

/// Full `2^n x 2^n` matrix of one gate, built from Kronecker products.
pub fn embed_gate(gate: &GateApp, n: usize) -> Result<DenseMatrix, FlattenError> {
    check_wires(n)?;
    let id = identity(2);
    match *gate {
        GateApp::Single(kind, w) => {
            let g = gate_matrix(kind);
            Ok(kron_all((0..n).map(|j| if j == w { &g } else { &id })))
        }
        GateApp::Cx { control, target } => {
            let p0 = mat2(ONE, ZERO, ZERO, ZERO);
            let p1 = mat2(ZERO, ZERO, ZERO, ONE);
            let x = letter_matrix(PauliLetter::X);
            let off = kron_all((0..n).map(|j| if j == control { &p0 } else { &id }));
            let on = kron_all((0..n).map(|j| match j {
                j if j == control => &p1,
                j if j == target => &x,
                _ => &id,
            }));
            Ok(off + on)
        }
    }
}

fn bit(n: usize, wire: usize) -> usize {
    1 << (n - 1 - wire)
}

/// Left-multiplies every column of `m` (rows indexed by basis states) by the gate.
fn apply_gate_rows(m: &mut DenseMatrix, gate: &GateApp, n: usize) {
    let dim = m.nrows();
    match *gate {
        GateApp::Single(kind, w) => {
            let g = gate_matrix(kind);
            let b = bit(n, w);
            for r0 in (0..dim).filter(|r| r & b == 0) {
                let r1 = r0 | b;
                for col in 0..m.ncols() {
                    let a0 = m[(r0, col)];
                    let a1 = m[(r1, col)];
                    m[(r0, col)] = g[(0, 0)] * a0 + g[(0, 1)] * a1;
                    m[(r1, col)] = g[(1, 0)] * a0 + g[(1, 1)] * a1;
                }
            }
        }
        GateApp::Cx { control, target } => {
            let cb = bit(n, control);
            let tb = bit(n, target);
            for r in (0..dim).filter(|r| r & cb != 0 && r & tb == 0) {
                m.swap_rows(r, r | tb);
            }
        }
    }
}

/// `U = U_t ... U_1`, gate 0 rightmost.
pub fn flatten_circuit(c: &CliffordCircuit) -> Result<DenseMatrix, FlattenError> {
    let n = c.n_wires();
    check_wires(n)?;
    let mut m = identity(1 << n);
    for g in c.gates() {
        apply_gate_rows(&mut m, g, n);
    }
    Ok(m)
}

/// Same product as [`flatten_circuit`], built by multiplying Kronecker-embedded gates.
pub fn flatten_circuit_kron(c: &CliffordCircuit) -> Result<DenseMatrix, FlattenError> {
    let n = c.n_wires();
    let mut m = identity(1 << n);
    for g in c.gates() {
        m = embed_gate(g, n)? * m;
    }
    Ok(m)
}

/// Computational basis state `|0...0>`.
pub fn zero_state(n: usize) -> DenseVector {
    let mut v = DenseVector::zeros(1 << n);
    v[0] = ONE;
    v
}

/// `U |0^n>` without forming `U`.
pub fn circuit_state(c: &CliffordCircuit) -> Result<DenseVector, FlattenError> {
    let n = c.n_wires();
    check_wires(n)?;
    let mut m = DenseMatrix::from_column_slice(1 << n, 1, zero_state(n).as_slice());
    for g in c.gates() {
        apply_gate_rows(&mut m, g, n);
    }
    Ok(m.column(0).into_owned())
}

pub fn flatten_pauli(p: &PauliString) -> Result<DenseMatrix, FlattenError> {
    check_wires(p.len())?;
    let mats: Vec<_> = p.letters().iter().map(|&l| letter_matrix(l)).collect();
    Ok(kron_all(&mats) * phase_value(p.phase()))
}

/// COPY tensor component as a polynomial in the bit sum.
pub fn copy_component(i: u8, j: u8, k: u8) -> f64 {
    let s = (i + j + k) as f64;
    0.5 * s * s - 1.5 * s + 1.0
}

/// XOR tensor component as a polynomial in the bit sum.
pub fn xor_component(q: u8, r: u8, s: u8) -> f64 {
    let t = (q + r + s) as f64;
    -2.0 / 3.0 * t.powi(3) + 3.0 * t * t - 10.0 / 3.0 * t + 1.0
}

/// `sum_{ijk} delta^i_{jk} |jk><i|`, a 4x2 map.
pub fn copy_tensor() -> DenseMatrix {
    let mut m = DenseMatrix::zeros(4, 2);
    for i in 0..2u8 {
        for j in 0..2u8 {
            for k in 0..2u8 {
                m[((2 * j + k) as usize, i as usize)] = Complex64::new(copy_component(i, j, k), 0.0);
            }
        }
    }
    m
}

/// `sum_{qrs} [xor]^q_{rs} |q><rs|`, a 2x4 map.
pub fn xor_tensor() -> DenseMatrix {
    let mut m = DenseMatrix::zeros(2, 4);
    for q in 0..2u8 {
        for r in 0..2u8 {
            for s in 0..2u8 {
                m[(q as usize, (2 * r + s) as usize)] = Complex64::new(xor_component(q, r, s), 0.0);
            }
        }
    }
    m
}

/// One row per line, entries written as `re+imi`.
pub fn to_csv(m: &DenseMatrix) -> String {
    let mut out = String::new();
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|c| {
                let z = m[(r, c)];
                format!("{}{:+}i", z.re, z.im)
            })
            .collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}
