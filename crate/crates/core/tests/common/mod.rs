#![allow(dead_code)]

use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stabzx::flatten::{
    copy_tensor, flatten_circuit, flatten_pauli, flatten_spider, gate_matrix, identity, kron, letter_matrix,
    max_norm_diff, xor_tensor, DenseMatrix, QuarterTurns, Spider,
};
use stabzx::harness::random_circuit;
use stabzx::{CliffordCircuit, GateApp, GateKind, PauliLetter, PauliString, Phase};

pub const TOL: f64 = 1e-10;

/// Scalar `s` with `XOR . COPY = s * (X state)(Z effect)`, measured once by
/// dense contraction in `hopf_scalar_measured` and frozen here.
pub const HOPF_SCALAR: f64 = 0.5;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn ci(im: f64) -> Complex64 {
    Complex64::new(0.0, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_string<R: Rng>(n: usize, rng: &mut R) -> PauliString {
    let letters = (0..n).map(|_| PauliLetter::ALL[rng.random_range(0..4)]).collect();
    PauliString::new(Phase::from_exponent(rng.random_range(0..4)), letters)
}

pub fn random_instance<R: Rng>(max_n: usize, max_t: usize, rng: &mut R) -> CliffordCircuit {
    let n = rng.random_range(1..=max_n);
    let t = rng.random_range(0..=max_t);
    random_circuit(n, t, rng)
}

fn basis_ket(bits: &[u8]) -> DenseMatrix {
    let mut idx = 0;
    for &b in bits {
        idx = 2 * idx + b as usize;
    }
    let mut v = DenseMatrix::zeros(1 << bits.len(), 1);
    v[(idx, 0)] = c(1.0);
    v
}

/// Sum of computational kets, e.g. `["000", "111"]`.
pub fn ket_sum(labels: &[&str]) -> DenseMatrix {
    labels
        .iter()
        .map(|l| basis_ket(&l.bytes().map(|b| b - b'0').collect::<Vec<_>>()))
        .fold(DenseMatrix::zeros(1 << labels[0].len(), 1), |a, b| a + b)
}

/// Operator with `letter` on the listed wires of an `n`-wire register.
pub fn on_wires(n: usize, wires: &[usize], letter: PauliLetter) -> DenseMatrix {
    let mut letters = vec![PauliLetter::I; n];
    for &w in wires {
        letters[w] = letter;
    }
    flatten_pauli(&PauliString::new(Phase::ONE, letters)).unwrap()
}

/// Residual of every building-block identity, by name.
pub fn building_block_identities() -> Vec<(String, f64)> {
    use PauliLetter::{X, Y, Z};
    let mut out: Vec<(String, f64)> = Vec::new();
    let mut check = |name: &str, a: &DenseMatrix, b: &DenseMatrix| out.push((name.to_string(), max_norm_diff(a, b)));

    let id2 = identity(2);
    let h = gate_matrix(GateKind::H);
    let (x, y, z) = (letter_matrix(X), letter_matrix(Y), letter_matrix(Z));
    let copy_spider = flatten_spider(Spider::z(1, 2, QuarterTurns::ZERO)).unwrap();
    let xor_spider = flatten_spider(Spider::x(2, 1, QuarterTurns::ZERO)).unwrap();

    // polynomial components against the braket forms
    let copy_braket = ket_sum(&["00"]) * ket_sum(&["0"]).adjoint() + ket_sum(&["11"]) * ket_sum(&["1"]).adjoint();
    let xor_braket =
        ket_sum(&["0"]) * ket_sum(&["00", "11"]).adjoint() + ket_sum(&["1"]) * ket_sum(&["01", "10"]).adjoint();
    check("copy polynomial = braket COPY", &copy_tensor(), &copy_braket);
    check("copy polynomial = Z spider (1 in, 2 out)", &copy_tensor(), &copy_spider);
    check("xor polynomial = braket XOR", &xor_tensor(), &xor_braket);
    check(
        "xor polynomial = sqrt2 * X spider (2 in, 1 out)",
        &xor_tensor(),
        &(&xor_spider * c(SQRT_2)),
    );

    // CX as the COPY/XOR contraction
    let cx_contracted = kron(&id2, &xor_tensor()) * kron(&copy_tensor(), &id2);
    check("CX = (I x XOR)(COPY x I)", &cx_contracted, &gate_matrix(GateKind::CX));

    // C1: XOR is COPY with Hadamards on every leg
    let hh = kron(&h, &h);
    check(
        "C1: X spider = H COPY^T (H x H)",
        &xor_spider,
        &(&h * copy_spider.transpose() * &hh),
    );

    // C3, I1
    check("C3: H^2 = I", &(&h * &h), &id2);
    check("I1: Z^2 = I", &(&z * &z), &id2);
    check("I1: X^2 = I", &(&x * &x), &id2);

    // Hopf law
    let hopf_lhs = &xor_spider * &copy_spider;
    let x_state = flatten_spider(Spider::x(0, 1, QuarterTurns::ZERO)).unwrap();
    let z_effect = flatten_spider(Spider::z(1, 0, QuarterTurns::ZERO)).unwrap();
    check(
        "Hopf: XOR COPY = s |X><Z|",
        &hopf_lhs,
        &(x_state * z_effect * c(HOPF_SCALAR)),
    );

    // C(X)^2 = I
    let cx2 = CliffordCircuit::from_gates(2, vec![GateApp::cx(0, 1), GateApp::cx(0, 1)]).unwrap();
    check("C(X)^2 = I", &flatten_circuit(&cx2).unwrap(), &identity(4));

    // stabilizers of COPY as maps
    let copy = &copy_spider;
    check("ST1: COPY Z = (Z x I) COPY", &(copy * &z), &(kron(&z, &id2) * copy));
    check("ST1: COPY Z = (I x Z) COPY", &(copy * &z), &(kron(&id2, &z) * copy));
    check("ST2: COPY X = (X x X) COPY", &(copy * &x), &(kron(&x, &x) * copy));
    check("ST3: COPY Y = (Y x X) COPY", &(copy * &y), &(kron(&y, &x) * copy));
    check("ST3: COPY Y = (X x Y) COPY", &(copy * &y), &(kron(&x, &y) * copy));

    // GHZ-shaped COPY state and XOR state
    let ghz = ket_sum(&["000", "111"]);
    let parity = ket_sum(&["000", "011", "101", "110"]);
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        check(
            &format!("P1: Z{i} GHZ = Z{j} GHZ"),
            &(on_wires(3, &[i], Z) * &ghz),
            &(on_wires(3, &[j], Z) * &ghz),
        );
        check(&format!("Z{i}Z{j} GHZ = GHZ"), &(on_wires(3, &[i, j], Z) * &ghz), &ghz);
        check(
            &format!("K1a: X{i} GHZ = X{j}X{k} GHZ"),
            &(on_wires(3, &[i], X) * &ghz),
            &(on_wires(3, &[j, k], X) * &ghz),
        );
        check(
            &format!("P2: X{i} XOR = X{j} XOR"),
            &(on_wires(3, &[i], X) * &parity),
            &(on_wires(3, &[j], X) * &parity),
        );
        check(
            &format!("K1b: Z{i} XOR = Z{j}Z{k} XOR"),
            &(on_wires(3, &[i], Z) * &parity),
            &(on_wires(3, &[j, k], Z) * &parity),
        );
    }

    // Y gate rules
    check("Y1: ZX = iY", &(&z * &x), &(&y * ci(1.0)));
    check("Y2: XZ = -iY", &(&x * &z), &(&y * ci(-1.0)));

    out
}
