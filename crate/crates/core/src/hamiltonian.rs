//! Telescoping parent Hamiltonians `U P0 U^dagger` and their spectral certificates.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::circuit::CliffordCircuit;
use crate::flatten::{circuit_state, flatten_pauli, DenseMatrix, DenseVector};
use crate::pauli::{PauliLetter, PauliString};
use crate::rewrite::{normal_form_shared, RewriteError, Strategy};

/// Largest wire count accepted by [`spectral_check`].
pub const MAX_SPECTRAL_WIRES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HamiltonianError {
    #[error("hamiltonian has {hamiltonian} wires but the circuit has {circuit}")]
    LengthMismatch { hamiltonian: usize, circuit: usize },
    #[error("term {0} has an imaginary phase")]
    NonHermitian(PauliString),
    #[error("{0} wires exceeds the dense spectral limit of {MAX_SPECTRAL_WIRES}")]
    TooManyWires(usize),
    #[error("need at least {min} wires, got {got}")]
    TooFewWires { min: usize, got: usize },
}

impl From<RewriteError> for HamiltonianError {
    fn from(e: RewriteError) -> Self {
        match e {
            RewriteError::LengthMismatch { frame, circuit } => HamiltonianError::LengthMismatch {
                hamiltonian: frame,
                circuit,
            },
            other => unreachable!("normal form cannot fail with {other}"),
        }
    }
}

/// Real combination of sign-free Pauli strings with exact rational weights.
///
/// Like terms are merged, zero terms dropped, and terms kept with the
/// identity first and the rest in lexicographic letter order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliSum {
    n: usize,
    terms: Vec<(Rational64, PauliString)>,
}

fn term_key(p: &PauliString) -> (bool, String) {
    (!p.is_identity_up_to_phase(), p.letters_text())
}

impl PauliSum {
    pub fn zero(n: usize) -> Self {
        PauliSum { n, terms: Vec::new() }
    }

    /// Folds each string's `+1`/`-1` phase into its coefficient.
    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (Rational64, PauliString)>,
    ) -> Result<Self, HamiltonianError> {
        let mut merged: BTreeMap<(bool, String), (Rational64, PauliString)> = BTreeMap::new();
        for (coeff, string) in terms {
            if string.len() != n {
                return Err(HamiltonianError::LengthMismatch {
                    hamiltonian: n,
                    circuit: string.len(),
                });
            }
            let sign = string
                .phase()
                .sign()
                .ok_or_else(|| HamiltonianError::NonHermitian(string.clone()))?;
            let unsigned = string.unsigned();
            merged
                .entry(term_key(&unsigned))
                .and_modify(|(c, _)| *c += coeff * sign)
                .or_insert((coeff * sign, unsigned));
        }
        let terms = merged
            .into_values()
            .filter(|(c, _)| *c != Rational64::from_integer(0))
            .collect();
        Ok(PauliSum { n, terms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(Rational64, PauliString)] {
        &self.terms
    }

    /// Number of Pauli terms.
    pub fn cardinality(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, string: &PauliString) -> Rational64 {
        self.terms
            .iter()
            .find(|(_, s)| s.letters() == string.letters())
            .map_or(Rational64::from_integer(0), |(c, _)| {
                *c * string.phase().sign().unwrap_or(0)
            })
    }

    pub fn to_dense(&self) -> Result<DenseMatrix, HamiltonianError> {
        let dim = 1usize << self.n;
        let mut m = DenseMatrix::zeros(dim, dim);
        for (coeff, string) in &self.terms {
            let c = *coeff.numer() as f64 / *coeff.denom() as f64;
            let p = flatten_pauli(string).map_err(|_| HamiltonianError::TooManyWires(self.n))?;
            m += p * Complex64::new(c, 0.0);
        }
        Ok(m)
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (c, s)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "({c})*{}", s.letters_text())?;
        }
        Ok(())
    }
}

struct TermJson<'a>(&'a Rational64, &'a PauliString);

impl Serialize for TermJson<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Term", 2)?;
        st.serialize_field("coeff", &self.0.to_string())?;
        st.serialize_field("pauli", &self.1.to_string())?;
        st.end()
    }
}

impl Serialize for PauliSum {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<_> = self.terms.iter().map(|(c, s)| TermJson(c, s)).collect();
        let mut st = serializer.serialize_struct("PauliSum", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

fn half(k: i64) -> Rational64 {
    Rational64::new(k, 2)
}

/// `P0 = sum_j |1><1|_j = (n/2) I - (1/2) sum_j Z_j`.
pub fn initial_projector(n: usize) -> PauliSum {
    assert!(n >= 1, "projector needs at least one wire");
    let id = (half(n as i64), PauliString::identity(n));
    let zs = (0..n).map(|w| (half(-1), PauliString::single(n, w, PauliLetter::Z)));
    PauliSum::from_terms(n, std::iter::once(id).chain(zs)).expect("well-formed terms")
}

/// Result of conjugating a Pauli sum through a circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conjugated {
    pub sum: PauliSum,
    /// Gate absorptions over all terms, including identity-support skips.
    pub absorptions: usize,
    pub counted_rewrites: usize,
}

pub fn conjugate_sum_counted(h: &PauliSum, c: &CliffordCircuit) -> Result<Conjugated, HamiltonianError> {
    if h.n != c.n_wires() {
        return Err(HamiltonianError::LengthMismatch {
            hamiltonian: h.n,
            circuit: c.n_wires(),
        });
    }
    let shared = std::sync::Arc::new(c.clone());
    let mut absorptions = 0;
    let mut counted_rewrites = 0;
    let mut images = Vec::with_capacity(h.terms.len());
    for (coeff, string) in &h.terms {
        let trace = normal_form_shared(std::sync::Arc::clone(&shared), string, Strategy::InOrder)?;
        absorptions += trace.steps.len();
        counted_rewrites += trace.counted_rewrites;
        images.push((*coeff, trace.final_string));
    }
    Ok(Conjugated {
        sum: PauliSum::from_terms(h.n, images)?,
        absorptions,
        counted_rewrites,
    })
}

/// `c h c^dagger`, term by term through the rewrite system.
pub fn conjugate_sum(h: &PauliSum, c: &CliffordCircuit) -> Result<PauliSum, HamiltonianError> {
    conjugate_sum_counted(h, c).map(|r| r.sum)
}

/// The telescoped parent Hamiltonian of `c|0^n>`.
pub fn parent_hamiltonian(c: &CliffordCircuit) -> PauliSum {
    conjugate_sum(&initial_projector(c.n_wires()), c).expect("projector matches circuit width")
}

/// Closed form of the GHZ parent Hamiltonian on an open chain:
/// `(1/2)(1 - X...X) + (1/2) sum_{j<n} (1 - Z_j Z_{j+1})`.
pub fn ghz_hamiltonian(n: usize) -> Result<PauliSum, HamiltonianError> {
    if n < 2 {
        return Err(HamiltonianError::TooFewWires { min: 2, got: n });
    }
    let mut terms = vec![
        (half(1), PauliString::identity(n)),
        (half(-1), PauliString::new(Default::default(), vec![PauliLetter::X; n])),
    ];
    for j in 0..n - 1 {
        let mut letters = vec![PauliLetter::I; n];
        letters[j] = PauliLetter::Z;
        letters[j + 1] = PauliLetter::Z;
        terms.push((half(1), PauliString::identity(n)));
        terms.push((half(-1), PauliString::new(Default::default(), letters)));
    }
    PauliSum::from_terms(n, terms)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralOptions {
    pub test_states: usize,
    pub seed: u64,
    /// Eigenvalues at most this far from zero count as kernel.
    pub zero_tol: f64,
    /// Slack allowed in the fidelity inequalities.
    pub slack: f64,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions {
            test_states: 100,
            seed: 0,
            zero_tol: 1e-9,
            slack: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FidelityCheck {
    pub energy: f64,
    pub fidelity: f64,
    pub lower: f64,
    pub upper: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport {
    pub n: usize,
    pub min_eig: f64,
    pub max_eig: f64,
    pub kernel_dim: usize,
    pub gap: f64,
    /// Squared norm of the projection of `c|0^n>` onto the kernel.
    pub kernel_overlap: f64,
    pub fidelity_states: usize,
    pub fidelity_bounds_ok: bool,
    pub passed: bool,
    #[serde(skip)]
    pub eigenvalues: Vec<f64>,
    #[serde(skip)]
    pub fidelity_checks: Vec<FidelityCheck>,
}

fn expectation(h: &DenseMatrix, v: &DenseVector) -> f64 {
    v.dotc(&(h * v)).re
}

fn random_state_near<R: Rng>(psi: &DenseVector, rng: &mut R) -> DenseVector {
    let eps: f64 = rng.random_range(0.0..1.5);
    let noise = DenseVector::from_fn(psi.len(), |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let noise = &noise / Complex64::new(noise.norm(), 0.0);
    let v = psi + noise * Complex64::new(eps, 0.0);
    let norm = v.norm();
    v / Complex64::new(norm, 0.0)
}

/// Dense certificate that `h` is a parent Hamiltonian of `c|0^n>`: zero
/// ground energy, one-dimensional kernel containing the circuit output,
/// and the fidelity sandwich `1 - E/gap <= |<phi|psi>|^2 <= 1 - E/max`
/// for random states with `E = <phi|h|phi> < gap`.
pub fn spectral_check(
    h: &PauliSum,
    c: &CliffordCircuit,
    opts: &SpectralOptions,
) -> Result<SpectralReport, HamiltonianError> {
    let n = h.n;
    if n > MAX_SPECTRAL_WIRES {
        return Err(HamiltonianError::TooManyWires(n));
    }
    if n != c.n_wires() {
        return Err(HamiltonianError::LengthMismatch {
            hamiltonian: n,
            circuit: c.n_wires(),
        });
    }
    let dense = h.to_dense()?;
    let eig = SymmetricEigen::new(dense.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let min_eig = eigenvalues[0];
    let max_eig = *eigenvalues.last().expect("non-empty spectrum");
    let kernel: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&k| eig.eigenvalues[k].abs() <= opts.zero_tol)
        .collect();
    let kernel_dim = kernel.len();
    let gap = eigenvalues
        .iter()
        .copied()
        .find(|&e| e > min_eig + opts.zero_tol)
        .map_or(0.0, |e| e - min_eig);

    let psi = circuit_state(c).map_err(|_| HamiltonianError::TooManyWires(n))?;
    let kernel_overlap: f64 = kernel
        .iter()
        .map(|&k| eig.eigenvectors.column(k).dotc(&psi).norm_sqr())
        .sum();

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut fidelity_checks = Vec::with_capacity(opts.test_states);
    let mut attempts = 0;
    while gap > 0.0 && fidelity_checks.len() < opts.test_states && attempts < 1000 * opts.test_states.max(1) {
        attempts += 1;
        let phi = random_state_near(&psi, &mut rng);
        let energy = expectation(&dense, &phi);
        if energy >= gap {
            continue;
        }
        let fidelity = phi.dotc(&psi).norm_sqr();
        let lower = 1.0 - energy / gap;
        let upper = 1.0 - energy / max_eig;
        let ok = lower <= fidelity + opts.slack && fidelity <= upper + opts.slack;
        fidelity_checks.push(FidelityCheck {
            energy,
            fidelity,
            lower,
            upper,
            ok,
        });
    }
    let fidelity_bounds_ok = fidelity_checks.len() == opts.test_states && fidelity_checks.iter().all(|f| f.ok);
    let passed = min_eig.abs() <= opts.zero_tol
        && kernel_dim == 1
        && kernel_overlap >= 1.0 - opts.zero_tol
        && fidelity_bounds_ok;
    Ok(SpectralReport {
        n,
        min_eig,
        max_eig,
        kernel_dim,
        gap,
        kernel_overlap,
        fidelity_states: fidelity_checks.len(),
        fidelity_bounds_ok,
        passed,
        eigenvalues,
        fidelity_checks,
    })
}
