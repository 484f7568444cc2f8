//! Stabilizer tableau used as an independent oracle for the rewrite engine.
//!
//! Only the images of the local `X` and `Z` generators under each gate are
//! tabulated here. Images of arbitrary letters follow from the group
//! homomorphism with `Y = i X Z`, so this path shares nothing with the
//! rewrite rule catalog beyond the Pauli algebra.

use std::fmt;

use thiserror::Error;

use crate::circuit::{CircuitError, CliffordCircuit, GateApp, GateKind};
use crate::pauli::{PauliLetter, PauliString, Phase};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableauError {
    #[error(transparent)]
    WireOutOfRange(#[from] CircuitError),
}

/// Rows are the images of `X_1..X_n` then `Z_1..Z_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    rows: Vec<PauliString>,
}

fn local(text: &str) -> PauliString {
    text.parse().expect("static generator image")
}

/// Images of `(X_w, Z_w)` for single-wire gates, and of
/// `(X_c, X_t, Z_c, Z_t)` for CX, written on the gate's own wires.
fn generator_images(kind: GateKind) -> Vec<PauliString> {
    let texts: &[&str] = match kind {
        GateKind::H => &["+Z", "+X"],
        GateKind::S => &["+Y", "+Z"],
        GateKind::X => &["+X", "-Z"],
        GateKind::Y => &["-X", "-Z"],
        GateKind::Z => &["-X", "+Z"],
        GateKind::CX => &["+XX", "+IX", "+ZI", "+ZZ"],
    };
    texts.iter().map(|t| local(t)).collect()
}

/// `letter = phase * X^x * Z^z`.
fn decompose(letter: PauliLetter) -> (Phase, bool, bool) {
    match letter {
        PauliLetter::I => (Phase::ONE, false, false),
        PauliLetter::X => (Phase::ONE, true, false),
        PauliLetter::Z => (Phase::ONE, false, true),
        // XZ = -iY, so Y = i XZ
        PauliLetter::Y => (Phase::I, true, true),
    }
}

fn conjugate_local(kind: GateKind, letters: &[PauliLetter]) -> PauliString {
    let k = letters.len();
    let images = generator_images(kind);
    let mut acc = PauliString::identity(k);
    // letters on different wires commute, so expand wire by wire
    for (w, &l) in letters.iter().enumerate() {
        let (phase, has_x, has_z) = decompose(l);
        acc.multiply_phase(phase);
        if has_x {
            acc = &acc * &images[w];
        }
        if has_z {
            acc = &acc * &images[k + w];
        }
    }
    acc
}

impl Tableau {
    pub fn new(n: usize) -> Self {
        let xs = (0..n).map(|w| PauliString::single(n, w, PauliLetter::X));
        let zs = (0..n).map(|w| PauliString::single(n, w, PauliLetter::Z));
        Tableau {
            n,
            rows: xs.chain(zs).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[PauliString] {
        &self.rows
    }

    pub fn x_image(&self, wire: usize) -> &PauliString {
        &self.rows[wire]
    }

    pub fn z_image(&self, wire: usize) -> &PauliString {
        &self.rows[self.n + wire]
    }

    /// Stabilizer generators of the evolved `|0^n>`.
    pub fn stabilizers(&self) -> &[PauliString] {
        &self.rows[self.n..]
    }

    /// Image of an arbitrary string, expanded through the `X` and `Z` rows.
    /// `None` on a length mismatch.
    pub fn image(&self, p: &PauliString) -> Option<PauliString> {
        if p.len() != self.n {
            return None;
        }
        let mut acc = PauliString::identity(self.n).with_phase(p.phase());
        for (w, &l) in p.letters().iter().enumerate() {
            let (phase, has_x, has_z) = decompose(l);
            acc.multiply_phase(phase);
            if has_x {
                acc = &acc * self.x_image(w);
            }
            if has_z {
                acc = &acc * self.z_image(w);
            }
        }
        Some(acc)
    }

    pub fn apply(&self, gate: &GateApp) -> Result<Tableau, TableauError> {
        gate.validate(self.n)?;
        let wires = gate.wires();
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let letters: Vec<PauliLetter> = wires.iter().map(|&w| row.letter(w)).collect();
                let img = conjugate_local(gate.kind(), &letters);
                let mut out = row.clone();
                for (&w, &l) in wires.iter().zip(img.letters()) {
                    out.set_letter(w, l);
                }
                out.multiply_phase(img.phase());
                out
            })
            .collect();
        Ok(Tableau { n: self.n, rows })
    }

    /// Whether rows `X_i`, `Z_j` anticommute exactly when `i == j` and all
    /// other pairs commute.
    pub fn commutation_preserved(&self) -> bool {
        let n = self.n;
        (0..2 * n).all(|a| {
            (0..2 * n).all(|b| {
                let anti = a != b && a % n == b % n;
                self.rows[a].commutes_with(&self.rows[b]).unwrap_or(false) != anti
            })
        })
    }
}

pub fn tableau_apply(t: &Tableau, gate: &GateApp) -> Result<Tableau, TableauError> {
    t.apply(gate)
}

/// Evolves the identity tableau through every gate of `c`.
pub fn run_circuit(c: &CliffordCircuit) -> Tableau {
    c.gates().iter().fold(Tableau::new(c.n_wires()), |t, g| {
        t.apply(g).expect("circuit gates are wire-valid")
    })
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}
