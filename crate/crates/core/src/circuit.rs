//! Clifford circuits over the generating set {H, S, CX, X, Y, Z}.
//!
//! Gate 0 acts first on states, so the circuit unitary is `U = U_t ... U_1`.
//!
//! File format, one statement per line, `#` starts a comment:
//!
//! ```text
//! qubits 2
//! H 0
//! CX 0 1
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("wire {wire} out of range for a {n_wires}-wire circuit")]
    WireOutOfRange { wire: usize, n_wires: usize },
    #[error("CX control and target are both wire {0}")]
    ControlEqualsTarget(usize),
    #[error("a circuit needs at least one wire")]
    NoWires,
}

/// Gate kinds. `S` is the phase gate `diag(1, i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    H,
    S,
    CX,
    X,
    Y,
    Z,
}

impl GateKind {
    pub const ALL: [GateKind; 6] = [
        GateKind::H,
        GateKind::S,
        GateKind::CX,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::CX => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::CX => "CX",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "H" => Ok(GateKind::H),
            "S" => Ok(GateKind::S),
            "CX" => Ok(GateKind::CX),
            "X" => Ok(GateKind::X),
            "Y" => Ok(GateKind::Y),
            "Z" => Ok(GateKind::Z),
            other => Err(format!("unknown gate `{other}`")),
        }
    }
}

/// One gate application. For `CX` the wires are `[control, target]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateApp {
    Single(GateKind, usize),
    Cx { control: usize, target: usize },
}

impl GateApp {
    pub fn h(w: usize) -> Self {
        GateApp::Single(GateKind::H, w)
    }
    pub fn s(w: usize) -> Self {
        GateApp::Single(GateKind::S, w)
    }
    pub fn x(w: usize) -> Self {
        GateApp::Single(GateKind::X, w)
    }
    pub fn y(w: usize) -> Self {
        GateApp::Single(GateKind::Y, w)
    }
    pub fn z(w: usize) -> Self {
        GateApp::Single(GateKind::Z, w)
    }
    pub fn cx(control: usize, target: usize) -> Self {
        GateApp::Cx { control, target }
    }

    pub fn kind(&self) -> GateKind {
        match *self {
            GateApp::Single(k, _) => k,
            GateApp::Cx { .. } => GateKind::CX,
        }
    }

    pub fn wires(&self) -> Vec<usize> {
        match *self {
            GateApp::Single(_, w) => vec![w],
            GateApp::Cx { control, target } => vec![control, target],
        }
    }

    pub fn touches(&self, wire: usize) -> bool {
        match *self {
            GateApp::Single(_, w) => w == wire,
            GateApp::Cx { control, target } => control == wire || target == wire,
        }
    }

    pub fn shares_wire_with(&self, other: &GateApp) -> bool {
        other.wires().into_iter().any(|w| self.touches(w))
    }

    pub fn validate(&self, n_wires: usize) -> Result<(), CircuitError> {
        for w in self.wires() {
            if w >= n_wires {
                return Err(CircuitError::WireOutOfRange { wire: w, n_wires });
            }
        }
        if let GateApp::Cx { control, target } = *self {
            if control == target {
                return Err(CircuitError::ControlEqualsTarget(control));
            }
        }
        Ok(())
    }
}

impl fmt::Display for GateApp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GateApp::Single(k, w) => write!(f, "{k} {w}"),
            GateApp::Cx { control, target } => write!(f, "CX {control} {target}"),
        }
    }
}

/// An ordered gate list on a fixed number of wires.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CliffordCircuit {
    n_wires: usize,
    gates: Vec<GateApp>,
}

impl CliffordCircuit {
    pub fn new(n_wires: usize) -> Result<Self, CircuitError> {
        if n_wires == 0 {
            return Err(CircuitError::NoWires);
        }
        Ok(CliffordCircuit {
            n_wires,
            gates: Vec::new(),
        })
    }

    pub fn from_gates(n_wires: usize, gates: Vec<GateApp>) -> Result<Self, CircuitError> {
        let mut c = CliffordCircuit::new(n_wires)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: GateApp) -> Result<(), CircuitError> {
        gate.validate(self.n_wires)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn n_wires(&self) -> usize {
        self.n_wires
    }

    pub fn gates(&self) -> &[GateApp] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// `(l, g)`: single-wire gate count and CX count.
    pub fn gate_counts(&self) -> (usize, usize) {
        let g = self.gates.iter().filter(|gate| gate.kind() == GateKind::CX).count();
        (self.gates.len() - g, g)
    }

    /// The inverse circuit. `S` has no self-inverse so it becomes `S` followed by `Z`.
    pub fn adjoint(&self) -> CliffordCircuit {
        let mut gates = Vec::with_capacity(self.gates.len());
        for gate in self.gates.iter().rev() {
            match *gate {
                GateApp::Single(GateKind::S, w) => {
                    gates.push(GateApp::s(w));
                    gates.push(GateApp::z(w));
                }
                other => gates.push(other),
            }
        }
        CliffordCircuit {
            n_wires: self.n_wires,
            gates,
        }
    }

    /// Circuit text in the file format accepted by [`parse_circuit`].
    pub fn to_text(&self) -> String {
        let mut out = format!("qubits {}\n", self.n_wires);
        for g in &self.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    /// Bell-pair preparation: `H 0; CX 0 1`.
    pub fn bell() -> Self {
        CliffordCircuit::from_gates(2, vec![GateApp::h(0), GateApp::cx(0, 1)]).unwrap()
    }

    /// GHZ preparation on `n` wires: `H 0` then a CX ladder `j -> j+1`.
    pub fn ghz(n: usize) -> Result<Self, CircuitError> {
        let mut c = CliffordCircuit::new(n)?;
        c.push(GateApp::h(0))?;
        for j in 0..n.saturating_sub(1) {
            c.push(GateApp::cx(j, j + 1))?;
        }
        Ok(c)
    }
}

impl fmt::Display for CliffordCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for CliffordCircuit {
    type Err = CircuitError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_circuit(s)
    }
}

fn parse_wire(tok: &str, line: usize) -> Result<usize, CircuitError> {
    tok.parse().map_err(|_| CircuitError::Parse {
        line,
        reason: format!("`{tok}` is not a wire index"),
    })
}

/// Parses the circuit text format. Line numbers in errors are 1-based.
pub fn parse_circuit(text: &str) -> Result<CliffordCircuit, CircuitError> {
    let mut circuit: Option<CliffordCircuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        let Some(c) = circuit.as_mut() else {
            if toks[0] != "qubits" || toks.len() != 2 {
                return Err(CircuitError::Parse {
                    line,
                    reason: "expected `qubits <n>` header".into(),
                });
            }
            let n = toks[1].parse().map_err(|_| CircuitError::Parse {
                line,
                reason: format!("`{}` is not a qubit count", toks[1]),
            })?;
            circuit = Some(CliffordCircuit::new(n)?);
            continue;
        };
        let kind: GateKind = toks[0].parse().map_err(|reason| CircuitError::Parse { line, reason })?;
        if toks.len() != kind.arity() + 1 {
            return Err(CircuitError::Parse {
                line,
                reason: format!("{kind} takes {} wire(s)", kind.arity()),
            });
        }
        let gate = match kind {
            GateKind::CX => GateApp::cx(parse_wire(toks[1], line)?, parse_wire(toks[2], line)?),
            k => GateApp::Single(k, parse_wire(toks[1], line)?),
        };
        c.push(gate)?;
    }
    circuit.ok_or(CircuitError::Parse {
        line: text.lines().count().max(1),
        reason: "missing `qubits <n>` header".into(),
    })
}
