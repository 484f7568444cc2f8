//! Heisenberg rewrite system on sandwich terms `U P U^dagger`.
//!
//! A term keeps the full circuit plus the set of gates already conjugated
//! into the Pauli frame. A gate is a redex when every earlier gate sharing
//! one of its wires has been absorbed; absorbing it rewrites the frame
//! letters on the gate's wires by one catalog rule. Terms with every gate
//! absorbed are bare Pauli strings and admit no further rewrites.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::circuit::{CliffordCircuit, GateApp, GateKind};
use crate::pauli::{PauliLetter, PauliString, Phase};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("frame has {frame} wires but the circuit has {circuit}")]
    LengthMismatch { frame: usize, circuit: usize },
    #[error("gate {gate_index} is not a redex: {reason}")]
    NotApplicable { gate_index: usize, reason: &'static str },
    #[error("term is already terminal")]
    AlreadyTerminal,
    #[error("replay diverged at step {step}")]
    ReplayMismatch { step: usize },
}

/// Names of the conjugation templates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    /// H: Z -> X
    H1,
    /// H: X -> Z
    H2,
    /// H: Y -> -Y
    HY,
    /// S: X -> Y
    PX,
    /// S: Z -> Z
    PZ,
    /// S: Y -> -X
    PY,
    /// CX templates on X/Z letter pairs, numbered 1..=8.
    R(u8),
    /// CX templates involving Y, numbered 1..=7.
    A(u8),
    /// Conjugation by a Pauli gate on a non-identity letter.
    PauliGate(GateKind),
    /// Gate whose wires carry only identity letters.
    SkipI,
}

impl RuleId {
    /// Whether the step counts toward the rewrite budget.
    pub fn is_counted(self) -> bool {
        self != RuleId::SkipI
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleId::H1 => f.write_str("H1"),
            RuleId::H2 => f.write_str("H2"),
            RuleId::HY => f.write_str("H-Y"),
            RuleId::PX => f.write_str("P-X"),
            RuleId::PZ => f.write_str("P-Z"),
            RuleId::PY => f.write_str("P-Y"),
            RuleId::R(k) => write!(f, "R{k}"),
            RuleId::A(k) => write!(f, "A{k}"),
            RuleId::PauliGate(g) => write!(f, "{g}-GATE"),
            RuleId::SkipI => f.write_str("SKIP-I"),
        }
    }
}

impl FromStr for RuleId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fixed = match s {
            "H1" => Some(RuleId::H1),
            "H2" => Some(RuleId::H2),
            "H-Y" => Some(RuleId::HY),
            "P-X" => Some(RuleId::PX),
            "P-Z" => Some(RuleId::PZ),
            "P-Y" => Some(RuleId::PY),
            "X-GATE" => Some(RuleId::PauliGate(GateKind::X)),
            "Y-GATE" => Some(RuleId::PauliGate(GateKind::Y)),
            "Z-GATE" => Some(RuleId::PauliGate(GateKind::Z)),
            "SKIP-I" => Some(RuleId::SkipI),
            _ => None,
        };
        if let Some(id) = fixed {
            return Ok(id);
        }
        let numbered = |prefix: &str, max: u8| {
            s.strip_prefix(prefix)
                .and_then(|k| k.parse::<u8>().ok())
                .filter(|k| (1..=max).contains(k))
        };
        if let Some(k) = numbered("R", 8) {
            return Ok(RuleId::R(k));
        }
        if let Some(k) = numbered("A", 7) {
            return Ok(RuleId::A(k));
        }
        Err(format!("unknown rule `{s}`"))
    }
}

impl Serialize for RuleId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RuleId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One catalog entry: `gate` maps local letters `before` to `phase * after`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pub id: RuleId,
    pub gate: GateKind,
    pub before: Vec<PauliLetter>,
    pub after: Vec<PauliLetter>,
    pub phase: Phase,
}

fn rule(id: RuleId, gate: GateKind, before: &[PauliLetter], after: &[PauliLetter], phase: Phase) -> RewriteRule {
    RewriteRule {
        id,
        gate,
        before: before.to_vec(),
        after: after.to_vec(),
        phase,
    }
}

/// The unique rule matching `gate` with the frame letters on its wires
/// (`[control, target]` for CX).
pub fn lookup_rule(gate: GateKind, letters: &[PauliLetter]) -> RewriteRule {
    use PauliLetter::{I, X, Y, Z};
    const P: Phase = Phase::ONE;
    const M: Phase = Phase::MINUS_ONE;
    assert_eq!(letters.len(), gate.arity(), "letter count must match gate arity");
    if letters.iter().all(|l| l.is_identity()) {
        return rule(RuleId::SkipI, gate, letters, letters, P);
    }
    match gate {
        GateKind::H => match letters[0] {
            Z => rule(RuleId::H1, gate, &[Z], &[X], P),
            X => rule(RuleId::H2, gate, &[X], &[Z], P),
            Y => rule(RuleId::HY, gate, &[Y], &[Y], M),
            I => unreachable!(),
        },
        GateKind::S => match letters[0] {
            X => rule(RuleId::PX, gate, &[X], &[Y], P),
            Z => rule(RuleId::PZ, gate, &[Z], &[Z], P),
            Y => rule(RuleId::PY, gate, &[Y], &[X], M),
            I => unreachable!(),
        },
        GateKind::X | GateKind::Y | GateKind::Z => {
            let l = letters[0];
            let own = match gate {
                GateKind::X => X,
                GateKind::Y => Y,
                _ => Z,
            };
            let phase = if l == own { P } else { M };
            rule(RuleId::PauliGate(gate), gate, &[l], &[l], phase)
        }
        GateKind::CX => {
            let (id, after, phase) = match (letters[0], letters[1]) {
                (X, I) => (RuleId::R(1), [X, X], P),
                (I, X) => (RuleId::R(2), [I, X], P),
                (X, X) => (RuleId::R(3), [X, I], P),
                (Z, I) => (RuleId::R(4), [Z, I], P),
                (I, Z) => (RuleId::R(5), [Z, Z], P),
                (Z, Z) => (RuleId::R(6), [I, Z], P),
                (Z, X) => (RuleId::R(7), [Z, X], P),
                (X, Z) => (RuleId::R(8), [Y, Y], M),
                (Y, I) => (RuleId::A(1), [Y, X], P),
                (I, Y) => (RuleId::A(2), [Z, Y], P),
                (Y, Y) => (RuleId::A(3), [X, Z], M),
                (X, Y) => (RuleId::A(4), [Y, Z], P),
                (Y, X) => (RuleId::A(5), [Y, I], P),
                (Y, Z) => (RuleId::A(6), [X, Y], P),
                (Z, Y) => (RuleId::A(7), [I, Y], P),
                (I, I) => unreachable!(),
            };
            rule(id, gate, letters, &after, phase)
        }
    }
}

/// Every rule, one per (gate kind, local letter tuple).
pub fn rule_catalog() -> Vec<RewriteRule> {
    let mut out = Vec::new();
    for gate in GateKind::ALL {
        if gate.arity() == 1 {
            for l in PauliLetter::ALL {
                out.push(lookup_rule(gate, &[l]));
            }
        } else {
            for a in PauliLetter::ALL {
                for b in PauliLetter::ALL {
                    out.push(lookup_rule(gate, &[a, b]));
                }
            }
        }
    }
    out
}

mod letters_text {
    use super::PauliLetter;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(letters: &[PauliLetter], s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&letters.iter().map(|l| l.as_char()).collect::<String>())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<PauliLetter>, D::Error> {
        let text = String::deserialize(d)?;
        text.chars()
            .map(|c| PauliLetter::from_char(c).ok_or_else(|| serde::de::Error::custom(format!("bad letter `{c}`"))))
            .collect()
    }
}

/// One applied rule. Serializes to `{rule, gate, before, after, phase}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteStep {
    #[serde(rename = "rule")]
    pub rule_id: RuleId,
    #[serde(rename = "gate")]
    pub gate_index: usize,
    #[serde(rename = "before", with = "letters_text")]
    pub letters_before: Vec<PauliLetter>,
    #[serde(rename = "after", with = "letters_text")]
    pub letters_after: Vec<PauliLetter>,
    #[serde(rename = "phase")]
    pub phase_delta: Phase,
}

/// The diagram `U P U^dagger` with some gates already conjugated into the frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SandwichTerm {
    circuit: Arc<CliffordCircuit>,
    absorbed: Vec<bool>,
    frame: PauliString,
}

impl SandwichTerm {
    pub fn new(circuit: Arc<CliffordCircuit>, frame: PauliString) -> Result<Self, RewriteError> {
        if frame.len() != circuit.n_wires() {
            return Err(RewriteError::LengthMismatch {
                frame: frame.len(),
                circuit: circuit.n_wires(),
            });
        }
        Ok(SandwichTerm {
            absorbed: vec![false; circuit.len()],
            circuit,
            frame,
        })
    }

    pub fn circuit(&self) -> &CliffordCircuit {
        &self.circuit
    }

    pub fn frame(&self) -> &PauliString {
        &self.frame
    }

    /// Number of gates already absorbed.
    pub fn frame_pos(&self) -> usize {
        self.absorbed.iter().filter(|&&a| a).count()
    }

    pub fn is_absorbed(&self, gate_index: usize) -> bool {
        self.absorbed[gate_index]
    }

    pub fn is_terminal(&self) -> bool {
        self.absorbed.iter().all(|&a| a)
    }

    fn is_redex(&self, gate_index: usize) -> bool {
        let gate = &self.circuit.gates()[gate_index];
        !self.absorbed[gate_index]
            && self.circuit.gates()[..gate_index]
                .iter()
                .zip(&self.absorbed)
                .all(|(earlier, &done)| done || !earlier.shares_wire_with(gate))
    }

    /// Gates that can be absorbed next, in circuit order.
    pub fn redexes(&self) -> Vec<usize> {
        (0..self.absorbed.len()).filter(|&i| self.is_redex(i)).collect()
    }

    /// The not-yet-absorbed gates in circuit order; the term denotes
    /// `R frame R^dagger` for `R` this circuit.
    pub fn remaining_circuit(&self) -> CliffordCircuit {
        let gates = self
            .circuit
            .gates()
            .iter()
            .zip(&self.absorbed)
            .filter(|(_, &done)| !done)
            .map(|(g, _)| *g)
            .collect();
        CliffordCircuit::from_gates(self.circuit.n_wires(), gates).expect("subcircuit of a valid circuit")
    }

    /// Absorbs `gate_index` into the frame.
    pub fn apply(&self, gate_index: usize) -> Result<(SandwichTerm, RewriteStep), RewriteError> {
        if self.is_terminal() {
            return Err(RewriteError::AlreadyTerminal);
        }
        if gate_index >= self.absorbed.len() {
            return Err(RewriteError::NotApplicable {
                gate_index,
                reason: "no such gate",
            });
        }
        if self.absorbed[gate_index] {
            return Err(RewriteError::NotApplicable {
                gate_index,
                reason: "gate already absorbed",
            });
        }
        if !self.is_redex(gate_index) {
            return Err(RewriteError::NotApplicable {
                gate_index,
                reason: "an earlier gate on a shared wire is still pending",
            });
        }
        let gate: GateApp = self.circuit.gates()[gate_index];
        let wires = gate.wires();
        let before: Vec<PauliLetter> = wires.iter().map(|&w| self.frame.letter(w)).collect();
        let r = lookup_rule(gate.kind(), &before);
        let mut frame = self.frame.clone();
        for (&w, &l) in wires.iter().zip(&r.after) {
            frame.set_letter(w, l);
        }
        frame.multiply_phase(r.phase);
        let mut absorbed = self.absorbed.clone();
        absorbed[gate_index] = true;
        let step = RewriteStep {
            rule_id: r.id,
            gate_index,
            letters_before: before,
            letters_after: r.after,
            phase_delta: r.phase,
        };
        Ok((
            SandwichTerm {
                circuit: Arc::clone(&self.circuit),
                absorbed,
                frame,
            },
            step,
        ))
    }
}

/// Free-function form of [`SandwichTerm::apply`].
pub fn apply_rule(term: &SandwichTerm, gate_index: usize) -> Result<(SandwichTerm, RewriteStep), RewriteError> {
    term.apply(gate_index)
}

/// Rewrite order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Absorb gates strictly in circuit order.
    InOrder,
    /// Pick uniformly among the current redexes; when propagating a batch
    /// of generators, also shuffle the order the batch is processed in.
    RandomOrderSeeded(u64),
}

/// A complete derivation from a sandwich term to its Pauli string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteTrace {
    pub initial: SandwichTerm,
    pub steps: Vec<RewriteStep>,
    pub final_string: PauliString,
    pub counted_rewrites: usize,
}

impl RewriteTrace {
    /// Re-applies every step from the initial term, checking each against
    /// the recorded letters, and returns the reached Pauli string.
    pub fn replay(&self) -> Result<PauliString, RewriteError> {
        replay_steps(&self.initial, &self.steps)
    }

    /// JSON lines, one step per line.
    pub fn to_json_lines(&self) -> String {
        steps_to_json_lines(&self.steps)
    }
}

pub fn steps_to_json_lines(steps: &[RewriteStep]) -> String {
    steps
        .iter()
        .map(|s| serde_json::to_string(s).expect("step serializes") + "\n")
        .collect()
}

pub fn steps_from_json_lines(text: &str) -> Result<Vec<RewriteStep>, serde_json::Error> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}

pub fn replay_steps(initial: &SandwichTerm, steps: &[RewriteStep]) -> Result<PauliString, RewriteError> {
    let mut term = initial.clone();
    for (k, recorded) in steps.iter().enumerate() {
        let (next, step) = term.apply(recorded.gate_index)?;
        if &step != recorded {
            return Err(RewriteError::ReplayMismatch { step: k });
        }
        term = next;
    }
    if !term.is_terminal() {
        return Err(RewriteError::ReplayMismatch { step: steps.len() });
    }
    Ok(term.frame)
}

fn rewrite_to_end(mut term: SandwichTerm, strategy: Strategy) -> RewriteTrace {
    let initial = term.clone();
    let mut rng = match strategy {
        Strategy::InOrder => None,
        Strategy::RandomOrderSeeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
    };
    let mut steps = Vec::with_capacity(term.absorbed.len());
    while !term.is_terminal() {
        let next = match rng.as_mut() {
            None => term.frame_pos(),
            Some(rng) => {
                let redexes = term.redexes();
                redexes[rng.random_range(0..redexes.len())]
            }
        };
        let (t, step) = term.apply(next).expect("selected gate is a redex");
        term = t;
        steps.push(step);
    }
    let counted_rewrites = steps.iter().filter(|s| s.rule_id.is_counted()).count();
    RewriteTrace {
        initial,
        steps,
        final_string: term.frame,
        counted_rewrites,
    }
}

/// Rewrites `circuit * p * circuit^dagger` to its terminal Pauli string.
pub fn normal_form(
    circuit: &CliffordCircuit,
    p: &PauliString,
    strategy: Strategy,
) -> Result<RewriteTrace, RewriteError> {
    normal_form_shared(Arc::new(circuit.clone()), p, strategy)
}

pub fn normal_form_shared(
    circuit: Arc<CliffordCircuit>,
    p: &PauliString,
    strategy: Strategy,
) -> Result<RewriteTrace, RewriteError> {
    let term = SandwichTerm::new(circuit, p.clone())?;
    Ok(rewrite_to_end(term, strategy))
}

/// `X_1..X_n` followed by `Z_1..Z_n`.
pub fn pauli_generators(n: usize) -> Vec<PauliString> {
    let xs = (0..n).map(|w| PauliString::single(n, w, PauliLetter::X));
    let zs = (0..n).map(|w| PauliString::single(n, w, PauliLetter::Z));
    xs.chain(zs).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorImage {
    pub generator: PauliString,
    pub image: PauliString,
    pub counted_rewrites: usize,
}

/// Traces for all `2n` generators, returned in generator order regardless of
/// the order they were processed in.
pub fn propagate_generators_traced(circuit: &CliffordCircuit, strategy: Strategy) -> Vec<RewriteTrace> {
    let shared = Arc::new(circuit.clone());
    let gens = pauli_generators(circuit.n_wires());
    let mut order: Vec<usize> = (0..gens.len()).collect();
    let mut per_generator = vec![Strategy::InOrder; gens.len()];
    if let Strategy::RandomOrderSeeded(seed) = strategy {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        order.shuffle(&mut rng);
        for s in per_generator.iter_mut() {
            *s = Strategy::RandomOrderSeeded(rng.random());
        }
    }
    let mut traces: Vec<Option<RewriteTrace>> = vec![None; gens.len()];
    for k in order {
        let trace = normal_form_shared(Arc::clone(&shared), &gens[k], per_generator[k])
            .expect("generator length matches circuit");
        traces[k] = Some(trace);
    }
    traces
        .into_iter()
        .map(|t| t.expect("every generator propagated"))
        .collect()
}

pub fn propagate_generators_with(circuit: &CliffordCircuit, strategy: Strategy) -> Vec<GeneratorImage> {
    propagate_generators_traced(circuit, strategy)
        .into_iter()
        .map(|t| GeneratorImage {
            generator: t.initial.frame.clone(),
            image: t.final_string,
            counted_rewrites: t.counted_rewrites,
        })
        .collect()
}

/// Heisenberg images of `X_1..X_n, Z_1..Z_n`.
pub fn propagate_generators(circuit: &CliffordCircuit) -> Vec<GeneratorImage> {
    propagate_generators_with(circuit, Strategy::InOrder)
}

/// Images of `Z_1..Z_n`: generators of the stabilizer group of `U|0^n>`.
pub fn stabilizer_group_of_output(circuit: &CliffordCircuit) -> Vec<PauliString> {
    let shared = Arc::new(circuit.clone());
    let n = circuit.n_wires();
    (0..n)
        .map(|w| {
            let z = PauliString::single(n, w, PauliLetter::Z);
            normal_form_shared(Arc::clone(&shared), &z, Strategy::InOrder)
                .expect("generator length matches circuit")
                .final_string
        })
        .collect()
}

/// All products of subsets of `generators`. Intended for small, commuting sets.
pub fn generated_group(generators: &[PauliString]) -> BTreeSet<PauliString> {
    assert!(generators.len() <= 20, "group enumeration is exponential");
    let n = generators.first().map_or(0, |g| g.len());
    let mut group = BTreeSet::new();
    for mask in 0u32..(1 << generators.len()) {
        let mut acc = PauliString::identity(n);
        for (k, g) in generators.iter().enumerate() {
            if mask & (1 << k) != 0 {
                acc = &acc * g;
            }
        }
        group.insert(acc);
    }
    group
}
