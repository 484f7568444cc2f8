//! Heisenberg-picture rewriting of Pauli strings through Clifford circuits.
//!
//! The rewrite engine in [`rewrite`] is checked against two independent
//! oracles: dense matrices in [`flatten`] and a stabilizer tableau in
//! [`tableau`]. [`hamiltonian`] uses the engine to build telescoping parent
//! Hamiltonians, and [`harness`] runs randomized confluence campaigns.

pub mod circuit;
pub mod flatten;
pub mod hamiltonian;
pub mod harness;
pub mod pauli;
pub mod rewrite;
pub mod tableau;

pub use circuit::{parse_circuit, CircuitError, CliffordCircuit, GateApp, GateKind};
pub use hamiltonian::{
    conjugate_sum, ghz_hamiltonian, initial_projector, parent_hamiltonian, spectral_check, PauliSum, SpectralOptions,
    SpectralReport,
};
pub use harness::{random_circuit, run_campaign, CampaignError, TrialReport, TrialSpec};
pub use pauli::{parse_pauli, PauliError, PauliLetter, PauliString, Phase};
pub use rewrite::{
    apply_rule, normal_form, propagate_generators, rule_catalog, stabilizer_group_of_output, RewriteError, RewriteStep,
    RewriteTrace, RuleId, SandwichTerm, Strategy,
};
pub use tableau::{run_circuit, Tableau};
