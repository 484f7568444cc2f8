//! Randomized confluence and termination campaign.
//!
//! Each instance draws a circuit, propagates every Pauli generator under
//! several seeded rewrite orders, and checks that all orders agree with
//! each other and with the tableau oracle. Rewrite counts are compared
//! against the gate-count bounds; only the per-generator `l + g` bound is
//! enforced, the `(g/2 + l) n` total is reported.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{CliffordCircuit, GateApp, GateKind};
use crate::pauli::PauliString;
use crate::rewrite::{propagate_generators_traced, RewriteTrace, Strategy};
use crate::tableau::run_circuit;

/// Campaign parameters. `n_wires` and `gate_count` are upper bounds; each
/// instance draws its size uniformly in `1..=n_wires` and `0..=gate_count`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrialSpec {
    pub n_wires: usize,
    pub gate_count: usize,
    pub n_orders: usize,
    pub seed: u64,
    pub instance_count: usize,
}

impl TrialSpec {
    pub fn validate(&self) -> Result<(), CampaignError> {
        let fields = [
            ("n_wires", self.n_wires),
            ("gate_count", self.gate_count),
            ("n_orders", self.n_orders),
            ("instance_count", self.instance_count),
        ];
        for (name, value) in fields {
            if value == 0 {
                return Err(CampaignError::InvalidSpec(format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}

/// Draws `t` gates uniformly over the kinds valid on `n` wires, with
/// uniformly chosen wires.
pub fn random_circuit<R: Rng + ?Sized>(n: usize, t: usize, rng: &mut R) -> CliffordCircuit {
    assert!(n >= 1, "need at least one wire");
    let kinds: &[GateKind] = if n == 1 {
        &[GateKind::H, GateKind::S, GateKind::X, GateKind::Y, GateKind::Z]
    } else {
        &GateKind::ALL
    };
    let mut c = CliffordCircuit::new(n).expect("n >= 1");
    for _ in 0..t {
        let kind = kinds[rng.random_range(0..kinds.len())];
        let gate = match kind {
            GateKind::CX => {
                let control = rng.random_range(0..n);
                let mut target = rng.random_range(0..n - 1);
                if target >= control {
                    target += 1;
                }
                GateApp::cx(control, target)
            }
            k => GateApp::Single(k, rng.random_range(0..n)),
        };
        c.push(gate).expect("drawn wires are in range");
    }
    c
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceReport {
    pub index: usize,
    pub n_wires: usize,
    pub gate_count: usize,
    pub single_qubit_gates: usize,
    pub two_qubit_gates: usize,
    pub orders: usize,
    pub normal_forms_identical: bool,
    pub oracle_agrees: bool,
    /// Min/max counted rewrites of a single generator across all orders.
    pub counted_min: usize,
    pub counted_max: usize,
    /// Counted rewrites summed over the `n` Z generators.
    pub z_total: usize,
    pub bound_l_n: f64,
    pub bound_half_g_n: f64,
    pub bound_tight: f64,
    pub bound_loose: f64,
    pub tight_bound_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignSummary {
    pub pass: bool,
    pub instances: usize,
    pub confluence_violations: usize,
    pub oracle_mismatches: usize,
    pub loose_bound_violations: usize,
    pub tight_bound_holds: usize,
    pub tight_bound_fraction: f64,
    /// Instances whose Z-generator total exceeds `(g/2 + l) n`.
    pub tight_bound_violations: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub spec: TrialSpec,
    pub gate_distribution: String,
    pub instances: Vec<InstanceReport>,
    pub summary: CampaignSummary,
}

impl TrialReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, Error)]
pub enum CampaignError {
    #[error("invalid campaign spec: {0}")]
    InvalidSpec(String),
    #[error("instance {instance}: rewrite orders disagree on generator {generator}")]
    ConfluenceViolation {
        instance: usize,
        circuit: Box<CliffordCircuit>,
        generator: PauliString,
        first: Box<RewriteTrace>,
        second: Box<RewriteTrace>,
    },
    #[error("instance {instance}: generator {generator} maps to {rewrite} by rewriting but {tableau} by tableau")]
    OracleMismatch {
        instance: usize,
        circuit: Box<CliffordCircuit>,
        generator: PauliString,
        rewrite: PauliString,
        tableau: PauliString,
    },
    #[error("instance {instance}: trace for {generator} does not replay or has the wrong length")]
    TraceIntegrity {
        instance: usize,
        circuit: Box<CliffordCircuit>,
        generator: PauliString,
        trace: Box<RewriteTrace>,
    },
    #[error("instance {instance}: {generator} used {counted} counted rewrites, above l + g = {limit}")]
    BoundViolation {
        instance: usize,
        circuit: Box<CliffordCircuit>,
        generator: PauliString,
        counted: usize,
        limit: usize,
    },
}

impl CampaignError {
    fn circuit(&self) -> Option<&CliffordCircuit> {
        match self {
            CampaignError::InvalidSpec(_) => None,
            CampaignError::ConfluenceViolation { circuit, .. }
            | CampaignError::OracleMismatch { circuit, .. }
            | CampaignError::TraceIntegrity { circuit, .. }
            | CampaignError::BoundViolation { circuit, .. } => Some(circuit),
        }
    }

    /// Writes the failing circuit and any traces into `dir` so the failure
    /// can be replayed. Returns the written paths.
    pub fn write_artifacts(&self, dir: &Path) -> io::Result<Vec<PathBuf>> {
        let Some(circuit) = self.circuit() else {
            return Ok(Vec::new());
        };
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let mut write = |name: &str, body: String| -> io::Result<()> {
            let path = dir.join(name);
            fs::write(&path, body)?;
            written.push(path);
            Ok(())
        };
        write("circuit.qc", circuit.to_text())?;
        write("error.txt", format!("{self}\n"))?;
        match self {
            CampaignError::ConfluenceViolation { first, second, .. } => {
                write("trace_a.jsonl", first.to_json_lines())?;
                write("trace_b.jsonl", second.to_json_lines())?;
            }
            CampaignError::TraceIntegrity { trace, .. } => {
                write("trace.jsonl", trace.to_json_lines())?;
            }
            _ => {}
        }
        Ok(written)
    }
}

fn instance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn check_instance(index: usize, spec: &TrialSpec) -> Result<InstanceReport, CampaignError> {
    let mut rng = instance_rng(spec.seed, index);
    let n = rng.random_range(1..=spec.n_wires);
    let t = rng.random_range(0..=spec.gate_count);
    let circuit = random_circuit(n, t, &mut rng);
    let (l, g) = circuit.gate_counts();
    let order_seeds: Vec<u64> = (0..spec.n_orders).map(|_| rng.random()).collect();

    let baseline = propagate_generators_traced(&circuit, Strategy::InOrder);
    let tableau = run_circuit(&circuit);
    for (k, trace) in baseline.iter().enumerate() {
        if trace.final_string != tableau.rows()[k] {
            return Err(CampaignError::OracleMismatch {
                instance: index,
                circuit: Box::new(circuit.clone()),
                generator: trace.initial.frame().clone(),
                rewrite: trace.final_string.clone(),
                tableau: tableau.rows()[k].clone(),
            });
        }
    }

    let mut counted_min = usize::MAX;
    let mut counted_max = 0;
    let runs = std::iter::once(baseline.clone()).chain(
        order_seeds
            .iter()
            .map(|&s| propagate_generators_traced(&circuit, Strategy::RandomOrderSeeded(s))),
    );
    for traces in runs {
        for (k, trace) in traces.iter().enumerate() {
            let generator = trace.initial.frame().clone();
            if trace.final_string != baseline[k].final_string {
                return Err(CampaignError::ConfluenceViolation {
                    instance: index,
                    circuit: Box::new(circuit.clone()),
                    generator,
                    first: Box::new(baseline[k].clone()),
                    second: Box::new(trace.clone()),
                });
            }
            let replayed = trace.replay().ok();
            if trace.steps.len() != t || replayed.as_ref() != Some(&trace.final_string) {
                return Err(CampaignError::TraceIntegrity {
                    instance: index,
                    circuit: Box::new(circuit.clone()),
                    generator,
                    trace: Box::new(trace.clone()),
                });
            }
            if trace.counted_rewrites > l + g {
                return Err(CampaignError::BoundViolation {
                    instance: index,
                    circuit: Box::new(circuit.clone()),
                    generator,
                    counted: trace.counted_rewrites,
                    limit: l + g,
                });
            }
            counted_min = counted_min.min(trace.counted_rewrites);
            counted_max = counted_max.max(trace.counted_rewrites);
        }
    }

    let z_total: usize = baseline[n..].iter().map(|t| t.counted_rewrites).sum();
    let nf = n as f64;
    let bound_l_n = (l * n) as f64;
    let bound_half_g_n = 0.5 * g as f64 * nf;
    let bound_tight = bound_half_g_n + bound_l_n;
    Ok(InstanceReport {
        index,
        n_wires: n,
        gate_count: t,
        single_qubit_gates: l,
        two_qubit_gates: g,
        orders: spec.n_orders,
        normal_forms_identical: true,
        oracle_agrees: true,
        counted_min,
        counted_max,
        z_total,
        bound_l_n,
        bound_half_g_n,
        bound_tight,
        bound_loose: ((g + l) * n) as f64,
        tight_bound_holds: z_total as f64 <= bound_tight,
    })
}

/// Runs the whole campaign. Any confluence, oracle, replay or `l + g`
/// failure aborts with the offending instance.
pub fn run_campaign(spec: &TrialSpec) -> Result<TrialReport, CampaignError> {
    spec.validate()?;
    let instances = (0..spec.instance_count)
        .map(|i| check_instance(i, spec))
        .collect::<Result<Vec<_>, _>>()?;
    let tight_bound_violations: Vec<usize> = instances
        .iter()
        .filter(|r| !r.tight_bound_holds)
        .map(|r| r.index)
        .collect();
    let holds = instances.len() - tight_bound_violations.len();
    let summary = CampaignSummary {
        pass: true,
        instances: instances.len(),
        confluence_violations: 0,
        oracle_mismatches: 0,
        loose_bound_violations: 0,
        tight_bound_holds: holds,
        tight_bound_fraction: holds as f64 / instances.len() as f64,
        tight_bound_violations,
    };
    Ok(TrialReport {
        spec: *spec,
        gate_distribution: "uniform over {H, S, CX, X, Y, Z} (CX excluded on 1 wire); wires uniform; \
                            n uniform in 1..=n_wires, t uniform in 0..=gate_count"
            .to_string(),
        instances,
        summary,
    })
}
