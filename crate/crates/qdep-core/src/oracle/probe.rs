//! Finite-difference dependence detection.
//!
//! A qubit *depends* on a 1-qubit gate when its |0> measurement probability
//! moves with the gate's parameters. The probe operationalizes that: draw a
//! seeded random parameter assignment, evaluate the circuit family at it
//! (`u3`/`ry` free, `x` held at its defining point, the probed gate always
//! at its drawn angles), then take a central difference of `p(|0>_k)` along
//! each of the probed gate's three angles. The verdict is existential over
//! samples, because a dependence can vanish on measure-zero parameter sets.
//!
//! All randomness comes from one ChaCha stream seeded by the config, drawn
//! up front in gate order, so results are byte-identical no matter how the
//! probe evaluations are scheduled.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::{simulate, CapacityError, Statevector};
use crate::analysis::{DependencePicture, Provenance};
use crate::circuit::{circuit_hash, Circuit, GateId, GateInstance, GateOp, GateParams, UnitaryKind};

/// Probe policy knobs. The defaults trade cost against false-negative risk:
/// probability gradients of the trigonometric closed forms are O(1), so
/// `tol = 1e-6` sits three orders of magnitude above the `eps = 1e-4`
/// truncation error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    /// Random parameter draws per probed gate.
    pub samples: usize,
    /// Central-difference step.
    pub eps: f64,
    /// Sensitivity threshold on |dp/dparam|.
    pub tol: f64,
    /// RNG seed for the parameter draws.
    pub seed: u64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { samples: 8, eps: 1e-4, tol: 1e-6, seed: 42 }
    }
}

impl ProbeConfig {
    fn validate(&self) {
        assert!(self.samples >= 1, "probe needs at least one sample");
        assert!(self.eps > 0.0 && self.eps.is_finite(), "eps must be positive");
        assert!(self.tol > 0.0 && self.tol.is_finite(), "tol must be positive");
    }
}

/// Angles for every 1-qubit gate of one circuit: one random draw.
///
/// Serializes as `{"g<j>": [theta, phi, lambda], ...}` so a specific draw
/// can be reproduced.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamAssignment {
    params: BTreeMap<GateId, [f64; 3]>,
}

impl ParamAssignment {
    /// Draw uniform angles in `[0, 2pi)` for every 1-qubit gate, in gate
    /// order.
    pub fn random<R: Rng>(c: &Circuit, rng: &mut R) -> Self {
        use std::f64::consts::TAU;
        let params = c
            .gates()
            .iter()
            .filter(|g| g.op.is_unitary())
            .map(|g| {
                (
                    g.id,
                    [
                        rng.random_range(0.0..TAU),
                        rng.random_range(0.0..TAU),
                        rng.random_range(0.0..TAU),
                    ],
                )
            })
            .collect();
        ParamAssignment { params }
    }

    pub fn get(&self, gate: GateId) -> Option<[f64; 3]> {
        self.params.get(&gate).copied()
    }

    pub fn set(&mut self, gate: GateId, params: [f64; 3]) {
        self.params.insert(gate, params);
    }

    /// Reparameterize a circuit: every 1-qubit gate becomes the `u3` point
    /// given by this assignment; CNOTs, ids, and labels are unchanged.
    pub fn apply(&self, c: &Circuit) -> Circuit {
        self.reparameterize(c, |_| true)
    }

    /// Reparameterize under the circuit's family semantics: `u3`/`ry`
    /// gates take their drawn angles (they are the free parameters), `x`
    /// gates keep their defining point (a permutation exposes no
    /// coherence, and the static rules count on that). A gate named in
    /// `vary` always takes its drawn angles, so a fixed gate can still be
    /// probed around a generic base point.
    pub fn apply_family(&self, c: &Circuit, vary: Option<GateId>) -> Circuit {
        self.reparameterize(c, |g| {
            !matches!(g.op, GateOp::Unitary { kind: UnitaryKind::X, .. }) || vary == Some(g.id)
        })
    }

    fn reparameterize(&self, c: &Circuit, use_drawn: impl Fn(&GateInstance) -> bool) -> Circuit {
        let gates = c
            .gates()
            .iter()
            .map(|g| match g.op {
                GateOp::Unitary { qubit, .. } => {
                    let params = if use_drawn(g) {
                        let drawn = self.params.get(&g.id).copied().unwrap_or_else(|| {
                            panic!("assignment is missing parameters for {}", g.id)
                        });
                        GateParams::from_array(drawn)
                    } else {
                        GateParams::pauli_x()
                    };
                    GateInstance {
                        id: g.id,
                        op: GateOp::Unitary { kind: UnitaryKind::U3, qubit, params },
                        label: g.label.clone(),
                    }
                }
                GateOp::Cnot { .. } => g.clone(),
            })
            .collect();
        Circuit::new(c.qubit_count(), gates)
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (gate, params) in &self.params {
            map.insert(gate.to_string(), json!(params.to_vec()));
        }
        Value::Object(map)
    }

    pub fn from_json(value: &Value) -> Result<Self, String> {
        let obj = value.as_object().ok_or("expected a JSON object")?;
        let mut params = BTreeMap::new();
        for (key, entry) in obj {
            let gate: GateId = key.parse()?;
            let angles = entry
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| format!("{key}: expected [theta, phi, lambda]"))?;
            let mut out = [0.0f64; 3];
            for (slot, v) in out.iter_mut().zip(angles) {
                *slot = v.as_f64().ok_or_else(|| format!("{key}: non-numeric angle"))?;
            }
            params.insert(gate, out);
        }
        Ok(ParamAssignment { params })
    }
}

/// The seeded parameter draws a config produces for a circuit. Sample `i`
/// is the same for every probed gate.
pub fn sample_assignments(c: &Circuit, cfg: &ProbeConfig) -> Vec<ParamAssignment> {
    cfg.validate();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.samples)
        .map(|_| ParamAssignment::random(c, &mut rng))
        .collect()
}

/// Verdict for one (qubit, gate) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeOutcome {
    pub dependent: bool,
    pub max_abs_gradient: f64,
}

/// Probe result row, one per (qubit, 1-qubit gate) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbePair {
    pub qubit: usize,
    pub gate: GateId,
    pub label: Option<String>,
    pub max_abs_gradient: f64,
    pub dependent: bool,
}

/// Max central-difference gradients for every (qubit, gate) pair, plus the
/// config that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub config: ProbeConfig,
    pub circuit_hash: String,
    pub n: usize,
    /// Sorted by (qubit, gate id).
    pub pairs: Vec<ProbePair>,
}

impl ProbeReport {
    pub fn outcome(&self, qubit: usize, gate: GateId) -> Option<ProbeOutcome> {
        self.pairs
            .iter()
            .find(|p| p.qubit == qubit && p.gate == gate)
            .map(|p| ProbeOutcome {
                dependent: p.dependent,
                max_abs_gradient: p.max_abs_gradient,
            })
    }

    pub fn to_json(&self) -> Value {
        let mut root = Map::new();
        root.insert("bit_order".into(), json!("qubit0=lsb"));
        root.insert("config".into(), serde_json::to_value(self.config).unwrap());
        root.insert("circuit_hash".into(), json!(self.circuit_hash));
        root.insert("n".into(), json!(self.n));
        let pairs: Vec<Value> = self
            .pairs
            .iter()
            .map(|p| {
                json!({
                    "qubit": format!("q{}", p.qubit),
                    "gate": p.gate.to_string(),
                    "label": p.label,
                    "max_abs_gradient": p.max_abs_gradient,
                    "dependent": p.dependent,
                })
            })
            .collect();
        root.insert("pairs".into(), Value::Array(pairs));
        Value::Object(root)
    }
}

/// Per-qubit gradient magnitudes of `p(|0>_k)` along one parameter of one
/// gate at one sampled point.
fn central_difference(
    c: &Circuit,
    assignment: &ParamAssignment,
    gate: GateId,
    param: usize,
    eps: f64,
) -> Result<Vec<f64>, CapacityError> {
    let base = assignment.get(gate).expect("gate missing from assignment");

    let mut shifted = base;
    shifted[param] = base[param] + eps;
    let mut plus = assignment.clone();
    plus.set(gate, shifted);
    let p_plus = simulate(&plus.apply_family(c, Some(gate)))?.all_marginal_prob0();

    shifted[param] = base[param] - eps;
    let mut minus = assignment.clone();
    minus.set(gate, shifted);
    let p_minus = simulate(&minus.apply_family(c, Some(gate)))?.all_marginal_prob0();

    Ok(p_plus
        .iter()
        .zip(&p_minus)
        .map(|(hi, lo)| ((hi - lo) / (2.0 * eps)).abs())
        .collect())
}

/// Probe one gate against every qubit: max gradient per qubit over all
/// samples and parameters.
fn probe_gate(
    c: &Circuit,
    gate: GateId,
    assignments: &[ParamAssignment],
    eps: f64,
) -> Result<Vec<f64>, CapacityError> {
    let mut max_grads = vec![0.0f64; c.qubit_count()];
    for assignment in assignments {
        for param in 0..3 {
            let grads = central_difference(c, assignment, gate, param, eps)?;
            for (slot, g) in max_grads.iter_mut().zip(grads) {
                *slot = slot.max(g);
            }
        }
    }
    Ok(max_grads)
}

/// Probe a single (gate, qubit) pair.
///
/// Panics if `gate` is not a 1-qubit gate of the circuit.
pub fn sensitivity_probe(
    c: &Circuit,
    gate: GateId,
    qubit: usize,
    cfg: &ProbeConfig,
) -> Result<ProbeOutcome, CapacityError> {
    cfg.validate();
    assert!(qubit < c.qubit_count(), "qubit {qubit} out of range");
    let instance = c.gate(gate).unwrap_or_else(|| panic!("no gate {gate}"));
    assert!(instance.op.is_unitary(), "sensitivity_probe called on CNOT {gate}");

    let assignments = sample_assignments(c, cfg);
    let max_grads = probe_gate(c, gate, &assignments, cfg.eps)?;
    let max_abs_gradient = max_grads[qubit];
    Ok(ProbeOutcome { dependent: max_abs_gradient > cfg.tol, max_abs_gradient })
}

/// Probe every (qubit, 1-qubit gate) pair of the circuit.
///
/// Evaluations run on the current rayon pool; the merge order is fixed, so
/// the report is identical for any pool size.
pub fn probe_circuit(c: &Circuit, cfg: &ProbeConfig) -> Result<ProbeReport, CapacityError> {
    cfg.validate();
    // Surface capacity problems before spawning work.
    let _ = Statevector::zero_state(c.qubit_count())?;

    let assignments = sample_assignments(c, cfg);
    let unitary_ids = c.unitary_ids();

    let mut tasks = Vec::with_capacity(unitary_ids.len() * cfg.samples * 3);
    for &gate in &unitary_ids {
        for sample in 0..cfg.samples {
            for param in 0..3 {
                tasks.push((gate, sample, param));
            }
        }
    }

    let grads: Vec<Vec<f64>> = tasks
        .par_iter()
        .map(|&(gate, sample, param)| {
            central_difference(c, &assignments[sample], gate, param, cfg.eps)
        })
        .collect::<Result<_, _>>()?;

    let mut max_grads: BTreeMap<GateId, Vec<f64>> = unitary_ids
        .iter()
        .map(|&g| (g, vec![0.0f64; c.qubit_count()]))
        .collect();
    for ((gate, _, _), task_grads) in tasks.iter().zip(grads) {
        let slots = max_grads.get_mut(gate).unwrap();
        for (slot, g) in slots.iter_mut().zip(task_grads) {
            *slot = slot.max(g);
        }
    }

    let mut pairs = Vec::with_capacity(c.qubit_count() * unitary_ids.len());
    #[allow(clippy::needless_range_loop)]
    for qubit in 0..c.qubit_count() {
        for &gate in &unitary_ids {
            let max_abs_gradient = max_grads[&gate][qubit];
            pairs.push(ProbePair {
                qubit,
                gate,
                label: c.gate(gate).unwrap().label.clone(),
                max_abs_gradient,
                dependent: max_abs_gradient > cfg.tol,
            });
        }
    }

    Ok(ProbeReport {
        config: *cfg,
        circuit_hash: circuit_hash(c),
        n: c.qubit_count(),
        pairs,
    })
}

/// The empirical dependence picture: qubit `k` depends on gate `g` when the
/// probe reports sensitivity.
pub fn empirical_picture(c: &Circuit, cfg: &ProbeConfig) -> Result<DependencePicture, CapacityError> {
    let report = probe_circuit(c, cfg)?;
    Ok(picture_from_report(c, &report))
}

/// Build the picture out of an existing probe report.
pub fn picture_from_report(c: &Circuit, report: &ProbeReport) -> DependencePicture {
    let mut by_qubit: BTreeMap<usize, BTreeSet<GateId>> =
        (0..c.qubit_count()).map(|q| (q, BTreeSet::new())).collect();
    for pair in &report.pairs {
        if pair.dependent {
            by_qubit.get_mut(&pair.qubit).unwrap().insert(pair.gate);
        }
    }
    let unitaries = c
        .gates()
        .iter()
        .filter(|g| g.op.is_unitary())
        .map(|g| (g.id, g.label.clone()));
    DependencePicture::new(
        c.qubit_count(),
        Provenance::Empirical,
        by_qubit,
        unitaries,
        report.circuit_hash.clone(),
    )
}
