//! Gate-level circuit IR.
//!
//! A [`Circuit`] is an ordered list of gate instances over `n` qubits. The
//! elementary gate set is 1-qubit unitaries plus CNOT. Every 1-qubit gate,
//! including the fixed ones (`X`), is stored as a point in the three-angle
//! `u3` family
//!
//! ```text
//! U(theta, phi, lambda) = | cos(theta/2)              -e^{i lambda} sin(theta/2)      |
//!                         | e^{i phi} sin(theta/2)     e^{i (phi+lambda)} cos(theta/2) |
//! ```
//!
//! so that any gate can be reparameterized and numerically perturbed.
//! Qubits are 0-based throughout.

mod fixture;
mod parse;

pub use fixture::{build_fixture, Fixture, UnknownFixture};
pub use parse::{parse_circuit, serialize_circuit, CircuitFormat, ParseError};

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use sha2::{Digest, Sha256};

/// Identifier of a gate instance within one circuit: its index in gate order.
///
/// Rendered as `g<idx>` in every serialized output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GateId(pub usize);

impl fmt::Display for GateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}", self.0)
    }
}

impl FromStr for GateId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let idx = s
            .strip_prefix('g')
            .and_then(|rest| rest.parse::<usize>().ok())
            .ok_or_else(|| format!("invalid gate id `{s}` (expected g<idx>)"))?;
        Ok(GateId(idx))
    }
}

/// The three angles of the canonical 1-qubit unitary family, in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateParams {
    pub theta: f64,
    pub phi: f64,
    pub lam: f64,
}

impl GateParams {
    pub fn new(theta: f64, phi: f64, lam: f64) -> Self {
        assert!(
            theta.is_finite() && phi.is_finite() && lam.is_finite(),
            "gate angles must be finite"
        );
        GateParams { theta, phi, lam }
    }

    /// The fixed point of the family that equals the Pauli X gate.
    pub fn pauli_x() -> Self {
        GateParams::new(std::f64::consts::PI, 0.0, std::f64::consts::PI)
    }

    /// The point of the family that equals `Ry(theta)`.
    pub fn ry(theta: f64) -> Self {
        GateParams::new(theta, 0.0, 0.0)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.theta, self.phi, self.lam]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        GateParams::new(a[0], a[1], a[2])
    }
}

/// Spelling of a 1-qubit gate in circuit sources. All three denote points in
/// the same parameter family; the kind is kept so sources round-trip.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitaryKind {
    U3,
    X,
    Ry,
}

impl UnitaryKind {
    pub fn mnemonic(self) -> &'static str {
        match self {
            UnitaryKind::U3 => "u3",
            UnitaryKind::X => "x",
            UnitaryKind::Ry => "ry",
        }
    }
}

/// One gate application.
#[derive(Debug, Clone, PartialEq)]
pub enum GateOp {
    Unitary {
        kind: UnitaryKind,
        qubit: usize,
        params: GateParams,
    },
    Cnot {
        control: usize,
        target: usize,
    },
}

impl GateOp {
    pub fn is_unitary(&self) -> bool {
        matches!(self, GateOp::Unitary { .. })
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            GateOp::Unitary { qubit, .. } => vec![qubit],
            GateOp::Cnot { control, target } => vec![control, target],
        }
    }
}

/// A gate instance: a [`GateOp`] with its position id and an optional label.
///
/// The id, not the matrix, is the gate's identity for dependence tracking:
/// two identical `u3` gates are distinct dependence sources.
#[derive(Debug, Clone, PartialEq)]
pub struct GateInstance {
    pub id: GateId,
    pub op: GateOp,
    pub label: Option<String>,
}

impl GateInstance {
    /// The qubit acted on, for 1-qubit gates.
    pub fn unitary_qubit(&self) -> Option<usize> {
        match self.op {
            GateOp::Unitary { qubit, .. } => Some(qubit),
            GateOp::Cnot { .. } => None,
        }
    }

    pub fn params(&self) -> Option<GateParams> {
        match self.op {
            GateOp::Unitary { params, .. } => Some(params),
            GateOp::Cnot { .. } => None,
        }
    }

    /// Label if present, `g<idx>` otherwise.
    pub fn display_name(&self) -> String {
        self.label.clone().unwrap_or_else(|| self.id.to_string())
    }
}

/// An ordered gate sequence over `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n: usize,
    gates: Vec<GateInstance>,
}

impl Circuit {
    /// Build a circuit from parts, checking the structural invariants:
    /// `n >= 1`, ids are `0..len` in order, qubit indices in range and
    /// distinct per CNOT, labels unique.
    pub fn new(n: usize, gates: Vec<GateInstance>) -> Self {
        assert!(n >= 1, "circuit must have at least one qubit");
        let mut seen_labels = std::collections::HashSet::new();
        for (idx, g) in gates.iter().enumerate() {
            assert_eq!(g.id.0, idx, "gate ids must be 0..len in order");
            match g.op {
                GateOp::Unitary { qubit, .. } => {
                    assert!(qubit < n, "qubit index {qubit} out of range");
                }
                GateOp::Cnot { control, target } => {
                    assert!(control < n && target < n, "qubit index out of range");
                    assert_ne!(control, target, "CNOT control and target must differ");
                }
            }
            if let Some(label) = &g.label {
                assert!(seen_labels.insert(label.clone()), "duplicate label `{label}`");
            }
        }
        Circuit { n, gates }
    }

    pub fn builder(n: usize) -> CircuitBuilder {
        CircuitBuilder::new(n)
    }

    pub fn qubit_count(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[GateInstance] {
        &self.gates
    }

    pub fn gate(&self, id: GateId) -> Option<&GateInstance> {
        self.gates.get(id.0)
    }

    /// Ids of all 1-qubit gate instances, in circuit order.
    pub fn unitary_ids(&self) -> Vec<GateId> {
        self.gates
            .iter()
            .filter(|g| g.op.is_unitary())
            .map(|g| g.id)
            .collect()
    }

    /// The prefix consisting of the first `len` gates.
    pub fn prefix(&self, len: usize) -> Circuit {
        assert!(len <= self.gates.len());
        Circuit {
            n: self.n,
            gates: self.gates[..len].to_vec(),
        }
    }
}

/// Incremental [`Circuit`] construction with auto-assigned ids.
///
/// Panics on invalid input; it is meant for fixture and test code where the
/// shape is known statically. Parsers validate before building.
#[derive(Debug)]
pub struct CircuitBuilder {
    n: usize,
    gates: Vec<GateInstance>,
}

impl CircuitBuilder {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "circuit must have at least one qubit");
        CircuitBuilder { n, gates: Vec::new() }
    }

    fn push(mut self, op: GateOp) -> Self {
        let id = GateId(self.gates.len());
        self.gates.push(GateInstance { id, op, label: None });
        self
    }

    pub fn u3(self, qubit: usize, theta: f64, phi: f64, lam: f64) -> Self {
        self.push(GateOp::Unitary {
            kind: UnitaryKind::U3,
            qubit,
            params: GateParams::new(theta, phi, lam),
        })
    }

    pub fn ry(self, qubit: usize, theta: f64) -> Self {
        self.push(GateOp::Unitary {
            kind: UnitaryKind::Ry,
            qubit,
            params: GateParams::ry(theta),
        })
    }

    pub fn x(self, qubit: usize) -> Self {
        self.push(GateOp::Unitary {
            kind: UnitaryKind::X,
            qubit,
            params: GateParams::pauli_x(),
        })
    }

    pub fn cx(self, control: usize, target: usize) -> Self {
        self.push(GateOp::Cnot { control, target })
    }

    /// Attach a label to the most recently added gate.
    pub fn label(mut self, name: &str) -> Self {
        let gate = self.gates.last_mut().expect("label() before any gate");
        gate.label = Some(name.to_string());
        self
    }

    pub fn build(self) -> Circuit {
        Circuit::new(self.n, self.gates)
    }
}

/// A dense 2x2 complex matrix, row major.
pub type Matrix2 = [[Complex64; 2]; 2];

/// The matrix of the canonical family at the given angles.
pub fn unitary_matrix(p: GateParams) -> Matrix2 {
    let c = (p.theta / 2.0).cos();
    let s = (p.theta / 2.0).sin();
    let e_phi = Complex64::from_polar(1.0, p.phi);
    let e_lam = Complex64::from_polar(1.0, p.lam);
    [
        [Complex64::new(c, 0.0), -e_lam * s],
        [e_phi * s, e_phi * e_lam * c],
    ]
}

/// The 2x2 matrix of a 1-qubit gate instance.
///
/// Panics when called on a CNOT; callers dispatch on the op first.
pub fn gate_matrix(g: &GateInstance) -> Matrix2 {
    match g.op {
        GateOp::Unitary { params, .. } => unitary_matrix(params),
        GateOp::Cnot { .. } => panic!("gate_matrix called on CNOT {}", g.id),
    }
}

/// Content hash of a circuit: SHA-256 of its native serialization, hex encoded.
///
/// Dependence pictures and reports embed it so artifacts from different
/// circuits cannot be cross-compared by accident.
pub fn circuit_hash(c: &Circuit) -> String {
    let text = serialize_circuit(c, CircuitFormat::Native);
    let digest = Sha256::digest(text.as_bytes());
    let mut out = String::with_capacity(64);
    for byte in digest {
        use fmt::Write;
        write!(out, "{byte:02x}").unwrap();
    }
    out
}

/// Seeded random circuit over `n` qubits: a mix of `u3`/`ry`/`x` and (for
/// `n >= 2`) CNOTs with random operands, angles uniform in `[0, 2pi)`.
///
/// Used by the property sweeps and benches.
pub fn random_circuit<R: Rng>(rng: &mut R, n: usize, gate_count: usize) -> Circuit {
    use std::f64::consts::TAU;
    let mut b = Circuit::builder(n);
    for _ in 0..gate_count {
        let roll: f64 = rng.random();
        if n >= 2 && roll < 0.35 {
            let control = rng.random_range(0..n);
            let mut target = rng.random_range(0..n - 1);
            if target >= control {
                target += 1;
            }
            b = b.cx(control, target);
        } else if roll < 0.80 {
            b = b.u3(
                rng.random_range(0..n),
                rng.random_range(0.0..TAU),
                rng.random_range(0.0..TAU),
                rng.random_range(0.0..TAU),
            );
        } else if roll < 0.92 {
            b = b.ry(rng.random_range(0..n), rng.random_range(0.0..TAU));
        } else {
            b = b.x(rng.random_range(0..n));
        }
    }
    b.build()
}
