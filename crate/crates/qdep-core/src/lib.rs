//! Unitary dependence analysis of quantum circuits.
//!
//! A qubit *depends* on a 1-qubit unitary gate when its computational-basis
//! measurement probabilities vary with the gate's parameters. This crate
//! computes the full dependence picture of a circuit two independent ways:
//!
//! * [`analysis`] derives it statically, in one forward pass, from three
//!   rules: a 1-qubit unitary creates a dependence on its target only; a
//!   CNOT copies all of the control's dependences to the target; a
//!   dependence received twice through unmodified copies cancels (tracked
//!   exactly as GF(2) symmetric differences of value atoms);
//! * [`oracle`] measures it empirically, by simulating the statevector and
//!   taking finite differences of the measurement marginals against every
//!   gate parameter.
//!
//! [`compare`] reconciles the two pictures per (qubit, gate) pair. The
//! static side is conservative: it may keep a dependence that entanglement
//! physically cancels (`static_only`), but it must never miss one
//! (`oracle_only` is a soundness violation).
//!
//! ```
//! use qdep_core::{analyze, build_fixture, verify_circuit, GateId, ProbeConfig};
//!
//! let circuit = build_fixture("eq16_18")?;
//! let picture = analyze(&circuit);
//! assert!(picture.contains_dependence(1, GateId(0)));
//!
//! // The probe shows that dependence is physically cancelled: one
//! // static_only verdict, no soundness findings.
//! let outcome = verify_circuit(&circuit, &ProbeConfig::default())?;
//! assert!(outcome.is_clean());
//! assert_eq!(outcome.divergence.counts.static_only, 1);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

#![forbid(unsafe_code)]

pub mod analysis;
pub mod circuit;
pub mod compare;
pub mod oracle;

pub use analysis::{
    analyze, export_picture, restrict_picture, shared_dependences, DependencePicture,
    PictureFormat, Provenance,
};
pub use circuit::{
    build_fixture, circuit_hash, parse_circuit, random_circuit, serialize_circuit, Circuit,
    CircuitFormat, Fixture, GateId, GateParams, ParseError,
};
pub use compare::{
    compare, independence_audit, verify_circuit, AuditReport, CompareError, DivergenceReport,
    Verdict, VerifyOutcome,
};
pub use oracle::{
    empirical_picture, partial_trace, ppt_negativity, probe_circuit, sensitivity_probe, simulate,
    CapacityError, DensityMatrix, ParamAssignment, ProbeConfig, ProbeReport, Statevector,
    MAX_QUBITS,
};
