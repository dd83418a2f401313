//! Built-in fixture circuits.
//!
//! Each fixture is a small circuit with a known dependence picture and, for
//! several of them, a closed-form measurement probability that the oracle
//! tests pin down. They are addressable from the CLI as `fixtures:<name>`.

use super::Circuit;
use std::f64::consts::{FRAC_PI_4, PI};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown fixture `{name}` (known: {known})")]
pub struct UnknownFixture {
    pub name: String,
    pub known: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fixture {
    Fig1,
    Fig2,
    Ghz,
    WState,
    Eq4_6,
    DoubleCx,
    Eq13_15,
    Eq16_18,
    AnsatzA,
    AnsatzB,
}

impl Fixture {
    pub const ALL: [Fixture; 10] = [
        Fixture::Fig1,
        Fixture::Fig2,
        Fixture::Ghz,
        Fixture::WState,
        Fixture::Eq4_6,
        Fixture::DoubleCx,
        Fixture::Eq13_15,
        Fixture::Eq16_18,
        Fixture::AnsatzA,
        Fixture::AnsatzB,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Fixture::Fig1 => "fig1",
            Fixture::Fig2 => "fig2",
            Fixture::Ghz => "ghz",
            Fixture::WState => "w_state",
            Fixture::Eq4_6 => "eq4_6",
            Fixture::DoubleCx => "double_cx",
            Fixture::Eq13_15 => "eq13_15",
            Fixture::Eq16_18 => "eq16_18",
            Fixture::AnsatzA => "ansatz_a",
            Fixture::AnsatzB => "ansatz_b",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Fixture::Fig1 => "3-qubit chain: two 1-qubit unitaries spread through cx 0>1, cx 1>2",
            Fixture::Fig2 => "outer qubits entangled through the middle yet sharing no dependence",
            Fixture::Ghz => "GHZ-style creation circuit: one unitary copied onto every qubit",
            Fixture::WState => "W-state preparation from ry rotations, CNOTs, and a final x",
            Fixture::Eq4_6 => "fan-out then cross-copy: the middle unitary cancels on the last qubit",
            Fixture::DoubleCx => "the same CNOT twice cancels everything it copied",
            Fixture::Eq13_15 => "a unitary between repeated CNOTs keeps the copied dependence alive",
            Fixture::Eq16_18 => "entangling a third qubit first restores cancellation despite the unitary",
            Fixture::AnsatzA => "6-qubit hardware-efficient layer with a ring entangler",
            Fixture::AnsatzB => "6-qubit hardware-efficient layer with a sparse entangler",
        }
    }

    pub fn from_name(name: &str) -> Option<Fixture> {
        Fixture::ALL.iter().copied().find(|f| f.name() == name)
    }

    pub fn build(self) -> Circuit {
        match self {
            Fixture::Fig1 => Circuit::builder(3)
                .u3(0, 1.0, 0.2, 0.3)
                .label("U1")
                .u3(1, 0.5, 0.0, 0.0)
                .label("U2")
                .cx(0, 1)
                .cx(1, 2)
                .build(),
            // Both CNOTs target the middle qubit, so the outer qubits end up
            // entangled without sharing any unitary dependence.
            Fixture::Fig2 => Circuit::builder(3)
                .u3(0, 1.0, 0.2, 0.3)
                .label("U1")
                .u3(2, 0.5, 0.1, 0.7)
                .label("U3")
                .cx(0, 1)
                .cx(2, 1)
                .build(),
            Fixture::Ghz => Circuit::builder(3)
                .u3(0, PI / 2.0, 0.0, 0.0)
                .label("U1")
                .cx(0, 1)
                .cx(1, 2)
                .build(),
            // theta1 puts sqrt(1/3) amplitude on |0>; the ry(+-pi/4) pair
            // around cx 0>1 applies a Hadamard to q1 when q0 is |1>.
            Fixture::WState => {
                let theta1 = 2.0 * (1.0 / 3.0f64.sqrt()).acos();
                Circuit::builder(3)
                    .ry(0, theta1)
                    .label("Ry(θ1)")
                    .ry(1, FRAC_PI_4)
                    .label("Ry(θ2)")
                    .cx(0, 1)
                    .ry(1, -FRAC_PI_4)
                    .label("Ry(θ3)")
                    .cx(1, 2)
                    .cx(0, 1)
                    .x(0)
                    .label("X")
                    .build()
            }
            Fixture::Eq4_6 => Circuit::builder(3)
                .u3(0, 0.9, 0.3, 0.1)
                .label("Ua")
                .u3(1, 0.6, 0.2, 0.5)
                .label("Ub")
                .u3(2, 1.2, 0.4, 0.8)
                .label("Uc")
                .cx(1, 0)
                .cx(1, 2)
                .cx(0, 2)
                .build(),
            Fixture::DoubleCx => Circuit::builder(2)
                .u3(0, 0.9, 0.3, 0.1)
                .label("Ua")
                .u3(1, 0.6, 0.2, 0.5)
                .label("Ub")
                .cx(0, 1)
                .cx(0, 1)
                .build(),
            Fixture::Eq13_15 => Circuit::builder(2)
                .u3(0, 0.9, 0.3, 0.1)
                .label("Ua")
                .u3(1, 0.6, 0.2, 0.5)
                .label("Ub")
                .cx(0, 1)
                .u3(1, 1.1, 0.4, 0.9)
                .label("Uu")
                .cx(0, 1)
                .build(),
            Fixture::Eq16_18 => Circuit::builder(3)
                .u3(0, 0.9, 0.3, 0.1)
                .label("Ua")
                .u3(1, 0.6, 0.2, 0.5)
                .label("Ub")
                .cx(0, 1)
                .cx(1, 2)
                .u3(1, 1.1, 0.4, 0.9)
                .label("Uu")
                .cx(0, 1)
                .build(),
            Fixture::AnsatzA => {
                let mut b = Circuit::builder(6);
                for q in 0..6 {
                    b = b
                        .u3(q, 0.3 + 0.2 * q as f64, 0.1 * q as f64, 0.05 + 0.1 * q as f64)
                        .label(&format!("U{}", q + 1));
                }
                b.cx(0, 1).cx(1, 2).cx(2, 3).cx(3, 4).cx(4, 5).cx(5, 0).build()
            }
            Fixture::AnsatzB => {
                let mut b = Circuit::builder(6);
                for q in 0..6 {
                    b = b
                        .u3(q, 0.3 + 0.2 * q as f64, 0.1 * q as f64, 0.05 + 0.1 * q as f64)
                        .label(&format!("U{}", q + 1));
                }
                b.cx(1, 0).cx(0, 2).cx(3, 4).cx(5, 4).cx(1, 3).build()
            }
        }
    }
}

/// Look a fixture up by name and build it.
pub fn build_fixture(name: &str) -> Result<Circuit, UnknownFixture> {
    Fixture::from_name(name)
        .map(Fixture::build)
        .ok_or_else(|| UnknownFixture {
            name: name.to_string(),
            known: Fixture::ALL
                .iter()
                .map(|f| f.name())
                .collect::<Vec<_>>()
                .join(", "),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateOp;

    #[test]
    fn all_fixtures_build() {
        for fixture in Fixture::ALL {
            let c = fixture.build();
            assert!(c.qubit_count() >= 2, "{}", fixture.name());
            assert_eq!(build_fixture(fixture.name()).unwrap(), c);
        }
    }

    #[test]
    fn unknown_fixture_is_rejected() {
        let err = build_fixture("nope").unwrap_err();
        assert_eq!(err.name, "nope");
        assert!(err.known.contains("w_state"));
    }

    #[test]
    fn ghz_shape_matches() {
        let c = Fixture::Ghz.build();
        assert_eq!(c.qubit_count(), 3);
        assert_eq!(c.gates().len(), 3);
        assert_eq!(c.gates()[0].label.as_deref(), Some("U1"));
        assert_eq!(c.gates()[1].op, GateOp::Cnot { control: 0, target: 1 });
        assert_eq!(c.gates()[2].op, GateOp::Cnot { control: 1, target: 2 });
    }

    #[test]
    fn eq4_6_shape_matches() {
        let c = Fixture::Eq4_6.build();
        let cnots: Vec<_> = c
            .gates()
            .iter()
            .filter_map(|g| match g.op {
                GateOp::Cnot { control, target } => Some((control, target)),
                _ => None,
            })
            .collect();
        assert_eq!(cnots, vec![(1, 0), (1, 2), (0, 2)]);
    }

    #[test]
    fn ansatz_a_is_ring_entangled() {
        let c = Fixture::AnsatzA.build();
        assert_eq!(c.qubit_count(), 6);
        assert_eq!(c.gates().len(), 12);
        let cnots: Vec<_> = c
            .gates()
            .iter()
            .filter_map(|g| match g.op {
                GateOp::Cnot { control, target } => Some((control, target)),
                _ => None,
            })
            .collect();
        assert_eq!(cnots, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
    }
}
