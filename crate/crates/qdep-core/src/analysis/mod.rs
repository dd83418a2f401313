//! Static unitary-dependence analysis.
//!
//! One forward pass over the gate list tracks, for every qubit, a GF(2) set
//! of *atoms*. An atom is one qubit's value at its most recent functional
//! reset, and it carries the set of 1-qubit gate ids the value depends on:
//!
//! * a 1-qubit gate on `q` replaces `q`'s atom set with one fresh atom whose
//!   dependence set is the union of the old ones plus the gate itself
//!   (dependence creation, with the history baked in);
//! * a CNOT replaces the target's atom set with the symmetric difference of
//!   target and control sets (dependence copy, with exact cancellation when
//!   the same atom arrives twice).
//!
//! A qubit's dependence set is the union over the atoms currently in its
//! functional. The reset is per-qubit: a unitary on `q` freshens only `q`'s
//! atom, so cancellation between untouched qubits stays live.
//!
//! One further channel keeps the analysis a sound over-approximation: a
//! CNOT leaves the control's measurement probabilities alone, but it can
//! entangle the two qubits, and a later parameterized rotation of the
//! control mixes that entanglement's coherences into the measured diagonal.
//! `p(q0)` in `[u3 q0, u3 q1, cx 0 1, u3 q0]` really does vary with the
//! q1 gate's angles. [`analyze`] therefore bakes the dependences of every
//! possibly-entangled partner (union-find over CNOT-linked qubits) into the
//! fresh atom at each `u3`/`ry` gate. `x` is exempt: a permutation matrix
//! maps diagonals to diagonals and exposes nothing, which is also why the
//! probe holds `x` gates at their defining point.

mod picture;

pub use picture::{
    export_picture, restrict_picture, DependencePicture, PictureFormat, Provenance, RestrictError,
};

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::circuit::{circuit_hash, Circuit, GateId, GateOp, UnitaryKind};

/// One qubit's value at its most recent functional reset.
///
/// `origin` is the qubit the value lives on at creation; `epoch` counts that
/// qubit's resets, so ids are never reused within an analysis run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomId {
    origin: usize,
    epoch: usize,
}

impl AtomId {
    pub fn origin(&self) -> usize {
        self.origin
    }
}

/// The per-qubit GF(2) functional plus the atom dependence table.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalState {
    functional: Vec<BTreeSet<AtomId>>,
    atom_deps: HashMap<AtomId, BTreeSet<GateId>>,
    epochs: Vec<usize>,
}

impl FunctionalState {
    /// One fresh, dependence-free atom per qubit.
    pub fn init(n: usize) -> Self {
        assert!(n >= 1, "analysis needs at least one qubit");
        let mut atom_deps = HashMap::with_capacity(n);
        let functional = (0..n)
            .map(|origin| {
                let atom = AtomId { origin, epoch: 0 };
                atom_deps.insert(atom, BTreeSet::new());
                BTreeSet::from([atom])
            })
            .collect();
        FunctionalState {
            functional,
            atom_deps,
            epochs: vec![0; n],
        }
    }

    pub fn qubit_count(&self) -> usize {
        self.functional.len()
    }

    /// The atoms currently on `qubit`.
    pub fn functional(&self, qubit: usize) -> &BTreeSet<AtomId> {
        &self.functional[qubit]
    }

    /// Union of the dependence sets of the atoms currently on `qubit`.
    pub fn dependences(&self, qubit: usize) -> BTreeSet<GateId> {
        self.functional[qubit]
            .iter()
            .flat_map(|atom| self.atom_deps[atom].iter().copied())
            .collect()
    }

    /// Apply a 1-qubit gate: reset `qubit`'s functional to a single fresh
    /// atom carrying the old dependences plus `gate`.
    pub fn apply_unitary(&mut self, qubit: usize, gate: GateId) {
        self.apply_unitary_exposing(qubit, gate, &BTreeSet::new());
    }

    /// [`Self::apply_unitary`] that additionally bakes `exposed` into the
    /// fresh atom.
    ///
    /// A rotation of an entangled qubit turns its coherences into measured
    /// probability, so the dependences of its possible entanglement
    /// partners become part of the qubit's own set. [`analyze`] computes
    /// that partner union; the functional state stays agnostic of it.
    pub fn apply_unitary_exposing(
        &mut self,
        qubit: usize,
        gate: GateId,
        exposed: &BTreeSet<GateId>,
    ) {
        assert!(qubit < self.qubit_count(), "qubit {qubit} out of range");
        let mut deps = self.dependences(qubit);
        deps.extend(exposed.iter().copied());
        deps.insert(gate);
        self.epochs[qubit] += 1;
        let atom = AtomId { origin: qubit, epoch: self.epochs[qubit] };
        self.atom_deps.insert(atom, deps);
        self.functional[qubit] = BTreeSet::from([atom]);
    }

    /// Apply a CNOT: symmetric difference of the control's atoms into the
    /// target's. The control is untouched.
    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        assert!(control < self.qubit_count(), "qubit {control} out of range");
        assert!(target < self.qubit_count(), "qubit {target} out of range");
        assert_ne!(control, target, "CNOT control and target must differ");
        let control_atoms: Vec<AtomId> = self.functional[control].iter().copied().collect();
        let target_set = &mut self.functional[target];
        for atom in control_atoms {
            if !target_set.remove(&atom) {
                target_set.insert(atom);
            }
        }
    }
}

/// Union-find over qubits, merged at every CNOT. Membership is monotone:
/// a CNOT pair that happens to disentangle stays linked, keeping the
/// exposure bake conservative.
struct EntanglementClusters {
    parent: Vec<usize>,
}

impl EntanglementClusters {
    fn new(n: usize) -> Self {
        EntanglementClusters { parent: (0..n).collect() }
    }

    fn find(&mut self, q: usize) -> usize {
        let mut q = q;
        while self.parent[q] != q {
            self.parent[q] = self.parent[self.parent[q]];
            q = self.parent[q];
        }
        q
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[rb] = ra;
        }
    }

    fn members(&mut self, q: usize) -> Vec<usize> {
        let root = self.find(q);
        (0..self.parent.len()).filter(|&m| self.find(m) == root).collect()
    }
}

/// Run the forward pass and produce the static dependence picture.
pub fn analyze(c: &Circuit) -> DependencePicture {
    let mut state = FunctionalState::init(c.qubit_count());
    let mut clusters = EntanglementClusters::new(c.qubit_count());
    for gate in c.gates() {
        match gate.op {
            GateOp::Unitary { qubit, kind, .. } => {
                if kind == UnitaryKind::X {
                    state.apply_unitary(qubit, gate.id);
                } else {
                    let exposed: BTreeSet<GateId> = clusters
                        .members(qubit)
                        .into_iter()
                        .flat_map(|m| state.dependences(m))
                        .collect();
                    state.apply_unitary_exposing(qubit, gate.id, &exposed);
                }
            }
            GateOp::Cnot { control, target } => {
                clusters.union(control, target);
                state.apply_cnot(control, target);
            }
        }
    }

    let by_qubit: BTreeMap<usize, BTreeSet<GateId>> = (0..c.qubit_count())
        .map(|q| (q, state.dependences(q)))
        .collect();
    let unitaries = c
        .gates()
        .iter()
        .filter(|g| g.op.is_unitary())
        .map(|g| (g.id, g.label.clone()));
    DependencePicture::new(
        c.qubit_count(),
        Provenance::Static,
        by_qubit,
        unitaries,
        circuit_hash(c),
    )
}

/// Unitary ids shared by two qubits of a picture.
///
/// Qubits that do not share any dependence have independent measurement
/// probabilities; this is the quantity the independence audit checks.
pub fn shared_dependences(p: &DependencePicture, i: usize, j: usize) -> BTreeSet<GateId> {
    assert_ne!(i, j, "shared_dependences needs two distinct qubits");
    let a = p.qubit_dependences(i).expect("qubit not in picture");
    let b = p.qubit_dependences(j).expect("qubit not in picture");
    a.intersection(b).copied().collect()
}
