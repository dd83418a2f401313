//! The dependence picture: the dual qubits <-> unitaries mapping, plus its
//! JSON / DOT / text renderings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::circuit::GateId;

/// How a picture was obtained: by the static rules or by the oracle probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Static,
    Empirical,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Static => "static",
            Provenance::Empirical => "empirical",
        }
    }
}

/// Dual mapping qubits -> unitary ids and unitary ids -> qubits.
///
/// The two maps are exact transposes of each other by construction. A
/// restricted picture keeps only a subset of qubits; `n` stays the qubit
/// count of the analyzed circuit so qubit identities survive restriction.
#[derive(Debug, Clone, PartialEq)]
pub struct DependencePicture {
    n: usize,
    provenance: Provenance,
    by_qubit: BTreeMap<usize, BTreeSet<GateId>>,
    by_unitary: BTreeMap<GateId, BTreeSet<usize>>,
    labels: BTreeMap<GateId, String>,
    circuit_hash: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RestrictError {
    #[error("restriction must keep at least one qubit")]
    EmptyKeep,
    #[error("qubit {qubit} is not part of the picture")]
    UnknownQubit { qubit: usize },
}

impl DependencePicture {
    /// Build a picture from the per-qubit sets; the by-unitary side is the
    /// computed transpose. `unitaries` lists every 1-qubit gate id of the
    /// circuit with its optional label, so unitaries with no dependent
    /// qubits still appear.
    pub fn new(
        n: usize,
        provenance: Provenance,
        by_qubit: BTreeMap<usize, BTreeSet<GateId>>,
        unitaries: impl IntoIterator<Item = (GateId, Option<String>)>,
        circuit_hash: String,
    ) -> Self {
        let mut by_unitary: BTreeMap<GateId, BTreeSet<usize>> = BTreeMap::new();
        let mut labels = BTreeMap::new();
        for (id, label) in unitaries {
            by_unitary.entry(id).or_default();
            if let Some(label) = label {
                labels.insert(id, label);
            }
        }
        for (&q, gates) in &by_qubit {
            assert!(q < n, "qubit {q} out of range");
            for gate in gates {
                by_unitary
                    .get_mut(gate)
                    .unwrap_or_else(|| panic!("{gate} not declared as a unitary"))
                    .insert(q);
            }
        }
        DependencePicture {
            n,
            provenance,
            by_qubit,
            by_unitary,
            labels,
            circuit_hash,
        }
    }

    pub fn qubit_count(&self) -> usize {
        self.n
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn circuit_hash(&self) -> &str {
        &self.circuit_hash
    }

    pub fn by_qubit(&self) -> &BTreeMap<usize, BTreeSet<GateId>> {
        &self.by_qubit
    }

    pub fn by_unitary(&self) -> &BTreeMap<GateId, BTreeSet<usize>> {
        &self.by_unitary
    }

    /// The dependence set of one qubit, `None` if it was restricted away.
    pub fn qubit_dependences(&self, qubit: usize) -> Option<&BTreeSet<GateId>> {
        self.by_qubit.get(&qubit)
    }

    pub fn unitary_ids(&self) -> Vec<GateId> {
        self.by_unitary.keys().copied().collect()
    }

    pub fn label(&self, gate: GateId) -> Option<&str> {
        self.labels.get(&gate).map(String::as_str)
    }

    /// Label if present, `g<idx>` otherwise.
    pub fn display_name(&self, gate: GateId) -> String {
        self.labels
            .get(&gate)
            .cloned()
            .unwrap_or_else(|| gate.to_string())
    }

    pub fn contains_dependence(&self, qubit: usize, gate: GateId) -> bool {
        self.by_qubit
            .get(&qubit)
            .is_some_and(|set| set.contains(&gate))
    }

    /// `q in by_unitary[u]  <=>  u in by_qubit[q]`, both directions.
    pub fn transpose_consistent(&self) -> bool {
        let forward = self.by_qubit.iter().all(|(q, gates)| {
            gates
                .iter()
                .all(|g| self.by_unitary.get(g).is_some_and(|qs| qs.contains(q)))
        });
        let backward = self.by_unitary.iter().all(|(g, qubits)| {
            qubits
                .iter()
                .all(|q| self.by_qubit.get(q).is_some_and(|gs| gs.contains(g)))
        });
        forward && backward
    }

    /// Keep only the given qubits. Surviving entries are copied verbatim;
    /// unitaries whose qubit set becomes empty are dropped.
    pub fn restrict(&self, keep: &BTreeSet<usize>) -> Result<DependencePicture, RestrictError> {
        if keep.is_empty() {
            return Err(RestrictError::EmptyKeep);
        }
        for &q in keep {
            if !self.by_qubit.contains_key(&q) {
                return Err(RestrictError::UnknownQubit { qubit: q });
            }
        }
        let by_qubit: BTreeMap<usize, BTreeSet<GateId>> = self
            .by_qubit
            .iter()
            .filter(|(q, _)| keep.contains(q))
            .map(|(&q, gates)| (q, gates.clone()))
            .collect();
        let by_unitary: BTreeMap<GateId, BTreeSet<usize>> = self
            .by_unitary
            .iter()
            .filter_map(|(&g, qubits)| {
                let kept: BTreeSet<usize> = qubits.intersection(keep).copied().collect();
                (!kept.is_empty()).then_some((g, kept))
            })
            .collect();
        let labels = self
            .labels
            .iter()
            .filter(|(g, _)| by_unitary.contains_key(g))
            .map(|(&g, l)| (g, l.clone()))
            .collect();
        Ok(DependencePicture {
            n: self.n,
            provenance: self.provenance,
            by_qubit,
            by_unitary,
            labels,
            circuit_hash: self.circuit_hash.clone(),
        })
    }

    /// The schema object: `{"n", "provenance", "by_qubit", "by_unitary"}`
    /// with keys in numeric order and arrays sorted ascending.
    pub fn to_json(&self) -> Value {
        let mut by_qubit = Map::new();
        for (q, gates) in &self.by_qubit {
            by_qubit.insert(
                format!("q{q}"),
                Value::Array(gates.iter().map(|g| json!(g.to_string())).collect()),
            );
        }
        let mut by_unitary = Map::new();
        for (g, qubits) in &self.by_unitary {
            by_unitary.insert(
                g.to_string(),
                json!({
                    "label": self.labels.get(g),
                    "qubits": qubits.iter().map(|q| format!("q{q}")).collect::<Vec<_>>(),
                }),
            );
        }
        let mut root = Map::new();
        root.insert("n".to_string(), json!(self.n));
        root.insert("provenance".to_string(), json!(self.provenance.as_str()));
        root.insert("by_qubit".to_string(), Value::Object(by_qubit));
        root.insert("by_unitary".to_string(), Value::Object(by_unitary));
        Value::Object(root)
    }

    /// Undirected bipartite membership graph: qubit nodes are boxes,
    /// unitary nodes ellipses, node and edge order deterministic.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph dependence_picture {\n  rankdir=LR;\n");
        for q in self.by_qubit.keys() {
            let _ = writeln!(out, "  \"q{q}\" [shape=box];");
        }
        for g in self.by_unitary.keys() {
            let _ = writeln!(
                out,
                "  \"{g}\" [shape=ellipse, label=\"{}\"];",
                self.display_name(*g)
            );
        }
        for (q, gates) in &self.by_qubit {
            for g in gates {
                let _ = writeln!(out, "  \"q{q}\" -- \"{g}\";");
            }
        }
        out.push_str("}\n");
        out
    }

    /// Two-line description: qubits with their unitary sets, then unitaries
    /// with their qubit sets.
    pub fn to_text(&self) -> String {
        let mut out = String::from("by qubits (");
        let mut first = true;
        for (q, gates) in &self.by_qubit {
            if !first {
                out.push_str(", ");
            }
            first = false;
            let names: Vec<String> = gates.iter().map(|g| self.display_name(*g)).collect();
            let _ = write!(out, "q{q}:{{{}}}", names.join(","));
        }
        out.push_str(")\nby 1-qubit unitaries (");
        let mut first = true;
        for (g, qubits) in &self.by_unitary {
            if !first {
                out.push_str(", ");
            }
            first = false;
            let names: Vec<String> = qubits.iter().map(|q| format!("q{q}")).collect();
            let _ = write!(out, "{}:{{{}}}", self.display_name(*g), names.join(","));
        }
        out.push_str(")\n");
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PictureFormat {
    Json,
    Dot,
    Text,
}

/// Render a picture in the requested format.
pub fn export_picture(p: &DependencePicture, format: PictureFormat) -> String {
    match format {
        PictureFormat::Json => p.to_json().to_string(),
        PictureFormat::Dot => p.to_dot(),
        PictureFormat::Text => p.to_text(),
    }
}

/// Restrict a picture to a subset of qubits (see [`DependencePicture::restrict`]).
pub fn restrict_picture(
    p: &DependencePicture,
    keep: &BTreeSet<usize>,
) -> Result<DependencePicture, RestrictError> {
    p.restrict(keep)
}
