//! Circuit text formats.
//!
//! Native format: line oriented UTF-8. The first non-comment line is
//! `qubits N`; gate lines are `u3 q theta phi lambda`, `x q`, `ry q theta`,
//! `cx c t`; `#` starts a comment; a trailing `# label=NAME` names the gate.
//! Angles are decimal radians.
//!
//! OpenQASM 2 subset: `OPENQASM 2.0;`, one `qreg`, and the gates `u3`, `x`,
//! `ry`, `cx`. Any other construct is rejected by name.

use super::{Circuit, GateId, GateInstance, GateOp, GateParams, UnitaryKind};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircuitFormat {
    Native,
    Qasm2,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown gate kind `{kind}`")]
    UnknownGate { line: usize, kind: String },
    #[error("line {line}: qubit index {index} out of range (circuit has {n} qubits)")]
    QubitOutOfRange { line: usize, index: usize, n: usize },
    #[error("line {line}: duplicate label `{label}`")]
    DuplicateLabel { line: usize, label: String },
    #[error("line {line}: unsupported construct `{construct}`")]
    Unsupported { line: usize, construct: String },
}

impl ParseError {
    fn syntax(line: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax { line, message: message.into() }
    }
}

pub fn parse_circuit(text: &str, format: CircuitFormat) -> Result<Circuit, ParseError> {
    match format {
        CircuitFormat::Native => parse_native(text),
        CircuitFormat::Qasm2 => parse_qasm2(text),
    }
}

pub fn serialize_circuit(c: &Circuit, format: CircuitFormat) -> String {
    match format {
        CircuitFormat::Native => serialize_native(c),
        CircuitFormat::Qasm2 => serialize_qasm2(c),
    }
}

// --- native format ---------------------------------------------------------

struct GateAccumulator {
    n: usize,
    gates: Vec<GateInstance>,
    labels: std::collections::HashSet<String>,
}

impl GateAccumulator {
    fn new(n: usize) -> Self {
        GateAccumulator {
            n,
            gates: Vec::new(),
            labels: std::collections::HashSet::new(),
        }
    }

    fn check_qubit(&self, line: usize, index: usize) -> Result<(), ParseError> {
        if index >= self.n {
            return Err(ParseError::QubitOutOfRange { line, index, n: self.n });
        }
        Ok(())
    }

    fn push(
        &mut self,
        line: usize,
        op: GateOp,
        label: Option<String>,
    ) -> Result<(), ParseError> {
        for q in op.qubits() {
            self.check_qubit(line, q)?;
        }
        if let GateOp::Cnot { control, target } = op {
            if control == target {
                return Err(ParseError::syntax(
                    line,
                    format!("cx control and target must differ (both {control})"),
                ));
            }
        }
        if let Some(label) = &label {
            if !self.labels.insert(label.clone()) {
                return Err(ParseError::DuplicateLabel { line, label: label.clone() });
            }
        }
        let id = GateId(self.gates.len());
        self.gates.push(GateInstance { id, op, label });
        Ok(())
    }

    fn finish(self) -> Circuit {
        Circuit::new(self.n, self.gates)
    }
}

fn parse_usize(line: usize, token: &str, what: &str) -> Result<usize, ParseError> {
    token
        .parse::<usize>()
        .map_err(|_| ParseError::syntax(line, format!("invalid {what} `{token}`")))
}

fn parse_angle(line: usize, token: &str) -> Result<f64, ParseError> {
    let value = token
        .parse::<f64>()
        .map_err(|_| ParseError::syntax(line, format!("invalid angle `{token}`")))?;
    if !value.is_finite() {
        return Err(ParseError::syntax(line, format!("angle `{token}` is not finite")));
    }
    Ok(value)
}

fn expect_arity(line: usize, kind: &str, args: &[&str], want: usize) -> Result<(), ParseError> {
    if args.len() != want {
        return Err(ParseError::syntax(
            line,
            format!("`{kind}` takes {want} argument(s), got {}", args.len()),
        ));
    }
    Ok(())
}

fn parse_native(text: &str) -> Result<Circuit, ParseError> {
    let mut acc: Option<GateAccumulator> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let (code, comment) = match raw.find('#') {
            Some(pos) => (&raw[..pos], Some(raw[pos + 1..].trim())),
            None => (raw, None),
        };
        let label = comment
            .and_then(|c| c.strip_prefix("label="))
            .map(|rest| rest.split_whitespace().next().unwrap_or(""))
            .filter(|name| !name.is_empty())
            .map(str::to_string);

        let tokens: Vec<&str> = code.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let kind = tokens[0];
        let args = &tokens[1..];

        let Some(acc) = acc.as_mut() else {
            if kind != "qubits" {
                return Err(ParseError::syntax(
                    line,
                    format!("expected `qubits N` before `{kind}`"),
                ));
            }
            expect_arity(line, "qubits", args, 1)?;
            let n = parse_usize(line, args[0], "qubit count")?;
            if n == 0 {
                return Err(ParseError::syntax(line, "qubit count must be at least 1"));
            }
            acc.replace(GateAccumulator::new(n));
            continue;
        };

        match kind {
            "qubits" => {
                return Err(ParseError::syntax(line, "duplicate `qubits` line"));
            }
            "u3" => {
                expect_arity(line, "u3", args, 4)?;
                let qubit = parse_usize(line, args[0], "qubit index")?;
                let theta = parse_angle(line, args[1])?;
                let phi = parse_angle(line, args[2])?;
                let lam = parse_angle(line, args[3])?;
                acc.push(
                    line,
                    GateOp::Unitary {
                        kind: UnitaryKind::U3,
                        qubit,
                        params: GateParams::new(theta, phi, lam),
                    },
                    label,
                )?;
            }
            "ry" => {
                expect_arity(line, "ry", args, 2)?;
                let qubit = parse_usize(line, args[0], "qubit index")?;
                let theta = parse_angle(line, args[1])?;
                acc.push(
                    line,
                    GateOp::Unitary {
                        kind: UnitaryKind::Ry,
                        qubit,
                        params: GateParams::ry(theta),
                    },
                    label,
                )?;
            }
            "x" => {
                expect_arity(line, "x", args, 1)?;
                let qubit = parse_usize(line, args[0], "qubit index")?;
                acc.push(
                    line,
                    GateOp::Unitary {
                        kind: UnitaryKind::X,
                        qubit,
                        params: GateParams::pauli_x(),
                    },
                    label,
                )?;
            }
            "cx" => {
                expect_arity(line, "cx", args, 2)?;
                let control = parse_usize(line, args[0], "qubit index")?;
                let target = parse_usize(line, args[1], "qubit index")?;
                acc.push(line, GateOp::Cnot { control, target }, label)?;
            }
            other => {
                return Err(ParseError::UnknownGate { line, kind: other.to_string() });
            }
        }
    }

    match acc {
        Some(acc) => Ok(acc.finish()),
        None => Err(ParseError::syntax(
            text.lines().count().max(1),
            "missing `qubits N` line",
        )),
    }
}

fn serialize_native(c: &Circuit) -> String {
    let mut out = format!("qubits {}\n", c.qubit_count());
    for g in c.gates() {
        match g.op {
            GateOp::Unitary { kind, qubit, params } => match kind {
                UnitaryKind::U3 => {
                    out.push_str(&format!(
                        "u3 {qubit} {} {} {}",
                        params.theta, params.phi, params.lam
                    ));
                }
                UnitaryKind::Ry => {
                    out.push_str(&format!("ry {qubit} {}", params.theta));
                }
                UnitaryKind::X => {
                    out.push_str(&format!("x {qubit}"));
                }
            },
            GateOp::Cnot { control, target } => {
                out.push_str(&format!("cx {control} {target}"));
            }
        }
        if let Some(label) = &g.label {
            out.push_str(&format!(" # label={label}"));
        }
        out.push('\n');
    }
    out
}

// --- OpenQASM 2 subset ------------------------------------------------------

/// A `;`-terminated statement with the 1-based line of its first token.
fn qasm_statements(text: &str) -> Result<Vec<(usize, String)>, ParseError> {
    // Strip // comments line by line, keeping newlines for line accounting.
    let mut stripped = String::with_capacity(text.len());
    for raw in text.lines() {
        let code = match raw.find("//") {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        stripped.push_str(code);
        stripped.push('\n');
    }

    let mut statements = Vec::new();
    let mut current = String::new();
    let mut line = 1usize;
    let mut start_line = None;
    for ch in stripped.chars() {
        match ch {
            ';' => {
                let stmt = current.trim();
                if !stmt.is_empty() {
                    statements.push((start_line.unwrap_or(line), stmt.to_string()));
                }
                current.clear();
                start_line = None;
            }
            '\n' => {
                current.push(' ');
                line += 1;
            }
            other => {
                if start_line.is_none() && !other.is_whitespace() {
                    start_line = Some(line);
                }
                current.push(other);
            }
        }
    }
    if !current.trim().is_empty() {
        return Err(ParseError::syntax(line, "statement missing terminating `;`"));
    }
    Ok(statements)
}

/// Parse `name[idx]` against the declared register.
fn parse_qasm_operand(line: usize, token: &str, reg: &str, n: usize) -> Result<usize, ParseError> {
    let token = token.trim();
    let inner = token
        .strip_prefix(reg)
        .and_then(|rest| rest.trim().strip_prefix('['))
        .and_then(|rest| rest.strip_suffix(']'))
        .ok_or_else(|| {
            ParseError::syntax(line, format!("invalid qubit operand `{token}` (expected {reg}[i])"))
        })?;
    let index = parse_usize(line, inner.trim(), "qubit index")?;
    if index >= n {
        return Err(ParseError::QubitOutOfRange { line, index, n });
    }
    Ok(index)
}

fn parse_qasm_params(line: usize, text: &str, want: usize) -> Result<Vec<f64>, ParseError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != want {
        return Err(ParseError::syntax(
            line,
            format!("expected {want} parameter(s), got {}", parts.len()),
        ));
    }
    let mut out = Vec::with_capacity(want);
    for part in parts {
        if part.parse::<f64>().is_err() {
            return Err(ParseError::Unsupported {
                line,
                construct: format!("parameter expression `{part}`"),
            });
        }
        out.push(parse_angle(line, part)?);
    }
    Ok(out)
}

fn parse_qasm2(text: &str) -> Result<Circuit, ParseError> {
    let statements = qasm_statements(text)?;
    let mut iter = statements.into_iter();

    let (line, header) = iter
        .next()
        .ok_or_else(|| ParseError::syntax(1, "empty source (expected `OPENQASM 2.0;`)"))?;
    if header.split_whitespace().collect::<Vec<_>>() != ["OPENQASM", "2.0"] {
        return Err(ParseError::syntax(line, "expected `OPENQASM 2.0;` header"));
    }

    let mut reg: Option<(String, usize)> = None;
    let mut acc: Option<GateAccumulator> = None;

    for (line, stmt) in iter {
        let head = stmt.split(|c: char| c.is_whitespace() || c == '(').next().unwrap_or("");
        match head {
            "qreg" => {
                if reg.is_some() {
                    return Err(ParseError::Unsupported {
                        line,
                        construct: "second qreg declaration".to_string(),
                    });
                }
                let body = stmt["qreg".len()..].trim();
                let (name, size) = body
                    .split_once('[')
                    .and_then(|(name, rest)| {
                        rest.strip_suffix(']').map(|inner| (name.trim(), inner.trim()))
                    })
                    .ok_or_else(|| {
                        ParseError::syntax(line, format!("invalid qreg declaration `{stmt}`"))
                    })?;
                let n = parse_usize(line, size, "register size")?;
                if n == 0 {
                    return Err(ParseError::syntax(line, "register size must be at least 1"));
                }
                reg = Some((name.to_string(), n));
                acc = Some(GateAccumulator::new(n));
            }
            "u3" | "ry" | "x" | "cx" => {
                let (reg_name, n) = reg
                    .as_ref()
                    .ok_or_else(|| ParseError::syntax(line, "gate before qreg declaration"))?;
                let acc = acc.as_mut().unwrap();
                let rest = stmt[head.len()..].trim();
                let (params, operands): (Vec<f64>, &str) = if let Some(open) =
                    rest.strip_prefix('(')
                {
                    let (inside, after) = open.split_once(')').ok_or_else(|| {
                        ParseError::syntax(line, "unterminated parameter list")
                    })?;
                    let want = match head {
                        "u3" => 3,
                        "ry" => 1,
                        _ => {
                            return Err(ParseError::syntax(
                                line,
                                format!("`{head}` takes no parameters"),
                            ))
                        }
                    };
                    (parse_qasm_params(line, inside, want)?, after.trim())
                } else {
                    if head == "u3" || head == "ry" {
                        return Err(ParseError::syntax(
                            line,
                            format!("`{head}` requires a parameter list"),
                        ));
                    }
                    (Vec::new(), rest)
                };

                let ops: Vec<&str> = operands.split(',').map(str::trim).collect();
                match head {
                    "u3" => {
                        expect_arity(line, "u3", &ops, 1)?;
                        let qubit = parse_qasm_operand(line, ops[0], reg_name, *n)?;
                        acc.push(
                            line,
                            GateOp::Unitary {
                                kind: UnitaryKind::U3,
                                qubit,
                                params: GateParams::new(params[0], params[1], params[2]),
                            },
                            None,
                        )?;
                    }
                    "ry" => {
                        expect_arity(line, "ry", &ops, 1)?;
                        let qubit = parse_qasm_operand(line, ops[0], reg_name, *n)?;
                        acc.push(
                            line,
                            GateOp::Unitary {
                                kind: UnitaryKind::Ry,
                                qubit,
                                params: GateParams::ry(params[0]),
                            },
                            None,
                        )?;
                    }
                    "x" => {
                        expect_arity(line, "x", &ops, 1)?;
                        let qubit = parse_qasm_operand(line, ops[0], reg_name, *n)?;
                        acc.push(
                            line,
                            GateOp::Unitary {
                                kind: UnitaryKind::X,
                                qubit,
                                params: GateParams::pauli_x(),
                            },
                            None,
                        )?;
                    }
                    "cx" => {
                        expect_arity(line, "cx", &ops, 2)?;
                        let control = parse_qasm_operand(line, ops[0], reg_name, *n)?;
                        let target = parse_qasm_operand(line, ops[1], reg_name, *n)?;
                        acc.push(line, GateOp::Cnot { control, target }, None)?;
                    }
                    _ => unreachable!(),
                }
            }
            other => {
                return Err(ParseError::Unsupported { line, construct: other.to_string() });
            }
        }
    }

    match acc {
        Some(acc) => Ok(acc.finish()),
        None => Err(ParseError::syntax(
            text.lines().count().max(1),
            "missing qreg declaration",
        )),
    }
}

fn serialize_qasm2(c: &Circuit) -> String {
    // Labels have no OpenQASM equivalent and are dropped.
    let mut out = String::from("OPENQASM 2.0;\n");
    out.push_str(&format!("qreg q[{}];\n", c.qubit_count()));
    for g in c.gates() {
        match g.op {
            GateOp::Unitary { kind, qubit, params } => match kind {
                UnitaryKind::U3 => out.push_str(&format!(
                    "u3({},{},{}) q[{qubit}];\n",
                    params.theta, params.phi, params.lam
                )),
                UnitaryKind::Ry => out.push_str(&format!("ry({}) q[{qubit}];\n", params.theta)),
                UnitaryKind::X => out.push_str(&format!("x q[{qubit}];\n")),
            },
            GateOp::Cnot { control, target } => {
                out.push_str(&format!("cx q[{control}], q[{target}];\n"));
            }
        }
    }
    out
}
