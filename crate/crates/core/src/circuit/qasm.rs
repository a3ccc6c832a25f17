use std::fmt::Write;

use crate::error::{Error, Result};

use super::ir::{Basis, Circuit, Gate, SingleQubitOp};

fn angle(x: f64) -> String {
    format!("{x:.8e}")
}

fn unitary_line(gate: &Gate) -> Result<String> {
    Ok(match gate {
        Gate::Single { qubit, op } => {
            let name = match op {
                SingleQubitOp::H => "h".to_string(),
                SingleQubitOp::X => "x".to_string(),
                SingleQubitOp::Z => "z".to_string(),
                SingleQubitOp::S => "s".to_string(),
                SingleQubitOp::Sdg => "sdg".to_string(),
                SingleQubitOp::Ry(t) => format!("ry({})", angle(*t)),
                SingleQubitOp::Rz(t) => format!("rz({})", angle(*t)),
                SingleQubitOp::Matrix(_) => {
                    return Err(Error::Emission(
                        "raw single-qubit matrix; decompose into named rotations first".into(),
                    ))
                }
            };
            format!("{name} q[{qubit}];")
        }
        Gate::Cnot { control, target } => format!("cx q[{control}],q[{target}];"),
        Gate::TwoQubit { .. } => {
            return Err(Error::Emission(
                "raw two-qubit matrix; decompose into CNOTs and rotations first".into(),
            ))
        }
        _ => return Err(Error::Emission(format!("{gate:?} cannot be conditioned"))),
    })
}

/// OpenQASM 2.0 text with one single-bit register `cK` per classical bit.
pub fn emit_qasm(circuit: &Circuit) -> Result<String> {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    if circuit.num_qubits() > 0 {
        writeln!(out, "qreg q[{}];", circuit.num_qubits()).unwrap();
    }
    for k in 0..circuit.num_cbits() {
        writeln!(out, "creg c{k}[1];").unwrap();
    }
    for gate in circuit.gates() {
        match gate {
            Gate::Measure { qubit, basis, cbit } => {
                let m = format!("measure q[{qubit}] -> c{cbit}[0];");
                match basis {
                    Basis::Z => writeln!(out, "{m}").unwrap(),
                    Basis::X => writeln!(out, "h q[{qubit}];\n{m}\nh q[{qubit}];").unwrap(),
                }
            }
            Gate::Reset { qubit } => writeln!(out, "reset q[{qubit}];").unwrap(),
            Gate::Conditioned { cbit, value, gate } => {
                writeln!(out, "if(c{cbit}=={value}) {}", unitary_line(gate)?).unwrap()
            }
            g => writeln!(out, "{}", unitary_line(g)?).unwrap(),
        }
    }
    Ok(out)
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn index(text: &str, prefix: &str, line: usize) -> Result<usize> {
    text.trim()
        .strip_prefix(prefix)
        .and_then(|r| r.strip_suffix(']'))
        .and_then(|r| r.parse().ok())
        .ok_or_else(|| parse_err(line, format!("expected {prefix}N], found `{text}`")))
}

fn parse_unitary(stmt: &str, line: usize) -> Result<Gate> {
    let (head, args) = stmt
        .split_once(' ')
        .ok_or_else(|| parse_err(line, format!("malformed statement `{stmt}`")))?;
    if head == "cx" {
        let (a, b) = args
            .split_once(',')
            .ok_or_else(|| parse_err(line, "cx needs two operands"))?;
        return Ok(Gate::cnot(index(a, "q[", line)?, index(b, "q[", line)?));
    }
    let qubit = index(args, "q[", line)?;
    let param = |name: &str| -> Result<f64> {
        head.strip_prefix(name)
            .and_then(|r| r.strip_prefix('('))
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|r| r.parse().ok())
            .ok_or_else(|| parse_err(line, format!("bad angle in `{head}`")))
    };
    let op = match head {
        "h" => SingleQubitOp::H,
        "x" => SingleQubitOp::X,
        "z" => SingleQubitOp::Z,
        "s" => SingleQubitOp::S,
        "sdg" => SingleQubitOp::Sdg,
        h if h.starts_with("ry(") => SingleQubitOp::Ry(param("ry")?),
        h if h.starts_with("rz(") => SingleQubitOp::Rz(param("rz")?),
        _ => return Err(parse_err(line, format!("unknown gate `{head}`"))),
    };
    Ok(Gate::single(qubit, op))
}

/// Reads back the dialect produced by [`emit_qasm`]. A Hadamard-sandwiched
/// measurement is folded into an X-basis measurement.
pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let mut num_qubits = 0;
    let mut num_cbits = 0;
    let mut gates = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let stmt = raw.trim();
        if stmt.is_empty() || stmt.starts_with("//") {
            continue;
        }
        let stmt = stmt
            .strip_suffix(';')
            .ok_or_else(|| parse_err(line, "missing `;`"))?
            .trim();
        if stmt.starts_with("OPENQASM") || stmt.starts_with("include") {
            continue;
        }
        if let Some(rest) = stmt.strip_prefix("qreg ") {
            num_qubits = index(rest, "q[", line)?;
        } else if let Some(rest) = stmt.strip_prefix("creg c") {
            let (k, size) = rest
                .split_once('[')
                .ok_or_else(|| parse_err(line, "malformed creg"))?;
            let k: usize = k.parse().map_err(|_| parse_err(line, "bad creg name"))?;
            if size != "1]" || k != num_cbits {
                return Err(parse_err(line, "classical registers must be c0[1], c1[1], ... in order"));
            }
            num_cbits += 1;
        } else if let Some(rest) = stmt.strip_prefix("measure ") {
            let (q, c) = rest
                .split_once("->")
                .ok_or_else(|| parse_err(line, "measure needs `->`"))?;
            let c = c.trim().strip_prefix('c').unwrap_or("");
            let cbit = c
                .strip_suffix("[0]")
                .and_then(|k| k.parse().ok())
                .ok_or_else(|| parse_err(line, "bad measurement target"))?;
            gates.push(Gate::Measure { qubit: index(q, "q[", line)?, basis: Basis::Z, cbit });
        } else if let Some(rest) = stmt.strip_prefix("reset ") {
            gates.push(Gate::Reset { qubit: index(rest, "q[", line)? });
        } else if let Some(rest) = stmt.strip_prefix("if(c") {
            let (cond, body) = rest
                .split_once(')')
                .ok_or_else(|| parse_err(line, "unterminated condition"))?;
            let (cbit, value) = cond
                .split_once("==")
                .and_then(|(k, v)| Some((k.parse().ok()?, v.parse().ok()?)))
                .ok_or_else(|| parse_err(line, "bad condition"))?;
            gates.push(Gate::conditioned(cbit, value, parse_unitary(body.trim(), line)?));
        } else {
            gates.push(parse_unitary(stmt, line)?);
        }
    }
    let mut circuit = Circuit::new(num_qubits, num_cbits);
    let mut k = 0;
    while k < gates.len() {
        if let [Gate::Single { qubit: a, op: SingleQubitOp::H }, Gate::Measure { qubit: m, basis: Basis::Z, cbit }, Gate::Single { qubit: b, op: SingleQubitOp::H }, ..] =
            &gates[k..]
        {
            if a == m && m == b {
                circuit.push(Gate::Measure { qubit: *m, basis: Basis::X, cbit: *cbit })?;
                k += 3;
                continue;
            }
        }
        circuit.push(gates[k].clone())?;
        k += 1;
    }
    Ok(circuit)
}
