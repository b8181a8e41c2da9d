//! Line-oriented text format.
//!
//! ```text
//! QUBITS 2
//! H 0
//! CNOT 0 1
//! MEASURE 0 1
//! ```
//!
//! Gate tokens: `I X Y Z H S T SDG TDG`, `RK k q`, `RKDG k q`, `CNOT c t`,
//! `SWAP a b`, `CCX c1 c2 t`. A leading `C` adds a control, so `CRK k c t`,
//! `CZ c t` and `CSDG c t` are accepted too. `#` starts a comment.

use super::Circuit;
use crate::error::{Error, Result};
use crate::gates::Gate;

enum Template {
    Fixed(Gate),
    Rk,
    RkDg,
}

fn token_of(g: &Gate) -> Result<(String, Option<u32>)> {
    let fixed = |s: &str| Ok((s.to_string(), None));
    match g {
        Gate::I => fixed("I"),
        Gate::X => fixed("X"),
        Gate::Y => fixed("Y"),
        Gate::Z => fixed("Z"),
        Gate::H => fixed("H"),
        Gate::S => fixed("S"),
        Gate::T => fixed("T"),
        Gate::Rk(k) => Ok(("RK".into(), Some(*k))),
        Gate::Cnot => fixed("CNOT"),
        Gate::Swap => fixed("SWAP"),
        Gate::Toffoli => fixed("CCX"),
        Gate::Adjoint(inner) => match inner.as_ref() {
            Gate::S => fixed("SDG"),
            Gate::T => fixed("TDG"),
            Gate::Rk(k) => Ok(("RKDG".into(), Some(*k))),
            _ => Err(Error::Unserializable(g.name())),
        },
        Gate::Controlled(inner) => {
            let (t, p) = token_of(inner)?;
            Ok((format!("C{t}"), p))
        }
        Gate::CustomUnitary(_) => Err(Error::Unserializable(g.name())),
    }
}

fn parse_name(name: &str) -> Option<(usize, Template)> {
    let base = match name {
        "I" => Template::Fixed(Gate::I),
        "X" => Template::Fixed(Gate::X),
        "Y" => Template::Fixed(Gate::Y),
        "Z" => Template::Fixed(Gate::Z),
        "H" => Template::Fixed(Gate::H),
        "S" => Template::Fixed(Gate::S),
        "T" => Template::Fixed(Gate::T),
        "SDG" => Template::Fixed(Gate::adjoint_of(Gate::S)),
        "TDG" => Template::Fixed(Gate::adjoint_of(Gate::T)),
        "RK" => Template::Rk,
        "RKDG" => Template::RkDg,
        "CNOT" => Template::Fixed(Gate::Cnot),
        "SWAP" => Template::Fixed(Gate::Swap),
        "CCX" => Template::Fixed(Gate::Toffoli),
        _ => {
            let (c, t) = parse_name(name.strip_prefix('C')?)?;
            return Some((c + 1, t));
        }
    };
    Some((0, base))
}

pub fn serialize(circuit: &Circuit) -> Result<String> {
    let mut out = format!("QUBITS {}\n", circuit.n_qubits());
    for step in circuit.steps() {
        let (tok, param) = token_of(&step.gate)?;
        out.push_str(&tok);
        if let Some(k) = param {
            out.push_str(&format!(" {k}"));
        }
        for q in &step.targets {
            out.push_str(&format!(" {q}"));
        }
        out.push('\n');
    }
    if let Some(qs) = circuit.final_measurement() {
        out.push_str("MEASURE");
        for q in qs {
            out.push_str(&format!(" {q}"));
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn deserialize(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    let mut measured = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let head = tokens.next().unwrap_or_default();
        let err = |token: &str, message: &str| Error::Parse {
            line,
            token: token.to_string(),
            message: message.to_string(),
        };
        let mut number = |what: &str| -> Result<u64> {
            let t = tokens.next().ok_or_else(|| err(head, &format!("missing {what}")))?;
            t.parse::<u64>().map_err(|_| err(t, &format!("expected {what}")))
        };

        let Some(c) = circuit.as_mut() else {
            if head != "QUBITS" {
                return Err(err(head, "first statement must be QUBITS"));
            }
            let n = number("qubit count")? as usize;
            circuit = Some(Circuit::new(n).map_err(|e| err(&n.to_string(), &e.to_string()))?);
            if let Some(extra) = tokens.next() {
                return Err(err(extra, "unexpected token"));
            }
            continue;
        };

        match head {
            "QUBITS" => return Err(err(head, "QUBITS may appear only once")),
            "MEASURE" => {
                let mut qs = Vec::new();
                for t in tokens.by_ref() {
                    qs.push(t.parse::<usize>().map_err(|_| err(t, "expected qubit index"))?);
                }
                if qs.is_empty() {
                    return Err(err(head, "MEASURE needs at least one qubit"));
                }
                c.measure(&qs).map_err(|e| err(head, &e.to_string()))?;
                measured = true;
            }
            name => {
                if measured {
                    return Err(err(name, "gate after MEASURE"));
                }
                let (controls, template) = parse_name(name).ok_or_else(|| err(name, "unknown gate"))?;
                let mut gate = match template {
                    Template::Fixed(g) => g,
                    Template::Rk => Gate::Rk(number("R_k index")? as u32),
                    Template::RkDg => Gate::adjoint_of(Gate::Rk(number("R_k index")? as u32)),
                };
                for _ in 0..controls {
                    gate = Gate::controlled(gate);
                }
                let mut targets = Vec::with_capacity(gate.arity());
                for _ in 0..gate.arity() {
                    targets.push(number("qubit index")? as usize);
                }
                if let Some(extra) = tokens.next() {
                    return Err(err(extra, "unexpected token"));
                }
                c.push(gate, targets).map_err(|e| err(name, &e.to_string()))?;
            }
        }
    }
    circuit.ok_or_else(|| Error::Parse {
        line: 0,
        token: String::new(),
        message: "empty circuit file".into(),
    })
}
