// Copyright 2026 The bellgem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Circuits over {H, CNOT, CP(π/2)} and their exact simulation.
//!
//! Text format, one gate per line, `#` starts a comment:
//!
//! ```text
//! qubits 4
//! H 1
//! CNOT 1 2   # control, target
//! CP 1 2     # diag(1, 1, 1, i)
//! ```
//!
//! Operands are 1-based; qubit 1 is the most significant bit of a basis label.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::qstate::{BasisIndex, SparseState, StateError, MAX_QUBITS};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("gate {gate} has an operand outside 1..={width}")]
    OperandOutOfRange { gate: Gate, width: u32 },
    #[error("gate {0} uses the same qubit twice")]
    DuplicateOperand(Gate),
    #[error("circuit width {circuit} does not match state width {state}")]
    WidthMismatch { circuit: u32, state: u32 },
    #[error(transparent)]
    State(#[from] StateError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gate {
    H(u32),
    Cnot {
        control: u32,
        target: u32,
    },
    /// Controlled phase shift of π/2; symmetric in its operands.
    Cp {
        control: u32,
        target: u32,
    },
}

impl Gate {
    pub fn operands(&self) -> Vec<u32> {
        match *self {
            Gate::H(q) => vec![q],
            Gate::Cnot { control, target } | Gate::Cp { control, target } => vec![control, target],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::Cnot { .. } => "CNOT",
            Gate::Cp { .. } => "CP",
        }
    }

    pub fn is_hadamard(&self) -> bool {
        matches!(self, Gate::H(_))
    }

    pub fn validate(&self, width: u32) -> Result<(), CircuitError> {
        let ops = self.operands();
        if ops.iter().any(|&q| q == 0 || q > width) {
            return Err(CircuitError::OperandOutOfRange { gate: *self, width });
        }
        if ops.len() == 2 && ops[0] == ops[1] {
            return Err(CircuitError::DuplicateOperand(*self));
        }
        Ok(())
    }

    /// Applies the gate to `s`, exactly.
    pub fn apply(&self, s: &SparseState) -> Result<SparseState, CircuitError> {
        let width = s.qubits();
        self.validate(width)?;
        let terms = s.terms();
        let out = match *self {
            Gate::H(q) => {
                let mut next = Vec::with_capacity(terms.len() * 2);
                for &(x, a) in terms {
                    let scaled = a.checked_div_sqrt2().map_err(StateError::from)?;
                    let low = if x.bit(q, width) { x.flip(q, width) } else { x };
                    let high = low.flip(q, width);
                    next.push((low, scaled));
                    let signed = if x.bit(q, width) { scaled.checked_neg().map_err(StateError::from)? } else { scaled };
                    next.push((high, signed));
                }
                SparseState::from_terms(width, next)?
            }
            Gate::Cnot { control, target } => SparseState::from_terms(
                width,
                terms.iter().map(|&(x, a)| (if x.bit(control, width) { x.flip(target, width) } else { x }, a)),
            )?,
            Gate::Cp { control, target } => {
                let next = terms
                    .iter()
                    .map(|&(x, a)| {
                        if x.bit(control, width) && x.bit(target, width) {
                            Ok((x, a.checked_mul_i()?))
                        } else {
                            Ok((x, a))
                        }
                    })
                    .collect::<Result<Vec<_>, crate::exactnum::ArithError>>()
                    .map_err(StateError::from)?;
                SparseState::from_terms(width, next)?
            }
        };
        Ok(out)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "H {q}"),
            Gate::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
            Gate::Cp { control, target } => write!(f, "CP {control} {target}"),
        }
    }
}

/// A fixed-width register and a gate list applied left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Circuit {
    width: u32,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(width: u32, gates: Vec<Gate>) -> Result<Circuit, CircuitError> {
        if width == 0 || width > MAX_QUBITS {
            return Err(StateError::BadWidth(width).into());
        }
        for g in &gates {
            g.validate(width)?;
        }
        Ok(Circuit { width, gates })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn hadamard_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_hadamard()).count()
    }

    pub fn count(&self, name: &str) -> usize {
        self.gates.iter().filter(|g| g.name() == name).count()
    }

    /// Runs the circuit on an arbitrary input state.
    pub fn apply(&self, s: &SparseState) -> Result<SparseState, CircuitError> {
        if s.qubits() != self.width {
            return Err(CircuitError::WidthMismatch { circuit: self.width, state: s.qubits() });
        }
        self.gates.iter().try_fold(s.clone(), |acc, g| g.apply(&acc))
    }

    /// Runs the circuit on the computational basis state `input`.
    pub fn simulate(&self, input: BasisIndex) -> Result<SparseState, CircuitError> {
        self.apply(&SparseState::basis_state(self.width, input)?)
    }
}

fn syntax(line: usize, message: impl Into<String>) -> CircuitError {
    CircuitError::Syntax { line, message: message.into() }
}

fn parse_operand(tok: Option<&str>, line: usize) -> Result<u32, CircuitError> {
    let tok = tok.ok_or_else(|| syntax(line, "missing operand"))?;
    tok.parse().map_err(|_| syntax(line, format!("bad operand {tok:?}")))
}

impl FromStr for Circuit {
    type Err = CircuitError;

    fn from_str(text: &str) -> Result<Circuit, CircuitError> {
        let mut width: Option<u32> = None;
        let mut gates = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let mut toks = body.split_whitespace();
            let head = toks.next().expect("non-empty line");
            let Some(w) = width else {
                if head != "qubits" {
                    return Err(syntax(line, "expected header \"qubits N\""));
                }
                let w = parse_operand(toks.next(), line)?;
                if w == 0 || w > MAX_QUBITS {
                    return Err(syntax(line, format!("qubit count {w} outside 1..={MAX_QUBITS}")));
                }
                if toks.next().is_some() {
                    return Err(syntax(line, "trailing tokens"));
                }
                width = Some(w);
                continue;
            };
            let gate = match head {
                "H" => Gate::H(parse_operand(toks.next(), line)?),
                "CNOT" => {
                    Gate::Cnot { control: parse_operand(toks.next(), line)?, target: parse_operand(toks.next(), line)? }
                }
                "CP" => {
                    Gate::Cp { control: parse_operand(toks.next(), line)?, target: parse_operand(toks.next(), line)? }
                }
                "qubits" => return Err(syntax(line, "repeated header")),
                other => return Err(syntax(line, format!("unknown gate {other:?}"))),
            };
            if toks.next().is_some() {
                return Err(syntax(line, "trailing tokens"));
            }
            gate.validate(w).map_err(|e| syntax(line, e.to_string()))?;
            gates.push(gate);
        }
        let width = width.ok_or_else(|| syntax(text.lines().count().max(1), "missing header \"qubits N\""))?;
        Circuit::new(width, gates)
    }
}

impl fmt::Display for Circuit {
    /// The text format; `parse` inverts it.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.width)?;
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Largest √2 exponent among the amplitudes of `s`.
pub fn max_half_pow(s: &SparseState) -> u32 {
    s.terms().iter().map(|(_, a)| a.half_pow()).max().unwrap_or(0)
}
