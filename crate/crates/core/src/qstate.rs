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

//! Sparse exact state vectors.
//!
//! Basis labels follow the ket notation directly: qubit 1 is the leftmost
//! symbol and the most significant bit, so `|1011⟩` is index 11.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{ArithError, DyadicRational, ExactAmp};

/// Widest register a [`BasisIndex`] can address.
pub const MAX_QUBITS: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("qubit count {0} is outside 1..={MAX_QUBITS}")]
    BadWidth(u32),
    #[error("basis index {index} out of range for {qubits} qubits")]
    IndexOutOfRange { index: u64, qubits: u32 },
    #[error("qubit counts differ: {0} vs {1}")]
    WidthMismatch(u32, u32),
    #[error("malformed bitstring {0:?}")]
    BadBitstring(String),
    #[error("basis {0} listed twice")]
    DuplicateBasis(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A computational basis label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BasisIndex(pub u64);

impl BasisIndex {
    /// Value of qubit `q` (1-based, leftmost is 1) in a register of `width` qubits.
    pub fn bit(self, q: u32, width: u32) -> bool {
        (self.0 >> (width - q)) & 1 == 1
    }

    pub fn flip(self, q: u32, width: u32) -> BasisIndex {
        BasisIndex(self.0 ^ (1 << (width - q)))
    }

    pub fn in_range(self, qubits: u32) -> bool {
        qubits >= 64 || self.0 >> qubits == 0
    }

    /// Renders the label as `qubits` characters, qubit 1 first.
    pub fn to_bitstring(self, qubits: u32) -> String {
        (1..=qubits).map(|q| if self.bit(q, qubits) { '1' } else { '0' }).collect()
    }

    /// Parses a `0`/`1` string; the register width is the string length.
    pub fn parse_bitstring(s: &str) -> Result<(BasisIndex, u32), StateError> {
        let bad = || StateError::BadBitstring(s.to_string());
        if s.is_empty() || s.len() > MAX_QUBITS as usize {
            return Err(bad());
        }
        let mut value = 0u64;
        for c in s.chars() {
            let bit = match c {
                '0' => 0,
                '1' => 1,
                _ => return Err(bad()),
            };
            value = (value << 1) | bit;
        }
        Ok((BasisIndex(value), s.len() as u32))
    }
}

/// A unit of the amplitude ring: `ω^k` with `ω = (1+i)/√2`, `k` in `0..8`.
///
/// These are exactly the global phases a {H, CNOT, CP(π/2)} circuit can produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(2);
    pub const MINUS_ONE: Phase = Phase(4);
    pub const MINUS_I: Phase = Phase(6);

    pub fn from_eighth_turns(k: u8) -> Phase {
        Phase(k % 8)
    }

    pub fn eighth_turns(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = Phase> {
        (0..8).map(Phase)
    }

    pub fn amp(self) -> ExactAmp {
        match self.0 {
            0 => ExactAmp::new(1, 0, 0),
            1 => ExactAmp::new(1, 1, 1),
            2 => ExactAmp::new(0, 1, 0),
            3 => ExactAmp::new(-1, 1, 1),
            4 => ExactAmp::new(-1, 0, 0),
            5 => ExactAmp::new(-1, -1, 1),
            6 => ExactAmp::new(0, -1, 0),
            _ => ExactAmp::new(1, -1, 1),
        }
    }

    pub fn inverse(self) -> Phase {
        Phase((8 - self.0) % 8)
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 8)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.0 {
            0 => "1",
            1 => "(1+i)/sqrt2",
            2 => "i",
            3 => "(-1+i)/sqrt2",
            4 => "-1",
            5 => "(-1-i)/sqrt2",
            6 => "-i",
            _ => "(1-i)/sqrt2",
        };
        f.write_str(s)
    }
}

impl Serialize for Phase {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A pure state as a sorted list of nonzero exact amplitudes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseState {
    qubits: u32,
    terms: Vec<(BasisIndex, ExactAmp)>,
}

fn check_width(qubits: u32) -> Result<(), StateError> {
    if qubits == 0 || qubits > MAX_QUBITS {
        Err(StateError::BadWidth(qubits))
    } else {
        Ok(())
    }
}

fn same_width(a: &SparseState, b: &SparseState) -> Result<(), StateError> {
    if a.qubits != b.qubits {
        Err(StateError::WidthMismatch(a.qubits, b.qubits))
    } else {
        Ok(())
    }
}

impl SparseState {
    pub fn zero(qubits: u32) -> Result<Self, StateError> {
        check_width(qubits)?;
        Ok(SparseState { qubits, terms: Vec::new() })
    }

    pub fn basis_state(qubits: u32, index: BasisIndex) -> Result<Self, StateError> {
        check_width(qubits)?;
        if !index.in_range(qubits) {
            return Err(StateError::IndexOutOfRange { index: index.0, qubits });
        }
        Ok(SparseState { qubits, terms: vec![(index, ExactAmp::ONE)] })
    }

    /// Collects terms, summing repeated indices and dropping zeros.
    pub fn from_terms<I>(qubits: u32, terms: I) -> Result<Self, StateError>
    where
        I: IntoIterator<Item = (BasisIndex, ExactAmp)>,
    {
        check_width(qubits)?;
        let mut acc: BTreeMap<BasisIndex, ExactAmp> = BTreeMap::new();
        for (index, amp) in terms {
            if !index.in_range(qubits) {
                return Err(StateError::IndexOutOfRange { index: index.0, qubits });
            }
            let slot = acc.entry(index).or_default();
            *slot = slot.checked_add(amp)?;
        }
        let terms = acc.into_iter().filter(|(_, a)| !a.is_zero()).collect();
        Ok(Self::from_sorted(qubits, terms))
    }

    /// Wraps terms that are already sorted by index, unique, and nonzero.
    fn from_sorted(qubits: u32, terms: Vec<(BasisIndex, ExactAmp)>) -> Self {
        let s = SparseState { qubits, terms };
        debug_assert!(s.audit().is_ok(), "{:?}", s.audit());
        s
    }

    pub fn qubits(&self) -> u32 {
        self.qubits
    }

    pub fn terms(&self) -> &[(BasisIndex, ExactAmp)] {
        &self.terms
    }

    /// Number of stored (nonzero) terms.
    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn amplitude(&self, index: BasisIndex) -> ExactAmp {
        self.terms.binary_search_by_key(&index, |t| t.0).map(|i| self.terms[i].1).unwrap_or(ExactAmp::ZERO)
    }

    /// Checks the representation invariants: sorted unique in-range indices,
    /// canonical nonzero amplitudes.
    pub fn audit(&self) -> Result<(), String> {
        for w in self.terms.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(format!("terms not strictly sorted at {:?}", w[1].0));
            }
        }
        for (index, amp) in &self.terms {
            if !index.in_range(self.qubits) {
                return Err(format!("index {} out of range", index.0));
            }
            if amp.is_zero() {
                return Err(format!("stored zero amplitude at {}", index.0));
            }
            if !amp.is_canonical() {
                return Err(format!("non-canonical amplitude at {}", index.0));
            }
        }
        Ok(())
    }

    /// `a ⊗ b`, with `a` on the high-order (leftmost) qubits.
    pub fn tensor(&self, other: &SparseState) -> Result<SparseState, StateError> {
        let qubits = self.qubits + other.qubits;
        check_width(qubits)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(x, a) in &self.terms {
            for &(y, b) in &other.terms {
                terms.push((BasisIndex((x.0 << other.qubits) | y.0), a.checked_mul(b)?));
            }
        }
        Ok(Self::from_sorted(qubits, terms))
    }

    pub fn scale(&self, c: ExactAmp) -> Result<SparseState, StateError> {
        if c.is_zero() {
            return SparseState::zero(self.qubits);
        }
        let terms =
            self.terms.iter().map(|&(i, a)| Ok((i, a.checked_mul(c)?))).collect::<Result<Vec<_>, ArithError>>()?;
        Ok(Self::from_sorted(self.qubits, terms))
    }

    pub fn scale_by_phase(&self, u: Phase) -> Result<SparseState, StateError> {
        self.scale(u.amp())
    }

    /// `self + c·other`, cancelling terms that sum to zero.
    pub fn add_scaled(&self, other: &SparseState, c: ExactAmp) -> Result<SparseState, StateError> {
        same_width(self, other)?;
        if c.is_zero() {
            return Ok(self.clone());
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let left = self.terms.get(i);
            let right = other.terms.get(j);
            match (left, right) {
                (Some(&(x, a)), Some(&(y, b))) if x == y => {
                    let sum = a.checked_add(b.checked_mul(c)?)?;
                    if !sum.is_zero() {
                        out.push((x, sum));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(&(x, a)), Some(&(y, _))) if x < y => {
                    out.push((x, a));
                    i += 1;
                }
                (Some(&(x, a)), None) => {
                    out.push((x, a));
                    i += 1;
                }
                (_, Some(&(y, b))) => {
                    out.push((y, b.checked_mul(c)?));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Ok(Self::from_sorted(self.qubits, out))
    }

    /// `⟨self|other⟩ = Σ conj(self_x)·other_x`.
    pub fn inner_product(&self, other: &SparseState) -> Result<ExactAmp, StateError> {
        same_width(self, other)?;
        let mut acc = ExactAmp::ZERO;
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (x, a) = self.terms[i];
            let (y, b) = other.terms[j];
            match x.cmp(&y) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc = acc.checked_add(a.conj().checked_mul(b)?)?;
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(acc)
    }

    /// Returns `u` with `self = u·other` when one exists in the unit group.
    /// States of different width, or with different supports, are never equal.
    pub fn equal_up_to_global_phase(&self, other: &SparseState) -> Option<Phase> {
        if self.qubits != other.qubits || self.terms.len() != other.terms.len() {
            return None;
        }
        let (Some(&(x0, a0)), Some(&(y0, b0))) = (self.terms.first(), other.terms.first()) else {
            // both zero
            return Some(Phase::ONE);
        };
        if x0 != y0 {
            return None;
        }
        let u = Phase::all().find(|u| u.amp().checked_mul(b0).ok() == Some(a0))?;
        let ua = u.amp();
        let all_match =
            self.terms.iter().zip(&other.terms).all(|(&(x, a), &(y, b))| x == y && ua.checked_mul(b).ok() == Some(a));
        all_match.then_some(u)
    }

    pub fn norm_sq(&self) -> Result<DyadicRational, StateError> {
        let mut acc = DyadicRational::ZERO;
        for (_, a) in &self.terms {
            acc = acc.checked_add(a.abs_sq())?;
        }
        Ok(acc)
    }

    pub fn is_normalized(&self) -> bool {
        matches!(self.norm_sq(), Ok(n) if n.is_one())
    }

    /// Picks the representative of `{u·self}` whose leading amplitude is least
    /// (in field order) among the eight units, returning it with the `u` used.
    pub fn phase_canonical(&self) -> Result<(Phase, SparseState), StateError> {
        let Some(&(_, lead)) = self.terms.first() else {
            return Ok((Phase::ONE, self.clone()));
        };
        let mut best: Option<(ExactAmp, Phase)> = None;
        for u in Phase::all() {
            let v = u.amp().checked_mul(lead)?;
            if best.is_none_or(|(b, _)| v < b) {
                best = Some((v, u));
            }
        }
        let (_, u) = best.expect("eight candidates");
        Ok((u, self.scale_by_phase(u)?))
    }
}

impl fmt::Display for SparseState {
    /// Ket notation, e.g. `1/√2|00⟩ + 1/√2|11⟩`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (i, a)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{a}|{}⟩", i.to_bitstring(self.qubits))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    amp: ExactAmp,
    basis: String,
}

#[derive(Serialize, Deserialize)]
struct StateRecord {
    qubits: u32,
    terms: Vec<TermRecord>,
}

impl Serialize for SparseState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        StateRecord {
            qubits: self.qubits,
            terms: self.terms.iter().map(|&(i, amp)| TermRecord { amp, basis: i.to_bitstring(self.qubits) }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparseState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rec = StateRecord::deserialize(d)?;
        SparseState::try_from(rec).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<StateRecord> for SparseState {
    type Error = StateError;

    fn try_from(rec: StateRecord) -> Result<Self, StateError> {
        check_width(rec.qubits)?;
        let mut seen = std::collections::BTreeSet::new();
        let mut terms = Vec::with_capacity(rec.terms.len());
        for t in rec.terms {
            let (index, width) = BasisIndex::parse_bitstring(&t.basis)?;
            if width != rec.qubits {
                return Err(StateError::BadBitstring(t.basis));
            }
            if !seen.insert(index) {
                return Err(StateError::DuplicateBasis(t.basis));
            }
            terms.push((index, t.amp));
        }
        SparseState::from_terms(rec.qubits, terms)
    }
}

impl FromStr for SparseState {
    type Err = serde_json::Error;

    /// Parses the JSON state-file format.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        serde_json::from_str(s)
    }
}
