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

//! Recursive construction of Bell gems.
//!
//! Level 1 is the Bell basis `[Φ⁺, Φ⁻, Ψ⁺, Ψ⁻]` on 2 qubits. Level `n` lives on
//! `2^n` qubits and is built from two copies of level `n - 1` with four
//! entangler maps:
//!
//! | map | output                 |
//! |-----|------------------------|
//! | P   | `(a⊗a + b⊗b)/√2`       |
//! | N   | `(a⊗a − b⊗b)/√2`       |
//! | S   | `(a⊗b + b⊗a)/√2`       |
//! | A   | `(a⊗b − b⊗a)/√2`       |
//!
//! P and N are applied to the disjoint pairs of a [`Pairing`] of the
//! predecessor elements; S and A to every pair `i < j`.
//!
//! Canonical order of a successor gem with predecessor `g₀..g_{d'-1}`:
//! `P(g₀,g₁), N(g₀,g₁), P(g₂,g₃), N(g₂,g₃), …` followed by
//! `S(gᵢ,gⱼ), A(gᵢ,gⱼ)` for `i < j` in lexicographic order.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exactnum::ExactAmp;
use crate::qstate::{BasisIndex, Phase, SparseState, StateError};

/// Highest level that can be generated. Level 5 would need 32-qubit states and
/// 2^32 elements.
pub const MAX_LEVEL: u32 = 4;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GemError {
    #[error("level exceeds supported range: {0} is not in 1..={MAX_LEVEL}")]
    LevelOutOfRange(u32),
    #[error("entangler map inputs are equal up to a global phase")]
    IdenticalInputs,
    #[error("entangler map input is not normalized")]
    NotNormalized,
    #[error("pairing does not partition {0} predecessor elements")]
    BadPairing(usize),
    #[error("element index {index} out of range for a gem of {len} elements")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("e-label {0} is outside 1..=16")]
    LabelOutOfRange(u32),
    #[error("e-label {label} does not match canonical element {index} up to phase")]
    LabelMismatch { label: u32, index: usize },
    #[error(transparent)]
    State(#[from] StateError),
}

/// Recursion level `n`: `2^n` qubits, `2^(2^n)` elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GemLevel(u32);

impl GemLevel {
    pub fn new(n: u32) -> Result<GemLevel, GemError> {
        if (1..=MAX_LEVEL).contains(&n) {
            Ok(GemLevel(n))
        } else {
            Err(GemError::LevelOutOfRange(n))
        }
    }

    pub fn n(self) -> u32 {
        self.0
    }

    pub fn qubits(self) -> u32 {
        1 << self.0
    }

    pub fn dimension(self) -> usize {
        1 << self.qubits()
    }
}

/// `2^(2^n)`, or `None` once it no longer fits in 128 bits (n ≥ 7).
pub fn expected_cardinality(n: u32) -> Option<u128> {
    let qubits = 1u32.checked_shl(n)?;
    1u128.checked_shl(qubits)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EntanglerMap {
    P,
    N,
    S,
    A,
}

impl EntanglerMap {
    /// Maps P and N produce the `|ii⟩ ± |jj⟩` form; S and A the `|ij⟩ ± |ji⟩` form.
    pub fn is_diagonal_form(self) -> bool {
        matches!(self, EntanglerMap::P | EntanglerMap::N)
    }

    pub fn apply(self, a: &SparseState, b: &SparseState) -> Result<SparseState, GemError> {
        if a.qubits() != b.qubits() {
            return Err(StateError::WidthMismatch(a.qubits(), b.qubits()).into());
        }
        if !a.is_normalized() || !b.is_normalized() {
            return Err(GemError::NotNormalized);
        }
        if a.equal_up_to_global_phase(b).is_some() {
            return Err(GemError::IdenticalInputs);
        }
        let (first, second) = match self {
            EntanglerMap::P | EntanglerMap::N => (a.tensor(a)?, b.tensor(b)?),
            EntanglerMap::S | EntanglerMap::A => (a.tensor(b)?, b.tensor(a)?),
        };
        let sign = match self {
            EntanglerMap::P | EntanglerMap::S => ExactAmp::ONE,
            EntanglerMap::N | EntanglerMap::A => ExactAmp::MINUS_ONE,
        };
        Ok(first.add_scaled(&second, sign)?.scale(ExactAmp::FRAC_1_SQRT_2)?)
    }
}

pub fn map_p(a: &SparseState, b: &SparseState) -> Result<SparseState, GemError> {
    EntanglerMap::P.apply(a, b)
}

pub fn map_n(a: &SparseState, b: &SparseState) -> Result<SparseState, GemError> {
    EntanglerMap::N.apply(a, b)
}

pub fn map_s(a: &SparseState, b: &SparseState) -> Result<SparseState, GemError> {
    EntanglerMap::S.apply(a, b)
}

pub fn map_a(a: &SparseState, b: &SparseState) -> Result<SparseState, GemError> {
    EntanglerMap::A.apply(a, b)
}

/// Which predecessor elements an element was built from, and how.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub map: EntanglerMap,
    pub left: usize,
    pub right: usize,
}

impl fmt::Display for Provenance {
    /// `P(0,1)`: map name and predecessor indices.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({},{})", self.map, self.left, self.right)
    }
}

/// Disjoint pairs of predecessor indices used by maps P and N.
///
/// Must partition the predecessor set: `(|ii⟩+|jj⟩)` and `(|ii⟩+|kk⟩)` overlap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing(Vec<(usize, usize)>);

impl Pairing {
    /// `(0,1), (2,3), …`
    pub fn consecutive(len: usize) -> Pairing {
        Pairing((0..len / 2).map(|m| (2 * m, 2 * m + 1)).collect())
    }

    pub fn new(pairs: Vec<(usize, usize)>, len: usize) -> Result<Pairing, GemError> {
        let mut seen = vec![false; len];
        for &(i, j) in &pairs {
            for k in [i, j] {
                if k >= len || std::mem::replace(&mut seen[k], true) {
                    return Err(GemError::BadPairing(len));
                }
            }
        }
        if pairs.len() * 2 != len {
            return Err(GemError::BadPairing(len));
        }
        Ok(Pairing(pairs))
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.0
    }
}

/// A fully materialized gem.
#[derive(Clone, Debug)]
pub struct Gem {
    level: GemLevel,
    elements: Vec<SparseState>,
    provenance: Vec<Option<Provenance>>,
}

fn sqrt_half(sign: i64) -> ExactAmp {
    ExactAmp::new(sign, 0, 1)
}

/// The Bell basis `[Φ⁺, Φ⁻, Ψ⁺, Ψ⁻]`.
pub fn bell_basis() -> Gem {
    let bell = |a: u64, b: u64, sign: i64| {
        SparseState::from_terms(2, [(BasisIndex(a), sqrt_half(1)), (BasisIndex(b), sqrt_half(sign))])
            .expect("two-qubit Bell state")
    };
    Gem {
        level: GemLevel(1),
        elements: vec![bell(0b00, 0b11, 1), bell(0b00, 0b11, -1), bell(0b01, 0b10, 1), bell(0b01, 0b10, -1)],
        provenance: vec![None; 4],
    }
}

impl Gem {
    /// The canonical gem at level `n`.
    pub fn generate(n: u32) -> Result<Gem, GemError> {
        let level = GemLevel::new(n)?;
        if level.n() == 1 {
            return Ok(bell_basis());
        }
        LazyGem::canonical(n)?.materialize()
    }

    pub fn level(&self) -> GemLevel {
        self.level
    }

    pub fn elements(&self) -> &[SparseState] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn provenance(&self, index: usize) -> Option<Provenance> {
        self.provenance.get(index).copied().flatten()
    }

    pub fn verify_orthonormal(&self) -> OrthonormalityReport {
        verify_orthonormal(&self.elements, Some(self.level))
    }
}

/// Rank of `(i, j)`, `i < j < len`, in lexicographic order, inverted.
fn unrank_pair(mut rank: usize, len: usize) -> (usize, usize) {
    for i in 0..len {
        let row = len - 1 - i;
        if rank < row {
            return (i, i + 1 + rank);
        }
        rank -= row;
    }
    unreachable!("pair rank out of range")
}

/// A successor gem whose elements are built on demand from a materialized
/// predecessor. This is how level 4 (65 536 elements on 16 qubits) is checked
/// without holding it in memory.
#[derive(Clone, Debug)]
pub struct LazyGem {
    level: GemLevel,
    predecessor: Gem,
    pairing: Pairing,
}

impl LazyGem {
    pub fn new(predecessor: Gem, pairing: Pairing) -> Result<LazyGem, GemError> {
        let level = GemLevel::new(predecessor.level.n() + 1)?;
        // re-validate: the pairing may have been built for another size
        let pairing = Pairing::new(pairing.0, predecessor.len())?;
        Ok(LazyGem { level, predecessor, pairing })
    }

    /// Canonical level-`n` gem, `n ≥ 2`.
    pub fn canonical(n: u32) -> Result<LazyGem, GemError> {
        GemLevel::new(n)?;
        if n < 2 {
            return Err(GemError::LevelOutOfRange(n));
        }
        let pred = Gem::generate(n - 1)?;
        let pairing = Pairing::consecutive(pred.len());
        LazyGem::new(pred, pairing)
    }

    pub fn level(&self) -> GemLevel {
        self.level
    }

    pub fn predecessor(&self) -> &Gem {
        &self.predecessor
    }

    pub fn len(&self) -> usize {
        let d = self.predecessor.len();
        d + d * (d - 1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn recipe(&self, index: usize) -> Result<Provenance, GemError> {
        let d = self.predecessor.len();
        if index >= self.len() {
            return Err(GemError::IndexOutOfRange { index, len: self.len() });
        }
        let plus = index.is_multiple_of(2);
        if index < d {
            let (left, right) = self.pairing.0[index / 2];
            let map = if plus { EntanglerMap::P } else { EntanglerMap::N };
            Ok(Provenance { map, left, right })
        } else {
            let (left, right) = unrank_pair((index - d) / 2, d);
            let map = if plus { EntanglerMap::S } else { EntanglerMap::A };
            Ok(Provenance { map, left, right })
        }
    }

    pub fn element(&self, index: usize) -> Result<SparseState, GemError> {
        let r = self.recipe(index)?;
        let g = self.predecessor.elements();
        r.map.apply(&g[r.left], &g[r.right])
    }

    pub fn materialize(&self) -> Result<Gem, GemError> {
        let provenance = (0..self.len()).map(|i| self.recipe(i).map(Some)).collect::<Result<Vec<_>, _>>()?;
        let elements = (0..self.len()).into_par_iter().map(|i| self.element(i)).collect::<Result<Vec<_>, _>>()?;
        Ok(Gem { level: self.level, elements, provenance })
    }

    /// Gram entries for `samples` random off-diagonal pairs plus the diagonal of
    /// `samples` random elements. Deterministic for a given seed.
    pub fn verify_orthonormal_sampled(&self, samples: usize, seed: u64) -> Result<OrthonormalityReport, GemError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let len = self.len();
        let mut entries: Vec<(usize, usize)> = Vec::with_capacity(2 * samples);
        for _ in 0..samples {
            let i = rng.gen_range(0..len);
            entries.push((i, i));
        }
        for _ in 0..samples {
            let i = rng.gen_range(0..len);
            let mut j = rng.gen_range(0..len - 1);
            if j >= i {
                j += 1;
            }
            entries.push((i.min(j), i.max(j)));
        }
        let checked = entries
            .par_iter()
            .map(|&(i, j)| {
                let a = self.element(i)?;
                let b = if i == j { a.clone() } else { self.element(j)? };
                Ok((i, j, gram_entry(&a, &b), equal_magnitudes(&a)))
            })
            .collect::<Result<Vec<_>, GemError>>()?;
        let mut report = OrthonormalityReport::new(len, Some(self.level), "sampled");
        for (i, j, value, uniform) in checked {
            report.record(i, j, value);
            if i == j && !uniform {
                report.unequal_magnitude_elements.push(i);
            }
        }
        report.unequal_magnitude_elements.sort_unstable();
        report.unequal_magnitude_elements.dedup();
        report.finish();
        Ok(report)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GramViolation {
    pub row: usize,
    pub col: usize,
    /// The exact entry, or `None` if it could not be computed.
    pub value: Option<ExactAmp>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrthonormalityReport {
    pub level: Option<u32>,
    pub mode: &'static str,
    pub elements: usize,
    pub expected_cardinality: Option<u128>,
    pub cardinality_ok: bool,
    pub inner_products: u64,
    pub violations: Vec<GramViolation>,
    /// Elements (among those inspected) whose nonzero amplitudes do not all
    /// share one magnitude. Measured, not required.
    pub unequal_magnitude_elements: Vec<usize>,
    pub passed: bool,
}

impl OrthonormalityReport {
    fn new(elements: usize, level: Option<GemLevel>, mode: &'static str) -> Self {
        let expected = level.and_then(|l| expected_cardinality(l.n()));
        OrthonormalityReport {
            level: level.map(GemLevel::n),
            mode,
            elements,
            expected_cardinality: expected,
            cardinality_ok: expected.is_none_or(|e| e == elements as u128),
            inner_products: 0,
            violations: Vec::new(),
            unequal_magnitude_elements: Vec::new(),
            passed: false,
        }
    }

    fn record(&mut self, row: usize, col: usize, value: Option<ExactAmp>) {
        self.inner_products += 1;
        let want = if row == col { ExactAmp::ONE } else { ExactAmp::ZERO };
        if value != Some(want) {
            self.violations.push(GramViolation { row, col, value });
        }
    }

    fn finish(&mut self) {
        self.passed = self.cardinality_ok && self.violations.is_empty();
    }
}

fn gram_entry(a: &SparseState, b: &SparseState) -> Option<ExactAmp> {
    a.inner_product(b).ok()
}

fn equal_magnitudes(s: &SparseState) -> bool {
    let mut mags = s.terms().iter().map(|(_, a)| a.abs_sq());
    match mags.next() {
        Some(first) => mags.all(|m| m == first),
        None => true,
    }
}

/// Computes every Gram entry `⟨gᵢ|gⱼ⟩`, `i ≤ j`, exactly. When `level` is given
/// the element count is also checked against `2^(2^n)`.
pub fn verify_orthonormal(elements: &[SparseState], level: Option<GemLevel>) -> OrthonormalityReport {
    let mut report = OrthonormalityReport::new(elements.len(), level, "exhaustive");
    let rows: Vec<Vec<(usize, usize, Option<ExactAmp>)>> = (0..elements.len())
        .into_par_iter()
        .map(|i| (i..elements.len()).map(|j| (i, j, gram_entry(&elements[i], &elements[j]))).collect())
        .collect();
    for (i, j, value) in rows.into_iter().flatten() {
        report.record(i, j, value);
    }
    report.unequal_magnitude_elements =
        elements.iter().enumerate().filter(|(_, s)| !equal_magnitudes(s)).map(|(i, _)| i).collect();
    report.finish();
    report
}

/// Rebuilds every element of a successor gem from its recorded provenance
/// and checks it reproduces exactly. Returns the indices that do not.
pub fn check_provenance(gem: &Gem, predecessor: &Gem) -> Result<Vec<usize>, GemError> {
    let g = predecessor.elements();
    let mut bad = Vec::new();
    for (i, element) in gem.elements().iter().enumerate() {
        let Some(r) = gem.provenance(i) else {
            bad.push(i);
            continue;
        };
        if &r.map.apply(&g[r.left], &g[r.right])? != element {
            bad.push(i);
        }
    }
    Ok(bad)
}

/// The Bell states by conventional name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bell {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl Bell {
    pub const ALL: [Bell; 4] = [Bell::PhiPlus, Bell::PhiMinus, Bell::PsiPlus, Bell::PsiMinus];

    pub fn name(self) -> &'static str {
        match self {
            Bell::PhiPlus => "Phi+",
            Bell::PhiMinus => "Phi-",
            Bell::PsiPlus => "Psi+",
            Bell::PsiMinus => "Psi-",
        }
    }

    /// Position in [`bell_basis`].
    pub fn index(self) -> usize {
        self as usize
    }
}

/// Each row `[a, b, c, d]` gives the pair `e_{2m-1}, e_{2m} = (a⊗b ± c⊗d)/√2`.
const E_LABEL_ROWS: [[Bell; 4]; 8] = {
    use Bell::*;
    [
        [PhiPlus, PhiPlus, PhiMinus, PhiMinus],
        [PsiPlus, PsiPlus, PsiMinus, PsiMinus],
        [PhiPlus, PhiMinus, PhiMinus, PhiPlus],
        [PsiPlus, PsiMinus, PsiMinus, PsiPlus],
        [PsiPlus, PhiMinus, PhiMinus, PsiPlus],
        [PhiPlus, PsiMinus, PsiMinus, PhiPlus],
        [PhiPlus, PsiPlus, PsiPlus, PhiPlus],
        [PsiMinus, PhiMinus, PhiMinus, PsiMinus],
    ]
};

/// Claimed `(canonical index, phase)` for `e₁..e₁₆`, with `e_k = phase · g_index`.
const E_LABEL_CLAIMS: [(usize, Phase); 16] = [
    (0, Phase::ONE),
    (1, Phase::ONE),
    (2, Phase::ONE),
    (3, Phase::ONE),
    (4, Phase::ONE),
    (5, Phase::ONE),
    (14, Phase::ONE),
    (15, Phase::ONE),
    (10, Phase::ONE),
    (11, Phase::MINUS_ONE),
    (8, Phase::ONE),
    (9, Phase::ONE),
    (6, Phase::ONE),
    (7, Phase::ONE),
    (12, Phase::ONE),
    (13, Phase::MINUS_ONE),
];

/// The labelled level-2 element `e_k` built from its Bell-product expression.
pub fn e_label_state(k: u32) -> Result<SparseState, GemError> {
    if !(1..=16).contains(&k) {
        return Err(GemError::LabelOutOfRange(k));
    }
    let bell = bell_basis();
    let g = |b: Bell| &bell.elements()[b.index()];
    let [a, b, c, d] = E_LABEL_ROWS[(k as usize - 1) / 2];
    let sign = if k % 2 == 1 { ExactAmp::ONE } else { ExactAmp::MINUS_ONE };
    let first = g(a).tensor(g(b))?;
    let second = g(c).tensor(g(d))?;
    Ok(first.add_scaled(&second, sign)?.scale(ExactAmp::FRAC_1_SQRT_2)?)
}

/// Canonical position and phase of `e_k` in `Gem::generate(2)`.
pub fn e_label_index(k: u32) -> Result<(usize, Phase), GemError> {
    if !(1..=16).contains(&k) {
        return Err(GemError::LabelOutOfRange(k));
    }
    Ok(E_LABEL_CLAIMS[k as usize - 1])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ELabelEntry {
    pub label: u32,
    pub index: usize,
    pub phase: Phase,
}

/// The full `e₁..e₁₆` table, with every claimed pairing checked against the
/// generated level-2 gem.
pub fn e_label_table(level2: &Gem) -> Result<Vec<ELabelEntry>, GemError> {
    (1..=16)
        .map(|label| {
            let (index, phase) = e_label_index(label)?;
            let e = e_label_state(label)?;
            let found = level2.elements().get(index).and_then(|g| e.equal_up_to_global_phase(g));
            if found != Some(phase) {
                return Err(GemError::LabelMismatch { label, index });
            }
            Ok(ELabelEntry { label, index, phase })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(terms: &[(&str, i64)]) -> SparseState {
        // amplitudes ±1/√2
        let w = terms[0].0.len() as u32;
        SparseState::from_terms(
            w,
            terms.iter().map(|(b, s)| (BasisIndex::parse_bitstring(b).unwrap().0, sqrt_half(*s))),
        )
        .unwrap()
    }

    #[test]
    fn bell_basis_matches_definition() {
        let g = bell_basis();
        assert_eq!(g.elements()[0], st(&[("00", 1), ("11", 1)]));
        assert_eq!(g.elements()[1], st(&[("00", 1), ("11", -1)]));
        assert_eq!(g.elements()[2], st(&[("01", 1), ("10", 1)]));
        assert_eq!(g.elements()[3], st(&[("01", 1), ("10", -1)]));
    }

    #[test]
    fn map_examples() {
        let g = bell_basis();
        let (pp, pm) = (&g.elements()[0], &g.elements()[1]);
        assert_eq!(map_p(pp, pm).unwrap(), st(&[("0000", 1), ("1111", 1)]));
        assert_eq!(map_n(pp, pm).unwrap(), st(&[("0011", 1), ("1100", 1)]));
        assert_eq!(map_a(pp, pp), Err(GemError::IdenticalInputs));
        let minus = pp.scale(ExactAmp::MINUS_ONE).unwrap();
        assert_eq!(map_a(pp, &minus), Err(GemError::IdenticalInputs));
        let unnormalized = pp.scale(ExactAmp::from_int(2)).unwrap();
        assert_eq!(map_s(pp, &unnormalized), Err(GemError::NotNormalized));
        let one = SparseState::basis_state(1, BasisIndex(0)).unwrap();
        assert!(matches!(map_p(pp, &one), Err(GemError::State(StateError::WidthMismatch(2, 1)))));
    }

    #[test]
    fn map_identities_on_bell_pairs() {
        let g = bell_basis();
        let e = g.elements();
        for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    continue;
                }
                let (a, b) = (&e[i], &e[j]);
                let ip = |x: &SparseState, y: &SparseState| x.inner_product(y).unwrap();
                assert_eq!(ip(&map_p(a, b).unwrap(), &map_n(a, b).unwrap()), ExactAmp::ZERO);
                assert_eq!(ip(&map_s(a, b).unwrap(), &map_a(a, b).unwrap()), ExactAmp::ZERO);
                assert_eq!(map_s(a, b).unwrap(), map_s(b, a).unwrap());
                assert_eq!(map_a(a, b).unwrap(), map_a(b, a).unwrap().scale(ExactAmp::MINUS_ONE).unwrap());
            }
        }
    }

    #[test]
    fn cardinalities() {
        assert_eq!(expected_cardinality(1), Some(4));
        assert_eq!(expected_cardinality(2), Some(16));
        assert_eq!(expected_cardinality(3), Some(256));
        assert_eq!(expected_cardinality(6), Some(1 << 64));
        assert_eq!(expected_cardinality(7), None);
        for n in 1..=3 {
            assert_eq!(Gem::generate(n).unwrap().len() as u128, expected_cardinality(n).unwrap());
        }
    }

    #[test]
    fn level_cap_is_enforced() {
        assert_eq!(GemLevel::new(5), Err(GemError::LevelOutOfRange(5)));
        assert_eq!(GemLevel::new(0), Err(GemError::LevelOutOfRange(0)));
        assert!(matches!(Gem::generate(5), Err(GemError::LevelOutOfRange(5))));
        assert!(matches!(LazyGem::canonical(1), Err(GemError::LevelOutOfRange(1))));
    }

    #[test]
    fn level_two_order() {
        let g = Gem::generate(2).unwrap();
        let kinds: Vec<_> = (0..16).map(|i| g.provenance(i).unwrap()).collect();
        assert_eq!(kinds[0], Provenance { map: EntanglerMap::P, left: 0, right: 1 });
        assert_eq!(kinds[3], Provenance { map: EntanglerMap::N, left: 2, right: 3 });
        assert_eq!(kinds[4], Provenance { map: EntanglerMap::S, left: 0, right: 1 });
        assert_eq!(kinds[15], Provenance { map: EntanglerMap::A, left: 2, right: 3 });
    }

    #[test]
    fn unrank_pair_enumerates_lexicographically() {
        let mut expected = Vec::new();
        for i in 0..7 {
            for j in i + 1..7 {
                expected.push((i, j));
            }
        }
        let got: Vec<_> = (0..expected.len()).map(|r| unrank_pair(r, 7)).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn e_label_examples() {
        assert_eq!(e_label_state(1).unwrap(), st(&[("0000", 1), ("1111", 1)]));
        assert_eq!(e_label_state(4).unwrap(), st(&[("0110", 1), ("1001", 1)]));
        assert_eq!(e_label_state(7).unwrap(), st(&[("0101", 1), ("1010", -1)]));
        assert_eq!(e_label_index(0), Err(GemError::LabelOutOfRange(0)));
        assert_eq!(e_label_index(17), Err(GemError::LabelOutOfRange(17)));
        let table = e_label_table(&Gem::generate(2).unwrap()).unwrap();
        let mut indices: Vec<_> = table.iter().map(|e| e.index).collect();
        indices.sort_unstable();
        assert_eq!(indices, (0..16).collect::<Vec<_>>());
    }

    #[test]
    fn duplicated_element_is_caught() {
        let g = bell_basis();
        let mut list = g.elements().to_vec();
        list.push(list[2].clone());
        let report = verify_orthonormal(&list, None);
        assert!(!report.passed);
        assert_eq!(report.violations, vec![GramViolation { row: 2, col: 4, value: Some(ExactAmp::ONE) }]);
    }

    #[test]
    fn bell_report() {
        let report = bell_basis().verify_orthonormal();
        assert!(report.passed);
        assert_eq!(report.inner_products, 10);
        assert_eq!(report.elements, 4);
    }

    #[test]
    fn explicit_pairing() {
        let pairing = Pairing::new(vec![(0, 2), (1, 3)], 4).unwrap();
        let lazy = LazyGem::new(bell_basis(), pairing).unwrap();
        assert!(lazy.materialize().unwrap().verify_orthonormal().passed);
        assert_eq!(Pairing::new(vec![(0, 1), (1, 2)], 4), Err(GemError::BadPairing(4)));
        assert_eq!(Pairing::new(vec![(0, 1)], 4), Err(GemError::BadPairing(4)));
        assert_eq!(Pairing::new(vec![(0, 1), (2, 4)], 4), Err(GemError::BadPairing(4)));
    }

    #[test]
    fn overlapping_diagonal_pairs_are_not_orthogonal() {
        // (|ii⟩+|jj⟩) and (|ii⟩+|kk⟩) share the |ii⟩ component
        let g = bell_basis();
        let e = g.elements();
        let x = map_p(&e[0], &e[1]).unwrap();
        let y = map_p(&e[0], &e[2]).unwrap();
        assert_eq!(x.inner_product(&y).unwrap(), ExactAmp::new(1, 0, 2));
    }
}
