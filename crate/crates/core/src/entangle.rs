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

//! Spin flip and the n-tangle `τ = |⟨ψ|ψ̃⟩|²`, `ψ̃ = σ_y^⊗n ψ*`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exactnum::DyadicRational;
use crate::gem::{Gem, GemError, LazyGem};
use crate::qstate::{BasisIndex, Phase, SparseState, StateError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EntangleError {
    #[error("state is not normalized (norm_sq = {0})")]
    NotNormalized(DyadicRational),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Gem(#[from] GemError),
}

/// An n-tangle value, exact and within `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TangleValue(DyadicRational);

impl TangleValue {
    pub fn value(self) -> DyadicRational {
        self.0
    }

    pub fn is_maximal(self) -> bool {
        self.0.is_one()
    }
}

impl std::fmt::Display for TangleValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// `σ_y^⊗n` applied to the entrywise conjugate of `s`.
///
/// With `σ_y|0⟩ = i|1⟩` and `σ_y|1⟩ = −i|0⟩`, each term maps as
/// `a|x⟩ ↦ i^n (−1)^{|x|} a* |x̄⟩`.
pub fn spin_flip(s: &SparseState) -> Result<SparseState, StateError> {
    let n = s.qubits();
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let terms = s
        .terms()
        .iter()
        .map(|&(x, a)| {
            // i^(n + 2·weight)
            let quarter_turns = (n + 2 * x.0.count_ones()) % 4;
            let mut amp = a.conj();
            for _ in 0..quarter_turns {
                amp = amp.checked_mul_i()?;
            }
            Ok((BasisIndex(!x.0 & mask), amp))
        })
        .collect::<Result<Vec<_>, StateError>>()?;
    SparseState::from_terms(n, terms)
}

/// Exact `|⟨s|spin_flip(s)⟩|²` for a normalized `s`.
pub fn n_tangle(s: &SparseState) -> Result<TangleValue, EntangleError> {
    let norm = s.norm_sq()?;
    if !norm.is_one() {
        return Err(EntangleError::NotNormalized(norm));
    }
    let overlap = s.inner_product(&spin_flip(s)?)?;
    Ok(TangleValue(overlap.abs_sq()))
}

#[derive(Clone, Debug, Serialize)]
pub struct ElementTangle {
    pub index: usize,
    /// Exact value, `p` or `p/2^q`.
    pub tau: String,
    pub tau_decimal: String,
    /// `u` with `spin_flip(element) = u·element`, when the element maps to itself.
    pub self_map_phase: Option<Phase>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TangleReport {
    pub level: u32,
    pub mode: &'static str,
    pub elements_checked: usize,
    pub elements: Vec<ElementTangle>,
    /// Indices with `τ ≠ 1`.
    pub non_maximal: Vec<usize>,
    /// Distinct self-map phases seen, with counts, in phase order.
    pub phase_counts: Vec<(Phase, usize)>,
    pub passed: bool,
}

fn element_tangle(index: usize, s: &SparseState) -> Result<ElementTangle, EntangleError> {
    let tau = n_tangle(s)?;
    let self_map_phase = spin_flip(s)?.equal_up_to_global_phase(s);
    Ok(ElementTangle { index, tau: tau.to_string(), tau_decimal: tau.value().to_decimal_string(), self_map_phase })
}

fn build_report(level: u32, mode: &'static str, rows: Vec<(ElementTangle, bool)>) -> TangleReport {
    let non_maximal: Vec<usize> = rows.iter().filter(|(_, max)| !max).map(|(e, _)| e.index).collect();
    let mut counts = std::collections::BTreeMap::<Phase, usize>::new();
    for (e, _) in &rows {
        if let Some(p) = e.self_map_phase {
            *counts.entry(p).or_default() += 1;
        }
    }
    TangleReport {
        level,
        mode,
        elements_checked: rows.len(),
        passed: non_maximal.is_empty(),
        non_maximal,
        phase_counts: counts.into_iter().collect(),
        elements: rows.into_iter().map(|(e, _)| e).collect(),
    }
}

/// n-tangle and spin-flip self-map phase of every element.
pub fn verify_theorem2(g: &Gem) -> Result<TangleReport, EntangleError> {
    let rows = g
        .elements()
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let row = element_tangle(i, s)?;
            let max = row.tau == "1";
            Ok((row, max))
        })
        .collect::<Result<Vec<_>, EntangleError>>()?;
    Ok(build_report(g.level().n(), "exhaustive", rows))
}

/// Same as [`verify_theorem2`] on `samples` distinct random elements, built on demand.
pub fn verify_theorem2_sampled(g: &LazyGem, samples: usize, seed: u64) -> Result<TangleReport, EntangleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = samples.min(g.len());
    let mut picked = std::collections::BTreeSet::new();
    while picked.len() < samples {
        picked.insert(rng.gen_range(0..g.len()));
    }
    let picked: Vec<usize> = picked.into_iter().collect();
    let rows = picked
        .par_iter()
        .map(|&i| {
            let row = element_tangle(i, &g.element(i)?)?;
            let max = row.tau == "1";
            Ok((row, max))
        })
        .collect::<Result<Vec<_>, EntangleError>>()?;
    Ok(build_report(g.level().n(), "sampled", rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::ExactAmp;
    use crate::gem::bell_basis;
    use proptest::prelude::*;

    fn ket(bits: &str) -> SparseState {
        let (i, w) = BasisIndex::parse_bitstring(bits).unwrap();
        SparseState::basis_state(w, i).unwrap()
    }

    /// Dense σ_y on one qubit of a dense vector of Gaussian integers (re, im).
    fn dense_sigma_y(v: &mut [(i64, i64)], q: u32, n: u32) {
        let stride = 1usize << (n - q);
        for x in 0..v.len() {
            if x & stride == 0 {
                let (a0, a1) = (v[x], v[x | stride]);
                // new0 = -i·a1, new1 = i·a0
                v[x] = (a1.1, -a1.0);
                v[x | stride] = (-a0.1, a0.0);
            }
        }
    }

    /// Independent dense route: conjugate, then σ_y on each qubit.
    fn dense_spin_flip(s: &SparseState) -> SparseState {
        let n = s.qubits();
        let k = s.terms().iter().map(|t| t.1.half_pow()).max().unwrap_or(0);
        let mut v = vec![(0i64, 0i64); 1 << n];
        for &(x, a) in s.terms() {
            // bring each numerator to the common denominator √2^k
            assert_eq!((k - a.half_pow()) % 2, 0);
            let scale = 1i64 << ((k - a.half_pow()) / 2);
            v[x.0 as usize] = (a.re() * scale, -a.im() * scale);
        }
        for q in 1..=n {
            dense_sigma_y(&mut v, q, n);
        }
        SparseState::from_terms(
            n,
            v.into_iter().enumerate().map(|(x, (re, im))| (BasisIndex(x as u64), ExactAmp::new(re, im, k))),
        )
        .unwrap()
    }

    #[test]
    fn spin_flip_examples() {
        assert_eq!(spin_flip(&ket("01")).unwrap(), ket("10"));
        let g = bell_basis();
        let e = g.elements();
        assert_eq!(spin_flip(&e[0]).unwrap(), e[0].scale(ExactAmp::MINUS_ONE).unwrap());
        assert_eq!(spin_flip(&e[2]).unwrap(), e[2]);
    }

    #[test]
    fn bell_self_map_phases_from_dense_expansion() {
        // Y⊗Y eigenvalues of Φ⁺, Φ⁻, Ψ⁺, Ψ⁻
        let g = bell_basis();
        let phases: Vec<_> =
            g.elements().iter().map(|s| dense_spin_flip(s).equal_up_to_global_phase(s).unwrap()).collect();
        assert_eq!(phases, vec![Phase::MINUS_ONE, Phase::ONE, Phase::ONE, Phase::MINUS_ONE]);
        let report = verify_theorem2(&g).unwrap();
        let got: Vec<_> = report.elements.iter().map(|e| e.self_map_phase.unwrap()).collect();
        assert_eq!(got, phases);
        assert!(report.passed);
    }

    #[test]
    fn tangle_examples() {
        let g = bell_basis();
        assert!(n_tangle(&g.elements()[0]).unwrap().is_maximal());
        assert_eq!(n_tangle(&ket("0000")).unwrap().value(), DyadicRational::ZERO);
        let big = g.elements()[0].scale(ExactAmp::from_int(2)).unwrap();
        assert_eq!(n_tangle(&big), Err(EntangleError::NotNormalized(DyadicRational::from(4))));
        let level2 = Gem::generate(2).unwrap();
        assert!(verify_theorem2(&level2).unwrap().passed);
    }

    #[test]
    fn partial_tangle_value() {
        let half = ExactAmp::new(1, 0, 2);
        let plus = SparseState::from_terms(2, (0..4).map(|x| (BasisIndex(x), half))).unwrap();
        assert_eq!(n_tangle(&plus).unwrap().value(), DyadicRational::ZERO);
        // CP(π/2)|++⟩: τ = 4|ad − bc|² = 4·|(i − 1)/4|² = 1/2
        let cp = SparseState::from_terms(
            2,
            [
                (BasisIndex(0), half),
                (BasisIndex(1), half),
                (BasisIndex(2), half),
                (BasisIndex(3), ExactAmp::new(0, 1, 2)),
            ],
        )
        .unwrap();
        assert_eq!(n_tangle(&cp).unwrap().value(), DyadicRational::new(1, 1));
    }

    fn random_state(qubits: u32) -> impl Strategy<Value = SparseState> {
        let dim = 1u64 << qubits;
        proptest::collection::vec((0..dim, -6i64..=6, -6i64..=6), 0..8).prop_map(move |v| {
            SparseState::from_terms(qubits, v.into_iter().map(|(i, a, b)| (BasisIndex(i), ExactAmp::new(a, b, 3))))
                .unwrap()
        })
    }

    fn normalized_random(qubits: u32) -> impl Strategy<Value = SparseState> {
        // unit-modulus amplitudes on 2^m distinct basis states: norm 1 exactly
        let dim = 1u64 << qubits;
        (0u32..=qubits.min(3)).prop_flat_map(move |m| {
            let count = 1usize << m;
            (
                proptest::sample::subsequence((0..dim).collect::<Vec<_>>(), count),
                proptest::collection::vec(0u8..4, count),
                0u8..2,
            )
                .prop_map(move |(idx, ph, odd)| {
                    // one parity for the whole state so inner products stay representable
                    let terms = idx.into_iter().zip(ph).map(|(i, p)| {
                        let u = Phase::from_eighth_turns(2 * p + odd);
                        (BasisIndex(i), u.amp().checked_mul(ExactAmp::new(1, 0, m)).unwrap())
                    });
                    SparseState::from_terms(qubits, terms).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn spin_flip_matches_dense_route(s in random_state(3)) {
            prop_assert_eq!(spin_flip(&s).unwrap(), dense_spin_flip(&s));
        }

        #[test]
        fn spin_flip_twice_is_sign(s in random_state(4)) {
            let twice = spin_flip(&spin_flip(&s).unwrap()).unwrap();
            prop_assert_eq!(twice, s);
        }

        #[test]
        fn spin_flip_twice_odd_width(s in random_state(3)) {
            let twice = spin_flip(&spin_flip(&s).unwrap()).unwrap();
            prop_assert_eq!(twice, s.scale(ExactAmp::MINUS_ONE).unwrap());
        }

        #[test]
        fn tangle_is_phase_invariant(s in normalized_random(4), k in 0u8..8) {
            let u = Phase::from_eighth_turns(k);
            prop_assert_eq!(n_tangle(&s.scale_by_phase(u).unwrap()).unwrap(), n_tangle(&s).unwrap());
        }

        #[test]
        fn tangle_of_basis_state_is_zero(x in 0u64..256) {
            let s = SparseState::basis_state(8, BasisIndex(x)).unwrap();
            prop_assert_eq!(n_tangle(&s).unwrap().value(), DyadicRational::ZERO);
        }

        #[test]
        fn tangle_is_multiplicative(a in normalized_random(2), b in normalized_random(3)) {
            let prod = n_tangle(&a.tensor(&b).unwrap()).unwrap().value();
            let want = n_tangle(&a).unwrap().value().checked_mul(n_tangle(&b).unwrap().value()).unwrap();
            prop_assert_eq!(prod, want);
        }

        #[test]
        fn tangle_is_at_most_one(s in normalized_random(4)) {
            prop_assert!(n_tangle(&s).unwrap().value() <= DyadicRational::ONE);
        }
    }
}
