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

//! Search for preparation circuits, and the registry of verified results.
//!
//! A [`SynthesisTask`] asks for one circuit that sends several computational
//! basis inputs to given targets, each up to its own global phase. The search
//! is iterative deepening over gate count; within one depth bound, nodes are
//! the tuples of states reached for all inputs (phase-normalized per input),
//! and a node already reached at the same or a smaller depth is not expanded
//! again. Candidates are explored in lexicographic gate order, so the first
//! hit is the shortest circuit and, among those, the lexicographically least.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate};
use crate::exactnum::{ArithError, ExactAmp};
use crate::gem::{e_label_index, Gem, GemError};
use crate::qstate::{BasisIndex, Phase, SparseState, StateError};

/// Dense search states are `2^width` amplitudes; keep that small.
pub const MAX_SEARCH_WIDTH: u32 = 8;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("task is malformed: {0}")]
    BadTask(String),
    #[error("registry circuit for figure {figure} failed verification: {detail}")]
    RegistryMismatch { figure: u8, detail: String },
    #[error("unknown figure {0}; expected 1, 2 or 3")]
    UnknownFigure(u8),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Gem(#[from] GemError),
    #[error(transparent)]
    State(#[from] StateError),
}

/// Which gate kinds a task may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GateSet {
    pub h: bool,
    pub cnot: bool,
    pub cp: bool,
}

impl GateSet {
    pub const H_CNOT: GateSet = GateSet { h: true, cnot: true, cp: false };
    pub const H_CNOT_CP: GateSet = GateSet { h: true, cnot: true, cp: true };

    pub fn allows(&self, g: &Gate) -> bool {
        match g {
            Gate::H(_) => self.h,
            Gate::Cnot { .. } => self.cnot,
            Gate::Cp { .. } => self.cp,
        }
    }

    fn kinds(&self) -> u8 {
        u8::from(self.h) | u8::from(self.cnot) << 1 | u8::from(self.cp) << 2
    }

    /// Every gate on `width` qubits in this set, in encoding order. CP is
    /// symmetric, so only `control < target` is listed.
    pub fn alphabet(&self, width: u32) -> Vec<Gate> {
        let mut gates = Vec::new();
        if self.h {
            gates.extend((1..=width).map(Gate::H));
        }
        for c in 1..=width {
            for t in 1..=width {
                if c == t {
                    continue;
                }
                if self.cnot {
                    gates.push(Gate::Cnot { control: c, target: t });
                }
                if self.cp && c < t {
                    gates.push(Gate::Cp { control: c, target: t });
                }
            }
        }
        gates.sort();
        gates
    }
}

fn kind_bit(g: &Gate) -> u8 {
    match g {
        Gate::H(_) => 1,
        Gate::Cnot { .. } => 2,
        Gate::Cp { .. } => 4,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthesisTask {
    pub width: u32,
    pub pairs: Vec<(BasisIndex, SparseState)>,
    pub gate_set: GateSet,
    /// Maximum gate count explored.
    pub budget: usize,
    pub max_hadamards: Option<usize>,
    /// Require at least one gate of every kind in `gate_set`.
    pub use_every_kind: bool,
}

impl SynthesisTask {
    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError::BadTask(m));
        if self.width == 0 || self.width > MAX_SEARCH_WIDTH {
            return bad(format!("width {} outside 1..={MAX_SEARCH_WIDTH}", self.width));
        }
        if self.budget == 0 {
            return bad("budget must be at least one gate".into());
        }
        if self.pairs.is_empty() {
            return bad("no (input, target) pairs".into());
        }
        let mut inputs: Vec<_> = self.pairs.iter().map(|p| p.0).collect();
        inputs.sort();
        if inputs.windows(2).any(|w| w[0] == w[1]) {
            return bad("inputs are not distinct".into());
        }
        for (input, target) in &self.pairs {
            if !input.in_range(self.width) {
                return bad(format!("input {} out of range", input.0));
            }
            if target.qubits() != self.width {
                return bad(format!("target width {} differs from task width {}", target.qubits(), self.width));
            }
            if !target.is_normalized() {
                return bad(format!("target for input {} is not normalized", input.to_bitstring(self.width)));
            }
        }
        Ok(())
    }

    /// True when `c` respects the gate set, the Hadamard cap and the
    /// every-kind requirement.
    pub fn admits(&self, c: &Circuit) -> bool {
        let used = c.gates().iter().fold(0u8, |m, g| m | kind_bit(g));
        c.width() == self.width
            && c.gates().iter().all(|g| self.gate_set.allows(g))
            && self.max_hadamards.is_none_or(|cap| c.hadamard_count() <= cap)
            && (!self.use_every_kind || used == self.gate_set.kinds())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairCheck {
    pub input: String,
    /// `u` with `simulate(input) = u·target`, or `None` on mismatch.
    pub phase: Option<Phase>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GateCounts {
    pub h: usize,
    pub cnot: usize,
    pub cp: usize,
    pub total: usize,
}

impl GateCounts {
    pub fn of(c: &Circuit) -> GateCounts {
        GateCounts { h: c.count("H"), cnot: c.count("CNOT"), cp: c.count("CP"), total: c.len() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TaskReport {
    pub pairs: Vec<PairCheck>,
    pub gate_counts: GateCounts,
    /// Gate set, Hadamard cap and every-kind requirement all respected.
    pub constraints_ok: bool,
    /// Every pair matched up to its own global phase.
    pub passed: bool,
}

/// Simulates every pair and compares with its target up to a per-pair phase.
pub fn verify_task(c: &Circuit, t: &SynthesisTask) -> TaskReport {
    let pairs: Vec<PairCheck> = t
        .pairs
        .iter()
        .map(|(input, target)| {
            let phase = c.simulate(*input).ok().and_then(|s| s.equal_up_to_global_phase(target));
            PairCheck { input: input.to_bitstring(t.width), phase }
        })
        .collect();
    let passed = c.width() == t.width && pairs.iter().all(|p| p.phase.is_some());
    TaskReport { pairs, gate_counts: GateCounts::of(c), constraints_ok: t.admits(c), passed }
}

/// Dense amplitude vector used inside the search.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Dense(Vec<ExactAmp>);

impl Dense {
    fn from_sparse(s: &SparseState) -> Dense {
        let mut v = vec![ExactAmp::ZERO; 1 << s.qubits()];
        for &(x, a) in s.terms() {
            v[x.0 as usize] = a;
        }
        Dense(v)
    }

    fn apply(&mut self, g: &Gate, width: u32) -> Result<(), ArithError> {
        let bit = |q: u32| 1usize << (width - q);
        let v = &mut self.0;
        match *g {
            Gate::H(q) => {
                let s = bit(q);
                for x in (0..v.len()).filter(|x| x & s == 0) {
                    let (a, b) = (v[x], v[x | s]);
                    v[x] = a.checked_add(b)?.checked_div_sqrt2()?;
                    v[x | s] = a.checked_sub(b)?.checked_div_sqrt2()?;
                }
            }
            Gate::Cnot { control, target } => {
                let (c, t) = (bit(control), bit(target));
                for x in (0..v.len()).filter(|x| x & c != 0 && x & t == 0) {
                    v.swap(x, x | t);
                }
            }
            Gate::Cp { control, target } => {
                let m = bit(control) | bit(target);
                for x in (0..v.len()).filter(|x| x & m == m) {
                    v[x] = v[x].checked_mul_i()?;
                }
            }
        }
        Ok(())
    }

    fn apply_inverse(&mut self, g: &Gate, width: u32) -> Result<(), ArithError> {
        let reps = if self_inverse(g) { 1 } else { 3 };
        for _ in 0..reps {
            self.apply(g, width)?;
        }
        Ok(())
    }

    /// Rotates the global phase so the first nonzero amplitude is least among
    /// its eight unit multiples.
    fn normalize_phase(&mut self) -> Result<(), ArithError> {
        let Some(lead) = self.0.iter().copied().find(|a| !a.is_zero()) else {
            return Ok(());
        };
        let mut best = (lead, Phase::ONE);
        for u in Phase::all().skip(1) {
            let v = u.amp().checked_mul(lead)?;
            if v < best.0 {
                best = (v, u);
            }
        }
        if best.1 != Phase::ONE {
            let u = best.1.amp();
            for a in self.0.iter_mut() {
                *a = a.checked_mul(u)?;
            }
        }
        Ok(())
    }
}

/// 128-bit fingerprint of a node: the phase-normalized states plus the
/// constraint counters that affect which continuations are legal.
fn fingerprint(states: &[Dense], hadamards: usize, kinds: u8) -> u128 {
    // two independent multiply-xorshift streams; collisions only cost
    // completeness, and every returned circuit is re-verified exactly
    fn mix(h: u64, x: u64, k: u64) -> u64 {
        let v = (h ^ x).wrapping_mul(k);
        v ^ (v >> 29)
    }
    const K0: u64 = 0x9e37_79b9_7f4a_7c15;
    const K1: u64 = 0xc2b2_ae3d_27d4_eb4f;
    let (mut lo, mut hi) = (hadamards as u64, u64::from(kinds) << 32 | 1);
    for s in states {
        for a in &s.0 {
            for x in [a.re() as u64, a.im() as u64, u64::from(a.half_pow())] {
                lo = mix(lo, x, K0);
                hi = mix(hi, x, K1);
            }
        }
    }
    (lo as u128) << 64 | hi as u128
}

/// Adjacent gates that commute; the search keeps only the increasing order.
fn commute(a: &Gate, b: &Gate) -> bool {
    let (oa, ob) = (a.operands(), b.operands());
    if oa.iter().all(|q| !ob.contains(q)) {
        return true;
    }
    match (*a, *b) {
        (Gate::Cp { .. }, Gate::Cp { .. }) => true,
        (Gate::Cnot { control: c1, target: t1 }, Gate::Cnot { control: c2, target: t2 }) => {
            (c1 == c2 || t1 == t2) && c1 != t2 && c2 != t1
        }
        // CP is diagonal, so it commutes with a CNOT whose target it does not touch
        (Gate::Cp { control, target }, Gate::Cnot { target: t, .. })
        | (Gate::Cnot { target: t, .. }, Gate::Cp { control, target }) => t != control && t != target,
        _ => false,
    }
}

fn self_inverse(g: &Gate) -> bool {
    !matches!(g, Gate::Cp { .. })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Nodes expanded over all depth bounds.
    pub expanded: u64,
    /// Largest depth bound fully explored.
    pub depth_reached: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub circuit: Option<Circuit>,
    pub stats: SearchStats,
}

struct Searcher<'a> {
    task: &'a SynthesisTask,
    alphabet: Vec<Gate>,
    goal: Vec<Dense>,
    /// Tuples one gate short of the goal, with the gates that finish them.
    preimages: HashMap<Vec<Dense>, Vec<Gate>>,
    seen: HashMap<u128, u8>,
    path: Vec<Gate>,
    expanded: u64,
    required_kinds: u8,
}

impl Searcher<'_> {
    /// Pruning rules and the Hadamard cap for appending `g` to the path.
    fn allowed_after(&self, g: &Gate, hadamards: usize) -> bool {
        if let Some(&prev) = self.path.last() {
            if prev == *g && self_inverse(g) {
                return false;
            }
            if *g < prev && commute(&prev, g) {
                return false;
            }
        }
        let h = hadamards + usize::from(g.is_hadamard());
        self.task.max_hadamards.is_none_or(|cap| h <= cap)
    }

    fn dfs(&mut self, states: &[Dense], hadamards: usize, kinds: u8, limit: usize) -> Result<bool, ArithError> {
        let depth = self.path.len();
        if depth == limit {
            return Ok(kinds & self.required_kinds == self.required_kinds && states == self.goal.as_slice());
        }
        let key = fingerprint(states, hadamards, kinds);
        match self.seen.get(&key) {
            Some(&d) if d as usize <= depth => return Ok(false),
            _ => {
                self.seen.insert(key, depth as u8);
            }
        }
        self.expanded += 1;
        if depth + 1 == limit {
            let Some(finishers) = self.preimages.get(states) else {
                return Ok(false);
            };
            let hit = finishers.iter().copied().find(|g| {
                self.allowed_after(g, hadamards) && (kinds | kind_bit(g)) & self.required_kinds == self.required_kinds
            });
            if let Some(g) = hit {
                self.path.push(g);
                return Ok(true);
            }
            return Ok(false);
        }
        for gi in 0..self.alphabet.len() {
            let g = self.alphabet[gi];
            if !self.allowed_after(&g, hadamards) {
                continue;
            }
            let h = hadamards + usize::from(g.is_hadamard());
            let next_kinds = kinds | kind_bit(&g);
            let missing = (self.required_kinds & !next_kinds).count_ones() as usize;
            if missing > limit - depth - 1 {
                continue;
            }
            let mut next = states.to_vec();
            for s in next.iter_mut() {
                s.apply(&g, self.task.width)?;
                s.normalize_phase()?;
            }
            self.path.push(g);
            if self.dfs(&next, h, next_kinds, limit)? {
                return Ok(true);
            }
            self.path.pop();
        }
        Ok(false)
    }
}

/// Shortest, then lexicographically least, circuit solving `t` within its
/// budget. Absence is a normal result.
pub fn search(t: &SynthesisTask) -> Result<SearchOutcome, SynthError> {
    t.validate()?;
    let arith = |e: ArithError| SynthError::State(e.into());
    let mut start = Vec::with_capacity(t.pairs.len());
    let mut goal = Vec::with_capacity(t.pairs.len());
    for (input, target) in &t.pairs {
        let mut s = Dense::from_sparse(&SparseState::basis_state(t.width, *input)?);
        s.normalize_phase().map_err(arith)?;
        start.push(s);
        let mut g = Dense::from_sparse(target);
        g.normalize_phase().map_err(arith)?;
        goal.push(g);
    }
    let alphabet = t.gate_set.alphabet(t.width);
    let mut preimages: HashMap<Vec<Dense>, Vec<Gate>> = HashMap::new();
    for g in &alphabet {
        let mut pre = goal.clone();
        for s in pre.iter_mut() {
            s.apply_inverse(g, t.width).map_err(arith)?;
            s.normalize_phase().map_err(arith)?;
        }
        preimages.entry(pre).or_default().push(*g);
    }
    let mut searcher = Searcher {
        task: t,
        alphabet,
        goal,
        preimages,
        seen: HashMap::new(),
        path: Vec::new(),
        expanded: 0,
        required_kinds: if t.use_every_kind { t.gate_set.kinds() } else { 0 },
    };
    let mut depth_reached = 0;
    for limit in 0..=t.budget {
        searcher.seen.clear();
        searcher.path.clear();
        if searcher.dfs(&start, 0, 0, limit).map_err(arith)? {
            let circuit = Circuit::new(t.width, searcher.path.clone())?;
            debug_assert!(verify_task(&circuit, t).passed);
            return Ok(SearchOutcome {
                circuit: Some(circuit),
                stats: SearchStats { expanded: searcher.expanded, depth_reached: limit },
            });
        }
        depth_reached = limit;
    }
    Ok(SearchOutcome { circuit: None, stats: SearchStats { expanded: searcher.expanded, depth_reached } })
}

/// One of the three preparation-circuit tasks for level-2 elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FigureId(u8);

impl FigureId {
    pub const ALL: [FigureId; 3] = [FigureId(1), FigureId(2), FigureId(3)];

    pub fn new(n: u8) -> Result<FigureId, SynthError> {
        if (1..=3).contains(&n) {
            Ok(FigureId(n))
        } else {
            Err(SynthError::UnknownFigure(n))
        }
    }

    pub fn number(self) -> u8 {
        self.0
    }

    /// `(input bits, e-label)` pairs.
    pub fn pairs(self) -> &'static [(&'static str, u32)] {
        match self.0 {
            1 => &[
                ("0000", 1),
                ("0011", 2),
                ("0001", 3),
                ("0010", 4),
                ("1000", 5),
                ("1011", 6),
                ("1001", 7),
                ("1010", 8),
            ],
            2 => &[("0001", 13), ("1101", 14), ("1011", 15), ("0111", 16)],
            _ => &[("0001", 9), ("1101", 10), ("1011", 11), ("0111", 12)],
        }
    }

    pub fn gate_set(self) -> GateSet {
        if self.0 == 3 {
            GateSet::H_CNOT_CP
        } else {
            GateSet::H_CNOT
        }
    }

    /// Figure 1's circuit has a single Hadamard.
    pub fn max_hadamards(self) -> Option<usize> {
        (self.0 == 1).then_some(1)
    }

    pub fn default_budget(self) -> usize {
        match self.0 {
            1 => 7,
            _ => 12,
        }
    }

    /// The search task, with targets taken from the canonical level-2 gem.
    pub fn task(self, level2: &Gem, budget: usize) -> Result<SynthesisTask, SynthError> {
        let pairs = self
            .pairs()
            .iter()
            .map(|&(bits, label)| {
                let (input, _) = BasisIndex::parse_bitstring(bits)?;
                let (index, phase) = e_label_index(label)?;
                let target = level2.elements()[index].scale_by_phase(phase)?;
                Ok((input, target))
            })
            .collect::<Result<Vec<_>, SynthError>>()?;
        Ok(SynthesisTask {
            width: 4,
            pairs,
            gate_set: self.gate_set(),
            budget,
            max_hadamards: self.max_hadamards(),
            use_every_kind: true,
        })
    }
}

impl std::fmt::Display for FigureId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A committed reconstruction together with its fresh verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegistryEntry {
    pub figure: FigureId,
    pub circuit: Circuit,
    pub report: TaskReport,
}

impl RegistryEntry {
    /// Verifies `circuit` against the figure's task.
    pub fn build(figure: FigureId, circuit: Circuit, level2: &Gem) -> Result<RegistryEntry, SynthError> {
        let task = figure.task(level2, figure.default_budget())?;
        let report = verify_task(&circuit, &task);
        let mismatch = |detail: String| SynthError::RegistryMismatch { figure: figure.number(), detail };
        if !report.passed {
            let failed: Vec<&str> =
                report.pairs.iter().filter(|p| p.phase.is_none()).map(|p| p.input.as_str()).collect();
            return Err(mismatch(format!("inputs {failed:?} miss their targets")));
        }
        if !report.constraints_ok {
            return Err(mismatch("circuit violates the figure's gate constraints".into()));
        }
        Ok(RegistryEntry { figure, circuit, report })
    }

    /// The JSON verification record: per-pair phase with target label, and gate counts.
    pub fn record(&self) -> serde_json::Value {
        let pairs: Vec<serde_json::Value> = self
            .report
            .pairs
            .iter()
            .zip(self.figure.pairs())
            .map(|(p, (_, label))| {
                serde_json::json!({
                    "input": p.input,
                    "target": format!("e{label}"),
                    "phase": p.phase,
                })
            })
            .collect();
        serde_json::json!({
            "figure": self.figure.number(),
            "gate_counts": self.report.gate_counts,
            "pairs": pairs,
        })
    }
}

const REGISTRY_FILES: [(&str, &str); 3] = [
    (include_str!("../registry/figure1.circ"), include_str!("../registry/figure1.json")),
    (include_str!("../registry/figure2.circ"), include_str!("../registry/figure2.json")),
    (include_str!("../registry/figure3.circ"), include_str!("../registry/figure3.json")),
];

/// The committed circuits for the three figures, each re-verified against its
/// task and its stored record.
pub fn registry() -> Result<Vec<RegistryEntry>, SynthError> {
    let level2 = Gem::generate(2)?;
    FigureId::ALL
        .iter()
        .zip(REGISTRY_FILES)
        .map(|(&figure, (circ, record))| {
            let mismatch = |detail: String| SynthError::RegistryMismatch { figure: figure.number(), detail };
            let circuit: Circuit = circ.parse()?;
            let entry = RegistryEntry::build(figure, circuit, &level2)?;
            let stored: serde_json::Value =
                serde_json::from_str(record).map_err(|e| mismatch(format!("record is not JSON: {e}")))?;
            if stored != entry.record() {
                return Err(mismatch("stored record differs from fresh verification".into()));
            }
            Ok(entry)
        })
        .collect()
}

/// The registered entry for one figure.
pub fn registry_entry(figure: FigureId) -> Result<RegistryEntry, SynthError> {
    let mut entries = registry()?;
    Ok(entries.swap_remove(usize::from(figure.number() - 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gem::{bell_basis, e_label_state};
    use proptest::prelude::*;

    fn bits(s: &str) -> BasisIndex {
        BasisIndex::parse_bitstring(s).unwrap().0
    }

    fn circ(text: &str) -> Circuit {
        text.parse().unwrap()
    }

    fn task(width: u32, pairs: Vec<(BasisIndex, SparseState)>, budget: usize) -> SynthesisTask {
        SynthesisTask { width, pairs, gate_set: GateSet::H_CNOT_CP, budget, max_hadamards: None, use_every_kind: false }
    }

    fn level2() -> Gem {
        Gem::generate(2).unwrap()
    }

    #[test]
    fn bell_circuit_hits_all_four_bell_states() {
        let bell = bell_basis();
        let pairs = ["00", "10", "01", "11"].iter().zip(bell.elements()).map(|(b, s)| (bits(b), s.clone())).collect();
        let report = verify_task(&circ("qubits 2\nH 1\nCNOT 1 2\n"), &task(2, pairs, 2));
        assert!(report.passed);
        assert!(report.pairs.iter().all(|p| p.phase == Some(Phase::ONE)));
        assert_eq!(report.gate_counts, GateCounts { h: 1, cnot: 1, cp: 0, total: 2 });
    }

    #[test]
    fn ghz_fan_out_prepares_e1() {
        let t = task(4, vec![(bits("0000"), e_label_state(1).unwrap())], 4);
        assert!(verify_task(&circ("qubits 4\nH 1\nCNOT 1 2\nCNOT 1 3\nCNOT 1 4\n"), &t).passed);
    }

    #[test]
    fn empty_circuit_fails() {
        let t = task(2, vec![(bits("00"), bell_basis().elements()[0].clone())], 1);
        let report = verify_task(&Circuit::new(2, vec![]).unwrap(), &t);
        assert!(!report.passed);
        assert_eq!(report.pairs[0].phase, None);
    }

    #[test]
    fn stated_figure1_witness_verifies() {
        let fig = FigureId::new(1).unwrap();
        let t = fig.task(&level2(), 7).unwrap();
        let c = circ("qubits 4\nCNOT 3 2\nCNOT 4 2\nH 1\nCNOT 1 2\nCNOT 1 3\nCNOT 1 4\n");
        let report = verify_task(&c, &t);
        assert!(report.passed && report.constraints_ok);
        assert_eq!(report.gate_counts.total, 6);
    }

    #[test]
    fn bad_tasks_are_rejected() {
        let phi = bell_basis().elements()[0].clone();
        assert!(matches!(search(&task(2, vec![(bits("00"), phi.clone())], 0)), Err(SynthError::BadTask(_))));
        let dup = vec![(bits("00"), phi.clone()), (bits("00"), phi.clone())];
        assert!(matches!(search(&task(2, dup, 2)), Err(SynthError::BadTask(_))));
        assert!(matches!(search(&task(4, vec![(bits("00"), phi.clone())], 2)), Err(SynthError::BadTask(_))));
        let loose = phi.scale(ExactAmp::from_int(2)).unwrap();
        assert!(matches!(search(&task(2, vec![(bits("00"), loose)], 2)), Err(SynthError::BadTask(_))));
        assert_eq!(FigureId::new(4), Err(SynthError::UnknownFigure(4)));
    }

    #[test]
    fn figure1_search_is_short_and_matches_registry() {
        let fig = FigureId::new(1).unwrap();
        let t = fig.task(&level2(), 7).unwrap();
        let found = search(&t).unwrap().circuit.unwrap();
        assert!(found.len() <= 7);
        assert_eq!(found.hadamard_count(), 1);
        assert_eq!(found, registry_entry(fig).unwrap().circuit);
        let out = found.simulate(bits("0000")).unwrap();
        let half = ExactAmp::FRAC_1_SQRT_2;
        assert_eq!(out.terms(), &[(bits("0000"), half), (bits("1111"), half)]);
    }

    #[test]
    fn figure2_search_is_deterministic_and_minimal() {
        let fig = FigureId::new(2).unwrap();
        let g = level2();
        let t = fig.task(&g, 12).unwrap();
        let a = search(&t).unwrap();
        let b = search(&t).unwrap();
        assert_eq!(a, b);
        let found = a.circuit.unwrap();
        assert_eq!(found, registry_entry(fig).unwrap().circuit);
        let shorter = fig.task(&g, found.len() - 1).unwrap();
        assert_eq!(search(&shorter).unwrap().circuit, None);
    }

    #[test]
    fn figure2_budget_one_is_not_found() {
        let fig = FigureId::new(2).unwrap();
        let out = search(&fig.task(&level2(), 1).unwrap()).unwrap();
        assert_eq!(out.circuit, None);
        assert_eq!(out.stats.depth_reached, 1);
    }

    #[test]
    fn registry_entries_meet_caption_constraints() {
        let entries = registry().unwrap();
        assert_eq!(entries.len(), 3);
        let counts: Vec<&GateCounts> = entries.iter().map(|e| &e.report.gate_counts).collect();
        assert_eq!(counts[0].h, 1);
        assert_eq!(counts[1].cp, 0);
        assert!(counts[1].h > 0 && counts[1].cnot > 0);
        assert!(counts[2].cp > 0);
        assert!(entries.iter().all(|e| e.report.passed && e.report.constraints_ok));
    }

    #[test]
    fn tampered_registry_circuit_is_a_hard_error() {
        let fig = FigureId::new(1).unwrap();
        let bad = circ("qubits 4\nH 1\nCNOT 1 3\nCNOT 3 2\nCNOT 4 2\n");
        assert!(matches!(
            RegistryEntry::build(fig, bad, &level2()),
            Err(SynthError::RegistryMismatch { figure: 1, .. })
        ));
        let two_h = circ("qubits 4\nH 1\nH 1\nH 1\nCNOT 1 3\nCNOT 3 2\nCNOT 4 2\nCNOT 1 4\n");
        assert!(matches!(
            RegistryEntry::build(fig, two_h, &level2()),
            Err(SynthError::RegistryMismatch { figure: 1, .. })
        ));
    }

    #[test]
    fn commuting_pairs_really_commute() {
        let alphabet = GateSet::H_CNOT_CP.alphabet(3);
        for a in &alphabet {
            for b in &alphabet {
                if !commute(a, b) {
                    continue;
                }
                for x in 0..8 {
                    let ab = Circuit::new(3, vec![*a, *b]).unwrap().simulate(BasisIndex(x)).unwrap();
                    let ba = Circuit::new(3, vec![*b, *a]).unwrap().simulate(BasisIndex(x)).unwrap();
                    assert_eq!(ab, ba, "{a} / {b}");
                }
            }
        }
    }

    fn small_circuit() -> impl Strategy<Value = Circuit> {
        let alphabet = GateSet::H_CNOT_CP.alphabet(3);
        proptest::collection::vec(proptest::sample::select(alphabet), 1..=3)
            .prop_map(|gates| Circuit::new(3, gates).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn search_recovers_no_longer_circuit(c in small_circuit()) {
            let pairs: Vec<_> = [0u64, 3, 5]
                .iter()
                .map(|&x| (BasisIndex(x), c.simulate(BasisIndex(x)).unwrap()))
                .collect();
            let t = task(3, pairs, c.len());
            let found = search(&t).unwrap().circuit.expect("the generating circuit is within budget");
            prop_assert!(found.len() <= c.len());
            prop_assert!(verify_task(&found, &t).passed);
        }
    }
}
