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

//! Exact construction and verification of Bell gems.
//!
//! A Bell gem of level `n` is an orthonormal basis of `2^n` qubits built
//! recursively from the Bell basis by symmetric and antisymmetric
//! combinations of tensor products. This crate builds them with exact
//! arithmetic in `Z[i][1/√2]`, checks orthonormality and maximal n-tangle
//! without rounding, and simulates and searches for {H, CNOT, CP(π/2)}
//! circuits that prepare level-2 elements from computational basis states.
//!
//! ```
//! use bellgem::gem::Gem;
//! use bellgem::entangle::n_tangle;
//!
//! let g = Gem::generate(2).unwrap();
//! assert_eq!(g.len(), 16);
//! assert!(g.verify_orthonormal().passed);
//! assert!(g.elements().iter().all(|e| n_tangle(e).unwrap().is_maximal()));
//! ```

pub mod circuit;
pub mod entangle;
pub mod exactnum;
pub mod gem;
pub mod qstate;
pub mod synth;

pub use circuit::{Circuit, Gate};
pub use exactnum::{DyadicRational, ExactAmp};
pub use gem::{Gem, LazyGem};
pub use qstate::{BasisIndex, Phase, SparseState};

/// Serializes `value` as compact JSON with object keys in sorted order.
pub fn to_canonical_json<T: serde::Serialize>(value: &T) -> serde_json::Result<String> {
    serde_json::to_string(&serde_json::to_value(value)?)
}
