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

//! Exact amplitudes in the ring of Gaussian integers with √2 inverted.
//!
//! Every amplitude reachable from a computational basis state through
//! Hadamard, CNOT and the π/2 controlled phase has the shape
//! `(re + im·i) / √2^half_pow` with integer `re`, `im`. [`ExactAmp`] stores
//! exactly that triple in a canonical form, so equality of values is plain
//! field-wise equality.
//!
//! A nonzero value has a well-defined *parity*: the parity of `half_pow` is the
//! same for every representation of it, because an odd power of √2 is never a
//! Gaussian integer. Two values of opposite parity cannot be added inside this
//! representation; [`ExactAmp::checked_add`] reports that instead of rounding.
//! States produced by the supported gates keep a single parity across all
//! their terms, so this never triggers in practice.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    /// The sum of values with odd and even √2 exponent is not of the form
    /// `(a + bi)/√2^k`.
    #[error("cannot add {lhs} and {rhs}: their √2 exponents have different parity")]
    MixedParity { lhs: ExactAmp, rhs: ExactAmp },
}

/// `(re + im·i) / √2^half_pow`, always held in canonical form.
///
/// Canonical means: zero is `(0, 0, 0)`, and otherwise `re` and `im` are not
/// both even while `half_pow ≥ 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "RawAmp")]
pub struct ExactAmp {
    re: i64,
    im: i64,
    half_pow: u32,
}

#[derive(Deserialize)]
struct RawAmp {
    re: i64,
    im: i64,
    half_pow: u32,
}

impl From<RawAmp> for ExactAmp {
    fn from(raw: RawAmp) -> Self {
        ExactAmp::new(raw.re, raw.im, raw.half_pow)
    }
}

impl ExactAmp {
    pub const ZERO: ExactAmp = ExactAmp { re: 0, im: 0, half_pow: 0 };
    pub const ONE: ExactAmp = ExactAmp { re: 1, im: 0, half_pow: 0 };
    pub const MINUS_ONE: ExactAmp = ExactAmp { re: -1, im: 0, half_pow: 0 };
    pub const I: ExactAmp = ExactAmp { re: 0, im: 1, half_pow: 0 };
    /// 1/√2
    pub const FRAC_1_SQRT_2: ExactAmp = ExactAmp { re: 1, im: 0, half_pow: 1 };

    /// Builds `(re + im·i)/√2^half_pow` and canonicalizes it.
    pub fn new(re: i64, im: i64, half_pow: u32) -> Self {
        ExactAmp { re, im, half_pow }.canonical()
    }

    pub fn from_int(re: i64) -> Self {
        Self::new(re, 0, 0)
    }

    pub fn re(&self) -> i64 {
        self.re
    }

    pub fn im(&self) -> i64 {
        self.im
    }

    pub fn half_pow(&self) -> u32 {
        self.half_pow
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    /// True when the stored fields already satisfy the canonical-form rule.
    pub fn is_canonical(&self) -> bool {
        if self.is_zero() {
            return self.half_pow == 0;
        }
        !(self.re % 2 == 0 && self.im % 2 == 0 && self.half_pow >= 2)
    }

    fn canonical(mut self) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        while self.half_pow >= 2 && self.re % 2 == 0 && self.im % 2 == 0 {
            self.re /= 2;
            self.im /= 2;
            self.half_pow -= 2;
        }
        self
    }

    /// Numerator scaled up to denominator `√2^target`; `target - half_pow` must be even.
    fn numerator_at(&self, target: u32) -> Result<(i64, i64), ArithError> {
        debug_assert!(target >= self.half_pow && (target - self.half_pow).is_multiple_of(2));
        let shift = (target - self.half_pow) / 2;
        let scale = 1i64.checked_shl(shift).filter(|_| shift < 63).ok_or(ArithError::Overflow)?;
        Ok((
            self.re.checked_mul(scale).ok_or(ArithError::Overflow)?,
            self.im.checked_mul(scale).ok_or(ArithError::Overflow)?,
        ))
    }

    pub fn checked_add(self, rhs: ExactAmp) -> Result<ExactAmp, ArithError> {
        if self.is_zero() {
            return Ok(rhs);
        }
        if rhs.is_zero() {
            return Ok(self);
        }
        if (self.half_pow ^ rhs.half_pow) & 1 == 1 {
            return Err(ArithError::MixedParity { lhs: self, rhs });
        }
        let k = self.half_pow.max(rhs.half_pow);
        let (a, b) = self.numerator_at(k)?;
        let (c, d) = rhs.numerator_at(k)?;
        let re = a.checked_add(c).ok_or(ArithError::Overflow)?;
        let im = b.checked_add(d).ok_or(ArithError::Overflow)?;
        Ok(ExactAmp::new(re, im, k))
    }

    pub fn checked_sub(self, rhs: ExactAmp) -> Result<ExactAmp, ArithError> {
        self.checked_add(rhs.checked_neg()?)
    }

    pub fn checked_mul(self, rhs: ExactAmp) -> Result<ExactAmp, ArithError> {
        if self.is_zero() || rhs.is_zero() {
            return Ok(Self::ZERO);
        }
        let ov = || ArithError::Overflow;
        let ac = self.re.checked_mul(rhs.re).ok_or_else(ov)?;
        let bd = self.im.checked_mul(rhs.im).ok_or_else(ov)?;
        let ad = self.re.checked_mul(rhs.im).ok_or_else(ov)?;
        let bc = self.im.checked_mul(rhs.re).ok_or_else(ov)?;
        let re = ac.checked_sub(bd).ok_or_else(ov)?;
        let im = ad.checked_add(bc).ok_or_else(ov)?;
        let k = self.half_pow.checked_add(rhs.half_pow).ok_or_else(ov)?;
        Ok(ExactAmp::new(re, im, k))
    }

    pub fn checked_neg(self) -> Result<ExactAmp, ArithError> {
        Ok(ExactAmp {
            re: self.re.checked_neg().ok_or(ArithError::Overflow)?,
            im: self.im.checked_neg().ok_or(ArithError::Overflow)?,
            half_pow: self.half_pow,
        })
    }

    /// Multiplication by `i`; (a + bi)·i = -b + ai.
    pub fn checked_mul_i(self) -> Result<ExactAmp, ArithError> {
        Ok(ExactAmp { re: self.im.checked_neg().ok_or(ArithError::Overflow)?, im: self.re, half_pow: self.half_pow })
    }

    /// Divides by √2. Never overflows short of `half_pow` wrapping.
    pub fn checked_div_sqrt2(self) -> Result<ExactAmp, ArithError> {
        if self.is_zero() {
            return Ok(self);
        }
        let k = self.half_pow.checked_add(1).ok_or(ArithError::Overflow)?;
        Ok(ExactAmp::new(self.re, self.im, k))
    }

    pub fn conj(self) -> ExactAmp {
        // i64::MIN has no negation; saturating keeps the function total and
        // such numerators never arise from checked arithmetic above.
        ExactAmp { im: self.im.saturating_neg(), ..self }
    }

    /// `|x|²` as an exact dyadic rational. The numerator is computed in 128 bits,
    /// which holds `re² + im²` for any pair of 64-bit integers.
    pub fn abs_sq(self) -> DyadicRational {
        let re = self.re as i128;
        let im = self.im as i128;
        DyadicRational::new(re * re + im * im, self.half_pow)
    }

    /// Floating-point rendering `(re, im)`.
    pub fn to_f64(self) -> (f64, f64) {
        let even = (self.half_pow / 2) as i32;
        let mut scale = (-(even as f64)).exp2();
        if self.half_pow % 2 == 1 {
            scale *= std::f64::consts::FRAC_1_SQRT_2;
        }
        (self.re as f64 * scale, self.im as f64 * scale)
    }
}

impl Default for ExactAmp {
    fn default() -> Self {
        Self::ZERO
    }
}

impl fmt::Display for ExactAmp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = match (self.re, self.im) {
            (re, 0) => format!("{re}"),
            (0, im) => format!("{im}i"),
            (re, im) if im < 0 => format!("({re}{im}i)"),
            (re, im) => format!("({re}+{im}i)"),
        };
        match self.half_pow {
            0 => write!(f, "{num}"),
            1 => write!(f, "{num}/√2"),
            k => write!(f, "{num}/√2^{k}"),
        }
    }
}

/// `num / 2^exp` in lowest terms: `num` is odd, or `exp` is zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DyadicRational {
    num: i128,
    exp: u32,
}

impl DyadicRational {
    pub const ZERO: DyadicRational = DyadicRational { num: 0, exp: 0 };
    pub const ONE: DyadicRational = DyadicRational { num: 1, exp: 0 };

    pub fn new(mut num: i128, mut exp: u32) -> Self {
        if num == 0 {
            return Self::ZERO;
        }
        let tz = num.trailing_zeros().min(exp);
        num >>= tz;
        exp -= tz;
        DyadicRational { num, exp }
    }

    pub fn numerator(&self) -> i128 {
        self.num
    }

    /// Exponent of the power-of-two denominator.
    pub fn denominator_exp(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }

    fn scaled(num: i128, by: u32) -> Option<i128> {
        if by >= 127 {
            return if num == 0 { Some(0) } else { None };
        }
        num.checked_mul(1i128 << by)
    }

    pub fn checked_add(self, rhs: DyadicRational) -> Result<DyadicRational, ArithError> {
        let exp = self.exp.max(rhs.exp);
        let a = Self::scaled(self.num, exp - self.exp).ok_or(ArithError::Overflow)?;
        let b = Self::scaled(rhs.num, exp - rhs.exp).ok_or(ArithError::Overflow)?;
        Ok(DyadicRational::new(a.checked_add(b).ok_or(ArithError::Overflow)?, exp))
    }

    pub fn checked_mul(self, rhs: DyadicRational) -> Result<DyadicRational, ArithError> {
        let num = self.num.checked_mul(rhs.num).ok_or(ArithError::Overflow)?;
        let exp = self.exp.checked_add(rhs.exp).ok_or(ArithError::Overflow)?;
        Ok(DyadicRational::new(num, exp))
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 * (-(self.exp as f64)).exp2()
    }

    /// Decimal rendering with 12 fractional digits.
    pub fn to_decimal_string(self) -> String {
        format!("{:.12}", self.to_f64())
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let (hi, lo, flipped) = if self.exp >= other.exp { (self, other, false) } else { (other, self, true) };
        // compare hi.num against lo.num · 2^(hi.exp - lo.exp)
        let ord = match Self::scaled(lo.num, hi.exp - lo.exp) {
            Some(lo_scaled) => hi.num.cmp(&lo_scaled),
            // |lo_scaled| exceeds any i128, so its sign decides
            None => 0.cmp(&lo.num),
        };
        if flipped {
            ord.reverse()
        } else {
            ord
        }
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i64> for DyadicRational {
    fn from(n: i64) -> Self {
        DyadicRational::new(n as i128, 0)
    }
}

impl fmt::Display for DyadicRational {
    /// `p` for integers, `p/2^q` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn amp(re: i64, im: i64, k: u32) -> ExactAmp {
        ExactAmp::new(re, im, k)
    }

    fn fields(x: ExactAmp) -> (i64, i64, u32) {
        (x.re(), x.im(), x.half_pow())
    }

    #[test]
    fn add_examples() {
        // 1/√2 + 1/√2 = 2/√2, already canonical
        assert_eq!(fields(amp(1, 0, 1).checked_add(amp(1, 0, 1)).unwrap()), (2, 0, 1));
        assert_eq!(amp(1, 0, 0).checked_add(amp(-1, 0, 0)).unwrap(), ExactAmp::ZERO);
        assert_eq!(fields(amp(1, 1, 2).checked_add(amp(1, -1, 2)).unwrap()), (1, 0, 0));
    }

    #[test]
    fn add_mixed_parity_is_reported() {
        let err = ExactAmp::ONE.checked_add(ExactAmp::FRAC_1_SQRT_2).unwrap_err();
        assert!(matches!(err, ArithError::MixedParity { .. }));
        // zero adapts to either parity
        assert_eq!(ExactAmp::ZERO.checked_add(ExactAmp::FRAC_1_SQRT_2).unwrap(), ExactAmp::FRAC_1_SQRT_2);
    }

    #[test]
    fn mul_examples() {
        assert_eq!(fields(amp(1, 0, 1).checked_mul(amp(1, 0, 1)).unwrap()), (1, 0, 2));
        assert_eq!(fields(amp(0, 1, 0).checked_mul(amp(0, 1, 0)).unwrap()), (-1, 0, 0));
        assert_eq!(amp(1, 0, 0).checked_mul(amp(0, 0, 0)).unwrap(), ExactAmp::ZERO);
    }

    #[test]
    fn conj_examples() {
        assert_eq!(fields(amp(1, 1, 2).conj()), (1, -1, 2));
        assert_eq!(fields(amp(1, 0, 1).conj()), (1, 0, 1));
        assert_eq!(fields(amp(0, 0, 0).conj()), (0, 0, 0));
    }

    #[test]
    fn abs_sq_examples() {
        assert_eq!(amp(1, 0, 1).abs_sq(), DyadicRational::new(1, 1));
        assert_eq!(amp(1, 1, 2).abs_sq(), DyadicRational::new(1, 1));
        assert_eq!(amp(0, 0, 0).abs_sq(), DyadicRational::ZERO);
    }

    #[test]
    fn overflow_is_reported() {
        let big = ExactAmp::from_int(i64::MAX);
        assert_eq!(big.checked_add(ExactAmp::ONE), Err(ArithError::Overflow));
        assert_eq!(big.checked_mul(ExactAmp::from_int(2)), Err(ArithError::Overflow));
        assert_eq!(ExactAmp::from_int(i64::MIN).checked_neg(), Err(ArithError::Overflow));
        // rescaling a numerator to a much larger denominator
        let far = ExactAmp::new(1, 0, 200);
        assert_eq!(ExactAmp::from_int(3).checked_add(far), Err(ArithError::Overflow));
    }

    #[test]
    fn canonical_zero_and_reduction() {
        assert_eq!(fields(amp(0, 0, 7)), (0, 0, 0));
        assert_eq!(fields(amp(4, -8, 5)), (1, -2, 1));
        assert_eq!(fields(amp(2, 2, 3)), (1, 1, 1));
        assert!(amp(2, 0, 1).is_canonical());
    }

    #[test]
    fn dyadic_display_and_order() {
        assert_eq!(DyadicRational::ONE.to_string(), "1");
        assert_eq!(DyadicRational::new(6, 4).to_string(), "3/2^3");
        assert_eq!(DyadicRational::new(1, 1).to_decimal_string(), "0.500000000000");
        assert!(DyadicRational::new(1, 1) < DyadicRational::ONE);
        assert!(DyadicRational::new(-3, 0) < DyadicRational::new(1, 100));
        assert!(DyadicRational::new(i128::MAX, 0) > DyadicRational::new(1, 120));
        assert!(DyadicRational::new(1, 120) < DyadicRational::new(1 << 100, 0));
    }

    #[test]
    fn json_is_canonical_both_ways() {
        let x = amp(1, -1, 3);
        let text = serde_json::to_string(&x).unwrap();
        assert_eq!(text, r#"{"re":1,"im":-1,"half_pow":3}"#);
        let loose: ExactAmp = serde_json::from_str(r#"{"re":4,"im":0,"half_pow":4}"#).unwrap();
        assert_eq!(fields(loose), (1, 0, 0));
    }

    fn any_amp(bound: i64, max_k: u32) -> impl Strategy<Value = ExactAmp> {
        (-bound..=bound, -bound..=bound, 0..=max_k).prop_map(|(a, b, k)| ExactAmp::new(a, b, k))
    }

    /// Values with even √2 exponent form a subring, so ring axioms are testable
    /// without tripping the parity rule.
    fn even_amp() -> impl Strategy<Value = ExactAmp> {
        (-1000i64..=1000, -1000i64..=1000, 0u32..=5).prop_map(|(a, b, k)| ExactAmp::new(a, b, 2 * k))
    }

    proptest! {
        #[test]
        fn canonicalization_is_idempotent(a in any::<i32>(), b in any::<i32>(), k in 0u32..40) {
            let x = ExactAmp::new(a as i64, b as i64, k);
            prop_assert!(x.is_canonical());
            prop_assert_eq!(ExactAmp::new(x.re(), x.im(), x.half_pow()), x);
        }

        #[test]
        fn ring_axioms(x in even_amp(), y in even_amp(), z in even_amp()) {
            prop_assert_eq!(x.checked_add(y).unwrap(), y.checked_add(x).unwrap());
            prop_assert_eq!(x.checked_mul(y).unwrap(), y.checked_mul(x).unwrap());
            prop_assert_eq!(
                x.checked_add(y).unwrap().checked_add(z).unwrap(),
                x.checked_add(y.checked_add(z).unwrap()).unwrap()
            );
            prop_assert_eq!(
                x.checked_mul(y).unwrap().checked_mul(z).unwrap(),
                x.checked_mul(y.checked_mul(z).unwrap()).unwrap()
            );
            prop_assert_eq!(
                x.checked_mul(y.checked_add(z).unwrap()).unwrap(),
                x.checked_mul(y).unwrap().checked_add(x.checked_mul(z).unwrap()).unwrap()
            );
        }

        #[test]
        fn odd_parity_distributes(x in any_amp(1000, 6), y in any_amp(1000, 6), z in any_amp(1000, 6)) {
            // y + z is only defined when the parities agree (or one is zero)
            if let Ok(sum) = y.checked_add(z) {
                prop_assert_eq!(
                    x.checked_mul(sum).unwrap(),
                    x.checked_mul(y).unwrap().checked_add(x.checked_mul(z).unwrap()).unwrap()
                );
            }
        }

        #[test]
        fn abs_sq_is_multiplicative(x in any_amp(1 << 20, 10), y in any_amp(1 << 20, 10)) {
            let lhs = x.checked_mul(y).unwrap().abs_sq();
            let rhs = x.abs_sq().checked_mul(y.abs_sq()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn float_rendering_matches(a in -(1i64 << 20)..=(1 << 20), b in -(1i64 << 20)..=(1 << 20), k in 0u32..60) {
            let x = ExactAmp::new(a, b, k);
            let (re, im) = x.to_f64();
            let scale = 2f64.powf(-(k as f64) / 2.0);
            let (want_re, want_im) = (a as f64 * scale, b as f64 * scale);
            let tol = |w: f64| 1e-12 * w.abs().max(1.0);
            prop_assert!((re - want_re).abs() <= tol(want_re), "{} vs {}", re, want_re);
            prop_assert!((im - want_im).abs() <= tol(want_im), "{} vs {}", im, want_im);
        }

        #[test]
        fn conj_is_involution(x in any_amp(1 << 30, 20)) {
            prop_assert_eq!(x.conj().conj(), x);
            prop_assert!(x.conj().is_canonical());
        }
    }
}
