//! Integer scalar abstraction used by the exact linear algebra.
//!
//! Every algorithm in [`crate::linalg`] is written once against [`Scalar`]
//! and runs either on machine integers (with checked arithmetic) or on
//! [`BigInt`]. The public entry points try `i64` first and redo the work in
//! `BigInt` when an intermediate value overflows.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Signed, ToPrimitive};

/// Raised when a machine-integer computation leaves the representable range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

/// An exact integer type usable as a matrix entry.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + Hash
    + Ord
    + Integer
    + Signed
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + Send
    + Sync
    + 'static
{
    fn from_i64(v: i64) -> Self;
    fn from_bigint(v: &BigInt) -> Option<Self>;
    fn to_bigint(&self) -> BigInt;

    #[inline]
    fn add_c(&self, o: &Self) -> Result<Self, Overflow> {
        self.checked_add(o).ok_or(Overflow)
    }
    #[inline]
    fn sub_c(&self, o: &Self) -> Result<Self, Overflow> {
        self.checked_sub(o).ok_or(Overflow)
    }
    #[inline]
    fn mul_c(&self, o: &Self) -> Result<Self, Overflow> {
        self.checked_mul(o).ok_or(Overflow)
    }
    /// `self - q * o`, the workhorse of every elimination step.
    #[inline]
    fn sub_mul_c(&self, q: &Self, o: &Self) -> Result<Self, Overflow> {
        self.sub_c(&q.mul_c(o)?)
    }
    #[inline]
    fn neg_c(&self) -> Result<Self, Overflow> {
        Self::zero().sub_c(self)
    }
    #[inline]
    fn is_unit(&self) -> bool {
        self.is_one() || (-self.clone()).is_one()
    }
}

impl Scalar for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_i64()
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    #[inline]
    fn neg_c(&self) -> Result<Self, Overflow> {
        self.checked_neg().ok_or(Overflow)
    }
    #[inline]
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
}

impl Scalar for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    #[inline]
    fn neg_c(&self) -> Result<Self, Overflow> {
        self.checked_neg().ok_or(Overflow)
    }
}

impl Scalar for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    #[inline]
    fn add_c(&self, o: &Self) -> Result<Self, Overflow> {
        Ok(self + o)
    }
    #[inline]
    fn sub_c(&self, o: &Self) -> Result<Self, Overflow> {
        Ok(self - o)
    }
    #[inline]
    fn mul_c(&self, o: &Self) -> Result<Self, Overflow> {
        Ok(self * o)
    }
    #[inline]
    fn neg_c(&self) -> Result<Self, Overflow> {
        Ok(-self)
    }
}

/// Floor division and the matching remainder, `a = q*b + r` with `0 <= r < |b|`.
///
/// The non-negative remainder keeps Hermite reductions canonical.
#[inline]
pub fn div_floor_pos<T: Scalar>(a: &T, b: &T) -> (T, T) {
    let (mut q, mut r) = a.div_rem(b);
    if r.is_negative() {
        if b.is_positive() {
            q = q - T::one();
            r = r + b.clone();
        } else {
            q = q + T::one();
            r = r - b.clone();
        }
    }
    (q, r)
}

/// Runs `f` on machine integers and falls back to arbitrary precision on overflow.
pub fn with_fallback<R>(
    fast: impl FnOnce() -> Result<R, Overflow>,
    slow: impl FnOnce() -> Result<R, Overflow>,
) -> R {
    match fast() {
        Ok(r) => r,
        Err(Overflow) => slow().expect("arbitrary-precision arithmetic cannot overflow"),
    }
}
