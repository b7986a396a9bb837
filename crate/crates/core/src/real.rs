//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the solvers are generic over.
///
/// Implemented for `f32`, `f64` and IEEE binary128 ([`f128::f128`]).
/// Geometry and spectrum fitting work in any of them; the modal pipeline needs
/// at least `f64` because the spiral pencils have a stiffness spread of ~1e9.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal or constant.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts a count.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    /// Nearest `f64`, for reporting.
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Unit roundoff. `Float::epsilon` is not reliable for every implementor.
    #[inline]
    fn machine_epsilon() -> Self {
        Self::epsilon()
    }

    /// `√(a² + b²)` without intermediate overflow.
    #[inline]
    fn hypot_safe(self, other: Self) -> Self {
        let a = self.abs();
        let b = other.abs();
        let (big, small) = if a > b { (a, b) } else { (b, a) };
        if big == Self::zero() {
            return Self::zero();
        }
        let r = small / big;
        big * (Self::one() + r * r).sqrt()
    }

    /// A requested relative tolerance, floored at a small multiple of the
    /// type's machine epsilon.
    #[inline]
    fn tolerance(requested: f64) -> Self {
        let floor = Self::machine_epsilon() * Self::lit(64.0);
        let req = Self::lit(requested);
        if req > floor {
            req
        } else {
            floor
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}
impl Real for f128::f128 {}

/// Sum of an iterator of scalars (not every `Real` implements `Sum`).
#[inline]
pub fn sum<T: Real, I: IntoIterator<Item = T>>(iter: I) -> T {
    iter.into_iter().fold(T::zero(), |acc, x| acc + x)
}
