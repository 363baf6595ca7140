//! Scalar abstraction shared by the exact and floating-point code paths.
//!
//! Everything in the crate is written against [`Scalar`]. Two families of
//! implementors exist: arbitrary-precision rationals, where every comparison
//! against zero is exact, and IEEE floats, where "zero" means "below a pivot
//! tolerance". Certificates only ever use the exact family.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Relative pivot threshold used by elimination over floating-point scalars.
pub const FLOAT_PIVOT_EPS: f64 = 1e-12;

/// Numeric field element usable by every vector and matrix routine.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + FromStr
    + PartialEq
    + PartialOrd
    + Num
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// `true` when arithmetic never rounds.
    const EXACT: bool;

    /// Zero test used by elimination. `scale` is the magnitude of the data the
    /// value was derived from; exact types ignore it.
    fn is_negligible(&self, scale: f64) -> bool;

    /// Real `q`-th root of `self` (`q` odd), when it is representable in this
    /// type. Floats always succeed; rationals only for perfect powers.
    fn odd_root(&self, q: u32) -> Option<Self>;

    /// Lossy conversion used for tables and numeric probes.
    fn to_float(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("every scalar type represents small integers")
    }

    /// `false` for NaN or infinities.
    fn is_finite_value(&self) -> bool {
        true
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }

    fn odd_root(&self, q: u32) -> Option<Self> {
        debug_assert!(q % 2 == 1);
        let num = exact_int_root(self.numer(), q)?;
        let den = exact_int_root(self.denom(), q)?;
        Some(Rational::new(num, den))
    }
}

fn exact_int_root(v: &BigInt, q: u32) -> Option<BigInt> {
    let root = v.abs().nth_root(q);
    if num_traits::pow(root.clone(), q as usize) == v.abs() {
        Some(if v.is_negative() { -root } else { root })
    } else {
        None
    }
}

macro_rules! impl_float_scalar {
    ($f:ty) => {
        impl Scalar for $f {
            const EXACT: bool = false;

            fn is_negligible(&self, scale: f64) -> bool {
                (*self as f64).abs() <= FLOAT_PIVOT_EPS * scale.max(1.0)
            }

            fn odd_root(&self, q: u32) -> Option<Self> {
                debug_assert!(q % 2 == 1);
                let mag = if q == 3 {
                    self.abs().cbrt()
                } else {
                    self.abs().powf(1.0 / q as $f)
                };
                Some(mag.copysign(*self))
            }

            fn is_finite_value(&self) -> bool {
                self.is_finite()
            }
        }
    };
}

impl_float_scalar!(f32);
impl_float_scalar!(f64);

/// Integer power with a possibly negative exponent.
pub fn powi<T: Scalar>(base: &T, exp: i32) -> T {
    let mag = num_traits::pow(base.clone(), exp.unsigned_abs() as usize);
    if exp < 0 {
        T::one() / mag
    } else {
        mag
    }
}

/// Rational `p / q` from machine integers.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Rational from an integer.
pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Exact rational value of a finite float.
pub fn rational_from_f64(v: f64) -> Option<Rational> {
    Rational::from_float(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_roots() {
        assert_eq!(int(-27).odd_root(3), Some(int(-3)));
        assert_eq!(ratio(8, 125).odd_root(3), Some(ratio(2, 5)));
        assert_eq!(int(2).odd_root(3), None);
        assert_eq!(int(32).odd_root(5), Some(int(2)));
        assert_eq!(int(0).odd_root(3), Some(int(0)));
    }

    #[test]
    fn float_roots_keep_sign() {
        let r = (-8.0_f64).odd_root(3).unwrap();
        assert!((r + 2.0).abs() < 1e-15);
        let r = (2.0_f64).odd_root(3).unwrap();
        assert!((r - 1.259_921_049_894_873).abs() < 1e-15);
    }

    #[test]
    fn negative_powers() {
        assert_eq!(powi(&int(2), -3), ratio(1, 8));
        assert_eq!(powi(&ratio(-1, 2), 3), ratio(-1, 8));
        assert_eq!(powi(&int(7), 0), int(1));
    }

    #[test]
    fn rationals_are_canonical() {
        assert_eq!(ratio(2, -4), ratio(-1, 2));
        assert!(ratio(2, -4).denom() > &BigInt::zero());
        assert_eq!("6/8".parse::<Rational>().unwrap(), ratio(3, 4));
    }
}
