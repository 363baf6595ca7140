//! Dense vectors and their coordinatewise (Hadamard) algebra.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{powi, Scalar};

#[derive(Clone, PartialEq, Debug)]
pub struct Vector<T> {
    coords: Vec<T>,
}

impl<T: Scalar> Vector<T> {
    pub fn new(coords: Vec<T>) -> Self {
        Self { coords }
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(vec![T::zero(); len])
    }

    pub fn ones(len: usize) -> Self {
        Self::new(vec![T::one(); len])
    }

    /// `i`-th standard basis vector of length `len`.
    pub fn basis(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.coords[i] = T::one();
        v
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| T::from_int(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<T> {
        self.coords
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.coords.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn has_zero_coordinate(&self) -> bool {
        self.coords.iter().any(|c| c.is_zero())
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, f: F) -> Vector<U> {
        Vector {
            coords: self.coords.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|c| c.clone() * s.clone())
    }

    pub fn dot(&self, other: &Self) -> T {
        debug_assert_eq!(self.len(), other.len());
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    /// Squared Euclidean norm, exact for exact scalars.
    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }

    /// Euclidean norm in double precision.
    pub fn norm(&self) -> f64 {
        self.to_float().norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coords.iter().map(|c| c.to_float().abs()).fold(0.0, f64::max)
    }

    pub fn to_float(&self) -> Vector<f64> {
        self.map(Scalar::to_float)
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(Scalar::is_finite_value)
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(self - other)
    }

    /// Coordinatewise product `x * y`.
    pub fn hadamard_mul(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() * b.clone()))
    }

    /// Coordinatewise square.
    pub fn square(&self) -> Self {
        self.map(|c| c.clone() * c.clone())
    }

    /// Coordinatewise cube.
    pub fn cube(&self) -> Self {
        self.map(|c| c.clone() * c.clone() * c.clone())
    }

    /// Coordinatewise signed power `x_i^(p/q)` for odd `q`.
    ///
    /// Over an exact scalar the result stays exact when every `|x_i|^(1/q)`
    /// is representable; otherwise a flagged double-precision vector is
    /// returned.
    pub fn hadamard_pow(&self, p: i32, q: u32) -> Result<Power<T>> {
        if q.is_multiple_of(2) {
            return Err(Error::EvenRootRequested(q));
        }
        if p < 0 {
            if let Some(index) = self.coords.iter().position(|c| c.is_zero()) {
                return Err(Error::ZeroToNegativePower { index });
            }
        }
        let roots: Option<Vec<T>> = self.coords.iter().map(|c| c.odd_root(q)).collect();
        match roots {
            Some(roots) => Ok(Power::Exact(Vector::new(roots.iter().map(|r| powi(r, p)).collect()))),
            None => Ok(Power::Inexact(self.to_float().map(|&c| {
                let root = c.abs().powf(1.0 / q as f64).copysign(c);
                root.powi(p)
            }))),
        }
    }

    pub(crate) fn zip_with<F: Fn(&T, &T) -> T>(&self, other: &Self, f: F) -> Self {
        Vector::new(self.coords.iter().zip(&other.coords).map(|(a, b)| f(a, b)).collect())
    }
}

/// Outcome of [`Vector::hadamard_pow`].
#[derive(Clone, Debug, PartialEq)]
pub enum Power<T> {
    Exact(Vector<T>),
    /// Some coordinate had no representable root; values are rounded.
    Inexact(Vector<f64>),
}

impl<T: Scalar> Power<T> {
    pub fn is_exact(&self) -> bool {
        matches!(self, Power::Exact(_))
    }

    pub fn exact(self) -> Option<Vector<T>> {
        match self {
            Power::Exact(v) => Some(v),
            Power::Inexact(_) => None,
        }
    }

    pub fn to_float(&self) -> Vector<f64> {
        match self {
            Power::Exact(v) => v.to_float(),
            Power::Inexact(v) => v.clone(),
        }
    }
}

impl<T> Index<usize> for Vector<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.coords[i]
    }
}

impl<T> IndexMut<usize> for Vector<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.coords[i]
    }
}

impl<T: Scalar> Add for &Vector<T> {
    type Output = Vector<T>;
    fn add(self, rhs: Self) -> Vector<T> {
        debug_assert_eq!(self.len(), rhs.len());
        self.zip_with(rhs, |a, b| a.clone() + b.clone())
    }
}

impl<T: Scalar> Sub for &Vector<T> {
    type Output = Vector<T>;
    fn sub(self, rhs: Self) -> Vector<T> {
        debug_assert_eq!(self.len(), rhs.len());
        self.zip_with(rhs, |a, b| a.clone() - b.clone())
    }
}

impl<T: Scalar> Add for Vector<T> {
    type Output = Vector<T>;
    fn add(self, rhs: Self) -> Vector<T> {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for Vector<T> {
    type Output = Vector<T>;
    fn sub(self, rhs: Self) -> Vector<T> {
        &self - &rhs
    }
}

impl<T: Scalar> Neg for &Vector<T> {
    type Output = Vector<T>;
    fn neg(self) -> Vector<T> {
        self.map(|c| -c.clone())
    }
}

impl<T: Scalar> Neg for Vector<T> {
    type Output = Vector<T>;
    fn neg(self) -> Vector<T> {
        -&self
    }
}

impl<T: Scalar> fmt::Display for Vector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Serialize, Deserialize)]
struct VectorRepr {
    coords: Vec<String>,
}

impl<T: Scalar> Serialize for Vector<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VectorRepr {
            coords: self.coords.iter().map(ToString::to_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for Vector<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = VectorRepr::deserialize(d)?;
        let coords = repr
            .coords
            .iter()
            .map(|s| crate::json::parse_scalar(s).map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<T>, _>>()?;
        Ok(Vector::new(coords))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio, Rational};
    use proptest::prelude::*;

    type Q = Rational;

    fn q(values: &[i64]) -> Vector<Q> {
        Vector::from_ints(values)
    }

    #[test]
    fn hadamard_mul_examples() {
        assert_eq!(q(&[1, 2, 3]).hadamard_mul(&q(&[1, 1, 1])).unwrap(), q(&[1, 2, 3]));
        assert_eq!(q(&[1, 2, 1]).hadamard_mul(&q(&[1, 2, 1])).unwrap(), q(&[1, 4, 1]));
        let fifth = Vector::new(vec![ratio(1, 5); 3]);
        assert_eq!(
            q(&[1, 0, 1]).hadamard_mul(&fifth).unwrap(),
            Vector::new(vec![ratio(1, 5), int(0), ratio(1, 5)])
        );
        assert_eq!(
            q(&[1, 2]).hadamard_mul(&q(&[1, 2, 3])),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        );
    }

    #[test]
    fn hadamard_pow_examples() {
        assert_eq!(
            q(&[8, -27, 1]).hadamard_pow(1, 3).unwrap(),
            Power::Exact(q(&[2, -3, 1]))
        );
        assert_eq!(q(&[1, 1, 1]).hadamard_pow(3, 1).unwrap(), Power::Exact(q(&[1, 1, 1])));

        let p = q(&[2, 2, 2]).hadamard_pow(1, 3).unwrap();
        assert!(!p.is_exact());
        // oracle: f64::cbrt
        let expected = 2.0_f64.cbrt();
        for c in p.to_float().iter() {
            assert!((c - expected).abs() < 1e-15);
            assert!((c - 1.2599).abs() < 1e-4);
        }
    }

    #[test]
    fn hadamard_pow_errors() {
        assert_eq!(
            q(&[1, 0]).hadamard_pow(-1, 3),
            Err(Error::ZeroToNegativePower { index: 1 })
        );
        assert_eq!(q(&[1, 4]).hadamard_pow(1, 2), Err(Error::EvenRootRequested(2)));
        assert_eq!(
            q(&[8, -1]).hadamard_pow(-2, 3).unwrap(),
            Power::Exact(Vector::new(vec![ratio(1, 4), int(1)]))
        );
    }

    #[test]
    fn float_vectors_share_the_algebra() {
        let x = Vector::new(vec![-8.0_f64, 27.0]);
        let r = x.hadamard_pow(2, 3).unwrap().exact().unwrap();
        assert!((r[0] - 4.0).abs() < 1e-12 && (r[1] - 9.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn cube_then_cube_root_is_identity(nums in prop::collection::vec((-50i64..50, 1i64..20), 1..6)) {
            let x = Vector::new(nums.iter().map(|&(n, d)| ratio(n, d)).collect::<Vec<Q>>());
            let cubed = x.hadamard_pow(3, 1).unwrap().exact().unwrap();
            prop_assert_eq!(cubed.hadamard_pow(1, 3).unwrap(), Power::Exact(x));
        }
    }
}
