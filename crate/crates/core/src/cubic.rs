//! The maps `F_A(x) = x + (Ax)³` and `F̂_A(x) = x + A(x³)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::subspace::kernel_basis;
use crate::vector::Vector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapVariant {
    /// `x + (Ax)³`
    Standard,
    /// `x + A(x³)`
    Hat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CubicMap<T: Scalar> {
    a: Matrix<T>,
    variant: MapVariant,
}

impl<T: Scalar> CubicMap<T> {
    pub fn new(a: Matrix<T>, variant: MapVariant) -> Result<Self> {
        a.ensure_square()?;
        Ok(Self { a, variant })
    }

    pub fn standard(a: Matrix<T>) -> Result<Self> {
        Self::new(a, MapVariant::Standard)
    }

    pub fn hat(a: Matrix<T>) -> Result<Self> {
        Self::new(a, MapVariant::Hat)
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.a
    }

    pub fn variant(&self) -> MapVariant {
        self.variant
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn eval(&self, x: &Vector<T>) -> Result<Vector<T>> {
        let cubic = match self.variant {
            MapVariant::Standard => self.a.mul_vec(x)?.cube(),
            MapVariant::Hat => self.a.mul_vec(&x.cube())?,
        };
        let out = x + &cubic;
        if !out.is_finite() {
            return Err(Error::Overflow);
        }
        Ok(out)
    }

    /// `JF_A(x) = I + 3·Δ[(Ax)²]·A`.
    pub fn jacobian(&self, x: &Vector<T>) -> Result<Matrix<T>> {
        if self.variant != MapVariant::Standard {
            return Err(Error::PreconditionViolated(
                "jacobian is defined for the standard variant".into(),
            ));
        }
        let n = self.dim();
        let d = Matrix::diag(&self.a.mul_vec(x)?.square());
        Ok(&Matrix::identity(n) + &(&d * &self.a).scale(&T::from_int(3)))
    }
}

/// `Δ[(Ax)²]·A`, whose nilpotency for every `x` characterises Druzkowski
/// matrices.
pub fn twisted_matrix<T: Scalar>(a: &Matrix<T>, x: &Vector<T>) -> Result<Matrix<T>> {
    let d = Matrix::diag(&a.mul_vec(x)?.square());
    d.mul_mat(a)
}

/// Checks `F_A(x + w) = F_A(x) + w` for `w ∈ Ker(A)`.
pub fn kernel_shift_check<T: Scalar>(a: &Matrix<T>, x: &Vector<T>, w: &Vector<T>) -> Result<bool> {
    if !a.mul_vec(w)?.is_zero() {
        return Err(Error::NotInKernel);
    }
    let f = CubicMap::standard(a.clone())?;
    let lhs = f.eval(&x.checked_add(w)?)?;
    let rhs = &f.eval(x)? + w;
    Ok(lhs == rhs)
}

/// Random element of `Ker(A)` with integer coefficients in the kernel basis.
pub fn kernel_combination<T: Scalar, R: rand::Rng>(a: &Matrix<T>, rng: &mut R, bound: i64) -> Vector<T> {
    let k = kernel_basis(a);
    let coeffs: Vec<T> = (0..k.dim())
        .map(|_| T::from_int(rng.random_range(-bound..=bound)))
        .collect();
    k.combine(&Vector::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, Rational};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    type Q = Rational;

    fn instance() -> Matrix<Q> {
        Matrix::from_int_rows(&[[1, -5, 4], [2, -5, 3], [1, -5, 4]])
    }

    #[test]
    fn eval_examples() {
        let f = CubicMap::standard(instance()).unwrap();
        assert_eq!(
            f.eval(&Vector::from_ints(&[1, 1, 1])).unwrap(),
            Vector::from_ints(&[1, 1, 1])
        );
        assert_eq!(f.eval(&Vector::zeros(3)).unwrap(), Vector::zeros(3));
        // hand evaluation: Ax = (1,2,1), (Ax)³ = (1,8,1), x + (Ax)³ = (2,8,1)
        assert_eq!(
            f.eval(&Vector::from_ints(&[1, 0, 0])).unwrap(),
            Vector::from_ints(&[2, 8, 1])
        );

        let g = CubicMap::hat(instance()).unwrap();
        // x³ = (8,0,0), A x³ = (8,16,8)
        assert_eq!(
            g.eval(&Vector::from_ints(&[2, 0, 0])).unwrap(),
            Vector::from_ints(&[10, 16, 8])
        );
    }

    #[test]
    fn numeric_overflow_is_flagged() {
        let f = CubicMap::standard(instance().to_float()).unwrap();
        let x = Vector::new(vec![1e120, 0.0, 0.0]);
        assert_eq!(f.eval(&x), Err(Error::Overflow));
        assert!(CubicMap::standard(Matrix::<Q>::zeros(2, 3)).is_err());
    }

    #[test]
    fn jacobian_examples() {
        let f = CubicMap::standard(instance()).unwrap();
        assert_eq!(f.jacobian(&Vector::zeros(3)).unwrap(), Matrix::identity(3));
        let j = f.jacobian(&Vector::from_ints(&[1, 0, 0])).unwrap();
        let expected =
            &Matrix::identity(3) + &(&Matrix::diag(&Vector::from_ints(&[1, 4, 1])) * &instance()).scale(&int(3));
        assert_eq!(j, expected);
        assert_eq!(j.trace(), int(-42));

        let upper: Matrix<Q> = Matrix::from_int_rows(&[[0, 2, -1], [0, 0, 3], [0, 0, 0]]);
        let j = CubicMap::standard(upper)
            .unwrap()
            .jacobian(&Vector::from_ints(&[1, -2, 5]))
            .unwrap();
        for i in 0..3 {
            assert_eq!(j[(i, i)], int(1));
            for k in 0..i {
                assert_eq!(j[(i, k)], int(0));
            }
        }
        assert_eq!(j.determinant().unwrap(), int(1));
        assert!(CubicMap::hat(instance()).unwrap().jacobian(&Vector::zeros(3)).is_err());
    }

    #[test]
    fn kernel_shift_examples() {
        let a = instance();
        assert!(kernel_shift_check(&a, &Vector::from_ints(&[1, 0, 0]), &Vector::from_ints(&[5, 5, 5])).unwrap());
        assert!(kernel_shift_check(&a, &Vector::from_ints(&[3, -1, 2]), &Vector::zeros(3)).unwrap());
        assert_eq!(
            kernel_shift_check(&a, &Vector::zeros(3), &Vector::from_ints(&[1, 0, 0])),
            Err(Error::NotInKernel)
        );
    }

    #[test]
    fn kernel_shift_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mats = [
            instance(),
            Matrix::zeros(3, 3),
            Matrix::from_int_rows(&[[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 0, 1], [1, 3, 3, 5]]),
        ];
        for i in 0..200 {
            let a = &mats[i % mats.len()];
            let n = a.rows();
            let x = Vector::new(
                (0..n)
                    .map(|_| crate::scalar::ratio(rng.random_range(-50i64..50), rng.random_range(1i64..9)))
                    .collect(),
            );
            let w = kernel_combination(a, &mut rng, 20);
            assert!(kernel_shift_check(a, &x, &w).unwrap());
        }
    }

    proptest! {
        #[test]
        fn standard_map_minus_identity_is_cube(x in prop::collection::vec((-30i64..30, 1i64..7), 3)) {
            let x = Vector::new(x.iter().map(|&(n, d)| crate::scalar::ratio(n, d)).collect::<Vec<Q>>());
            let f = CubicMap::standard(instance()).unwrap();
            prop_assert_eq!(&f.eval(&x).unwrap() - &x, (&instance() * &x).cube());
        }

        #[test]
        fn jacobian_matches_finite_differences(x in prop::collection::vec(-2.0f64..2.0, 3)) {
            let a = instance().to_float();
            let f = CubicMap::standard(a).unwrap();
            let x = Vector::new(x);
            let j = f.jacobian(&x).unwrap();
            let h = 1e-6;
            let scale = j.max_abs().max(1.0);
            for k in 0..3 {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[k] += h;
                xm[k] -= h;
                let col = (&f.eval(&xp).unwrap() - &f.eval(&xm).unwrap()).scale(&(0.5 / h));
                for i in 0..3 {
                    prop_assert!((col[i] - j[(i, k)]).abs() <= 1e-5 * scale,
                        "entry ({}, {}): fd {} vs {}", i, k, col[i], j[(i, k)]);
                }
            }
        }
    }
}
