//! Subspaces attached to a matrix: `Ker(A)`, `Im(Aᵀ)`, `Im(A)`, orthogonal
//! projections onto them and constrained linear solves.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::vector::Vector;

/// Default relative tolerance for numeric membership tests.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubspaceLabel {
    Kernel,
    Rowspace,
    Colspace,
    Custom,
}

/// An ordered basis of a subspace of `T^m`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct SubspaceBasis<T: Scalar> {
    ambient_dim: usize,
    vectors: Vec<Vector<T>>,
    label: SubspaceLabel,
}

#[derive(Deserialize)]
#[serde(bound = "")]
struct BasisRepr<T: Scalar> {
    ambient_dim: usize,
    vectors: Vec<Vector<T>>,
    label: SubspaceLabel,
}

impl<'de, T: Scalar> Deserialize<'de> for SubspaceBasis<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = BasisRepr::<T>::deserialize(d)?;
        SubspaceBasis::new(r.ambient_dim, r.vectors, r.label).map_err(serde::de::Error::custom)
    }
}

/// How [`SubspaceBasis::membership`] decides.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MembershipMode {
    Exact,
    /// Relative residual bound `ε · max(1, ‖x‖)`.
    Tolerance(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub member: bool,
    /// Euclidean norm of `x − proj(x)`.
    pub residual: f64,
}

impl<T: Scalar> SubspaceBasis<T> {
    /// Validates that the vectors are nonzero, of length `ambient_dim` and
    /// linearly independent.
    pub fn new(ambient_dim: usize, vectors: Vec<Vector<T>>, label: SubspaceLabel) -> Result<Self> {
        for v in &vectors {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: v.len(),
                });
            }
            if v.is_zero() {
                return Err(Error::PreconditionViolated("zero basis vector".into()));
            }
        }
        let basis = Self {
            ambient_dim,
            vectors,
            label,
        };
        if basis.matrix().rank() != basis.dim() {
            return Err(Error::PreconditionViolated(
                "basis vectors are linearly dependent".into(),
            ));
        }
        Ok(basis)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vector<T>] {
        &self.vectors
    }

    pub fn label(&self) -> SubspaceLabel {
        self.label
    }

    /// `m × k` matrix with the basis vectors as columns.
    pub fn matrix(&self) -> Matrix<T> {
        Matrix::from_columns(self.ambient_dim, &self.vectors)
    }

    /// Vector with the given coordinates in this basis.
    pub fn combine(&self, coeffs: &Vector<T>) -> Vector<T> {
        &self.matrix() * coeffs
    }

    /// Orthogonal projection onto the span, via the normal equations
    /// `BᵀB c = Bᵀx`.
    pub fn project(&self, x: &Vector<T>) -> Result<Vector<T>> {
        self.check_dim(x)?;
        if self.vectors.is_empty() {
            return Ok(Vector::zeros(self.ambient_dim));
        }
        let b = self.matrix();
        let bt = b.transpose();
        let gram = &bt * &b;
        let rhs = &bt * x;
        let coeffs = gram
            .solve_particular(&rhs)?
            .expect("Gram matrix of an independent family is invertible");
        Ok(&b * &coeffs)
    }

    pub fn contains(&self, x: &Vector<T>) -> Result<bool> {
        Ok(self.membership(x, MembershipMode::Exact)?.member)
    }

    pub fn membership(&self, x: &Vector<T>, mode: MembershipMode) -> Result<Membership> {
        self.check_dim(x)?;
        match mode {
            MembershipMode::Exact => {
                let r = x - &self.project(x)?;
                Ok(Membership {
                    member: r.is_zero(),
                    residual: r.norm(),
                })
            }
            MembershipMode::Tolerance(eps) => self.to_float().membership_float(&x.to_float(), eps),
        }
    }

    pub fn to_float(&self) -> SubspaceBasis<f64> {
        SubspaceBasis {
            ambient_dim: self.ambient_dim,
            vectors: self.vectors.iter().map(Vector::to_float).collect(),
            label: self.label,
        }
    }

    fn check_dim(&self, x: &Vector<T>) -> Result<()> {
        if x.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: x.len(),
            });
        }
        Ok(())
    }
}

impl SubspaceBasis<f64> {
    fn membership_float(&self, x: &Vector<f64>, eps: f64) -> Result<Membership> {
        if eps.is_nan() || eps <= 0.0 {
            return Err(Error::PreconditionViolated(format!(
                "tolerance must be positive, got {eps}"
            )));
        }
        let residual = (x - &self.project(x)?).norm();
        Ok(Membership {
            member: residual <= eps * x.norm().max(1.0),
            residual,
        })
    }
}

/// Basis of `Ker(A)`: one vector per free column of the reduced echelon form,
/// carrying a 1 in that column.
pub fn kernel_basis<T: Scalar>(a: &Matrix<T>) -> SubspaceBasis<T> {
    let ech = a.rref();
    let n = a.cols();
    let vectors = (0..n)
        .filter(|c| !ech.pivots.contains(c))
        .map(|free| {
            let mut v = Vector::zeros(n);
            v[free] = T::one();
            for (r, &p) in ech.pivots.iter().enumerate() {
                v[p] = -ech.reduced[(r, free)].clone();
            }
            v
        })
        .collect();
    SubspaceBasis {
        ambient_dim: n,
        vectors,
        label: SubspaceLabel::Kernel,
    }
}

/// Basis of `Im(Aᵀ)` made of the first linearly independent rows of `A`.
pub fn rowspace_basis<T: Scalar>(a: &Matrix<T>) -> SubspaceBasis<T> {
    let pivots = a.transpose().rref().pivots;
    SubspaceBasis {
        ambient_dim: a.cols(),
        vectors: pivots.iter().map(|&i| a.row(i)).collect(),
        label: SubspaceLabel::Rowspace,
    }
}

/// Basis of `Im(A)` made of the first linearly independent columns of `A`.
pub fn colspace_basis<T: Scalar>(a: &Matrix<T>) -> SubspaceBasis<T> {
    let pivots = a.rref().pivots;
    SubspaceBasis {
        ambient_dim: a.rows(),
        vectors: pivots.iter().map(|&j| a.column(j)).collect(),
        label: SubspaceLabel::Colspace,
    }
}

/// Splits `x = z + u` with `z ∈ Ker(A)` and `u ∈ Im(Aᵀ)`.
pub fn decompose<T: Scalar>(x: &Vector<T>, a: &Matrix<T>) -> Result<(Vector<T>, Vector<T>)> {
    let u = rowspace_basis(a).project(x)?;
    Ok((x - &u, u))
}

/// Minimum-norm `v ∈ V` with `M·v = target`, or `None` when no such `v`
/// exists.
pub fn solve_in_subspace<T: Scalar>(
    m: &Matrix<T>,
    v: &SubspaceBasis<T>,
    target: &Vector<T>,
) -> Result<Option<Vector<T>>> {
    if v.ambient_dim() != m.cols() {
        return Err(Error::DimensionMismatch {
            expected: m.cols(),
            found: v.ambient_dim(),
        });
    }
    let b = v.matrix();
    let mb = m.mul_mat(&b)?;
    let Some(coeffs) = mb.solve_particular(target)? else {
        return Ok(None);
    };
    let particular = &b * &coeffs;
    // Solutions form particular + W with W = {w ∈ V : M·w = 0}.
    let null = kernel_basis(&mb);
    if null.dim() == 0 {
        return Ok(Some(particular));
    }
    let w = SubspaceBasis::new(
        v.ambient_dim(),
        null.vectors().iter().map(|n| &b * n).collect(),
        SubspaceLabel::Custom,
    )?;
    let shift = w.project(&particular)?;
    Ok(Some(&particular - &shift))
}

/// Solves `A·y = u` for the unique `y ∈ Im(Aᵀ)`.
///
/// Writing `y = R·c` with `R` the rowspace basis, `A·R` has full column rank;
/// its first independent rows give a square system that determines `c`.
#[derive(Clone, Debug)]
pub struct CoimageSolver<T: Scalar> {
    a: Matrix<T>,
    rowspace: SubspaceBasis<T>,
    selected_rows: Vec<usize>,
    system: Matrix<T>,
}

impl<T: Scalar> CoimageSolver<T> {
    pub fn new(a: &Matrix<T>) -> Result<Self> {
        a.ensure_square()?;
        let rowspace = rowspace_basis(a);
        let ar = a.mul_mat(&rowspace.matrix())?;
        let selected_rows = ar.transpose().rref().pivots;
        let system = ar.select_rows(&selected_rows);
        Ok(Self {
            a: a.clone(),
            rowspace,
            selected_rows,
            system,
        })
    }

    /// The square matrix `(A·R)` restricted to its independent rows.
    pub fn system_matrix(&self) -> &Matrix<T> {
        &self.system
    }

    pub fn selected_rows(&self) -> &[usize] {
        &self.selected_rows
    }

    pub fn rowspace(&self) -> &SubspaceBasis<T> {
        &self.rowspace
    }

    pub fn solve(&self, u: &Vector<T>) -> Result<Vector<T>> {
        if u.len() != self.a.rows() {
            return Err(Error::DimensionMismatch {
                expected: self.a.rows(),
                found: u.len(),
            });
        }
        let rhs = Vector::new(self.selected_rows.iter().map(|&i| u[i].clone()).collect());
        let coeffs = self.system.solve_particular(&rhs)?.expect("square system of full rank");
        let y = self.rowspace.combine(&coeffs);
        let back = &self.a * &y;
        let scale = u.max_abs().max(1.0);
        if (&back - u).iter().all(|c| c.is_negligible(scale)) {
            Ok(y)
        } else {
            Err(Error::NotInImage)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio, Rational};
    use proptest::prelude::*;

    type Q = Rational;

    fn instance() -> Matrix<Q> {
        Matrix::from_int_rows(&[[1, -5, 4], [2, -5, 3], [1, -5, 4]])
    }

    fn q(v: &[i64]) -> Vector<Q> {
        Vector::from_ints(v)
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&instance());
        assert_eq!(k.vectors(), &[q(&[1, 1, 1])]);
        assert_eq!(kernel_basis(&Matrix::<Q>::identity(3)).dim(), 0);
        let z = kernel_basis(&Matrix::<Q>::zeros(3, 3));
        assert_eq!(z.vectors(), &[q(&[1, 0, 0]), q(&[0, 1, 0]), q(&[0, 0, 1])]);
    }

    #[test]
    fn row_and_column_spaces() {
        let r = rowspace_basis(&instance());
        assert_eq!(r.vectors(), &[q(&[1, -5, 4]), q(&[2, -5, 3])]);
        let c = colspace_basis(&instance());
        assert_eq!(c.dim(), 2);
        assert!(c.contains(&q(&[1, 1, 1])).unwrap());
        assert!(c.contains(&q(&[1, 0, 1])).unwrap());
        assert!(!c.contains(&q(&[1, 0, 0])).unwrap());
        let id = Matrix::<Q>::identity(3);
        let std_basis = vec![q(&[1, 0, 0]), q(&[0, 1, 0]), q(&[0, 0, 1])];
        assert_eq!(rowspace_basis(&id).vectors(), std_basis.as_slice());
        assert_eq!(colspace_basis(&id).vectors(), std_basis.as_slice());
    }

    #[test]
    fn decompose_examples() {
        let a = instance();
        let (z, u) = decompose(&q(&[2, 2, 2]), &a).unwrap();
        assert_eq!((z, u), (q(&[2, 2, 2]), q(&[0, 0, 0])));
        let (z, u) = decompose(&q(&[1, -5, 4]), &a).unwrap();
        assert_eq!((z, u), (q(&[0, 0, 0]), q(&[1, -5, 4])));
        // oracle: projection onto span{(1,1,1)} is <x,1>/3 · (1,1,1)
        let (z, u) = decompose(&q(&[1, 0, 0]), &a).unwrap();
        let t = ratio(1, 3);
        assert_eq!(z, Vector::new(vec![t.clone(), t.clone(), t]));
        assert_eq!(z.dot(&u), int(0));
        assert_eq!(&z + &u, q(&[1, 0, 0]));
    }

    #[test]
    fn membership_modes() {
        let c = colspace_basis(&instance());
        let m = c.membership(&q(&[1, 1, 1]), MembershipMode::Exact).unwrap();
        assert!(m.member);
        assert_eq!(m.residual, 0.0);

        let line = SubspaceBasis::new(3, vec![q(&[1, 1, 1])], SubspaceLabel::Custom).unwrap();
        assert!(!line.contains(&q(&[1, 0, 0])).unwrap());

        let fline = line.to_float();
        let x = Vector::new(vec![1.000_000_1, 1.0, 1.0]);
        let m = fline.membership(&x, MembershipMode::Tolerance(1e-5)).unwrap();
        assert!(m.member);
        // oracle: residual of (δ,0,0) against the diagonal is δ·sqrt(2/3)
        let expected = 1e-7 * (2.0_f64 / 3.0).sqrt();
        assert!((m.residual - expected).abs() < 1e-12);
        assert!(!fline.membership(&x, MembershipMode::Tolerance(1e-9)).unwrap().member);
        assert!(fline.membership(&x, MembershipMode::Tolerance(0.0)).is_err());
    }

    #[test]
    fn basis_validation() {
        assert!(SubspaceBasis::new(3, vec![q(&[1, 1, 1]), q(&[2, 2, 2])], SubspaceLabel::Custom).is_err());
        assert!(SubspaceBasis::new(3, vec![q(&[0, 0, 0])], SubspaceLabel::Custom).is_err());
        assert!(SubspaceBasis::new(2, vec![q(&[1, 0, 0])], SubspaceLabel::Custom).is_err());
    }

    #[test]
    fn solve_in_subspace_examples() {
        let a = instance();
        let im = colspace_basis(&a);
        let v = solve_in_subspace(&a, &im, &q(&[1, 1, 1])).unwrap().unwrap();
        assert_eq!(&a * &v, q(&[1, 1, 1]));
        assert!(im.contains(&v).unwrap());
        // (1/5)(1,0,1) is a valid representative; the minimum-norm one is
        // shorter
        let rep = Vector::new(vec![ratio(1, 5), int(0), ratio(1, 5)]);
        assert_eq!(&a * &rep, q(&[1, 1, 1]));
        assert!(v.norm_sq() <= rep.norm_sq());
        // oracle: rep minus its projection on Ker(A) ∩ Im(A) = span{(1,1,1)}
        assert_eq!(v, Vector::new(vec![ratio(1, 15), ratio(-2, 15), ratio(1, 15)]));

        assert_eq!(solve_in_subspace(&a, &im, &q(&[0, 0, 0])).unwrap(), Some(q(&[0, 0, 0])));
        assert_eq!(solve_in_subspace(&a, &im, &q(&[1, 0, 0])).unwrap(), None);
    }

    #[test]
    fn coimage_solver_instance() {
        let s = CoimageSolver::new(&instance()).unwrap();
        assert_eq!(s.system_matrix(), &Matrix::from_int_rows(&[[42, 39], [39, 38]]));
        let y = s.solve(&q(&[1, 1, 1])).unwrap();
        assert_eq!(y, Vector::new(vec![ratio(1, 15), ratio(-2, 15), ratio(1, 15)]));
        assert_eq!(s.solve(&q(&[1, 0, 0])), Err(Error::NotInImage));
    }

    fn arb_matrix() -> impl Strategy<Value = Matrix<Q>> {
        // products of thin integer factors give every rank from 0 to n
        (1usize..5, 0usize..5).prop_flat_map(|(n, r)| {
            let r = r.min(n);
            (
                prop::collection::vec(-4i64..5, n * r),
                prop::collection::vec(-4i64..5, r * n),
            )
                .prop_map(move |(l, rr)| {
                    let left = Matrix::from_rows((0..n).map(|i| (0..r).map(|j| int(l[i * r + j])).collect()).collect())
                        .unwrap_or_else(|_| Matrix::zeros(n, r));
                    let right =
                        Matrix::from_rows((0..r).map(|i| (0..n).map(|j| int(rr[i * n + j])).collect()).collect())
                            .unwrap_or_else(|_| Matrix::zeros(r, n));
                    if r == 0 {
                        Matrix::zeros(n, n)
                    } else {
                        &left * &right
                    }
                })
        })
    }

    proptest! {
        #[test]
        fn decomposition_is_orthogonal(a in arb_matrix(), seed in prop::collection::vec(-9i64..10, 4)) {
            let n = a.cols();
            let x = Vector::<Q>::from_ints(&seed[..n]);
            let (z, u) = decompose(&x, &a).unwrap();
            prop_assert!((&a * &z).is_zero());
            prop_assert_eq!(z.dot(&u), int(0));
            prop_assert_eq!(&z + &u, x);
        }

        #[test]
        fn rank_nullity(a in arb_matrix()) {
            prop_assert_eq!(kernel_basis(&a).dim() + rowspace_basis(&a).dim(), a.cols());
            prop_assert_eq!(colspace_basis(&a).dim(), rowspace_basis(&a).dim());
        }

        #[test]
        fn coimage_vectors_are_not_annihilated(a in arb_matrix(), c in prop::collection::vec(-5i64..6, 4)) {
            let r = rowspace_basis(&a);
            let coeffs = Vector::<Q>::from_ints(&c[..r.dim()]);
            let z = r.combine(&coeffs);
            if !z.is_zero() {
                prop_assert!(!(&a * &z).is_zero());
            }
        }

        #[test]
        fn subspace_solve_is_minimal(a in arb_matrix(), c in prop::collection::vec(-5i64..6, 4), w in prop::collection::vec(-3i64..4, 4)) {
            let v = colspace_basis(&a);
            let seed = v.combine(&Vector::from_ints(&c[..v.dim()]));
            let target = &a * &seed;
            let sol = solve_in_subspace(&a, &v, &target).unwrap().unwrap();
            prop_assert_eq!(&a * &sol, target.clone());
            prop_assert!(v.contains(&sol).unwrap());
            prop_assert!(sol.norm_sq() <= seed.norm_sq());
            // any other solution in V: add an element of V ∩ Ker(A)
            let shift_src = v.combine(&Vector::from_ints(&w[..v.dim()]));
            let (kpart, _) = decompose(&shift_src, &a).unwrap();
            if v.contains(&kpart).unwrap() {
                let other = &sol + &kpart;
                prop_assert_eq!(&a * &other, target);
                prop_assert!(sol.norm_sq() <= other.norm_sq());
            }
        }
    }
}
