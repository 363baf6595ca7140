//! The linear-algebraic non-properness criterion and its certificates.
//!
//! For a subspace `V ⊇ Im(A)` and a direction `x∞ ∈ V` with no zero
//! coordinate, a non-properness witness along `x∞` exists exactly when
//! `x∞³ ∈ Ker(A)` and some `v ∈ V` solves `x∞ + A(x∞² * v) = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Rational;
use crate::subspace::{colspace_basis, solve_in_subspace, SubspaceBasis};
use crate::vector::Vector;

type Q = Rational;

/// A pair `(x∞, v)` satisfying the criterion for `A` and `V`. Construction
/// and deserialization both re-verify every defining identity exactly.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropernessCertificate {
    matrix: Matrix<Q>,
    subspace: SubspaceBasis<Q>,
    x_inf: Vector<Q>,
    v: Vector<Q>,
}

#[derive(Deserialize)]
struct CertificateRepr {
    matrix: Matrix<Q>,
    subspace: SubspaceBasis<Q>,
    x_inf: Vector<Q>,
    v: Vector<Q>,
}

impl<'de> Deserialize<'de> for PropernessCertificate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = CertificateRepr::deserialize(d)?;
        PropernessCertificate::new(r.matrix, r.subspace, r.x_inf, r.v).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RefusalReason {
    ZeroCoordinate,
    CubeNotInKernel,
    NoSolutionV,
}

impl std::fmt::Display for RefusalReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RefusalReason::ZeroCoordinate => "x_inf has a zero coordinate",
            RefusalReason::CubeNotInKernel => "x_inf^3 is not in Ker(A)",
            RefusalReason::NoSolutionV => "no v in V solves x_inf + A(x_inf^2 * v) = 0",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CriterionOutcome {
    Certified(PropernessCertificate),
    Refused(RefusalReason),
}

impl CriterionOutcome {
    pub fn certificate(self) -> Option<PropernessCertificate> {
        match self {
            CriterionOutcome::Certified(c) => Some(c),
            CriterionOutcome::Refused(_) => None,
        }
    }
}

fn ensure_contains_image(a: &Matrix<Q>, subspace: &SubspaceBasis<Q>) -> Result<()> {
    for c in colspace_basis(a).vectors() {
        if !subspace.contains(c)? {
            return Err(Error::PreconditionViolated("Im(A) is not contained in V".into()));
        }
    }
    Ok(())
}

/// `x∞ + A(x∞² * v)`.
pub fn criterion_residual(a: &Matrix<Q>, x_inf: &Vector<Q>, v: &Vector<Q>) -> Result<Vector<Q>> {
    let inner = x_inf.square().hadamard_mul(v)?;
    Ok(x_inf + &a.mul_vec(&inner)?)
}

impl PropernessCertificate {
    pub fn new(matrix: Matrix<Q>, subspace: SubspaceBasis<Q>, x_inf: Vector<Q>, v: Vector<Q>) -> Result<Self> {
        matrix.ensure_square()?;
        let bad = |msg: &str| Err(Error::InvalidCertificate(msg.into()));
        if x_inf.len() != matrix.rows() || v.len() != matrix.rows() {
            return bad("vector length does not match the matrix");
        }
        if ensure_contains_image(&matrix, &subspace).is_err() {
            return bad("Im(A) is not contained in V");
        }
        if !subspace.contains(&x_inf)? {
            return bad("x_inf is not in V");
        }
        if !subspace.contains(&v)? {
            return bad("v is not in V");
        }
        if x_inf.has_zero_coordinate() {
            return bad("x_inf has a zero coordinate");
        }
        if !matrix.mul_vec(&x_inf.cube())?.is_zero() {
            return bad("x_inf^3 is not in Ker(A)");
        }
        if !criterion_residual(&matrix, &x_inf, &v)?.is_zero() {
            return bad("x_inf + A(x_inf^2 * v) is not zero");
        }
        Ok(Self {
            matrix,
            subspace,
            x_inf,
            v,
        })
    }

    pub fn matrix(&self) -> &Matrix<Q> {
        &self.matrix
    }

    pub fn subspace(&self) -> &SubspaceBasis<Q> {
        &self.subspace
    }

    pub fn x_inf(&self) -> &Vector<Q> {
        &self.x_inf
    }

    pub fn v(&self) -> &Vector<Q> {
        &self.v
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

/// Decides the criterion for the given `x∞`, returning the minimum-norm `v`.
pub fn criterion_check(a: &Matrix<Q>, subspace: &SubspaceBasis<Q>, x_inf: &Vector<Q>) -> Result<CriterionOutcome> {
    a.ensure_square()?;
    ensure_contains_image(a, subspace)?;
    if !subspace.contains(x_inf)? {
        return Err(Error::PreconditionViolated("x_inf is not in V".into()));
    }
    if x_inf.has_zero_coordinate() {
        return Ok(CriterionOutcome::Refused(RefusalReason::ZeroCoordinate));
    }
    if !a.mul_vec(&x_inf.cube())?.is_zero() {
        return Ok(CriterionOutcome::Refused(RefusalReason::CubeNotInKernel));
    }
    let operator = a.mul_mat(&Matrix::diag(&x_inf.square()))?;
    match solve_in_subspace(&operator, subspace, &-x_inf)? {
        Some(v) => Ok(CriterionOutcome::Certified(PropernessCertificate::new(
            a.clone(),
            subspace.clone(),
            x_inf.clone(),
            v,
        )?)),
        None => Ok(CriterionOutcome::Refused(RefusalReason::NoSolutionV)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};
    use crate::subspace::SubspaceLabel;

    fn instance() -> Matrix<Q> {
        Matrix::from_int_rows(&[[1, -5, 4], [2, -5, 3], [1, -5, 4]])
    }

    fn fifth_101(sign: i64) -> Vector<Q> {
        Vector::new(vec![ratio(sign, 5), int(0), ratio(sign, 5)])
    }

    #[test]
    fn instance_is_certified() {
        let a = instance();
        let im = colspace_basis(&a);
        let cert = criterion_check(&a, &im, &Vector::ones(3))
            .unwrap()
            .certificate()
            .unwrap();
        assert!(criterion_residual(&a, cert.x_inf(), cert.v()).unwrap().is_zero());
        assert_eq!(cert.v(), &Vector::new(vec![ratio(-1, 15), ratio(2, 15), ratio(-1, 15)]));
        // the representative −(1/5)(1,0,1) is equally valid
        let alt = PropernessCertificate::new(a.clone(), im, Vector::ones(3), fifth_101(-1)).unwrap();
        assert!(alt.v().norm_sq() > cert.v().norm_sq());
    }

    #[test]
    fn refusals() {
        let a = instance();
        let im = colspace_basis(&a);
        assert_eq!(
            criterion_check(&a, &im, &Vector::from_ints(&[1, 0, 1])).unwrap(),
            CriterionOutcome::Refused(RefusalReason::ZeroCoordinate)
        );
        let id = Matrix::<Q>::identity(3);
        assert_eq!(
            criterion_check(&id, &colspace_basis(&id), &Vector::from_ints(&[1, 2, -3])).unwrap(),
            CriterionOutcome::Refused(RefusalReason::CubeNotInKernel)
        );
        // A = 0: the cube condition is vacuous but x∞ + A(·) = x∞ ≠ 0
        let d = Matrix::<Q>::zeros(3, 3);
        let full = colspace_basis(&Matrix::<Q>::identity(3));
        assert_eq!(
            criterion_check(&d, &full, &Vector::ones(3)).unwrap(),
            CriterionOutcome::Refused(RefusalReason::NoSolutionV)
        );
    }

    #[test]
    fn preconditions() {
        let a = instance();
        let line = SubspaceBasis::new(3, vec![Vector::ones(3)], SubspaceLabel::Custom).unwrap();
        assert!(matches!(
            criterion_check(&a, &line, &Vector::ones(3)),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(matches!(
            criterion_check(&a, &colspace_basis(&a), &Vector::from_ints(&[1, 0, 0])),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn forged_certificates_rejected() {
        let a = instance();
        let im = colspace_basis(&a);
        assert!(PropernessCertificate::new(a.clone(), im.clone(), Vector::ones(3), fifth_101(1)).is_err());
        assert!(PropernessCertificate::new(a.clone(), im, Vector::from_ints(&[2, 2, 2]), fifth_101(-1)).is_err());
    }

    #[test]
    fn deserialization_reverifies() {
        let a = instance();
        let cert = criterion_check(&a, &colspace_basis(&a), &Vector::ones(3))
            .unwrap()
            .certificate()
            .unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        let back: PropernessCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
        let tampered = json.replace(r#""v":{"coords":["-1/15""#, r#""v":{"coords":["1/15""#);
        assert_ne!(tampered, json);
        assert!(serde_json::from_str::<PropernessCertificate>(&tampered).is_err());
    }
}
