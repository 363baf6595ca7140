//! Witness sequences built from a certificate.
//!
//! `x(γ) = γ·x∞ + v/(3γ)` runs off to infinity while `F̂_A(x(γ)) = O(1/γ)`.
//! Everything is evaluated in exact rationals and rounded only at the end:
//! at `γ = 10⁵` the cubes are of order `10¹⁵` and the value of order `10⁻⁵`,
//! so evaluating in doubles would cancel every significant digit.

use serde::{Deserialize, Serialize};

use crate::cubic::CubicMap;
use crate::error::{Error, Result};
use crate::json::scalar_str;
use crate::matrix::Matrix;
use crate::properness::criterion::{criterion_residual, PropernessCertificate};
use crate::scalar::{int, Rational};
use crate::vector::Vector;

type Q = Rational;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessSequence {
    cert: PropernessCertificate,
    #[serde(with = "crate::json::scalar_vec_str")]
    gammas: Vec<Q>,
}

impl WitnessSequence {
    pub fn new(cert: PropernessCertificate, gammas: Vec<Q>) -> Result<Self> {
        if gammas.is_empty() {
            return Err(Error::PreconditionViolated("no gammas given".into()));
        }
        if gammas.iter().any(|g| *g <= int(0)) {
            return Err(Error::PreconditionViolated("gammas must be positive".into()));
        }
        if gammas.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::PreconditionViolated("gammas must be strictly increasing".into()));
        }
        Ok(Self { cert, gammas })
    }

    pub fn certificate(&self) -> &PropernessCertificate {
        &self.cert
    }

    pub fn gammas(&self) -> &[Q] {
        &self.gammas
    }

    /// `γ·x∞ + v/(3γ)`.
    pub fn point(&self, gamma: &Q) -> Vector<Q> {
        let inv = int(1) / (int(3) * gamma);
        &self.cert.x_inf().scale(gamma) + &self.cert.v().scale(&inv)
    }

    pub fn points(&self) -> Vec<Vector<Q>> {
        self.gammas.iter().map(|g| self.point(g)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FhatRow {
    #[serde(with = "scalar_str")]
    pub gamma: Q,
    pub x: Vector<Q>,
    pub fhat: Vector<Q>,
    pub norm_x: f64,
    pub norm_fhat: f64,
}

/// Evaluates `F̂_A` along the witness of a certificate.
pub fn build_fhat_witness(cert: &PropernessCertificate, gammas: &[Q]) -> Result<(WitnessSequence, Vec<FhatRow>)> {
    let ws = WitnessSequence::new(cert.clone(), gammas.to_vec())?;
    let fhat = CubicMap::hat(cert.matrix().clone())?;
    let rows = ws
        .gammas()
        .iter()
        .map(|g| {
            let x = ws.point(g);
            let value = fhat.eval(&x)?;
            Ok(FhatRow {
                gamma: g.clone(),
                norm_x: x.norm(),
                norm_fhat: value.norm(),
                x,
                fhat: value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((ws, rows))
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn decay_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::PreconditionViolated("slope needs at least two points".into()));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::PreconditionViolated("log-log fit needs positive data".into()));
    }
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::PreconditionViolated("abscissae must differ".into()));
    }
    Ok(sxy / sxx)
}

/// One entry of the kernel-side witness: `z = γ³·x∞³ ∈ Ker(A)`, `v_small = v/γ`
/// and `value = z^{1/3} + A(z^{2/3} * v_small)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Part2Row {
    #[serde(with = "scalar_str")]
    pub gamma: Q,
    pub z: Vector<Q>,
    pub v_small: Vector<Q>,
    pub value: Vector<Q>,
}

impl Part2Row {
    /// The point `z^{1/3} + v_small/3`, which is `x(γ)` of the first
    /// construction.
    pub fn regenerate_point(&self) -> Result<Vector<Q>> {
        let root = exact_root(&self.z, 1)?;
        Ok(&root + &self.v_small.scale(&Q::new(1.into(), 3.into())))
    }
}

fn exact_root(z: &Vector<Q>, p: i32) -> Result<Vector<Q>> {
    z.hadamard_pow(p, 3)?
        .exact()
        .ok_or_else(|| Error::PreconditionViolated("z is not a perfect cube".into()))
}

/// The kernel-side sequence for an arbitrary pair `(x∞, v)`. For a valid
/// certificate every value is exactly zero; otherwise it equals `γ·r` with
/// `r = x∞ + A(x∞² * v)`.
pub fn part2_values(a: &Matrix<Q>, x_inf: &Vector<Q>, v: &Vector<Q>, gammas: &[Q]) -> Result<Vec<Part2Row>> {
    a.ensure_square()?;
    let x3 = x_inf.cube();
    if !a.mul_vec(&x3)?.is_zero() {
        return Err(Error::PreconditionViolated("x_inf^3 is not in Ker(A)".into()));
    }
    gammas
        .iter()
        .map(|g| {
            if *g <= int(0) {
                return Err(Error::PreconditionViolated("gammas must be positive".into()));
            }
            let z = x3.scale(&(g * g * g));
            let v_small = v.scale(&(int(1) / g));
            let inner = exact_root(&z, 2)?.hadamard_mul(&v_small)?;
            let value = &exact_root(&z, 1)? + &a.mul_vec(&inner)?;
            Ok(Part2Row {
                gamma: g.clone(),
                z,
                v_small,
                value,
            })
        })
        .collect()
}

pub fn theorem1_part2_witness(cert: &PropernessCertificate, gammas: &[Q]) -> Result<Vec<Part2Row>> {
    part2_values(cert.matrix(), cert.x_inf(), cert.v(), gammas)
}

/// `γ·(x∞ + A(x∞² * v))`, the closed form of a part-2 value.
pub fn part2_closed_form(a: &Matrix<Q>, x_inf: &Vector<Q>, v: &Vector<Q>, gamma: &Q) -> Result<Vector<Q>> {
    Ok(criterion_residual(a, x_inf, v)?.scale(gamma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::properness::criterion::criterion_check;
    use crate::scalar::{ratio, Scalar as _};
    use crate::subspace::colspace_basis;
    use proptest::prelude::*;

    fn instance() -> Matrix<Q> {
        Matrix::from_int_rows(&[[1, -5, 4], [2, -5, 3], [1, -5, 4]])
    }

    fn min_norm_cert() -> PropernessCertificate {
        let a = instance();
        criterion_check(&a, &colspace_basis(&a), &Vector::ones(3))
            .unwrap()
            .certificate()
            .unwrap()
    }

    fn fifth_cert() -> PropernessCertificate {
        let a = instance();
        let v = Vector::new(vec![ratio(-1, 5), int(0), ratio(-1, 5)]);
        PropernessCertificate::new(a.clone(), colspace_basis(&a), Vector::ones(3), v).unwrap()
    }

    fn q(v: &[(i64, i64)]) -> Vector<Q> {
        Vector::new(v.iter().map(|&(p, d)| ratio(p, d)).collect())
    }

    #[test]
    fn fhat_at_gamma_one() {
        // values from an independent symbolic evaluation
        let (_, rows) = build_fhat_witness(&fifth_cert(), &[int(1)]).unwrap();
        assert_eq!(rows[0].x, q(&[(14, 15), (1, 1), (14, 15)]));
        assert_eq!(rows[0].fhat, q(&[(-1, 675), (44, 675), (-1, 675)]));

        let (_, rows) = build_fhat_witness(&min_norm_cert(), &[int(1)]).unwrap();
        assert_eq!(rows[0].x, q(&[(44, 45), (47, 45), (44, 45)]));
        assert_eq!(rows[0].fhat, q(&[(-91, 2025), (44, 2025), (-91, 2025)]));
    }

    #[test]
    fn fhat_closed_form() {
        // F̂(x(γ)) = (−1, 45γ² − 1, −1)/(675γ³) for the −(1/5)(1,0,1) certificate
        let gammas: Vec<Q> = [2, 7, 10, 1000].iter().map(|&g| int(g)).collect();
        let (_, rows) = build_fhat_witness(&fifth_cert(), &gammas).unwrap();
        for r in rows {
            let g = &r.gamma;
            let d = int(675) * g * g * g;
            let mid = int(45) * g * g - int(1);
            assert_eq!(r.fhat, Vector::new(vec![int(-1) / &d, mid / &d, int(-1) / &d]));
        }
    }

    #[test]
    fn decay_is_first_order() {
        let gammas: Vec<Q> = [100, 1000, 10_000, 100_000].iter().map(|&g| int(g)).collect();
        for cert in [min_norm_cert(), fifth_cert()] {
            let (_, rows) = build_fhat_witness(&cert, &gammas).unwrap();
            let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.gamma.to_float(), r.norm_fhat)).collect();
            let s = decay_slope(&pts).unwrap();
            assert!((-1.05..=-0.95).contains(&s), "{s}");
        }
    }

    #[test]
    fn sequence_preconditions() {
        let c = fifth_cert();
        assert!(WitnessSequence::new(c.clone(), vec![]).is_err());
        assert!(WitnessSequence::new(c.clone(), vec![int(0)]).is_err());
        assert!(WitnessSequence::new(c.clone(), vec![int(10), int(10)]).is_err());
        assert!(WitnessSequence::new(c, vec![int(10), int(1)]).is_err());
        // v = 0 with A·x∞ = 0 would give F̂ = γ·x∞, which does not decay; the
        // certificate type cannot be built for it
        let a = instance();
        assert!(PropernessCertificate::new(a.clone(), colspace_basis(&a), Vector::ones(3), Vector::zeros(3)).is_err());
        assert!(decay_slope(&[(1.0, 1.0)]).is_err());
        assert!(decay_slope(&[(1.0, 0.0), (2.0, 1.0)]).is_err());
    }

    #[test]
    fn part2_is_identically_zero() {
        let gammas: Vec<Q> = vec![int(1), int(10), int(100), ratio(7, 3)];
        for cert in [min_norm_cert(), fifth_cert()] {
            let rows = theorem1_part2_witness(&cert, &gammas).unwrap();
            let (ws, _) = build_fhat_witness(&cert, &[int(1), ratio(7, 3), int(10), int(100)]).unwrap();
            for r in &rows {
                assert!(r.value.is_zero());
                assert!(cert.matrix().mul_vec(&r.z).unwrap().is_zero());
                assert_eq!(r.regenerate_point().unwrap(), ws.point(&r.gamma));
            }
        }
    }

    #[test]
    fn part2_grows_for_invalid_pairs() {
        let a = instance();
        let v = Vector::new(vec![ratio(1, 5), int(0), ratio(1, 5)]);
        let rows = part2_values(&a, &Vector::ones(3), &v, &[int(1), int(10), int(100)]).unwrap();
        let r = criterion_residual(&a, &Vector::ones(3), &v).unwrap();
        assert!(!r.is_zero());
        for row in rows {
            assert_eq!(row.value, r.scale(&row.gamma));
        }
    }

    proptest! {
        #[test]
        fn part2_matches_closed_form(
            v in prop::collection::vec((-20i64..20, 1i64..9), 3),
            g in (1i64..500, 1i64..9),
        ) {
            let a = instance();
            let v = Vector::new(v.iter().map(|&(p, d)| ratio(p, d)).collect());
            let gamma = ratio(g.0, g.1);
            let rows = part2_values(&a, &Vector::ones(3), &v, std::slice::from_ref(&gamma)).unwrap();
            prop_assert_eq!(&rows[0].value, &part2_closed_form(&a, &Vector::ones(3), &v, &gamma).unwrap());
        }
    }
}
