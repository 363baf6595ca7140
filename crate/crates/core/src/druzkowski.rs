//! Randomized-exact test for the Druzkowski property.
//!
//! `A` is Druzkowski iff `Δ[(Ax)²]·A` is nilpotent for every `x`. Each entry
//! of `(Δ[(Ax)²]·A)^m` is a polynomial of degree `2m` in `x`, so a single
//! exact evaluation that is not nilpotent disproves the property, while
//! repeated successes bound the chance of a miss (Schwartz–Zippel).

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cubic::{twisted_matrix, CubicMap};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{int, Rational};
use crate::vector::Vector;

/// Coordinates of random test points are drawn from `[-N, N]`.
pub const POINT_BOUND: i64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum DruzkowskiVerdict {
    /// `Δ[(Ax)²]·A` is not nilpotent at `witness`; `trace(M^power) ≠ 0`.
    CertifiedNo {
        witness: Vector<Rational>,
        power: u32,
        #[serde(with = "crate::json::scalar_str")]
        trace: Rational,
        #[serde(with = "crate::json::scalar_str")]
        jacobian_det: Rational,
    },
    ProbablyYes {
        /// Upper bound on the probability that a non-Druzkowski matrix passes
        /// every trial.
        miss_probability: f64,
        note: String,
    },
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DruzkowskiReport {
    #[serde(flatten)]
    pub verdict: DruzkowskiVerdict,
    pub trials: usize,
    pub seed: u64,
    pub point_bound: i64,
}

impl DruzkowskiReport {
    pub fn is_certified_no(&self) -> bool {
        matches!(self.verdict, DruzkowskiVerdict::CertifiedNo { .. })
    }

    pub fn is_probably_yes(&self) -> bool {
        matches!(self.verdict, DruzkowskiVerdict::ProbablyYes { .. })
    }

    /// Re-checks a `CertifiedNo` witness from scratch.
    pub fn verify(&self, a: &Matrix<Rational>) -> Result<()> {
        if let DruzkowskiVerdict::CertifiedNo {
            witness,
            power,
            trace,
            jacobian_det,
        } = &self.verdict
        {
            let m = twisted_matrix(a, witness)?;
            let t = m.pow(*power)?.trace();
            if t.is_zero() || &t != trace {
                return Err(Error::InvalidCertificate(format!(
                    "trace of power {power} is {t}, certificate claims {trace}"
                )));
            }
            let det = CubicMap::standard(a.clone())?.jacobian(witness)?.determinant()?;
            if &det != jacobian_det {
                return Err(Error::InvalidCertificate("jacobian determinant mismatch".into()));
            }
        }
        Ok(())
    }
}

/// Smallest `k ≤ n` with `trace(M^k) ≠ 0`. Over a field of characteristic
/// zero such a `k` exists iff `M` is not nilpotent.
pub fn nonzero_power_trace(m: &Matrix<Rational>) -> Result<Option<(u32, Rational)>> {
    let n = m.ensure_square()?;
    let mut p = m.clone();
    for k in 1..=n as u32 {
        let t = p.trace();
        if !t.is_zero() {
            return Ok(Some((k, t)));
        }
        p = p.mul_mat(m)?;
    }
    Ok(None)
}

fn failing_point(a: &Matrix<Rational>, x: &Vector<Rational>) -> Result<bool> {
    Ok(!twisted_matrix(a, x)?.is_nilpotent()?)
}

pub fn druzkowski_test(a: &Matrix<Rational>, trials: usize, seed: u64) -> Result<DruzkowskiReport> {
    let n = a.ensure_square()?;
    if trials == 0 {
        return Err(Error::PreconditionViolated("trials must be at least 1".into()));
    }
    let report = |verdict| DruzkowskiReport {
        verdict,
        trials,
        seed,
        point_bound: POINT_BOUND,
    };
    if n == 0 {
        return Ok(report(DruzkowskiVerdict::Undetermined));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let x = Vector::new(
            (0..n)
                .map(|_| int(rng.random_range(-POINT_BOUND..=POINT_BOUND)))
                .collect(),
        );
        if failing_point(a, &x)? {
            let mut witness = x;
            for i in 0..n {
                let e = Vector::basis(n, i);
                if failing_point(a, &e)? {
                    witness = e;
                    break;
                }
            }
            let m = twisted_matrix(a, &witness)?;
            let (power, trace) =
                nonzero_power_trace(&m)?.expect("a non-nilpotent matrix has a power with nonzero trace");
            let jacobian_det = CubicMap::standard(a.clone())?.jacobian(&witness)?.determinant()?;
            return Ok(report(DruzkowskiVerdict::CertifiedNo {
                witness,
                power,
                trace,
                jacobian_det,
            }));
        }
    }
    let per_trial = (2 * n) as f64 / (2 * POINT_BOUND + 1) as f64;
    let miss_probability = per_trial.powi(trials as i32);
    Ok(report(DruzkowskiVerdict::ProbablyYes {
        miss_probability,
        note: format!(
            "nilpotent at {trials} random integer points in [-{POINT_BOUND}, {POINT_BOUND}]^{n}; \
             entries of (Δ[(Ax)²]A)^{n} have degree {}, so a non-Druzkowski matrix passes \
             with probability at most {miss_probability:.3e}",
            2 * n
        ),
    }))
}
