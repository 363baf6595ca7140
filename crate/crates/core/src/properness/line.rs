//! Lines in the non-proper value set.
//!
//! Shrinking a lifted witness radially, `z' = (1 − t/‖z‖)·z`, moves `F_A(z')`
//! to `anchor + 2t·ẑ` in the limit, where `ẑ` is the unit limiting direction
//! of `z/‖z‖`. Sweeping `t` traces the whole line `anchor + ℝ·ẑ`.
//!
//! The shrink factor is irrational, so it is rounded to a double once and the
//! map is then evaluated exactly on the rounded factor. The limit is fitted by
//! least squares in `1/γ`, which is the order of the leading error term.

use serde::{Deserialize, Serialize};

use crate::cubic::CubicMap;
use crate::error::{Error, Result};
use crate::properness::lift::LiftedWitness;
use crate::scalar::{int, rational_from_f64, Rational, Scalar};
use crate::vector::Vector;

type Q = Rational;

/// Relative tolerance for collinearity, magnitude and fit residual.
pub const LINE_TOLERANCE: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EmpiricalSign {
    #[serde(rename = "+2")]
    Plus2,
    #[serde(rename = "-2")]
    Minus2,
    #[serde(rename = "undetermined")]
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonProperLine {
    pub anchor: Vector<Q>,
    pub direction: Vector<Q>,
    pub empirical_sign: EmpiricalSign,
}

impl NonProperLine {
    pub fn new(anchor: Vector<Q>, direction: Vector<Q>, empirical_sign: EmpiricalSign) -> Result<Self> {
        if direction.is_zero() {
            return Err(Error::PreconditionViolated("line direction must be nonzero".into()));
        }
        if anchor.len() != direction.len() {
            return Err(Error::DimensionMismatch {
                expected: anchor.len(),
                found: direction.len(),
            });
        }
        Ok(Self {
            anchor,
            direction,
            empirical_sign,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineSample {
    pub t: f64,
    pub gammas: Vec<f64>,
    /// `F_A((1 − t/‖z‖)·z)` at each used record.
    pub values: Vec<Vector<f64>>,
    pub limit: Vector<f64>,
    pub fit_residual: f64,
    /// `‖d − (d·ẑ)ẑ‖ / ‖d‖` with `d = limit − anchor`.
    pub collinearity_residual: f64,
    /// `|‖d‖ − 2|t|| / (2|t|)`; for `t = 0` this is `‖d‖`.
    pub magnitude_error: f64,
    pub line: NonProperLine,
}

fn fit_limit(hs: &[f64], values: &[Vector<f64>]) -> (Vector<f64>, f64) {
    let n = hs.len();
    let dim = values[0].len();
    if n == 1 {
        return (values[0].clone(), 0.0);
    }
    let mh = hs.iter().sum::<f64>() / n as f64;
    let shh: f64 = hs.iter().map(|h| (h - mh).powi(2)).sum();
    let mut limit = vec![0.0; dim];
    let mut sq = 0.0;
    for i in 0..dim {
        let ys: Vec<f64> = values.iter().map(|v| v[i]).collect();
        let my = ys.iter().sum::<f64>() / n as f64;
        let slope = if shh > 0.0 {
            hs.iter().zip(&ys).map(|(h, y)| (h - mh) * (y - my)).sum::<f64>() / shh
        } else {
            0.0
        };
        let intercept = my - slope * mh;
        limit[i] = intercept;
        sq += hs
            .iter()
            .zip(&ys)
            .map(|(h, y)| (y - intercept - slope * h).powi(2))
            .sum::<f64>();
    }
    (Vector::new(limit), (sq / n as f64).sqrt())
}

/// Samples the line through the anchor of `lw` at parameter `t`, using the
/// last `n_points` records.
pub fn nonproper_line(lw: &LiftedWitness, t: f64, n_points: usize) -> Result<LineSample> {
    if lw.records.is_empty() {
        return Err(Error::PreconditionViolated("lifted witness has no records".into()));
    }
    if n_points == 0 || n_points > lw.records.len() {
        return Err(Error::PreconditionViolated(format!(
            "n_points must be in 1..={}",
            lw.records.len()
        )));
    }
    if !t.is_finite() {
        return Err(Error::PreconditionViolated("t must be finite".into()));
    }
    let f = CubicMap::standard(lw.matrix.clone())?;
    let used = &lw.records[lw.records.len() - n_points..];
    let mut values = Vec::with_capacity(n_points);
    for r in used {
        let delta = rational_from_f64(t / r.z.norm()).ok_or(Error::Overflow)?;
        let shrunk = r.z.scale(&(int(1) - delta));
        values.push(f.eval(&shrunk)?.to_float());
    }
    let gammas: Vec<f64> = used.iter().map(|r| r.gamma.to_float()).collect();
    let hs: Vec<f64> = gammas.iter().map(|g| 1.0 / g).collect();
    let (limit, fit_residual) = fit_limit(&hs, &values);
    let scale = limit.norm().max(1.0);
    if !limit.is_finite() || fit_residual > LINE_TOLERANCE * scale {
        return Err(Error::NonConvergent(format!(
            "line fit at t = {t}: residual {fit_residual:e}"
        )));
    }

    let anchor = lw.anchor();
    let dir_exact = lw.limiting_direction();
    let dir = dir_exact.to_float();
    let unit = dir.scale(&(1.0 / dir.norm()));
    let d = &limit - &anchor.to_float();
    let along = d.dot(&unit);
    let perp = (&d - &unit.scale(&along)).norm();
    let dn = d.norm();
    let (collinearity_residual, magnitude_error, sign) = if t == 0.0 {
        (0.0, dn, EmpiricalSign::Undetermined)
    } else {
        let expected = 2.0 * t.abs();
        let sign = if along * t > 0.0 {
            EmpiricalSign::Plus2
        } else {
            EmpiricalSign::Minus2
        };
        (perp / dn.max(f64::MIN_POSITIVE), (dn - expected).abs() / expected, sign)
    };
    if collinearity_residual > LINE_TOLERANCE || magnitude_error > LINE_TOLERANCE {
        return Err(Error::NonConvergent(format!(
            "line at t = {t}: collinearity {collinearity_residual:e}, magnitude error {magnitude_error:e}"
        )));
    }
    Ok(LineSample {
        t,
        gammas,
        values,
        limit,
        fit_residual,
        collinearity_residual,
        magnitude_error,
        line: NonProperLine::new(anchor, dir_exact, sign)?,
    })
}
