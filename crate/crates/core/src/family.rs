//! A four-parameter family of 3×3 matrices whose cubic-linear maps are
//! non-proper, and an exact class-𝒵 certificate for its `λ = 1, μ = 0`
//! specialization.
//!
//! Rows one and two have zero sums and row three is `λ·row₁ + μ·row₂` with
//! `λ + μ = 1`. Then `(1,1,1)` spans the kernel and `A·(c, 0, λc) = (1,1,1)`
//! for `c = 1/(a₁₁ + λa₁₃)`.
//!
//! In the specialization, `α = a₁₁ + a₁₃ = a₂₁ + a₂₃`. The zero row sums force
//! `α = −a₁₂ = −a₂₂`; reading the defining chain as `α = −a₁₃ = −a₂₃` instead
//! contradicts them, so the row-sum reading is used throughout.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::druzkowski::{druzkowski_test, DruzkowskiReport};
use crate::error::{Error, Result};
use crate::json::scalar_str;
use crate::matrix::Matrix;
use crate::properness::{
    build_fhat_witness, certify_zero_in_sf, criterion_check, decay_table, fhat_slope, lift_witness, to_csv,
    CriterionOutcome, PropernessCertificate, SfOutcome, SfStructureReport,
};
use crate::scalar::{int, ratio, Rational};
use crate::subspace::colspace_basis;
use crate::vector::Vector;

type Q = Rational;

/// Bound on numerators and denominators of sampled parameters.
pub const SAMPLE_BOUND: i64 = 100;
pub const MAX_RETRIES: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    #[serde(with = "scalar_str")]
    pub a11: Q,
    #[serde(with = "scalar_str")]
    pub a12: Q,
    #[serde(with = "scalar_str")]
    pub a13: Q,
    #[serde(with = "scalar_str")]
    pub a21: Q,
    #[serde(with = "scalar_str")]
    pub a22: Q,
    #[serde(with = "scalar_str")]
    pub a23: Q,
    #[serde(with = "scalar_str")]
    pub lambda: Q,
    #[serde(with = "scalar_str")]
    pub mu: Q,
}

impl FamilyParams {
    pub fn from_ints(rows: [[i64; 3]; 2], lambda: Q, mu: Q) -> Self {
        let [[a11, a12, a13], [a21, a22, a23]] = rows.map(|r| r.map(int));
        Self {
            a11,
            a12,
            a13,
            a21,
            a22,
            a23,
            lambda,
            mu,
        }
    }

    /// `a₁₁ + λ·a₁₃`, which must equal `a₂₁ + λ·a₂₃`.
    pub fn pivot(&self) -> Q {
        &self.a11 + &self.a13 * &self.lambda
    }

    /// `c` with `A·(c, 0, λc) = (1,1,1)`.
    pub fn c(&self) -> Result<Q> {
        self.validate()?;
        Ok(int(1) / self.pivot())
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::ConstraintViolated(what.into()));
        if &self.a11 + &self.a12 + &self.a13 != int(0) {
            return fail("a11 + a12 + a13 = 0");
        }
        if &self.a21 + &self.a22 + &self.a23 != int(0) {
            return fail("a21 + a22 + a23 = 0");
        }
        if &self.lambda + &self.mu != int(1) {
            return fail("lambda + mu = 1");
        }
        if self.pivot() != &self.a21 + &self.a23 * &self.lambda {
            return fail("a11 + a13*lambda = a21 + a23*lambda");
        }
        if self.pivot() == int(0) {
            return fail("a11 + a13*lambda != 0");
        }
        Ok(())
    }

    fn rows(&self) -> [Vector<Q>; 2] {
        [
            Vector::new(vec![self.a11.clone(), self.a12.clone(), self.a13.clone()]),
            Vector::new(vec![self.a21.clone(), self.a22.clone(), self.a23.clone()]),
        ]
    }
}

/// `row₃ = λ·row₁ + μ·row₂`.
pub fn build_family_matrix(p: &FamilyParams) -> Result<Matrix<Q>> {
    p.validate()?;
    let [r1, r2] = p.rows();
    let r3 = &r1.scale(&p.lambda) + &r2.scale(&p.mu);
    Matrix::from_rows(vec![r1.into_coords(), r2.into_coords(), r3.into_coords()])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecialFamilyParams {
    #[serde(with = "scalar_str")]
    pub a11: Q,
    #[serde(with = "scalar_str")]
    pub a12: Q,
    #[serde(with = "scalar_str")]
    pub a13: Q,
    #[serde(with = "scalar_str")]
    pub a21: Q,
    #[serde(with = "scalar_str")]
    pub a22: Q,
    #[serde(with = "scalar_str")]
    pub a23: Q,
    #[serde(with = "scalar_str")]
    pub alpha: Q,
}

impl SpecialFamilyParams {
    /// The specialization determined by `a₁₁, a₁₃, a₂₁`; `α = a₁₁ + a₁₃`.
    pub fn from_free(a11: Q, a13: Q, a21: Q) -> Result<Self> {
        let alpha = &a11 + &a13;
        let a23 = &alpha - &a21;
        let p = Self {
            a12: -alpha.clone(),
            a22: -alpha.clone(),
            a11,
            a13,
            a21,
            a23,
            alpha,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::ConstraintViolated(what.into()));
        if &self.a11 + &self.a12 + &self.a13 != int(0) || &self.a21 + &self.a22 + &self.a23 != int(0) {
            return fail("row sums zero");
        }
        if self.alpha != &self.a11 + &self.a13 || self.alpha != &self.a21 + &self.a23 {
            return fail("alpha = a11 + a13 = a21 + a23");
        }
        if self.alpha == int(0) {
            return fail("alpha != 0");
        }
        if &self.a11 * &self.a23 - &self.a13 * &self.a21 == int(0) {
            return fail("a11*a23 - a13*a21 != 0");
        }
        Ok(())
    }

    pub fn general(&self) -> FamilyParams {
        FamilyParams {
            a11: self.a11.clone(),
            a12: self.a12.clone(),
            a13: self.a13.clone(),
            a21: self.a21.clone(),
            a22: self.a22.clone(),
            a23: self.a23.clone(),
            lambda: int(1),
            mu: int(0),
        }
    }

    pub fn matrix(&self) -> Result<Matrix<Q>> {
        build_family_matrix(&self.general())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySample {
    pub params: FamilyParams,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_scalar")]
    pub alpha: Option<Q>,
    pub matrix: Matrix<Q>,
}

mod opt_scalar {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::scalar::Rational;

    pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_str(v),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| crate::json::parse_scalar(&t).map_err(serde::de::Error::custom))
            .transpose()
    }
}

fn random_rational(rng: &mut ChaCha8Rng) -> Q {
    ratio(
        rng.random_range(-SAMPLE_BOUND..=SAMPLE_BOUND),
        rng.random_range(1..=SAMPLE_BOUND),
    )
}

fn draw_special(rng: &mut ChaCha8Rng) -> Option<FamilySample> {
    let p = SpecialFamilyParams::from_free(random_rational(rng), random_rational(rng), random_rational(rng)).ok()?;
    let matrix = p.matrix().ok()?;
    Some(FamilySample {
        alpha: Some(p.alpha.clone()),
        params: p.general(),
        matrix,
    })
}

fn draw_general(rng: &mut ChaCha8Rng) -> Option<FamilySample> {
    let (a11, a13, a21, lambda) = (
        random_rational(rng),
        random_rational(rng),
        random_rational(rng),
        random_rational(rng),
    );
    if lambda == int(0) {
        return None;
    }
    let pivot = &a11 + &a13 * &lambda;
    let a23 = (&pivot - &a21) / &lambda;
    let p = FamilyParams {
        a12: -(&a11 + &a13),
        a22: -(&a21 + &a23),
        mu: int(1) - &lambda,
        a11,
        a13,
        a21,
        a23,
        lambda,
    };
    let matrix = build_family_matrix(&p).ok()?;
    if matrix.rank() != 2 {
        return None;
    }
    Some(FamilySample {
        params: p,
        alpha: None,
        matrix,
    })
}

/// Deterministic given `seed`. Each sample is retried up to
/// [`MAX_RETRIES`] times when the drawn parameters violate an inequation.
pub fn sample_family(count: usize, seed: u64, special_only: bool) -> Result<Vec<FamilySample>> {
    if count == 0 {
        return Err(Error::PreconditionViolated("count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let sample = (0..MAX_RETRIES).find_map(|_| {
            if special_only {
                draw_special(&mut rng)
            } else {
                draw_general(&mut rng)
            }
        });
        out.push(sample.ok_or(Error::SamplingExhausted { attempts: MAX_RETRIES })?);
    }
    Ok(out)
}

pub fn instance_params() -> SpecialFamilyParams {
    SpecialFamilyParams::from_free(int(1), int(4), int(2)).expect("valid parameters")
}

/// `[[1,−5,4],[2,−5,3],[1,−5,4]]` with `α = 5`.
pub fn paper_instance() -> (Matrix<Q>, Q) {
    let p = instance_params();
    (p.matrix().expect("valid parameters"), p.alpha)
}

/// Exact data from which `x + λ(Ax)³ = 0 ⟹ x = 0` follows for every real `λ`.
///
/// Row three equals row one, so `(Ax)₁ = (Ax)₃` and hence `x₁ = x₃`. By
/// linearity `A·(x₁, x₂, x₁) = x₁·A(1,0,1) + x₂·A(0,1,0) = α(x₁ − x₂)·(1,1,1)`,
/// so the first two coordinates give `x₁ = x₂`; then `Ax = 0` and `x = 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassZCertificate {
    matrix: Matrix<Q>,
    #[serde(with = "scalar_str")]
    alpha: Q,
    /// `A·(1,0,1)`, equal to `α·(1,1,1)`.
    check_1: Vector<Q>,
    /// `A·(0,1,0)`, equal to `−α·(1,1,1)`.
    check_2: Vector<Q>,
    rank: usize,
}

#[derive(Deserialize)]
struct ClassZRepr {
    matrix: Matrix<Q>,
    #[serde(with = "scalar_str")]
    alpha: Q,
    check_1: Vector<Q>,
    check_2: Vector<Q>,
    rank: usize,
}

impl<'de> Deserialize<'de> for ClassZCertificate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ClassZRepr::deserialize(d)?;
        let c = ClassZCertificate {
            matrix: r.matrix,
            alpha: r.alpha,
            check_1: r.check_1,
            check_2: r.check_2,
            rank: r.rank,
        };
        c.verify().map_err(serde::de::Error::custom)?;
        Ok(c)
    }
}

impl ClassZCertificate {
    pub fn matrix(&self) -> &Matrix<Q> {
        &self.matrix
    }

    pub fn alpha(&self) -> &Q {
        &self.alpha
    }

    pub fn check_1(&self) -> &Vector<Q> {
        &self.check_1
    }

    pub fn check_2(&self) -> &Vector<Q> {
        &self.check_2
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Recomputes every stored value and the structural facts the argument
    /// uses.
    pub fn verify(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidCertificate(m.into()));
        let a = &self.matrix;
        if a.rows() != 3 || a.cols() != 3 {
            return bad("matrix must be 3x3");
        }
        if a.row(2) != a.row(0) {
            return bad("row 3 differs from row 1");
        }
        if self.alpha == int(0) {
            return bad("alpha is zero");
        }
        let ones = Vector::<Q>::ones(3);
        let c1 = a.mul_vec(&Vector::from_ints(&[1, 0, 1]))?;
        let c2 = a.mul_vec(&Vector::from_ints(&[0, 1, 0]))?;
        if c1 != self.check_1 || c1 != ones.scale(&self.alpha) {
            return bad("A(1,0,1) != alpha(1,1,1)");
        }
        if c2 != self.check_2 || c2 != ones.scale(&-self.alpha.clone()) {
            return bad("A(0,1,0) != -alpha(1,1,1)");
        }
        if a.rank() != 2 || self.rank != 2 {
            return bad("rank is not 2");
        }
        Ok(())
    }

    /// `α(x₁ − x₂)·(1,1,1)`, which equals `A·(x₁, x₂, x₁)`.
    pub fn reduce(&self, x1: &Q, x2: &Q) -> Vector<Q> {
        Vector::ones(3).scale(&(&self.alpha * (x1 - x2)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassZRefusalReason {
    NotThreeByThree,
    Row3NotRow1,
    RowSumsNonzero,
    AlphaMismatch,
    AlphaZero,
    RankNotTwo,
}

impl fmt::Display for ClassZRefusalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassZRefusalReason::NotThreeByThree => "matrix is not 3x3",
            ClassZRefusalReason::Row3NotRow1 => "row 3 differs from row 1",
            ClassZRefusalReason::RowSumsNonzero => "a row sum is nonzero",
            ClassZRefusalReason::AlphaMismatch => "a11 + a13 differs from a21 + a23",
            ClassZRefusalReason::AlphaZero => "alpha = a11 + a13 is zero",
            ClassZRefusalReason::RankNotTwo => "rank is not 2",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassZRefusal {
    pub reason: ClassZRefusalReason,
    /// Set when a simultaneous permutation of coordinates, `P·A·Pᵀ`, would be
    /// certifiable. Inputs are never permuted automatically.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hint: Option<String>,
}

impl fmt::Display for ClassZRefusal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.reason)?;
        if let Some(h) = &self.hint {
            write!(f, " ({h})")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ClassZOutcome {
    Certified(ClassZCertificate),
    Refused(ClassZRefusal),
}

impl ClassZOutcome {
    pub fn certificate(&self) -> Option<&ClassZCertificate> {
        match self {
            ClassZOutcome::Certified(c) => Some(c),
            ClassZOutcome::Refused(_) => None,
        }
    }
}

fn structure(m: &Matrix<Q>) -> std::result::Result<Q, ClassZRefusalReason> {
    if m.rows() != 3 || m.cols() != 3 {
        return Err(ClassZRefusalReason::NotThreeByThree);
    }
    if m.row(2) != m.row(0) {
        return Err(ClassZRefusalReason::Row3NotRow1);
    }
    if (0..3).any(|i| m.row(i).iter().fold(int(0), |s, x| s + x) != int(0)) {
        return Err(ClassZRefusalReason::RowSumsNonzero);
    }
    let alpha = &m[(0, 0)] + &m[(0, 2)];
    if alpha != &m[(1, 0)] + &m[(1, 2)] {
        return Err(ClassZRefusalReason::AlphaMismatch);
    }
    if alpha == int(0) {
        return Err(ClassZRefusalReason::AlphaZero);
    }
    if m.rank() != 2 {
        return Err(ClassZRefusalReason::RankNotTwo);
    }
    Ok(alpha)
}

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn permute(m: &Matrix<Q>, p: &[usize; 3]) -> Matrix<Q> {
    let mut out = Matrix::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            out[(i, j)] = m[(p[i], p[j])].clone();
        }
    }
    out
}

pub fn certify_class_z(m: &Matrix<Q>) -> ClassZOutcome {
    match structure(m) {
        Ok(alpha) => {
            let cert = ClassZCertificate {
                check_1: m.mul_vec(&Vector::from_ints(&[1, 0, 1])).expect("3x3"),
                check_2: m.mul_vec(&Vector::from_ints(&[0, 1, 0])).expect("3x3"),
                rank: m.rank(),
                matrix: m.clone(),
                alpha,
            };
            match cert.verify() {
                Ok(()) => ClassZOutcome::Certified(cert),
                // structure() already implies both checks
                Err(e) => unreachable!("structural checks passed but certificate failed: {e}"),
            }
        }
        Err(reason) => {
            let hint = if reason == ClassZRefusalReason::NotThreeByThree {
                None
            } else {
                PERMUTATIONS[1..]
                    .iter()
                    .find(|p| structure(&permute(m, p)).is_ok())
                    .map(|p| format!("certifiable after reordering coordinates as {p:?}"))
            };
            ClassZOutcome::Refused(ClassZRefusal { reason, hint })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificates {
    #[serde(rename = "classZ")]
    pub class_z: ClassZCertificate,
    pub nonproperness: PropernessCertificate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefutationReport {
    pub params: FamilyParams,
    pub matrix: Matrix<Q>,
    #[serde(with = "scalar_str")]
    pub alpha: Q,
    pub certificates: Certificates,
    pub zero_in_sf: SfStructureReport,
    pub druzkowski: DruzkowskiReport,
    pub decay_slope: f64,
    pub decay_csv: String,
    pub verdict: String,
}

impl RefutationReport {
    /// Re-verifies both certificates, the lift and the Druzkowski witness.
    pub fn verify(&self) -> Result<()> {
        self.certificates.class_z.verify()?;
        if self.certificates.class_z.matrix() != &self.matrix
            || self.certificates.nonproperness.matrix() != &self.matrix
        {
            return Err(Error::InvalidCertificate("certificates refer to another matrix".into()));
        }
        self.zero_in_sf.lifted.verify()?;
        self.druzkowski.verify(&self.matrix)
    }
}

pub const REFUTATION_GAMMAS: [i64; 4] = [100, 1000, 10_000, 100_000];
pub const REFUTATION_TRIALS: usize = 50;
pub const REFUTATION_SEED: u64 = 0;

/// The matrix of [`paper_instance`] is in class 𝒵 and its map is not proper.
pub fn refute_claim_1() -> Result<RefutationReport> {
    let p = instance_params();
    let (a, alpha) = paper_instance();
    let class_z = match certify_class_z(&a) {
        ClassZOutcome::Certified(c) => c,
        ClassZOutcome::Refused(r) => return Err(Error::InvalidCertificate(r.to_string())),
    };
    let nonproperness = match criterion_check(&a, &colspace_basis(&a), &Vector::ones(3))? {
        CriterionOutcome::Certified(c) => c,
        CriterionOutcome::Refused(r) => return Err(Error::InvalidCertificate(r.to_string())),
    };
    let zero_in_sf = match certify_zero_in_sf(&a)? {
        SfOutcome::Report(r) => *r,
        SfOutcome::Inconclusive { reason } => return Err(Error::InvalidCertificate(reason)),
    };
    let gammas: Vec<Q> = REFUTATION_GAMMAS.iter().map(|&g| int(g)).collect();
    let (ws, _) = build_fhat_witness(&nonproperness, &gammas)?;
    let rows = decay_table(&lift_witness(&a, &ws)?)?;
    let druzkowski = druzkowski_test(&a, REFUTATION_TRIALS, REFUTATION_SEED)?;
    Ok(RefutationReport {
        params: p.general(),
        matrix: a,
        alpha,
        certificates: Certificates { class_z, nonproperness },
        zero_in_sf,
        druzkowski,
        decay_slope: fhat_slope(&rows)?,
        decay_csv: to_csv(&rows),
        verdict: "matrix is in class Z and F_A is not proper".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::kernel_basis;
    use proptest::prelude::*;

    #[test]
    fn instance_from_parameters() {
        let (a, alpha) = paper_instance();
        assert_eq!(a, Matrix::from_int_rows(&[[1, -5, 4], [2, -5, 3], [1, -5, 4]]));
        assert_eq!(alpha, int(5));
        assert_eq!(kernel_basis(&a).vectors(), &[Vector::ones(3)]);
        assert_eq!(
            a.mul_vec(&Vector::from_ints(&[1, 0, 1])).unwrap(),
            Vector::from_ints(&[5, 5, 5])
        );
        let general = FamilyParams::from_ints([[1, -5, 4], [2, -5, 3]], int(1), int(0));
        assert_eq!(build_family_matrix(&general).unwrap(), a);
        assert_eq!(general.c().unwrap(), ratio(1, 5));
    }

    #[test]
    fn constraint_violations_are_named() {
        let cases = [
            (
                FamilyParams::from_ints([[1, -5, 5], [2, -5, 3]], int(1), int(0)),
                "a11 + a12",
            ),
            (
                FamilyParams::from_ints([[1, -5, 4], [2, -5, 4]], int(1), int(0)),
                "a21 + a22",
            ),
            (
                FamilyParams::from_ints([[1, -5, 4], [2, -5, 3]], int(1), int(1)),
                "lambda + mu",
            ),
            (
                FamilyParams::from_ints([[1, -4, 3], [2, -5, 3]], int(1), int(0)),
                "a11 + a13*lambda =",
            ),
            (
                FamilyParams::from_ints([[1, 0, -1], [-1, 0, 1]], int(1), int(0)),
                "!= 0",
            ),
        ];
        for (p, needle) in cases {
            match build_family_matrix(&p) {
                Err(Error::ConstraintViolated(w)) => assert!(w.contains(needle), "{w} / {needle}"),
                other => panic!("{p:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn general_members_satisfy_the_invariants() {
        for s in sample_family(30, 3, false).unwrap() {
            let a = &s.matrix;
            assert!(a.mul_vec(&Vector::ones(3)).unwrap().is_zero());
            assert_eq!(a.rank(), 2);
            let c = s.params.c().unwrap();
            let pre = Vector::new(vec![c.clone(), int(0), &s.params.lambda * &c]);
            assert_eq!(a.mul_vec(&pre).unwrap(), Vector::ones(3));
            assert!(colspace_basis(a).contains(&Vector::ones(3)).unwrap());
            let a2 = a.mul_mat(a).unwrap();
            assert!(colspace_basis(&a2).contains(&Vector::ones(3)).unwrap());
        }
    }

    #[test]
    fn special_samples_are_certified() {
        let samples = sample_family(25, 11, true).unwrap();
        for s in &samples {
            assert_eq!(s.params.lambda, int(1));
            let cert = certify_class_z(&s.matrix);
            let cert = cert.certificate().expect("certified");
            assert_eq!(Some(cert.alpha()), s.alpha.as_ref());
            let out = criterion_check(&s.matrix, &colspace_basis(&s.matrix), &Vector::ones(3)).unwrap();
            assert!(matches!(out, CriterionOutcome::Certified(_)));
        }
        assert_eq!(samples, sample_family(25, 11, true).unwrap());
        assert_ne!(samples, sample_family(25, 12, true).unwrap());
        assert!(sample_family(0, 1, true).is_err());
    }

    #[test]
    fn refusals_and_hints() {
        let id = certify_class_z(&Matrix::identity(3));
        assert!(matches!(
            id,
            ClassZOutcome::Refused(ClassZRefusal {
                reason: ClassZRefusalReason::Row3NotRow1,
                hint: None
            })
        ));
        // the instance with coordinates 1 and 2 swapped
        let (a, _) = paper_instance();
        let swapped = permute(&a, &[1, 0, 2]);
        match certify_class_z(&swapped) {
            ClassZOutcome::Refused(r) => assert!(r.hint.is_some(), "{r:?}"),
            other => panic!("{other:?}"),
        }
        let rank_one: Matrix<Q> = Matrix::from_int_rows(&[[1, -2, 1], [1, -2, 1], [1, -2, 1]]);
        assert!(matches!(
            certify_class_z(&rank_one),
            ClassZOutcome::Refused(ClassZRefusal {
                reason: ClassZRefusalReason::RankNotTwo,
                ..
            })
        ));
        assert!(matches!(
            certify_class_z(&Matrix::zeros(2, 2)),
            ClassZOutcome::Refused(ClassZRefusal {
                reason: ClassZRefusalReason::NotThreeByThree,
                ..
            })
        ));
    }

    #[test]
    fn certificate_json_is_reverified() {
        let (a, _) = paper_instance();
        let c = certify_class_z(&a).certificate().unwrap().clone();
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<ClassZCertificate>(&json).unwrap(), c);
        let forged = json.replace(r#""alpha":"5""#, r#""alpha":"4""#);
        assert_ne!(forged, json);
        assert!(serde_json::from_str::<ClassZCertificate>(&forged).is_err());
    }

    #[test]
    fn refutation_report() {
        let r = refute_claim_1().unwrap();
        r.verify().unwrap();
        assert!(r.druzkowski.is_certified_no());
        assert!((-1.05..=-0.95).contains(&r.decay_slope));
        assert_eq!(r.decay_csv.lines().count(), 5);
        let back: RefutationReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }

    proptest! {
        #[test]
        fn linearity_reduction(n1 in -50i64..50, d1 in 1i64..20, n2 in -50i64..50, d2 in 1i64..20, seed in 0u64..50) {
            let s = &sample_family(1, seed, true).unwrap()[0];
            let cert = certify_class_z(&s.matrix);
            let cert = cert.certificate().unwrap();
            let (x1, x2) = (ratio(n1, d1), ratio(n2, d2));
            let x = Vector::new(vec![x1.clone(), x2.clone(), x1.clone()]);
            prop_assert_eq!(s.matrix.mul_vec(&x).unwrap(), cert.reduce(&x1, &x2));
        }
    }
}
