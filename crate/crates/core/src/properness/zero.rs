//! Certifying `0 ∈ S_{F_A}` and the kernel lines through it.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::matrix::Matrix;
use crate::properness::candidates::{candidate_directions, Candidate, CandidateSearch};
use crate::properness::criterion::{criterion_check, CriterionOutcome, PropernessCertificate};
use crate::properness::lift::{lift_witness, LiftedWitness};
use crate::properness::line::{EmpiricalSign, NonProperLine};
use crate::properness::witness::WitnessSequence;
use crate::scalar::{int, Rational};
use crate::subspace::{colspace_basis, kernel_basis, SubspaceBasis};

type Q = Rational;

pub const DEFAULT_GAMMAS: [i64; 4] = [10, 100, 1000, 10_000];

/// Seed for the randomized candidate search used on kernels of dimension > 1.
const SEARCH_SEED: u64 = 0x5EED;
const SEARCH_COUNT: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SfStructureReport {
    pub certificate: PropernessCertificate,
    pub lifted: LiftedWitness,
    /// `‖F_A(z(γ)) − 0‖` along the lift; strictly decreasing.
    pub anchor_distances: Vec<f64>,
    /// `0 + ℝ·k` for each kernel basis vector `k`.
    pub lines: Vec<NonProperLine>,
    pub kernel_basis: SubspaceBasis<Q>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SfOutcome {
    Report(Box<SfStructureReport>),
    /// No certificate was found. This says nothing about properness.
    Inconclusive {
        reason: String,
    },
}

impl SfOutcome {
    pub fn report(&self) -> Option<&SfStructureReport> {
        match self {
            SfOutcome::Report(r) => Some(r),
            SfOutcome::Inconclusive { .. } => None,
        }
    }
}

/// First certificate over `V = Im(A)` among the exact candidate directions.
pub fn find_certificate(a: &Matrix<Q>) -> Result<Option<PropernessCertificate>> {
    let kernel = kernel_basis(a);
    let search = if kernel.dim() > 1 {
        CandidateSearch::Randomized {
            count: SEARCH_COUNT,
            seed: SEARCH_SEED,
        }
    } else {
        CandidateSearch::KernelRoots
    };
    let image = colspace_basis(a);
    for c in candidate_directions(a, search)? {
        let Candidate::Exact(x_inf) = c else { continue };
        if let CriterionOutcome::Certified(cert) = criterion_check(a, &image, &x_inf)? {
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

pub fn certify_zero_in_sf(a: &Matrix<Q>) -> Result<SfOutcome> {
    certify_zero_in_sf_with(a, &DEFAULT_GAMMAS.map(int))
}

pub fn certify_zero_in_sf_with(a: &Matrix<Q>, gammas: &[Q]) -> Result<SfOutcome> {
    a.ensure_square()?;
    let Some(cert) = find_certificate(a)? else {
        return Ok(SfOutcome::Inconclusive {
            reason: "no certificate found".into(),
        });
    };
    let ws = WitnessSequence::new(cert.clone(), gammas.to_vec())?;
    let lifted = lift_witness(a, &ws)?;
    lifted.verify()?;
    if !lifted.v_small_norms_decrease() {
        return Ok(SfOutcome::Inconclusive {
            reason: "lifted values do not decrease".into(),
        });
    }
    let anchor_distances = lifted.records.iter().map(|r| r.v_small.norm()).collect();
    let kernel = kernel_basis(a);
    let lines = kernel
        .vectors()
        .iter()
        .map(|k| NonProperLine::new(lifted.anchor(), k.clone(), EmpiricalSign::Undetermined))
        .collect::<Result<Vec<_>>>()?;
    Ok(SfOutcome::Report(Box::new(SfStructureReport {
        certificate: cert,
        lifted,
        anchor_distances,
        lines,
        kernel_basis: kernel,
        note: "S_{F_A} contains 0 + Ker(A): shifting the lift by w in Ker(A) moves every value by w".into(),
    })))
}
