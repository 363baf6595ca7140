//! Candidate directions `x∞`: real cube roots of kernel vectors that lie in
//! `Im(A)`.
//!
//! Both membership in `Im(A)` and the criterion are invariant under scaling
//! `x∞`, so each kernel vector is first normalised to have leading
//! coordinate 1. That keeps roots exact whenever the coordinate ratios are
//! rational cubes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::matrix::Matrix;
use crate::scalar::{int, Rational};
use crate::subspace::{colspace_basis, kernel_basis, MembershipMode, DEFAULT_TOLERANCE};
use crate::vector::{Power, Vector};

type Q = Rational;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum CandidateSearch {
    /// Roots of the kernel basis vectors, complete for corank-1 kernels.
    KernelRoots,
    /// Roots of random integer combinations of the kernel basis.
    Randomized { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "vector", rename_all = "snake_case")]
pub enum Candidate {
    Exact(Vector<Q>),
    /// The cube root is irrational; coordinates are rounded.
    Numeric(Vector<f64>),
}

impl Candidate {
    pub fn exact(&self) -> Option<&Vector<Q>> {
        match self {
            Candidate::Exact(v) => Some(v),
            Candidate::Numeric(_) => None,
        }
    }

    fn to_float(&self) -> Vector<f64> {
        match self {
            Candidate::Exact(v) => v.to_float(),
            Candidate::Numeric(v) => v.clone(),
        }
    }
}

/// Empty output is not evidence of properness.
pub fn candidate_directions(a: &Matrix<Q>, search: CandidateSearch) -> Result<Vec<Candidate>> {
    candidate_directions_with(a, search, DEFAULT_TOLERANCE)
}

/// As [`candidate_directions`], with `tolerance` deciding image membership
/// of irrational roots.
pub fn candidate_directions_with(a: &Matrix<Q>, search: CandidateSearch, tolerance: f64) -> Result<Vec<Candidate>> {
    a.ensure_square()?;
    let kernel = kernel_basis(a);
    if kernel.dim() == 0 {
        return Ok(Vec::new());
    }
    let sources: Vec<Vector<Q>> = match search {
        CandidateSearch::KernelRoots => kernel.vectors().to_vec(),
        CandidateSearch::Randomized { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| {
                    let coeffs = (0..kernel.dim()).map(|_| int(rng.random_range(-10..=10))).collect();
                    kernel.combine(&Vector::new(coeffs))
                })
                .collect()
        }
    };
    let image = colspace_basis(a);
    let image_f = image.to_float();
    let mut out: Vec<Candidate> = Vec::new();
    for z in sources {
        if z.has_zero_coordinate() {
            continue;
        }
        let lead = z[0].clone();
        let normalised = z.scale(&(int(1) / lead));
        let root = match normalised.hadamard_pow(1, 3)? {
            Power::Exact(r) => {
                if !image.contains(&r)? {
                    continue;
                }
                Candidate::Exact(r)
            }
            Power::Inexact(r) => {
                if !image_f.membership(&r, MembershipMode::Tolerance(tolerance))?.member {
                    continue;
                }
                Candidate::Numeric(r)
            }
        };
        let negated = match &root {
            Candidate::Exact(r) => Candidate::Exact(-r),
            Candidate::Numeric(r) => Candidate::Numeric(-r),
        };
        for c in [root, negated] {
            if !out.iter().any(|o| same_direction(o, &c)) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

fn same_direction(a: &Candidate, b: &Candidate) -> bool {
    match (a, b) {
        (Candidate::Exact(x), Candidate::Exact(y)) => x == y,
        _ => {
            let d = &a.to_float() - &b.to_float();
            d.norm() <= DEFAULT_TOLERANCE * a.to_float().norm().max(1.0)
        }
    }
}
