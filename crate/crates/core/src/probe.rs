//! Numeric search for nonzero solutions of `x + λ(Ax)³ = 0`.
//!
//! A matrix is in class 𝒵 when that equation has only the trivial solution
//! for every real `λ`. The probe runs damped Newton iterations from random
//! starts; a converged nonzero root refutes membership, while finding nothing
//! is only evidence.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{certify_class_z, ClassZCertificate, ClassZOutcome};
use crate::matrix::Matrix;
use crate::scalar::{Rational, Scalar};
use crate::vector::Vector;

/// `{±10^k : k = −2..3} ∪ {0}`.
pub fn default_lambda_grid() -> Vec<f64> {
    let mut grid = vec![0.0];
    for k in -2..=3 {
        let p = 10f64.powi(k);
        grid.push(p);
        grid.push(-p);
    }
    grid
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeSettings {
    pub radii: Vec<f64>,
    pub max_iterations: usize,
    pub max_halvings: usize,
    pub divergence_norm: f64,
    /// A root is accepted when `‖G(x)‖ ≤ residual_tol · max(1, ‖x‖)`.
    pub residual_tol: f64,
    /// Roots shorter than this count as the trivial solution.
    pub min_root_norm: f64,
}

impl Default for ProbeSettings {
    fn default() -> Self {
        Self {
            radii: vec![1.0, 10.0, 100.0],
            max_iterations: 200,
            max_halvings: 40,
            divergence_norm: 1e12,
            residual_tol: 1e-12,
            min_root_norm: 1e-6,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeStats {
    pub runs: usize,
    pub converged_to_zero: usize,
    pub diverged: usize,
    /// No descent step found, usually at a singular Jacobian.
    pub stalled: usize,
    pub budget_exceeded: usize,
}

/// A nonzero numeric root of `x + λ(Ax)³`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub lambda: f64,
    pub root: Vector<f64>,
    pub residual: f64,
}

impl Counterexample {
    /// Re-evaluates the residual and refuses roots that do not meet the
    /// probe tolerance.
    pub fn new(a: &Matrix<f64>, lambda: f64, root: Vector<f64>, settings: &ProbeSettings) -> Result<Self> {
        let residual = residual(a, lambda, &root)?.norm();
        let norm = root.norm();
        if residual.is_nan() || residual > settings.residual_tol * norm.max(1.0) {
            return Err(Error::InvalidCertificate(format!(
                "residual {residual:e} above tolerance at λ = {lambda}"
            )));
        }
        if norm < settings.min_root_norm {
            return Err(Error::InvalidCertificate("root is the trivial solution".into()));
        }
        Ok(Self { lambda, root, residual })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ClassZVerdict {
    CertifiedYes { certificate: ClassZCertificate },
    Counterexample(Counterexample),
    NoCounterexampleFound { stats: ProbeStats },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassZReport {
    #[serde(flatten)]
    pub verdict: ClassZVerdict,
    pub lambdas: Vec<f64>,
    pub starts_per_lambda: usize,
    pub seed: u64,
    pub settings: ProbeSettings,
}

impl ClassZReport {
    pub fn found_counterexample(&self) -> bool {
        matches!(self.verdict, ClassZVerdict::Counterexample(_))
    }
}

fn residual(a: &Matrix<f64>, lambda: f64, x: &Vector<f64>) -> Result<Vector<f64>> {
    let cubic = a.mul_vec(x)?.cube();
    Ok(x + &cubic.scale(&lambda))
}

fn newton_jacobian(a: &Matrix<f64>, lambda: f64, x: &Vector<f64>) -> Matrix<f64> {
    let d = Matrix::diag(&(a * x).square().scale(&(3.0 * lambda)));
    &Matrix::identity(a.rows()) + &(&d * a)
}

enum RunOutcome {
    Root(Vector<f64>),
    Zero,
    Diverged,
    Stalled,
    BudgetExceeded,
}

fn newton_run(a: &Matrix<f64>, lambda: f64, start: Vector<f64>, s: &ProbeSettings) -> Result<RunOutcome> {
    let mut x = start;
    let mut g = residual(a, lambda, &x)?;
    for _ in 0..s.max_iterations {
        let xn = x.norm();
        if g.norm() <= s.residual_tol * xn.max(1.0) {
            return Ok(if xn >= s.min_root_norm {
                RunOutcome::Root(x)
            } else {
                RunOutcome::Zero
            });
        }
        let j = newton_jacobian(a, lambda, &x);
        let Some(step) = j.solve_particular(&-&g)? else {
            return Ok(RunOutcome::Stalled);
        };
        let g_norm = g.norm();
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..=s.max_halvings {
            let cand = &x + &step.scale(&t);
            if cand.is_finite() {
                let gc = residual(a, lambda, &cand)?;
                if gc.is_finite() && gc.norm() < g_norm {
                    accepted = Some((cand, gc));
                    break;
                }
            }
            t *= 0.5;
        }
        let Some((nx, ng)) = accepted else {
            return Ok(RunOutcome::Stalled);
        };
        x = nx;
        g = ng;
        if x.norm() > s.divergence_norm {
            return Ok(RunOutcome::Diverged);
        }
    }
    let xn = x.norm();
    if g.norm() <= s.residual_tol * xn.max(1.0) {
        return Ok(if xn >= s.min_root_norm {
            RunOutcome::Root(x)
        } else {
            RunOutcome::Zero
        });
    }
    Ok(RunOutcome::BudgetExceeded)
}

fn sub_seed(seed: u64, lambda_index: usize, start_index: usize) -> u64 {
    seed ^ (lambda_index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (start_index as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F)
}

fn unit_sphere(n: usize, rng: &mut ChaCha8Rng) -> Vector<f64> {
    loop {
        let v = Vector::new((0..n).map(|_| StandardNormal.sample(rng)).collect::<Vec<f64>>());
        let norm = v.norm();
        if norm > 1e-8 {
            return v.scale(&(1.0 / norm));
        }
    }
}

pub fn class_z_probe<T: Scalar>(
    a: &Matrix<T>,
    lambdas: &[f64],
    starts_per_lambda: usize,
    seed: u64,
) -> Result<ClassZReport> {
    class_z_probe_with(a, lambdas, starts_per_lambda, seed, &ProbeSettings::default())
}

pub fn class_z_probe_with<T: Scalar>(
    a: &Matrix<T>,
    lambdas: &[f64],
    starts_per_lambda: usize,
    seed: u64,
    settings: &ProbeSettings,
) -> Result<ClassZReport> {
    let n = a.ensure_square()?;
    if starts_per_lambda == 0 {
        return Err(Error::PreconditionViolated(
            "starts_per_lambda must be at least 1".into(),
        ));
    }
    let af = a.to_float();
    let report = |verdict| ClassZReport {
        verdict,
        lambdas: lambdas.to_vec(),
        starts_per_lambda,
        seed,
        settings: settings.clone(),
    };
    let mut stats = ProbeStats::default();
    for (li, &lambda) in lambdas.iter().enumerate() {
        for si in 0..starts_per_lambda {
            let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, li, si));
            let dir = unit_sphere(n, &mut rng);
            for &r in &settings.radii {
                stats.runs += 1;
                match newton_run(&af, lambda, dir.scale(&r), settings)? {
                    RunOutcome::Root(x) => {
                        let c = Counterexample::new(&af, lambda, x, settings)?;
                        return Ok(report(ClassZVerdict::Counterexample(c)));
                    }
                    RunOutcome::Zero => stats.converged_to_zero += 1,
                    RunOutcome::Diverged => stats.diverged += 1,
                    RunOutcome::Stalled => stats.stalled += 1,
                    RunOutcome::BudgetExceeded => stats.budget_exceeded += 1,
                }
            }
        }
    }
    Ok(report(ClassZVerdict::NoCounterexampleFound { stats }))
}

/// Exact certification when the matrix has the certifiable structure, the
/// numeric probe otherwise.
pub fn class_z_analysis(
    a: &Matrix<Rational>,
    lambdas: &[f64],
    starts_per_lambda: usize,
    seed: u64,
) -> Result<ClassZReport> {
    if let ClassZOutcome::Certified(certificate) = certify_class_z(a) {
        return Ok(ClassZReport {
            verdict: ClassZVerdict::CertifiedYes { certificate },
            lambdas: lambdas.to_vec(),
            starts_per_lambda,
            seed,
            settings: ProbeSettings::default(),
        });
    }
    class_z_probe(a, lambdas, starts_per_lambda, seed)
}
