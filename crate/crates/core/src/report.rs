//! Full analysis of one matrix, as emitted by `cubiclin analyze`.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::druzkowski::{druzkowski_test, DruzkowskiReport};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::probe::{class_z_analysis, default_lambda_grid, ClassZReport};
use crate::properness::zero::DEFAULT_GAMMAS;
use crate::properness::{
    candidate_directions_with, certify_zero_in_sf_with, decay_table, nonproper_line, Candidate, CandidateSearch,
    DecayRow, LiftedWitness, LineSample, NonProperLine, PropernessCertificate, SfOutcome,
};
use crate::scalar::{int, Rational};
use crate::subspace::{colspace_basis, kernel_basis, SubspaceBasis, DEFAULT_TOLERANCE};

type Q = Rational;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_TRIALS: usize = 50;
pub const INCONCLUSIVE: &str = "inconclusive: no certificate";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Arithmetic {
    /// Only exactly representable candidate directions are kept.
    Exact,
    /// Irrational candidates are kept when within `eps` of `Im(A)`.
    Tolerance { eps: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisOptions {
    pub arithmetic: Arithmetic,
    pub seed: u64,
    /// Druzkowski trials and probe starts per `λ`.
    pub trials: usize,
    pub gammas: Vec<Q>,
    /// Parameter of the sampled line through the anchor.
    pub line_t: f64,
    pub timings: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            arithmetic: Arithmetic::Tolerance { eps: DEFAULT_TOLERANCE },
            seed: 0,
            trials: DEFAULT_TRIALS,
            gammas: DEFAULT_GAMMAS.map(int).to_vec(),
            line_t: 1.0,
            timings: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub rows: usize,
    pub cols: usize,
    pub matrix: Matrix<Q>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropernessSection {
    /// `"certified: non-proper"` or [`INCONCLUSIVE`].
    pub status: String,
    pub candidates: Vec<Candidate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<PropernessCertificate>,
    pub zero_in_sf: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessSection {
    pub lifted: LiftedWitness,
    pub anchor_distances: Vec<f64>,
    pub decay: Vec<DecayRow>,
    pub line_sample: LineSample,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub druzkowski_ms: f64,
    pub class_z_ms: f64,
    pub properness_ms: f64,
    pub total_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub tool_version: String,
    pub seed: u64,
    pub trials: usize,
    pub arithmetic: Arithmetic,
    pub input: InputDigest,
    pub rank: usize,
    pub corank: usize,
    pub kernel_basis: SubspaceBasis<Q>,
    pub image_basis: SubspaceBasis<Q>,
    pub druzkowski: DruzkowskiReport,
    pub class_z: ClassZReport,
    pub properness: PropernessSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<WitnessSection>,
    pub lines: Vec<NonProperLine>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl AnalysisReport {
    /// Certificates re-verify during deserialization; this additionally
    /// re-checks the lifted witness and the Druzkowski witness.
    pub fn verify(&self) -> Result<()> {
        self.druzkowski.verify(&self.input.matrix)?;
        if let Some(w) = &self.witnesses {
            w.lifted.verify()?;
        }
        Ok(())
    }
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

pub fn analyze(a: &Matrix<Q>, opts: &AnalysisOptions) -> Result<AnalysisReport> {
    let start = Instant::now();
    a.ensure_square()?;
    if opts.trials == 0 {
        return Err(Error::PreconditionViolated("trials must be at least 1".into()));
    }
    let kernel = kernel_basis(a);
    let image = colspace_basis(a);

    let t = Instant::now();
    let druzkowski = druzkowski_test(a, opts.trials, opts.seed)?;
    let druzkowski_ms = ms(t);

    let t = Instant::now();
    let class_z = class_z_analysis(a, &default_lambda_grid(), opts.trials, opts.seed)?;
    let class_z_ms = ms(t);

    let t = Instant::now();
    let search = if kernel.dim() > 1 {
        CandidateSearch::Randomized {
            count: 64,
            seed: opts.seed,
        }
    } else {
        CandidateSearch::KernelRoots
    };
    let eps = match opts.arithmetic {
        Arithmetic::Exact => DEFAULT_TOLERANCE,
        Arithmetic::Tolerance { eps } => eps,
    };
    let mut candidates = candidate_directions_with(a, search, eps)?;
    if opts.arithmetic == Arithmetic::Exact {
        candidates.retain(|c| c.exact().is_some());
    }
    let (properness, witnesses, lines) = match certify_zero_in_sf_with(a, &opts.gammas)? {
        SfOutcome::Report(r) => {
            let decay = decay_table(&r.lifted)?;
            let n_points = r.lifted.records.len().min(3);
            let line_sample = nonproper_line(&r.lifted, opts.line_t, n_points)?;
            let mut lines = r.lines.clone();
            lines.push(line_sample.line.clone());
            (
                PropernessSection {
                    status: "certified: non-proper".into(),
                    candidates,
                    certificate: Some(r.certificate.clone()),
                    zero_in_sf: true,
                },
                Some(WitnessSection {
                    lifted: r.lifted,
                    anchor_distances: r.anchor_distances,
                    decay,
                    line_sample,
                }),
                lines,
            )
        }
        SfOutcome::Inconclusive { .. } => (
            PropernessSection {
                status: INCONCLUSIVE.into(),
                candidates,
                certificate: None,
                zero_in_sf: false,
            },
            None,
            Vec::new(),
        ),
    };
    let properness_ms = ms(t);

    Ok(AnalysisReport {
        tool_version: TOOL_VERSION.into(),
        seed: opts.seed,
        trials: opts.trials,
        arithmetic: opts.arithmetic,
        input: InputDigest {
            rows: a.rows(),
            cols: a.cols(),
            matrix: a.clone(),
        },
        rank: a.rank(),
        corank: kernel.dim(),
        kernel_basis: kernel,
        image_basis: image,
        druzkowski,
        class_z,
        properness,
        witnesses,
        lines,
        timings: opts.timings.then(|| Timings {
            druzkowski_ms,
            class_z_ms,
            properness_ms,
            total_ms: ms(start),
        }),
    })
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so a failed run never leaves a partial file behind.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
