//! Non-properness certificates, witness sequences and the structure of the
//! non-proper value set `S_{F_A}`.

pub mod candidates;
pub mod criterion;
pub mod lift;
pub mod line;
pub mod table;
pub mod witness;
pub mod zero;

pub use candidates::{candidate_directions, candidate_directions_with, Candidate, CandidateSearch};
pub use criterion::{criterion_check, criterion_residual, CriterionOutcome, PropernessCertificate, RefusalReason};
pub use lift::{lift_witness, LiftRecord, LiftedWitness};
pub use line::{nonproper_line, EmpiricalSign, LineSample, NonProperLine};
pub use table::{decay_table, fhat_slope, to_csv, DecayRow};
pub use witness::{
    build_fhat_witness, decay_slope, part2_values, theorem1_part2_witness, FhatRow, Part2Row, WitnessSequence,
};
pub use zero::{certify_zero_in_sf, certify_zero_in_sf_with, find_certificate, SfOutcome, SfStructureReport};
