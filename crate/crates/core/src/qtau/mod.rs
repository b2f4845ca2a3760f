//! Quantum tau-functions in the simple-root parametrization: twisted product
//! entries, q-determinant expansion, difference operators, intertwiners and
//! Baker-Akhiezer functions.

mod baker;
mod checks;
mod compact;
mod detq;
mod diff;
mod intertwiner;
mod setup;

pub use baker::{q_baker_functions, q_baker_lines, q_bilinear_sides, wedge_levels, QBakerSet, QLine, WedgeLevels};
pub use checks::{
    classical_limit_check, dd_comm_check, detq_check, gamma_check, q_baker_check, run_check, tau1_check,
    tau1_diff_check, tau2_full_check, QuantumCase, CHECKS, RANDOM_PAIRS,
};
pub use compact::{
    apply_script, describe_tau2, tau2_check, tau2_compact, tau2_script, ScriptOp, Tau2Compact, Tau2Term,
    DISPLAYED_TWISTS,
};
pub use detq::{
    direct_row, factor_twists, measure_normalization, product_factors, proportionality, qdet_matrix, qdet_terms,
    qtau_direct, qtau_product_entry, qtau_qdet, slot_evolutions, DetqTerm, Normalization, SlotEvolutions,
};
pub use diff::{apply_pair, apply_pair_chain, d_op, dbar_op, qdiff_apply, DifferenceOp, Factor, Operand, TensorPair};
pub use intertwiner::{
    gamma_q, gamma_q_commutator, pair_action, phi, residual_terms, wedge_action, Handed, Placement, SlotOrder,
};
pub use setup::{qtau1, qtau1_difference, qtau1_sum, QSetup, QTauValue};

use thiserror::Error;

use crate::ncalg::AlgError;
use crate::slnq::SlError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QTauError {
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Wedge(#[from] SlError),
    #[error("state label {label} out of range for N = {n}")]
    InvalidLabel { label: usize, n: usize },
    #[error("label tuples differ in length: {upper} vs {lower}")]
    LabelLength { upper: usize, lower: usize },
    #[error("level {level} out of range for N = {n}")]
    InvalidLevel { level: usize, n: usize },
    #[error("operator does not fit its operand: {0}")]
    OperandMismatch(String),
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
}
