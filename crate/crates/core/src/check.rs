//! Outcome of an identity check: accumulated residuals plus free-form notes.

use crate::ncalg::NCPoly;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckOutcome {
    /// Total number of terms over all residuals that should vanish.
    pub residual_terms: usize,
    /// First failing residual, labelled.
    pub witness: Option<String>,
    /// Measured facts that are reported but not gated on.
    pub notes: Vec<String>,
}

impl CheckOutcome {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn passed(&self) -> bool {
        self.residual_terms == 0
    }

    /// Records `residual`, which must be the zero polynomial for the check to pass.
    pub fn expect_zero(&mut self, label: impl FnOnce() -> String, residual: &NCPoly) {
        if residual.is_zero() {
            return;
        }
        self.residual_terms += residual.len();
        if self.witness.is_none() {
            let lead = residual.leading_term_string().unwrap_or_default();
            self.witness = Some(format!("{}: {lead}", label()));
        }
    }

    /// Records `lhs - rhs`.
    pub fn expect_eq(&mut self, label: impl FnOnce() -> String, lhs: &NCPoly, rhs: &NCPoly) {
        self.expect_zero(label, &(lhs - rhs));
    }

    /// Records a failure that has no polynomial residual.
    pub fn fail(&mut self, witness: String) {
        self.residual_terms += 1;
        if self.witness.is_none() {
            self.witness = Some(witness);
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn merge(&mut self, other: CheckOutcome) {
        self.residual_terms += other.residual_terms;
        if self.witness.is_none() {
            self.witness = other.witness;
        }
        self.notes.extend(other.notes);
    }
}
