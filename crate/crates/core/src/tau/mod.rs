//! Classical tau-functions: matrix elements, determinant formulas, Hirota
//! equation, fermions and Baker-Akhiezer functions.

mod baker;
mod checks;
mod engine;
mod fermion;
mod hirota;

pub use baker::{
    baker_functions, bilinear_sides, bilinear_sides_printed, reduced_bilinear_check, simple_root_baker_lines, BakerSet,
    Correction, LineCheck,
};
pub use checks::{
    baker_check, bilinear_check, det_equivalence, factorize_check, hirota_check, miwa_check, param_a_check, run_check,
    tau1_shift_check, ClassicalCase, GroupSpec, TauError, CHECKS,
};
pub use engine::{
    antisymmetric_vacuum, bordered_minor, tau1_param_a, tau1_shift, tau1_shift_a_derivative, tau1_shift_a_sum,
    tau_a_det, tau_det, tau_direct, tau_schur_expand, ClassicalSetup, Param,
};
pub use fermion::{
    car_residuals, fermion, gamma_commutator, occupied_above, occupied_below, sandwich, vacuum_col, vacuum_row,
    wedge_power, Charge, FermionOp, WedgeBases,
};
pub use hirota::{hirota_residual, hirota_sign};
