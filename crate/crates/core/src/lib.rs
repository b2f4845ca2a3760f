//! Exact classical and quantum tau-functions of the fundamental representations
//! of SL(N) and SL_q(N).

pub mod check;
pub mod evolve;
pub mod ncalg;
pub mod par;
pub mod qtau;
pub mod slnq;
pub mod tau;
