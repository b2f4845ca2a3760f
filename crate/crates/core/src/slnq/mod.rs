//! Root data, generator matrices, q-wedge representations and coproducts.

mod coproduct;
mod gauss;
mod roots;
mod wedge;

pub use coproduct::{
    apply_bra_slots, apply_ket_slots, basis_vector, coproduct_power, evolution_coproduct_direct, evolution_slot_factor,
    tensor_action, CoproductSpec, EvolutionSide,
};
pub use gauss::{gauss_decompose, gauss_element, GaussElement, GroupElement, QSymbols, SymbolConfig, ThetaChiRule};
pub use roots::{generator_matrices, q_cartan, scalar_identity, GenKind, GeneratorMatrix, RootData};
pub use wedge::{bra_times, inversions, permutations, q_antisymmetrize, tensor_flat, tensor_unflat, times_ket, QWedge};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlError {
    #[error("generator index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("vector leaves the wedge span at component {component:?}: residual {residual}")]
    NotInWedge { component: Vec<usize>, residual: String },
}
