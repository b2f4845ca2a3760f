use std::sync::Arc;

use super::QTauError;
use crate::ncalg::{Alphabet, NCPoly, PolyMatrix, ScalarQ};
use crate::slnq::{q_antisymmetrize, tensor_action};
use crate::tau::{fermion, occupied_below, Charge, WedgeBases};

/// Left or right intertwiner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Handed {
    /// `q^{+#occupied below}`.
    Left,
    /// `q^{-#occupied below}`.
    Right,
}

/// `Phi^{+-,L/R}_i = q^{+-sum_{j<i} psi_j^+ psi_j^-} psi_i^{+-}` on the sorted-tuple basis.
pub fn phi(
    alpha: &Arc<Alphabet>,
    bases: &WedgeBases,
    index: usize,
    charge: Charge,
    handed: Handed,
    from_level: usize,
) -> PolyMatrix {
    let psi = fermion(alpha, bases, index, charge, from_level).matrix;
    let to_level = match charge {
        Charge::Plus => from_level + 1,
        Charge::Minus => from_level - 1,
    };
    let sign = if handed == Handed::Left { 1 } else { -1 };
    let mode = index - 1;
    // the diagonal factor sits to the left, so it counts on the output tuple
    PolyMatrix::from_fn(alpha, bases.dim(to_level), bases.dim(from_level), |r, c| {
        let x = psi.get(r, c);
        if x.is_zero() {
            return x;
        }
        let below = occupied_below(&bases.levels[to_level][r], mode) as i32;
        x.scale(&ScalarQ::q_pow(sign * below))
    })
}

/// Placement of the intertwiners in `Gamma_q = sum_i Phi^{+,a}_i (x) Phi^{-,b}_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Placement {
    pub creation: Handed,
    pub annihilation: Handed,
}

impl Placement {
    /// `Phi^{+,L} (x) Phi^{-,R}`.
    pub const DISPLAYED: Placement = Placement { creation: Handed::Left, annihilation: Handed::Right };

    pub fn all() -> [Placement; 4] {
        [
            Placement::DISPLAYED,
            Placement { creation: Handed::Right, annihilation: Handed::Left },
            Placement { creation: Handed::Left, annihilation: Handed::Left },
            Placement { creation: Handed::Right, annihilation: Handed::Right },
        ]
    }

    pub fn label(self) -> String {
        let h = |x: Handed| if x == Handed::Left { "L" } else { "R" };
        format!("Phi+{} (x) Phi-{}", h(self.creation), h(self.annihilation))
    }
}

/// `Gamma_q` from `F_n (x) F_m` to `F_{n+1} (x) F_{m-1}`.
pub fn gamma_q(alpha: &Arc<Alphabet>, bases: &WedgeBases, n: usize, m: usize, placement: Placement) -> PolyMatrix {
    let mut gamma = PolyMatrix::zero(alpha, bases.dim(n + 1) * bases.dim(m - 1), bases.dim(n) * bases.dim(m));
    for i in 1..=bases.n_states {
        let p = phi(alpha, bases, i, Charge::Plus, placement.creation, n);
        let q = phi(alpha, bases, i, Charge::Minus, placement.annihilation, m);
        gamma = gamma.add(&p.kron(&q));
    }
    gamma
}

/// `g` on the q-wedge `F_level`, induced from the slot-ordered tensor power.
pub fn wedge_action(g: &PolyMatrix, level: usize) -> Result<PolyMatrix, QTauError> {
    if level == 0 {
        return Ok(PolyMatrix::identity(g.alphabet(), 1));
    }
    Ok(q_antisymmetrize(g.rows(), level).induced(&tensor_action(g, level))?)
}

/// Which factor's slots come first when entries of `g (x) g` are multiplied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SlotOrder {
    /// `F_n` (the creation side) first.
    CreationFirst,
    /// `F_m` first: the particle released at the right end of `F_m` enters `F_n` from the left.
    AnnihilationFirst,
}

/// Kronecker product whose entries multiply the second factor first.
fn kron_reversed(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let (br, bc) = (b.rows(), b.cols());
    let mut out = PolyMatrix::zero(a.alphabet(), a.rows() * br, a.cols() * bc);
    for i in 0..a.rows() {
        for (j, x) in a.row(i) {
            for k in 0..br {
                for (l, y) in b.row(k) {
                    out.set(i * br + k, j * bc + l, y * x);
                }
            }
        }
    }
    out
}

/// `g (x) g` on `F_n (x) F_m` in the given slot order.
pub fn pair_action(g: &PolyMatrix, n: usize, m: usize, order: SlotOrder) -> Result<PolyMatrix, QTauError> {
    let (gn, gm) = (wedge_action(g, n)?, wedge_action(g, m)?);
    Ok(match order {
        SlotOrder::CreationFirst => gn.kron(&gm),
        SlotOrder::AnnihilationFirst => kron_reversed(&gn, &gm),
    })
}

/// `Gamma_q (g (x) g) - (g (x) g) Gamma_q` on `F_n (x) F_m`.
pub fn gamma_q_commutator(
    g: &PolyMatrix,
    n: usize,
    m: usize,
    placement: Placement,
    order: SlotOrder,
) -> Result<PolyMatrix, QTauError> {
    let a = g.alphabet();
    let bases = WedgeBases::new(g.rows());
    if n + 1 > g.rows() || m == 0 || m > g.rows() {
        return Err(QTauError::InvalidLevel { level: if m == 0 { m } else { n + 1 }, n: g.rows() });
    }
    let gamma = gamma_q(a, &bases, n, m, placement);
    let before = pair_action(g, n, m, order)?;
    let after = pair_action(g, n + 1, m - 1, order)?;
    Ok(gamma.mul(&before).sub(&after.mul(&gamma)))
}

/// Total number of terms in the entries of a matrix.
pub fn residual_terms(m: &PolyMatrix) -> usize {
    (0..m.rows()).map(|i| m.row(i).values().map(NCPoly::len).sum::<usize>()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slnq::{gauss_element, QSymbols, SymbolConfig};

    #[test]
    fn right_creation_counts_modes_below() {
        let a = Alphabet::builder().build().unwrap();
        let b = WedgeBases::new(3);
        let p = phi(&a, &b, 2, Charge::Plus, Handed::Right, 1);
        let classical = fermion(&a, &b, 2, Charge::Plus, 1).matrix;
        let (r, c) = (b.index_of(2, &[0, 1]), b.index_of(1, &[0]));
        assert_eq!(p.get(r, c), classical.get(r, c).scale(&ScalarQ::q_pow(-1)));
        // mode 0 created on top of nothing below it
        let p1 = phi(&a, &b, 1, Charge::Plus, Handed::Right, 0);
        assert_eq!(p1.get(0, 0), NCPoly::one(&a));
    }

    #[test]
    fn classical_limit_is_the_fermion() {
        let a = Alphabet::builder().build().unwrap();
        let b = WedgeBases::new(3);
        for h in [Handed::Left, Handed::Right] {
            for i in 1..=3 {
                let p = phi(&a, &b, i, Charge::Minus, h, 2);
                assert_eq!(p.classical_limit(), fermion(&a, &b, i, Charge::Minus, 2).matrix.classical_limit());
            }
        }
    }

    #[test]
    fn sl2_gamma_from_one_one() {
        let sym = QSymbols::new(SymbolConfig::new(2));
        let g = gauss_element(&sym).matrix(&sym.alphabet);
        let c = gamma_q_commutator(&g, 1, 1, Placement::DISPLAYED, SlotOrder::AnnihilationFirst).unwrap();
        assert!(c.is_zero(), "{} residual terms", residual_terms(&c));
        let mirror = Placement { creation: Handed::Right, annihilation: Handed::Left };
        assert!(gamma_q_commutator(&g, 1, 1, mirror, SlotOrder::CreationFirst).unwrap().is_zero());
        assert!(!gamma_q_commutator(&g, 1, 1, Placement::DISPLAYED, SlotOrder::CreationFirst).unwrap().is_zero());
    }
}
