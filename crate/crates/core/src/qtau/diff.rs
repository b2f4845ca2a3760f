use std::collections::BTreeMap;
use std::sync::Arc;

use super::setup::QSetup;
use super::QTauError;
use crate::ncalg::{AlgError, Alphabet, GenId, NCPoly, ScalarQ, Side, Word};

/// `q^2 - 1` (`sign = 1`) or `q^{-2} - 1` (`sign = -1`).
fn q2_minus_one(sign: i32) -> ScalarQ {
    ScalarQ::q_pow(2 * sign) - ScalarQ::one()
}

fn jackson(f: &NCPoly, x: GenId, sign: i32) -> Result<NCPoly, QTauError> {
    let num = &f.twist_many(&[(x, 2 * sign)]) - f;
    num.div_scalar(&q2_minus_one(sign)).ok_or(QTauError::Alg(AlgError::InexactDivision))
}

/// `D_i f = xi_i^{-1} [(M_i^{+2} - 1)/(q^2 - 1) f]`, the inverse acting from the left.
pub fn d_op(setup: &QSetup, i: usize, f: &NCPoly) -> Result<NCPoly, QTauError> {
    let Some(x) = setup.xi(i) else { return Ok(NCPoly::zero(f.alphabet())) };
    Ok(jackson(f, x, 1)?.side_divide(x, Side::Left)?)
}

/// `Dbar_i f = [(Mbar_i^{-2} - 1)/(q^{-2} - 1) f] xibar_i^{-1}`.
pub fn dbar_op(setup: &QSetup, i: usize, f: &NCPoly) -> Result<NCPoly, QTauError> {
    let Some(x) = setup.xibar(i) else { return Ok(NCPoly::zero(f.alphabet())) };
    Ok(jackson(f, x, -1)?.side_divide(x, Side::Right)?)
}

/// `prod_j M_j^{sign * a_ij}` on `xi` (or on `xibar` when `bar`).
fn cartan_twist(setup: &QSetup, f: &NCPoly, i: usize, sign: i32, bar: bool) -> NCPoly {
    let shifts: Vec<(GenId, i32)> = (1..=setup.rank())
        .filter_map(|j| {
            let g = if bar { setup.xibar(j) } else { setup.xi(j) }?;
            let c = sign * setup.sym.root.cartan(i, j);
            (c != 0).then_some((g, c))
        })
        .collect();
    f.twist_many(&shifts)
}

/// Which tensor factor an operator acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    First,
    Second,
}

/// Element of `A (x) A` for the combined alphabet `A`, stored termwise.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorPair {
    alpha: Arc<Alphabet>,
    terms: BTreeMap<(Word, Word), ScalarQ>,
}

fn monomial(alpha: &Arc<Alphabet>, w: &Word) -> NCPoly {
    NCPoly::from_terms(alpha, [(ScalarQ::one(), w.clone())])
}

impl TensorPair {
    pub fn zero(alpha: &Arc<Alphabet>) -> Self {
        TensorPair { alpha: alpha.clone(), terms: BTreeMap::new() }
    }

    /// `a (x) b`.
    pub fn from_product(a: &NCPoly, b: &NCPoly) -> Self {
        let mut p = Self::zero(a.alphabet());
        for (wa, ca) in a.terms() {
            for (wb, cb) in b.terms() {
                p.add_term((wa.clone(), wb.clone()), ca.clone() * cb.clone());
            }
        }
        p
    }

    fn add_term(&mut self, key: (Word, Word), c: ScalarQ) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alpha
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &TensorPair) -> TensorPair {
        let mut p = self.clone();
        for (k, c) in &other.terms {
            p.add_term(k.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, other: &TensorPair) -> TensorPair {
        self.add(&other.scale(&-ScalarQ::one()))
    }

    pub fn scale(&self, c: &ScalarQ) -> TensorPair {
        let mut p = Self::zero(&self.alpha);
        for (k, v) in &self.terms {
            p.add_term(k.clone(), v.clone() * c.clone());
        }
        p
    }

    /// Applies a linear map to one factor.
    pub fn map_factor(
        &self,
        factor: Factor,
        mut f: impl FnMut(&NCPoly) -> Result<NCPoly, QTauError>,
    ) -> Result<TensorPair, QTauError> {
        // group by the untouched word so `f` runs once per group
        let mut groups: BTreeMap<Word, NCPoly> = BTreeMap::new();
        for ((wa, wb), c) in &self.terms {
            let (keep, act) = match factor {
                Factor::First => (wb, wa),
                Factor::Second => (wa, wb),
            };
            groups
                .entry(keep.clone())
                .or_insert_with(|| NCPoly::zero(&self.alpha))
                .add_scaled(c, &monomial(&self.alpha, act));
        }
        let mut out = Self::zero(&self.alpha);
        for (keep, poly) in groups {
            for (w, c) in f(&poly)?.terms() {
                let key = match factor {
                    Factor::First => (w.clone(), keep.clone()),
                    Factor::Second => (keep.clone(), w.clone()),
                };
                out.add_term(key, c.clone());
            }
        }
        Ok(out)
    }

    /// Collapses `a (x) b -> a b`.
    pub fn multiply(&self) -> NCPoly {
        let mut acc = NCPoly::zero(&self.alpha);
        for ((wa, wb), c) in &self.terms {
            let mut raw = wa.clone();
            raw.extend(wb.iter().copied());
            acc.add_scaled(c, &NCPoly::normal_order(&self.alpha, &raw));
        }
        acc
    }
}

/// Difference operators on quantum tau values and on tensor pairs of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DifferenceOp {
    D(usize),
    DBar(usize),
    /// `M_i^{power}` on `xi`.
    Twist {
        index: usize,
        power: i32,
    },
    /// `Mbar_i^{power}` on `xibar`.
    TwistBar {
        index: usize,
        power: i32,
    },
    /// `D_i (x) I`.
    DdLeft(usize),
    /// `prod_j M_j^{a_ij} (x) D_i`.
    DdRight(usize),
    /// `prod_j M_j^{-a_ij} (x) D_i`, the exponent sign as displayed next to the definitions.
    DdRightDisplayed(usize),
    /// `Dbar_i (x) prod_j Mbar_j^{-a_ij}`.
    DdBarLeft(usize),
    /// `I (x) Dbar_i`.
    DdBarRight(usize),
}

impl DifferenceOp {
    pub fn acts_on_pairs(self) -> bool {
        !matches!(
            self,
            DifferenceOp::D(_) | DifferenceOp::DBar(_) | DifferenceOp::Twist { .. } | DifferenceOp::TwistBar { .. }
        )
    }
}

/// Operand of [`qdiff_apply`].
#[derive(Clone, Debug, PartialEq)]
pub enum Operand {
    Single(NCPoly),
    Pair(TensorPair),
}

fn apply_single(setup: &QSetup, op: DifferenceOp, f: &NCPoly) -> Result<NCPoly, QTauError> {
    match op {
        DifferenceOp::D(i) => d_op(setup, i, f),
        DifferenceOp::DBar(i) => dbar_op(setup, i, f),
        DifferenceOp::Twist { index, power } => Ok(setup.twist(f, index, power)),
        DifferenceOp::TwistBar { index, power } => Ok(setup.twist_bar(f, index, power)),
        _ => Err(QTauError::OperandMismatch(format!("{op:?} acts on tensor pairs"))),
    }
}

/// Applies a tensor-pair operator.
pub fn apply_pair(setup: &QSetup, op: DifferenceOp, p: &TensorPair) -> Result<TensorPair, QTauError> {
    match op {
        DifferenceOp::DdLeft(i) => p.map_factor(Factor::First, |f| d_op(setup, i, f)),
        DifferenceOp::DdRight(i) => p
            .map_factor(Factor::First, |f| Ok(cartan_twist(setup, f, i, 1, false)))?
            .map_factor(Factor::Second, |f| d_op(setup, i, f)),
        DifferenceOp::DdRightDisplayed(i) => p
            .map_factor(Factor::First, |f| Ok(cartan_twist(setup, f, i, -1, false)))?
            .map_factor(Factor::Second, |f| d_op(setup, i, f)),
        DifferenceOp::DdBarLeft(i) => p
            .map_factor(Factor::First, |f| dbar_op(setup, i, f))?
            .map_factor(Factor::Second, |f| Ok(cartan_twist(setup, f, i, -1, true))),
        DifferenceOp::DdBarRight(i) => p.map_factor(Factor::Second, |f| dbar_op(setup, i, f)),
        _ => Err(QTauError::OperandMismatch(format!("{op:?} acts on single values"))),
    }
}

/// Applies `op` to a value of the matching shape.
pub fn qdiff_apply(setup: &QSetup, op: DifferenceOp, x: &Operand) -> Result<Operand, QTauError> {
    match x {
        Operand::Single(f) => apply_single(setup, op, f).map(Operand::Single),
        Operand::Pair(p) => apply_pair(setup, op, p).map(Operand::Pair),
    }
}

/// Applies a sequence of operators, rightmost first.
pub fn apply_pair_chain(setup: &QSetup, ops: &[DifferenceOp], p: &TensorPair) -> Result<TensorPair, QTauError> {
    ops.iter().rev().try_fold(p.clone(), |acc, &op| apply_pair(setup, op, &acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slnq::{QSymbols, SymbolConfig};

    fn setup(n: usize) -> QSetup {
        QSetup::new(&QSymbols::new(SymbolConfig::new(n)), 0)
    }

    #[test]
    fn d_on_single_time() {
        let s = setup(3);
        let a = s.alpha();
        let x1 = NCPoly::gen(a, s.xi(1).unwrap());
        let x2 = NCPoly::gen(a, s.xi(2).unwrap());
        assert_eq!(d_op(&s, 1, &x1).unwrap(), NCPoly::one(a));
        assert_eq!(d_op(&s, 1, &(&x1 * &x2)).unwrap(), x2);
        // D_1 xi_1^2 = (1 + q^2) xi_1
        let sq = &x1 * &x1;
        assert_eq!(d_op(&s, 1, &sq).unwrap(), x1.scale(&(ScalarQ::one() + ScalarQ::q_pow(2))));
        assert!(d_op(&s, 2, &x1).unwrap().is_zero());
    }

    #[test]
    fn dbar_removes_from_the_right() {
        let s = setup(3);
        let a = s.alpha();
        let b1 = NCPoly::gen(a, s.xibar(1).unwrap());
        let b2 = NCPoly::gen(a, s.xibar(2).unwrap());
        assert_eq!(dbar_op(&s, 1, &(&b2 * &b1)).unwrap(), b2);
        assert_eq!(dbar_op(&s, 1, &b1).unwrap(), NCPoly::one(a));
    }

    #[test]
    fn pair_multiply_round_trip() {
        let s = setup(3);
        let t = s.tau1();
        let one = NCPoly::one(s.alpha());
        assert_eq!(TensorPair::from_product(&t, &one).multiply(), t);
        let p = TensorPair::from_product(&t, &t);
        assert_eq!(p.multiply(), &t * &t);
        assert!(p.sub(&p).is_empty());
    }

    #[test]
    fn single_ops_reject_pairs() {
        let s = setup(2);
        let p = Operand::Pair(TensorPair::from_product(&s.tau1(), &s.tau1()));
        assert!(matches!(qdiff_apply(&s, DifferenceOp::D(1), &p), Err(QTauError::OperandMismatch(_))));
        let f = Operand::Single(s.tau1());
        assert!(matches!(qdiff_apply(&s, DifferenceOp::DdLeft(1), &f), Err(QTauError::OperandMismatch(_))));
    }

    #[test]
    fn left_and_right_commute_with_root_pairing() {
        let s = setup(3);
        let t = s.tau1();
        let p = TensorPair::from_product(&t, &t);
        for i in 1..=2 {
            for j in 1..=2 {
                let a = apply_pair_chain(&s, &[DifferenceOp::DdLeft(i), DifferenceOp::DdRight(j)], &p).unwrap();
                let b = apply_pair_chain(&s, &[DifferenceOp::DdRight(j), DifferenceOp::DdLeft(i)], &p).unwrap();
                let c = ScalarQ::q_pow(s.sym.root.cartan(i, j));
                assert!(a.sub(&b.scale(&c)).is_empty(), "({i},{j})");
            }
        }
    }
}
