use std::sync::Arc;

use super::QTauError;
use crate::evolve::evolution_a;
use crate::ncalg::{Alphabet, GenId, NCPoly, PolyMatrix, Side};
use crate::slnq::{gauss_element, EvolutionSide, QSymbols};

/// A quantum tau value together with the labels it was computed for.
#[derive(Clone, Debug, PartialEq)]
pub struct QTauValue {
    pub value: NCPoly,
    pub n_states: usize,
    pub level: usize,
    /// State labels `(j, jbar)` for shifted or product entries.
    pub labels: Option<(Vec<usize>, Vec<usize>)>,
}

/// Evolutions of one time copy and the symbolic Gauss element, all on `F_1`.
#[derive(Clone, Debug)]
pub struct QSetup {
    pub sym: QSymbols,
    pub copy: usize,
    pub u: PolyMatrix,
    pub ubar: PolyMatrix,
    pub g: PolyMatrix,
    /// `U g Ubar`; entry `(m, mbar)` is `tau_1^{m mbar}`.
    pub shifted: PolyMatrix,
}

impl QSetup {
    pub fn new(sym: &QSymbols, copy: usize) -> Self {
        let a = &sym.alphabet;
        let n = sym.n();
        let u = evolution_a(a, &sym.xi[copy], n, EvolutionSide::Upper);
        let ubar = evolution_a(a, &sym.xibar[copy], n, EvolutionSide::Lower);
        let g = gauss_element(sym).matrix(a);
        let shifted = u.mul(&g).mul(&ubar);
        QSetup { sym: sym.clone(), copy, u, ubar, g, shifted }
    }

    pub fn alpha(&self) -> &Arc<Alphabet> {
        &self.sym.alphabet
    }

    pub fn n_states(&self) -> usize {
        self.sym.n()
    }

    pub fn rank(&self) -> usize {
        self.sym.n() - 1
    }

    /// `xi_i` for `1 <= i <= N-1`.
    pub fn xi(&self, i: usize) -> Option<GenId> {
        (i >= 1).then(|| self.sym.xi[self.copy].get(i - 1).copied()).flatten()
    }

    pub fn xibar(&self, i: usize) -> Option<GenId> {
        (i >= 1).then(|| self.sym.xibar[self.copy].get(i - 1).copied()).flatten()
    }

    /// `M_i^{power}`: `xi_i -> q^{power} xi_i`.
    pub fn twist(&self, f: &NCPoly, i: usize, power: i32) -> NCPoly {
        match self.xi(i) {
            Some(x) if power != 0 => f.twist_many(&[(x, power)]),
            _ => f.clone(),
        }
    }

    pub fn twist_bar(&self, f: &NCPoly, i: usize, power: i32) -> NCPoly {
        match self.xibar(i) {
            Some(x) if power != 0 => f.twist_many(&[(x, power)]),
            _ => f.clone(),
        }
    }

    /// `s_k = xi_1 ... xi_k`.
    pub fn s(&self, k: usize) -> NCPoly {
        (1..=k).fold(NCPoly::one(self.alpha()), |acc, i| {
            &acc * &NCPoly::gen(self.alpha(), self.xi(i).expect("time index"))
        })
    }

    /// `sbar_k = xibar_k ... xibar_1`.
    pub fn sbar(&self, k: usize) -> NCPoly {
        (1..=k).rev().fold(NCPoly::one(self.alpha()), |acc, i| {
            &acc * &NCPoly::gen(self.alpha(), self.xibar(i).expect("time index"))
        })
    }

    /// `s_k^{-1} f`.
    pub fn left_div_s(&self, f: &NCPoly, k: usize) -> Result<NCPoly, QTauError> {
        let mut acc = f.clone();
        for i in 1..=k {
            acc = acc.side_divide(self.xi(i).expect("time index"), Side::Left)?;
        }
        Ok(acc)
    }

    /// `f sbar_k^{-1}`.
    pub fn right_div_sbar(&self, f: &NCPoly, k: usize) -> Result<NCPoly, QTauError> {
        let mut acc = f.clone();
        for i in 1..=k {
            acc = acc.side_divide(self.xibar(i).expect("time index"), Side::Right)?;
        }
        Ok(acc)
    }

    /// Full `tau_1 = tau_1^{00}`.
    pub fn tau1(&self) -> NCPoly {
        self.shifted.get(0, 0)
    }
}

fn check_labels(setup: &QSetup, m: usize, mbar: usize) -> Result<(), QTauError> {
    let n = setup.n_states();
    if m >= n || mbar >= n {
        return Err(QTauError::InvalidLabel { label: m.max(mbar), n });
    }
    Ok(())
}

/// `tau_1^{m mbar} = <m| U g Ubar |mbar>`.
pub fn qtau1(setup: &QSetup, m: usize, mbar: usize) -> Result<QTauValue, QTauError> {
    check_labels(setup, m, mbar)?;
    Ok(QTauValue {
        value: setup.shifted.get(m, mbar),
        n_states: setup.n_states(),
        level: 1,
        labels: Some((vec![m], vec![mbar])),
    })
}

/// `s_m^{-1} (sum_{k >= m, kbar >= mbar} s_k sbar_kbar g_{k kbar}) sbar_mbar^{-1}`.
pub fn qtau1_sum(setup: &QSetup, m: usize, mbar: usize) -> Result<NCPoly, QTauError> {
    check_labels(setup, m, mbar)?;
    let n = setup.n_states();
    let mut acc = NCPoly::zero(setup.alpha());
    for k in m..n {
        let sk = setup.s(k);
        for kb in mbar..n {
            if let Some(gk) = setup.g.get_ref(k, kb) {
                acc.add_assign_ref(&(&(&sk * gk) * &setup.sbar(kb)));
            }
        }
    }
    setup.right_div_sbar(&setup.left_div_s(&acc, m)?, mbar)
}

/// `s_{m-1}^{-1} (D_m Dbar_mbar tau_1) sbar_{mbar-1}^{-1}`; a zero label skips its operator.
pub fn qtau1_difference(setup: &QSetup, tau1: &NCPoly, m: usize, mbar: usize) -> Result<NCPoly, QTauError> {
    check_labels(setup, m, mbar)?;
    let mut f = tau1.clone();
    if m >= 1 {
        f = super::diff::d_op(setup, m, &f)?;
    }
    if mbar >= 1 {
        f = super::diff::dbar_op(setup, mbar, &f)?;
    }
    setup.right_div_sbar(&setup.left_div_s(&f, m.saturating_sub(1))?, mbar.saturating_sub(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slnq::SymbolConfig;

    fn setup(n: usize) -> QSetup {
        QSetup::new(&QSymbols::new(SymbolConfig::new(n)), 0)
    }

    #[test]
    fn vacuum_entry_is_the_explicit_sum() {
        for n in 2..=4 {
            let s = setup(n);
            assert_eq!(qtau1(&s, 0, 0).unwrap().value, qtau1_sum(&s, 0, 0).unwrap());
            // N^2 terms, one per entry of g, each a product of Gauss letters
            assert!(s.tau1().len() >= n * n);
        }
    }

    #[test]
    fn shifted_entries_match_the_divided_sum() {
        for n in 2..=4 {
            let s = setup(n);
            for m in 0..n {
                for mb in 0..n {
                    assert_eq!(qtau1(&s, m, mb).unwrap().value, qtau1_sum(&s, m, mb).unwrap(), "N={n} ({m},{mb})");
                }
            }
        }
    }

    #[test]
    fn sl2_top_entry_is_g11() {
        let s = setup(2);
        assert_eq!(qtau1(&s, 1, 1).unwrap().value, s.g.get(1, 1));
    }

    #[test]
    fn difference_form_for_first_shift() {
        let s = setup(3);
        let t = s.tau1();
        assert_eq!(qtau1_difference(&s, &t, 1, 0).unwrap(), qtau1(&s, 1, 0).unwrap().value);
        assert_eq!(qtau1_difference(&s, &t, 0, 1).unwrap(), qtau1(&s, 0, 1).unwrap().value);
        assert_eq!(qtau1_difference(&s, &t, 1, 1).unwrap(), qtau1(&s, 1, 1).unwrap().value);
    }

    #[test]
    fn out_of_range_label() {
        assert!(matches!(qtau1(&setup(2), 2, 0), Err(QTauError::InvalidLabel { .. })));
    }
}
