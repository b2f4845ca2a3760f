use std::sync::Arc;

use itertools::Itertools;
use num::BigRational;

use crate::evolve::{evolution_a, evolution_b, evolution_c, s_products, sbar_products, ClassicalSymbols, SchurTable};
use crate::ncalg::{Alphabet, GenId, NCPoly, PolyMatrix};
use crate::slnq::{apply_bra_slots, apply_ket_slots, inversions, permutations, tensor_flat, EvolutionSide};

/// Evolution family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Param {
    /// Simple-root times `xi_i`.
    A,
    /// Conventional times `t_k`.
    B,
    /// Miwa points `lambda_a`.
    C,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::A => "A",
            Param::B => "B",
            Param::C => "C",
        }
    }
}

/// Everything a classical matrix element needs: `U`, `g`, `Ubar` over one commutative alphabet.
#[derive(Clone, Debug)]
pub struct ClassicalSetup {
    pub alpha: Arc<Alphabet>,
    pub n_states: usize,
    pub u: PolyMatrix,
    pub ubar: PolyMatrix,
    pub g: PolyMatrix,
}

impl ClassicalSetup {
    /// Evolutions of `param` built from time copy `copy` of `sym`.
    pub fn new(sym: &ClassicalSymbols, param: Param, copy: usize, g: &PolyMatrix) -> Self {
        let a = &sym.alphabet;
        let n = sym.n;
        let vars = |ids: &[GenId]| ids.iter().map(|&x| sym.var(x)).collect::<Vec<_>>();
        let (u, ubar) = match param {
            Param::A => (
                evolution_a(a, &sym.xi[copy], n, EvolutionSide::Upper),
                evolution_a(a, &sym.xibar[copy], n, EvolutionSide::Lower),
            ),
            Param::B => (
                evolution_b(a, &vars(&sym.t[copy]), n, EvolutionSide::Upper),
                evolution_b(a, &vars(&sym.tbar[copy]), n, EvolutionSide::Lower),
            ),
            Param::C => (
                evolution_c(a, &vars(&sym.lambda[copy]), n, EvolutionSide::Upper),
                evolution_c(a, &vars(&sym.lambdabar[copy]), n, EvolutionSide::Lower),
            ),
        };
        ClassicalSetup { alpha: a.clone(), n_states: n, u, ubar, g: g.clone() }
    }

    /// Setup from explicit matrices (all over the same commutative alphabet).
    pub fn from_parts(u: PolyMatrix, g: PolyMatrix, ubar: PolyMatrix) -> Self {
        assert!(Alphabet::same(u.alphabet(), g.alphabet()) && Alphabet::same(g.alphabet(), ubar.alphabet()));
        ClassicalSetup { alpha: u.alphabet().clone(), n_states: u.rows(), u, ubar, g }
    }

    /// `U g Ubar`; entry `(m, mbar)` is the shifted matrix element `tau_1^{m mbar}`.
    pub fn shifted_matrix(&self) -> PolyMatrix {
        self.u.mul(&self.g).mul(&self.ubar)
    }
}

fn factorial(n: usize) -> BigRational {
    (1..=n as i64).fold(BigRational::from_integer(1.into()), |a, k| a * BigRational::from_integer(k.into()))
}

/// Antisymmetrized vacuum `sum_P (-)^P |P(0)> (x) ... (x) |P(n-1)>` in `F_1^{(x) n}`.
pub fn antisymmetric_vacuum(alpha: &Arc<Alphabet>, n_states: usize, level: usize) -> Vec<NCPoly> {
    let mut v = vec![NCPoly::zero(alpha); n_states.pow(level as u32)];
    for p in permutations(level) {
        let sign = if inversions(&p).is_multiple_of(2) { 1 } else { -1 };
        v[tensor_flat(n_states, &p)] = NCPoly::from_int(alpha, sign);
    }
    v
}

/// Vacuum pairing against `U^{(x) n} g^{(x) n} Ubar^{(x) n}`, divided by `n!`.
pub fn tau_direct(setup: &ClassicalSetup, level: usize) -> NCPoly {
    let a = &setup.alpha;
    if level == 0 {
        return NCPoly::one(a);
    }
    let vac = antisymmetric_vacuum(a, setup.n_states, level);
    let bra = apply_bra_slots(&apply_bra_slots(&vac, &setup.u, level), &setup.g, level);
    let ket = apply_ket_slots(&setup.ubar, &vac, level);
    let mut acc = NCPoly::zero(a);
    for (x, y) in bra.iter().zip(&ket) {
        if !x.is_zero() && !y.is_zero() {
            acc.add_assign_ref(&(x * y));
        }
    }
    acc.scale_rational(&factorial(level).recip())
}

/// `<m| U g Ubar |mbar>`.
pub fn tau1_shift(setup: &ClassicalSetup, m: usize, mbar: usize) -> NCPoly {
    let mut acc = NCPoly::zero(&setup.alpha);
    for (k, u) in setup.u.row(m) {
        for (kb, g) in setup.g.row(*k) {
            if let Some(ub) = setup.ubar.get_ref(*kb, mbar) {
                acc.add_assign_ref(&(&(u * g) * ub));
            }
        }
    }
    acc
}

/// `det_{0 <= m, mbar < n} tau_1^{m mbar}`.
pub fn tau_det(setup: &ClassicalSetup, level: usize) -> NCPoly {
    let idx: Vec<usize> = (0..level).collect();
    setup.shifted_matrix().submatrix(&idx, &idx).det()
}

/// Cauchy-Binet expansion over index sets with Schur determinants on both sides.
pub fn tau_schur_expand(p: &SchurTable, pbar: &SchurTable, g: &PolyMatrix, level: usize) -> NCPoly {
    let a = g.alphabet();
    if level == 0 {
        return NCPoly::one(a);
    }
    let n = g.rows();
    let sets: Vec<Vec<usize>> = (0..n).combinations(level).collect();
    let schur_det = |table: &SchurTable, set: &[usize]| {
        PolyMatrix::from_fn(a, level, level, |i, j| table.get(set[j] as i64 - i as i64)).det()
    };
    let left: Vec<NCPoly> = sets.iter().map(|s| schur_det(p, s)).collect();
    let right: Vec<NCPoly> = sets.iter().map(|s| schur_det(pbar, s)).collect();
    let mut acc = NCPoly::zero(a);
    for (i, si) in sets.iter().enumerate() {
        if left[i].is_zero() {
            continue;
        }
        for (j, sj) in sets.iter().enumerate() {
            if right[j].is_zero() {
                continue;
            }
            let minor = g.submatrix(si, sj).det();
            if !minor.is_zero() {
                acc.add_assign_ref(&(&(&left[i] * &minor) * &right[j]));
            }
        }
    }
    acc
}

/// `xi_{from+1} ... xi_to`, i.e. `s_to / s_from`.
fn xi_range(sym: &ClassicalSymbols, copy: usize, from: usize, to: usize) -> NCPoly {
    (from..to).fold(NCPoly::one(&sym.alphabet), |acc, k| &acc * &sym.var(sym.xi[copy][k]))
}

fn xibar_range(sym: &ClassicalSymbols, copy: usize, from: usize, to: usize) -> NCPoly {
    (from..to).fold(NCPoly::one(&sym.alphabet), |acc, k| &acc * &sym.var(sym.xibar[copy][k]))
}

/// Bordered minor: rows `0..n` plus `k`, columns `0..n` plus `kbar`.
pub fn bordered_minor(g: &PolyMatrix, n: usize, k: usize, kbar: usize) -> NCPoly {
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols = rows.clone();
    rows.push(k);
    cols.push(kbar);
    g.submatrix(&rows, &cols).det()
}

/// `(1 / (s_n sbar_n)) sum_{k, kbar >= n} s_k sbar_kbar D^{(n)}_{k kbar}`, the level-`n+1` value.
pub fn tau_a_det(sym: &ClassicalSymbols, copy: usize, g: &PolyMatrix, n: usize) -> NCPoly {
    let dim = sym.n;
    let mut acc = NCPoly::zero(&sym.alphabet);
    for k in n..dim {
        let sk = xi_range(sym, copy, n, k);
        for kb in n..dim {
            let d = bordered_minor(g, n, k, kb);
            if d.is_zero() {
                continue;
            }
            acc.add_assign_ref(&(&(&sk * &d) * &xibar_range(sym, copy, n, kb)));
        }
    }
    acc
}

/// `(1 / (s_m sbar_mbar)) sum_{k >= m, kbar >= mbar} s_k sbar_kbar g_{k kbar}`.
pub fn tau1_shift_a_sum(sym: &ClassicalSymbols, copy: usize, g: &PolyMatrix, m: usize, mbar: usize) -> NCPoly {
    let mut acc = NCPoly::zero(&sym.alphabet);
    for k in m..sym.n {
        for kb in mbar..sym.n {
            if let Some(x) = g.get_ref(k, kb) {
                acc.add_assign_ref(&(&(&xi_range(sym, copy, m, k) * x) * &xibar_range(sym, copy, mbar, kb)));
            }
        }
    }
    acc
}

/// `(1 / (s_{m-1} sbar_{mbar-1})) d/dxi_m d/dxibar_mbar tau_1`; no derivative for a zero index.
pub fn tau1_shift_a_derivative(sym: &ClassicalSymbols, copy: usize, tau1: &NCPoly, m: usize, mbar: usize) -> NCPoly {
    let mut f = tau1.clone();
    if m > 0 {
        f = f.derivative(sym.xi[copy][m - 1]).expect("classical times commute");
        for k in 0..m - 1 {
            f = f.side_divide(sym.xi[copy][k], crate::ncalg::Side::Left).expect("divisible by s_{m-1}");
        }
    }
    if mbar > 0 {
        f = f.derivative(sym.xibar[copy][mbar - 1]).expect("classical times commute");
        for k in 0..mbar - 1 {
            f = f.side_divide(sym.xibar[copy][k], crate::ncalg::Side::Right).expect("divisible by sbar_{mbar-1}");
        }
    }
    f
}

/// `sum_{k, kbar} s_k sbar_kbar g_{k kbar}`.
pub fn tau1_param_a(sym: &ClassicalSymbols, copy: usize, g: &PolyMatrix) -> NCPoly {
    let a = &sym.alphabet;
    let s = s_products(a, &sym.xi[copy]);
    let sb = sbar_products(a, &sym.xibar[copy]);
    let mut acc = NCPoly::zero(a);
    for k in 0..sym.n {
        for kb in 0..sym.n {
            if let Some(x) = g.get_ref(k, kb) {
                acc.add_assign_ref(&(&(&s[k] * x) * &sb[kb]));
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::{schur_polynomials, ClassicalConfig};
    use crate::ncalg::{rat, RatMatrix};

    fn sample_g(n: usize) -> RatMatrix {
        // unit upper * unit lower, det 1
        let mut up = RatMatrix::identity(n);
        let mut lo = RatMatrix::identity(n);
        for i in 0..n {
            for j in i + 1..n {
                up.set(i, j, rat((i + 2 * j) as i64 % 5 - 2, 1 + (i as i64 % 2)));
                lo.set(j, i, rat((3 * i + j) as i64 % 4 - 1, 2));
            }
        }
        up.mul(&lo)
    }

    fn setup(n: usize, param: Param) -> (ClassicalSymbols, ClassicalSetup) {
        let sym = ClassicalSymbols::new(ClassicalConfig::new(n));
        let g = sample_g(n).to_poly(&sym.alphabet);
        let s = ClassicalSetup::new(&sym, param, 0, &g);
        (sym, s)
    }

    #[test]
    fn sl2_identity_tau1() {
        let sym = ClassicalSymbols::new(ClassicalConfig::new(2));
        let id = PolyMatrix::identity(&sym.alphabet, 2);
        let s = ClassicalSetup::new(&sym, Param::B, 0, &id);
        let t = sym.var(sym.t[0][0]);
        let tb = sym.var(sym.tbar[0][0]);
        assert_eq!(tau_direct(&s, 1), &NCPoly::one(&sym.alphabet) + &(&t * &tb));
    }

    #[test]
    fn top_level_is_one_for_unit_determinant() {
        for n in 2..=4 {
            let (_, s) = setup(n, Param::B);
            assert_eq!(tau_direct(&s, n), NCPoly::one(&s.alpha));
        }
    }

    #[test]
    fn zero_times_give_leading_minors() {
        let n = 3;
        let (sym, s) = setup(n, Param::B);
        let g = sample_g(n);
        let mut zero: Vec<GenId> = sym.t[0].clone();
        zero.extend(&sym.tbar[0]);
        for level in 1..=n {
            let v = tau_direct(&s, level).kill(&zero);
            assert_eq!(v, NCPoly::from_rational(&s.alpha, g.leading_minor(level)));
        }
    }

    #[test]
    fn direct_det_and_schur_agree() {
        for n in 2..=3 {
            let (sym, s) = setup(n, Param::B);
            let t: Vec<NCPoly> = sym.t[0].iter().map(|&x| sym.var(x)).collect();
            let tb: Vec<NCPoly> = sym.tbar[0].iter().map(|&x| sym.var(x)).collect();
            let p = schur_polynomials(&sym.alphabet, &t, n - 1);
            let pb = schur_polynomials(&sym.alphabet, &tb, n - 1);
            for level in 1..=n {
                let d = tau_direct(&s, level);
                assert_eq!(d, tau_det(&s, level), "N={n} level={level}");
                assert_eq!(d, tau_schur_expand(&p, &pb, &s.g, level), "N={n} level={level}");
            }
        }
    }

    #[test]
    fn shifted_corner_is_last_entry() {
        let (_, s) = setup(3, Param::B);
        assert_eq!(tau1_shift(&s, 2, 2), s.g.get(2, 2));
        assert_eq!(tau1_shift(&s, 0, 0), tau_direct(&s, 1));
    }

    #[test]
    fn bordered_formula_matches_direct() {
        let (sym, s) = setup(3, Param::A);
        for n in 0..3 {
            assert_eq!(tau_a_det(&sym, 0, &s.g, n), tau_direct(&s, n + 1));
        }
    }
}
