use super::detq::slot_evolutions;
use super::diff::d_op;
use super::intertwiner::{phi, wedge_action, Handed, Placement, SlotOrder};
use super::setup::QSetup;
use super::QTauError;
use crate::ncalg::{NCPoly, PolyMatrix, ScalarQ};
use crate::slnq::q_antisymmetrize;
use crate::tau::{sandwich, Charge, WedgeBases};

/// `U`, `g`, `Ubar` induced on every q-wedge level `0..=N`.
#[derive(Clone, Debug)]
pub struct WedgeLevels {
    pub bases: WedgeBases,
    pub u: Vec<PolyMatrix>,
    pub g: Vec<PolyMatrix>,
    pub ubar: Vec<PolyMatrix>,
}

pub fn wedge_levels(setup: &QSetup) -> Result<WedgeLevels, QTauError> {
    let n = setup.n_states();
    let a = setup.alpha();
    let mut u = vec![PolyMatrix::identity(a, 1)];
    let mut g = vec![PolyMatrix::identity(a, 1)];
    let mut ubar = vec![PolyMatrix::identity(a, 1)];
    for level in 1..=n {
        let w = q_antisymmetrize(n, level);
        let ev = slot_evolutions(setup, level);
        u.push(w.induced(&ev.upper)?);
        g.push(wedge_action(&setup.g, level)?);
        ubar.push(w.induced(&ev.lower)?);
    }
    Ok(WedgeLevels { bases: WedgeBases::new(n), u, g, ubar })
}

impl WedgeLevels {
    fn row0(&self, level: usize) -> Vec<NCPoly> {
        let m = &self.u[level];
        (0..m.cols()).map(|j| m.get(0, j)).collect()
    }

    fn col0(&self, level: usize) -> Vec<NCPoly> {
        let m = &self.ubar[level];
        (0..m.rows()).map(|i| m.get(i, 0)).collect()
    }

    /// Vacuum coefficient `<0_n| U g Ubar |0_n>` in the q-wedge basis.
    pub fn tau(&self, level: usize) -> NCPoly {
        sandwich(&self.row0(level), &self.g[level], &self.col0(level))
    }
}

/// Quantum Baker-Akhiezer functions of one level and one intertwiner handedness, indexed by mode `i - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct QBakerSet {
    pub level: usize,
    pub handed: Handed,
    pub plus: Vec<Option<NCPoly>>,
    pub minus: Vec<Option<NCPoly>>,
    pub plus_bar: Vec<Option<NCPoly>>,
    pub minus_bar: Vec<Option<NCPoly>>,
}

/// `<0_{n+-1}| U Phi g Ubar |0_n>` and `<0_{n+-1}| U g Phi Ubar |0_n>`.
pub fn q_baker_functions(setup: &QSetup, w: &WedgeLevels, level: usize, handed: Handed) -> QBakerSet {
    let n_states = setup.n_states();
    let a = setup.alpha();
    let ket = w.col0(level);
    let side = |charge: Charge| {
        let target = match charge {
            Charge::Plus if level < n_states => level + 1,
            Charge::Minus if level > 0 => level - 1,
            _ => return (vec![None; n_states], vec![None; n_states]),
        };
        let bra = w.row0(target);
        let mut left = Vec::with_capacity(n_states);
        let mut right = Vec::with_capacity(n_states);
        for i in 1..=n_states {
            let op = phi(a, &w.bases, i, charge, handed, level);
            left.push(Some(sandwich(&bra, &op.mul(&w.g[level]), &ket)));
            right.push(Some(sandwich(&bra, &w.g[target].mul(&op), &ket)));
        }
        (left, right)
    };
    let (plus, plus_bar) = side(Charge::Plus);
    let (minus, minus_bar) = side(Charge::Minus);
    QBakerSet { level, handed, plus, minus, plus_bar, minus_bar }
}

/// One displayed relation `lhs = sum_k c_k piece_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct QLine {
    pub label: String,
    pub lhs: NCPoly,
    pub pieces: Vec<NCPoly>,
    pub coefficients: Vec<ScalarQ>,
}

impl QLine {
    pub fn residual(&self) -> NCPoly {
        let mut r = self.lhs.clone();
        for (p, c) in self.pieces.iter().zip(&self.coefficients) {
            r.add_scaled(&-c.clone(), p);
        }
        r
    }

    /// Coefficients `+-q^e`, `|e| <= 4`, that make the relation hold, if any.
    pub fn fit_monomials(&self) -> Option<Vec<ScalarQ>> {
        let exps = [0, 1, -1, 2, -2, 3, -3, 4, -4];
        let cands: Vec<ScalarQ> = exps.iter().flat_map(|&e| [ScalarQ::q_pow(e), -ScalarQ::q_pow(e)]).collect();
        let mut choice = vec![0usize; self.pieces.len()];
        loop {
            let coeffs: Vec<ScalarQ> = choice.iter().map(|&c| cands[c].clone()).collect();
            let trial = QLine { coefficients: coeffs.clone(), ..self.clone() };
            if trial.residual().is_zero() {
                return Some(coeffs);
            }
            let mut pos = 0;
            loop {
                if pos == choice.len() {
                    return None;
                }
                choice[pos] += 1;
                if choice[pos] < cands.len() {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
        }
    }
}

fn xi_poly(setup: &QSetup, k: usize) -> NCPoly {
    setup.xi(k).map_or_else(|| NCPoly::zero(setup.alpha()), |g| NCPoly::gen(setup.alpha(), g))
}

/// `xi_from ... xi_to`.
fn xi_range(setup: &QSetup, from: usize, to: usize) -> NCPoly {
    (from..=to).fold(NCPoly::one(setup.alpha()), |acc, k| &acc * &xi_poly(setup, k))
}

/// `(xi_from ... xi_to)^{-1} f`.
fn divide_range(setup: &QSetup, f: &NCPoly, from: usize, to: usize) -> Result<NCPoly, QTauError> {
    let mut acc = f.clone();
    for k in from..=to {
        if let Some(g) = setup.xi(k) {
            acc = acc.side_divide(g, crate::ncalg::Side::Left)?;
        }
    }
    Ok(acc)
}

/// `xi_k D_k f`.
fn euler(setup: &QSetup, f: &NCPoly, k: usize) -> Result<NCPoly, QTauError> {
    Ok(&xi_poly(setup, k) * &d_op(setup, k, f)?)
}

/// The displayed quantum relations at level `n`, built from `ba` and `tau_n`.
///
/// The index of the first right-hand term for `k > n` is read as `k - 1` and the second as `k`.
pub fn q_baker_lines(setup: &QSetup, ba: &QBakerSet, tau: &NCPoly, n: usize) -> Result<Vec<QLine>, QTauError> {
    let big_n = setup.n_states();
    let q = ScalarQ::q_pow;
    let mut out = Vec::new();
    if (1..big_n).contains(&n) {
        let core_euler = euler(setup, tau, n)?;
        for i in n + 2..=big_n {
            let shift = |f: &NCPoly| -> NCPoly {
                let twisted = (n + 1..=i - 2).fold(f.clone(), |acc, j| setup.twist(&acc, j, 1));
                &xi_range(setup, n + 1, i - 1) * &twisted
            };
            out.push(QLine {
                label: format!("Psi(+,{i})_{n} = q^{} s_{n}^-1 s_{} M+ (tau - xi_{n} D_{n} tau)", n + 1, i - 1),
                lhs: ba.plus[i - 1].clone().expect("level exists"),
                pieces: vec![shift(tau), shift(&core_euler)],
                coefficients: vec![q(n as i32 + 1), -q(n as i32 + 1)],
            });
        }
        out.push(QLine {
            label: format!("Psi(+,{})_{n} = q^{} (tau - xi_{n} D_{n} tau)", n + 1, n + 1),
            lhs: ba.plus[n].clone().expect("level exists"),
            pieces: vec![tau.clone(), core_euler],
            coefficients: vec![q(n as i32 + 1), -q(n as i32 + 1)],
        });
        out.push(QLine {
            label: format!("Psi(+,{n})_{n} = -q^{n} D_{n} tau"),
            lhs: ba.plus[n - 1].clone().expect("level exists"),
            pieces: vec![d_op(setup, n, tau)?],
            coefficients: vec![-q(n as i32)],
        });
    }
    if n >= 1 {
        let reduce = |p: &NCPoly| -> Result<NCPoly, QTauError> { Ok(p - &euler(setup, p, n - 1)?) };
        let qn2 = q(n as i32 - 2);
        for k in n + 1..=big_n {
            let psi = ba.minus[k - 1].as_ref().expect("level exists");
            let first = divide_range(setup, &(&xi_range(setup, 1, n - 1) * &d_op(setup, k - 1, tau)?), 1, k - 2)?;
            let second = divide_range(setup, &(&xi_range(setup, 1, n - 1) * &euler(setup, tau, k)?), 1, k - 1)?;
            out.push(QLine {
                label: format!("Psi(-,{k})_{n} - xi_{0} D_{0} Psi = q^{1} s_{2}^-1 s_{0} D_{3} tau + q^{1} s_{3}^-1 s_{0} xi_{k} D_{k} tau", n - 1, n as i64 - 2, k as i64 - 2, k - 1),
                lhs: reduce(psi)?,
                pieces: vec![first, second],
                coefficients: vec![qn2.clone(), qn2.clone()],
            });
        }
        let psi = ba.minus[n - 1].as_ref().expect("level exists");
        out.push(QLine {
            label: format!("Psi(-,{n})_{n} - xi_{0} D_{0} Psi = q^{1} tau + xi_{n} D_{n} tau", n - 1, n as i64 - 2),
            lhs: reduce(psi)?,
            pieces: vec![tau.clone(), euler(setup, tau, n)?],
            coefficients: vec![qn2.clone(), ScalarQ::one()],
        });
        if n >= 2 {
            out.push(QLine {
                label: format!("Psi(-,{})_{n} = q^{} xi_{} tau", n - 1, n as i64 - 2, n - 1),
                lhs: ba.minus[n - 2].clone().expect("level exists"),
                pieces: vec![&xi_poly(setup, n - 1) * tau],
                coefficients: vec![qn2],
            });
        }
        for k in 1..n.saturating_sub(1) {
            out.push(QLine {
                label: format!("Psi(-,{k})_{n} = 0"),
                lhs: ba.minus[k - 1].clone().expect("level exists"),
                pieces: Vec::new(),
                coefficients: Vec::new(),
            });
        }
    }
    Ok(out)
}

/// Both sides of `sum_i Psi^{+,i}_k(xi) Psi^{-,i}_l(xi') = sum_i Psibar^{+,i}_k(xi) Psibar^{-,i}_l(xi')`.
///
/// `unbarred` and `barred` give the intertwiner placement on each side; `order`
/// decides whether the creation factor is multiplied first.
#[allow(clippy::too_many_arguments)]
pub fn q_bilinear_sides(
    setup: &QSetup,
    primed: &QSetup,
    w: &WedgeLevels,
    wp: &WedgeLevels,
    k: usize,
    l: usize,
    unbarred: Placement,
    barred: Placement,
    order: SlotOrder,
) -> (NCPoly, NCPoly) {
    let a = setup.alpha();
    let up_plus = q_baker_functions(setup, w, k, unbarred.creation);
    let up_minus = q_baker_functions(primed, wp, l, unbarred.annihilation);
    let bar_plus = q_baker_functions(setup, w, k, barred.creation);
    let bar_minus = q_baker_functions(primed, wp, l, barred.annihilation);
    let prod = |x: &NCPoly, y: &NCPoly| match order {
        SlotOrder::CreationFirst => x * y,
        SlotOrder::AnnihilationFirst => y * x,
    };
    let mut lhs = NCPoly::zero(a);
    let mut rhs = NCPoly::zero(a);
    for i in 0..setup.n_states() {
        if let (Some(x), Some(y)) = (&up_plus.plus[i], &up_minus.minus[i]) {
            lhs.add_assign_ref(&prod(x, y));
        }
        if let (Some(x), Some(y)) = (&bar_plus.plus_bar[i], &bar_minus.minus_bar[i]) {
            rhs.add_assign_ref(&prod(x, y));
        }
    }
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slnq::{QSymbols, SymbolConfig};

    fn setup(n: usize) -> QSetup {
        QSetup::new(&QSymbols::new(SymbolConfig::new(n)), 0)
    }

    #[test]
    fn wedge_tau_times_gram_is_the_direct_pairing() {
        let s = setup(3);
        let w = wedge_levels(&s).unwrap();
        assert_eq!(w.tau(1), s.tau1());
        for n in 1..=3u32 {
            let direct = super::super::detq::qtau_direct(&s, n as usize).unwrap().value;
            let gram = ScalarQ::q_factorial(n);
            assert_eq!(direct, w.tau(n as usize).scale(&gram), "n={n}");
        }
    }
}
