use std::sync::Arc;

use num::{BigRational, One, Zero};

use super::roots::RootData;
use crate::ncalg::{Alphabet, GenId, NCPoly, PolyMatrix, RatMatrix, Relation, Sector};

/// How the upper and lower Gauss coordinates exchange.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaChiRule {
    /// `theta_s chi_t = chi_t theta_s`.
    Commute,
    /// No exchange rule; words keep their input order.
    NoRelation,
}

/// Which symbol families a combined alphabet carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymbolConfig {
    pub n: usize,
    /// Independent copies of the time variables (primed copies for bilinear identities).
    pub time_copies: usize,
    pub gauss: bool,
    pub theta_chi: ThetaChiRule,
}

impl SymbolConfig {
    pub fn new(n: usize) -> Self {
        SymbolConfig { n, time_copies: 1, gauss: true, theta_chi: ThetaChiRule::Commute }
    }
}

/// Combined alphabet of quantum times `xi`, `xibar` and Gauss coordinates.
#[derive(Clone, Debug)]
pub struct QSymbols {
    pub root: RootData,
    pub alphabet: Arc<Alphabet>,
    /// `xi[copy][s - 1]`; one time per simple root.
    pub xi: Vec<Vec<GenId>>,
    pub xibar: Vec<Vec<GenId>>,
    pub theta: Vec<GenId>,
    /// Diagonal entries `Lambda_0 .. Lambda_{N-1}`.
    pub lambda: Vec<GenId>,
    pub chi: Vec<GenId>,
    /// Simple root attached to each Gauss coordinate `theta_s`, `chi_s`.
    pub gauss_map: Vec<usize>,
}

fn prime(copy: usize) -> String {
    "'".repeat(copy)
}

impl QSymbols {
    pub fn new(cfg: SymbolConfig) -> Self {
        let root = RootData::new(cfg.n);
        let r = root.rank();
        let gauss_map = if cfg.gauss { root.economic_index_map() } else { Vec::new() };
        let mut b = Alphabet::builder();
        for c in 0..cfg.time_copies {
            for s in 1..=r {
                b = b.generator(format!("xi{s}{}", prime(c)), Sector::Xi, false);
                b = b.generator(format!("xib{s}{}", prime(c)), Sector::XiBar, false);
            }
            for s in 1..=r {
                for t in s + 1..=r {
                    let c_st = -root.cartan(s, t);
                    b = b.relation(format!("xi{s}{}", prime(c)), format!("xi{t}{}", prime(c)), Relation::Swap(c_st));
                    b = b.relation(format!("xib{s}{}", prime(c)), format!("xib{t}{}", prime(c)), Relation::Swap(c_st));
                }
            }
        }
        if cfg.gauss {
            let m = gauss_map.len();
            for s in 1..=m {
                b = b.generator(format!("th{s}"), Sector::Theta, false);
                b = b.generator(format!("ch{s}"), Sector::Chi, false);
            }
            for j in 0..cfg.n {
                b = b.generator(format!("L{j}"), Sector::Lambda, true);
            }
            for s in 1..=m {
                for t in s + 1..=m {
                    let c_st = -root.cartan(gauss_map[s - 1], gauss_map[t - 1]);
                    b = b.relation(format!("th{s}"), format!("th{t}"), Relation::Swap(c_st));
                    b = b.relation(format!("ch{s}"), format!("ch{t}"), Relation::Swap(c_st));
                }
                for j in 0..cfg.n {
                    let c = root.two_h(gauss_map[s - 1], j);
                    b = b.relation(format!("L{j}"), format!("th{s}"), Relation::Swap(c));
                    b = b.relation(format!("L{j}"), format!("ch{s}"), Relation::Swap(c));
                }
                if cfg.theta_chi == ThetaChiRule::NoRelation {
                    for t in 1..=m {
                        b = b.relation(format!("th{s}"), format!("ch{t}"), Relation::NoRelation);
                    }
                }
            }
        }
        let alphabet = b.build().expect("symbol alphabet is well formed");
        let ids = |pre: &str, range: std::ops::RangeInclusive<usize>, suffix: &str| -> Vec<GenId> {
            range.map(|s| alphabet.expect_id(&format!("{pre}{s}{suffix}"))).collect()
        };
        let xi = (0..cfg.time_copies).map(|c| ids("xi", 1..=r, &prime(c))).collect();
        let xibar = (0..cfg.time_copies).map(|c| ids("xib", 1..=r, &prime(c))).collect();
        let (theta, chi, lambda) = if cfg.gauss {
            let m = gauss_map.len();
            (
                ids("th", 1..=m, ""),
                ids("ch", 1..=m, ""),
                (0..cfg.n).map(|j| alphabet.expect_id(&format!("L{j}"))).collect(),
            )
        } else {
            (Vec::new(), Vec::new(), Vec::new())
        };
        QSymbols { root, alphabet, xi, xibar, theta, lambda, chi, gauss_map }
    }

    pub fn n(&self) -> usize {
        self.root.dim()
    }

    pub fn var(&self, g: GenId) -> NCPoly {
        NCPoly::gen(&self.alphabet, g)
    }
}

/// Symbolic group element `g_U g_D g_L` over the Gauss coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussElement {
    pub matrix: PolyMatrix,
    pub index_map: Vec<usize>,
}

/// A numeric classical element or a symbolic quantum one.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupElement {
    Numeric(RatMatrix),
    Gauss(GaussElement),
}

impl GroupElement {
    pub fn dim(&self) -> usize {
        match self {
            GroupElement::Numeric(m) => m.rows(),
            GroupElement::Gauss(g) => g.matrix.rows(),
        }
    }

    /// Entries as polynomials; numeric entries are embedded as constants in `alpha`.
    pub fn matrix(&self, alpha: &Arc<Alphabet>) -> PolyMatrix {
        match self {
            GroupElement::Numeric(m) => m.to_poly(alpha),
            GroupElement::Gauss(g) => {
                if Alphabet::same(g.matrix.alphabet(), alpha) {
                    g.matrix.clone()
                } else {
                    g.matrix.map(|p| p.rebase(alpha))
                }
            }
        }
    }
}

fn unit_plus(alpha: &Arc<Alphabet>, n: usize, row: usize, col: usize, coeff: NCPoly) -> PolyMatrix {
    let mut m = PolyMatrix::identity(alpha, n);
    m.set(row, col, coeff);
    m
}

/// Builds `prod^< (1 + theta_s T_{i(s)}) diag(Lambda) prod^> (1 + chi_s T_{-i(s)})`.
pub fn gauss_element(sym: &QSymbols) -> GroupElement {
    let n = sym.n();
    let a = &sym.alphabet;
    let mut upper = PolyMatrix::identity(a, n);
    for (s, &i) in sym.gauss_map.iter().enumerate() {
        upper = upper.mul(&unit_plus(a, n, i - 1, i, sym.var(sym.theta[s])));
    }
    let mut diag = PolyMatrix::zero(a, n, n);
    for j in 0..n {
        diag.set(j, j, sym.var(sym.lambda[j]));
    }
    let mut lower = PolyMatrix::identity(a, n);
    for (s, &i) in sym.gauss_map.iter().enumerate().rev() {
        lower = lower.mul(&unit_plus(a, n, i, i - 1, sym.var(sym.chi[s])));
    }
    GroupElement::Gauss(GaussElement { matrix: upper.mul(&diag).mul(&lower), index_map: sym.gauss_map.clone() })
}

/// Factors `g = U D L` with `U` unit upper and `L` unit lower triangular.
///
/// Requires every trailing principal minor to be nonzero.
pub fn gauss_decompose(g: &RatMatrix) -> Option<(RatMatrix, Vec<BigRational>, RatMatrix)> {
    let n = g.rows();
    let mut a = g.clone();
    let mut u = RatMatrix::identity(n);
    let mut l = RatMatrix::identity(n);
    let mut d = vec![BigRational::zero(); n];
    for k in (0..n).rev() {
        let piv = a.get(k, k).clone();
        if piv.is_zero() {
            return None;
        }
        for i in 0..k {
            u.set(i, k, a.get(i, k) / &piv);
            l.set(k, i, a.get(k, i) / &piv);
        }
        for i in 0..k {
            for j in 0..k {
                let v = a.get(i, j) - a.get(i, k) * a.get(k, j) / &piv;
                a.set(i, j, v);
            }
        }
        d[k] = piv;
    }
    debug_assert!(u.get(0, 0).is_one());
    Some((u, d, l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::rat;

    #[test]
    fn sl2_gauss_element_entries() {
        let sym = QSymbols::new(SymbolConfig::new(2));
        let GroupElement::Gauss(g) = gauss_element(&sym) else { unreachable!() };
        let a = &sym.alphabet;
        let (th, ch) = (sym.var(sym.theta[0]), sym.var(sym.chi[0]));
        let (l0, l1) = (sym.var(sym.lambda[0]), sym.var(sym.lambda[1]));
        assert_eq!(g.matrix.get(0, 0), &l0 + &(&(&th * &l1) * &ch));
        assert_eq!(g.matrix.get(0, 1), &th * &l1);
        assert_eq!(g.matrix.get(1, 0), &l1 * &ch);
        assert_eq!(g.matrix.get(1, 1), l1);
        assert!(Alphabet::same(g.matrix.alphabet(), a));
    }

    #[test]
    fn trivial_coordinates_give_identity() {
        let sym = QSymbols::new(SymbolConfig::new(3));
        let GroupElement::Gauss(g) = gauss_element(&sym) else { unreachable!() };
        let mut map: Vec<(GenId, NCPoly)> = Vec::new();
        for &t in sym.theta.iter().chain(&sym.chi) {
            map.push((t, NCPoly::zero(&sym.alphabet)));
        }
        for &l in &sym.lambda {
            map.push((l, NCPoly::one(&sym.alphabet)));
        }
        let id = g.matrix.map(|p| p.substitute(&map));
        assert_eq!(id, PolyMatrix::identity(&sym.alphabet, 3));
    }

    #[test]
    fn lambda_theta_exchange_follows_weights() {
        let sym = QSymbols::new(SymbolConfig::new(3));
        let a = &sym.alphabet;
        // theta_1 sits on root 1: L0 th1 = q th1 L0, L1 th1 = q^-1 th1 L1
        assert_eq!(a.rel(sym.lambda[0], sym.theta[0]), Some(1));
        assert_eq!(a.rel(sym.lambda[1], sym.theta[0]), Some(-1));
        assert_eq!(a.rel(sym.lambda[2], sym.theta[0]), Some(0));
        assert_eq!(a.rel(sym.xi[0][0], sym.xi[0][1]), Some(1));
    }

    #[test]
    fn upper_diag_lower_round_trip() {
        let g = RatMatrix::from_rows(vec![
            vec![rat(2, 1), rat(1, 1), rat(1, 2)],
            vec![rat(1, 3), rat(3, 1), rat(1, 1)],
            vec![rat(-1, 1), rat(1, 1), rat(1, 1)],
        ]);
        let (u, d, l) = gauss_decompose(&g).unwrap();
        let mut dm = RatMatrix::zero(3, 3);
        for (k, x) in d.into_iter().enumerate() {
            dm.set(k, k, x);
        }
        assert_eq!(u.mul(&dm).mul(&l), g);
        for i in 0..3 {
            for j in 0..i {
                assert!(u.get(i, j).is_zero() && l.get(j, i).is_zero());
            }
        }
    }
}
