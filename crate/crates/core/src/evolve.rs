//! Time variables, evolution operators and the simple-root factorization of
//! the conventional evolution.

use std::sync::Arc;

use num::{BigRational, One, Zero};
use thiserror::Error;

use crate::ncalg::{Alphabet, GenId, NCPoly, PolyMatrix, RatMatrix, Sector};
use crate::slnq::{generator_matrices, EvolutionSide, GenKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvolveError {
    #[error("matrix is not unipotent upper triangular")]
    NotUnipotent,
    #[error("factorization needs a nonzero entry at ({0}, {1})")]
    Degenerate(usize, usize),
}

/// Which families of classical symbols to create.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassicalConfig {
    pub n: usize,
    /// Independent copies of every time family (primed names).
    pub copies: usize,
    /// Number of Miwa points per side.
    pub miwa_points: usize,
    /// Adds `g{i}{j}` symbols for a fully symbolic group element.
    pub symbolic_g: bool,
}

impl ClassicalConfig {
    pub fn new(n: usize) -> Self {
        ClassicalConfig { n, copies: 1, miwa_points: 2, symbolic_g: false }
    }
}

/// Commuting symbols for the classical engine.
///
/// Every family is indexed as `family[copy][index - 1]`.
#[derive(Clone, Debug)]
pub struct ClassicalSymbols {
    pub n: usize,
    pub alphabet: Arc<Alphabet>,
    pub t: Vec<Vec<GenId>>,
    pub tbar: Vec<Vec<GenId>>,
    pub xi: Vec<Vec<GenId>>,
    pub xibar: Vec<Vec<GenId>>,
    pub lambda: Vec<Vec<GenId>>,
    pub lambdabar: Vec<Vec<GenId>>,
    /// `g[i][j]` when symbolic.
    pub g: Option<Vec<Vec<GenId>>>,
}

fn primes(c: usize) -> String {
    "'".repeat(c)
}

impl ClassicalSymbols {
    pub fn new(cfg: ClassicalConfig) -> Self {
        let r = cfg.n - 1;
        let mut b = Alphabet::builder();
        let families: [(&str, Sector, usize); 6] = [
            ("t", Sector::Xi, r),
            ("xi", Sector::Xi, r),
            ("la", Sector::Xi, cfg.miwa_points),
            ("tb", Sector::XiBar, r),
            ("xib", Sector::XiBar, r),
            ("lab", Sector::XiBar, cfg.miwa_points),
        ];
        for c in 0..cfg.copies {
            for (pre, sector, len) in families {
                for k in 1..=len {
                    b = b.generator(format!("{pre}{k}{}", primes(c)), sector, false);
                }
            }
        }
        if cfg.symbolic_g {
            for i in 0..cfg.n {
                for j in 0..cfg.n {
                    b = b.generator(format!("g{i}{j}"), Sector::Abstract, false);
                }
            }
        }
        let alphabet = b.build().expect("classical alphabet is well formed");
        let fam = |pre: &str, len: usize| -> Vec<Vec<GenId>> {
            (0..cfg.copies)
                .map(|c| (1..=len).map(|k| alphabet.expect_id(&format!("{pre}{k}{}", primes(c)))).collect())
                .collect()
        };
        let g = cfg.symbolic_g.then(|| {
            (0..cfg.n).map(|i| (0..cfg.n).map(|j| alphabet.expect_id(&format!("g{i}{j}"))).collect()).collect()
        });
        ClassicalSymbols {
            n: cfg.n,
            t: fam("t", r),
            tbar: fam("tb", r),
            xi: fam("xi", r),
            xibar: fam("xib", r),
            lambda: fam("la", cfg.miwa_points),
            lambdabar: fam("lab", cfg.miwa_points),
            g,
            alphabet,
        }
    }

    pub fn var(&self, id: GenId) -> NCPoly {
        NCPoly::gen(&self.alphabet, id)
    }

    /// The symbolic group element, if requested.
    pub fn symbolic_g(&self) -> Option<PolyMatrix> {
        let g = self.g.as_ref()?;
        Some(PolyMatrix::from_fn(&self.alphabet, self.n, self.n, |i, j| self.var(g[i][j])))
    }
}

/// `s_k = xi_1 xi_2 ... xi_k` for `k = 0..=len`.
pub fn s_products(alpha: &Arc<Alphabet>, xi: &[GenId]) -> Vec<NCPoly> {
    let mut out = vec![NCPoly::one(alpha)];
    for &x in xi {
        let next = out.last().unwrap() * &NCPoly::gen(alpha, x);
        out.push(next);
    }
    out
}

/// `sbar_k = xibar_k ... xibar_1` for `k = 0..=len`.
pub fn sbar_products(alpha: &Arc<Alphabet>, xibar: &[GenId]) -> Vec<NCPoly> {
    let mut out = vec![NCPoly::one(alpha)];
    for &x in xibar {
        let next = &NCPoly::gen(alpha, x) * out.last().unwrap();
        out.push(next);
    }
    out
}

/// Schur polynomials `P_0 .. P_kmax` of `exp(sum_k t_k z^k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchurTable {
    pub p: Vec<NCPoly>,
}

impl SchurTable {
    /// `P_k`, zero for negative `k` or beyond the table.
    pub fn get(&self, k: i64) -> NCPoly {
        if k < 0 || k as usize >= self.p.len() {
            NCPoly::zero(self.p[0].alphabet())
        } else {
            self.p[k as usize].clone()
        }
    }
}

/// Uses `k P_k = sum_{j=1..k} j t_j P_{k-j}`; times beyond `t.len()` are zero.
pub fn schur_polynomials(alpha: &Arc<Alphabet>, t: &[NCPoly], kmax: usize) -> SchurTable {
    let mut p = vec![NCPoly::one(alpha)];
    for k in 1..=kmax {
        let mut acc = NCPoly::zero(alpha);
        for j in 1..=k.min(t.len()) {
            let term = &t[j - 1] * &p[k - j];
            acc.add_assign_ref(&term.scale_rational(&BigRational::from_integer((j as i64).into())));
        }
        p.push(acc.scale_rational(&BigRational::new(1.into(), (k as i64).into())));
    }
    SchurTable { p }
}

fn gen_matrix(alpha: &Arc<Alphabet>, n: usize, kind: GenKind) -> PolyMatrix {
    PolyMatrix::from_scalars(alpha, &generator_matrices(n, kind).expect("index in range").matrix)
}

/// `exp(x)` for a nilpotent matrix with commuting entries.
fn nilpotent_exp(x: &PolyMatrix) -> PolyMatrix {
    let n = x.rows();
    let alpha = x.alphabet();
    let mut acc = PolyMatrix::identity(alpha, n);
    let mut power = PolyMatrix::identity(alpha, n);
    let mut fact = BigRational::one();
    for k in 1..n {
        power = power.mul(x);
        if power.is_zero() {
            break;
        }
        fact *= BigRational::from_integer((k as i64).into());
        acc = acc.add(&power.map(|p| p.scale_rational(&fact.recip())));
    }
    acc
}

/// `exp(sum_k t_k T_+^{(k)})` (upper) or the same with `T_-^{(k)}` (lower).
pub fn evolution_b(alpha: &Arc<Alphabet>, t: &[NCPoly], n: usize, side: EvolutionSide) -> PolyMatrix {
    let mut x = PolyMatrix::zero(alpha, n, n);
    for (k, tk) in t.iter().enumerate().take(n - 1) {
        let kind = match side {
            EvolutionSide::Upper => GenKind::RaiseHeight(k + 1),
            EvolutionSide::Lower => GenKind::LowerHeight(k + 1),
        };
        x = x.add(&gen_matrix(alpha, n, kind).left_mul_entries(tk));
    }
    nilpotent_exp(&x)
}

/// `prod^<_i (1 + xi_i T_i)` (upper) or `prod^>_i (1 + xibar_i T_{-i})` (lower).
///
/// Works over quantum alphabets as well: every factor is a first-order exponential.
pub fn evolution_a(alpha: &Arc<Alphabet>, xi: &[GenId], n: usize, side: EvolutionSide) -> PolyMatrix {
    let id = PolyMatrix::identity(alpha, n);
    let factor = |i: usize| {
        let kind = match side {
            EvolutionSide::Upper => GenKind::Raise(i),
            EvolutionSide::Lower => GenKind::Lower(i),
        };
        id.add(&gen_matrix(alpha, n, kind).left_mul_entries(&NCPoly::gen(alpha, xi[i - 1])))
    };
    let order: Vec<usize> = match side {
        EvolutionSide::Upper => (1..n).collect(),
        EvolutionSide::Lower => (1..n).rev().collect(),
    };
    order.into_iter().fold(id.clone(), |acc, i| acc.mul(&factor(i)))
}

/// `prod_a prod^<_i exp(lambda_a T_i)`; the lower side is the transpose construction.
pub fn evolution_c(alpha: &Arc<Alphabet>, lambdas: &[NCPoly], n: usize, side: EvolutionSide) -> PolyMatrix {
    let id = PolyMatrix::identity(alpha, n);
    let mut acc = id.clone();
    for la in lambdas {
        let order: Vec<usize> = match side {
            EvolutionSide::Upper => (1..n).collect(),
            EvolutionSide::Lower => (1..n).rev().collect(),
        };
        for i in order {
            let kind = match side {
                EvolutionSide::Upper => GenKind::Raise(i),
                EvolutionSide::Lower => GenKind::Lower(i),
            };
            acc = acc.mul(&id.add(&gen_matrix(alpha, n, kind).left_mul_entries(la)));
        }
    }
    acc
}

/// Miwa times `t_k = (1/k) sum_a lambda_a^k`, `k = 1..=kmax`.
pub fn miwa_times(alpha: &Arc<Alphabet>, lambdas: &[NCPoly], kmax: usize) -> Vec<NCPoly> {
    (1..=kmax)
        .map(|k| {
            let mut acc = NCPoly::zero(alpha);
            for la in lambdas {
                acc.add_assign_ref(&la.pow(k as u32));
            }
            acc.scale_rational(&BigRational::new(1.into(), (k as i64).into()))
        })
        .collect()
}

/// One simple-root factor `exp(xi_{ij} T_{j-i})` of the economic ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootFactor {
    /// Row label `i` of `xi_{ij}`, 1-based.
    pub i: usize,
    /// Column label `j`, `i < j <= N`.
    pub j: usize,
    pub value: BigRational,
}

impl RootFactor {
    pub fn root(&self) -> usize {
        self.j - self.i
    }
}

fn is_unipotent(u: &RatMatrix) -> bool {
    let n = u.rows();
    (0..n).all(|a| (0..n).all(|b| if a == b { u.get(a, b).is_one() } else { a < b || u.get(a, b).is_zero() }))
}

/// Factors a unipotent upper matrix as `prod_{i} prod_{j > i} exp(xi_{ij} T_{j-i})`.
///
/// The first block `exp(xi_{12} T_1) ... exp(xi_{1N} T_{N-1})` alone reaches the
/// last column, so it is solved from that column; the remaining blocks
/// factor the leading `(N-1) x (N-1)` block of what is left.
pub fn factorize_simple_roots(u: &RatMatrix) -> Result<Vec<RootFactor>, EvolveError> {
    if u.rows() != u.cols() || !is_unipotent(u) {
        return Err(EvolveError::NotUnipotent);
    }
    let mut out = Vec::new();
    let mut cur = u.clone();
    let mut level = 1;
    while cur.rows() > 1 {
        let n = cur.rows();
        let last = n - 1;
        // column `last` of the block is (a_1 ... a_r, a_2 ... a_r, ..., a_r, 1)
        let mut a = vec![BigRational::zero(); n];
        for k in (1..n).rev() {
            let below = cur.get(k, last).clone();
            if below.is_zero() {
                if cur.get(k - 1, last).is_zero() {
                    // the whole tail of the column vanishes: a_k = 0 is consistent
                    a[k] = BigRational::zero();
                    continue;
                }
                return Err(EvolveError::Degenerate(k, last));
            }
            a[k] = cur.get(k - 1, last) / &below;
        }
        let block = first_block(&a[1..]);
        for (s, ak) in a[1..].iter().enumerate() {
            out.push(RootFactor { i: level, j: level + s + 1, value: ak.clone() });
        }
        let rest = unipotent_inverse(&block).mul(&cur);
        for k in 0..last {
            if !rest.get(k, last).is_zero() {
                return Err(EvolveError::Degenerate(k, last));
            }
        }
        let idx: Vec<usize> = (0..last).collect();
        cur = rest.submatrix(&idx, &idx);
        level += 1;
    }
    Ok(out)
}

fn unit(n: usize, i: usize, value: &BigRational) -> RatMatrix {
    let mut m = RatMatrix::identity(n);
    m.set(i - 1, i, value.clone());
    m
}

/// `prod_{k=1..r} (1 + a_k T_k)` on `r + 1` states.
fn first_block(a: &[BigRational]) -> RatMatrix {
    let n = a.len() + 1;
    a.iter().enumerate().fold(RatMatrix::identity(n), |acc, (k, ak)| acc.mul(&unit(n, k + 1, ak)))
}

fn unipotent_inverse(m: &RatMatrix) -> RatMatrix {
    let n = m.rows();
    // back substitution on m x = e_c, column by column
    let mut inv = RatMatrix::identity(n);
    for c in 0..n {
        for r in (0..c).rev() {
            let mut acc = BigRational::zero();
            for k in r + 1..=c {
                acc += m.get(r, k) * inv.get(k, c);
            }
            inv.set(r, c, -acc);
        }
    }
    inv
}

/// Multiplies the factors back in their listed order.
pub fn rebuild_from_factors(n: usize, factors: &[RootFactor]) -> RatMatrix {
    factors.iter().fold(RatMatrix::identity(n), |acc, f| acc.mul(&unit(n, f.root(), &f.value)))
}

/// Leading `t_1` coefficients of the factorization, compared with `t_1 / (N + i - j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeadingCoefficientReport {
    pub n: usize,
    /// `(i, j, derived coefficient, printed coefficient)`.
    pub rows: Vec<(usize, usize, BigRational, BigRational)>,
    /// Whether the pure-`t_1` solution is exactly linear in `t_1`.
    pub linear: bool,
    pub agrees: bool,
}

/// Factorizes `exp(t_1 T_+^{(1)})` at two values of `t_1` and reads off the slope.
pub fn leading_coefficient_report(n: usize) -> Result<LeadingCoefficientReport, EvolveError> {
    let at = |t1: i64| -> Result<Vec<RootFactor>, EvolveError> {
        let mut u = RatMatrix::identity(n);
        // exp(t T^{(1)})_{ab} = t^{b-a} / (b-a)!
        for a in 0..n {
            let mut fact = BigRational::one();
            let mut pow = BigRational::one();
            for b in a + 1..n {
                fact *= BigRational::from_integer(((b - a) as i64).into());
                pow *= BigRational::from_integer(t1.into());
                u.set(a, b, &pow / &fact);
            }
        }
        factorize_simple_roots(&u)
    };
    let one = at(1)?;
    let three = at(3)?;
    let linear = one.iter().zip(&three).all(|(a, b)| b.value == &a.value * BigRational::from_integer(3.into()));
    let rows: Vec<_> = one
        .iter()
        .map(|f| {
            let printed = BigRational::new(1.into(), ((n + f.i - f.j) as i64).into());
            (f.i, f.j, f.value.clone(), printed)
        })
        .collect();
    let agrees = linear && rows.iter().all(|r| r.2 == r.3);
    Ok(LeadingCoefficientReport { n, rows, linear, agrees })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::rat;
    use crate::slnq::RootData;
    use proptest::prelude::*;

    fn sym(n: usize) -> ClassicalSymbols {
        ClassicalSymbols::new(ClassicalConfig::new(n))
    }

    fn vars(s: &ClassicalSymbols, ids: &[GenId]) -> Vec<NCPoly> {
        ids.iter().map(|&g| s.var(g)).collect()
    }

    #[test]
    fn schur_low_orders() {
        let s = sym(4);
        let a = &s.alphabet;
        let t = vars(&s, &s.t[0]);
        let p = schur_polynomials(a, &t, 3);
        assert_eq!(p.p[0], NCPoly::one(a));
        assert_eq!(p.p[1], t[0]);
        let half = rat(1, 2);
        assert_eq!(p.p[2], &t[1] + &t[0].pow(2).scale_rational(&half));
        let p3 = &(&t[2] + &(&t[0] * &t[1])) + &t[0].pow(3).scale_rational(&rat(1, 6));
        assert_eq!(p.p[3], p3);
        for k in 1..=3 {
            assert_eq!(p.p[k].derivative(s.t[0][0]).unwrap(), p.p[k - 1]);
        }
    }

    #[test]
    fn conventional_evolution_first_row_is_schur() {
        for n in 2..=5 {
            let s = sym(n);
            let t = vars(&s, &s.t[0]);
            let u = evolution_b(&s.alphabet, &t, n, EvolutionSide::Upper);
            let p = schur_polynomials(&s.alphabet, &t, n - 1);
            for k in 0..n {
                assert_eq!(u.get(0, k), p.p[k]);
            }
            let ub = evolution_b(&s.alphabet, &t, n, EvolutionSide::Lower);
            assert_eq!(ub, u.transpose());
        }
    }

    #[test]
    fn sl2_conventional_evolution() {
        let s = sym(2);
        let t1 = s.var(s.t[0][0]);
        let u = evolution_b(&s.alphabet, std::slice::from_ref(&t1), 2, EvolutionSide::Upper);
        assert_eq!(u.get(0, 1), t1);
        assert_eq!(u.get(0, 0), NCPoly::one(&s.alphabet));
        assert!(u.get(1, 0).is_zero());
    }

    #[test]
    fn simple_root_evolution_rows() {
        let s = sym(3);
        let a = &s.alphabet;
        let u = evolution_a(a, &s.xi[0], 3, EvolutionSide::Upper);
        let (x1, x2) = (s.var(s.xi[0][0]), s.var(s.xi[0][1]));
        assert_eq!(u.get(0, 1), x1);
        assert_eq!(u.get(0, 2), &x1 * &x2);
        assert_eq!(u.get(1, 2), x2);
        let sk = s_products(a, &s.xi[0]);
        for k in 0..3 {
            assert_eq!(u.get(0, k), sk[k]);
        }
        let ub = evolution_a(a, &s.xibar[0], 3, EvolutionSide::Lower);
        let sb = sbar_products(a, &s.xibar[0]);
        for k in 0..3 {
            assert_eq!(ub.get(k, 0), sb[k]);
        }
    }

    #[test]
    fn quantum_simple_root_evolution_rows() {
        use crate::slnq::{QSymbols, SymbolConfig};
        let q = QSymbols::new(SymbolConfig::new(4));
        let u = evolution_a(&q.alphabet, &q.xi[0], 4, EvolutionSide::Upper);
        let sk = s_products(&q.alphabet, &q.xi[0]);
        for k in 0..4 {
            assert_eq!(u.get(0, k), sk[k]);
        }
        let ub = evolution_a(&q.alphabet, &q.xibar[0], 4, EvolutionSide::Lower);
        let sb = sbar_products(&q.alphabet, &q.xibar[0]);
        for k in 0..4 {
            assert_eq!(ub.get(k, 0), sb[k]);
        }
    }

    #[test]
    fn miwa_single_point_sl3() {
        let s = sym(3);
        let a = &s.alphabet;
        let la = s.var(s.lambda[0][0]);
        let c = evolution_c(a, std::slice::from_ref(&la), 3, EvolutionSide::Upper);
        assert_eq!(c.get(0, 2), la.pow(2));
        let b = evolution_b(a, &miwa_times(a, &[la], 2), 3, EvolutionSide::Upper);
        assert_eq!(b, c);
        assert_eq!(evolution_c(a, &[], 3, EvolutionSide::Upper), PolyMatrix::identity(a, 3));
    }

    #[test]
    fn miwa_consistency_symbolic() {
        for n in 2..=5 {
            let s = sym(n);
            let a = &s.alphabet;
            for side in [EvolutionSide::Upper, EvolutionSide::Lower] {
                let ids = if side == EvolutionSide::Upper { &s.lambda[0] } else { &s.lambdabar[0] };
                let la = vars(&s, ids);
                let c = evolution_c(a, &la, n, side);
                let b = evolution_b(a, &miwa_times(a, &la, n - 1), n, side);
                assert_eq!(b, c, "N = {n}");
            }
        }
    }

    #[test]
    fn factorization_examples() {
        let mut u = RatMatrix::identity(2);
        u.set(0, 1, rat(5, 3));
        let f = factorize_simple_roots(&u).unwrap();
        assert_eq!(f, vec![RootFactor { i: 1, j: 2, value: rat(5, 3) }]);
        let f = factorize_simple_roots(&RatMatrix::identity(4)).unwrap();
        assert_eq!(f.len(), 6);
        assert!(f.iter().all(|x| x.value.is_zero()));
        let mut bad = RatMatrix::identity(3);
        bad.set(2, 0, rat(1, 1));
        assert_eq!(factorize_simple_roots(&bad), Err(EvolveError::NotUnipotent));
    }

    #[test]
    fn factor_order_is_economic() {
        let f = factorize_simple_roots(&RatMatrix::identity(5)).unwrap();
        let roots: Vec<usize> = f.iter().map(|x| x.root()).collect();
        assert_eq!(roots, RootData::new(5).economic_index_map());
    }

    #[test]
    fn leading_coefficients_match_printed_values() {
        for n in 2..=6 {
            let r = leading_coefficient_report(n).unwrap();
            assert!(r.linear);
            assert!(r.agrees, "{r:?}");
        }
    }

    fn small() -> impl Strategy<Value = BigRational> {
        (-4i64..=4, 1i64..=3).prop_map(|(a, b)| rat(a, b))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn factorize_round_trip(n in 2usize..=5, vals in prop::collection::vec(small(), 10)) {
            let mut u = RatMatrix::identity(n);
            let mut it = vals.into_iter().cycle();
            for a in 0..n {
                for b in a + 1..n {
                    u.set(a, b, it.next().unwrap());
                }
            }
            match factorize_simple_roots(&u) {
                Ok(f) => prop_assert_eq!(rebuild_from_factors(n, &f), u),
                Err(EvolveError::Degenerate(..)) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }
}
