use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{BigRational, One, Zero};

use super::alphabet::Alphabet;
use super::poly::NCPoly;
use super::scalar::ScalarQ;
use super::AlgError;

/// Which deformation parameter the q-exponential is built on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QBase {
    Q,
    QInv,
}

/// Matrix over [`NCPoly`] stored as sparse rows.
#[derive(Clone, PartialEq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    alpha: Arc<Alphabet>,
    data: Vec<BTreeMap<usize, NCPoly>>,
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix {}x{}", self.rows, self.cols)?;
        for (i, row) in self.data.iter().enumerate() {
            for (j, p) in row {
                writeln!(f, "  ({i},{j}) = {p}")?;
            }
        }
        Ok(())
    }
}

impl PolyMatrix {
    pub fn zero(alpha: &Arc<Alphabet>, rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, alpha: alpha.clone(), data: vec![BTreeMap::new(); rows] }
    }

    pub fn identity(alpha: &Arc<Alphabet>, n: usize) -> Self {
        let mut m = Self::zero(alpha, n, n);
        for i in 0..n {
            m.set(i, i, NCPoly::one(alpha));
        }
        m
    }

    pub fn from_fn(alpha: &Arc<Alphabet>, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> NCPoly) -> Self {
        let mut m = Self::zero(alpha, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Embeds a scalar matrix given as dense rows.
    pub fn from_scalars(alpha: &Arc<Alphabet>, entries: &[Vec<ScalarQ>]) -> Self {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        Self::from_fn(alpha, rows, cols, |i, j| NCPoly::constant(alpha, entries[i][j].clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alpha
    }

    pub fn get(&self, i: usize, j: usize) -> NCPoly {
        self.data[i].get(&j).cloned().unwrap_or_else(|| NCPoly::zero(&self.alpha))
    }

    pub fn get_ref(&self, i: usize, j: usize) -> Option<&NCPoly> {
        self.data[i].get(&j)
    }

    pub fn set(&mut self, i: usize, j: usize, p: NCPoly) {
        assert!(i < self.rows && j < self.cols);
        if p.is_zero() {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, p);
        }
    }

    pub fn row(&self, i: usize) -> &BTreeMap<usize, NCPoly> {
        &self.data[i]
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BTreeMap::is_empty)
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (i, row) in other.data.iter().enumerate() {
            for (j, p) in row {
                let s = &m.get(i, *j) + p;
                m.set(i, *j, s);
            }
        }
        m
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        self.add(&other.scale(&ScalarQ::from_int(-1)))
    }

    pub fn scale(&self, c: &ScalarQ) -> PolyMatrix {
        self.map(|p| p.scale(c))
    }

    /// Left-multiplies every entry by `p`.
    pub fn left_mul_entries(&self, p: &NCPoly) -> PolyMatrix {
        self.map(|x| p * x)
    }

    pub fn map(&self, mut f: impl FnMut(&NCPoly) -> NCPoly) -> PolyMatrix {
        let mut m = Self::zero(&self.alpha, self.rows, self.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (j, p) in row {
                m.set(i, *j, f(p));
            }
        }
        m
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut m = Self::zero(&self.alpha, self.rows, other.cols);
        for (i, row) in self.data.iter().enumerate() {
            let mut acc: BTreeMap<usize, NCPoly> = BTreeMap::new();
            for (k, a) in row {
                for (j, b) in &other.data[*k] {
                    let prod = a * b;
                    acc.entry(*j).and_modify(|x| x.add_assign_ref(&prod)).or_insert(prod);
                }
            }
            acc.retain(|_, p| !p.is_zero());
            m.data[i] = acc;
        }
        m
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut m = Self::zero(&self.alpha, self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for (j, p) in row {
                m.set(*j, i, p.clone());
            }
        }
        m
    }

    /// Kronecker product; entry products keep `self` on the left.
    pub fn kron(&self, other: &PolyMatrix) -> PolyMatrix {
        let mut m = Self::zero(&self.alpha, self.rows * other.rows, self.cols * other.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (j, a) in row {
                for (k, orow) in other.data.iter().enumerate() {
                    for (l, b) in orow {
                        m.set(i * other.rows + k, j * other.cols + l, a * b);
                    }
                }
            }
        }
        m
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        Self::from_fn(&self.alpha, rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }

    /// The rational matrix, if every entry is a `q`-free constant.
    pub fn to_rational(&self) -> Option<RatMatrix> {
        let mut m = RatMatrix::zero(self.rows, self.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (j, p) in row {
                m.set(i, *j, p.as_constant()?.as_constant()?);
            }
        }
        Some(m)
    }

    pub fn classical_limit(&self) -> PolyMatrix {
        let ca = self.alpha.classical();
        let mut m = Self::zero(&ca, self.rows, self.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (j, p) in row {
                m.set(i, *j, p.classical_limit());
            }
        }
        m
    }

    /// Determinant by Laplace expansion along the first row; entries must commute.
    pub fn det(&self) -> NCPoly {
        assert_eq!(self.rows, self.cols);
        let idx: Vec<usize> = (0..self.rows).collect();
        self.det_rec(&idx, &idx)
    }

    fn det_rec(&self, rows: &[usize], cols: &[usize]) -> NCPoly {
        match rows.len() {
            0 => NCPoly::one(&self.alpha),
            1 => self.get(rows[0], cols[0]),
            _ => {
                let mut acc = NCPoly::zero(&self.alpha);
                for (c, &col) in cols.iter().enumerate() {
                    let Some(a) = self.get_ref(rows[0], col) else { continue };
                    let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != col).collect();
                    let minor = self.det_rec(&rows[1..], &sub_cols);
                    let term = a * &minor;
                    if c % 2 == 0 {
                        acc.add_assign_ref(&term);
                    } else {
                        acc = &acc - &term;
                    }
                }
                acc
            }
        }
    }
}

/// `sum_{k=0}^{order} x^k / [k]!` over the chosen base.
pub fn q_exp(x: &PolyMatrix, order: u32, base: QBase) -> Result<PolyMatrix, AlgError> {
    assert_eq!(x.rows(), x.cols());
    let n = x.rows();
    let mut acc = PolyMatrix::identity(x.alphabet(), n);
    let mut power = PolyMatrix::identity(x.alphabet(), n);
    for k in 1..=order {
        power = power.mul(x);
        if power.is_zero() {
            return Ok(acc);
        }
        let f = match base {
            QBase::Q => ScalarQ::q_factorial(k),
            QBase::QInv => ScalarQ::q_factorial(k).invert_q(),
        };
        let mut term = PolyMatrix::zero(x.alphabet(), n, n);
        for (i, row) in power.data.iter().enumerate() {
            for (j, p) in row {
                term.set(i, *j, p.div_scalar(&f).ok_or(AlgError::InexactDivision)?);
            }
        }
        acc = acc.add(&term);
    }
    if !power.mul(x).is_zero() {
        return Err(AlgError::TruncationNotNilpotent(order));
    }
    Ok(acc)
}

/// Dense matrix over the rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    n: usize,
    m: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zero(n: usize, m: usize) -> Self {
        RatMatrix { n, m, data: vec![BigRational::zero(); n * m] }
    }

    pub fn identity(n: usize) -> Self {
        let mut a = Self::zero(n, n);
        for i in 0..n {
            a.set(i, i, BigRational::one());
        }
        a
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        RatMatrix { n, m, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.m + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.m + j] = v;
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.m, other.n);
        let mut c = Self::zero(self.n, other.m);
        for i in 0..self.n {
            for k in 0..self.m {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.m {
                    let v = c.get(i, j) + a * other.get(k, j);
                    c.set(i, j, v);
                }
            }
        }
        c
    }

    pub fn det(&self) -> BigRational {
        assert_eq!(self.n, self.m);
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r * n + c].is_zero()) else {
                return BigRational::zero();
            };
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = a[c * n + c].clone();
            det *= &piv;
            for r in c + 1..n {
                let f = &a[r * n + c] / &piv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = &a[r * n + j] - &f * &a[c * n + j];
                    a[r * n + j] = v;
                }
            }
        }
        det
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> RatMatrix {
        let mut s = Self::zero(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                s.set(i, j, self.get(r, c).clone());
            }
        }
        s
    }

    pub fn to_poly(&self, alpha: &Arc<Alphabet>) -> PolyMatrix {
        PolyMatrix::from_fn(alpha, self.n, self.m, |i, j| NCPoly::from_rational(alpha, self.get(i, j).clone()))
    }

    /// Leading principal `k x k` minor.
    pub fn leading_minor(&self, k: usize) -> BigRational {
        let idx: Vec<usize> = (0..k).collect();
        self.submatrix(&idx, &idx).det()
    }
}

#[cfg(test)]
mod tests {
    use super::super::alphabet::{Relation, Sector};
    use super::super::scalar::rat;
    use super::*;

    fn alpha() -> Arc<Alphabet> {
        Alphabet::builder()
            .generator("x", Sector::Xi, false)
            .generator("y", Sector::Xi, false)
            .relation("x", "y", Relation::Swap(1))
            .build()
            .unwrap()
    }

    fn unit(a: &Arc<Alphabet>, n: usize, i: usize, j: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zero(a, n, n);
        m.set(i, j, NCPoly::one(a));
        m
    }

    #[test]
    fn nilpotent_q_exp_truncates_to_linear() {
        let a = alpha();
        let x = unit(&a, 2, 0, 1).left_mul_entries(&NCPoly::var(&a, "x"));
        let e = q_exp(&x, 3, QBase::Q).unwrap();
        assert_eq!(e, PolyMatrix::identity(&a, 2).add(&x));
        let z = PolyMatrix::zero(&a, 3, 3);
        assert_eq!(q_exp(&z, 2, QBase::Q).unwrap(), PolyMatrix::identity(&a, 3));
    }

    #[test]
    fn q_exp_second_order_divides_by_q_factorial() {
        let a = alpha();
        // (1+q^2) e_02 squared-term numerator
        let mut x = unit(&a, 3, 0, 1).add(&unit(&a, 3, 1, 2));
        x = x.scale(&ScalarQ::q_pow(0));
        let e = q_exp(&x, 2, QBase::Q);
        // x^2 = e_02 is not divisible by 1+q^2
        assert!(matches!(e, Err(AlgError::InexactDivision)));
        let y = x.scale(&ScalarQ::q_int(2));
        assert!(q_exp(&y, 2, QBase::Q).is_ok());
        assert!(matches!(q_exp(&y, 1, QBase::Q), Err(AlgError::TruncationNotNilpotent(1))));
    }

    #[test]
    fn rational_determinant() {
        let m = RatMatrix::from_rows(vec![
            vec![rat(2, 1), rat(1, 1), rat(0, 1)],
            vec![rat(1, 2), rat(3, 1), rat(1, 1)],
            vec![rat(0, 1), rat(1, 1), rat(1, 1)],
        ]);
        assert_eq!(m.det(), rat(7, 2));
        assert_eq!(m.leading_minor(2), rat(11, 2));
    }

    #[test]
    fn polynomial_determinant_matches_rational() {
        let m = RatMatrix::from_rows(vec![vec![rat(2, 1), rat(1, 3)], vec![rat(5, 1), rat(1, 1)]]);
        let a = alpha();
        assert_eq!(m.to_poly(&a).det(), NCPoly::from_rational(&a, m.det()));
    }
}
