use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num::{BigInt, BigRational, One, Signed, Zero};

/// Laurent polynomial in `q` with exact rational coefficients.
///
/// Terms are kept sorted by exponent with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ScalarQ {
    terms: Vec<(i32, BigRational)>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl ScalarQ {
    pub fn zero() -> Self {
        ScalarQ { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::q_pow(0)
    }

    /// The monomial `q^k`.
    pub fn q_pow(k: i32) -> Self {
        ScalarQ { terms: vec![(k, BigRational::one())] }
    }

    pub fn monomial(c: BigRational, k: i32) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            ScalarQ { terms: vec![(k, c)] }
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::monomial(BigRational::from_integer(n.into()), 0)
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    /// Builds from arbitrary `(exponent, coefficient)` pairs, merging duplicates.
    pub fn from_terms<I: IntoIterator<Item = (i32, BigRational)>>(it: I) -> Self {
        let mut v: Vec<(i32, BigRational)> = it.into_iter().collect();
        v.sort_by_key(|t| t.0);
        let mut out: Vec<(i32, BigRational)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        ScalarQ { terms: out }
    }

    pub fn terms(&self) -> &[(i32, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// Returns `Some(c)` when the value is a constant (no `q` dependence).
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(0, c)] => Some(c.clone()),
            _ => None,
        }
    }

    /// Returns `(c, k)` when the value is a single monomial `c q^k`.
    pub fn as_monomial(&self) -> Option<(BigRational, i32)> {
        match self.terms.as_slice() {
            [(k, c)] => Some((c.clone(), *k)),
            _ => None,
        }
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i32) -> Self {
        ScalarQ { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ScalarQ { terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    /// Substitutes a nonzero rational for `q`.
    pub fn eval(&self, value: &BigRational) -> BigRational {
        assert!(!value.is_zero(), "q cannot be specialized to 0");
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let p =
                if *e >= 0 { num::pow(value.clone(), *e as usize) } else { num::pow(value.recip(), (-*e) as usize) };
            acc += c * p;
        }
        acc
    }

    pub fn eval_at_one(&self) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |a, (_, c)| a + c)
    }

    /// Substitutes `q -> q^{-1}`.
    pub fn invert_q(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (-e, c.clone())))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact division in the Laurent ring; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &ScalarQ) -> Option<ScalarQ> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let lo_a = self.terms[0].0;
        let lo_b = divisor.terms[0].0;
        // dense ascending coefficient vectors, constant term nonzero
        let dense = |s: &ScalarQ, lo: i32| {
            let hi = s.terms.last().unwrap().0;
            let mut v = vec![BigRational::zero(); (hi - lo + 1) as usize];
            for (e, c) in &s.terms {
                v[(e - lo) as usize] = c.clone();
            }
            v
        };
        let mut a = dense(self, lo_a);
        let b = dense(divisor, lo_b);
        if a.len() < b.len() {
            return None;
        }
        let lead = b.last().unwrap().clone();
        let qlen = a.len() - b.len() + 1;
        let mut quot = vec![BigRational::zero(); qlen];
        for i in (0..qlen).rev() {
            let c = &a[i + b.len() - 1] / &lead;
            if !c.is_zero() {
                for (j, bj) in b.iter().enumerate() {
                    a[i + j] -= &c * bj;
                }
            }
            quot[i] = c;
        }
        if a.iter().any(|x| !x.is_zero()) {
            return None;
        }
        let shift = lo_a - lo_b;
        Some(Self::from_terms(quot.into_iter().enumerate().map(|(i, c)| (i as i32 + shift, c))))
    }

    /// `[k]_q = (1 - q^{2k}) / (1 - q^2) = 1 + q^2 + ... + q^{2(k-1)}`.
    pub fn q_int(k: u32) -> Self {
        Self::from_terms((0..k).map(|j| (2 * j as i32, BigRational::one())))
    }

    pub fn q_factorial(k: u32) -> Self {
        (1..=k).fold(Self::one(), |acc, j| &acc * &Self::q_int(j))
    }

    /// `(-q)^k`.
    pub fn minus_q_pow(k: u32) -> Self {
        let s = if k.is_multiple_of(2) { 1 } else { -1 };
        Self::monomial(rat(s, 1), k as i32)
    }
}

impl fmt::Display for ScalarQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let coef = if a.is_one() && *e != 0 { String::new() } else { a.to_string() };
            match *e {
                0 => write!(f, "{coef}")?,
                1 if coef.is_empty() => write!(f, "q")?,
                1 => write!(f, "{coef}*q")?,
                _ if coef.is_empty() => write!(f, "q^{e}")?,
                _ => write!(f, "{coef}*q^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ScalarQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarQ({self})")
    }
}

impl<'a> Add<&'a ScalarQ> for &'a ScalarQ {
    type Output = ScalarQ;
    fn add(self, rhs: &ScalarQ) -> ScalarQ {
        let (a, b) = (&self.terms, &rhs.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        ScalarQ { terms: out }
    }
}

impl Add for ScalarQ {
    type Output = ScalarQ;
    fn add(self, rhs: ScalarQ) -> ScalarQ {
        &self + &rhs
    }
}

impl AddAssign<&ScalarQ> for ScalarQ {
    fn add_assign(&mut self, rhs: &ScalarQ) {
        *self = &*self + rhs;
    }
}

impl Neg for &ScalarQ {
    type Output = ScalarQ;
    fn neg(self) -> ScalarQ {
        ScalarQ { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Neg for ScalarQ {
    type Output = ScalarQ;
    fn neg(self) -> ScalarQ {
        -&self
    }
}

impl<'a> Sub<&'a ScalarQ> for &'a ScalarQ {
    type Output = ScalarQ;
    fn sub(self, rhs: &ScalarQ) -> ScalarQ {
        self + &(-rhs)
    }
}

impl Sub for ScalarQ {
    type Output = ScalarQ;
    fn sub(self, rhs: ScalarQ) -> ScalarQ {
        &self - &rhs
    }
}

impl SubAssign<&ScalarQ> for ScalarQ {
    fn sub_assign(&mut self, rhs: &ScalarQ) {
        *self = &*self - rhs;
    }
}

impl<'a> Mul<&'a ScalarQ> for &'a ScalarQ {
    type Output = ScalarQ;
    fn mul(self, rhs: &ScalarQ) -> ScalarQ {
        if self.is_zero() || rhs.is_zero() {
            return ScalarQ::zero();
        }
        if let [(k, c)] = rhs.terms.as_slice() {
            return ScalarQ { terms: self.terms.iter().map(|(e, x)| (e + k, x * c)).collect() };
        }
        if let [(k, c)] = self.terms.as_slice() {
            return ScalarQ { terms: rhs.terms.iter().map(|(e, x)| (e + k, c * x)).collect() };
        }
        let mut prods = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                prods.push((ea + eb, ca * cb));
            }
        }
        ScalarQ::from_terms(prods)
    }
}

impl Mul for ScalarQ {
    type Output = ScalarQ;
    fn mul(self, rhs: ScalarQ) -> ScalarQ {
        &self * &rhs
    }
}

impl num::Zero for ScalarQ {
    fn zero() -> Self {
        ScalarQ { terms: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_scalar() -> impl Strategy<Value = ScalarQ> {
        prop::collection::vec((-4i32..5, -5i64..6, 1i64..4), 0..5)
            .prop_map(|v| ScalarQ::from_terms(v.into_iter().map(|(e, n, d)| (e, rat(n, d)))))
    }

    #[test]
    fn q_factorial_two_is_one_plus_q_squared() {
        let expect = ScalarQ::from_terms([(0, rat(1, 1)), (2, rat(1, 1))]);
        assert_eq!(ScalarQ::q_factorial(2), expect);
    }

    #[test]
    fn eval_at_one_of_mixed_powers() {
        let x = &ScalarQ::q_pow(2) + &ScalarQ::q_pow(-1);
        assert_eq!(x.eval_at_one(), rat(2, 1));
        assert_eq!(x.eval(&rat(2, 1)), rat(9, 2));
    }

    #[test]
    fn exact_division_by_q_factorial() {
        let f3 = ScalarQ::q_factorial(3);
        let x = &f3 * &ScalarQ::from_terms([(-3, rat(2, 3)), (1, rat(-1, 1))]);
        let back = x.div_exact(&f3).unwrap();
        assert_eq!(&back * &f3, x);
        assert!(ScalarQ::one().div_exact(&ScalarQ::q_int(2)).is_none());
        assert_eq!(ScalarQ::q_pow(3).div_exact(&ScalarQ::q_pow(5)), Some(ScalarQ::q_pow(-2)));
    }

    #[test]
    fn display_reads_naturally() {
        let x = ScalarQ::from_terms([(-1, rat(1, 2)), (0, rat(-1, 1)), (2, rat(1, 1))]);
        assert_eq!(x.to_string(), "1/2*q^-1 - 1 + q^2");
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn specialization_is_a_homomorphism(a in arb_scalar(), b in arb_scalar(), v in 1i64..5) {
            let x = rat(v, 3);
            prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
            prop_assert_eq!((&a + &b).eval_at_one(), a.eval_at_one() + b.eval_at_one());
        }

        #[test]
        fn division_inverts_multiplication(a in arb_scalar(), b in arb_scalar()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
        }
    }
}
