use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::{BigRational, One};

use super::alphabet::{Alphabet, GenId};
use super::scalar::ScalarQ;
use super::AlgError;

/// A word as a product of generator powers, left to right.
pub type Word = Vec<(GenId, i32)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Polynomial over an [`Alphabet`] with canonical words and [`ScalarQ`] coefficients.
#[derive(Clone)]
pub struct NCPoly {
    alpha: Arc<Alphabet>,
    terms: BTreeMap<Word, ScalarQ>,
}

impl PartialEq for NCPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && Alphabet::same(&self.alpha, &other.alpha)
    }
}

impl Eq for NCPoly {}

/// Rewrites a raw word to `q^k * canonical`.
///
/// Letters are pulled out greedily: the smallest generator that can reach the
/// front through `Swap` rules goes next. With every pair related this is a
/// plain stable sort.
pub fn canonicalize(alpha: &Alphabet, raw: &[(GenId, i32)]) -> (i32, Word) {
    let letters: Vec<(GenId, i32)> = raw.iter().copied().filter(|l| l.1 != 0).collect();
    if alpha.is_quasi_commutative() {
        let mut k = 0i32;
        for j in 0..letters.len() {
            let (b, eb) = letters[j];
            for &(a, ea) in &letters[..j] {
                if a > b {
                    k += alpha.rel(a, b).unwrap() * ea * eb;
                }
            }
        }
        let mut sorted = letters;
        sorted.sort_by_key(|l| l.0);
        return (k, merge_sorted(sorted));
    }
    let mut rest = letters;
    let mut out: Word = Vec::with_capacity(rest.len());
    let mut k = 0i32;
    while !rest.is_empty() {
        let mut best: Option<usize> = None;
        'scan: for p in 0..rest.len() {
            let g = rest[p].0;
            if let Some(b) = best {
                if rest[b].0 <= g {
                    continue;
                }
            }
            for &(h, _) in &rest[..p] {
                if h != g && alpha.rel(h, g).is_none() {
                    continue 'scan;
                }
            }
            best = Some(p);
        }
        let p = best.expect("first letter is always available");
        let (g, e) = rest[p];
        for &(h, f) in &rest[..p] {
            if h != g {
                k += alpha.rel(h, g).unwrap() * f * e;
            }
        }
        rest.remove(p);
        push_letter(&mut out, (g, e));
    }
    (k, out)
}

fn push_letter(out: &mut Word, (g, e): (GenId, i32)) {
    match out.last_mut() {
        Some(last) if last.0 == g => {
            last.1 += e;
            if last.1 == 0 {
                out.pop();
            }
        }
        _ => out.push((g, e)),
    }
}

fn merge_sorted(sorted: Vec<(GenId, i32)>) -> Word {
    let mut out: Word = Vec::with_capacity(sorted.len());
    for l in sorted {
        push_letter(&mut out, l);
    }
    out
}

/// Product of two canonical words.
fn mul_words(alpha: &Alphabet, a: &[(GenId, i32)], b: &[(GenId, i32)]) -> (i32, Word) {
    if a.is_empty() {
        return (0, b.to_vec());
    }
    if b.is_empty() {
        return (0, a.to_vec());
    }
    if !alpha.is_quasi_commutative() {
        let mut raw = a.to_vec();
        raw.extend_from_slice(b);
        return canonicalize(alpha, &raw);
    }
    let mut k = 0i32;
    for &(x, ex) in a {
        for &(y, ey) in b {
            if x > y {
                k += alpha.rel(x, y).unwrap() * ex * ey;
            }
        }
    }
    let mut out: Word = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 <= b[j].0);
        if take_a {
            push_letter(&mut out, a[i]);
            i += 1;
        } else {
            push_letter(&mut out, b[j]);
            j += 1;
        }
    }
    (k, out)
}

impl NCPoly {
    pub fn zero(alpha: &Arc<Alphabet>) -> Self {
        NCPoly { alpha: alpha.clone(), terms: BTreeMap::new() }
    }

    pub fn one(alpha: &Arc<Alphabet>) -> Self {
        Self::constant(alpha, ScalarQ::one())
    }

    pub fn constant(alpha: &Arc<Alphabet>, c: ScalarQ) -> Self {
        let mut p = Self::zero(alpha);
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    pub fn from_int(alpha: &Arc<Alphabet>, n: i64) -> Self {
        Self::constant(alpha, ScalarQ::from_int(n))
    }

    pub fn from_rational(alpha: &Arc<Alphabet>, c: BigRational) -> Self {
        Self::constant(alpha, ScalarQ::from_rational(c))
    }

    pub fn gen(alpha: &Arc<Alphabet>, id: GenId) -> Self {
        Self::gen_pow(alpha, id, 1)
    }

    pub fn gen_pow(alpha: &Arc<Alphabet>, id: GenId, e: i32) -> Self {
        assert!(e >= 0 || alpha.generator(id).invertible, "negative power of non-invertible {}", alpha.name(id));
        Self::normal_order(alpha, &[(id, e)])
    }

    /// Generator by name; panics on unknown names.
    pub fn var(alpha: &Arc<Alphabet>, name: &str) -> Self {
        Self::gen(alpha, alpha.expect_id(name))
    }

    /// Canonical form of a raw word.
    pub fn normal_order(alpha: &Arc<Alphabet>, raw: &[(GenId, i32)]) -> Self {
        let (k, w) = canonicalize(alpha, raw);
        let mut p = Self::zero(alpha);
        p.terms.insert(w, ScalarQ::q_pow(k));
        p
    }

    /// Builds from `(coefficient, raw word)` pairs.
    pub fn from_terms<I: IntoIterator<Item = (ScalarQ, Word)>>(alpha: &Arc<Alphabet>, it: I) -> Self {
        let mut p = Self::zero(alpha);
        for (c, raw) in it {
            let (k, w) = canonicalize(alpha, &raw);
            p.add_term(w, c.shift(k));
        }
        p
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alpha
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &ScalarQ)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Word) -> ScalarQ {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// The constant term, if the polynomial has no words.
    pub fn as_constant(&self) -> Option<ScalarQ> {
        match self.terms.len() {
            0 => Some(ScalarQ::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, w: Word, c: ScalarQ) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_alphabet(&self, other: &NCPoly) {
        assert!(Alphabet::same(&self.alpha, &other.alpha), "alphabet mismatch");
    }

    pub fn add_assign_ref(&mut self, other: &NCPoly) {
        self.check_alphabet(other);
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c.clone());
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &ScalarQ, other: &NCPoly) {
        self.check_alphabet(other);
        if c.is_zero() {
            return;
        }
        for (w, x) in &other.terms {
            self.add_term(w.clone(), x * c);
        }
    }

    pub fn scale(&self, c: &ScalarQ) -> NCPoly {
        let mut p = Self::zero(&self.alpha);
        if c.is_zero() {
            return p;
        }
        p.terms = self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect();
        p
    }

    pub fn scale_rational(&self, c: &BigRational) -> NCPoly {
        self.scale(&ScalarQ::from_rational(c.clone()))
    }

    pub fn mul_ref(&self, other: &NCPoly) -> NCPoly {
        self.check_alphabet(other);
        let mut p = Self::zero(&self.alpha);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let (k, w) = mul_words(&self.alpha, wa, wb);
                p.add_term(w, (ca * cb).shift(k));
            }
        }
        p
    }

    pub fn pow(&self, n: u32) -> NCPoly {
        let mut acc = Self::one(&self.alpha);
        for _ in 0..n {
            acc = acc.mul_ref(self);
        }
        acc
    }

    /// Total exponent of `j` in a word.
    pub fn exponent_in(w: &Word, j: GenId) -> i32 {
        w.iter().filter(|l| l.0 == j).map(|l| l.1).sum()
    }

    /// Multiplies each term by `q^{sign * power * exponent of j}`.
    pub fn twist(&self, j: GenId, sign: i32, power: i32) -> NCPoly {
        self.twist_many(&[(j, sign * power)])
    }

    /// Multiplies each term by `q^{sum_j c_j * exponent of j}`.
    pub fn twist_many(&self, shifts: &[(GenId, i32)]) -> NCPoly {
        let mut p = Self::zero(&self.alpha);
        p.terms = self
            .terms
            .iter()
            .map(|(w, c)| {
                let k: i32 = shifts.iter().map(|&(j, s)| s * Self::exponent_in(w, j)).sum();
                (w.clone(), c.shift(k))
            })
            .collect();
        p
    }

    /// Inverse of multiplying by generator `g` on the given side.
    pub fn side_divide(&self, g: GenId, side: Side) -> Result<NCPoly, AlgError> {
        let alpha = &self.alpha;
        let mut p = Self::zero(alpha);
        for (w, c) in &self.terms {
            let pos = match side {
                Side::Left => w.iter().position(|l| l.0 == g),
                Side::Right => w.iter().rposition(|l| l.0 == g),
            };
            let Some(pos) = pos else {
                if !alpha.generator(g).invertible {
                    return Err(AlgError::NotDivisible(alpha.name(g).to_string()));
                }
                let raw: Word = match side {
                    Side::Left => std::iter::once((g, -1)).chain(w.iter().copied()).collect(),
                    Side::Right => w.iter().copied().chain(std::iter::once((g, -1))).collect(),
                };
                let (k, nw) = canonicalize(alpha, &raw);
                p.add_term(nw, c.shift(k));
                continue;
            };
            let crossed = match side {
                Side::Left => &w[..pos],
                Side::Right => &w[pos + 1..],
            };
            let mut k = 0i32;
            for &(h, f) in crossed {
                let r = match side {
                    // x_h x_g = q^{rel(h,g)} x_g x_h
                    Side::Left => alpha.rel(h, g),
                    Side::Right => alpha.rel(g, h),
                };
                match r {
                    Some(r) => k += r * f,
                    None => {
                        return Err(AlgError::OrderingObstruction {
                            generator: alpha.name(g).to_string(),
                            blocker: alpha.name(h).to_string(),
                        })
                    }
                }
            }
            let mut raw = w.clone();
            raw[pos].1 -= 1;
            if raw[pos].1 < 0 && !alpha.generator(g).invertible {
                return Err(AlgError::NotDivisible(alpha.name(g).to_string()));
            }
            let (k2, nw) = canonicalize(alpha, &raw);
            p.add_term(nw, c.shift(k + k2));
        }
        Ok(p)
    }

    /// Substitutes a rational for `q` in the coefficients, keeping the alphabet.
    ///
    /// Only `q = 1` (see [`NCPoly::classical_limit`]) is compatible with products.
    pub fn specialize_q(&self, value: &BigRational) -> NCPoly {
        let mut p = Self::zero(&self.alpha);
        for (w, c) in &self.terms {
            p.add_term(w.clone(), ScalarQ::from_rational(c.eval(value)));
        }
        p
    }

    /// Substitutes `q = 1` and moves into the commutative shadow alphabet.
    pub fn classical_limit(&self) -> NCPoly {
        let ca = self.alpha.classical();
        let mut p = Self::zero(&ca);
        for (w, c) in &self.terms {
            let (_, nw) = canonicalize(&ca, w);
            p.add_term(nw, ScalarQ::from_rational(c.eval_at_one()));
        }
        p
    }

    /// Reinterprets the words in another alphabet with the same generator names.
    pub fn rebase(&self, target: &Arc<Alphabet>) -> NCPoly {
        let map: Vec<GenId> = self.alpha.generators().iter().map(|g| target.expect_id(&g.name)).collect();
        let mut p = Self::zero(target);
        for (w, c) in &self.terms {
            let raw: Word = w.iter().map(|&(g, e)| (map[g as usize], e)).collect();
            let (k, nw) = canonicalize(target, &raw);
            p.add_term(nw, c.shift(k));
        }
        p
    }

    /// Partial derivative in a generator that commutes with everything.
    pub fn derivative(&self, g: GenId) -> Result<NCPoly, AlgError> {
        if !self.alpha.commutes_with_all(g) {
            return Err(AlgError::NonCommuting(self.alpha.name(g).to_string()));
        }
        let mut p = Self::zero(&self.alpha);
        for (w, c) in &self.terms {
            if let Some(pos) = w.iter().position(|l| l.0 == g) {
                let e = w[pos].1;
                let mut nw = w.clone();
                nw[pos].1 -= 1;
                if nw[pos].1 == 0 {
                    nw.remove(pos);
                }
                p.add_term(nw, c.scale(&BigRational::from_integer(e.into())));
            }
        }
        Ok(p)
    }

    /// Replaces generators by polynomials, multiplying letters in word order.
    pub fn substitute(&self, map: &[(GenId, NCPoly)]) -> NCPoly {
        let mut out = Self::zero(&self.alpha);
        for (w, c) in &self.terms {
            let mut acc = Self::constant(&self.alpha, c.clone());
            for &(g, e) in w {
                match map.iter().find(|m| m.0 == g) {
                    Some((_, v)) => {
                        assert!(e >= 0, "cannot substitute into a negative power");
                        acc = acc.mul_ref(&v.pow(e as u32));
                    }
                    None => acc = acc.mul_ref(&Self::gen_pow(&self.alpha, g, e)),
                }
            }
            out.add_assign_ref(&acc);
        }
        out
    }

    /// Sets the listed generators to zero.
    pub fn kill(&self, gens: &[GenId]) -> NCPoly {
        let mut p = Self::zero(&self.alpha);
        for (w, c) in &self.terms {
            if !w.iter().any(|l| gens.contains(&l.0)) {
                p.add_term(w.clone(), c.clone());
            }
        }
        p
    }

    /// Highest exponent of `g` over all terms.
    pub fn degree_in(&self, g: GenId) -> i32 {
        self.terms.keys().map(|w| Self::exponent_in(w, g)).max().unwrap_or(0)
    }

    pub fn contains_generator(&self, g: GenId) -> bool {
        self.terms.keys().any(|w| w.iter().any(|l| l.0 == g))
    }

    /// Coefficient-wise division by a scalar; `None` if some coefficient is not divisible.
    pub fn div_scalar(&self, d: &ScalarQ) -> Option<NCPoly> {
        let mut p = Self::zero(&self.alpha);
        for (w, c) in &self.terms {
            p.terms.insert(w.clone(), c.div_exact(d)?);
        }
        Some(p)
    }

    /// True when every coefficient is a rational constant.
    pub fn is_q_free(&self) -> bool {
        self.terms.values().all(|c| c.as_constant().is_some())
    }

    pub fn word_string(&self, w: &Word) -> String {
        w.iter()
            .map(
                |&(g, e)| {
                    if e == 1 {
                        self.alpha.name(g).to_string()
                    } else {
                        format!("{}^{}", self.alpha.name(g), e)
                    }
                },
            )
            .collect::<Vec<_>>()
            .join("*")
    }

    /// The first term in canonical order, rendered.
    pub fn leading_term_string(&self) -> Option<String> {
        self.terms.iter().next().map(|(w, c)| render_term(self, w, c))
    }
}

fn render_term(p: &NCPoly, w: &Word, c: &ScalarQ) -> String {
    let ws = p.word_string(w);
    if ws.is_empty() {
        return format!("{c}");
    }
    if c.is_one() {
        return ws;
    }
    if let Some((r, 0)) = c.as_monomial() {
        if r == -BigRational::one() {
            return format!("-{ws}");
        }
        return format!("{r}*{ws}");
    }
    if c.terms().len() == 1 {
        return format!("{c}*{ws}");
    }
    format!("({c})*{ws}")
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| render_term(self, w, c)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NCPoly({self})")
    }
}

impl<'a> Add<&'a NCPoly> for &'a NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: &NCPoly) -> NCPoly {
        let mut p = self.clone();
        p.add_assign_ref(rhs);
        p
    }
}

impl<'a> Sub<&'a NCPoly> for &'a NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: &NCPoly) -> NCPoly {
        let mut p = self.clone();
        p.add_scaled(&ScalarQ::from_int(-1), rhs);
        p
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        self.scale(&ScalarQ::from_int(-1))
    }
}

impl<'a> Mul<&'a NCPoly> for &'a NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: &NCPoly) -> NCPoly {
        self.mul_ref(rhs)
    }
}

impl Add for NCPoly {
    type Output = NCPoly;
    fn add(mut self, rhs: NCPoly) -> NCPoly {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Sub for NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: NCPoly) -> NCPoly {
        &self - &rhs
    }
}

impl Mul for NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: NCPoly) -> NCPoly {
        self.mul_ref(&rhs)
    }
}
