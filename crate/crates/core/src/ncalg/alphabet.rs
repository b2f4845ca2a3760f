use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use super::AlgError;

/// Index of a generator inside its alphabet; smaller ids sort first in canonical words.
pub type GenId = u16;

/// Sector tag of a generator. Declaration order is the canonical priority.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sector {
    Xi,
    Theta,
    Lambda,
    Chi,
    XiBar,
    Abstract,
}

impl Sector {
    fn fully_quasi_commutative(self) -> bool {
        matches!(self, Sector::Xi | Sector::XiBar | Sector::Lambda)
    }
}

/// Exchange rule for an ordered pair `(a, b)`: `Swap(c)` means `x_a x_b = q^c x_b x_a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Swap(i32),
    NoRelation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub sector: Sector,
    pub invertible: bool,
}

/// Ordered generator set with pairwise q-commutation data.
pub struct Alphabet {
    gens: Vec<Generator>,
    // rel[a * n + b] = Some(c) iff x_a x_b = q^c x_b x_a
    rel: Vec<Option<i32>>,
    by_name: HashMap<String, GenId>,
    quasi_commutative: bool,
    commutative: bool,
    classical: OnceLock<Arc<Alphabet>>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens && self.rel == other.rel
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.gens.iter().map(|g| g.name.as_str()).collect();
        write!(f, "Alphabet{names:?}")
    }
}

impl Alphabet {
    pub fn builder() -> AlphabetBuilder {
        AlphabetBuilder::default()
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generator(&self, id: GenId) -> &Generator {
        &self.gens[id as usize]
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn name(&self, id: GenId) -> &str {
        &self.gens[id as usize].name
    }

    pub fn id(&self, name: &str) -> Option<GenId> {
        self.by_name.get(name).copied()
    }

    /// Looks a generator up by name, panicking on unknown names.
    pub fn expect_id(&self, name: &str) -> GenId {
        self.id(name).unwrap_or_else(|| panic!("unknown generator {name}"))
    }

    /// Exchange exponent `c` in `x_a x_b = q^c x_b x_a`, or `None` for a missing relation.
    #[inline]
    pub fn rel(&self, a: GenId, b: GenId) -> Option<i32> {
        self.rel[a as usize * self.gens.len() + b as usize]
    }

    pub fn relation(&self, a: GenId, b: GenId) -> Relation {
        match self.rel(a, b) {
            Some(c) => Relation::Swap(c),
            None => Relation::NoRelation,
        }
    }

    /// True when every pair carries a `Swap` rule.
    pub fn is_quasi_commutative(&self) -> bool {
        self.quasi_commutative
    }

    /// True when every pair commutes outright.
    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    pub fn commutes_with_all(&self, a: GenId) -> bool {
        (0..self.gens.len() as GenId).all(|b| self.rel(a, b) == Some(0))
    }

    /// The commutative alphabet on the same generators (the `q = 1` shadow).
    pub fn classical(self: &Arc<Self>) -> Arc<Alphabet> {
        if self.commutative {
            return self.clone();
        }
        self.classical
            .get_or_init(|| {
                let n = self.gens.len();
                Arc::new(Alphabet {
                    gens: self.gens.clone(),
                    rel: vec![Some(0); n * n],
                    by_name: self.by_name.clone(),
                    quasi_commutative: true,
                    commutative: true,
                    classical: OnceLock::new(),
                })
            })
            .clone()
    }

    pub fn same(a: &Arc<Alphabet>, b: &Arc<Alphabet>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

/// Collects generators and relations; unspecified pairs commute.
#[derive(Default)]
pub struct AlphabetBuilder {
    gens: Vec<Generator>,
    rules: Vec<(String, String, Relation)>,
}

impl AlphabetBuilder {
    pub fn generator(mut self, name: impl Into<String>, sector: Sector, invertible: bool) -> Self {
        self.gens.push(Generator { name: name.into(), sector, invertible });
        self
    }

    /// Declares `x_a x_b = q^c x_b x_a` (or no relation) for the ordered pair `(a, b)`.
    pub fn relation(mut self, a: impl Into<String>, b: impl Into<String>, r: Relation) -> Self {
        self.rules.push((a.into(), b.into(), r));
        self
    }

    pub fn build(self) -> Result<Arc<Alphabet>, AlgError> {
        let mut gens = self.gens;
        // stable: insertion order decides priority within a sector
        gens.sort_by_key(|g| g.sector);
        let n = gens.len();
        let mut by_name = HashMap::with_capacity(n);
        for (i, g) in gens.iter().enumerate() {
            if by_name.insert(g.name.clone(), i as GenId).is_some() {
                return Err(AlgError::DuplicateGenerator(g.name.clone()));
            }
        }
        let mut rel = vec![Some(0); n * n];
        for (a, b, r) in &self.rules {
            let ia = *by_name.get(a).ok_or_else(|| AlgError::UnknownGenerator(a.clone()))? as usize;
            let ib = *by_name.get(b).ok_or_else(|| AlgError::UnknownGenerator(b.clone()))? as usize;
            if ia == ib {
                continue;
            }
            match r {
                Relation::Swap(c) => {
                    rel[ia * n + ib] = Some(*c);
                    rel[ib * n + ia] = Some(-*c);
                }
                Relation::NoRelation => {
                    if gens[ia].sector == gens[ib].sector && gens[ia].sector.fully_quasi_commutative() {
                        return Err(AlgError::SectorRelation(a.clone(), b.clone()));
                    }
                    rel[ia * n + ib] = None;
                    rel[ib * n + ia] = None;
                }
            }
        }
        let quasi_commutative = rel.iter().all(Option::is_some);
        let commutative = rel.iter().all(|r| *r == Some(0));
        Ok(Arc::new(Alphabet { gens, rel, by_name, quasi_commutative, commutative, classical: OnceLock::new() }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations_are_antisymmetric_and_sorted_by_sector() {
        let a = Alphabet::builder()
            .generator("chi1", Sector::Chi, false)
            .generator("xi1", Sector::Xi, false)
            .generator("xi2", Sector::Xi, false)
            .relation("xi1", "xi2", Relation::Swap(1))
            .build()
            .unwrap();
        assert_eq!(a.name(0), "xi1");
        assert_eq!(a.name(2), "chi1");
        assert_eq!(a.rel(0, 1), Some(1));
        assert_eq!(a.rel(1, 0), Some(-1));
        assert!(a.is_quasi_commutative());
        assert!(!a.is_commutative());
        assert!(a.classical().is_commutative());
    }

    #[test]
    fn quasi_commutative_sectors_reject_missing_relations() {
        let r = Alphabet::builder()
            .generator("xi1", Sector::Xi, false)
            .generator("xi2", Sector::Xi, false)
            .relation("xi1", "xi2", Relation::NoRelation)
            .build();
        assert!(matches!(r, Err(AlgError::SectorRelation(..))));
    }
}
