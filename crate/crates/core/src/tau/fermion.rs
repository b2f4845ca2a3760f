use std::sync::Arc;

use itertools::Itertools;

use crate::ncalg::{Alphabet, NCPoly, PolyMatrix};

/// Creation (`Plus`) or annihilation (`Minus`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Charge {
    Plus,
    Minus,
}

/// Sorted-tuple bases of every wedge level `0..=N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeBases {
    pub n_states: usize,
    pub levels: Vec<Vec<Vec<usize>>>,
}

impl WedgeBases {
    pub fn new(n_states: usize) -> Self {
        WedgeBases { n_states, levels: (0..=n_states).map(|l| (0..n_states).combinations(l).collect()).collect() }
    }

    pub fn dim(&self, level: usize) -> usize {
        self.levels[level].len()
    }

    pub fn index_of(&self, level: usize, tuple: &[usize]) -> usize {
        self.levels[level].binary_search_by(|b| b.as_slice().cmp(tuple)).expect("sorted tuple in basis")
    }
}

/// A fermion `psi_i^{+-}` between adjacent wedge levels.
#[derive(Clone, Debug, PartialEq)]
pub struct FermionOp {
    /// Mode label `1..=N`; it creates or removes state `index - 1`.
    pub index: usize,
    pub charge: Charge,
    /// Level of the ket it acts on.
    pub from_level: usize,
    /// `dim(to) x dim(from)` matrix with entries `0, +-1`.
    pub matrix: PolyMatrix,
}

/// Number of occupied modes below `mode`.
pub fn occupied_below(tuple: &[usize], mode: usize) -> usize {
    tuple.iter().filter(|&&j| j < mode).count()
}

pub fn occupied_above(tuple: &[usize], mode: usize) -> usize {
    tuple.iter().filter(|&&j| j > mode).count()
}

/// `psi_i^+ |J> = |J> ^ e_{i-1}`, sign `(-1)^{#J above i-1}`; `psi_i^-` is its transpose.
pub fn fermion(
    alpha: &Arc<Alphabet>,
    bases: &WedgeBases,
    index: usize,
    charge: Charge,
    from_level: usize,
) -> FermionOp {
    let mode = index - 1;
    let to_level = match charge {
        Charge::Plus => from_level + 1,
        Charge::Minus => from_level.checked_sub(1).expect("annihilation needs a nonempty level"),
    };
    let mut m = PolyMatrix::zero(alpha, bases.dim(to_level), bases.dim(from_level));
    // creation from the lower of the two levels
    let (lo, hi) = if charge == Charge::Plus { (from_level, to_level) } else { (to_level, from_level) };
    for (c, tuple) in bases.levels[lo].iter().enumerate() {
        if tuple.contains(&mode) {
            continue;
        }
        let mut bigger = tuple.clone();
        bigger.push(mode);
        bigger.sort_unstable();
        let r = bases.index_of(hi, &bigger);
        let sign = if occupied_above(tuple, mode).is_multiple_of(2) { 1 } else { -1 };
        let v = NCPoly::from_int(alpha, sign);
        match charge {
            Charge::Plus => m.set(r, c, v),
            Charge::Minus => m.set(c, r, v),
        }
    }
    FermionOp { index, charge, from_level, matrix: m }
}

/// Matrix of minors `det m[I, J]` on wedge level `level`; entries must commute.
pub fn wedge_power(m: &PolyMatrix, bases: &WedgeBases, level: usize) -> PolyMatrix {
    let b = &bases.levels[level];
    PolyMatrix::from_fn(m.alphabet(), b.len(), b.len(), |i, j| m.submatrix(&b[i], &b[j]).det())
}

/// Anticommutator residuals `{psi_i^+, psi_j^+}`, `{psi_i^-, psi_j^-}`, `{psi_i^+, psi_j^-} - delta_ij` on every level.
pub fn car_residuals(alpha: &Arc<Alphabet>, bases: &WedgeBases) -> Vec<(String, PolyMatrix)> {
    let n = bases.n_states;
    let mut out = Vec::new();
    for level in 0..=n {
        let dim = bases.dim(level);
        let id = PolyMatrix::identity(alpha, dim);
        for i in 1..=n {
            for j in 1..=n {
                if level + 2 <= n {
                    let a = fermion(alpha, bases, i, Charge::Plus, level + 1)
                        .matrix
                        .mul(&fermion(alpha, bases, j, Charge::Plus, level).matrix);
                    let b = fermion(alpha, bases, j, Charge::Plus, level + 1)
                        .matrix
                        .mul(&fermion(alpha, bases, i, Charge::Plus, level).matrix);
                    out.push((format!("{{psi{i}+, psi{j}+}} on level {level}"), a.add(&b)));
                }
                if level >= 2 {
                    let a = fermion(alpha, bases, i, Charge::Minus, level - 1)
                        .matrix
                        .mul(&fermion(alpha, bases, j, Charge::Minus, level).matrix);
                    let b = fermion(alpha, bases, j, Charge::Minus, level - 1)
                        .matrix
                        .mul(&fermion(alpha, bases, i, Charge::Minus, level).matrix);
                    out.push((format!("{{psi{i}-, psi{j}-}} on level {level}"), a.add(&b)));
                }
                let mut acc = PolyMatrix::zero(alpha, dim, dim);
                if level >= 1 {
                    acc = acc.add(
                        &fermion(alpha, bases, i, Charge::Plus, level - 1)
                            .matrix
                            .mul(&fermion(alpha, bases, j, Charge::Minus, level).matrix),
                    );
                }
                if level < n {
                    acc = acc.add(
                        &fermion(alpha, bases, j, Charge::Minus, level + 1)
                            .matrix
                            .mul(&fermion(alpha, bases, i, Charge::Plus, level).matrix),
                    );
                }
                if i == j {
                    acc = acc.sub(&id);
                }
                out.push((format!("{{psi{i}+, psi{j}-}} - delta on level {level}"), acc));
            }
        }
    }
    out
}

/// `Gamma (g (x) g) - (g (x) g) Gamma` from `F_n (x) F_m` to `F_{n+1} (x) F_{m-1}`.
pub fn gamma_commutator(g: &PolyMatrix, bases: &WedgeBases, n: usize, m: usize) -> PolyMatrix {
    let a = g.alphabet();
    let gn = wedge_power(g, bases, n);
    let gm = wedge_power(g, bases, m);
    let gn1 = wedge_power(g, bases, n + 1);
    let gm1 = wedge_power(g, bases, m - 1);
    let mut gamma = PolyMatrix::zero(a, bases.dim(n + 1) * bases.dim(m - 1), bases.dim(n) * bases.dim(m));
    for i in 1..=bases.n_states {
        let p = fermion(a, bases, i, Charge::Plus, n).matrix;
        let q = fermion(a, bases, i, Charge::Minus, m).matrix;
        gamma = gamma.add(&p.kron(&q));
    }
    gamma.mul(&gn.kron(&gm)).sub(&gn1.kron(&gm1).mul(&gamma))
}

/// Row `0` (the vacuum bra) of a wedge power.
pub fn vacuum_row(m: &PolyMatrix, bases: &WedgeBases, level: usize) -> Vec<NCPoly> {
    let b = &bases.levels[level];
    (0..b.len()).map(|j| m.submatrix(&b[0], &b[j]).det()).collect()
}

/// Column `0` (the vacuum ket) of a wedge power.
pub fn vacuum_col(m: &PolyMatrix, bases: &WedgeBases, level: usize) -> Vec<NCPoly> {
    let b = &bases.levels[level];
    (0..b.len()).map(|i| m.submatrix(&b[i], &b[0]).det()).collect()
}

/// `row^T M col`.
pub fn sandwich(row: &[NCPoly], m: &PolyMatrix, col: &[NCPoly]) -> NCPoly {
    let mut acc = NCPoly::zero(m.alphabet());
    for (i, r) in row.iter().enumerate() {
        if r.is_zero() {
            continue;
        }
        for (j, x) in m.row(i) {
            if !col[*j].is_zero() {
                acc.add_assign_ref(&(&(r * x) * &col[*j]));
            }
        }
    }
    acc
}
