use std::sync::Arc;

use itertools::Itertools;

use super::SlError;
use crate::ncalg::{Alphabet, NCPoly, PolyMatrix, ScalarQ};

/// Number of inversions of a sequence.
pub fn inversions(p: &[usize]) -> u32 {
    let mut c = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                c += 1;
            }
        }
    }
    c
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    (0..n).permutations(n).collect()
}

/// Flat index of a multi-index in `F_1^{(x) slots}`; slot 1 is most significant.
pub fn tensor_flat(n_states: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &k| acc * n_states + k)
}

pub fn tensor_unflat(n_states: usize, slots: usize, mut idx: usize) -> Vec<usize> {
    let mut t = vec![0; slots];
    for s in (0..slots).rev() {
        t[s] = idx % n_states;
        idx /= n_states;
    }
    t
}

/// `F_n` inside `F_1^{(x) n}` through `(-q)^{inversions}`-weighted sums.
#[derive(Clone, Debug, PartialEq)]
pub struct QWedge {
    pub n_states: usize,
    pub level: usize,
    /// Sorted tuples in lexicographic order; the vacuum `(0..n)` comes first.
    pub basis: Vec<Vec<usize>>,
    /// For each basis tuple, `(flat index, coefficient)` pairs.
    pub embedding: Vec<Vec<(usize, ScalarQ)>>,
}

pub fn q_antisymmetrize(n_states: usize, level: usize) -> QWedge {
    assert!(level <= n_states, "level exceeds the number of states");
    let basis: Vec<Vec<usize>> = (0..n_states).combinations(level).collect();
    let perms = permutations(level);
    let embedding = basis
        .iter()
        .map(|tuple| {
            perms
                .iter()
                .map(|p| {
                    let image: Vec<usize> = p.iter().map(|&a| tuple[a]).collect();
                    (tensor_flat(n_states, &image), ScalarQ::minus_q_pow(inversions(p)))
                })
                .collect()
        })
        .collect();
    QWedge { n_states, level, basis, embedding }
}

impl QWedge {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn tensor_dim(&self) -> usize {
        self.n_states.pow(self.level as u32)
    }

    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        self.basis.binary_search_by(|b| b.as_slice().cmp(tuple)).ok()
    }

    /// Vector `sum_I c_I v_I` in the tensor space.
    pub fn embed(&self, alpha: &Arc<Alphabet>, coeffs: &[NCPoly]) -> Vec<NCPoly> {
        let mut v = vec![NCPoly::zero(alpha); self.tensor_dim()];
        for (c, emb) in coeffs.iter().zip(&self.embedding) {
            for (idx, s) in emb {
                v[*idx].add_scaled(s, c);
            }
        }
        v
    }

    /// Coordinates of a tensor vector in the wedge basis, failing if it leaves the span.
    pub fn decompose(&self, w: &[NCPoly]) -> Result<Vec<NCPoly>, SlError> {
        let coeffs: Vec<NCPoly> = self.basis.iter().map(|t| w[tensor_flat(self.n_states, t)].clone()).collect();
        let alpha = w[0].alphabet();
        let back = self.embed(alpha, &coeffs);
        for (idx, (a, b)) in w.iter().zip(&back).enumerate() {
            let r = a - b;
            if !r.is_zero() {
                return Err(SlError::NotInWedge {
                    component: tensor_unflat(self.n_states, self.level, idx),
                    residual: r.to_string(),
                });
            }
        }
        Ok(coeffs)
    }

    /// Matrix of a ket-side operator restricted to the wedge: `op v_J = sum_I M_{IJ} v_I`.
    pub fn induced(&self, op: &PolyMatrix) -> Result<PolyMatrix, SlError> {
        let alpha = op.alphabet().clone();
        let mut m = PolyMatrix::zero(&alpha, self.dim(), self.dim());
        for j in 0..self.dim() {
            let mut v = vec![NCPoly::zero(&alpha); self.tensor_dim()];
            for (idx, s) in &self.embedding[j] {
                v[*idx] = NCPoly::constant(&alpha, s.clone());
            }
            let w = times_ket(op, &v);
            for (i, c) in self.decompose(&w)?.into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        Ok(m)
    }

    /// Matrix of a bra-side operator restricted to the wedge: `v_I^T op = sum_J M_{IJ} v_J^T`.
    pub fn induced_bra(&self, op: &PolyMatrix) -> Result<PolyMatrix, SlError> {
        let alpha = op.alphabet().clone();
        let mut m = PolyMatrix::zero(&alpha, self.dim(), self.dim());
        for i in 0..self.dim() {
            let mut v = vec![NCPoly::zero(&alpha); self.tensor_dim()];
            for (idx, s) in &self.embedding[i] {
                v[*idx] = NCPoly::constant(&alpha, s.clone());
            }
            let w = bra_times(&v, op);
            for (j, c) in self.decompose(&w)?.into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        Ok(m)
    }
}

/// `M w`, entries of `M` multiplied on the left.
pub fn times_ket(m: &PolyMatrix, w: &[NCPoly]) -> Vec<NCPoly> {
    let alpha = m.alphabet();
    (0..m.rows())
        .map(|i| {
            let mut acc = NCPoly::zero(alpha);
            for (j, a) in m.row(i) {
                if !w[*j].is_zero() {
                    acc.add_assign_ref(&(a * &w[*j]));
                }
            }
            acc
        })
        .collect()
}

/// `v^T M`, entries of `M` multiplied on the right.
pub fn bra_times(v: &[NCPoly], m: &PolyMatrix) -> Vec<NCPoly> {
    let alpha = m.alphabet();
    let mut out = vec![NCPoly::zero(alpha); m.cols()];
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        for (j, a) in m.row(i) {
            out[*j].add_assign_ref(&(vi * a));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::rat;

    #[test]
    fn level_two_of_sl2() {
        let w = q_antisymmetrize(2, 2);
        assert_eq!(w.basis, vec![vec![0, 1]]);
        let mut emb = w.embedding[0].clone();
        emb.sort_by_key(|e| e.0);
        // |0>|1> - q |1>|0>
        assert_eq!(emb, vec![(1, ScalarQ::one()), (2, ScalarQ::monomial(rat(-1, 1), 1))]);
    }

    #[test]
    fn level_three_has_six_terms_with_inversion_signs() {
        let w = q_antisymmetrize(3, 3);
        assert_eq!(w.dim(), 1);
        let emb = &w.embedding[0];
        assert_eq!(emb.len(), 6);
        for (idx, c) in emb {
            let t = tensor_unflat(3, 3, *idx);
            assert_eq!(*c, ScalarQ::minus_q_pow(inversions(&t)));
        }
    }

    #[test]
    fn dimensions_are_binomial() {
        for n in 0..=4 {
            let w = q_antisymmetrize(4, n);
            assert_eq!(w.dim(), [1, 4, 6, 4, 1][n]);
            assert_eq!(w.index_of(&(0..n).collect::<Vec<_>>()), Some(0));
        }
    }

    #[test]
    fn flat_index_round_trip() {
        for idx in 0..27 {
            assert_eq!(tensor_flat(3, &tensor_unflat(3, 3, idx)), idx);
        }
        assert_eq!(tensor_flat(3, &[1, 0, 2]), 11);
    }
}
