use num::BigRational;

use super::SlError;
use crate::ncalg::{rat, ScalarQ};

/// Cartan matrix and fundamental-representation weights of SL(N).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootData {
    n: usize,
    cartan: Vec<Vec<i32>>,
    // two_h[i-1][j] = 2 h_{i,j}
    two_h: Vec<Vec<i32>>,
}

impl RootData {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "SL(N) needs N >= 2");
        let r = n - 1;
        let cartan = (0..r)
            .map(|a| {
                (0..r)
                    .map(|b| match a.abs_diff(b) {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        let two_h = (1..=r)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if j + 1 == i {
                            1
                        } else if j == i {
                            -1
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        RootData { n, cartan, two_h }
    }

    /// Dimension of the defining representation.
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.n - 1
    }

    /// `alpha_i . alpha_j` for simple roots `1 <= i, j <= rank`.
    pub fn cartan(&self, i: usize, j: usize) -> i32 {
        self.cartan[i - 1][j - 1]
    }

    /// `2 h_{i,j}`: twice the eigenvalue of `H_i` on state `j`.
    pub fn two_h(&self, i: usize, j: usize) -> i32 {
        self.two_h[i - 1][j]
    }

    pub fn h(&self, i: usize, j: usize) -> BigRational {
        rat(self.two_h(i, j) as i64, 2)
    }

    /// The simple-root index map of the economic parametrization:
    /// `1..r, 1..r-1, ..., 1, 2, 1`.
    pub fn economic_index_map(&self) -> Vec<usize> {
        let r = self.rank();
        (0..r).flat_map(|b| 1..=r - b).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    /// `T_i`, the simple raising generator.
    Raise(usize),
    /// `T_{-i}`.
    Lower(usize),
    /// `H_i`.
    Cartan(usize),
    /// Sum of raising generators of height `k`.
    RaiseHeight(usize),
    /// Sum of lowering generators of height `k`.
    LowerHeight(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMatrix {
    pub kind: GenKind,
    pub matrix: Vec<Vec<ScalarQ>>,
}

/// Exact `N x N` matrix of a generator on the defining representation.
pub fn generator_matrices(n: usize, kind: GenKind) -> Result<GeneratorMatrix, SlError> {
    let root = RootData::new(n);
    let mut m = vec![vec![ScalarQ::zero(); n]; n];
    let check = |i: usize| if (1..n).contains(&i) { Ok(()) } else { Err(SlError::IndexOutOfRange(i)) };
    match kind {
        GenKind::Raise(i) => {
            check(i)?;
            m[i - 1][i] = ScalarQ::one();
        }
        GenKind::Lower(i) => {
            check(i)?;
            m[i][i - 1] = ScalarQ::one();
        }
        GenKind::Cartan(i) => {
            check(i)?;
            for (j, row) in m.iter_mut().enumerate() {
                row[j] = ScalarQ::from_rational(root.h(i, j));
            }
        }
        GenKind::RaiseHeight(k) => {
            check(k)?;
            for a in 0..n - k {
                m[a][a + k] = ScalarQ::one();
            }
        }
        GenKind::LowerHeight(k) => {
            check(k)?;
            for a in 0..n - k {
                m[a + k][a] = ScalarQ::one();
            }
        }
    }
    Ok(GeneratorMatrix { kind, matrix: m })
}

/// `q^{sign * 2 H_i}` as a diagonal matrix.
pub fn q_cartan(root: &RootData, i: usize, sign: i32) -> Vec<Vec<ScalarQ>> {
    let n = root.dim();
    let mut m = vec![vec![ScalarQ::zero(); n]; n];
    for (j, row) in m.iter_mut().enumerate() {
        row[j] = ScalarQ::q_pow(sign * root.two_h(i, j));
    }
    m
}

pub fn scalar_identity(n: usize) -> Vec<Vec<ScalarQ>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { ScalarQ::one() } else { ScalarQ::zero() }).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_mul(a: &[Vec<ScalarQ>], b: &[Vec<ScalarQ>]) -> Vec<Vec<ScalarQ>> {
        let n = a.len();
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).fold(ScalarQ::zero(), |acc, k| &acc + &(&a[i][k] * &b[k][j]))).collect())
            .collect()
    }

    #[test]
    fn weights_match_the_table() {
        let r = RootData::new(4);
        for i in 1..=3 {
            assert_eq!(r.two_h(i, i - 1), 1);
            assert_eq!(r.two_h(i, i), -1);
            assert_eq!((0..4).map(|j| r.two_h(i, j)).sum::<i32>(), 0);
        }
        assert_eq!(r.cartan(1, 2), -1);
        assert_eq!(r.cartan(1, 3), 0);
        assert_eq!(r.economic_index_map(), vec![1, 2, 3, 1, 2, 1]);
    }

    #[test]
    fn generator_examples() {
        let t1 = generator_matrices(2, GenKind::Raise(1)).unwrap().matrix;
        assert_eq!(t1[0][1], ScalarQ::one());
        assert!(t1[1][0].is_zero() && t1[0][0].is_zero());
        let h1 = generator_matrices(2, GenKind::Cartan(1)).unwrap().matrix;
        assert_eq!(h1[0][0], ScalarQ::from_rational(rat(1, 2)));
        assert_eq!(h1[1][1], ScalarQ::from_rational(rat(-1, 2)));
        let t2 = generator_matrices(4, GenKind::RaiseHeight(2)).unwrap().matrix;
        let units: Vec<(usize, usize)> =
            (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).filter(|&(i, j)| !t2[i][j].is_zero()).collect();
        assert_eq!(units, vec![(0, 2), (1, 3)]);
        assert!(matches!(generator_matrices(3, GenKind::Raise(3)), Err(SlError::IndexOutOfRange(3))));
    }

    #[test]
    fn height_generators_commute() {
        let n = 5;
        for k in 1..n {
            for l in 1..n {
                for up in [true, false] {
                    let kind = |h| if up { GenKind::RaiseHeight(h) } else { GenKind::LowerHeight(h) };
                    let a = generator_matrices(n, kind(k)).unwrap().matrix;
                    let b = generator_matrices(n, kind(l)).unwrap().matrix;
                    assert_eq!(dense_mul(&a, &b), dense_mul(&b, &a));
                }
            }
        }
    }

    #[test]
    fn cartan_twist_conjugates_raising_generator() {
        // q^{-2H_i} T_i = q^{-2} T_i q^{-2H_i}
        let r = RootData::new(3);
        for i in 1..=2 {
            let k = q_cartan(&r, i, -1);
            let t = generator_matrices(3, GenKind::Raise(i)).unwrap().matrix;
            let lhs = dense_mul(&k, &t);
            let rhs: Vec<Vec<ScalarQ>> =
                dense_mul(&t, &k).iter().map(|row| row.iter().map(|x| x.shift(-2)).collect()).collect();
            assert_eq!(lhs, rhs);
        }
    }
}
