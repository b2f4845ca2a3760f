use std::sync::Arc;

use super::roots::{generator_matrices, q_cartan, scalar_identity, GenKind, RootData};
use super::wedge::tensor_flat;
use crate::ncalg::{q_exp, AlgError, Alphabet, GenId, NCPoly, PolyMatrix, QBase, ScalarQ};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvolutionSide {
    /// `U`, built from raising generators, ordered by increasing `s`.
    Upper,
    /// `Ubar`, built from lowering generators, ordered by decreasing `s`.
    Lower,
}

/// Operator whose iterated coproduct is requested.
#[derive(Clone, Copy, Debug)]
pub enum CoproductSpec<'a> {
    Raise(usize),
    Lower(usize),
    Cartan(usize),
    /// Evolution with one time per entry of `index_map`.
    Evolution {
        times: &'a [GenId],
        index_map: &'a [usize],
        side: EvolutionSide,
    },
}

fn kron_chain(alpha: &Arc<Alphabet>, factors: &[Vec<Vec<ScalarQ>>]) -> PolyMatrix {
    let mut acc = PolyMatrix::identity(alpha, 1);
    for f in factors {
        acc = acc.kron(&PolyMatrix::from_scalars(alpha, f));
    }
    acc
}

fn gen(root: &RootData, kind: GenKind) -> Vec<Vec<ScalarQ>> {
    generator_matrices(root.dim(), kind).expect("root index in range").matrix
}

/// `I^{m-1} (x) T_i (x) (q^{-2H_i})^{n-m}`, slot `m` counted from 1.
fn raise_at(root: &RootData, alpha: &Arc<Alphabet>, i: usize, m: usize, n: usize) -> PolyMatrix {
    let id = scalar_identity(root.dim());
    let k = q_cartan(root, i, -1);
    let factors: Vec<_> = (1..=n)
        .map(|l| {
            if l < m {
                id.clone()
            } else if l == m {
                gen(root, GenKind::Raise(i))
            } else {
                k.clone()
            }
        })
        .collect();
    kron_chain(alpha, &factors)
}

/// `(q^{2H_i})^{m-1} (x) T_{-i} (x) I^{n-m}`.
fn lower_at(root: &RootData, alpha: &Arc<Alphabet>, i: usize, m: usize, n: usize) -> PolyMatrix {
    let id = scalar_identity(root.dim());
    let k = q_cartan(root, i, 1);
    let factors: Vec<_> = (1..=n)
        .map(|l| {
            if l < m {
                k.clone()
            } else if l == m {
                gen(root, GenKind::Lower(i))
            } else {
                id.clone()
            }
        })
        .collect();
    kron_chain(alpha, &factors)
}

fn cartan_at(root: &RootData, alpha: &Arc<Alphabet>, i: usize, m: usize, n: usize) -> PolyMatrix {
    let id = scalar_identity(root.dim());
    let factors: Vec<_> = (1..=n).map(|l| if l == m { gen(root, GenKind::Cartan(i)) } else { id.clone() }).collect();
    kron_chain(alpha, &factors)
}

fn sum_slots(alpha: &Arc<Alphabet>, dim: usize, mut f: impl FnMut(usize) -> PolyMatrix, n: usize) -> PolyMatrix {
    (1..=n).fold(PolyMatrix::zero(alpha, dim, dim), |acc, m| acc.add(&f(m)))
}

/// Iterated coproduct on `F_1^{(x) n}`.
///
/// Generators follow `Delta(T_i) = T_i (x) q^{-2H_i} + I (x) T_i` and
/// `Delta(T_{-i}) = T_{-i} (x) I + q^{2H_i} (x) T_{-i}`. Evolutions are
/// returned as the ordered product of their slot factors `U^(1) ... U^(n)`.
pub fn coproduct_power(alpha: &Arc<Alphabet>, root: &RootData, spec: CoproductSpec<'_>, n: usize) -> PolyMatrix {
    let dim = root.dim().pow(n as u32);
    match spec {
        CoproductSpec::Raise(i) => sum_slots(alpha, dim, |m| raise_at(root, alpha, i, m, n), n),
        CoproductSpec::Lower(i) => sum_slots(alpha, dim, |m| lower_at(root, alpha, i, m, n), n),
        CoproductSpec::Cartan(i) => sum_slots(alpha, dim, |m| cartan_at(root, alpha, i, m, n), n),
        CoproductSpec::Evolution { times, index_map, side } => {
            let mut acc = PolyMatrix::identity(alpha, dim);
            for m in 1..=n {
                acc = acc.mul(&evolution_slot_factor(alpha, root, times, index_map, side, m, n));
            }
            acc
        }
    }
}

/// The slot factor `U^(m)` (or `Ubar^(m)`); each exponential truncates at first order.
pub fn evolution_slot_factor(
    alpha: &Arc<Alphabet>,
    root: &RootData,
    times: &[GenId],
    index_map: &[usize],
    side: EvolutionSide,
    m: usize,
    n: usize,
) -> PolyMatrix {
    let dim = root.dim().pow(n as u32);
    let id = PolyMatrix::identity(alpha, dim);
    let factor = |s: usize| {
        let x = match side {
            EvolutionSide::Upper => raise_at(root, alpha, index_map[s], m, n),
            EvolutionSide::Lower => lower_at(root, alpha, index_map[s], m, n),
        };
        id.add(&x.left_mul_entries(&NCPoly::gen(alpha, times[s])))
    };
    let order: Vec<usize> = match side {
        EvolutionSide::Upper => (0..times.len()).collect(),
        EvolutionSide::Lower => (0..times.len()).rev().collect(),
    };
    order.into_iter().fold(id.clone(), |acc, s| acc.mul(&factor(s)))
}

/// Evolution coproduct through q-exponentials of the iterated generator coproducts.
///
/// The upper side uses base `q`, the lower side base `q^{-1}`.
pub fn evolution_coproduct_direct(
    alpha: &Arc<Alphabet>,
    root: &RootData,
    times: &[GenId],
    index_map: &[usize],
    side: EvolutionSide,
    n: usize,
) -> Result<PolyMatrix, AlgError> {
    let dim = root.dim().pow(n as u32);
    let mut acc = PolyMatrix::identity(alpha, dim);
    let order: Vec<usize> = match side {
        EvolutionSide::Upper => (0..times.len()).collect(),
        EvolutionSide::Lower => (0..times.len()).rev().collect(),
    };
    for s in order {
        let (gen_spec, base) = match side {
            EvolutionSide::Upper => (CoproductSpec::Raise(index_map[s]), QBase::Q),
            EvolutionSide::Lower => (CoproductSpec::Lower(index_map[s]), QBase::QInv),
        };
        let x = coproduct_power(alpha, root, gen_spec, n).left_mul_entries(&NCPoly::gen(alpha, times[s]));
        acc = acc.mul(&q_exp(&x, n as u32, base)?);
    }
    Ok(acc)
}

/// Slot-ordered `g^{(x) n}`: entry `(k, kbar)` is `g_{k_1 kbar_1} ... g_{k_n kbar_n}`.
pub fn tensor_action(g: &PolyMatrix, n: usize) -> PolyMatrix {
    let mut acc = PolyMatrix::identity(g.alphabet(), 1);
    for _ in 0..n {
        acc = acc.kron(g);
    }
    acc
}

/// `v^T g^{(x) n}` computed slot by slot; products stay in slot order.
pub fn apply_bra_slots(v: &[NCPoly], g: &PolyMatrix, n: usize) -> Vec<NCPoly> {
    let d = g.rows();
    let alpha = g.alphabet();
    let mut cur = v.to_vec();
    for m in 0..n {
        let stride = d.pow((n - 1 - m) as u32);
        let mut next = vec![NCPoly::zero(alpha); cur.len()];
        for (idx, x) in cur.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let a = (idx / stride) % d;
            let base = idx - a * stride;
            for (b, gab) in g.row(a) {
                next[base + b * stride].add_assign_ref(&(x * gab));
            }
        }
        cur = next;
    }
    cur
}

/// `g^{(x) n} w` computed slot by slot from the last slot inward.
pub fn apply_ket_slots(g: &PolyMatrix, w: &[NCPoly], n: usize) -> Vec<NCPoly> {
    let d = g.rows();
    let alpha = g.alphabet();
    let mut cur = w.to_vec();
    for m in (0..n).rev() {
        let stride = d.pow((n - 1 - m) as u32);
        let mut next = vec![NCPoly::zero(alpha); cur.len()];
        for (idx, out) in next.iter_mut().enumerate() {
            let a = (idx / stride) % d;
            let base = idx - a * stride;
            for (b, gab) in g.row(a) {
                let x = &cur[base + b * stride];
                if !x.is_zero() {
                    out.add_assign_ref(&(gab * x));
                }
            }
        }
        cur = next;
    }
    cur
}

/// Basis vector of a tensor multi-index.
pub fn basis_vector(alpha: &Arc<Alphabet>, n_states: usize, tuple: &[usize]) -> Vec<NCPoly> {
    let mut v = vec![NCPoly::zero(alpha); n_states.pow(tuple.len() as u32)];
    v[tensor_flat(n_states, tuple)] = NCPoly::one(alpha);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::{rat, Sector};
    use crate::slnq::gauss::{gauss_element, GroupElement, QSymbols, SymbolConfig};
    use crate::slnq::wedge::{bra_times, q_antisymmetrize, times_ket};

    fn empty() -> Arc<Alphabet> {
        Alphabet::builder().generator("z", Sector::Abstract, false).build().unwrap()
    }

    #[test]
    fn sl2_raising_coproduct() {
        let a = empty();
        let root = RootData::new(2);
        let d = coproduct_power(&a, &root, CoproductSpec::Raise(1), 2);
        // T (x) q^{-2H} + I (x) T; q^{-2H} = diag(q^-1, q)
        let q = |k| NCPoly::constant(&a, ScalarQ::q_pow(k));
        let expect = [((0, 2), q(-1)), ((1, 3), q(1)), ((0, 1), q(0)), ((2, 3), q(0))];
        assert_eq!(d.nonzero_count(), 4);
        for ((i, j), v) in expect {
            assert_eq!(d.get(i, j), v);
        }
        let c = d.classical_limit();
        let e = coproduct_power(&a, &root, CoproductSpec::Raise(1), 2).classical_limit();
        assert_eq!(c, e);
        assert_eq!(c.get(0, 2), NCPoly::one(&a.classical()));
    }

    #[test]
    fn generators_preserve_q_wedges() {
        let a = empty();
        for n_states in 2..=4 {
            let root = RootData::new(n_states);
            for level in 1..=n_states.min(3) {
                let w = q_antisymmetrize(n_states, level);
                for i in 1..n_states {
                    for spec in [CoproductSpec::Raise(i), CoproductSpec::Lower(i), CoproductSpec::Cartan(i)] {
                        let op = coproduct_power(&a, &root, spec, level);
                        assert!(w.induced(&op).is_ok(), "ket N={n_states} n={level} {spec:?}");
                        assert!(w.induced_bra(&op).is_ok(), "bra N={n_states} n={level} {spec:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn slot_factored_evolution_matches_q_exponentials() {
        for n_states in 2..=3 {
            let sym = QSymbols::new(SymbolConfig { gauss: false, ..SymbolConfig::new(n_states) });
            let map: Vec<usize> = (1..n_states).collect();
            for level in 1..=3 {
                for (side, times) in [(EvolutionSide::Upper, &sym.xi[0]), (EvolutionSide::Lower, &sym.xibar[0])] {
                    let spec = CoproductSpec::Evolution { times, index_map: &map, side };
                    let fact = coproduct_power(&sym.alphabet, &sym.root, spec, level);
                    let direct =
                        evolution_coproduct_direct(&sym.alphabet, &sym.root, times, &map, side, level).unwrap();
                    assert_eq!(fact, direct, "N={n_states} n={level} {side:?}");
                }
            }
        }
    }

    #[test]
    fn two_slot_upper_evolution_splits_into_left_and_right_parts() {
        let sym = QSymbols::new(SymbolConfig { gauss: false, ..SymbolConfig::new(3) });
        let (a, root) = (&sym.alphabet, &sym.root);
        let map = [1, 2];
        let times = &sym.xi[0];
        let whole = coproduct_power(
            a,
            root,
            CoproductSpec::Evolution { times, index_map: &map, side: EvolutionSide::Upper },
            2,
        );
        let left = evolution_slot_factor(a, root, times, &map, EvolutionSide::Upper, 1, 2);
        let single = coproduct_power(
            a,
            root,
            CoproductSpec::Evolution { times, index_map: &map, side: EvolutionSide::Upper },
            1,
        );
        let right = PolyMatrix::identity(a, 3).kron(&single);
        assert_eq!(whole, left.mul(&right));
    }

    #[test]
    fn sl2_two_slot_evolution_expands() {
        let sym = QSymbols::new(SymbolConfig { gauss: false, ..SymbolConfig::new(2) });
        let (a, root) = (&sym.alphabet, &sym.root);
        let xi = sym.var(sym.xi[0][0]);
        let u = coproduct_power(
            a,
            root,
            CoproductSpec::Evolution { times: &sym.xi[0], index_map: &[1], side: EvolutionSide::Upper },
            2,
        );
        let id = PolyMatrix::identity(a, 4);
        let f1 = id.add(
            &coproduct_power(a, root, CoproductSpec::Raise(1), 1)
                .kron(&PolyMatrix::from_scalars(a, &q_cartan(root, 1, -1)))
                .left_mul_entries(&xi),
        );
        let f2 = id.add(
            &PolyMatrix::identity(a, 2)
                .kron(&coproduct_power(a, root, CoproductSpec::Raise(1), 1))
                .left_mul_entries(&xi),
        );
        assert_eq!(u, f1.mul(&f2));
        // (0,3) entry: xi^2 q^{-1}
        assert_eq!(u.get(0, 3), xi.pow(2).scale(&ScalarQ::q_pow(-1)));
    }

    #[test]
    fn tensor_action_matches_slot_application() {
        let sym = QSymbols::new(SymbolConfig::new(2));
        let GroupElement::Gauss(g) = gauss_element(&sym) else { unreachable!() };
        let a = &sym.alphabet;
        let full = tensor_action(&g.matrix, 2);
        let e = full.get(tensor_flat(2, &[0, 1]), tensor_flat(2, &[0, 1]));
        assert_eq!(e, &g.matrix.get(0, 0) * &g.matrix.get(1, 1));
        let v: Vec<NCPoly> = (0..4).map(|i| NCPoly::from_rational(a, rat(i + 1, 1))).collect();
        assert_eq!(apply_bra_slots(&v, &g.matrix, 2), bra_times(&v, &full));
        assert_eq!(apply_ket_slots(&g.matrix, &v, 2), times_ket(&full, &v));
        let id = tensor_action(&PolyMatrix::identity(a, 3), 2);
        assert_eq!(id, PolyMatrix::identity(a, 9));
    }

    #[test]
    fn gauss_tensor_powers_preserve_q_wedges() {
        for n_states in 2..=3 {
            let sym = QSymbols::new(SymbolConfig::new(n_states));
            let GroupElement::Gauss(g) = gauss_element(&sym) else { unreachable!() };
            for level in 2..=n_states {
                let w = q_antisymmetrize(n_states, level);
                let full = tensor_action(&g.matrix, level);
                assert!(w.induced(&full).is_ok(), "ket N={n_states} n={level}");
                assert!(w.induced_bra(&full).is_ok(), "bra N={n_states} n={level}");
            }
        }
    }
}
