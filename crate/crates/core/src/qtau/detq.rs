use num::BigRational;

use super::setup::{QSetup, QTauValue};
use super::QTauError;
use crate::ncalg::{GenId, NCPoly, PolyMatrix, ScalarQ};
use crate::par;
use crate::slnq::{
    apply_bra_slots, basis_vector, bra_times, coproduct_power, inversions, permutations, q_antisymmetrize, times_ket,
    CoproductSpec, EvolutionSide,
};

/// Twist exponents of factor `m` (0-based): `(xi_s, -sum_{l>m} 2h(s, j_l))` and `(xibar_s, sum_{l<m} 2h(s, jbar_l))`.
pub fn factor_twists(setup: &QSetup, j: &[usize], jbar: &[usize], m: usize) -> Vec<(GenId, i32)> {
    let root = &setup.sym.root;
    let mut out = Vec::new();
    for s in 1..=setup.rank() {
        let up: i32 = j[m + 1..].iter().map(|&l| -root.two_h(s, l)).sum();
        let down: i32 = jbar[..m].iter().map(|&l| root.two_h(s, l)).sum();
        if up != 0 {
            out.push((setup.xi(s).expect("time index"), up));
        }
        if down != 0 {
            out.push((setup.xibar(s).expect("time index"), down));
        }
    }
    out
}

fn check_tuple(setup: &QSetup, j: &[usize], jbar: &[usize]) -> Result<(), QTauError> {
    let n = setup.n_states();
    if j.len() != jbar.len() {
        return Err(QTauError::LabelLength { upper: j.len(), lower: jbar.len() });
    }
    if let Some(&bad) = j.iter().chain(jbar).find(|&&l| l >= n) {
        return Err(QTauError::InvalidLabel { label: bad, n });
    }
    Ok(())
}

/// The twisted factors `tau_1^{j_m jbar_m}(q^{...} xi, q^{...} xibar)` in slot order.
pub fn product_factors(setup: &QSetup, j: &[usize], jbar: &[usize]) -> Result<Vec<NCPoly>, QTauError> {
    check_tuple(setup, j, jbar)?;
    Ok((0..j.len()).map(|m| setup.shifted.get(j[m], jbar[m]).twist_many(&factor_twists(setup, j, jbar, m))).collect())
}

/// Ordered product of the twisted one-particle entries, left to right in the slot index.
pub fn qtau_product_entry(setup: &QSetup, j: &[usize], jbar: &[usize]) -> Result<QTauValue, QTauError> {
    let factors = product_factors(setup, j, jbar)?;
    let value = factors.iter().fold(NCPoly::one(setup.alpha()), |acc, f| &acc * f);
    Ok(QTauValue { value, n_states: setup.n_states(), level: j.len(), labels: Some((j.to_vec(), jbar.to_vec())) })
}

fn check_level(setup: &QSetup, n: usize) -> Result<(), QTauError> {
    if n == 0 || n > setup.n_states() {
        return Err(QTauError::InvalidLevel { level: n, n: setup.n_states() });
    }
    Ok(())
}

/// One term of the permutation-pair expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct DetqTerm {
    pub upper: Vec<usize>,
    pub lower: Vec<usize>,
    /// `(-q)^{inv P + inv P'}`.
    pub weight: ScalarQ,
    pub value: NCPoly,
}

/// Weighted product entries over all permutation pairs of `0..n`.
pub fn qdet_terms(setup: &QSetup, n: usize) -> Result<Vec<DetqTerm>, QTauError> {
    check_level(setup, n)?;
    let perms = permutations(n);
    let pairs: Vec<(Vec<usize>, Vec<usize>)> =
        perms.iter().flat_map(|p| perms.iter().map(move |pb| (p.clone(), pb.clone()))).collect();
    par::map(&pairs, |(p, pb)| {
        let weight = ScalarQ::minus_q_pow(inversions(p) + inversions(pb));
        let value = qtau_product_entry(setup, p, pb)?.value.scale(&weight);
        Ok(DetqTerm { upper: p.clone(), lower: pb.clone(), weight, value })
    })
    .into_iter()
    .collect()
}

/// `sum_{P, P'} (-q)^{inv P + inv P'} prod_m tau_1^{P(m) P'(m)}(twisted)`.
pub fn qtau_qdet(setup: &QSetup, n: usize) -> Result<QTauValue, QTauError> {
    let mut value = NCPoly::zero(setup.alpha());
    for t in qdet_terms(setup, n)? {
        value.add_assign_ref(&t.value);
    }
    Ok(QTauValue { value, n_states: setup.n_states(), level: n, labels: None })
}

/// `sum_{P, P'} (-q)^{inv P + inv P'} prod_a A_{P(a) P'(a)}`, left to right in `a`.
pub fn qdet_matrix(a: &PolyMatrix) -> NCPoly {
    let n = a.rows();
    let alpha = a.alphabet();
    let perms = permutations(n);
    let mut acc = NCPoly::zero(alpha);
    for p in &perms {
        for pb in &perms {
            let mut prod = NCPoly::constant(alpha, ScalarQ::minus_q_pow(inversions(p) + inversions(pb)));
            for k in 0..n {
                match a.get_ref(p[k], pb[k]) {
                    Some(x) => prod = &prod * x,
                    None => {
                        prod = NCPoly::zero(alpha);
                        break;
                    }
                }
            }
            acc.add_assign_ref(&prod);
        }
    }
    acc
}

/// Coproducts of both evolutions on `n` slots.
pub struct SlotEvolutions {
    pub upper: PolyMatrix,
    pub lower: PolyMatrix,
}

pub fn slot_evolutions(setup: &QSetup, n: usize) -> SlotEvolutions {
    let a = setup.alpha();
    let root = &setup.sym.root;
    let index_map: Vec<usize> = (1..=setup.rank()).collect();
    let upper = coproduct_power(
        a,
        root,
        CoproductSpec::Evolution {
            times: &setup.sym.xi[setup.copy],
            index_map: &index_map,
            side: EvolutionSide::Upper,
        },
        n,
    );
    let lower = coproduct_power(
        a,
        root,
        CoproductSpec::Evolution {
            times: &setup.sym.xibar[setup.copy],
            index_map: &index_map,
            side: EvolutionSide::Lower,
        },
        n,
    );
    SlotEvolutions { upper, lower }
}

fn dot(a: &[NCPoly], b: &[NCPoly]) -> NCPoly {
    let alpha = a[0].alphabet();
    let mut acc = NCPoly::zero(alpha);
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc.add_assign_ref(&(x * y));
        }
    }
    acc
}

/// Row `<j| Delta(U) g^{(x) n} Delta(Ubar)` of the slot-ordered tensor product.
pub fn direct_row(setup: &QSetup, ev: &SlotEvolutions, j: &[usize]) -> Vec<NCPoly> {
    let n = j.len();
    let e = basis_vector(setup.alpha(), setup.n_states(), j);
    let bra = apply_bra_slots(&bra_times(&e, &ev.upper), &setup.g, n);
    bra_times(&bra, &ev.lower)
}

/// q-antisymmetrized vacuum bra and ket paired against `Delta(U) g^{(x) n} Delta(Ubar)`.
pub fn qtau_direct(setup: &QSetup, n: usize) -> Result<QTauValue, QTauError> {
    check_level(setup, n)?;
    let a = setup.alpha();
    let wedge = q_antisymmetrize(setup.n_states(), n);
    let mut vac = vec![NCPoly::zero(a); wedge.dim()];
    vac[0] = NCPoly::one(a);
    let v = wedge.embed(a, &vac);
    let ev = slot_evolutions(setup, n);
    let bra = apply_bra_slots(&bra_times(&v, &ev.upper), &setup.g, n);
    let ket = times_ket(&ev.lower, &v);
    // split the contraction over chunks of the tensor index
    let chunk = setup.n_states();
    let idx: Vec<usize> = (0..bra.len()).step_by(chunk).collect();
    let parts = par::map(&idx, |&start| {
        let end = (start + chunk).min(bra.len());
        dot(&bra[start..end], &ket[start..end])
    });
    let mut value = NCPoly::zero(a);
    for p in parts {
        value.add_assign_ref(&p);
    }
    Ok(QTauValue { value, n_states: setup.n_states(), level: n, labels: None })
}

/// `c` with `a = c b`, if one exists.
pub fn proportionality(a: &NCPoly, b: &NCPoly) -> Option<ScalarQ> {
    let Some((w, cb)) = b.terms().next() else {
        return a.is_zero().then(ScalarQ::one);
    };
    let c = a.coefficient(w).div_exact(cb)?;
    (*a == b.scale(&c)).then_some(c)
}

/// Measured ratio `qtau_direct / qtau_qdet`.
#[derive(Clone, Debug, PartialEq)]
pub struct Normalization {
    pub level: usize,
    /// Frozen at the trivial point: all times and off-diagonal Gauss coordinates zero.
    pub factor: Option<ScalarQ>,
    /// Ratio on further specializations, including the fully symbolic one.
    pub specializations: Vec<(String, Option<ScalarQ>)>,
}

impl Normalization {
    /// One factor fits every specialization.
    pub fn consistent(&self) -> bool {
        self.factor.is_some() && self.specializations.iter().all(|(_, c)| c == &self.factor)
    }

    pub fn at_one(&self) -> Option<BigRational> {
        self.factor.as_ref().map(|c| c.eval_at_one())
    }
}

fn time_gens(setup: &QSetup) -> Vec<GenId> {
    setup.sym.xi[setup.copy].iter().chain(&setup.sym.xibar[setup.copy]).copied().collect()
}

/// Computes both sides once, fixes `c` at the trivial point and tests it on other specializations.
pub fn measure_normalization(setup: &QSetup, n: usize) -> Result<(Normalization, QTauValue, QTauValue), QTauError> {
    let direct = qtau_direct(setup, n)?;
    let qdet = qtau_qdet(setup, n)?;
    let times = time_gens(setup);
    let offdiag: Vec<GenId> = setup.sym.theta.iter().chain(&setup.sym.chi).copied().collect();
    let trivial: Vec<GenId> = times.iter().chain(&offdiag).copied().collect();
    let ratio = |kill: &[GenId]| proportionality(&direct.value.kill(kill), &qdet.value.kill(kill));
    let factor = ratio(&trivial);
    let mut specializations = vec![
        ("times = 0".to_string(), ratio(&times)),
        ("theta = chi = 0".to_string(), ratio(&offdiag)),
        ("xibar = 0".to_string(), ratio(&setup.sym.xibar[setup.copy])),
        ("chi = 0".to_string(), ratio(&setup.sym.chi)),
    ];
    specializations.push(("symbolic".to_string(), proportionality(&direct.value, &qdet.value)));
    Ok((Normalization { level: n, factor, specializations }, direct, qdet))
}
