use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::baker::{q_baker_functions, q_baker_lines, q_bilinear_sides, wedge_levels, WedgeLevels};
use super::compact::{apply_script, tau2_check, tau2_compact, ScriptOp};
use super::detq::{
    direct_row, measure_normalization, proportionality, qdet_terms, qtau_direct, qtau_product_entry, qtau_qdet,
    slot_evolutions,
};
use super::diff::{apply_pair_chain, d_op, DifferenceOp, TensorPair};
use super::intertwiner::{gamma_q, gamma_q_commutator, residual_terms, Handed, Placement, SlotOrder};
use super::setup::{qtau1, qtau1_difference, qtau1_sum, QSetup};
use super::QTauError;
use crate::check::CheckOutcome;
use crate::evolve::evolution_a;
use crate::ncalg::{rat, NCPoly, PolyMatrix, ScalarQ};
use crate::slnq::{EvolutionSide, QSymbols, SymbolConfig};
use crate::tau::{baker_functions, fermion, tau1_shift, tau_det, tau_direct, Charge, ClassicalSetup, WedgeBases};

/// Names of every quantum check, in report order.
pub const CHECKS: &[&str] = &["tau1", "tau1-diff", "detq", "tau2", "dd-comm", "gamma", "baker", "classical-limit"];

/// Random tensor pairs per operator relation in `dd-comm`.
pub const RANDOM_PAIRS: usize = 50;

/// Inputs of one quantum check run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumCase {
    pub n: usize,
    /// Levels for `detq` and `classical-limit`; empty means `2..=N`.
    pub levels: Vec<usize>,
    /// Seed of the random polynomials in `dd-comm`.
    pub seed: u64,
}

impl QuantumCase {
    pub fn new(n: usize) -> Self {
        QuantumCase { n, levels: Vec::new(), seed: 0 }
    }

    pub fn validate(&self) -> Result<(), QTauError> {
        if self.n < 2 {
            return Err(QTauError::InvalidLevel { level: 0, n: self.n });
        }
        if let Some(&level) = self.levels.iter().find(|&&l| l == 0 || l > self.n) {
            return Err(QTauError::InvalidLevel { level, n: self.n });
        }
        Ok(())
    }

    fn setup(&self) -> QSetup {
        QSetup::new(&QSymbols::new(SymbolConfig::new(self.n)), 0)
    }

    fn det_levels(&self) -> Vec<usize> {
        if self.levels.is_empty() {
            (2..=self.n).collect()
        } else {
            self.levels.iter().copied().filter(|&l| l >= 2).collect()
        }
    }
}

/// Runs the named check on `case`.
pub fn run_check(name: &str, case: &QuantumCase) -> Result<CheckOutcome, QTauError> {
    case.validate()?;
    match name {
        "tau1" => tau1_check(case),
        "tau1-diff" => tau1_diff_check(case),
        "detq" => detq_check(case),
        "tau2" => tau2_full_check(case),
        "dd-comm" => dd_comm_check(case),
        "gamma" => gamma_check(case),
        "baker" => q_baker_check(case),
        "classical-limit" => classical_limit_check(case),
        other => Err(QTauError::UnknownCheck(other.to_string())),
    }
}

/// Shifted entries of `U g Ubar` against the explicit sums with `s_m^{-1}`, `sbar^{-1}`.
pub fn tau1_check(case: &QuantumCase) -> Result<CheckOutcome, QTauError> {
    let s = case.setup();
    let mut out = CheckOutcome::new();
    for m in 0..case.n {
        for mb in 0..case.n {
            out.expect_eq(
                || format!("({m},{mb}) entry vs explicit sum"),
                &qtau1(&s, m, mb)?.value,
                &qtau1_sum(&s, m, mb)?,
            );
        }
    }
    let last = case.n - 1;
    out.expect_eq(|| "bottom-right entry is g".into(), &qtau1(&s, last, last)?.value, &s.g.get(last, last));
    Ok(out)
}

/// Difference form `s_{m-1}^{-1} (D_m Dbar_mbar tau_1) sbar_{mbar-1}^{-1}` against the shifted entries.
pub fn tau1_diff_check(case: &QuantumCase) -> Result<CheckOutcome, QTauError> {
    let s = case.setup();
    let t = s.tau1();
    let mut out = CheckOutcome::new();
    let mut off = Vec::new();
    for m in 0..case.n {
        for mb in 0..case.n {
            let exact = qtau1(&s, m, mb)?.value;
            let diff = qtau1_difference(&s, &t, m, mb)?;
            if diff != exact {
                off.push(format!(
                    "({m},{mb}): {}",
                    proportionality(&diff, &exact).map_or("none".into(), |c| c.to_string())
                ));
            }
            out.expect_eq(|| format!("({m},{mb}) difference form"), &diff, &exact);
        }
    }
    if !off.is_empty() {
        out.note(format!("tau1-diff: difference form / shifted entry = {}", off.join(", ")));
    }
    Ok(out)
}

/// Normalization of the direct pairing against the permutation-pair expansion, product entries,
/// degree bound and the SL_q(2) top level.
pub fn detq_check(case: &QuantumCase) -> Result<CheckOutcome, QTauError> {
    let s = case.setup();
    let w = wedge_levels(&s)?;
    let mut out = CheckOutcome::new();
    for n in case.det_levels() {
        let (norm, direct, qdet) = measure_normalization(&s, n)?;
        if !norm.consistent() {
            out.fail(format!(
                "level {n}: no single factor relates direct pairing and expansion: {:?}",
                norm.specializations
            ));
        } else if let Some(c) = &norm.factor {
            out.expect_eq(|| format!("level {n}: direct vs c * expansion"), &direct.value, &qdet.value.scale(c));
            out.note(format!("detq: level {n} factor c = {c}, c at q = 1 is {}", c.eval_at_one()));
        }
        out.expect_eq(
            || format!("level {n}: direct vs [n]_q^2! tau_n on the q-wedge"),
            &direct.value,
            &w.tau(n).scale(&ScalarQ::q_factorial(n as u32)),
        );
        let ev = slot_evolutions(&s, n);
        let vac: Vec<usize> = (0..n).collect();
        let row = direct_row(&s, &ev, &vac);
        let width = s.n_states();
        for (pos, jbar) in [vac.clone(), vac.iter().rev().copied().collect()].into_iter().enumerate() {
            let idx = jbar.iter().fold(0, |acc, &x| acc * width + x);
            out.expect_eq(
                || format!("level {n}: product entry {pos} vs direct matrix element"),
                &row[idx],
                &qtau_product_entry(&s, &vac, &jbar)?.value,
            );
        }
        let mut max_degree = 0;
        let tau = w.tau(n);
        for &x in s.sym.xi[0].iter().chain(&s.sym.xibar[0]) {
            let deg = tau.degree_in(x).max(0) as usize;
            max_degree = max_degree.max(deg);
            if deg > n {
                out.fail(format!("level {n}: degree {deg} in {}", s.alpha().name(x)));
            }
        }
        out.note(format!("detq: level {n} highest degree in a single time is {max_degree}"));
        if n == case.n && case.n == 2 {
            for &x in s.sym.xi[0].iter().chain(&s.sym.xibar[0]) {
                if qdet.value.contains_generator(x) {
                    out.fail(format!("SL_q(2) top level depends on {}", s.alpha().name(x)));
                }
            }
        }
    }
    Ok(out)
}

/// Compact second tau-function: termwise against the expansion, twist table, weights and `q = 1`.
pub fn tau2_full_check(case: &QuantumCase) -> Result<CheckOutcome, QTauError> {
    let s = case.setup();
    let mut out = tau2_check(&s)?;
    let mq = -ScalarQ::q_pow(1);
    let weights: Vec<ScalarQ> = qdet_terms(&s, 2)?.into_iter().map(|t| t.weight).collect();
    if weights != [ScalarQ::one(), mq.clone(), mq, ScalarQ::q_pow(2)] {
        out.fail(format!("expansion weights {:?}", weights.iter().map(ToString::to_string).collect::<Vec<_>>()));
    }
    let t = s.tau1();
    let p = TensorPair::from_product(&t, &t);
    for (a, b, label) in [
        (ScriptOp::Left, ScriptOp::Right, "DL DR = q DR DL"),
        (ScriptOp::BarLeft, ScriptOp::BarRight, "DbarL DbarR = q DbarR DbarL"),
    ] {
        let ab = apply_script(&s, a, &apply_script(&s, b, &p)?)?;
        let ba = apply_script(&s, b, &apply_script(&s, a, &p)?)?;
        if !ab.sub(&ba.scale(&ScalarQ::q_pow(1))).is_empty() {
            out.fail(format!("{label} on tau_1 (x) tau_1"));
        }
    }
    Ok(out)
}

fn random_poly(s: &QSetup, rng: &mut ChaCha8Rng) -> NCPoly {
    let a = s.alpha();
    let gauss: Vec<_> = s.sym.theta.iter().chain(&s.sym.lambda).chain(&s.sym.chi).copied().collect();
    let mut acc = NCPoly::zero(a);
    for _ in 0..rng.gen_range(1..=4) {
        let mut mono = NCPoly::from_rational(
            a,
            rat(rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1..=3)),
        );
        for &x in &s.sym.xi[0] {
            mono = &mono * &NCPoly::gen_pow(a, x, rng.gen_range(0..=2));
        }
        if !gauss.is_empty() && rng.gen_bool(0.5) {
            mono = &mono * &NCPoly::gen(a, gauss[rng.gen_range(0..gauss.len())]);
        }
        for &x in s.sym.xibar[0].iter().rev() {
            mono = &mono * &NCPoly::gen_pow(a, x, rng.gen_range(0..=2));
        }
        acc.add_assign_ref(&mono);
    }
    acc
}

fn q_commutes(
    s: &QSetup,
    first: &[DifferenceOp],
    second: &[DifferenceOp],
    c: &ScalarQ,
    p: &TensorPair,
) -> Result<bool, QTauError> {
    let ab = apply_pair_chain(s, first, p)?;
    let ba = apply_pair_chain(s, second, p)?;
    Ok(ab.sub(&ba.scale(c)).is_empty())
}

/// Operator relations of the difference operators on seeded random tensor pairs.
pub fn dd_comm_check(case: &QuantumCase) -> Result<CheckOutcome, QTauError> {
    use DifferenceOp::*;
    let s = case.setup();
    let mut rng = ChaCha8Rng::seed_from_u64(case.seed);
    let pairs: Vec<TensorPair> = (0..RANDOM_PAIRS)
        .map(|_| TensorPair::from_product(&random_poly(&s, &mut rng), &random_poly(&s, &mut rng)))
        .collect();
    let mut out = CheckOutcome::new();
    let r = s.rank();
    let mut displayed_exponent = Vec::new();
    for i in 1..=r {
        for j in 1..=r {
            let a_ij = s.sym.root.cartan(i, j);
            let c = ScalarQ::q_pow(a_ij);
            let mut displayed_fits = Some(-a_ij);
            for (k, p) in pairs.iter().enumerate() {
                if !q_commutes(&s, &[DdLeft(i), DdRight(j)], &[DdRight(j), DdLeft(i)], &c, p)? {
                    out.fail(format!("DD^L_{i} DD^R_{j} = q^{a_ij} DD^R_{j} DD^L_{i} fails on random pair {k}"));
                }
                if !q_commutes(&s, &[DdBarLeft(i), DdBarRight(j)], &[DdBarRight(j), DdBarLeft(i)], &c, p)? {
                    out.fail(format!("barred DD^L_{i} DD^R_{j} = q^{a_ij} DD^R_{j} DD^L_{i} fails on random pair {k}"));
                }
                if let Some(e) = displayed_fits {
                    if !q_commutes(
                        &s,
                        &[DdLeft(i), DdRightDisplayed(j)],
                        &[DdRightDisplayed(j), DdLeft(i)],
                        &ScalarQ::q_pow(e),
                        p,
                    )? {
                        displayed_fits = None;
                    }
                }
            }
            displayed_exponent
                .push(format!("({i},{j}): {}", displayed_fits.map_or("none".into(), |e| format!("q^{e}"))));
        }
    }
    for (k, p) in pairs.iter().enumerate() {
        for (a, b, label) in [
            (ScriptOp::Left, ScriptOp::Right, "DL DR = q DR DL"),
            (ScriptOp::BarLeft, ScriptOp::BarRight, "DbarL DbarR = q DbarR DbarL"),
        ] {
            let ab = apply_script(&s, a, &apply_script(&s, b, p)?)?;
            let ba = apply_script(&s, b, &apply_script(&s, a, p)?)?;
            if !ab.sub(&ba.scale(&ScalarQ::q_pow(1))).is_empty() {
                out.fail(format!("{label} fails on random pair {k}"));
            }
        }
    }
    out.note(format!("dd-comm: {RANDOM_PAIRS} random pairs per relation, seed {}", case.seed));
    out.note(format!(
        "dd-comm: with the right operator twisted by prod_j M_j^(-a_ij) the exchange factor is {}",
        displayed_exponent.join(", ")
    ));
    Ok(out)
}

/// Quantum intertwiners against `g (x) g` at every adjacent level pair.
///
/// Gated on `Phi^{+,L} (x) Phi^{-,R}` with the annihilation factor's entries multiplied first.
pub fn gamma_check(case: &QuantumCase) -> Result<CheckOutcome, QTauError> {
    let s = case.setup();
    let mut out = CheckOutcome::new();
    let mut others: Vec<(Placement, SlotOrder, bool)> = Vec::new();
    for placement in Placement::all() {
        for order in [SlotOrder::AnnihilationFirst, SlotOrder::CreationFirst] {
            let gated = placement == Placement::DISPLAYED && order == SlotOrder::AnnihilationFirst;
            let mut holds = true;
            for n in 0..case.n {
                for m in 1..=case.n {
                    let c = gamma_q_commutator(&s.g, n, m, placement, order)?;
                    if !c.is_zero() {
                        holds = false;
                        if gated {
                            out.fail(format!(
                                "{} levels ({n},{m}): {} residual terms",
                                placement.label(),
                                residual_terms(&c)
                            ));
                        }
                    }
                }
            }
            if !gated {
                others.push((placement, order, holds));
            }
        }
    }
    for (p, o, holds) in others {
        out.note(format!(
            "gamma: {} with {o:?} products {}",
            p.label(),
            if holds { "commutes at every level pair" } else { "does not commute" }
        ));
    }
    Ok(out)
}

/// Displayed quantum Baker-Akhiezer relations and the quantum bilinear identity.
pub fn q_baker_check(case: &QuantumCase) -> Result<CheckOutcome, QTauError> {
    let mut cfg = SymbolConfig::new(case.n);
    cfg.time_copies = 2;
    let sym = QSymbols::new(cfg);
    let s0 = QSetup::new(&sym, 0);
    let s1 = QSetup::new(&sym, 1);
    let w0 = wedge_levels(&s0)?;
    let w1 = wedge_levels(&s1)?;
    let mut out = CheckOutcome::new();
    for n in 1..=case.n {
        let tau = w0.tau(n);
        for handed in [Handed::Left, Handed::Right] {
            let ba = q_baker_functions(&s0, &w0, n, handed);
            for line in q_baker_lines(&s0, &ba, &tau, n)? {
                let creation = line.label.starts_with("Psi(+");
                // the displayed pairing uses left creation and right annihilation
                let gated = (creation && handed == Handed::Left) || (!creation && handed == Handed::Right);
                let r = line.residual();
                if r.is_zero() {
                    if gated {
                        out.note(format!("baker: {handed:?} `{}` holds", line.label));
                    }
                    continue;
                }
                let fit =
                    line.fit_monomials().map(|c| c.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "));
                if gated {
                    out.expect_zero(|| format!("{handed:?} {}", line.label), &r);
                }
                out.note(format!(
                    "baker: {handed:?} `{}` fails; {}",
                    line.label,
                    fit.map_or("no monomial coefficients fit".into(), |f| format!("holds with coefficients ({f})"))
                ));
            }
        }
    }
    let mirror = Placement { creation: Handed::Right, annihilation: Handed::Left };
    let mut checked = Vec::new();
    for k in 0..case.n {
        for l in 1..=case.n {
            checked.push((k, l));
            let (lhs, rhs) = q_bilinear_sides(
                &s0,
                &s1,
                &w0,
                &w1,
                k,
                l,
                Placement::DISPLAYED,
                Placement::DISPLAYED,
                SlotOrder::AnnihilationFirst,
            );
            out.expect_eq(|| format!("bilinear identity k={k} l={l}"), &lhs, &rhs);
            if k < l && l >= 2 {
                if let Some(x) = s1.xi(l - 1) {
                    out.expect_eq(
                        || format!("bilinear identity k={k} l={l} at xi'_{} = 0", l - 1),
                        &lhs.kill(&[x]),
                        &rhs.kill(&[x]),
                    );
                }
            }
        }
    }
    out.note(format!(
        "baker: quantum bilinear identity checked at (k,l) = {checked:?}, with xi'_(l-1) = 0 reductions for k < l"
    ));
    let mut combos = Vec::new();
    for order in [SlotOrder::CreationFirst, SlotOrder::AnnihilationFirst] {
        for (ub, bb) in [(mirror, mirror), (Placement::DISPLAYED, mirror), (mirror, Placement::DISPLAYED)] {
            let holds = checked.iter().all(|&(k, l)| {
                let (a, b) = q_bilinear_sides(&s0, &s1, &w0, &w1, k, l, ub, bb, order);
                a == b
            });
            combos.push(format!(
                "[{} | {} {order:?}: {}]",
                ub.label(),
                bb.label(),
                if holds { "holds" } else { "fails" }
            ));
        }
    }
    out.note(format!("baker: other placements {}", combos.join(" ")));
    Ok(out)
}

/// Every quantum construction at `q = 1` against the classical engine on the commutative shadow alphabet.
pub fn classical_limit_check(case: &QuantumCase) -> Result<CheckOutcome, QTauError> {
    let s = case.setup();
    let n = case.n;
    let ca = s.alpha().classical();
    let cl = ClassicalSetup::from_parts(
        evolution_a(&ca, &s.sym.xi[0], n, EvolutionSide::Upper),
        s.g.classical_limit(),
        evolution_a(&ca, &s.sym.xibar[0], n, EvolutionSide::Lower),
    );
    let bases = WedgeBases::new(n);
    let mut out = CheckOutcome::new();
    for m in 0..n {
        for mb in 0..n {
            out.expect_eq(
                || format!("tau1 ({m},{mb})"),
                &qtau1(&s, m, mb)?.value.classical_limit(),
                &tau1_shift(&cl, m, mb),
            );
        }
    }
    let t = s.tau1();
    let t_cl = t.classical_limit();
    for i in 1..n {
        let x = s.xi(i).expect("time index");
        out.expect_eq(|| format!("D_{i} vs d/dxi_{i}"), &d_op(&s, i, &t)?.classical_limit(), &t_cl.derivative(x)?);
    }
    let factorial = |k: usize| BigRational::from_integer((1..=k as u64).product::<u64>().into());
    let levels = if case.levels.is_empty() { (1..=n).collect() } else { case.levels.clone() };
    for &level in &levels {
        let k = factorial(level);
        out.expect_eq(
            || format!("direct pairing level {level} vs n! tau_direct"),
            &qtau_direct(&s, level)?.value.classical_limit(),
            &tau_direct(&cl, level).scale_rational(&k),
        );
        out.expect_eq(
            || format!("expansion level {level} vs n! tau_det"),
            &qtau_qdet(&s, level)?.value.classical_limit(),
            &tau_det(&cl, level).scale_rational(&k),
        );
    }
    out.expect_eq(
        || "compact tau2 vs 2 tau_det".into(),
        &tau2_compact(&s)?.value.classical_limit(),
        &tau_det(&cl, 2).scale_rational(&rat(2, 1)),
    );
    let w = wedge_levels(&s)?;
    baker_limits(&s, &cl, &bases, &w, &mut out);
    for level in 0..n {
        for m in 1..=n {
            let g_cl = classical_gamma(&ca, &bases, level, m);
            for p in Placement::all() {
                if gamma_q(s.alpha(), &bases, level, m, p).classical_limit() != g_cl {
                    out.fail(format!("{} levels ({level},{m}) at q = 1 differs from the classical Gamma", p.label()));
                }
            }
        }
    }
    Ok(out)
}

fn baker_limits(s: &QSetup, cl: &ClassicalSetup, bases: &WedgeBases, w: &WedgeLevels, out: &mut CheckOutcome) {
    let lim = |v: &[Option<NCPoly>]| v.iter().map(|x| x.as_ref().map(NCPoly::classical_limit)).collect::<Vec<_>>();
    for level in 0..=s.n_states() {
        let classical = baker_functions(cl, bases, level);
        for handed in [Handed::Left, Handed::Right] {
            let q = q_baker_functions(s, w, level, handed);
            let same = lim(&q.plus) == classical.plus
                && lim(&q.minus) == classical.minus
                && lim(&q.plus_bar) == classical.plus_bar
                && lim(&q.minus_bar) == classical.minus_bar;
            if !same {
                out.fail(format!(
                    "{handed:?} Baker-Akhiezer functions at level {level} differ from the classical ones at q = 1"
                ));
            }
        }
    }
}

fn classical_gamma(ca: &std::sync::Arc<crate::ncalg::Alphabet>, bases: &WedgeBases, n: usize, m: usize) -> PolyMatrix {
    let mut gamma = PolyMatrix::zero(ca, bases.dim(n + 1) * bases.dim(m - 1), bases.dim(n) * bases.dim(m));
    for i in 1..=bases.n_states {
        let p = fermion(ca, bases, i, Charge::Plus, n).matrix;
        let q = fermion(ca, bases, i, Charge::Minus, m).matrix;
        gamma = gamma.add(&p.kron(&q));
    }
    gamma
}
