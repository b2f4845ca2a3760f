use super::detq::{product_factors, qdet_terms};
use super::diff::{apply_pair, DifferenceOp, Factor, TensorPair};
use super::setup::QSetup;
use super::QTauError;
use crate::check::CheckOutcome;
use crate::ncalg::{GenId, NCPoly, ScalarQ};

/// One of the four terms of the second fundamental tau-function.
#[derive(Clone, Debug, PartialEq)]
pub struct Tau2Term {
    /// Upper labels `(j_1, j_2)`; `(1, 0)` when the left operator was used.
    pub upper: [usize; 2],
    pub lower: [usize; 2],
    pub weight: ScalarQ,
    /// The weighted tensor pair before multiplication.
    pub pair: TensorPair,
    pub value: NCPoly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tau2Compact {
    pub value: NCPoly,
    pub terms: Vec<Tau2Term>,
}

fn twist_factor(
    setup: &QSetup,
    p: &TensorPair,
    factor: Factor,
    shifts: &[(usize, bool, i32)],
) -> Result<TensorPair, QTauError> {
    p.map_factor(factor, |f| {
        Ok(shifts.iter().fold(
            f.clone(),
            |acc, &(i, bar, k)| if bar { setup.twist_bar(&acc, i, k) } else { setup.twist(&acc, i, k) },
        ))
    })
}

/// `M_1^- (x) Mbar_1^+ (DD_1^R - q DD_1^L)(DDbar_1^R - q DDbar_1^L) tau_1 (x) tau_1`, expanded termwise.
pub fn tau2_compact(setup: &QSetup) -> Result<Tau2Compact, QTauError> {
    let t = setup.tau1();
    let base = TensorPair::from_product(&t, &t);
    let mq = -ScalarQ::q_pow(1);
    let mut terms = Vec::new();
    let mut value = NCPoly::zero(setup.alpha());
    for upper_left in [false, true] {
        for lower_left in [false, true] {
            let barred = if lower_left { DifferenceOp::DdBarLeft(1) } else { DifferenceOp::DdBarRight(1) };
            let plain = if upper_left { DifferenceOp::DdLeft(1) } else { DifferenceOp::DdRight(1) };
            let mut p = apply_pair(setup, plain, &apply_pair(setup, barred, &base)?)?;
            p = twist_factor(setup, &p, Factor::First, &[(1, false, -1)])?;
            p = twist_factor(setup, &p, Factor::Second, &[(1, true, 1)])?;
            let mut weight = ScalarQ::one();
            if upper_left {
                weight = weight * mq.clone();
            }
            if lower_left {
                weight = weight * mq.clone();
            }
            let pair = p.scale(&weight);
            let v = pair.multiply();
            value.add_assign_ref(&v);
            let lab = |left: bool| if left { [1, 0] } else { [0, 1] };
            terms.push(Tau2Term { upper: lab(upper_left), lower: lab(lower_left), weight, pair, value: v });
        }
    }
    Ok(Tau2Compact { value, terms })
}

/// Operators of the first compact form: `(DL, DR, DbarL, DbarR)` for root 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScriptOp {
    Left,
    Right,
    BarLeft,
    BarRight,
}

/// `DL = M_1^- D_1 (x) I`, `DR = M_1^+ M_2^- (x) D_1`, `DbarL = Dbar_1 (x) Mbar_1^- Mbar_2^+`, `DbarR = I (x) Mbar_1^+ Dbar_1`.
pub fn apply_script(setup: &QSetup, op: ScriptOp, p: &TensorPair) -> Result<TensorPair, QTauError> {
    use super::diff::{d_op, dbar_op};
    match op {
        ScriptOp::Left => p.map_factor(Factor::First, |f| Ok(setup.twist(&d_op(setup, 1, f)?, 1, -1))),
        ScriptOp::Right => twist_factor(setup, p, Factor::First, &[(1, false, 1), (2, false, -1)])?
            .map_factor(Factor::Second, |f| d_op(setup, 1, f)),
        ScriptOp::BarLeft => p
            .map_factor(Factor::First, |f| dbar_op(setup, 1, f))
            .and_then(|x| twist_factor(setup, &x, Factor::Second, &[(1, true, -1), (2, true, 1)])),
        ScriptOp::BarRight => p.map_factor(Factor::Second, |f| Ok(setup.twist_bar(&dbar_op(setup, 1, f)?, 1, 1))),
    }
}

/// `(DR DbarR - q DL DbarR - q DR DbarL + q^2 DL DbarL) tau_1 (x) tau_1`, multiplied out.
pub fn tau2_script(setup: &QSetup) -> Result<NCPoly, QTauError> {
    let t = setup.tau1();
    let base = TensorPair::from_product(&t, &t);
    let mut acc = TensorPair::zero(setup.alpha());
    for (a, b, w) in [
        (ScriptOp::Right, ScriptOp::BarRight, 0),
        (ScriptOp::Left, ScriptOp::BarRight, 1),
        (ScriptOp::Right, ScriptOp::BarLeft, 1),
        (ScriptOp::Left, ScriptOp::BarLeft, 2),
    ] {
        let p = apply_script(setup, a, &apply_script(setup, b, &base)?)?;
        acc = acc.add(&p.scale(&ScalarQ::minus_q_pow(w)));
    }
    Ok(acc.multiply())
}

/// The displayed twist table of the four terms: `(upper, lower, first factor, second factor)`,
/// each shift `(root, barred, power)`.
type Shift = (usize, bool, i32);
pub const DISPLAYED_TWISTS: [([usize; 2], [usize; 2], &[Shift], &[Shift]); 4] = [
    ([0, 1], [0, 1], &[(1, false, 1), (2, false, -1)], &[(1, true, 1)]),
    ([0, 1], [1, 0], &[(1, false, 1), (2, false, -1)], &[(1, true, -1), (2, true, 1)]),
    ([1, 0], [0, 1], &[(1, false, -1)], &[(1, true, 1)]),
    ([1, 0], [1, 0], &[(1, false, -1)], &[(1, true, -1), (2, true, 1)]),
];

fn displayed_shifts(setup: &QSetup, shifts: &[Shift]) -> Vec<(GenId, i32)> {
    shifts.iter().filter_map(|&(i, bar, k)| if bar { setup.xibar(i) } else { setup.xi(i) }.map(|g| (g, k))).collect()
}

/// Compares the compact form with the permutation-pair expansion term by term and with the displayed twists.
pub fn tau2_check(setup: &QSetup) -> Result<CheckOutcome, QTauError> {
    let mut out = CheckOutcome::new();
    let compact = tau2_compact(setup)?;
    let expansion = qdet_terms(setup, 2)?;
    for term in &compact.terms {
        let Some(e) = expansion.iter().find(|e| e.upper == term.upper && e.lower == term.lower) else {
            out.fail(format!("no expansion term for {:?} {:?}", term.upper, term.lower));
            continue;
        };
        out.expect_eq(|| format!("compact term {:?}{:?} vs expansion", term.upper, term.lower), &term.value, &e.value);
        let (_, _, first, second) = DISPLAYED_TWISTS
            .iter()
            .find(|d| d.0 == term.upper && d.1 == term.lower)
            .expect("table covers all four terms");
        let f1 = setup.shifted.get(term.upper[0], term.lower[0]).twist_many(&displayed_shifts(setup, first));
        let f2 = setup.shifted.get(term.upper[1], term.lower[1]).twist_many(&displayed_shifts(setup, second));
        let expected = TensorPair::from_product(&f1, &f2).scale(&e.weight);
        if term.pair != expected {
            out.fail(format!(
                "tensor factors of term {:?}{:?} differ from the displayed twists",
                term.upper, term.lower
            ));
        }
        let factors = product_factors(setup, &term.upper, &term.lower)?;
        out.expect_eq(
            || format!("weight-table twist, first factor {:?}{:?}", term.upper, term.lower),
            &factors[0],
            &f1,
        );
        out.expect_eq(
            || format!("weight-table twist, second factor {:?}{:?}", term.upper, term.lower),
            &factors[1],
            &f2,
        );
    }
    let total: NCPoly = expansion.iter().fold(NCPoly::zero(setup.alpha()), |mut acc, e| {
        acc.add_assign_ref(&e.value);
        acc
    });
    out.expect_eq(|| "compact form vs expansion".into(), &compact.value, &total);
    out.expect_eq(|| "first compact form vs expansion".into(), &tau2_script(setup)?, &total);
    // classical limit: twice the 2x2 determinant of shifted entries
    let e = |m, mb| setup.shifted.get(m, mb).classical_limit();
    let det = &(&e(0, 0) * &e(1, 1)) - &(&e(0, 1) * &e(1, 0));
    out.expect_eq(
        || "q = 1 limit".into(),
        &compact.value.classical_limit(),
        &det.scale_rational(&crate::ncalg::rat(2, 1)),
    );
    Ok(out)
}

/// Renders the four terms with their twists for display.
pub fn describe_tau2(setup: &QSetup) -> Vec<String> {
    let name = |i: usize, bar: bool| if bar { format!("xib{i}") } else { format!("xi{i}") };
    let render = |shifts: &[Shift], bar: bool| {
        (1..=setup.rank())
            .map(|i| {
                let k = shifts.iter().find(|s| s.0 == i && s.1 == bar).map(|s| s.2).unwrap_or(0);
                match k {
                    0 => name(i, bar),
                    1 => format!("q*{}", name(i, bar)),
                    _ => format!("q^{k}*{}", name(i, bar)),
                }
            })
            .collect::<Vec<_>>()
            .join(", ")
    };
    DISPLAYED_TWISTS
        .iter()
        .map(|(up, lo, first, second)| {
            let w = match (up[0], lo[0]) {
                (0, 0) => "+".to_string(),
                (1, 1) => "+q^2".to_string(),
                _ => "-q".to_string(),
            };
            format!(
                "{w} tau1^{{{}{}}}({}; {}) * tau1^{{{}{}}}({}; {})",
                up[0],
                lo[0],
                render(first, false),
                render(first, true),
                up[1],
                lo[1],
                render(second, false),
                render(second, true)
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slnq::{QSymbols, SymbolConfig};

    fn setup(n: usize) -> QSetup {
        QSetup::new(&QSymbols::new(SymbolConfig::new(n)), 0)
    }

    #[test]
    fn compact_form_matches_expansion() {
        for n in 2..=4 {
            let out = tau2_check(&setup(n)).unwrap();
            assert!(out.passed(), "N={n}: {:?}", out.witness);
        }
    }

    #[test]
    fn script_operators_q_commute() {
        let s = setup(3);
        let t = s.tau1();
        let p = TensorPair::from_product(&t, &t);
        let lr = apply_script(&s, ScriptOp::Left, &apply_script(&s, ScriptOp::Right, &p).unwrap()).unwrap();
        let rl = apply_script(&s, ScriptOp::Right, &apply_script(&s, ScriptOp::Left, &p).unwrap()).unwrap();
        assert!(lr.sub(&rl.scale(&ScalarQ::q_pow(1))).is_empty());
    }

    #[test]
    fn description_lists_four_terms() {
        let d = describe_tau2(&setup(3));
        assert_eq!(d.len(), 4);
        assert!(d[0].starts_with("+ tau1^{00}(q*xi1, q^-1*xi2;"), "{}", d[0]);
    }
}
