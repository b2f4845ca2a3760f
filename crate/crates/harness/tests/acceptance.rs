//! One PASS/FAIL line per acceptance criterion.
//!
//! Every identity is exact (zero residual terms); the only tolerances are the
//! wall-clock budgets below. Criteria listed in `KNOWN_FAILURES` are reported as
//! FAIL and the run only errors if an outcome differs from that list.

use std::process::Command;
use std::time::{Duration, Instant};

use num::BigRational;
use qtau_core::check::CheckOutcome;
use qtau_core::ncalg::ScalarQ;
use qtau_core::qtau::{
    self, classical_limit_check, dd_comm_check, describe_tau2, gamma_check, measure_normalization, tau2_full_check,
    QSetup, QuantumCase, RANDOM_PAIRS,
};
use qtau_core::slnq::{QSymbols, SymbolConfig};
use qtau_core::tau::{self, ClassicalCase, GroupSpec, Param};
use qtau_harness::{random_group_element, Report};

/// Exact equality everywhere.
const RESIDUAL_TERMS_ALLOWED: usize = 0;
const SEEDS: u64 = 20;
const MIN_RANDOM_PAIRS: usize = 50;

/// Criteria that fail as stated; the analysis is in the decisions ledger.
const KNOWN_FAILURES: &[u32] = &[4, 5];

type Criterion = (u32, fn() -> Verdict, Duration);

struct Verdict {
    passed: bool,
    detail: String,
}

fn outcome_verdict(label: &str, outs: impl IntoIterator<Item = CheckOutcome>) -> Verdict {
    let mut total = CheckOutcome::new();
    for o in outs {
        total.merge(o);
    }
    let passed = total.residual_terms == RESIDUAL_TERMS_ALLOWED;
    let detail = match &total.witness {
        None => label.to_string(),
        Some(w) => format!("{label}; {} residual terms, first: {w}", total.residual_terms),
    };
    Verdict { passed, detail }
}

fn classical(n: usize, seed: u64, param: Param) -> ClassicalCase {
    ClassicalCase { n, levels: Vec::new(), param, g: GroupSpec::Numeric(random_group_element(n, seed)) }
}

fn symbolic(n: usize, param: Param) -> ClassicalCase {
    ClassicalCase { n, levels: Vec::new(), param, g: GroupSpec::Symbolic }
}

fn run_classical(name: &str, case: &ClassicalCase) -> CheckOutcome {
    tau::run_check(name, case).expect("valid classical case")
}

fn run_quantum(f: fn(&QuantumCase) -> Result<CheckOutcome, qtau::QTauError>, case: &QuantumCase) -> CheckOutcome {
    f(case).expect("valid quantum case")
}

fn criterion_1() -> Verdict {
    let mut outs = Vec::new();
    for n in 2..=4 {
        for seed in 0..SEEDS {
            outs.push(run_classical("det-equiv", &classical(n, seed, Param::B)));
        }
    }
    outcome_verdict("direct = det = Schur, N = 2..4, 20 seeds", outs)
}

fn criterion_2() -> Verdict {
    let mut outs = Vec::new();
    for n in 2..=4 {
        for seed in 0..SEEDS {
            outs.push(run_classical("hirota", &classical(n, seed, Param::B)));
        }
    }
    outcome_verdict("Hirota residual zero for n = 1..N-1, N = 2..4, 20 seeds", outs)
}

fn criterion_3() -> Verdict {
    let mut outs: Vec<CheckOutcome> = (2..=4).map(|n| run_classical("param-a", &symbolic(n, Param::A))).collect();
    outs.extend((2..=4).map(|n| run_classical("param-a", &classical(n, 1, Param::A))));
    outcome_verdict("simple-root sums, derivative form and bordered determinants, N = 2..4", outs)
}

fn criterion_4() -> Verdict {
    let mut outs = Vec::new();
    for n in 2..=3 {
        for param in [Param::A, Param::B] {
            outs.push(run_classical("bilinear", &symbolic(n, param)));
        }
        outs.push(run_classical("baker", &symbolic(n, Param::A)));
    }
    outcome_verdict("fermion bilinear identity and every displayed Baker-Akhiezer relation, N = 2, 3", outs)
}

fn criterion_5() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for n_states in 2..=3 {
        let setup = QSetup::new(&QSymbols::new(SymbolConfig::new(n_states)), 0);
        for level in 2..=n_states {
            let (norm, direct, qdet) = measure_normalization(&setup, level).expect("valid level");
            let independent = norm.consistent() && norm.specializations.len() >= 3;
            let scaled = norm.factor.as_ref().is_some_and(|c| direct.value == qdet.value.scale(c));
            let factorial = BigRational::from_integer((1..=level as u64).product::<u64>().into());
            let at_one = norm.at_one();
            let matches_factorial = at_one.as_ref() == Some(&factorial);
            ok &= independent && scaled && matches_factorial;
            parts.push(format!(
                "N={n_states} n={level}: c = {}, independent {independent}, direct = c * expansion {scaled}, c(1) = {} vs n! = {factorial}",
                norm.factor.as_ref().map_or("none".into(), ScalarQ::to_string),
                at_one.map_or("none".into(), |x| x.to_string()),
            ));
        }
    }
    Verdict { passed: ok, detail: parts.join("; ") }
}

fn criterion_6() -> Verdict {
    let outs: Vec<CheckOutcome> = (2..=4).map(|n| run_quantum(tau2_full_check, &QuantumCase::new(n))).collect();
    let mut v = outcome_verdict("compact operator form = expansion termwise with twists, N = 2..4", outs);
    let first = describe_tau2(&QSetup::new(&QSymbols::new(SymbolConfig::new(3)), 0)).remove(0);
    if !first.starts_with("+ tau1^{00}(q*xi1, q^-1*xi2; xib1, xib2) * tau1^{11}(xi1, xi2; q*xib1, xib2)") {
        v.passed = false;
        v.detail = format!("{}; first term rendered as `{first}`", v.detail);
    }
    v
}

fn criterion_7() -> Verdict {
    if RANDOM_PAIRS < MIN_RANDOM_PAIRS {
        return Verdict { passed: false, detail: format!("only {RANDOM_PAIRS} random pairs") };
    }
    let outs: Vec<CheckOutcome> =
        (2..=4).map(|n| run_quantum(dd_comm_check, &QuantumCase { n, levels: Vec::new(), seed: 7 })).collect();
    outcome_verdict(
        &format!("difference-operator exchange relations on {RANDOM_PAIRS} random pairs each, N = 2..4"),
        outs,
    )
}

fn criterion_8() -> Verdict {
    let outs: Vec<CheckOutcome> = (2..=3).map(|n| run_quantum(gamma_check, &QuantumCase::new(n))).collect();
    outcome_verdict("Gamma_q commutes with g (x) g at every adjacent level pair, N = 2, 3", outs)
}

fn criterion_9() -> Verdict {
    let outs: Vec<CheckOutcome> =
        (2..=3).map(|n| run_quantum(classical_limit_check, &QuantumCase { n, levels: Vec::new(), seed: 0 })).collect();
    outcome_verdict("q = 1 values equal the classical engine, N = 2, 3", outs)
}

fn criterion_10() -> Verdict {
    let out = run_classical("factorize", &classical(5, 0, Param::B));
    let report = out.notes.iter().filter(|n| n.contains("leading")).count();
    let mut v = outcome_verdict("factorize and rebuild exact for N = 2..5", [out.clone()]);
    v.detail =
        format!("{}; leading-coefficient comparison reported for {report} ranks: {}", v.detail, out.notes.join(" | "));
    v
}

fn criterion_11() -> Verdict {
    let dir = tempfile::tempdir().expect("temp dir");
    let bin = env!("CARGO_BIN_EXE_qtau");
    let mut reports = Vec::new();
    for k in 0..2 {
        let path = dir.path().join(format!("run{k}.json"));
        let status = Command::new(bin)
            .args(["verify", "classical", "--N", "3", "--seed", "7", "--out"])
            .arg(&path)
            .output()
            .expect("qtau runs");
        if status.status.code() == Some(2) {
            return Verdict { passed: false, detail: String::from_utf8_lossy(&status.stderr).into_owned() };
        }
        let text = std::fs::read_to_string(&path).expect("report written");
        let r: Report = serde_json::from_str(&text).expect("report parses");
        reports.push(r.without_runtime().to_json());
    }
    let same = reports[0] == reports[1];
    Verdict {
        passed: same,
        detail: format!("two runs of `qtau verify classical --N 3 --seed 7` identical without runtimes: {same}"),
    }
}

fn main() {
    let criteria: [Criterion; 11] = [
        (1, criterion_1, Duration::from_secs(60)),
        (2, criterion_2, Duration::from_secs(60)),
        (3, criterion_3, Duration::from_secs(30)),
        (4, criterion_4, Duration::from_secs(60)),
        (5, criterion_5, Duration::from_secs(300)),
        (6, criterion_6, Duration::from_secs(60)),
        (7, criterion_7, Duration::from_secs(30)),
        (8, criterion_8, Duration::from_secs(120)),
        (9, criterion_9, Duration::from_secs(120)),
        (10, criterion_10, Duration::from_secs(30)),
        (11, criterion_11, Duration::from_secs(60)),
    ];
    let mut unexpected = Vec::new();
    for (k, f, budget) in criteria {
        let t = Instant::now();
        let v = f();
        let elapsed = t.elapsed();
        let in_budget = elapsed <= budget;
        let passed = v.passed && in_budget;
        println!(
            "{} criterion {k}: {} [{:.2} s, budget {} s]",
            if passed { "PASS" } else { "FAIL" },
            v.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        if passed == KNOWN_FAILURES.contains(&k) {
            unexpected.push(k);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("criteria with outcomes different from the recorded expectation: {unexpected:?}");
        std::process::exit(1);
    }
}
