use qtau_core::qtau::{self, QuantumCase};
use qtau_core::tau::{self, ClassicalCase, GroupSpec, Param};

#[test]
fn classical_sl3_suite_with_symbolic_g() {
    let case = ClassicalCase { n: 3, levels: Vec::new(), param: Param::B, g: GroupSpec::Symbolic };
    for name in tau::CHECKS {
        let out = tau::run_check(name, &case).unwrap();
        // the printed Baker-Akhiezer lines are known not to hold
        assert_eq!(out.passed(), *name != "baker", "{name}: {:?}", out.witness);
    }
}

#[test]
fn quantum_sl3_suite() {
    let case = QuantumCase::new(3);
    let failing: Vec<&str> =
        qtau::CHECKS.iter().copied().filter(|name| !qtau::run_check(name, &case).unwrap().passed()).collect();
    assert_eq!(failing, ["tau1-diff", "baker"]);
}

#[test]
fn invalid_levels_are_rejected() {
    let case = QuantumCase { n: 2, levels: vec![3], seed: 0 };
    assert!(qtau::run_check("detq", &case).is_err());
    let case = ClassicalCase { n: 2, levels: vec![0], param: Param::B, g: GroupSpec::Symbolic };
    assert!(tau::run_check("det-equiv", &case).is_err());
}
