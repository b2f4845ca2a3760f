use std::time::Instant;

use qtau_core::check::CheckOutcome;
use qtau_core::par;
use qtau_core::qtau::{self, QuantumCase};
use qtau_core::tau::{self, ClassicalCase, GroupSpec};

use crate::group::random_group_element;
use crate::report::{CheckRecord, Report, Status};
use crate::scenario::{ConfigError, Limits, Scenario, Suite};

fn record(name: &str, started: Instant, result: Result<CheckOutcome, String>) -> CheckRecord {
    let runtime_ms = started.elapsed().as_millis() as u64;
    match result {
        Ok(out) => CheckRecord {
            name: name.to_string(),
            status: if out.passed() { Status::Pass } else { Status::Fail },
            residual_terms: out.residual_terms,
            witness: out.witness,
            runtime_ms,
            notes: out.notes,
        },
        Err(e) => CheckRecord {
            name: name.to_string(),
            status: Status::Error,
            residual_terms: 0,
            witness: Some(e),
            runtime_ms,
            notes: Vec::new(),
        },
    }
}

/// Runs every check of the scenario; failures are recorded, never fatal.
pub fn run_suite(scenario: &Scenario, limits: &Limits) -> Result<Report, ConfigError> {
    scenario.validate(limits)?;
    let records = match scenario.suite {
        Suite::Classical => {
            let case = ClassicalCase {
                n: scenario.n,
                levels: scenario.levels.clone(),
                param: scenario.parametrization.into(),
                g: if scenario.symbolic_g {
                    GroupSpec::Symbolic
                } else {
                    GroupSpec::Numeric(random_group_element(scenario.n, scenario.seed))
                },
            };
            par::map(&scenario.checks, |name| {
                let t = Instant::now();
                record(name, t, tau::run_check(name, &case).map_err(|e| e.to_string()))
            })
        }
        Suite::Quantum => {
            let case = QuantumCase { n: scenario.n, levels: scenario.levels.clone(), seed: scenario.seed };
            par::map(&scenario.checks, |name| {
                let t = Instant::now();
                record(name, t, qtau::run_check(name, &case).map_err(|e| e.to_string()))
            })
        }
    };
    Ok(Report::new(scenario.clone(), records))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantum_sl2_core_checks_pass() {
        let mut s = Scenario::new(Suite::Quantum, 2);
        s.checks = vec!["detq".into(), "tau2".into(), "gamma".into()];
        let r = run_suite(&s, &Limits::default()).unwrap();
        assert!(r.all_passed(), "{}", r.to_text());
        assert_eq!(r.summary.pass, 3);
    }

    #[test]
    fn unknown_check_is_a_config_error() {
        let mut s = Scenario::new(Suite::Classical, 3);
        s.checks = vec!["det-equiv".into(), "bogus".into()];
        assert_eq!(
            run_suite(&s, &Limits::default()).unwrap_err(),
            ConfigError::UnknownCheck { suite: "classical", name: "bogus".into() }
        );
    }
}
