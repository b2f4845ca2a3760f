use serde::{Deserialize, Serialize};
use thiserror::Error;

use qtau_core::tau::Param;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("unknown {suite} check `{name}`")]
    UnknownCheck { suite: &'static str, name: String },
    #[error("N = {n} exceeds the {suite} cap of {max}; pass --unsafe-large to override")]
    TooLarge { suite: &'static str, n: usize, max: usize },
    #[error("level {level} exceeds the quantum cap of {max}; pass --unsafe-large to override")]
    LevelTooLarge { level: usize, max: usize },
    #[error("level {level} is outside 1..={n}")]
    InvalidLevel { level: usize, n: usize },
    #[error("N must be at least 2, got {0}")]
    TooSmall(usize),
    #[error("QTAU_MAX_N must be a positive integer, got `{0}`")]
    BadEnv(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Classical,
    Quantum,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Classical => "classical",
            Suite::Quantum => "quantum",
        }
    }

    /// Every registered check of the suite, in report order.
    pub fn registry(self) -> &'static [&'static str] {
        match self {
            Suite::Classical => qtau_core::tau::CHECKS,
            Suite::Quantum => qtau_core::qtau::CHECKS,
        }
    }
}

/// Evolution family, serialized as `"A"`, `"B"` or `"C"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parametrization {
    A,
    B,
    C,
}

impl From<Parametrization> for Param {
    fn from(p: Parametrization) -> Param {
        match p {
            Parametrization::A => Param::A,
            Parametrization::B => Param::B,
            Parametrization::C => Param::C,
        }
    }
}

/// One suite run: what to check and on which inputs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub suite: Suite,
    #[serde(rename = "N")]
    pub n: usize,
    /// Empty means every level the checks support.
    pub levels: Vec<usize>,
    pub parametrization: Parametrization,
    pub checks: Vec<String>,
    pub seed: u64,
    pub symbolic_g: bool,
}

impl Scenario {
    /// All registered checks of `suite` on default inputs.
    pub fn new(suite: Suite, n: usize) -> Self {
        Scenario {
            suite,
            n,
            levels: Vec::new(),
            parametrization: Parametrization::B,
            checks: suite.registry().iter().map(|s| s.to_string()).collect(),
            seed: 0,
            symbolic_g: false,
        }
    }

    pub fn validate(&self, limits: &Limits) -> Result<(), ConfigError> {
        if self.n < 2 {
            return Err(ConfigError::TooSmall(self.n));
        }
        let registry = self.suite.registry();
        if let Some(bad) = self.checks.iter().find(|c| !registry.contains(&c.as_str())) {
            return Err(ConfigError::UnknownCheck { suite: self.suite.name(), name: bad.clone() });
        }
        if let Some(&level) = self.levels.iter().find(|&&l| l == 0 || l > self.n) {
            return Err(ConfigError::InvalidLevel { level, n: self.n });
        }
        if limits.unsafe_large {
            return Ok(());
        }
        let max = limits.max_n(self.suite);
        if self.n > max {
            return Err(ConfigError::TooLarge { suite: self.suite.name(), n: self.n, max });
        }
        if self.suite == Suite::Quantum {
            let top = self.levels.iter().copied().max().unwrap_or(self.n);
            if top > limits.max_quantum_level {
                return Err(ConfigError::LevelTooLarge { level: top, max: limits.max_quantum_level });
            }
        }
        Ok(())
    }
}

/// Desk-scale caps on the problem size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_n_classical: usize,
    pub max_n_quantum: usize,
    pub max_quantum_level: usize,
    pub unsafe_large: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_n_classical: 4, max_n_quantum: 3, max_quantum_level: 3, unsafe_large: false }
    }
}

impl Limits {
    /// Defaults, with both `N` caps replaced by `QTAU_MAX_N` when it is set.
    pub fn from_env() -> Result<Self, ConfigError> {
        Self::with_override(std::env::var("QTAU_MAX_N").ok().as_deref())
    }

    pub fn with_override(max_n: Option<&str>) -> Result<Self, ConfigError> {
        let mut l = Limits::default();
        if let Some(raw) = max_n {
            let n: usize =
                raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| ConfigError::BadEnv(raw.to_string()))?;
            l.max_n_classical = n;
            l.max_n_quantum = n;
        }
        Ok(l)
    }

    pub fn max_n(&self, suite: Suite) -> usize {
        match suite {
            Suite::Classical => self.max_n_classical,
            Suite::Quantum => self.max_n_quantum,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caps_and_override() {
        let l = Limits::default();
        assert!(Scenario::new(Suite::Classical, 4).validate(&l).is_ok());
        assert_eq!(
            Scenario::new(Suite::Classical, 5).validate(&l),
            Err(ConfigError::TooLarge { suite: "classical", n: 5, max: 4 })
        );
        assert!(Scenario::new(Suite::Quantum, 4).validate(&l).is_err());
        let unsafe_l = Limits { unsafe_large: true, ..l };
        assert!(Scenario::new(Suite::Quantum, 4).validate(&unsafe_l).is_ok());
        let env = Limits::with_override(Some("5")).unwrap();
        assert!(Scenario::new(Suite::Classical, 5).validate(&env).is_ok());
        assert!(matches!(Limits::with_override(Some("x")), Err(ConfigError::BadEnv(_))));
    }

    #[test]
    fn unknown_check_names_the_offender() {
        let mut s = Scenario::new(Suite::Quantum, 2);
        s.checks.push("hirota".into());
        assert_eq!(
            s.validate(&Limits::default()),
            Err(ConfigError::UnknownCheck { suite: "quantum", name: "hirota".into() })
        );
    }

    #[test]
    fn bad_levels_are_rejected() {
        let mut s = Scenario::new(Suite::Classical, 3);
        s.levels = vec![1, 4];
        assert_eq!(s.validate(&Limits::default()), Err(ConfigError::InvalidLevel { level: 4, n: 3 }));
    }
}
