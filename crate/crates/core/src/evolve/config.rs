use std::fmt::Write as _;
use std::str::FromStr;

use crate::tree::GenBounds;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: bad value `{value}` for `{key}`")]
    BadValue { line: usize, key: String, value: String },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// Hyperparameters of both evolution loops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionConfig {
    pub max_generation: usize,
    pub population_size: usize,
    pub population_num: usize,
    pub cx_prob: f64,
    pub mut_prob: f64,
    pub ext_prob: f64,
    pub migration_period: usize,
    pub max_tries_mutation: usize,
    pub max_tries_weight: usize,
    pub seed: u64,
    pub bounds: GenBounds,
}

impl EvolutionConfig {
    pub fn sgp_default() -> Self {
        EvolutionConfig {
            max_generation: 100,
            population_size: 100,
            population_num: 4,
            cx_prob: 0.5,
            mut_prob: 0.5,
            ext_prob: 0.2,
            migration_period: 5,
            max_tries_mutation: 10,
            max_tries_weight: 10,
            seed: 0,
            bounds: GenBounds::default(),
        }
    }

    pub fn gp_default() -> Self {
        EvolutionConfig {
            population_num: 1,
            ..Self::sgp_default()
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        EvolutionConfig { seed, ..self }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |msg: &str| Err(ConfigError::Invalid(msg.to_string()));
        for (name, p) in [
            ("cx_prob", self.cx_prob),
            ("mut_prob", self.mut_prob),
            ("ext_prob", self.ext_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(&format!("{name} = {p} is not a probability"));
            }
        }
        if self.population_size == 0 || self.population_num == 0 {
            return bad("population sizes must be at least 1");
        }
        if self.migration_period == 0 {
            return bad("migration_period must be at least 1");
        }
        if !self.bounds.is_consistent() {
            return bad("inconsistent generation bounds");
        }
        Ok(())
    }

    /// Overrides fields from flat `key = value` text.
    ///
    /// Blank lines and `#` comments are skipped. Generation bounds are set
    /// with dotted keys such as `bounds.bool_max`.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        let mut seen: Vec<String> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or(ConfigError::Syntax { line })?;
            let (key, value) = (key.trim(), value.trim());
            if seen.iter().any(|k| k == key) {
                return Err(ConfigError::Duplicate {
                    line,
                    key: key.to_string(),
                });
            }
            self.set(key, value, line)?;
            seen.push(key.to_string());
        }
        self.validate()
    }

    fn set(&mut self, key: &str, value: &str, line: usize) -> Result<(), ConfigError> {
        fn parse<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T, ConfigError> {
            value.parse().map_err(|_| ConfigError::BadValue {
                line,
                key: key.to_string(),
                value: value.to_string(),
            })
        }
        match key {
            "max_generation" => self.max_generation = parse(key, value, line)?,
            "population_size" => self.population_size = parse(key, value, line)?,
            "population_num" => self.population_num = parse(key, value, line)?,
            "cx_prob" => self.cx_prob = parse(key, value, line)?,
            "mut_prob" => self.mut_prob = parse(key, value, line)?,
            "ext_prob" => self.ext_prob = parse(key, value, line)?,
            "migration_period" => self.migration_period = parse(key, value, line)?,
            "max_tries_mutation" => self.max_tries_mutation = parse(key, value, line)?,
            "max_tries_weight" => self.max_tries_weight = parse(key, value, line)?,
            "seed" => self.seed = parse(key, value, line)?,
            "bounds.bool_min" => self.bounds.bool_min = parse(key, value, line)?,
            "bounds.bool_max" => self.bounds.bool_max = parse(key, value, line)?,
            "bounds.cmp_exact" => self.bounds.cmp_exact = parse(key, value, line)?,
            "bounds.math_min" => self.bounds.math_min = parse(key, value, line)?,
            "bounds.math_max" => self.bounds.math_max = parse(key, value, line)?,
            "bounds.term_exact" => self.bounds.term_exact = parse(key, value, line)?,
            _ => {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                })
            }
        }
        Ok(())
    }

    /// Serializes every field; `apply_text` on the output reproduces `self`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let b = &self.bounds;
        let _ = writeln!(s, "max_generation = {}", self.max_generation);
        let _ = writeln!(s, "population_size = {}", self.population_size);
        let _ = writeln!(s, "population_num = {}", self.population_num);
        let _ = writeln!(s, "cx_prob = {:?}", self.cx_prob);
        let _ = writeln!(s, "mut_prob = {:?}", self.mut_prob);
        let _ = writeln!(s, "ext_prob = {:?}", self.ext_prob);
        let _ = writeln!(s, "migration_period = {}", self.migration_period);
        let _ = writeln!(s, "max_tries_mutation = {}", self.max_tries_mutation);
        let _ = writeln!(s, "max_tries_weight = {}", self.max_tries_weight);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "bounds.bool_min = {}", b.bool_min);
        let _ = writeln!(s, "bounds.bool_max = {}", b.bool_max);
        let _ = writeln!(s, "bounds.cmp_exact = {}", b.cmp_exact);
        let _ = writeln!(s, "bounds.math_min = {}", b.math_min);
        let _ = writeln!(s, "bounds.math_max = {}", b.math_max);
        let _ = writeln!(s, "bounds.term_exact = {}", b.term_exact);
        s
    }
}
