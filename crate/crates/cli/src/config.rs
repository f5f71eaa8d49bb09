//! Experiment configuration: flat key-value text, one experiment per file.
//! Unknown keys are errors.

use anyhow::{bail, Context, Result};
use qcert::quantum::{EffectConvention, NoiseModel};
use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Fidelity,
    Magnetization,
    Witness,
}

impl ExperimentKind {
    pub fn label(&self) -> &'static str {
        match self {
            ExperimentKind::Fidelity => "fidelity",
            ExperimentKind::Magnetization => "magnetization",
            ExperimentKind::Witness => "witness",
        }
    }
}

/// How the witness experiment allocates shots: one draw from the combined
/// eight-outcome POVM, or half the budget on each four-outcome setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SamplingMode {
    #[default]
    SinglePovm,
    TwoSetting,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub seed: u64,
    pub n_trials: usize,
    pub delta: f64,
    pub shots_grid: Vec<u64>,
    pub gamma_grid: Vec<f64>,
    pub channel: Option<NoiseModel>,
    pub theta_x: f64,
    pub theta_z: f64,
    pub n_qubits: usize,
    pub include_eps2: bool,
    pub effect_convention: EffectConvention,
    pub sampling: SamplingMode,
    pub solver_tol: f64,
}

impl ExperimentConfig {
    /// Defaults for one experiment kind. The fidelity experiment defaults to
    /// the Schrodinger effect convention because its operational-distance
    /// bound assumes channel-transformed effects keep their traces, which
    /// fails for amplitude damping under the Heisenberg adjoint.
    pub fn defaults(kind: ExperimentKind) -> Self {
        let effect_convention = match kind {
            ExperimentKind::Fidelity => EffectConvention::Schrodinger,
            _ => EffectConvention::Heisenberg,
        };
        let shots_grid = match kind {
            ExperimentKind::Magnetization => vec![1 << 12],
            _ => (8..=20).map(|k| 1u64 << k).collect(), // 2^8 .. 2^20
        };
        let gamma_grid = match kind {
            ExperimentKind::Magnetization => (0..10).map(|k| k as f64 * PI / 9.0).collect(),
            _ => vec![0.0, 0.05, 0.1, 0.2],
        };
        Self {
            experiment: kind,
            seed: 7,
            n_trials: 100,
            delta: 0.003,
            shots_grid,
            gamma_grid,
            channel: None,
            theta_x: 0.01,
            theta_z: FRAC_PI_2 - 0.01,
            n_qubits: 5,
            include_eps2: true,
            effect_convention,
            sampling: SamplingMode::default(),
            solver_tol: 1e-7,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots_grid.is_empty() || self.gamma_grid.is_empty() {
            bail!("shots_grid and gamma_grid must be non-empty");
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            bail!("delta must lie in (0, 1], got {}", self.delta);
        }
        if self.n_trials < 1 {
            bail!("n_trials must be at least 1");
        }
        if self.experiment == ExperimentKind::Fidelity && self.channel.is_none() {
            bail!("the fidelity experiment needs a `channel`");
        }
        if self.n_qubits < 1 || self.n_qubits > 8 {
            bail!("n_qubits must lie in 1..=8, got {}", self.n_qubits);
        }
        if self.shots_grid.contains(&0) {
            bail!("shot counts must be positive");
        }
        Ok(())
    }
}

fn parse_bool(value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => bail!("expected a boolean, got `{other}`"),
    }
}

fn parse_list<T: std::str::FromStr>(value: &str) -> Result<Vec<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    value
        .split(',')
        .map(|t| t.trim().parse::<T>().map_err(anyhow::Error::from))
        .collect()
}

/// Parse a config file body. The `experiment` key picks the defaults; every
/// other key overrides one field, and anything unrecognized is an error.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .with_context(|| format!("line {}: expected key = value", lineno + 1))?;
        pairs.push((key.trim().replace('-', "_"), value.trim().to_string()));
    }

    let kind_value = pairs
        .iter()
        .find(|(k, _)| k == "experiment")
        .map(|(_, v)| v.clone())
        .context("config must set `experiment`")?;
    let kind = match kind_value.as_str() {
        "fidelity" => ExperimentKind::Fidelity,
        "magnetization" => ExperimentKind::Magnetization,
        "witness" => ExperimentKind::Witness,
        other => bail!("unknown experiment `{other}`"),
    };

    let mut config = ExperimentConfig::defaults(kind);
    for (key, value) in &pairs {
        match key.as_str() {
            "experiment" => {}
            "seed" => config.seed = value.parse()?,
            "n_trials" => config.n_trials = value.parse()?,
            "delta" => config.delta = value.parse()?,
            "shots_grid" => config.shots_grid = parse_list(value)?,
            "gamma_grid" => config.gamma_grid = parse_list(value)?,
            "channel" => config.channel = Some(value.parse::<NoiseModel>()?),
            "theta_x" => config.theta_x = value.parse()?,
            "theta_z" => config.theta_z = value.parse()?,
            "n_qubits" => config.n_qubits = value.parse()?,
            "include_eps2" => config.include_eps2 = parse_bool(value)?,
            "effect_convention" => config.effect_convention = value.parse::<EffectConvention>()?,
            "sampling" => {
                config.sampling = match value.as_str() {
                    "single-povm" | "single_povm" => SamplingMode::SinglePovm,
                    "two-setting" | "two_setting" => SamplingMode::TwoSetting,
                    other => bail!("unknown sampling mode `{other}`"),
                }
            }
            "solver_tol" => config.solver_tol = value.parse()?,
            other => bail!("unknown config key `{other}`"),
        }
    }
    config.validate()?;
    Ok(config)
}

pub fn read_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_witness_config() {
        let config = parse_config("experiment = witness\n").unwrap();
        assert_eq!(config.experiment, ExperimentKind::Witness);
        assert_eq!(config.n_trials, 100);
        assert_eq!(config.seed, 7);
        assert!((config.theta_z - (FRAC_PI_2 - 0.01)).abs() < 1e-15);
        assert_eq!(config.effect_convention, EffectConvention::Heisenberg);
    }

    #[test]
    fn fidelity_requires_channel() {
        assert!(parse_config("experiment = fidelity\n").is_err());
        let config = parse_config("experiment = fidelity\nchannel = depolarizing\n").unwrap();
        assert_eq!(config.channel, Some(NoiseModel::Depolarizing));
        assert_eq!(config.effect_convention, EffectConvention::Schrodinger);
    }

    #[test]
    fn overrides_and_lists() {
        let text = "experiment = magnetization\nseed = 42\nn-trials = 5\n\
                    gamma_grid = 0, 0.5, 1.0\nshots_grid = 1024\ninclude_eps2 = false\n";
        let config = parse_config(text).unwrap();
        assert_eq!(config.seed, 42);
        assert_eq!(config.n_trials, 5);
        assert_eq!(config.gamma_grid, vec![0.0, 0.5, 1.0]);
        assert_eq!(config.shots_grid, vec![1024]);
        assert!(!config.include_eps2);
    }

    #[test]
    fn unknown_key_fails_fast() {
        let err = parse_config("experiment = witness\nshots = 100\n").unwrap_err();
        assert!(err.to_string().contains("unknown config key"));
    }

    #[test]
    fn invalid_values_rejected() {
        assert!(parse_config("experiment = witness\ndelta = 0\n").is_err());
        assert!(parse_config("experiment = witness\nn_trials = 0\n").is_err());
        assert!(parse_config("experiment = witness\nshots_grid = \n").is_err());
        assert!(parse_config("experiment = nonsense\n").is_err());
    }
}
