//! Run configuration: JSON schema, loading with field diagnostics, and the
//! override rules for flags and environment.

use std::path::Path;

use ablab::wire::DecRat;
use ablab::{BoundParams, CfNumber, DiophantineSpec, Strategy, Tau, WindowPick, DEFAULT_DEPTH_CAP};
use anyhow::{anyhow, bail, Context};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEPTH_CAP_ENV: &str = "ABLAB_DEPTH_CAP";

/// A number given either by its Diophantine type or as continued-fraction JSON
/// (recognized by its `kind` key).
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum NumberSpec {
    Cf(CfNumber),
    Diophantine(DiophantineSpec),
}

impl<'de> Deserialize<'de> for NumberSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(d)?;
        let parsed = if value.get("kind").is_some() {
            serde_json::from_value(value).map(NumberSpec::Cf)
        } else {
            serde_json::from_value(value).map(NumberSpec::Diophantine)
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

impl NumberSpec {
    pub fn build(&self, depth_cap: usize) -> CfNumber {
        let x = match self {
            NumberSpec::Cf(x) => x.clone(),
            NumberSpec::Diophantine(spec) => ablab::make_number(spec),
        };
        x.with_depth_cap(depth_cap)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaConfig {
    #[serde(flatten)]
    pub strategy: Strategy,
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
    /// Prefixes shorter than this are ignored when estimating C; default N/10.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub alpha: NumberSpec,
    pub beta: NumberSpec,
    pub omega: OmegaConfig,
    pub tau1: DecRat,
    pub tau2: DecRat,
    #[serde(default = "default_epsilon")]
    pub epsilon: DecRat,
    /// Comparability constant; default `ceil(C_estimate) + 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<DecRat>,
    pub l_range: [usize; 2],
    #[serde(default = "default_scales")]
    pub scales: Vec<DecRat>,
    /// Width bound for exported orbit points.
    #[serde(default = "default_precision")]
    pub precision: DecRat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth_cap: Option<usize>,
    #[serde(default)]
    pub window_pick: WindowPick,
}

fn rat(n: i64, d: i64) -> DecRat {
    DecRat(ablab::Rational::new(BigInt::from(n), BigInt::from(d)))
}

fn default_epsilon() -> DecRat {
    rat(1, 4)
}

fn default_scales() -> Vec<DecRat> {
    vec![rat(1, 8), rat(1, 32), rat(1, 128), rat(1, 512)]
}

fn default_precision() -> DecRat {
    rat(1, 1_000_000)
}

/// Command-line values that override the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub precision: Option<DecRat>,
    pub depth_cap: Option<usize>,
}

/// Depth cap by precedence: flag, then config, then `ABLAB_DEPTH_CAP`, then 64.
pub fn resolve_depth_cap(flag: Option<usize>, config: Option<usize>) -> Result<usize, CliError> {
    if let Some(cap) = flag.or(config) {
        return Ok(cap);
    }
    match std::env::var(DEPTH_CAP_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::config("config", anyhow!("{DEPTH_CAP_ENV}={v:?} is not a count"))
        }),
        Err(_) => Ok(DEFAULT_DEPTH_CAP),
    }
}

/// Parses `T` from JSON text, reporting the field path and line on error. A
/// run manifest is accepted in place of the config it embeds.
pub fn parse_json<T: DeserializeOwned>(text: &str) -> anyhow::Result<T> {
    let value: serde_json::Value = serde_json::from_str(text).context("invalid JSON")?;
    if let Some(embedded) = value
        .get("tool")
        .filter(|t| t.as_str() == Some("ablab"))
        .and(value.get("config"))
    {
        return serde_path_to_error::deserialize(embedded)
            .map_err(|e| anyhow!("manifest config field `{}`: {}", e.path(), e.inner()));
    }
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| anyhow!("field `{}`: {}", e.path(), e.inner()))
}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(|e| CliError::config("config", e))?;
    parse_json(&text)
        .with_context(|| format!("in {}", path.display()))
        .map_err(|e| CliError::config("config", e))
}

impl RunConfig {
    /// Applies overrides and fills every default, so the result alone
    /// reproduces the run.
    pub fn resolve(mut self, o: &Overrides) -> Result<Self, CliError> {
        if let Some(seed) = o.seed {
            self.omega.seed = seed;
        }
        if let Some(p) = &o.precision {
            self.precision = p.clone();
        }
        self.depth_cap = Some(resolve_depth_cap(o.depth_cap, self.depth_cap)?);
        if self.omega.burn_in.is_none() {
            self.omega.burn_in = Some(self.omega.n / 10);
        }
        self.validate()
            .map_err(|e| match e.downcast::<ablab::Error>() {
                Ok(core) => CliError::core("config", core),
                Err(other) => CliError::config("config", other),
            })?;
        Ok(self)
    }

    fn validate(&self) -> anyhow::Result<()> {
        let two = ablab::Rational::from_integer(2.into());
        if self.tau1.0 < two || self.tau2.0 < two {
            bail!("tau1 and tau2 must be >= 2");
        }
        let params = BoundParams::new(self.tau1.0.clone(), Tau::Finite(self.tau2.0.clone()))?;
        if !params.is_admissible() {
            return Err(ablab::Error::InadmissibleParams {
                tau1: self.tau1.0.to_string(),
                tau2: self.tau2.0.to_string(),
            }
            .into());
        }
        if !self.epsilon.0.is_positive() || &self.epsilon.0 * &two >= self.tau2.0 {
            bail!("epsilon must lie in (0, tau2/2)");
        }
        if let Some(c) = &self.c {
            if !c.0.is_positive() {
                bail!("c must be positive");
            }
        }
        let [lo, hi] = self.l_range;
        if lo == 0 || lo > hi {
            bail!("l_range must be [lo, hi] with 1 <= lo <= hi");
        }
        if self.omega.n == 0 {
            bail!("omega.n must be >= 1");
        }
        if self.omega.burn_in.unwrap_or(0) >= self.omega.n {
            bail!("omega.burn_in must be below omega.n");
        }
        if self.scales.is_empty() {
            bail!("scales must not be empty");
        }
        let one = ablab::Rational::one();
        for r in &self.scales {
            if !r.0.is_positive() || r.0 >= one {
                bail!("scale {} outside (0, 1)", r.0);
            }
        }
        if !self.precision.0.is_positive() {
            bail!("precision must be positive");
        }
        let smallest = self.scales.iter().map(|r| &r.0).min().expect("nonempty");
        let ten = ablab::Rational::from_integer(10.into());
        if self.precision.0 > smallest / ten {
            bail!(
                "precision {} must be at most a tenth of the smallest scale {}",
                self.precision.0,
                smallest
            );
        }
        if self.depth_cap == Some(0) {
            bail!("depth_cap must be >= 1");
        }
        Ok(())
    }

    pub fn bound_params(&self) -> BoundParams {
        BoundParams::new(self.tau1.0.clone(), Tau::Finite(self.tau2.0.clone())).expect("validated")
    }
}
