//! JSON run configuration. Every field is optional; command-line flags
//! override whatever the file sets.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use vcm_core::sweep::SweepRanges;
use vcm_core::{Params, Policy, Profile, Scenario, StrategyProfile};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub params: ParamsConfig,
    pub scenario: Option<String>,
    pub profile: Option<Vec<Policy<f64>>>,
    pub step: Option<f64>,
    pub epsilon: Option<f64>,
    pub sweep: Option<SweepConfig>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub n_players: Option<usize>,
    pub n_periods: Option<usize>,
    pub endowment: Option<f64>,
    pub base_productivity: Option<f64>,
    pub productivity_rate: Option<f64>,
    pub strict_integer_votes: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub productivity_rate: Option<Vec<f64>>,
    pub endowment: Option<Vec<f64>>,
    pub base_productivity: Option<Vec<f64>>,
    pub n_periods: Option<Vec<usize>>,
    pub n_players: Option<Vec<usize>>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        // serde_json reports line and column of the offending token.
        Ok(serde_json::from_str(text)?)
    }

    pub fn params(&self) -> Result<Params> {
        let d = Params::default();
        let p = &self.params;
        let params = Params {
            n_players: p.n_players.unwrap_or(d.n_players),
            n_periods: p.n_periods.unwrap_or(d.n_periods),
            endowment: p.endowment.unwrap_or(d.endowment),
            base_productivity: p.base_productivity.unwrap_or(d.base_productivity),
            productivity_rate: p.productivity_rate.unwrap_or(d.productivity_rate),
            strict_integer_votes: p.strict_integer_votes.unwrap_or(d.strict_integer_votes),
        };
        params.validate()?;
        Ok(params)
    }

    /// Profile from `--scenario`, else the config's scenario or explicit
    /// profile.
    pub fn profile(&self, params: &Params, scenario_flag: Option<&str>) -> Result<Profile> {
        if let Some(name) = scenario_flag.or(self.scenario.as_deref()) {
            let name: Scenario = name.parse()?;
            return Ok(vcm_core::scenario_profile(params, name)?);
        }
        match &self.profile {
            Some(policies) => {
                let profile = StrategyProfile::new(policies.clone());
                profile.validate(params)?;
                Ok(profile)
            }
            None => bail!("no profile: give --scenario or a `scenario`/`profile` config entry"),
        }
    }

    pub fn sweep_ranges(&self) -> SweepRanges<f64> {
        let d = SweepRanges::default();
        let Some(s) = &self.sweep else {
            return d;
        };
        SweepRanges {
            productivity_rate: s.productivity_rate.clone().unwrap_or(d.productivity_rate),
            endowment: s.endowment.clone().unwrap_or(d.endowment),
            base_productivity: s.base_productivity.clone().unwrap_or(d.base_productivity),
            n_periods: s.n_periods.clone().unwrap_or(d.n_periods),
            n_players: s.n_players.clone().unwrap_or(d.n_players),
        }
    }
}
