use std::path::Path;

use anyhow::{bail, Context};
use ini::Ini;
use stabcorr_core::SchemeConfig;

use crate::experiments::{parse_scheme, Coupling};

/// Overridable experiment settings; loaded from `key = value` lines (any section).
#[derive(Debug, Clone, PartialEq)]
pub struct HarnessConfig {
    pub schemes: Vec<String>,
    pub douglas_theta: f64,
    pub theta_extended: f64,
    pub douglas_dt_factor: f64,
    pub extended_dt_factor: f64,
    pub reference_refine: usize,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self {
            schemes: ["DOUGLAS", "SC1A", "SC1B", "HV", "HW", "CS"].map(String::from).to_vec(),
            douglas_theta: 0.5,
            theta_extended: SchemeConfig::<f64>::l_stable_theta(),
            douglas_dt_factor: 1.0,
            extended_dt_factor: 2.0,
            reference_refine: 8,
        }
    }
}

impl HarnessConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let ini = Ini::load_from_file(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg = Self::default();
        for (_, props) in ini.iter() {
            for (key, value) in props.iter() {
                cfg.set(key, value)?;
            }
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> anyhow::Result<()> {
        let num = || -> anyhow::Result<f64> {
            crate::parse_number(value).with_context(|| format!("bad value for {key}: {value}"))
        };
        match key.trim() {
            "schemes" => {
                self.schemes = value
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect()
            }
            "douglas_theta" => self.douglas_theta = num()?,
            "theta_extended" => self.theta_extended = num()?,
            "douglas_dt_factor" => self.douglas_dt_factor = num()?,
            "extended_dt_factor" => self.extended_dt_factor = num()?,
            "reference_refine" => {
                self.reference_refine = value.trim().parse().context("reference_refine")?
            }
            other => bail!("unknown config key {other}"),
        }
        Ok(())
    }

    pub fn scheme_configs(&self) -> anyhow::Result<Vec<SchemeConfig<f64>>> {
        self.schemes
            .iter()
            .map(|s| Ok(parse_scheme(s, self.douglas_theta, self.theta_extended)?))
            .collect()
    }

    pub fn coupling(&self) -> Coupling {
        Coupling {
            douglas_factor: self.douglas_dt_factor,
            extended_factor: self.extended_dt_factor,
        }
    }
}
