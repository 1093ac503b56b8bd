//! Charts, quadrature settings, evaluation points and verdict thresholds, read from
//! `key = value` text. The checked-in defaults are embedded; a user file overrides
//! individual keys.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::integrals::QuadratureConfig;
use crate::qkernel::ExponentChart;

pub const DEFAULTS: &str = include_str!("../../../config/defaults.conf");

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub g: f64,
}

impl ChartParams {
    pub fn chart(&self, m: usize) -> Result<ExponentChart> {
        ExponentChart::real(m, self.a, self.b, self.c, self.g)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub m1: ChartParams,
    pub m2: ChartParams,
    pub system: ChartParams,
    pub quadrature: QuadratureConfig,
    pub genericity_tol: f64,
    /// Minimum distance of local exponent differences from the integers for random charts
    /// that feed a monodromy.
    pub resonance_margin: f64,
    values: BTreeMap<String, String>,
}

fn parse_lines(
    text: &str,
    into: &mut BTreeMap<String, String>,
    known: Option<&BTreeMap<String, String>>,
) -> Result<()> {
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::InvalidInput(format!("config line {}: expected key = value", n + 1))
        })?;
        let key = k.trim().to_string();
        if let Some(known) = known {
            if !known.contains_key(&key) {
                return Err(Error::InvalidInput(format!(
                    "config line {}: unknown key '{key}'",
                    n + 1
                )));
            }
        }
        into.insert(key, v.trim().to_string());
    }
    Ok(())
}

impl Default for Config {
    fn default() -> Self {
        Config::parse("").expect("embedded defaults parse")
    }
}

impl Config {
    /// Defaults overridden by `text`; unknown keys are rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let mut base = BTreeMap::new();
        parse_lines(DEFAULTS, &mut base, None)?;
        let known = base.clone();
        parse_lines(text, &mut base, Some(&known))?;
        Config::from_map(base)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidInput(format!("cannot read config {}: {e}", path.display()))
        })?;
        Config::parse(&text)
    }

    /// Applies one `key = value` override.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if !self.values.contains_key(key) {
            return Err(Error::InvalidInput(format!("unknown config key '{key}'")));
        }
        let mut map = self.values.clone();
        map.insert(key.to_string(), value.to_string());
        *self = Config::from_map(map)?;
        Ok(())
    }

    fn from_map(values: BTreeMap<String, String>) -> Result<Self> {
        let get = |k: &str| -> Result<f64> { parse_f64(&values, k) };
        let chart = |p: &str| -> Result<ChartParams> {
            Ok(ChartParams {
                a: get(&format!("{p}.a"))?,
                b: get(&format!("{p}.b"))?,
                c: get(&format!("{p}.c"))?,
                g: get(&format!("{p}.g"))?,
            })
        };
        let level = |k: &str| -> Result<u32> {
            values
                .get(k)
                .ok_or_else(|| Error::InvalidInput(format!("missing config key '{k}'")))?
                .parse()
                .map_err(|_| Error::InvalidInput(format!("config key '{k}' is not a level")))
        };
        let quadrature = QuadratureConfig {
            min_level: level("quadrature.min_level")?,
            max_level: level("quadrature.max_level")?,
            rel_tol: get("quadrature.rel_tol")?,
            margin: get("quadrature.margin")?,
            ..QuadratureConfig::default()
        };
        quadrature.validate()?;
        for k in values.keys() {
            if let Some(name) = k.strip_prefix("threshold.") {
                let t = get(k)?;
                if !(t > 0.0 && t.is_finite()) {
                    return Err(Error::InvalidInput(format!(
                        "threshold '{name}' must be positive and finite"
                    )));
                }
            } else if k.starts_with("z.") {
                let bad = |_| Error::InvalidInput(format!("config key '{k}' is not a number list"));
                for v in values[k].split(',') {
                    v.trim().parse::<f64>().map_err(bad)?;
                }
            } else if k.starts_with("random.") {
                values[k].parse::<u64>().map_err(|_| {
                    Error::InvalidInput(format!("config key '{k}' is not an integer"))
                })?;
            }
        }
        Ok(Config {
            m1: chart("m1")?,
            m2: chart("m2")?,
            system: chart("system")?,
            quadrature,
            genericity_tol: get("genericity.tol")?,
            resonance_margin: get("genericity.resonance_margin")?,
            values,
        })
    }

    /// Quadrature chart for `m ∈ {1, 2}`.
    pub fn chart(&self, m: usize) -> Result<ExponentChart> {
        match m {
            1 => self.m1.chart(1),
            2 => self.m2.chart(2),
            _ => Err(Error::InvalidInput(format!(
                "no configured quadrature chart for m={m}"
            ))),
        }
    }

    pub fn system_chart(&self, m: usize) -> Result<ExponentChart> {
        self.system.chart(m)
    }

    pub fn threshold(&self, name: &str) -> Result<f64> {
        parse_f64(&self.values, &format!("threshold.{name}"))
    }

    pub fn points(&self, name: &str) -> Result<Vec<f64>> {
        let key = format!("z.{name}");
        let v = self
            .values
            .get(&key)
            .ok_or_else(|| Error::InvalidInput(format!("missing config key '{key}'")))?;
        v.split(',')
            .map(|s| {
                s.trim().parse().map_err(|_| {
                    Error::InvalidInput(format!("config key '{key}': '{s}' is not a number"))
                })
            })
            .collect()
    }

    pub fn integer(&self, name: &str) -> Result<u64> {
        let key = format!("random.{name}");
        self.values
            .get(&key)
            .ok_or_else(|| Error::InvalidInput(format!("missing config key '{key}'")))?
            .parse()
            .map_err(|_| Error::InvalidInput(format!("config key '{key}' is not an integer")))
    }

    /// Every key with its current value, in key order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

fn parse_f64(values: &BTreeMap<String, String>, k: &str) -> Result<f64> {
    values
        .get(k)
        .ok_or_else(|| Error::InvalidInput(format!("missing config key '{k}'")))?
        .parse()
        .map_err(|_| Error::InvalidInput(format!("config key '{k}' is not a number")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_load() {
        let c = Config::default();
        assert_eq!(c.m1.g, 0.3);
        assert_eq!(c.m2.g, 0.1);
        assert_eq!(c.quadrature.margin, 0.05);
        assert_eq!(c.points("connection").unwrap().len(), 5);
        assert_eq!(c.threshold("connection_m2").unwrap(), 1e-5);
        assert_eq!(c.integer("charts").unwrap(), 50);
    }

    #[test]
    fn overrides_and_rejections() {
        let c = Config::parse("m2.g = 0.05 # finer\n\nquadrature.max_level=7").unwrap();
        assert_eq!(c.m2.g, 0.05);
        assert_eq!(c.quadrature.max_level, 7);
        assert!(Config::parse("nonsense = 1").is_err());
        assert!(Config::parse("m1.a").is_err());
        assert!(Config::parse("quadrature.rel_tol = 1e-14").is_err());
        assert!(Config::parse("threshold.invariance = banana").is_err());
        assert!(Config::parse("threshold.invariance = -1").is_err());
        assert!(Config::parse("random.charts = 2.5").is_err());
        let mut c = Config::default();
        c.set("m1.a", "-0.3").unwrap();
        assert_eq!(c.m1.a, -0.3);
        assert!(c.set("m1.z", "1").is_err());
    }
}
