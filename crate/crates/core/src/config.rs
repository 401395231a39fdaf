//! Scenario configuration.
//!
//! A scenario is one TOML document. Every omitted parameter falls back to a
//! default, and [`ScenarioConfig::from_toml`] reports each defaulted value so
//! `validate` can print them. Per-(country, resource) parameters resolve
//! pair override, then resource value, then the global default.
//!
//! ```toml
//! grade_count = 6
//! quantize = "linear"
//! top_k = 10
//!
//! [alpha]
//! default = 0.5
//! gas = 0.3
//! country.RU = { gas = 0.2 }
//!
//! [maritime]
//! base_utility = 1.0
//! importance = { CN = 0.8, JP = 0.6, KR = 0.5 }
//!
//! [threshold]
//! mode = "quantile"
//! classes = 6
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::aggregation::{SortedGradeVector, ThresholdScheme};
use crate::error::{Error, Result};
use crate::model::{CountryCode, World};
use crate::utility::{DecayFunction, MaritimeParams, QuantizeMode, Resource};

pub const DEFAULT_GRADE_COUNT: usize = 6;
pub const DEFAULT_ALPHA: f64 = 0.5;
pub const DEFAULT_TOP_K: usize = 10;
pub const DEFAULT_MARITIME_BASE: f64 = 1.0;
pub const DEFAULT_IMPORTANCE: f64 = 1.0;

/// A real-valued parameter per (country, resource) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairParam {
    pub default: f64,
    pub per_resource: BTreeMap<Resource, f64>,
    pub per_pair: BTreeMap<(CountryCode, Resource), f64>,
}

impl PairParam {
    pub fn uniform(value: f64) -> Self {
        Self {
            default: value,
            per_resource: BTreeMap::new(),
            per_pair: BTreeMap::new(),
        }
    }

    pub fn get(&self, country: &CountryCode, resource: Resource) -> f64 {
        self.per_pair
            .get(&(country.clone(), resource))
            .or_else(|| self.per_resource.get(&resource))
            .copied()
            .unwrap_or(self.default)
    }

    fn values(&self) -> impl Iterator<Item = f64> + '_ {
        std::iter::once(self.default)
            .chain(self.per_resource.values().copied())
            .chain(self.per_pair.values().copied())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub grade_count: usize,
    pub quantize_mode: QuantizeMode,
    pub alpha: PairParam,
    pub decay_km: PairParam,
    pub step1_weight: PairParam,
    pub step2_weights: BTreeMap<Resource, f64>,
    pub maritime_base: f64,
    /// Importance of non-Arctic countries; unlisted ones use `default_importance`.
    pub importance: BTreeMap<CountryCode, f64>,
    pub default_importance: f64,
    /// Step-one scheme; must have `grade_count` classes.
    pub forecast_scheme: ThresholdScheme,
    /// Step-two scheme producing the overall classes.
    pub overall_scheme: ThresholdScheme,
    pub top_k: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            grade_count: DEFAULT_GRADE_COUNT,
            quantize_mode: QuantizeMode::Linear,
            alpha: PairParam::uniform(DEFAULT_ALPHA),
            decay_km: PairParam::uniform(DecayFunction::DEFAULT_SCALE_KM),
            step1_weight: PairParam::uniform(1.0),
            step2_weights: Resource::ALL.iter().map(|&r| (r, 1.0)).collect(),
            maritime_base: DEFAULT_MARITIME_BASE,
            importance: BTreeMap::new(),
            default_importance: DEFAULT_IMPORTANCE,
            forecast_scheme: ThresholdScheme::quantile(DEFAULT_GRADE_COUNT),
            overall_scheme: ThresholdScheme::quantile(DEFAULT_GRADE_COUNT),
            top_k: DEFAULT_TOP_K,
        }
    }
}

impl ScenarioConfig {
    /// The same scenario with one alpha for every pair. Pair-level pins
    /// survive; resource-level values are replaced.
    pub fn with_uniform_alpha(&self, alpha: f64) -> Self {
        let mut cfg = self.clone();
        cfg.alpha.default = alpha;
        cfg.alpha.per_resource.clear();
        cfg
    }

    pub fn step2_weight_vector(&self) -> Vec<f64> {
        Resource::ALL
            .iter()
            .map(|r| self.step2_weights.get(r).copied().unwrap_or(1.0))
            .collect()
    }

    pub fn decay(&self, country: &CountryCode, resource: Resource) -> Result<DecayFunction> {
        DecayFunction::inverse_linear(self.decay_km.get(country, resource))
    }

    /// Maritime parameters as seen by `country`; `h` is that country's
    /// maritime `decay_km`.
    pub fn maritime_params(&self, world: &World, country: &CountryCode) -> Result<MaritimeParams> {
        Ok(MaritimeParams {
            base: self.maritime_base,
            decay: self.decay(country, Resource::Maritime)?,
            importance: world
                .countries()
                .iter()
                .filter(|c| !c.is_arctic())
                .map(|c| {
                    let v = self
                        .importance
                        .get(&c.code)
                        .copied()
                        .unwrap_or(self.default_importance);
                    (c.code.clone(), v)
                })
                .collect(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.grade_count < 2 || self.grade_count > 256 {
            return bad(format!(
                "grade_count {} must be in 2..=256",
                self.grade_count
            ));
        }
        if let Some(a) = self.alpha.values().find(|a| !(0.0..=1.0).contains(a)) {
            return Err(Error::AlphaOutOfRange(a));
        }
        if let Some(d) = self
            .decay_km
            .values()
            .find(|d| !(d.is_finite() && *d > 0.0))
        {
            return Err(Error::InvalidDecayScale(d));
        }
        let weights = self
            .step1_weight
            .values()
            .chain(self.step2_weights.values().copied());
        if let Some(w) = weights.into_iter().find(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::NonPositiveWeight(w));
        }
        if !(self.maritime_base.is_finite() && self.maritime_base > 0.0) {
            return bad(format!(
                "maritime base utility {} must be positive",
                self.maritime_base
            ));
        }
        let imps = self
            .importance
            .iter()
            .map(|(c, v)| (c.to_string(), *v))
            .chain(std::iter::once((
                "default".to_owned(),
                self.default_importance,
            )));
        for (code, value) in imps {
            if !(value > 0.0 && value <= 1.0) {
                return Err(Error::InvalidImportance { code, value });
            }
        }
        self.forecast_scheme.validate()?;
        self.overall_scheme.validate()?;
        if self.forecast_scheme.class_count() != self.grade_count {
            return Err(Error::ClassCountMismatch {
                classes: self.forecast_scheme.class_count(),
                grades: self.grade_count,
            });
        }
        check_boundary_lengths(&self.overall_scheme, Resource::ALL.len(), "threshold")?;
        for scheme in [&self.forecast_scheme, &self.overall_scheme] {
            if let ThresholdScheme::ReferenceVectors { boundaries } = scheme {
                for b in boundaries {
                    if b.grades().iter().any(|&g| g as usize >= self.grade_count) {
                        return bad(format!(
                            "reference vector {:?} exceeds the grade scale",
                            b.grades()
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks parts of the config that depend on the world: country codes in
    /// overrides and the step-one reference vector length.
    pub fn validate_for(&self, world: &World) -> Result<()> {
        self.validate()?;
        let known = |c: &CountryCode| world.country(c).map(|_| ());
        for p in [&self.alpha, &self.decay_km, &self.step1_weight] {
            for (c, _) in p.per_pair.keys() {
                known(c)?;
            }
        }
        for c in self.importance.keys() {
            known(c)?;
        }
        check_boundary_lengths(
            &self.forecast_scheme,
            world.countries().len(),
            "forecast_threshold",
        )
    }
}

fn check_boundary_lengths(scheme: &ThresholdScheme, len: usize, section: &str) -> Result<()> {
    if let ThresholdScheme::ReferenceVectors { boundaries } = scheme {
        if let Some(b) = boundaries.iter().find(|b| b.len() != len) {
            return Err(Error::InvalidConfig(format!(
                "[{section}] reference vector {:?} has length {}, expected {len}",
                b.grades(),
                b.len()
            )));
        }
    }
    Ok(())
}

/// Input paths and sweep values a config file may carry. Command-line flags
/// take precedence over these.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct InputPaths {
    pub world: Option<PathBuf>,
    pub countries: Option<PathBuf>,
    pub layers: BTreeMap<Resource, PathBuf>,
    pub alphas: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedConfig {
    pub scenario: ScenarioConfig,
    pub inputs: InputPaths,
    /// Human-readable `key = value` entries for every defaulted parameter.
    pub defaulted: Vec<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    grade_count: Option<usize>,
    quantize: Option<QuantizeMode>,
    top_k: Option<usize>,
    alpha: Option<RawPairParam>,
    decay_km: Option<RawPairParam>,
    step1_weights: Option<RawPairParam>,
    step2_weights: Option<RawResourceValues>,
    maritime: Option<RawMaritime>,
    forecast_threshold: Option<RawScheme>,
    threshold: Option<RawScheme>,
    inputs: Option<RawInputs>,
    sweep: Option<RawSweep>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawResourceValues {
    default: Option<f64>,
    oil: Option<f64>,
    gas: Option<f64>,
    fish: Option<f64>,
    maritime: Option<f64>,
}

impl RawResourceValues {
    fn entries(&self) -> impl Iterator<Item = (Resource, f64)> + '_ {
        [
            (Resource::Oil, self.oil),
            (Resource::Gas, self.gas),
            (Resource::Fish, self.fish),
            (Resource::Maritime, self.maritime),
        ]
        .into_iter()
        .filter_map(|(r, v)| v.map(|v| (r, v)))
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawPairParam {
    Scalar(f64),
    Table(RawPairTable),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPairTable {
    default: Option<f64>,
    oil: Option<f64>,
    gas: Option<f64>,
    fish: Option<f64>,
    maritime: Option<f64>,
    #[serde(default)]
    country: BTreeMap<String, RawResourceValues>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMaritime {
    base_utility: Option<f64>,
    default_importance: Option<f64>,
    #[serde(default)]
    importance: BTreeMap<String, f64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case", deny_unknown_fields)]
enum RawScheme {
    Quantile { classes: Option<usize> },
    Reference { boundaries: Vec<Vec<u8>> },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInputs {
    world: Option<PathBuf>,
    countries: Option<PathBuf>,
    oil: Option<PathBuf>,
    gas: Option<PathBuf>,
    fish: Option<PathBuf>,
    maritime: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    alphas: Option<Vec<f64>>,
}

fn resolve_pair(
    raw: Option<RawPairParam>,
    name: &str,
    fallback: f64,
    defaulted: &mut Vec<String>,
) -> PairParam {
    match raw {
        None => {
            defaulted.push(format!("{name} = {fallback}"));
            PairParam::uniform(fallback)
        }
        Some(RawPairParam::Scalar(v)) => PairParam::uniform(v),
        Some(RawPairParam::Table(table)) => {
            let values = RawResourceValues {
                default: table.default,
                oil: table.oil,
                gas: table.gas,
                fish: table.fish,
                maritime: table.maritime,
            };
            let country = table.country;
            let default = values.default.unwrap_or_else(|| {
                defaulted.push(format!("{name}.default = {fallback}"));
                fallback
            });
            let mut per_pair = BTreeMap::new();
            for (code, vals) in &country {
                let code = CountryCode::new(code.as_str());
                // A per-country `default` pins every resource of that country.
                if let Some(d) = vals.default {
                    for r in Resource::ALL {
                        per_pair.insert((code.clone(), r), d);
                    }
                }
                for (r, v) in vals.entries() {
                    per_pair.insert((code.clone(), r), v);
                }
            }
            PairParam {
                default,
                per_resource: values.entries().collect(),
                per_pair,
            }
        }
    }
}

fn resolve_scheme(
    raw: Option<RawScheme>,
    name: &str,
    n: usize,
    defaulted: &mut Vec<String>,
) -> Result<ThresholdScheme> {
    Ok(match raw {
        None => {
            defaulted.push(format!("{name} = quantile, {n} classes"));
            ThresholdScheme::quantile(n)
        }
        Some(RawScheme::Quantile { classes }) => {
            ThresholdScheme::quantile(classes.unwrap_or_else(|| {
                defaulted.push(format!("{name}.classes = {n}"));
                n
            }))
        }
        Some(RawScheme::Reference { boundaries }) => ThresholdScheme::ReferenceVectors {
            boundaries: boundaries
                .into_iter()
                .map(SortedGradeVector::new)
                .collect::<Result<_>>()
                .map_err(|e| Error::InvalidConfig(format!("[{name}] {e}")))?,
        },
    })
}

impl ScenarioConfig {
    /// Parses a scenario document. Relative input paths are resolved against
    /// `base_dir`.
    pub fn from_toml(text: &str, base_dir: Option<&Path>) -> Result<LoadedConfig> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        let mut defaulted = Vec::new();
        let mut take = |name: &str, v: Option<usize>, fallback: usize| {
            v.unwrap_or_else(|| {
                defaulted.push(format!("{name} = {fallback}"));
                fallback
            })
        };
        let grade_count = take("grade_count", raw.grade_count, DEFAULT_GRADE_COUNT);
        let top_k = take("top_k", raw.top_k, DEFAULT_TOP_K);
        let quantize_mode = raw.quantize.unwrap_or_else(|| {
            defaulted.push("quantize = linear".into());
            QuantizeMode::Linear
        });

        let alpha = resolve_pair(raw.alpha, "alpha", DEFAULT_ALPHA, &mut defaulted);
        let decay_km = resolve_pair(
            raw.decay_km,
            "decay_km",
            DecayFunction::DEFAULT_SCALE_KM,
            &mut defaulted,
        );
        let step1_weight = resolve_pair(raw.step1_weights, "step1_weights", 1.0, &mut defaulted);

        let step2_raw = raw.step2_weights.unwrap_or_default();
        let step2_default = step2_raw.default.unwrap_or(1.0);
        let given: BTreeMap<Resource, f64> = step2_raw.entries().collect();
        let step2_weights = Resource::ALL
            .iter()
            .map(|&r| {
                let w = given.get(&r).copied().unwrap_or_else(|| {
                    defaulted.push(format!("step2_weights.{r} = {step2_default}"));
                    step2_default
                });
                (r, w)
            })
            .collect();

        let maritime = raw.maritime.unwrap_or_default();
        let maritime_base = maritime.base_utility.unwrap_or_else(|| {
            defaulted.push(format!("maritime.base_utility = {DEFAULT_MARITIME_BASE}"));
            DEFAULT_MARITIME_BASE
        });
        let default_importance = maritime.default_importance.unwrap_or_else(|| {
            defaulted.push(format!(
                "maritime.default_importance = {DEFAULT_IMPORTANCE}"
            ));
            DEFAULT_IMPORTANCE
        });
        let importance = maritime
            .importance
            .into_iter()
            .map(|(c, v)| (CountryCode::new(c), v))
            .collect();

        let forecast_scheme = resolve_scheme(
            raw.forecast_threshold,
            "forecast_threshold",
            grade_count,
            &mut defaulted,
        )?;
        let overall_scheme =
            resolve_scheme(raw.threshold, "threshold", grade_count, &mut defaulted)?;

        let scenario = ScenarioConfig {
            grade_count,
            quantize_mode,
            alpha,
            decay_km,
            step1_weight,
            step2_weights,
            maritime_base,
            importance,
            default_importance,
            forecast_scheme,
            overall_scheme,
            top_k,
        };
        scenario.validate()?;

        let resolve = |p: PathBuf| match base_dir {
            Some(base) if p.is_relative() => base.join(p),
            _ => p,
        };
        let raw_inputs = raw.inputs.unwrap_or_default();
        let mut layers = BTreeMap::new();
        for (r, p) in [
            (Resource::Oil, raw_inputs.oil),
            (Resource::Gas, raw_inputs.gas),
            (Resource::Fish, raw_inputs.fish),
            (Resource::Maritime, raw_inputs.maritime),
        ] {
            if let Some(p) = p {
                layers.insert(r, resolve(p));
            }
        }
        let alphas = raw.sweep.and_then(|s| s.alphas);
        if let Some(a) = alphas.iter().flatten().find(|a| !(0.0..=1.0).contains(*a)) {
            return Err(Error::AlphaOutOfRange(*a));
        }
        let inputs = InputPaths {
            world: raw_inputs.world.map(resolve),
            countries: raw_inputs.countries.map(resolve),
            layers,
            alphas,
        };
        Ok(LoadedConfig {
            scenario,
            inputs,
            defaulted,
        })
    }

    pub fn load(path: &Path) -> Result<LoadedConfig> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_toml(&text, path.parent()).map_err(|e| match e {
            Error::InvalidConfig(msg) => Error::InvalidConfig(format!("{}: {msg}", path.display())),
            other => other,
        })
    }
}
