//! Per-country utility fields and their discretization onto a grade scale.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::aggregation::midpoint_bin;
use crate::error::{Error, Result};
use crate::model::{distance_field, CellStatus, Country, CountryCode, DistanceField, World};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Resource {
    Oil,
    Gas,
    Fish,
    Maritime,
}

impl Resource {
    pub const ALL: [Resource; 4] = [
        Resource::Oil,
        Resource::Gas,
        Resource::Fish,
        Resource::Maritime,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Resource::Oil => "oil",
            Resource::Gas => "gas",
            Resource::Fish => "fish",
            Resource::Maritime => "maritime",
        }
    }

    pub fn is_deposit(self) -> bool {
        self != Resource::Maritime
    }
}

impl fmt::Display for Resource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Resource {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "oil" => Ok(Resource::Oil),
            "gas" => Ok(Resource::Gas),
            "fish" => Ok(Resource::Fish),
            "maritime" => Ok(Resource::Maritime),
            other => Err(format!("unknown resource `{other}`")),
        }
    }
}

/// Per-cell magnitude of one resource. For oil and gas this is the deposit
/// size, for fish an abundance (a 0/1 range map works too), and for the
/// maritime layer a positive membership weight on route cells.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceLayer {
    resource: Resource,
    values: Vec<f64>,
    route_ids: Option<Vec<Option<String>>>,
}

impl ResourceLayer {
    pub fn new(resource: Resource, values: Vec<f64>) -> Result<Self> {
        if let Some((cell, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::InvalidLayerValue { cell, value });
        }
        Ok(Self {
            resource,
            values,
            route_ids: None,
        })
    }

    pub fn zeros(resource: Resource, cells: usize) -> Self {
        Self {
            resource,
            values: vec![0.0; cells],
            route_ids: None,
        }
    }

    pub fn with_route_ids(mut self, ids: Vec<Option<String>>) -> Result<Self> {
        if ids.len() != self.values.len() {
            return Err(Error::ShapeMismatch {
                expected: self.values.len(),
                found: ids.len(),
            });
        }
        self.route_ids = Some(ids);
        Ok(self)
    }

    pub fn resource(&self) -> Resource {
        self.resource
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn route_ids(&self) -> Option<&[Option<String>]> {
        self.route_ids.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecayFamily {
    /// `1 + d / d0`
    InverseLinear,
}

/// Distance discount applied as a divisor: `g(0) = 1`, strictly increasing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFunction {
    pub family: DecayFamily,
    pub scale_km: f64,
}

impl DecayFunction {
    pub const DEFAULT_SCALE_KM: f64 = 1000.0;

    pub fn inverse_linear(scale_km: f64) -> Result<Self> {
        if !(scale_km.is_finite() && scale_km > 0.0) {
            return Err(Error::InvalidDecayScale(scale_km));
        }
        Ok(Self {
            family: DecayFamily::InverseLinear,
            scale_km,
        })
    }

    pub fn eval(&self, distance_km: f64) -> f64 {
        match self.family {
            DecayFamily::InverseLinear => 1.0 + distance_km / self.scale_km,
        }
    }
}

impl Default for DecayFunction {
    fn default() -> Self {
        Self {
            family: DecayFamily::InverseLinear,
            scale_km: Self::DEFAULT_SCALE_KM,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaritimeParams {
    /// Base utility `a` of a route cell.
    pub base: f64,
    pub decay: DecayFunction,
    /// Savings factor per non-Arctic country, in (0, 1].
    pub importance: Vec<(CountryCode, f64)>,
}

impl MaritimeParams {
    pub fn importance_of(&self, code: &CountryCode) -> Result<f64> {
        let value = self
            .importance
            .iter()
            .find(|(c, _)| c == code)
            .map(|(_, v)| *v)
            .ok_or_else(|| Error::MissingImportance(code.to_string()))?;
        if !(value > 0.0 && value <= 1.0) {
            return Err(Error::InvalidImportance {
                code: code.to_string(),
                value,
            });
        }
        Ok(value)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UtilityField {
    pub country: CountryCode,
    pub resource: Resource,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradeField {
    /// `None` for aggregated per-resource forecasts.
    pub country: Option<CountryCode>,
    pub resource: Resource,
    pub levels: usize,
    pub grades: Vec<u8>,
}

impl GradeField {
    pub fn len(&self) -> usize {
        self.grades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grades.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuantizeMode {
    #[default]
    Linear,
    Quantile,
}

impl FromStr for QuantizeMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "linear" => Ok(QuantizeMode::Linear),
            "quantile" => Ok(QuantizeMode::Quantile),
            other => Err(format!("unknown quantize mode `{other}`")),
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha))
    }
}

fn check_len(world: &World, n: usize) -> Result<()> {
    if world.len() != n {
        return Err(Error::GridMismatch(world.len(), n));
    }
    Ok(())
}

/// Utility of a deposit-type resource (oil, gas, fish):
/// `m(c) * deposit(c) / g(dist(c))` with `m = alpha` on foreign-EEZ cells.
pub fn deposit_utility(
    world: &World,
    layer: &ResourceLayer,
    country: &CountryCode,
    g: &DecayFunction,
    alpha: f64,
) -> Result<UtilityField> {
    let distance = distance_field(world, country)?;
    deposit_utility_with(world, &distance, layer, g, alpha)
}

/// [`deposit_utility`] with a precomputed distance field.
pub fn deposit_utility_with(
    world: &World,
    distance: &DistanceField,
    layer: &ResourceLayer,
    g: &DecayFunction,
    alpha: f64,
) -> Result<UtilityField> {
    if !layer.resource.is_deposit() {
        return Err(Error::WrongResource {
            expected: "oil, gas or fish".into(),
            found: layer.resource,
        });
    }
    check_alpha(alpha)?;
    check_len(world, layer.len())?;
    check_len(world, distance.values.len())?;

    let country = &distance.country;
    let values = layer
        .values
        .iter()
        .zip(&distance.values)
        .enumerate()
        .map(|(cell, (&deposit, &d))| {
            let m = match world.cell_status(cell, country) {
                CellStatus::Foreign => alpha,
                CellStatus::Own | CellStatus::International => 1.0,
            };
            m * deposit / g.eval(d)
        })
        .collect();
    Ok(UtilityField {
        country: country.clone(),
        resource: layer.resource,
        values,
    })
}

pub fn maritime_utility(
    world: &World,
    layer: &ResourceLayer,
    country: &Country,
    params: &MaritimeParams,
    alpha: f64,
) -> Result<UtilityField> {
    let distance = distance_field(world, &country.code)?;
    maritime_utility_with(world, &distance, layer, country, params, alpha)
}

/// Route-cell utility. Arctic countries get `a` in their own EEZ and
/// `a / h(dist)` elsewhere; non-Arctic countries get a flat `a * importance`.
/// Foreign-EEZ cells are scaled by `alpha` in both cases.
pub fn maritime_utility_with(
    world: &World,
    distance: &DistanceField,
    layer: &ResourceLayer,
    country: &Country,
    params: &MaritimeParams,
    alpha: f64,
) -> Result<UtilityField> {
    if layer.resource != Resource::Maritime {
        return Err(Error::WrongResource {
            expected: "maritime".into(),
            found: layer.resource,
        });
    }
    check_alpha(alpha)?;
    check_len(world, layer.len())?;
    check_len(world, distance.values.len())?;
    if distance.country != country.code {
        return Err(Error::UnknownCountry(distance.country.to_string()));
    }

    let importance = if country.is_arctic() {
        None
    } else {
        Some(params.importance_of(&country.code)?)
    };
    let a = params.base;
    let values = layer
        .values
        .iter()
        .enumerate()
        .map(|(cell, &weight)| {
            if weight <= 0.0 {
                return 0.0;
            }
            let status = world.cell_status(cell, &country.code);
            match importance {
                None => match status {
                    CellStatus::Own => a,
                    CellStatus::International => a / params.decay.eval(distance.values[cell]),
                    CellStatus::Foreign => alpha * (a / params.decay.eval(distance.values[cell])),
                },
                Some(imp) => match status {
                    CellStatus::International => a * imp,
                    // Non-Arctic countries own nothing, so every EEZ is foreign.
                    CellStatus::Own | CellStatus::Foreign => alpha * (a * imp),
                },
            }
        })
        .collect();
    Ok(UtilityField {
        country: country.code.clone(),
        resource: Resource::Maritime,
        values,
    })
}

/// Relative slack on the linear-mode normalizer, so the maximum lands in
/// grade `n - 1` rather than `n`.
const LINEAR_EPSILON: f64 = 1e-9;

/// Discretizes `weight * utility` onto grades `0..n`.
///
/// Linear mode maps `floor(n * w * u / (max u * (1 + eps)))`, clamped to
/// `n - 1`. The normalizer is the unweighted maximum, so a weight above one
/// lifts the field toward the top grade and a weight below one pushes it
/// down. Quantile mode splits positive cells into `n - 1` equal-population
/// bins (ties kept together), which is invariant to any positive weight.
/// Zero utility always maps to grade 0.
pub fn quantize(
    field: &UtilityField,
    n: usize,
    mode: QuantizeMode,
    weight: f64,
) -> Result<GradeField> {
    if n < 2 || n > u8::MAX as usize + 1 {
        return Err(Error::InvalidGradeCount(n));
    }
    if !(weight.is_finite() && weight > 0.0) {
        return Err(Error::NonPositiveWeight(weight));
    }
    if let Some((cell, &value)) = field
        .values
        .iter()
        .enumerate()
        .find(|(_, v)| !v.is_finite() || **v < 0.0)
    {
        return Err(Error::InvalidLayerValue { cell, value });
    }

    let top = (n - 1) as u8;
    let grades = match mode {
        QuantizeMode::Linear => {
            let max = field.values.iter().copied().fold(0.0, f64::max);
            if max <= 0.0 {
                vec![0; field.values.len()]
            } else {
                let denom = max * (1.0 + LINEAR_EPSILON);
                field
                    .values
                    .iter()
                    .map(|&u| {
                        if u <= 0.0 {
                            0
                        } else {
                            let g = (n as f64 * (weight * u) / denom).floor();
                            (g.min(top as f64)) as u8
                        }
                    })
                    .collect()
            }
        }
        QuantizeMode::Quantile => {
            // Positive scaling preserves the order of the values, so the
            // bins depend only on `u`.
            let mut positive: Vec<(f64, usize)> = field
                .values
                .iter()
                .enumerate()
                .filter(|(_, u)| **u > 0.0)
                .map(|(i, &u)| (u, i))
                .collect();
            positive.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let total = positive.len();
            let mut grades = vec![0u8; field.values.len()];
            let mut lo = 0;
            while lo < total {
                let mut hi = lo + 1;
                while hi < total && positive[hi].0 == positive[lo].0 {
                    hi += 1;
                }
                let g = 1 + midpoint_bin(lo, hi, total, n - 1) as u8;
                for &(_, cell) in &positive[lo..hi] {
                    grades[cell] = g;
                }
                lo = hi;
            }
            grades
        }
    };
    Ok(GradeField {
        country: Some(field.country.clone()),
        resource: field.resource,
        levels: n,
        grades,
    })
}
