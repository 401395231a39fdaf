//! End-to-end scenario runs, alpha sweeps and run comparison.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::aggregation::{
    aggregate_overall_ranked, aggregate_resource, ConflictClassField, Ranking, SortedGradeVector,
};
use crate::config::ScenarioConfig;
use crate::error::{Error, Result};
use crate::model::{CellId, CellStatus, CountryCode, DistanceTable, Owner, World};
use crate::utility::{
    deposit_utility_with, maritime_utility_with, quantize, GradeField, Resource, ResourceLayer,
    UtilityField,
};

/// One layer per resource.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LayerSet {
    layers: BTreeMap<Resource, ResourceLayer>,
}

impl LayerSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, layer: ResourceLayer) -> Option<ResourceLayer> {
        self.layers.insert(layer.resource(), layer)
    }

    pub fn with(mut self, layer: ResourceLayer) -> Self {
        self.insert(layer);
        self
    }

    pub fn get(&self, resource: Resource) -> Result<&ResourceLayer> {
        self.layers
            .get(&resource)
            .ok_or(Error::MissingLayer(resource))
    }

    pub fn iter(&self) -> impl Iterator<Item = &ResourceLayer> {
        self.layers.values()
    }

    /// Errors with the first missing resource, in [`Resource::ALL`] order.
    pub fn check_complete(&self, cells: usize) -> Result<()> {
        for r in Resource::ALL {
            let layer = self.get(r)?;
            if layer.len() != cells {
                return Err(Error::GridMismatch(cells, layer.len()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hotspot {
    pub cell: usize,
    pub cell_id: CellId,
    pub vector: SortedGradeVector,
    pub class: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub rows: usize,
    pub cols: usize,
    pub cell_ids: Vec<CellId>,
    pub grade_count: usize,
    /// Per-resource forecasts in [`Resource::ALL`] order.
    pub forecasts: Vec<GradeField>,
    pub overall: ConflictClassField,
    pub class_counts: Vec<usize>,
    /// Most intense nonzero cells, strongest first; whole tiers are kept so
    /// the list may run past `top_k`.
    pub hotspots: Vec<Hotspot>,
}

impl RunResult {
    pub fn len(&self) -> usize {
        self.cell_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cell_ids.is_empty()
    }

    pub fn forecast(&self, resource: Resource) -> Option<&GradeField> {
        self.forecasts.iter().find(|f| f.resource == resource)
    }

    pub fn row_col(&self, cell: usize) -> (usize, usize) {
        (cell / self.cols, cell % self.cols)
    }
}

/// Utility field of one (country, resource) pair under `config`.
pub fn utility_field(
    world: &World,
    distances: &DistanceTable,
    layer: &ResourceLayer,
    country: &CountryCode,
    config: &ScenarioConfig,
) -> Result<UtilityField> {
    let resource = layer.resource();
    let alpha = config.alpha.get(country, resource);
    let distance = distances.get(country)?;
    if resource.is_deposit() {
        let g = config.decay(country, resource)?;
        deposit_utility_with(world, distance, layer, &g, alpha)
    } else {
        let params = config.maritime_params(world, country)?;
        maritime_utility_with(
            world,
            distance,
            layer,
            world.country(country)?,
            &params,
            alpha,
        )
    }
}

/// Grade fields of every country for one resource, in country order.
pub fn country_grades(
    world: &World,
    distances: &DistanceTable,
    layer: &ResourceLayer,
    config: &ScenarioConfig,
) -> Result<Vec<GradeField>> {
    world
        .countries()
        .iter()
        .map(|c| {
            let u = utility_field(world, distances, layer, &c.code, config)?;
            let w = config.step1_weight.get(&c.code, layer.resource());
            quantize(&u, config.grade_count, config.quantize_mode, w)
        })
        .collect()
}

pub fn run_scenario(
    world: &World,
    layers: &LayerSet,
    config: &ScenarioConfig,
) -> Result<RunResult> {
    let distances = DistanceTable::compute(world)?;
    run_with_distances(world, &distances, layers, config)
}

/// [`run_scenario`] with precomputed distance fields. The distances need not
/// come from `world`'s own ownership; see [`World::relabeled_international`].
pub fn run_with_distances(
    world: &World,
    distances: &DistanceTable,
    layers: &LayerSet,
    config: &ScenarioConfig,
) -> Result<RunResult> {
    config.validate_for(world)?;
    layers.check_complete(world.len())?;

    let forecasts = Resource::ALL
        .iter()
        .map(|&r| {
            let fields = country_grades(world, distances, layers.get(r)?, config)?;
            aggregate_resource(&fields, &config.forecast_scheme)
        })
        .collect::<Result<Vec<_>>>()?;

    let (ranking, overall) = aggregate_overall_ranked(
        &forecasts,
        &config.step2_weight_vector(),
        &config.overall_scheme,
    )?;
    let hotspots = top_hotspots(world, &ranking, &overall, config.top_k);
    Ok(RunResult {
        rows: world.grid().rows(),
        cols: world.grid().cols(),
        cell_ids: world.cell_ids().to_vec(),
        grade_count: config.grade_count,
        forecasts,
        class_counts: overall.counts(),
        overall,
        hotspots,
    })
}

fn top_hotspots(
    world: &World,
    ranking: &Ranking,
    classes: &ConflictClassField,
    k: usize,
) -> Vec<Hotspot> {
    let mut out = Vec::new();
    for tier in ranking.tiers().rev() {
        if out.len() >= k || ranking.vector(tier[0]).is_zero() {
            break;
        }
        out.extend(tier.iter().map(|&cell| Hotspot {
            cell,
            cell_id: world.cell_id(cell),
            vector: ranking.vector(cell).clone(),
            class: classes.classes[cell],
        }));
    }
    out
}

/// Runs one scenario per alpha, each with that alpha applied to every
/// (country, resource) pair not pinned in `base`. Runs are independent and
/// evaluated in parallel; output order follows `alphas`.
pub fn sweep_alpha(
    world: &World,
    layers: &LayerSet,
    base: &ScenarioConfig,
    alphas: &[f64],
) -> Result<Vec<(f64, RunResult)>> {
    if let Some(&a) = alphas.iter().find(|a| !(0.0..=1.0).contains(*a)) {
        return Err(Error::AlphaOutOfRange(a));
    }
    let distances = DistanceTable::compute(world)?;
    alphas
        .par_iter()
        .map(|&a| {
            let cfg = base.with_uniform_alpha(a);
            run_with_distances(world, &distances, layers, &cfg).map(|r| (a, r))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Zone {
    International,
    Eez(CountryCode),
}

impl Zone {
    pub fn of(owner: &Owner) -> Self {
        match owner {
            Owner::International => Zone::International,
            Owner::Owned(c) => Zone::Eez(c.clone()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Zone::International => "INTL".into(),
            Zone::Eez(c) => format!("EEZ:{c}"),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DeltaCounts {
    pub cells: usize,
    pub upgraded: usize,
    pub downgraded: usize,
    pub unchanged: usize,
    /// Sum of class deltas.
    pub net: i64,
}

impl DeltaCounts {
    fn add(&mut self, delta: i32) {
        self.cells += 1;
        self.net += delta as i64;
        match delta.signum() {
            1 => self.upgraded += 1,
            -1 => self.downgraded += 1,
            _ => self.unchanged += 1,
        }
    }

    fn merge(&mut self, other: &DeltaCounts) {
        self.cells += other.cells;
        self.upgraded += other.upgraded;
        self.downgraded += other.downgraded;
        self.unchanged += other.unchanged;
        self.net += other.net;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunComparison {
    /// `class(r2) - class(r1)` per cell.
    pub deltas: Vec<i32>,
    pub total: DeltaCounts,
    /// International first, then each owner's EEZ in country order.
    pub zones: Vec<(Zone, DeltaCounts)>,
}

impl RunComparison {
    /// Own-EEZ, foreign-EEZ and international counts from one country's
    /// point of view.
    pub fn country_view(&self, country: &CountryCode) -> [DeltaCounts; 3] {
        let mut own = DeltaCounts::default();
        let mut foreign = DeltaCounts::default();
        let mut intl = DeltaCounts::default();
        for (zone, counts) in &self.zones {
            match zone {
                Zone::International => intl.merge(counts),
                Zone::Eez(c) if c == country => own.merge(counts),
                Zone::Eez(_) => foreign.merge(counts),
            }
        }
        [own, foreign, intl]
    }
}

pub fn compare_runs(world: &World, r1: &RunResult, r2: &RunResult) -> Result<RunComparison> {
    if r1.len() != r2.len() || r1.rows != r2.rows || r1.cols != r2.cols {
        return Err(Error::GridMismatch(r1.len(), r2.len()));
    }
    if world.len() != r1.len() {
        return Err(Error::GridMismatch(world.len(), r1.len()));
    }
    let deltas: Vec<i32> = r1
        .overall
        .classes
        .iter()
        .zip(&r2.overall.classes)
        .map(|(&a, &b)| b as i32 - a as i32)
        .collect();

    let mut zones: Vec<(Zone, DeltaCounts)> = std::iter::once(Zone::International)
        .chain(
            world
                .countries()
                .iter()
                .filter(|c| c.is_arctic())
                .map(|c| Zone::Eez(c.code.clone())),
        )
        .map(|z| (z, DeltaCounts::default()))
        .collect();
    let mut total = DeltaCounts::default();
    for (cell, &d) in deltas.iter().enumerate() {
        total.add(d);
        let zone = Zone::of(world.owner(cell));
        if let Some((_, counts)) = zones.iter_mut().find(|(z, _)| *z == zone) {
            counts.add(d);
        }
    }
    Ok(RunComparison {
        deltas,
        total,
        zones,
    })
}

/// How the most intense class is split between EEZs and international water.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TopClassShare {
    /// Highest nonzero class present, if any.
    pub class: Option<u8>,
    pub cells: usize,
    pub in_eez: usize,
}

impl TopClassShare {
    pub fn eez_fraction(&self) -> f64 {
        if self.cells == 0 {
            0.0
        } else {
            self.in_eez as f64 / self.cells as f64
        }
    }
}

pub fn top_class_share(world: &World, result: &RunResult) -> TopClassShare {
    let top = result
        .overall
        .classes
        .iter()
        .copied()
        .filter(|&c| c > 0)
        .max();
    let Some(top) = top else {
        return TopClassShare {
            class: None,
            cells: 0,
            in_eez: 0,
        };
    };
    let cells: Vec<usize> = (0..result.len())
        .filter(|&c| result.overall.classes[c] == top)
        .collect();
    let in_eez = cells
        .iter()
        .filter(|&&c| *world.owner(c) != Owner::International)
        .count();
    TopClassShare {
        class: Some(top),
        cells: cells.len(),
        in_eez,
    }
}

/// Per-alpha summary row of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub share: TopClassShare,
    pub class_counts: Vec<usize>,
}

pub fn summarize_sweep(world: &World, runs: &[(f64, RunResult)]) -> Vec<SweepRow> {
    runs.iter()
        .map(|(alpha, r)| SweepRow {
            alpha: *alpha,
            share: top_class_share(world, r),
            class_counts: r.class_counts.clone(),
        })
        .collect()
}

/// Grades each country holds in cells of *other* countries' EEZs.
pub fn foreign_eez_grades<'a>(
    world: &'a World,
    fields: &'a [GradeField],
) -> impl Iterator<Item = (usize, &'a CountryCode, u8)> + 'a {
    fields.iter().flat_map(move |f| {
        let code = f.country.as_ref().expect("per-country grade field");
        (0..f.len())
            .filter(move |&cell| world.cell_status(cell, code) == CellStatus::Foreign)
            .map(move |cell| (cell, code, f.grades[cell]))
    })
}
