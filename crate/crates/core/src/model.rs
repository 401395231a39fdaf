//! Grid geometry, country ownership and per-country distance fields.
//!
//! A [`World`] is a row-major grid of cells, each tagged as part of one
//! country's EEZ or as international water. Distances to a country are
//! measured from a cell center to the nearest cell center that country owns
//! (or to its anchor coordinate when it owns none). Ownership by a *third*
//! country never changes a distance; the foreign-EEZ discount lives in the
//! utility stage.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mean Earth radius used by every distance computation.
pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// Default southern bound of the appraisal area, in degrees north.
pub const DEFAULT_SOUTHERN_BOUND: f64 = 66.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatLon {
    pub lat: f64,
    pub lon: f64,
}

impl LatLon {
    pub const fn new(lat: f64, lon: f64) -> Self {
        Self { lat, lon }
    }

    fn is_valid(&self) -> bool {
        self.lat.is_finite()
            && self.lon.is_finite()
            && (-90.0..=90.0).contains(&self.lat)
            && (-180.0..180.0).contains(&self.lon)
    }
}

/// Haversine distance on a sphere of radius [`EARTH_RADIUS_KM`].
pub fn great_circle_km(p: LatLon, q: LatLon) -> f64 {
    let (phi1, phi2) = (p.lat.to_radians(), q.lat.to_radians());
    let dphi = phi2 - phi1;
    let dlambda = (q.lon - p.lon).to_radians();
    let h = (dphi / 2.0).sin().powi(2) + phi1.cos() * phi2.cos() * (dlambda / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_KM * h.sqrt().min(1.0).asin()
}

/// Row-major grid of cell centers.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    rows: usize,
    cols: usize,
    centers: Vec<LatLon>,
    southern_bound: f64,
}

impl GridSpec {
    pub fn new(rows: usize, cols: usize, centers: Vec<LatLon>) -> Result<Self> {
        Self::with_southern_bound(rows, cols, centers, DEFAULT_SOUTHERN_BOUND)
    }

    pub fn with_southern_bound(
        rows: usize,
        cols: usize,
        centers: Vec<LatLon>,
        southern_bound: f64,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyGrid);
        }
        if rows * cols != centers.len() {
            return Err(Error::ShapeMismatch {
                expected: rows * cols,
                found: centers.len(),
            });
        }
        for (cell, c) in centers.iter().enumerate() {
            if !c.is_valid() {
                return Err(Error::InvalidCoordinate {
                    cell,
                    lat: c.lat,
                    lon: c.lon,
                });
            }
            if c.lat < southern_bound {
                return Err(Error::SouthOfBound {
                    cell,
                    lat: c.lat,
                    bound: southern_bound,
                });
            }
        }
        Ok(Self {
            rows,
            cols,
            centers,
            southern_bound,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn centers(&self) -> &[LatLon] {
        &self.centers
    }

    pub fn center(&self, cell: usize) -> LatLon {
        self.centers[cell]
    }

    pub fn southern_bound(&self) -> f64 {
        self.southern_bound
    }

    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.cols + col
    }

    pub fn row_col(&self, cell: usize) -> (usize, usize) {
        (cell / self.cols, cell % self.cols)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CountryCode(String);

impl CountryCode {
    pub fn new(code: impl Into<String>) -> Self {
        Self(code.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CountryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for CountryCode {
    fn from(s: &str) -> Self {
        Self(s.to_owned())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountryKind {
    Arctic,
    NonArctic,
}

impl CountryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CountryKind::Arctic => "arctic",
            CountryKind::NonArctic => "non-arctic",
        }
    }
}

impl FromStr for CountryKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "arctic" => Ok(CountryKind::Arctic),
            "non-arctic" | "nonarctic" => Ok(CountryKind::NonArctic),
            other => Err(format!("unknown country kind `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Country {
    pub code: CountryCode,
    pub kind: CountryKind,
    /// Distance origin used when the country owns no grid cells.
    pub anchor: Option<LatLon>,
}

impl Country {
    pub fn arctic(code: &str) -> Self {
        Self {
            code: code.into(),
            kind: CountryKind::Arctic,
            anchor: None,
        }
    }

    pub fn non_arctic(code: &str, anchor: LatLon) -> Self {
        Self {
            code: code.into(),
            kind: CountryKind::NonArctic,
            anchor: Some(anchor),
        }
    }

    pub fn is_arctic(&self) -> bool {
        self.kind == CountryKind::Arctic
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Owner {
    Owned(CountryCode),
    International,
}

impl Owner {
    pub fn owned(code: &str) -> Self {
        Owner::Owned(code.into())
    }

    pub fn code(&self) -> Option<&CountryCode> {
        match self {
            Owner::Owned(c) => Some(c),
            Owner::International => None,
        }
    }
}

/// How a cell relates to one particular country.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellStatus {
    Own,
    Foreign,
    International,
}

/// External cell identifier, written `c<n>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId(pub u32);

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

impl FromStr for CellId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let digits = s.strip_prefix('c').unwrap_or(s);
        digits
            .parse::<u32>()
            .map(CellId)
            .map_err(|_| format!("invalid cell id `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct World {
    grid: GridSpec,
    cell_ids: Vec<CellId>,
    countries: Vec<Country>,
    ownership: Vec<Owner>,
}

/// Validates and assembles a [`World`]. Cell ids default to the row-major
/// index; see [`World::with_cell_ids`].
pub fn build_world(
    grid: GridSpec,
    countries: Vec<Country>,
    ownership: Vec<Owner>,
) -> Result<World> {
    if ownership.len() != grid.len() {
        return Err(Error::ShapeMismatch {
            expected: grid.len(),
            found: ownership.len(),
        });
    }
    let mut seen = BTreeSet::new();
    for c in &countries {
        if !seen.insert(&c.code) {
            return Err(Error::DuplicateCountry(c.code.to_string()));
        }
        if let Some(anchor) = c.anchor {
            if !anchor.is_valid() {
                return Err(Error::InvalidCoordinate {
                    cell: usize::MAX,
                    lat: anchor.lat,
                    lon: anchor.lon,
                });
            }
        }
    }
    for (cell, owner) in ownership.iter().enumerate() {
        if let Owner::Owned(code) = owner {
            let country = countries
                .iter()
                .find(|c| &c.code == code)
                .ok_or_else(|| Error::UnknownCountry(code.to_string()))?;
            if !country.is_arctic() {
                return Err(Error::NonArcticOwnsCell {
                    code: code.to_string(),
                    cell,
                });
            }
        }
    }
    let cell_ids = (0..grid.len() as u32).map(CellId).collect();
    Ok(World {
        grid,
        cell_ids,
        countries,
        ownership,
    })
}

impl World {
    pub fn with_cell_ids(mut self, ids: Vec<CellId>) -> Result<Self> {
        if ids.len() != self.grid.len() {
            return Err(Error::ShapeMismatch {
                expected: self.grid.len(),
                found: ids.len(),
            });
        }
        let mut seen = BTreeSet::new();
        for id in &ids {
            if !seen.insert(*id) {
                return Err(Error::DuplicateCell(id.to_string()));
            }
        }
        self.cell_ids = ids;
        Ok(self)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn countries(&self) -> &[Country] {
        &self.countries
    }

    pub fn country(&self, code: &CountryCode) -> Result<&Country> {
        self.countries
            .iter()
            .find(|c| &c.code == code)
            .ok_or_else(|| Error::UnknownCountry(code.to_string()))
    }

    pub fn ownership(&self) -> &[Owner] {
        &self.ownership
    }

    pub fn owner(&self, cell: usize) -> &Owner {
        &self.ownership[cell]
    }

    pub fn cell_ids(&self) -> &[CellId] {
        &self.cell_ids
    }

    pub fn cell_id(&self, cell: usize) -> CellId {
        self.cell_ids[cell]
    }

    pub fn cell_index(&self, id: CellId) -> Option<usize> {
        self.cell_ids.iter().position(|c| *c == id)
    }

    pub fn cell_status(&self, cell: usize, country: &CountryCode) -> CellStatus {
        match &self.ownership[cell] {
            Owner::International => CellStatus::International,
            Owner::Owned(c) if c == country => CellStatus::Own,
            Owner::Owned(_) => CellStatus::Foreign,
        }
    }

    pub fn owned_cells<'a>(&'a self, country: &'a CountryCode) -> impl Iterator<Item = usize> + 'a {
        self.ownership
            .iter()
            .enumerate()
            .filter(move |(_, o)| o.code() == Some(country))
            .map(|(i, _)| i)
    }

    /// Same grid and countries with every cell marked international.
    pub fn relabeled_international(&self) -> World {
        World {
            ownership: vec![Owner::International; self.len()],
            ..self.clone()
        }
    }
}

/// Per-cell distance in km from one country.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceField {
    pub country: CountryCode,
    pub values: Vec<f64>,
}

pub fn distance_field(world: &World, country: &CountryCode) -> Result<DistanceField> {
    let declared = world.country(country)?;
    let owned: Vec<LatLon> = world
        .owned_cells(country)
        .map(|c| world.grid.center(c))
        .collect();
    let sources = if !owned.is_empty() {
        owned
    } else if let Some(anchor) = declared.anchor {
        vec![anchor]
    } else {
        return Err(Error::NoDistanceSource(country.to_string()));
    };

    let values = (0..world.len())
        .map(|cell| {
            if world.cell_status(cell, country) == CellStatus::Own {
                return 0.0;
            }
            let here = world.grid.center(cell);
            sources
                .iter()
                .map(|&s| great_circle_km(here, s))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    Ok(DistanceField {
        country: country.clone(),
        values,
    })
}

/// Distance fields for every declared country, in declaration order.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceTable {
    fields: Vec<DistanceField>,
}

impl DistanceTable {
    pub fn compute(world: &World) -> Result<Self> {
        let fields = world
            .countries()
            .iter()
            .map(|c| distance_field(world, &c.code))
            .collect::<Result<_>>()?;
        Ok(Self { fields })
    }

    pub fn get(&self, country: &CountryCode) -> Result<&DistanceField> {
        self.fields
            .iter()
            .find(|f| &f.country == country)
            .ok_or_else(|| Error::UnknownCountry(country.to_string()))
    }

    pub fn fields(&self) -> &[DistanceField] {
        &self.fields
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(rows: usize, cols: usize) -> GridSpec {
        let centers = (0..rows * cols)
            .map(|i| LatLon::new(70.0 + (i / cols) as f64, -10.0 + 5.0 * (i % cols) as f64))
            .collect();
        GridSpec::new(rows, cols, centers).unwrap()
    }

    fn nine_countries() -> Vec<Country> {
        let mut v: Vec<Country> = ["CA", "DK", "IS", "NO", "RU", "US"]
            .into_iter()
            .map(Country::arctic)
            .collect();
        v.push(Country::non_arctic("CN", LatLon::new(39.9, 116.4)));
        v.push(Country::non_arctic("JP", LatLon::new(35.7, 139.7)));
        v.push(Country::non_arctic("KR", LatLon::new(37.5, 127.0)));
        v
    }

    #[test]
    fn all_international_world() {
        let w = build_world(grid(2, 2), vec![], vec![Owner::International; 4]).unwrap();
        assert_eq!(w.len(), 4);
        assert!(w.ownership().iter().all(|o| *o == Owner::International));
    }

    #[test]
    fn undeclared_owner_is_rejected() {
        let mut own = vec![Owner::International; 4];
        own[1] = Owner::owned("XX");
        let err = build_world(grid(2, 2), nine_countries(), own).unwrap_err();
        assert!(matches!(err, Error::UnknownCountry(c) if c == "XX"));
    }

    #[test]
    fn russia_owns_one_cell() {
        let mut own = vec![Owner::International; 4];
        own[2] = Owner::owned("RU");
        let w = build_world(grid(2, 2), nine_countries(), own).unwrap();
        assert_eq!(w.cell_status(2, &"RU".into()), CellStatus::Own);
        assert_eq!(w.cell_status(2, &"NO".into()), CellStatus::Foreign);
        assert_eq!(w.cell_status(0, &"RU".into()), CellStatus::International);
    }

    #[test]
    fn shape_and_ownership_validation() {
        let err = build_world(grid(2, 2), vec![], vec![Owner::International; 3]).unwrap_err();
        assert!(matches!(
            err,
            Error::ShapeMismatch {
                expected: 4,
                found: 3
            }
        ));

        let mut own = vec![Owner::International; 4];
        own[0] = Owner::owned("JP");
        let err = build_world(grid(2, 2), nine_countries(), own).unwrap_err();
        assert!(matches!(err, Error::NonArcticOwnsCell { .. }));

        let mut dup = nine_countries();
        dup.push(Country::arctic("RU"));
        let err = build_world(grid(2, 2), dup, vec![Owner::International; 4]).unwrap_err();
        assert!(matches!(err, Error::DuplicateCountry(_)));
    }

    #[test]
    fn grid_rejects_cells_south_of_bound() {
        let centers = vec![LatLon::new(65.0, 0.0)];
        assert!(matches!(
            GridSpec::new(1, 1, centers.clone()),
            Err(Error::SouthOfBound { .. })
        ));
        assert!(GridSpec::with_southern_bound(1, 1, centers, 60.0).is_ok());
        assert!(matches!(
            GridSpec::new(1, 1, vec![LatLon::new(70.0, 180.0)]),
            Err(Error::InvalidCoordinate { .. })
        ));
    }

    #[test]
    fn haversine_identity_and_half_circumference() {
        let p = LatLon::new(71.5, 42.25);
        assert_eq!(great_circle_km(p, p), 0.0);
        let d = great_circle_km(LatLon::new(0.0, 0.0), LatLon::new(0.0, 180.0));
        assert!((d - std::f64::consts::PI * EARTH_RADIUS_KM).abs() < 1e-9);
        assert!((d - 20015.09).abs() < 0.01);
    }

    #[test]
    fn haversine_along_meridian_matches_frozen_value() {
        // Frozen from an independent spherical-law-of-cosines evaluation.
        let d = great_circle_km(LatLon::new(66.0, 30.0), LatLon::new(70.0, 30.0));
        assert!((d - 444.779_706_578_234_95).abs() < 1e-6, "{d}");
    }

    #[test]
    fn distance_zero_on_owned_and_single_source_elsewhere() {
        let mut own = vec![Owner::International; 4];
        own[0] = Owner::owned("RU");
        let w = build_world(grid(2, 2), nine_countries(), own).unwrap();
        let f = distance_field(&w, &"RU".into()).unwrap();
        assert_eq!(f.values[0], 0.0);
        for cell in 1..4 {
            let expect = great_circle_km(w.grid().center(cell), w.grid().center(0));
            assert_eq!(f.values[cell], expect);
            assert!(f.values[cell] > 0.0);
        }
    }

    #[test]
    fn foreign_ownership_does_not_alter_distance() {
        let mut own = vec![Owner::International; 4];
        own[0] = Owner::owned("RU");
        let a = build_world(grid(2, 2), nine_countries(), own.clone()).unwrap();
        own[3] = Owner::owned("NO");
        let b = build_world(grid(2, 2), nine_countries(), own).unwrap();
        assert_eq!(
            distance_field(&a, &"RU".into()).unwrap(),
            distance_field(&b, &"RU".into()).unwrap()
        );
    }

    #[test]
    fn non_arctic_uses_anchor_and_arctic_without_cells_fails() {
        let w = build_world(grid(2, 2), nine_countries(), vec![Owner::International; 4]).unwrap();
        let jp = distance_field(&w, &"JP".into()).unwrap();
        let anchor = LatLon::new(35.7, 139.7);
        for cell in 0..4 {
            assert_eq!(
                jp.values[cell],
                great_circle_km(w.grid().center(cell), anchor)
            );
        }
        assert!(matches!(
            distance_field(&w, &"CA".into()),
            Err(Error::NoDistanceSource(c)) if c == "CA"
        ));
        assert!(matches!(
            distance_field(&w, &"ZZ".into()),
            Err(Error::UnknownCountry(_))
        ));
    }

    #[test]
    fn cell_id_text_form() {
        assert_eq!(CellId(5).to_string(), "c5");
        assert_eq!("c5".parse::<CellId>().unwrap(), CellId(5));
        assert_eq!("17".parse::<CellId>().unwrap(), CellId(17));
        assert!("cx".parse::<CellId>().is_err());
    }
}
