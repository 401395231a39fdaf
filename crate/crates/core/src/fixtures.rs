//! Synthetic worlds used by the bundled example data and the test suites.
//!
//! None of these are survey data. They are small deterministic layouts that
//! place deposits, fish and routes where the scenario properties can be
//! exercised: a nine-country polar grid, a Barents-style basin between two
//! EEZs, and a strip with both EEZ and international deposits.

use crate::config::ScenarioConfig;
use crate::model::{build_world, Country, CountryCode, GridSpec, LatLon, Owner, World};
use crate::scenario::LayerSet;
use crate::utility::{Resource, ResourceLayer};

fn grid(lats: &[f64], lons: &[f64]) -> GridSpec {
    let centers = lats
        .iter()
        .flat_map(|&lat| lons.iter().map(move |&lon| LatLon::new(lat, lon)))
        .collect();
    GridSpec::new(lats.len(), lons.len(), centers).expect("fixture grid is valid")
}

/// Six Arctic states and three non-Arctic ones anchored at their capitals.
pub fn nine_countries() -> Vec<Country> {
    let mut v: Vec<Country> = ["CA", "DK", "IS", "NO", "RU", "US"]
        .into_iter()
        .map(Country::arctic)
        .collect();
    v.push(Country::non_arctic("CN", LatLon::new(39.9, 116.4)));
    v.push(Country::non_arctic("JP", LatLon::new(35.7, 139.7)));
    v.push(Country::non_arctic("KR", LatLon::new(37.5, 127.0)));
    v
}

pub const ARCTIC9_ROWS: usize = 12;
pub const ARCTIC9_COLS: usize = 24;

/// Row and column of the Barents basin cell in [`arctic9`].
pub const ARCTIC9_BARENTS: (usize, usize) = (4, 13);

/// 12 x 24 grid of 2 x 15 degree cells from 66N to the pole.
pub fn arctic9_world() -> World {
    let lats: Vec<f64> = (0..ARCTIC9_ROWS).map(|r| 67.0 + 2.0 * r as f64).collect();
    let lons: Vec<f64> = (0..ARCTIC9_COLS)
        .map(|c| -172.5 + 15.0 * c as f64)
        .collect();
    let grid = grid(&lats, &lons);

    // Longitude sectors (column ranges) and how far north each EEZ reaches.
    let sectors: [(&str, std::ops::Range<usize>, usize); 6] = [
        ("US", 0..2, 3),
        ("CA", 2..8, 4),
        ("DK", 8..11, 5),
        ("IS", 11..12, 2),
        ("NO", 12..14, 4),
        ("RU", 14..24, 4),
    ];
    let mut ownership = vec![Owner::International; grid.len()];
    for (code, cols, depth) in sectors {
        for row in 0..depth {
            for col in cols.clone() {
                ownership[grid.index(row, col)] = Owner::owned(code);
            }
        }
    }
    // Svalbard and Franz Josef Land flank the basin cell.
    ownership[grid.index(4, 12)] = Owner::owned("NO");
    ownership[grid.index(4, 14)] = Owner::owned("RU");
    ownership[grid.index(4, 15)] = Owner::owned("RU");

    build_world(grid, nine_countries(), ownership).expect("fixture world is valid")
}

fn layer_from(
    resource: Resource,
    rows: usize,
    cols: usize,
    cells: &[((usize, usize), f64)],
) -> ResourceLayer {
    let mut values = vec![0.0; rows * cols];
    for &((r, c), v) in cells {
        values[r * cols + c] = v;
    }
    ResourceLayer::new(resource, values).expect("fixture layer is valid")
}

pub fn arctic9_layers() -> LayerSet {
    let (rows, cols) = (ARCTIC9_ROWS, ARCTIC9_COLS);
    let gas = layer_from(
        Resource::Gas,
        rows,
        cols,
        &[
            ((4, 13), 100.0),
            ((3, 13), 40.0),
            ((4, 14), 45.0),
            ((5, 13), 30.0),
            ((5, 14), 25.0),
            ((2, 17), 60.0),
            ((2, 18), 50.0),
            ((3, 19), 20.0),
            ((1, 1), 35.0),
            ((4, 2), 20.0),
            ((3, 9), 25.0),
            ((8, 5), 10.0),
            ((9, 20), 8.0),
        ],
    );
    let oil = layer_from(
        Resource::Oil,
        rows,
        cols,
        &[
            ((4, 13), 80.0),
            ((3, 14), 35.0),
            ((5, 12), 25.0),
            ((1, 1), 70.0),
            ((1, 0), 30.0),
            ((3, 1), 15.0),
            ((2, 16), 50.0),
            ((2, 4), 25.0),
            ((4, 8), 20.0),
            ((3, 10), 35.0),
            ((10, 12), 6.0),
        ],
    );
    let mut fish_cells = Vec::new();
    for row in 0..6 {
        for col in 11..16 {
            let core = (3..=4).contains(&row) && (12..=14).contains(&col);
            fish_cells.push(((row, col), if core { 3.0 } else { 1.0 }));
        }
    }
    for row in 0..3 {
        fish_cells.push(((row, 0), 2.0));
        fish_cells.push(((row, 23), 2.0));
        fish_cells.push(((row, 9), 1.5));
        fish_cells.push(((row, 10), 1.5));
    }
    let fish = layer_from(Resource::Fish, rows, cols, &fish_cells);

    let mut values = vec![0.0; rows * cols];
    let mut routes: Vec<Option<String>> = vec![None; rows * cols];
    let mut mark = |r: usize, c: usize, id: &str| {
        values[r * cols + c] = 1.0;
        routes[r * cols + c] = Some(id.to_owned());
    };
    // Northern Sea Route across the Russian sector to Bering Strait.
    for c in 13..24 {
        mark(3, c, "NSR");
    }
    mark(3, 0, "NSR");
    // Northwest Passage through the Canadian sector.
    for c in 1..9 {
        mark(4, c, "NWP");
    }
    // Transpolar route straight over the pole.
    for r in 5..ARCTIC9_ROWS {
        mark(r, 12, "TSR");
        mark(r, 0, "TSR");
    }
    let maritime = ResourceLayer::new(Resource::Maritime, values)
        .and_then(|l| l.with_route_ids(routes))
        .expect("fixture layer is valid");

    LayerSet::new()
        .with(oil)
        .with(gas)
        .with(fish)
        .with(maritime)
}

pub fn arctic9() -> (World, LayerSet) {
    (arctic9_world(), arctic9_layers())
}

/// Scenario used with the bundled data: default settings plus route
/// importance for the non-Arctic states.
pub fn arctic9_config() -> ScenarioConfig {
    ScenarioConfig {
        importance: [("CN", 0.9), ("JP", 0.8), ("KR", 0.7)]
            .into_iter()
            .map(|(c, v)| (CountryCode::from(c), v))
            .collect(),
        ..ScenarioConfig::default()
    }
}

/// Cell index of the basin in [`barents`].
pub const BARENTS_CELL: usize = 12;

/// 5 x 5 basin: a large international deposit in the middle cell, ringed by
/// Norwegian, Russian and Icelandic EEZ cells with smaller deposits.
pub fn barents() -> (World, LayerSet) {
    let lats = [70.0, 72.0, 74.0, 76.0, 78.0];
    let lons = [10.0, 20.0, 30.0, 40.0, 50.0];
    let grid = grid(&lats, &lons);
    let countries = vec![
        Country::arctic("NO"),
        Country::arctic("RU"),
        Country::arctic("IS"),
        Country::non_arctic("CN", LatLon::new(39.9, 116.4)),
    ];
    let mut ownership = vec![Owner::International; 25];
    for cell in [0, 1, 5, 6, 10] {
        ownership[cell] = Owner::owned("NO");
    }
    for cell in [3, 4, 8, 9, 14] {
        ownership[cell] = Owner::owned("RU");
    }
    for cell in [15, 20, 21] {
        ownership[cell] = Owner::owned("IS");
    }
    let world = build_world(grid, countries, ownership).expect("fixture world is valid");

    let mut gas = vec![0.0; 25];
    let mut oil = vec![0.0; 25];
    let mut fish = vec![0.0; 25];
    for (cell, v) in [
        (0, 20.0),
        (6, 30.0),
        (8, 30.0),
        (4, 25.0),
        (15, 15.0),
        (22, 10.0),
        (2, 12.0),
    ] {
        gas[cell] = v;
    }
    for (cell, v) in [
        (1, 18.0),
        (9, 22.0),
        (20, 10.0),
        (17, 8.0),
        (11, 15.0),
        (13, 15.0),
    ] {
        oil[cell] = v;
    }
    for cell in [6, 7, 8, 11, 13, 16, 17, 18] {
        fish[cell] = 1.0;
    }
    gas[BARENTS_CELL] = 120.0;
    oil[BARENTS_CELL] = 90.0;
    fish[BARENTS_CELL] = 2.0;
    let mut maritime = vec![0.0; 25];
    for cell in [3, 8, 13, 18, 23] {
        maritime[cell] = 1.0;
    }
    let layers = LayerSet::new()
        .with(ResourceLayer::new(Resource::Gas, gas).unwrap())
        .with(ResourceLayer::new(Resource::Oil, oil).unwrap())
        .with(ResourceLayer::new(Resource::Fish, fish).unwrap())
        .with(ResourceLayer::new(Resource::Maritime, maritime).unwrap());
    (world, layers)
}

/// 4 x 6 strip: NO owns the two western columns, RU the two eastern ones,
/// the middle two are international. Every cell holds gas, thinning out
/// towards the pole.
pub fn dual_zone() -> (World, LayerSet) {
    let lats = [70.0, 72.0, 74.0, 76.0];
    let lons = [0.0, 10.0, 20.0, 30.0, 40.0, 50.0];
    let grid = grid(&lats, &lons);
    let countries = vec![
        Country::arctic("NO"),
        Country::arctic("RU"),
        Country::non_arctic("JP", LatLon::new(35.7, 139.7)),
    ];
    let ownership = (0..24)
        .map(|cell| match cell % 6 {
            0 | 1 => Owner::owned("NO"),
            4 | 5 => Owner::owned("RU"),
            _ => Owner::International,
        })
        .collect();
    let world = build_world(grid, countries, ownership).expect("fixture world is valid");

    let gas: Vec<f64> = (0..24)
        .map(|cell| 100.0 - 5.0 * (cell / 6) as f64)
        .collect();
    let layers = LayerSet::new()
        .with(ResourceLayer::new(Resource::Gas, gas).unwrap())
        .with(ResourceLayer::zeros(Resource::Oil, 24))
        .with(ResourceLayer::zeros(Resource::Fish, 24))
        .with(ResourceLayer::zeros(Resource::Maritime, 24));
    (world, layers)
}
