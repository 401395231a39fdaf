//! Proptest strategies for small random worlds and layers.

use proptest::prelude::*;

use conflict_zones::{
    build_world, Country, GridSpec, LatLon, LayerSet, Owner, Resource, ResourceLayer, World,
};

const ARCTIC: [&str; 4] = ["CA", "NO", "RU", "US"];
const OTHERS: [(&str, f64, f64); 2] = [("CN", 39.9, 116.4), ("JP", 35.7, 139.7)];

#[derive(Debug, Clone)]
pub struct Instance {
    pub world: World,
    pub layers: LayerSet,
}

fn value() -> impl Strategy<Value = f64> {
    prop_oneof![
        2 => Just(0.0),
        3 => (1u32..400).prop_map(|v| v as f64 / 4.0),
    ]
}

prop_compose! {
    pub fn instance()(
        rows in 1usize..5,
        cols in 1usize..6,
        arctic in 1usize..=4,
        others in 0usize..=2,
    )(
        centers in proptest::collection::vec((66.5f64..89.5, -180.0f64..179.9), rows * cols),
        owners in proptest::collection::vec(0..=arctic, rows * cols),
        layers in proptest::collection::vec(value(), 4 * rows * cols),
        rows in Just(rows),
        cols in Just(cols),
        arctic in Just(arctic),
        others in Just(others),
    ) -> Instance {
        let cells = rows * cols;
        let grid = GridSpec::new(
            rows,
            cols,
            centers.iter().map(|&(lat, lon)| LatLon::new(lat, lon)).collect(),
        )
        .unwrap();
        let mut countries: Vec<Country> = ARCTIC[..arctic].iter().map(|c| Country::arctic(c)).collect();
        countries.extend(OTHERS[..others].iter().map(|&(c, lat, lon)| Country::non_arctic(c, LatLon::new(lat, lon))));
        let mut ownership: Vec<Owner> = owners
            .iter()
            .map(|&k| if k == arctic { Owner::International } else { Owner::owned(ARCTIC[k]) })
            .collect();
        // Arctic countries need at least one cell to measure distance from.
        for (k, code) in ARCTIC[..arctic].iter().enumerate() {
            if !ownership.iter().any(|o| o.code().map(|c| c.as_str()) == Some(*code)) {
                ownership[k % cells] = Owner::owned(code);
            }
        }
        // A country may have lost its only cell to a later one; give it an anchor.
        for c in countries.iter_mut() {
            if c.is_arctic() && !ownership.iter().any(|o| o.code() == Some(&c.code)) {
                c.anchor = Some(LatLon::new(80.0, 0.0));
            }
        }
        let world = build_world(grid, countries, ownership).unwrap();
        let mut set = LayerSet::new();
        for (i, r) in Resource::ALL.into_iter().enumerate() {
            let values = layers[i * cells..(i + 1) * cells].to_vec();
            set.insert(ResourceLayer::new(r, values).unwrap());
        }
        Instance { world, layers: set }
    }
}
