//! The files under `data/arctic9` are the serialized synthetic fixture.
//! Run with `BLESS=1` to rewrite them from the generator.

use std::path::PathBuf;

use conflict_zones::fixtures::{arctic9, arctic9_config};
use conflict_zones::io;
use conflict_zones::{Resource, ScenarioConfig};

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/arctic9")
}

#[test]
fn arctic9_files_match_generator() {
    let (world, layers) = arctic9();
    let mut expected = vec![
        (
            "countries.csv".to_owned(),
            io::write_countries(world.countries()),
        ),
        ("world.csv".to_owned(), io::write_world(&world)),
    ];
    for r in Resource::ALL {
        expected.push((
            format!("{r}.csv"),
            io::write_layer(layers.get(r).unwrap(), &world),
        ));
    }
    let dir = data_dir();
    for (name, text) in expected {
        let path = dir.join(&name);
        if std::env::var_os("BLESS").is_some() {
            std::fs::write(&path, &text).unwrap();
        }
        let on_disk = std::fs::read_to_string(&path).unwrap();
        assert_eq!(on_disk, text, "{name} is stale; rerun with BLESS=1");
    }
}

#[test]
fn arctic9_scenario_file_matches_fixture_config() {
    let loaded = ScenarioConfig::load(&data_dir().join("scenario.toml")).unwrap();
    assert_eq!(loaded.scenario, arctic9_config());
    assert!(loaded.defaulted.is_empty(), "{:?}", loaded.defaulted);
    assert_eq!(loaded.inputs.layers.len(), 4);
    assert_eq!(loaded.inputs.world, Some(data_dir().join("world.csv")));
}

#[test]
fn arctic9_files_load_back_to_fixture() {
    let loaded = ScenarioConfig::load(&data_dir().join("scenario.toml")).unwrap();
    let p = loaded.inputs;
    let (world, layers) = io::load_inputs(
        p.countries.as_deref().unwrap(),
        p.world.as_deref().unwrap(),
        &p.layers,
    )
    .unwrap();
    let (w0, l0) = arctic9();
    assert_eq!(world, w0);
    for r in Resource::ALL {
        assert_eq!(layers.get(r).unwrap(), l0.get(r).unwrap());
    }
}
