use std::fs;
use std::path::Path;

use hpl_core::bench::ScenarioSpec;
use hpl_core::DesignConfigFile;

fn configs() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs"))
}

#[test]
fn design_configs_parse() {
    let mut n = 0;
    for entry in fs::read_dir(configs()).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "toml") {
            let file = DesignConfigFile::from_toml(&fs::read_to_string(&p).unwrap()).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
            assert_eq!(DesignConfigFile::from_toml(&file.to_toml()).unwrap(), file);
            n += 1;
        }
    }
    assert_eq!(n, 3);
}

#[test]
fn scenario_specs_parse() {
    let mut n = 0;
    for entry in fs::read_dir(configs().join("scenarios")).unwrap() {
        let p = entry.unwrap().path();
        let spec = ScenarioSpec::from_toml(&fs::read_to_string(&p).unwrap()).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        assert_eq!(spec.seed, 1);
        assert_eq!(format!("{}.toml", serde_json::to_value(spec.kind).unwrap().as_str().unwrap()), p.file_name().unwrap().to_str().unwrap());
        n += 1;
    }
    assert_eq!(n, 9);
}
