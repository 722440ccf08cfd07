use std::fs;
use std::path::Path;

use aqrm::config::{parse_config, ConfigError, ParsedConfig, RunConfig};
use aqrm::sweep::Axis;

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn minimal_sweep_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "s.cfg", "# g sweep\naxis = g\nstart = 0\nstop = 2\nsteps = 81\n");
    match parse_config(&path).unwrap() {
        ParsedConfig::Sweep(s) => {
            assert_eq!(s.axis, Axis::G);
            assert_eq!(s.steps, 81);
            assert_eq!(s.points().len(), 81);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn single_step_is_invalid() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "s.cfg", "axis = g\nstart = 0\nstop = 2\nsteps = 1\n");
    assert!(matches!(parse_config(&path), Err(ConfigError::Invalid(_))));
}

#[test]
fn misspelled_key_names_its_neighbour() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "s.cfg", "axis = g\ngama = 0.1\n");
    let err = parse_config(&path).unwrap_err();
    let msg = err.to_string();
    assert!(matches!(err, ConfigError::UnknownKey { line: 2, .. }), "{err:?}");
    assert!(msg.contains("gamma") && msg.contains("line 2"), "{msg}");
}

#[test]
fn missing_file_is_an_io_error() {
    let err = parse_config(Path::new("/nonexistent/run.cfg")).unwrap_err();
    assert!(matches!(err, ConfigError::Io { .. }));
}

#[test]
fn every_shipped_recipe_parses() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut count = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("cfg") {
            continue;
        }
        parse_config(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        count += 1;
    }
    assert!(count >= 6);
}

#[test]
fn flags_override_file_values() {
    let file = RunConfig::parse_str("delta = 2\ng = 0.5\nexact = false\n").unwrap();
    let flags = RunConfig { g: Some(1.5), exact: Some(true), ..RunConfig::default() };
    let merged = file.overlay(&flags);
    let m = merged.model().unwrap();
    assert_eq!((m.delta, m.g), (2.0, 1.5));
    assert_eq!(merged.exact, Some(true));
}
