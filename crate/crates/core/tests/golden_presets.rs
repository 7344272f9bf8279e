//! Byte-level regression fixtures for the figure presets. Set
//! `OSCULATE_BLESS=1` to rewrite them.

use std::path::PathBuf;

use osculate::render::{figure_preset, render_scene, FigurePreset};

fn fixture(p: FigurePreset) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{}.svg", p.as_str()))
}

#[test]
fn presets_match_golden_files() {
    let bless = std::env::var_os("OSCULATE_BLESS").is_some();
    for p in FigurePreset::ALL {
        let svg = render_scene(&figure_preset(p).unwrap()).unwrap();
        let path = fixture(p);
        if bless {
            std::fs::write(&path, &svg).unwrap();
            continue;
        }
        let golden = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(svg == golden, "{} differs from its golden file", p.as_str());
    }
}

#[test]
fn presets_render_identically_twice() {
    for p in FigurePreset::ALL {
        let a = render_scene(&figure_preset(p).unwrap()).unwrap();
        let b = render_scene(&figure_preset(p).unwrap()).unwrap();
        assert_eq!(a, b, "{}", p.as_str());
    }
}
