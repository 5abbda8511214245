//! Bundled reproduction recipes; `MAGTRAP_PRESET_DIR` points to a directory
//! of `<name>.json` files that replaces the bundled set.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};

pub const PRESET_DIR_VAR: &str = "MAGTRAP_PRESET_DIR";

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../presets/", $name, ".json")))),*]
    };
}

pub const BUNDLED: &[(&str, &str)] = bundled!(
    "fig4b",
    "saddle_stable",
    "saddle_unstable",
    "fig1b",
    "stability_grid",
    "sm_fig_pseudo",
    "fig3d",
    "fig3c",
    "chip_nominal",
    "chip_main",
);

/// Expected headline numbers of the presets.
pub const GOLDENS: &str = include_str!("../presets/goldens.json");

/// Returns the preset text and a description of where it came from.
pub fn load(name: &str) -> Result<(String, String)> {
    if let Some(dir) = std::env::var_os(PRESET_DIR_VAR) {
        let path = PathBuf::from(dir).join(format!("{name}.json"));
        let text = std::fs::read_to_string(&path).with_context(|| format!("reading preset {}", path.display()))?;
        return Ok((text, path.display().to_string()));
    }
    match BUNDLED.iter().find(|(n, _)| *n == name) {
        Some((_, text)) => Ok((text.to_string(), format!("preset:{name}"))),
        None => {
            let names: Vec<&str> = BUNDLED.iter().map(|(n, _)| *n).collect();
            bail!("unknown preset '{name}' (available: {})", names.join(", "))
        }
    }
}
