//! The bundled coefficient presets (`resources/presets.toml`).

use serde::Deserialize;

use crate::params::ParamFile;

const BUNDLED: &str = include_str!("../resources/presets.toml");

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct PresetEntry {
    pub dataset: String,
    pub params: ParamFile,
}

#[derive(Deserialize)]
struct PresetTable {
    preset: Vec<PresetEntry>,
}

pub fn bundled() -> Vec<PresetEntry> {
    toml::from_str::<PresetTable>(BUNDLED).expect("bundled presets are valid").preset
}
