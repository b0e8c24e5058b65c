//! Bundled reference data: a six-agent, five-issue system, one loss
//! function, and a three-expert panel with equal weights.

use crate::group::LossPanel;
use crate::risk::LossFunction;
use crate::system::{load_system, Pfis, SystemFormat};

pub const REFERENCE_SYSTEM_CSV: &str = include_str!("../fixtures/reference_system.csv");
pub const REFERENCE_SYSTEM_JSON: &str = include_str!("../fixtures/reference_system.json");
pub const REFERENCE_LOSS_JSON: &str = include_str!("../fixtures/reference_loss.json");
pub const REFERENCE_PANEL_JSON: &str = include_str!("../fixtures/reference_panel.json");

pub fn reference_system() -> Pfis {
    load_system(REFERENCE_SYSTEM_CSV.as_bytes(), SystemFormat::Csv)
        .expect("bundled system is valid")
}

pub fn reference_loss() -> LossFunction {
    LossFunction::from_json(REFERENCE_LOSS_JSON).expect("bundled loss function is valid")
}

pub fn reference_panel() -> LossPanel {
    LossPanel::from_json(REFERENCE_PANEL_JSON).expect("bundled panel is valid")
}
