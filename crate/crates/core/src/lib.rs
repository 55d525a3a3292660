//! graftlab-core: geometric machinery for flat surfaces with traintrack
//! decompositions, Schwarzian developing maps, Thurston-metric grafting,
//! integral approximation of measured laminations, and numerical
//! quasiconformal comparison maps.

pub mod flat;
pub mod grafting;
pub mod ideal;
pub mod moebius;
pub mod num;
pub mod qc;
pub mod schwarzian;
pub mod torus;
pub mod tracks;
