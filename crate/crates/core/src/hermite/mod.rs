//! Hermite subdivision: jets, the midpoint rules and level refinement.

pub mod jet;
pub mod refine;
pub mod rules;

pub use jet::{cartesian_to_frame, frame_to_cartesian, patch_jet, rescale_jet, CornerJet, Jet3};
pub use rules::{init_midpoint, subdivide_midpoint, OffEdgeData, OnEdgeData};

pub use refine::{refine, refine_levels, surface_normal, MacroInput, MacroPatch, RefinementLevel};
