//! Glued locally arboreal spaces of dimension at most two: the comb, circles
//! with spokes, the orientation cocycle and braid closures.

mod circle;
mod filtered;
mod space;
mod stokes;

pub use circle::{circle_duality, circle_hom, random_invertible, random_local_system, CircleDuality, CircleObject};
pub use filtered::{
    filtered_rhom, random_chain_map, random_complex, random_filtered, relative_euler_check, FilteredComplex,
    GlobalObject, RelativeEuler,
};
pub use space::{build_circle, build_comb, w1, w1_from, Chart, ChartModel, GluedSpace, Overlap, Spoke, W1};
pub use stokes::{cycle_count, irregular_type_to_link, torus_braid, BraidLink};
