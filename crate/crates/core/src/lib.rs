//! Camera placement for vehicle cabins.
//!
//! A [`scene::Scene`] describes the cabin, seats, occupants and the rails
//! cameras may be mounted on. [`sweep::run_sweep`] evaluates every camera
//! pose of an angle grid against a seating layout, [`covermat`] turns the
//! resulting dataset into a binary coverage matrix and [`optimizer`] picks
//! camera poses from it.
//!
//! Coordinates are metres in the vehicle frame: X across the cabin,
//! Y rearward from the windshield base, Z up from the floor. Angles are
//! degrees.

pub mod bitset;
pub mod covermat;
pub mod exec;
pub mod fixtures;
pub mod geometry;
pub mod optimizer;
pub mod render;
pub mod report;
pub mod scene;
pub mod sweep;
pub mod visibility;

pub use covermat::{binarize, build_bmatrix, stack_layouts, BinaryCoverageMatrix};
pub use exec::Execution;
pub use optimizer::{
    max_coverage_budget, min_cover_exact, min_cover_greedy, PlacementSolution, SolverOptions,
};
pub use scene::{default_scene, load_scene, Scene};
pub use sweep::{read_csv, run_sweep, write_csv, SweepDataset};
