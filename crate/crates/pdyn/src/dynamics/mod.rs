//! Level-n dynamics of cubic polynomials: capture radius, locus, dynamical
//! balls and annuli, critical marked grids and their rules, components of
//! the filled Julia set and shift-locus itineraries.
//!
//! Balls carry valuation radii ρ = −log r. Moduli and the log-radii reported
//! by grid computations are in terms of log r, as in the modulus sums.

pub mod component;
pub mod critical;
pub mod grid;
pub mod itinerary;
pub mod levels;
pub mod map;

pub use component::{component_of_critical, ComponentVerdict, SINGLETON_LOG_RADIUS};
pub use critical::{critical_grid, critical_nest, escape_depth, level_orbit, nest_radii, orbit, point_grid, pullback_radius};
pub use grid::{
    check_admissible, check_admissible_against, grid_moduli, grid_moduli_at, periodic_modulus_sum, GridModuli, MarkedGrid,
};
pub use itinerary::{itinerary, Itinerary};
pub use levels::{level_structure, LevelAnnulus, LevelBall, LevelStructure};
pub use map::{capture_radius, classify, level_zero_ball, Classification, CubicForm, CubicMap, Locus, OrbitFate};
