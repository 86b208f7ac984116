//! Ultrametric balls and annuli, and the action of polynomials on them.

pub mod ball;
pub mod map;
pub mod roots;

pub use ball::{BallKind, PartitionClass, UltrametricAnnulus, UltrametricBall};
pub use map::{degree_on_ball, image_ball, preimage_balls, reduce_map, roots_in_ball};
pub use roots::residue_roots;
