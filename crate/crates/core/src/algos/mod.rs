//! Distributed algorithms as node programs.

pub mod ball;
pub mod gather;
pub mod greedy_mis;
pub mod propose;
pub mod registry;
pub mod rotation;
pub mod testing;
mod util;

pub use ball::{ball_solution, BallGrowConfig, BallGrowing, BallOutput};
pub use gather::{GatherAll, GatherConfig, GatherOutput, GatherSolution};
pub use greedy_mis::{
    mis_derived_solutions, mis_members, replay_matches, Derived, GreedyMis, MisOutput, MisPhaseConfig,
};
pub use propose::{matching_from_mates, ProposeConfig, ProposeMatching, ProposeOutput};
pub use registry::{run_named, AlgoInfo, AlgoParams, AlgoRun, RunError, ALGORITHMS};
pub use rotation::{RotationConfig, RotationMatching, RotationOutput};
