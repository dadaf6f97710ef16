//! Multi-dimensional energy and mean-payoff parity games.
//!
//! The crate computes winning initial credits with an antichain-based
//! fixed point, extracts finite-memory winning strategies as Moore machines,
//! checks them with an independent verifier, and builds randomized
//! memoryless strategies for mean-payoff Büchi and parity objectives.

pub mod antichain;
pub mod bench;
pub mod cli;
pub mod error;
pub mod game;
pub mod graph;
pub mod pipeline;
pub mod randomized;
pub mod reduction;
pub mod solver;
pub mod strategy;

pub use antichain::{Antichain, Credit};
pub use bench::{gen_exp_family, gen_paper_fixture, gen_random_game, FixtureId};
pub use error::{Error, Result};
pub use game::{
    alternation_transform, energy_level, game_stats, lasso_values, parse_game, write_game,
    GameBuilder, GameStats, GameStructure, Lasso, LassoValues, Player, StateMap, WeightVector,
};
pub use reduction::{completeness_cap, depth_bound, mp_to_energy, parity_to_energy, ReductionReport};
pub use solver::{
    cpre_fixpoint, cpre_step, incremental_solve, naive_fixpoint_oracle, FixpointResult, SolveOutcome,
};
