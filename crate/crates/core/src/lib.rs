//! Curiosity-driven exploration of graph-structured environments.
//!
//! Two curiosity rewards are computed on the subgraph induced by visited
//! nodes: the number of 1-cycles of its clique complex ([`homology`]) and
//! the compressibility of a random walk on it ([`compression`]). A GraphSAGE
//! Q-network ([`qnet`]) is trained with DQN ([`dqn`]) to maximize either
//! reward over an exploration MDP ([`explore`]), and the trained network can
//! bias a PageRank walker to predict next-node choices on recorded
//! trajectories ([`pagerank`]).
//!
//! The runnable programs under `examples/` walk through each capability.

pub mod compression;
pub mod config;
pub mod data;
pub mod dqn;
pub mod error;
pub mod explore;
pub mod graph;
pub mod harness;
pub mod homology;
pub mod pagerank;
pub mod qnet;
pub mod seed;

pub use error::{Error, Result};
pub use explore::{ExplorationState, RewardKind};
pub use graph::{Family, GeneratorSpec, Graph};
