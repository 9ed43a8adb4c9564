//! Sequential localization games on graphs.
//!
//! An invisible robber walks on a graph; each turn the cop probes a small set
//! of vertices and learns either the full distance vector (metric model) or
//! only the relative order of the distances plus zero-distance hits
//! (centroidal model). The crate provides the game engine with an exhaustive
//! adversarial verifier, exact solvers for the associated graph parameters,
//! the constructive cop strategies for trees, products, bipartite, bounded
//! pathwidth and outerplanar graphs, and the continuous-plane variant played
//! with ceilinged Euclidean distances.

pub mod cli;
pub mod euclid;
pub mod game;
pub mod graph;
pub mod solver;
pub mod strategies;
