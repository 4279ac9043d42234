//! Factional belief and the revolt game.
//!
//! Exact (rational) implementations of belief operators over finite
//! epistemic models, the network revolt game with three agent types, the
//! equilibrium algorithms on degree sequences, an exhaustive oracle for tiny
//! concrete graphs, random network generators and the concentration bounds
//! behind the large-network approximation.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod algorithms;
pub mod bounds;
pub mod epistemic;
pub mod error;
pub mod graph;
pub mod hp;
pub mod model;
pub mod netgen;
pub mod oracle;
pub mod rational;
pub mod sampling;

pub use error::{Error, Result};
pub use rational::Q;
