//! Exact tools for comparing integer programs with their linear relaxations
//! on hierarchical log-linear models.

pub mod error;
pub mod linalg;
pub mod matrix;
pub mod model;
pub mod opt;
pub mod pairs;
pub mod rarity;
pub mod rational;
pub mod toric;

pub use error::{Error, Result};
pub use matrix::IntMatrix;
pub use rational::Rational;
