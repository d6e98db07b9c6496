pub mod dd;
pub mod degree_growth;
pub mod error;
pub mod map_core;
pub mod measure_lab;
pub mod picard;
pub mod poly;
pub mod real_dynamics;
pub mod scalar;
pub mod symbolic;

pub use error::{Error, Result};
