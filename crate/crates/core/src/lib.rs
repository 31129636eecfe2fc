//! Crossing limit cycles of planar piecewise linear systems with two zones
//! separated by a straight line.

pub mod conic;
pub mod contact;
pub mod counting;
pub mod displacement;
pub mod error;
mod flow;
pub mod halfmap;
pub mod lienard;
pub mod poly;
pub mod report;
pub mod svg;
pub mod sweep;
pub mod trajectory;

pub use error::{Error, Result};
