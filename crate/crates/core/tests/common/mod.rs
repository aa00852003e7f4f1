//! Sequential reference implementations used as test oracles.
#![allow(dead_code)]

pub mod gkws;
pub mod graph;
pub mod reach;
pub mod terrain;
pub mod xml;
