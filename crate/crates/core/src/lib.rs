//! Capacity expansion and dispatch for grid-connected electrolytic hydrogen
//! under annual or hourly time-matching requirements.
//!
//! The crate turns a [`domain::SystemCase`] into a sparse linear program
//! ([`model`]), solves it with an embedded simplex solver or an external
//! backend ([`lp`]), and derives prices, costs, emissions and revenues from
//! the primal and dual solution ([`analysis`]). [`scenarios`] builds weather
//! years from plant data and [`runs`] drives experiment grids.

pub mod analysis;
pub mod domain;
pub mod lp;
pub mod model;
pub mod runs;
pub mod scenarios;

mod fsutil;
