//! Binary classification from pairwise similarity labels.
//!
//! Pairs `(x, x', tau)` with `tau = y * y'` train a linear model up to a
//! global sign ([`train`]). The sign is then fixed from held-out pairs and the
//! class prior ([`assign`]). [`risk`] holds the estimators, [`sweep`] the
//! Monte Carlo experiments, and [`cli`] the command-line front end.

pub mod assign;
pub mod cli;
pub mod data;
pub mod error;
pub mod model;
pub mod risk;
pub mod sweep;
pub mod train;

pub use error::{Error, Result};
