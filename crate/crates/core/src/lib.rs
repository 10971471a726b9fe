//! Connectivity of random ad hoc networks under stochastic (Rayleigh-fading)
//! and deterministic (hard-disk) channel models.
//!
//! The crate has two halves that are meant to be checked against each other:
//!
//! * a Monte Carlo simulator ([`geometry`], [`channel`], [`network`],
//!   [`montecarlo`]) that draws random networks in a square or cube and
//!   measures minimum degree, k-vertex and k-edge connectivity, and isolated
//!   or bridged node pairs;
//! * closed-form and quadrature predictions ([`analytic`]) for the mean
//!   degree, the minimum-degree probability, the isolated-node term and the
//!   corner-dominated probability of an isolated pair.
//!
//! A guide with worked examples lives in the `book/` directory of the repository.

pub mod analytic;
pub mod channel;
pub mod error;
pub mod geometry;
pub mod montecarlo;
pub mod network;
pub mod quadrature;
pub mod seed;
pub mod special;
pub mod stats;

pub use channel::ConnectionModel;
pub use error::{Error, Result};
pub use geometry::{Domain, Point};
pub use network::{ConnectivityReport, LinkSampling, NetworkSample};

// Code blocks in the guide run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/channel-models.md")]
    mod channel_models {}
    #[doc = include_str!("../../../book/src/mean-degree.md")]
    mod mean_degree {}
    #[doc = include_str!("../../../book/src/connectivity.md")]
    mod connectivity {}
    #[doc = include_str!("../../../book/src/isolated-pairs.md")]
    mod isolated_pairs {}
    #[doc = include_str!("../../../book/src/monte-carlo.md")]
    mod monte_carlo {}
    #[doc = include_str!("../../../book/src/command-line.md")]
    mod command_line {}
}
