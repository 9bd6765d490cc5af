//! Nash equilibria of a sequential consumer-search market in which sellers
//! own chains of stores.
//!
//! Shoppers buy at the cheapest store; searchers visit stores one by one,
//! paying `c` per extra visit, and buy once a price is at or below the common
//! reserve price `P_M`. The crate constructs the equilibrium families of the
//! single-store and chain-store markets ([`equilibrium`]), checks arbitrary
//! candidate profiles against the equilibrium conditions ([`verify`]),
//! models searcher beliefs ([`belief`]) and simulates the market
//! ([`simulate`]).

pub mod belief;
pub mod cdf;
pub mod cli;
pub mod equilibrium;
pub mod error;
pub mod io;
pub mod market;
pub mod numerics;
pub mod payoff;
pub mod simulate;
pub mod strategy;
pub mod verify;
