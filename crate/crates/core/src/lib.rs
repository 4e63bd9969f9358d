//! Growth simulator for dual-component (user/item) social media networks
//! driven by preferential triadic closure, together with the statistics
//! used to characterize such networks: preferential-attachment kernels,
//! Gibrat growth exponents, degree correlations and neighborhood influence.

pub mod cli;
pub mod graph;
pub mod io;
pub mod measures;
pub mod sim;
