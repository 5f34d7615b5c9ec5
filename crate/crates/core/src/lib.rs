pub mod cli;
pub mod coset;
pub mod error;
pub mod graph;
pub mod group;
pub mod hypergraph;
pub mod hyperiso;
pub mod interval;
pub mod io;
pub mod perm;
pub mod pipeline;
pub mod testkit;
pub mod wl;
