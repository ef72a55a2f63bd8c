//! Minimum-cost fault-tolerant path (FTP) and fault-tolerant flow (FTF)
//! network design under a non-uniform fault model.
//!
//! Arcs are either *vulnerable* (they may fail after the network has been
//! bought) or *safe*. An FTP solution keeps an `s`-`t` path alive after any
//! `k` vulnerable arcs fail; an FTF solution keeps `ell` arc-disjoint
//! `s`-`t` paths alive after any single vulnerable arc fails.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! anything touching the OS live in the companion `ftnet` crate.

#![no_std]
#![deny(rust_2018_idioms)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod approx;
pub mod dsn;
mod error;
pub mod feasibility;
pub mod flow;
pub mod ftf;
pub mod ftp;
mod graph;
mod instance;
pub mod testkit;
pub mod transform;

pub use error::{Budget, InstanceError, SolveError};
pub use instance::{Arc, ArcId, ArcSet, Instance, InstanceBuilder, Mode, VertexId, Weight};
