//! Potential structural complexity (P.S.C.) of encapsulated graphs.
//!
//! A system is modelled at count level: regions (subsystems) holding hidden
//! and information-hiding violating nodes. [`psc`] covers the flat context,
//! [`hier`] the layered and recursive-hierarchy contexts, [`metrics`] the
//! system-level scores, [`experiments`] the seeded simulations and
//! [`ingest`] the manifest format and Java scanner.

pub mod error;
pub mod experiments;
pub mod hier;
pub mod ingest;
pub mod metrics;
pub mod model;
pub mod psc;

pub use error::{EncapError, Result};
pub use model::{FlatSystem, HierTree, LayeredSystem, RegionCounts};
