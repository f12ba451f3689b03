//! Reproducible experiments over encapsulated systems.
//!
//! Every stochastic routine takes an explicit seed. Work is split into
//! tasks that each own a ChaCha stream derived from `(seed, domain, task)`,
//! and results are merged by task index, so output does not depend on how
//! many threads rayon runs.

mod census;
mod evolution;
mod random;
mod sweeps;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};

pub use census::{amc_census, configuration_count, CensusMode, CensusResult, DEFAULT_CENSUS_CAP};
pub use evolution::{adhoc_evolution, belt_fraction, starting_systems, AddVisibility, EvolutionConfig};
pub use random::{average_efficiency_curve, random_system, random_systems, RandomSystemParams};
pub use sweeps::{
    capped_growth_curve, capped_system, fixed_system_sweep, hier2d_growth_system,
    layered_composition_sweep, min_psc, system_growth, varied_region_sweep,
};

/// Encapsulation context of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Context {
    Unencapsulated,
    Flat,
    Layered,
    Hier2d,
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Context::Unencapsulated => "unencapsulated",
            Context::Flat => "flat",
            Context::Layered => "layered",
            Context::Hier2d => "hier2d",
        })
    }
}

impl FromStr for Context {
    type Err = crate::error::EncapError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unencapsulated" | "none" => Ok(Context::Unencapsulated),
            "flat" => Ok(Context::Flat),
            "layered" | "1d" => Ok(Context::Layered),
            "hier2d" | "hier" | "2d" => Ok(Context::Hier2d),
            other => Err(invalid(format!("unknown context '{other}'"))),
        }
    }
}

/// A named data series with strictly increasing `x`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    /// Optional per-point labels (e.g. a composition `3-1`).
    pub labels: Vec<String>,
    pub metadata: BTreeMap<String, String>,
}

impl Series {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_owned(), value.to_string());
        self
    }

    /// Appends a point; `x` must exceed the previous one.
    pub fn push(&mut self, x: f64, y: f64) {
        debug_assert!(
            self.points.last().is_none_or(|&(px, _)| x > px),
            "series x must be strictly increasing"
        );
        self.points.push((x, y));
    }

    pub fn push_labeled(&mut self, x: f64, y: f64, label: impl Into<String>) {
        self.push(x, y);
        self.labels.push(label.into());
    }

    pub fn ys(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|&(_, y)| y)
    }

    pub fn y_at(&self, x: f64) -> Option<f64> {
        self.points.iter().find(|&&(px, _)| px == x).map(|&(_, y)| y)
    }

    /// Point with the smallest `y` (first one on ties).
    pub fn min_point(&self) -> Option<(f64, f64)> {
        self.points
            .iter()
            .copied()
            .fold(None, |best, p| match best {
                Some(b) if b.1 <= p.1 => Some(b),
                _ => Some(p),
            })
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// RNG for one task: key derived from `(seed, domain)`, stream = `task`.
pub(crate) fn task_rng(seed: u64, domain: u64, task: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(domain)));
    rng.set_stream(task);
    rng
}
