//! Ad-hoc evolution: random add/remove/move updates that keep the region
//! count fixed, tracking configuration efficiency after every update.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::random::{random_systems, RandomSystemParams};
use super::{task_rng, Series};
use crate::error::{invalid, Result};
use crate::metrics::configuration_efficiency;
use crate::model::{FlatSystem, RegionCounts};
use crate::psc::recommend_regions;

const DOMAIN_EVOLVE: u64 = 0x4556_4f4c;

/// Visibility rule for nodes added by an update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AddVisibility {
    /// Public with probability `h / n` of the current system.
    #[default]
    PreserveRatio,
    /// Public with probability one half.
    CoinFlip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvolutionConfig {
    pub steps: usize,
    pub seed: u64,
    pub add_visibility: AddVisibility,
}

impl EvolutionConfig {
    pub fn new(steps: usize, seed: u64) -> Self {
        Self {
            steps,
            seed,
            add_visibility: AddVisibility::default(),
        }
    }
}

/// Picks a node that can leave its region: the region keeps at least one
/// node and at least one violating node. Returns `(region, is_violating)`.
fn pick_removable(rng: &mut ChaCha8Rng, regions: &[RegionCounts]) -> Option<(usize, bool)> {
    let weight = |g: &RegionCounts| -> (u64, u64) {
        let hidden = if g.size() > 1 { g.hidden } else { 0 };
        let public = if g.violating > 1 { g.violating } else { 0 };
        (hidden, public)
    };
    let total: u64 = regions.iter().map(|g| { let (a, b) = weight(g); a + b }).sum();
    if total == 0 {
        return None;
    }
    let mut k = rng.gen_range(0..total);
    for (i, g) in regions.iter().enumerate() {
        let (hidden, public) = weight(g);
        if k < hidden {
            return Some((i, false));
        }
        k -= hidden;
        if k < public {
            return Some((i, true));
        }
        k -= public;
    }
    unreachable!("k is below the total weight")
}

fn take(g: &mut RegionCounts, violating: bool) {
    if violating {
        g.violating -= 1;
    } else {
        g.hidden -= 1;
    }
}

fn put(g: &mut RegionCounts, violating: bool) {
    if violating {
        g.violating += 1;
    } else {
        g.hidden += 1;
    }
}

fn step(rng: &mut ChaCha8Rng, regions: &mut [RegionCounts], rule: AddVisibility) {
    let r = regions.len();
    match rng.gen_range(0..3u8) {
        0 => {
            let target = rng.gen_range(0..r);
            let public = match rule {
                AddVisibility::CoinFlip => rng.gen_bool(0.5),
                AddVisibility::PreserveRatio => {
                    let n: u64 = regions.iter().map(RegionCounts::size).sum();
                    let h: u64 = regions.iter().map(|g| g.violating).sum();
                    rng.gen_range(0..n) < h
                }
            };
            put(&mut regions[target], public);
        }
        1 => {
            let n: u64 = regions.iter().map(RegionCounts::size).sum();
            if n <= 2 {
                return;
            }
            if let Some((i, public)) = pick_removable(rng, regions) {
                take(&mut regions[i], public);
            }
        }
        _ => {
            if r < 2 {
                return;
            }
            if let Some((i, public)) = pick_removable(rng, regions) {
                let mut target = rng.gen_range(0..r - 1);
                if target >= i {
                    target += 1;
                }
                take(&mut regions[i], public);
                put(&mut regions[target], public);
            }
        }
    }
}

fn c_e(regions: &[RegionCounts]) -> f64 {
    configuration_efficiency(&FlatSystem::new(regions.to_vec()))
        .c_e
        .expect("evolving systems keep n >= 2 and h >= 1")
}

/// Starting population: the minimal-P.S.C. uniform-as-possible system at one
/// violating node per region, followed by `count - 1` random systems.
pub fn starting_systems(n: u64, count: usize, seed: u64) -> Result<Vec<FlatSystem>> {
    if n < 2 {
        return Err(invalid("evolution needs systems of at least two nodes"));
    }
    let mut out = Vec::with_capacity(count);
    if count > 0 {
        let r = recommend_regions(n, 1.0)?.r;
        let (base, extra) = (n / r, n % r);
        out.push(FlatSystem::new(
            (0..r)
                .map(|i| RegionCounts::with_size(base + u64::from(i < extra), 1))
                .collect::<Result<_>>()?,
        ));
    }
    let params = RandomSystemParams {
        n,
        system_count: count.saturating_sub(1),
        seed,
    };
    out.extend(random_systems(&params)?.into_iter().map(|(sys, _)| sys));
    Ok(out)
}

/// One series per initial system: `x` = update index (0 = initial), `y` =
/// configuration efficiency. System `i` draws from its own stream.
pub fn adhoc_evolution(initial: &[FlatSystem], config: &EvolutionConfig) -> Result<Vec<Series>> {
    for (i, sys) in initial.iter().enumerate() {
        if sys.regions().iter().any(|g| g.violating == 0) || sys.n() < 2 {
            return Err(invalid(format!(
                "initial system {i} needs n >= 2 and at least one violating node per region"
            )));
        }
    }
    initial
        .par_iter()
        .enumerate()
        .map(|(i, sys)| {
            let mut rng = task_rng(config.seed, DOMAIN_EVOLVE, i as u64);
            let mut regions = sys.regions().to_vec();
            let mut series = Series::new(format!("system_{i}"))
                .with_meta("seed", config.seed)
                .with_meta("r", regions.len());
            series.push(0.0, c_e(&regions));
            for t in 1..=config.steps {
                step(&mut rng, &mut regions, config.add_visibility);
                series.push(t as f64, c_e(&regions));
            }
            Ok(series)
        })
        .collect()
}

/// Share of post-burn-in samples with `lo <= y <= hi`, pooled over all
/// series. The first `burn_in` fraction of each series is skipped.
pub fn belt_fraction(series: &[Series], burn_in: f64, lo: f64, hi: f64) -> f64 {
    let (mut inside, mut total) = (0usize, 0usize);
    for s in series {
        let skip = (s.points.len() as f64 * burn_in).floor() as usize;
        for y in s.ys().skip(skip) {
            total += 1;
            inside += (lo..=hi).contains(&y) as usize;
        }
    }
    if total == 0 {
        0.0
    } else {
        inside as f64 / total as f64
    }
}
