//! Seeded random flat systems.

use rand::Rng;
use rayon::prelude::*;

use super::{task_rng, Series};
use crate::error::{invalid, Result};
use crate::metrics::{configuration_efficiency, MetricsReport};
use crate::model::{FlatSystem, RegionCounts};

const DOMAIN_RANDOM: u64 = 0x5241_4e44;
const DOMAIN_AVERAGE: u64 = 0x4156_4745;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSystemParams {
    pub n: u64,
    pub system_count: usize,
    pub seed: u64,
}

impl RandomSystemParams {
    pub fn new(seed: u64) -> Self {
        Self {
            n: 100,
            system_count: 1000,
            seed,
        }
    }
}

/// One random system: a composition of `n` drawn uniformly from all
/// compositions into positive parts (each of the `n - 1` gaps is a cut
/// with probability one half), and a violating count uniform in
/// `[1, size]` per region.
pub fn random_system<R: Rng>(rng: &mut R, n: u64) -> Result<FlatSystem> {
    if n == 0 {
        return Err(invalid("random systems need n >= 1"));
    }
    let mut regions = Vec::new();
    let mut size = 1;
    for gap in 1..=n {
        if gap == n || rng.gen_bool(0.5) {
            regions.push(RegionCounts::with_size(size, rng.gen_range(1..=size))?);
            size = 1;
        } else {
            size += 1;
        }
    }
    Ok(FlatSystem::new(regions))
}

/// `system_count` random systems with metrics; system `i` draws from its
/// own stream, so the list does not depend on thread count.
pub fn random_systems(params: &RandomSystemParams) -> Result<Vec<(FlatSystem, MetricsReport)>> {
    (0..params.system_count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = task_rng(params.seed, DOMAIN_RANDOM ^ params.n, i);
            let sys = random_system(&mut rng, params.n)?;
            let m = configuration_efficiency(&sys);
            Ok((sys, m))
        })
        .collect()
}

/// Mean configuration efficiency of random systems for each `n`.
pub fn average_efficiency_curve(n_values: &[u64], samples_per_n: usize, seed: u64) -> Result<Series> {
    if samples_per_n == 0 {
        return Err(invalid("need at least one sample per n"));
    }
    if n_values.iter().any(|&n| n < 2) {
        return Err(invalid("average efficiency needs every n >= 2"));
    }
    if n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("n values must be strictly increasing"));
    }
    let mut series = Series::new("average_efficiency")
        .with_meta("samples_per_n", samples_per_n)
        .with_meta("seed", seed);
    for &n in n_values {
        let values: Vec<f64> = (0..samples_per_n as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = task_rng(seed, DOMAIN_AVERAGE ^ n, i);
                let sys = random_system(&mut rng, n)?;
                Ok(configuration_efficiency(&sys).c_e.unwrap_or(0.0))
            })
            .collect::<Result<_>>()?;
        series.push(n as f64, values.iter().sum::<f64>() / values.len() as f64);
    }
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_systems_meet_constraints() {
        let params = RandomSystemParams {
            n: 100,
            system_count: 200,
            seed: 3,
        };
        for (sys, m) in random_systems(&params).unwrap() {
            assert_eq!(sys.n(), 100);
            assert!(sys.r() >= 1 && sys.r() <= 100);
            assert!(sys.regions().iter().all(|g| g.violating >= 1));
            assert!(m.is_defined());
        }
    }

    #[test]
    fn compositions_are_equally_likely() {
        let mut rng = task_rng(5, 0, 0);
        let mut seen = std::collections::BTreeMap::new();
        for _ in 0..8000 {
            let sizes: Vec<u64> = random_system(&mut rng, 4).unwrap().regions().iter().map(RegionCounts::size).collect();
            *seen.entry(sizes).or_insert(0u32) += 1;
        }
        // 8 compositions of 4, about 1000 draws each
        assert_eq!(seen.len(), 8);
        assert!(seen.values().all(|&c| (850..1150).contains(&c)), "{seen:?}");
    }

    #[test]
    fn same_seed_same_systems() {
        let p = RandomSystemParams {
            n: 40,
            system_count: 50,
            seed: 11,
        };
        assert_eq!(random_systems(&p).unwrap(), random_systems(&p).unwrap());
    }

    #[test]
    fn curve_rejects_bad_input() {
        assert!(average_efficiency_curve(&[1], 5, 0).is_err());
        assert!(average_efficiency_curve(&[5, 5], 5, 0).is_err());
        let s = average_efficiency_curve(&[2, 10], 1, 9).unwrap();
        assert_eq!(s.points.len(), 2);
    }
}
