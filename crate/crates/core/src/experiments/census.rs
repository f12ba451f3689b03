//! Census of anomalous minimised configurations.
//!
//! The configuration space for `n` nodes over `r` regions is every ordered
//! tuple of per-region (hidden >= 0, violating >= 1) counts summing to `n`.
//! A configuration is comparable when a uniform system with the same `n`,
//! `r` and `h` exists (`r | n` and `r | h`); the rest are left out of the
//! denominator. A comparable configuration counts as anomalous when its
//! P.S.C. is strictly below the minimum uniform P.S.C. over real `r` at
//! `p = h / r`. The stricter same-`r` comparison is reported alongside.

use rand::seq::index;
use rayon::prelude::*;

use super::task_rng;
use crate::error::{invalid, EncapError, Result};
use crate::model::{FlatSystem, RegionCounts};
use crate::psc::{s_min, uniform_psc_of};

/// Largest configuration count an exhaustive census will walk.
pub const DEFAULT_CENSUS_CAP: u64 = 50_000_000;

const DOMAIN_CENSUS: u64 = 0x414d_4300;
const SAMPLE_BLOCK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusMode {
    Exhaustive { cap: u64 },
    Sampled { seed: u64, count: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CensusResult {
    pub n: u64,
    pub r: u64,
    pub mode: CensusMode,
    /// Configurations visited (all of them, or the sample size).
    pub visited: u64,
    pub comparable: u64,
    pub amc: u64,
    pub amc_fraction: f64,
    /// Largest relative undercut of the uniform minimum, in percent.
    pub min_gap_percent: Option<f64>,
    /// Configuration achieving `min_gap_percent`.
    pub lowest: Option<FlatSystem>,
    pub same_r_amc: u64,
    pub same_r_fraction: f64,
}

/// Number of configurations, `C(n + r - 1, 2r - 1)`, saturating.
pub fn configuration_count(n: u64, r: u64) -> u64 {
    if r == 0 || n < r {
        return 0;
    }
    let (top, k) = ((n + r - 1) as u128, (2 * r - 1) as u128);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (top - i) / (i + 1);
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

struct Tables {
    r: u64,
    comparable_n: bool,
    // indexed by h
    uniform_min: Vec<f64>,
    same_r: Vec<f64>,
}

impl Tables {
    fn new(n: u64, r: u64) -> Result<Self> {
        let mut uniform_min = vec![f64::NAN; n as usize + 1];
        let mut same_r = vec![f64::NAN; n as usize + 1];
        let comparable_n = n.is_multiple_of(r);
        for h in (r..=n).step_by(r as usize) {
            let p = (h / r) as f64;
            uniform_min[h as usize] = s_min(n, p)?;
            if comparable_n {
                same_r[h as usize] = uniform_psc_of(n as f64, r as f64, p)?;
            }
        }
        Ok(Self {
            r,
            comparable_n,
            uniform_min,
            same_r,
        })
    }
}

#[derive(Default, Clone)]
struct Tally {
    visited: u64,
    comparable: u64,
    amc: u64,
    same_r_amc: u64,
    best_gap: Option<(f64, Vec<RegionCounts>)>,
}

impl Tally {
    fn record(&mut self, t: &Tables, regions: &[RegionCounts]) {
        self.visited += 1;
        let h: u64 = regions.iter().map(|g| g.violating).sum();
        if !t.comparable_n || !h.is_multiple_of(t.r) {
            return;
        }
        self.comparable += 1;
        let first = regions[0];
        if regions.iter().all(|&g| g == first) {
            return;
        }
        let s: u64 = regions
            .iter()
            .map(|g| g.size() * (g.size() - 1) + g.size() * (h - g.violating))
            .sum();
        let s = s as f64;
        if s < t.same_r[h as usize] {
            self.same_r_amc += 1;
        }
        let lo = t.uniform_min[h as usize];
        if s < lo {
            self.amc += 1;
            let gap = (lo - s) / lo * 100.0;
            if self.best_gap.as_ref().is_none_or(|(g, _)| gap > *g) {
                self.best_gap = Some((gap, regions.to_vec()));
            }
        }
    }

    // `later` covers configurations visited after `self`'s
    fn merge(mut self, later: Tally) -> Tally {
        self.visited += later.visited;
        self.comparable += later.comparable;
        self.amc += later.amc;
        self.same_r_amc += later.same_r_amc;
        if let Some((g, cfg)) = later.best_gap {
            if self.best_gap.as_ref().is_none_or(|(mine, _)| g > *mine) {
                self.best_gap = Some((g, cfg));
            }
        }
        self
    }
}

fn walk(t: &Tables, left: u64, slots: u64, cur: &mut Vec<RegionCounts>, tally: &mut Tally) {
    if slots == 1 {
        for v in 1..=left {
            cur.push(RegionCounts::new(left - v, v));
            tally.record(t, cur);
            cur.pop();
        }
        return;
    }
    // keep at least one node per remaining region
    let spare = left - (slots - 1);
    for size in 1..=spare {
        for v in 1..=size {
            cur.push(RegionCounts::new(size - v, v));
            walk(t, left - size, slots - 1, cur, tally);
            cur.pop();
        }
    }
}

fn finish(n: u64, r: u64, mode: CensusMode, tally: Tally) -> CensusResult {
    let frac = |k: u64| {
        if tally.comparable == 0 {
            0.0
        } else {
            k as f64 / tally.comparable as f64
        }
    };
    CensusResult {
        n,
        r,
        mode,
        visited: tally.visited,
        comparable: tally.comparable,
        amc: tally.amc,
        amc_fraction: frac(tally.amc),
        min_gap_percent: tally.best_gap.as_ref().map(|(g, _)| *g),
        lowest: tally.best_gap.map(|(_, cfg)| FlatSystem::new(cfg)),
        same_r_amc: tally.same_r_amc,
        same_r_fraction: frac(tally.same_r_amc),
    }
}

fn exhaustive(n: u64, r: u64, t: &Tables) -> Tally {
    if r == 1 {
        let mut tally = Tally::default();
        walk(t, n, 1, &mut Vec::new(), &mut tally);
        return tally;
    }
    let spare = n - (r - 1);
    let heads: Vec<(u64, u64)> = (1..=spare)
        .flat_map(|size| (1..=size).map(move |v| (size, v)))
        .collect();
    heads
        .par_iter()
        .map(|&(size, v)| {
            let mut tally = Tally::default();
            let mut cur = vec![RegionCounts::new(size - v, v)];
            walk(t, n - size, r - 1, &mut cur, &mut tally);
            tally
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Tally::default(), Tally::merge)
}

fn sampled(n: u64, r: u64, seed: u64, count: u64, t: &Tables) -> Tally {
    let blocks = count.div_ceil(SAMPLE_BLOCK);
    let slots = (n + r - 1) as usize;
    let bars = (2 * r - 1) as usize;
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = task_rng(seed, DOMAIN_CENSUS ^ (n << 16) ^ r, b);
            let mut tally = Tally::default();
            let mut cur = Vec::with_capacity(r as usize);
            let todo = SAMPLE_BLOCK.min(count - b * SAMPLE_BLOCK);
            for _ in 0..todo {
                // stars and bars: n - r stars over 2r weak parts
                let mut pos: Vec<usize> = index::sample(&mut rng, slots, bars).into_vec();
                pos.sort_unstable();
                let mut parts = Vec::with_capacity(2 * r as usize);
                let mut prev = 0usize;
                for &p in &pos {
                    parts.push((p - prev) as u64);
                    prev = p + 1;
                }
                parts.push((slots - prev) as u64);
                cur.clear();
                cur.extend(parts.chunks(2).map(|c| RegionCounts::new(c[0], c[1] + 1)));
                tally.record(t, &cur);
            }
            tally
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Tally::default(), Tally::merge)
}

pub fn amc_census(n: u64, r: u64, mode: CensusMode) -> Result<CensusResult> {
    if r == 0 || n < r {
        return Err(invalid(format!("census needs 1 <= r <= n, got n={n} r={r}")));
    }
    let tables = Tables::new(n, r)?;
    let tally = match mode {
        CensusMode::Exhaustive { cap } => {
            let size = configuration_count(n, r);
            if size > cap {
                return Err(EncapError::CapExceeded {
                    what: "exhaustive census configuration count",
                    size,
                    cap,
                });
            }
            exhaustive(n, r, &tables)
        }
        CensusMode::Sampled { seed, count } => {
            if count == 0 {
                return Err(invalid("sampled census needs a positive sample count"));
            }
            sampled(n, r, seed, count, &tables)
        }
    };
    Ok(finish(n, r, mode, tally))
}
