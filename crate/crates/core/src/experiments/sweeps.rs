//! Deterministic sweeps: fixed-system, varied-region, system growth,
//! layered compositions and capped-region growth.

use rayon::prelude::*;

use super::{Context, Series};
use crate::error::{invalid, Result};
use crate::hier::{hier_psc_enumerated_with_cap, layered_psc_enumerated_with_cap};
use crate::metrics::configuration_efficiency;
use crate::model::{FlatSystem, HierTree, LayeredSystem, RegionCounts};
use crate::psc::{psc_unencapsulated, system_psc, uniform_psc_of};

// sweeps only build systems they have sized themselves
const SWEEP_NODE_CAP: u64 = 1 << 20;

/// Partitions of `n` into at most `slots` parts, non-increasing and padded
/// with zeros, most concentrated first.
fn partitions(n: u64, slots: usize) -> Vec<Vec<u64>> {
    fn rec(left: u64, slots: usize, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if slots == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let lo = left.div_ceil(slots as u64);
        let mut part = max.min(left);
        while part >= lo {
            cur.push(part);
            rec(left - part, slots - 1, part, cur, out);
            cur.pop();
            if part == 0 {
                break;
            }
            part -= 1;
        }
    }
    let mut out = Vec::new();
    rec(n, slots, n, &mut Vec::new(), &mut out);
    out
}

/// Compositions of `n` into exactly `parts` positive parts, first part
/// descending, then the second, and so on.
fn compositions(n: u64, parts: usize) -> Vec<Vec<u64>> {
    fn rec(left: u64, parts: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if parts == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in (1..=left - (parts as u64 - 1)).rev() {
            cur.push(first);
            rec(left - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts >= 1 && n >= parts as u64 {
        rec(n, parts, &mut Vec::new(), &mut out);
    }
    out
}

fn label(parts: &[u64]) -> String {
    parts.iter().map(u64::to_string).collect::<Vec<_>>().join("-")
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Uniform `r`-subsystem split of `n` nodes is allowed for `p`: one region
/// needs no hiding, otherwise `p <= n / r`.
fn realizable(n: u64, r: u64, p: u64) -> bool {
    r == 1 || p <= n / r
}

/// Every split of `n` nodes over `r` subsystems with `p` violating nodes
/// per non-empty subsystem (clamped to its size).
pub fn fixed_system_sweep(n: u64, r: usize, p: u64) -> Result<Series> {
    if r < 2 {
        return Err(invalid("fixed-system sweep needs at least two subsystems"));
    }
    let mut series = Series::new("fixed_system")
        .with_meta("n", n)
        .with_meta("r", r)
        .with_meta("p", p);
    for (i, parts) in partitions(n, r).into_iter().enumerate() {
        let sys: FlatSystem = parts
            .iter()
            .map(|&size| RegionCounts::with_size(size, p.min(size)).expect("clamped"))
            .collect();
        series.push_labeled(i as f64, system_psc(&sys).total as f64, label(&parts));
    }
    Ok(series)
}

fn uniform_layered(n: u64, r: u64, layers: u64, p: u64) -> Result<u64> {
    let sys = LayeredSystem::uniform(
        layers as usize,
        (r / layers) as usize,
        n / r,
        p.min(n / r),
        None,
    )?;
    layered_psc_enumerated_with_cap(&sys, SWEEP_NODE_CAP)
}

/// `n` nodes spread as evenly as possible over `r` subsystems (extras go to
/// the earliest), `p` violating each (clamped), in a level-order span-2 tree.
pub fn hier2d_growth_system(n: u64, r: u64, p: u64) -> Result<HierTree> {
    if r == 0 || r > n {
        return Err(invalid(format!("cannot spread {n} nodes over {r} subsystems")));
    }
    let (base, extra) = (n / r, n % r);
    let counts: Vec<RegionCounts> = (0..r)
        .map(|i| {
            let size = base + u64::from(i < extra);
            RegionCounts::with_size(size, p.min(size))
        })
        .collect::<Result<_>>()?;
    HierTree::level_order(2, &counts)
}

/// Minimum layered P.S.C. over uniform splits with `layers` layers and
/// all-layers-below penetration.
fn layered_min_for(n: u64, layers: u64, p: u64) -> Result<Option<u64>> {
    let mut best: Option<u64> = None;
    for r in divisors(n) {
        if r % layers != 0 || !realizable(n, r, p) {
            continue;
        }
        let s = uniform_layered(n, r, layers, p)?;
        best = Some(best.map_or(s, |b| b.min(s)));
    }
    Ok(best)
}

/// P.S.C. against subsystem count (flat, hier2d) or layer count (layered).
pub fn varied_region_sweep(n: u64, p: u64, context: Context) -> Result<Series> {
    if n == 0 {
        return Err(invalid("varied-region sweep needs n >= 1"));
    }
    let mut series = Series::new(format!("varied_region_{context}"))
        .with_meta("n", n)
        .with_meta("p", p)
        .with_meta("context", context);
    match context {
        Context::Flat => {
            for r in divisors(n) {
                if p <= n / r {
                    series.push(r as f64, uniform_psc_of(n as f64, r as f64, p as f64)?);
                }
            }
        }
        Context::Layered => {
            let rows: Vec<(u64, Option<u64>)> = divisors(n)
                .into_par_iter()
                .map(|l| layered_min_for(n, l, p).map(|s| (l, s)))
                .collect::<Result<_>>()?;
            for (l, s) in rows {
                if let Some(s) = s {
                    series.push(l as f64, s as f64);
                }
            }
            series = series.with_meta("x", "layers");
        }
        Context::Hier2d => {
            let ys: Vec<u64> = (1..=n)
                .into_par_iter()
                .map(|r| hier_psc_enumerated_with_cap(&hier2d_growth_system(n, r, p)?, SWEEP_NODE_CAP))
                .collect::<Result<_>>()?;
            for (i, y) in ys.into_iter().enumerate() {
                series.push((i + 1) as f64, y as f64);
            }
        }
        Context::Unencapsulated => {
            return Err(invalid("varied-region sweep needs an encapsulated context"))
        }
    }
    Ok(series)
}

/// Minimum attainable P.S.C. of `n` nodes in `context` over uniform
/// configurations; `None` when no configuration is realizable.
pub fn min_psc(n: u64, p: u64, context: Context) -> Result<Option<f64>> {
    if n == 0 {
        return Ok(None);
    }
    let candidates = divisors(n).into_iter().filter(|&r| realizable(n, r, p));
    Ok(match context {
        Context::Unencapsulated => Some(psc_unencapsulated(n) as f64),
        // the uniform law is evaluated at every integer r, divisor or not
        Context::Flat => (1..=n)
            .filter(|&r| r == 1 || p as f64 <= n as f64 / r as f64)
            .map(|r| uniform_psc_of(n as f64, r as f64, p as f64))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .reduce(f64::min),
        Context::Layered => {
            let mut best: Option<u64> = None;
            for r in candidates {
                for l in divisors(r) {
                    let s = uniform_layered(n, r, l, p)?;
                    best = Some(best.map_or(s, |b| b.min(s)));
                }
            }
            best.map(|s| s as f64)
        }
        Context::Hier2d => candidates
            .map(|r| hier_psc_enumerated_with_cap(&hier2d_growth_system(n, r, p)?, SWEEP_NODE_CAP))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .min()
            .map(|s| s as f64),
    })
}

/// Minimum attainable P.S.C. for every `n` in `1..=n_max`.
pub fn system_growth(n_max: u64, p: u64, context: Context) -> Result<Series> {
    if n_max == 0 {
        return Err(invalid("system growth needs n_max >= 1"));
    }
    let ys: Vec<Option<f64>> = (1..=n_max)
        .into_par_iter()
        .map(|n| min_psc(n, p, context))
        .collect::<Result<_>>()?;
    let mut series = Series::new(format!("growth_{context}"))
        .with_meta("n_max", n_max)
        .with_meta("p", p)
        .with_meta("context", context);
    for (i, y) in ys.into_iter().enumerate() {
        if let Some(y) = y {
            series.push((i + 1) as f64, y);
        }
    }
    Ok(series)
}

/// Every arrangement of `subsystems` equal subsystems over `layers`
/// non-empty layers (first entry = bottom layer), with all-layers-below
/// penetration.
pub fn layered_composition_sweep(subsystems: u64, layers: usize, nodes: u64, p: u64) -> Result<Series> {
    if layers == 0 || nodes == 0 {
        return Err(invalid("layered composition sweep needs layers >= 1 and nodes >= 1"));
    }
    let region = RegionCounts::with_size(nodes, p.min(nodes))?;
    let comps = compositions(subsystems, layers);
    let ys: Vec<u64> = comps
        .par_iter()
        .map(|parts| {
            let sys = LayeredSystem::new(
                parts.iter().map(|&c| vec![region; c as usize]).collect(),
                None,
            )?;
            layered_psc_enumerated_with_cap(&sys, SWEEP_NODE_CAP)
        })
        .collect::<Result<_>>()?;
    let mut series = Series::new("layered_compositions")
        .with_meta("subsystems", subsystems)
        .with_meta("layers", layers)
        .with_meta("nodes", nodes)
        .with_meta("p", p);
    for (i, (parts, y)) in comps.iter().zip(ys).enumerate() {
        series.push_labeled(i as f64, y as f64, label(parts));
    }
    Ok(series)
}

/// `n` nodes packed into regions of `cap` (last one partial), `p` violating
/// each (clamped).
pub fn capped_system(n: u64, cap: u64, p: u64) -> Result<FlatSystem> {
    if cap == 0 {
        return Err(invalid("region cap must be at least 1"));
    }
    let mut regions = vec![RegionCounts::with_size(cap, p.min(cap))?; (n / cap) as usize];
    if !n.is_multiple_of(cap) {
        regions.push(RegionCounts::with_size(n % cap, p.min(n % cap))?);
    }
    Ok(FlatSystem::new(regions))
}

/// Configuration efficiency of capped systems for `n` in `2..=n_max`.
pub fn capped_growth_curve(n_max: u64, cap: u64, p: u64) -> Result<Series> {
    let systems = (1..=n_max).map(|n| capped_system(n, cap, p)).collect::<Result<Vec<_>>>()?;
    let ys: Vec<Option<f64>> = systems
        .par_iter()
        .map(|sys| configuration_efficiency(sys).c_e)
        .collect();
    let mut series = Series::new("capped_growth")
        .with_meta("n_max", n_max)
        .with_meta("cap", cap)
        .with_meta("p", p);
    for (i, y) in ys.into_iter().enumerate() {
        if let Some(y) = y {
            series.push((i + 1) as f64, y);
        }
    }
    Ok(series)
}
