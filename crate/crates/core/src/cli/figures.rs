//! Figure data as CSV tables.

use clap::ValueEnum;

use super::output::{opt_real, real, Table};
use encap_core::experiments::{
    adhoc_evolution, amc_census, average_efficiency_curve, capped_growth_curve, layered_composition_sweep,
    random_systems, starting_systems, system_growth, varied_region_sweep, AddVisibility, CensusMode,
    CensusResult, Context, EvolutionConfig, RandomSystemParams, Series, DEFAULT_CENSUS_CAP,
};
use encap_core::psc::{psc_unencapsulated, uniform_psc_of};
use encap_core::{EncapError, Result};

pub const FIGURE_IDS: &[u32] = &[3, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24, 27, 28, 29, 34, 35];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Small,
    Full,
}

impl Scale {
    fn pick<T>(self, small: T, full: T) -> T {
        match self {
            Scale::Small => small,
            Scale::Full => full,
        }
    }
}

pub fn series_table(series: &Series, x: &str, y: &str) -> Table {
    let mut t = Table::new(&[x, y]);
    for &(px, py) in &series.points {
        t.row(vec![real(px), real(py)]);
    }
    t
}

pub fn labeled_table(series: &Series, label: &str, y: &str) -> Table {
    let mut t = Table::new(&["index", label, y]);
    for (&(px, py), l) in series.points.iter().zip(&series.labels) {
        t.row(vec![real(px), l.clone(), real(py)]);
    }
    t
}

/// Several growth curves side by side, one column per context.
pub fn growth_table(n_max: u64, p: u64, contexts: &[Context]) -> Result<Table> {
    let curves = contexts
        .iter()
        .map(|&c| system_growth(n_max, p, c))
        .collect::<Result<Vec<_>>>()?;
    let mut headers = vec!["n".to_string()];
    headers.extend(contexts.iter().map(|c| c.to_string()));
    let mut t = Table::new(&headers);
    for n in 1..=n_max {
        let x = n as f64;
        let mut row = vec![n.to_string()];
        row.extend(curves.iter().map(|s| opt_real(s.y_at(x))));
        t.row(row);
    }
    Ok(t)
}

pub fn census_table(results: &[CensusResult]) -> Table {
    let mut t = Table::new(&[
        "n",
        "r",
        "mode",
        "visited",
        "comparable",
        "amc",
        "amc_fraction",
        "min_gap_percent",
        "same_r_amc",
        "same_r_fraction",
    ]);
    for c in results {
        let mode = match c.mode {
            CensusMode::Exhaustive { .. } => "exhaustive".to_string(),
            CensusMode::Sampled { count, .. } => format!("sampled:{count}"),
        };
        t.row(vec![
            c.n.to_string(),
            c.r.to_string(),
            mode,
            c.visited.to_string(),
            c.comparable.to_string(),
            c.amc.to_string(),
            real(c.amc_fraction),
            opt_real(c.min_gap_percent),
            c.same_r_amc.to_string(),
            real(c.same_r_fraction),
        ]);
    }
    t
}

pub fn evolution_table(series: &[Series]) -> Table {
    let mut t = Table::new(&["system", "step", "c_e"]);
    for (i, s) in series.iter().enumerate() {
        for &(x, y) in &s.points {
            t.row(vec![i.to_string(), real(x), real(y)]);
        }
    }
    t
}

pub fn random_table(params: &RandomSystemParams) -> Result<Table> {
    let mut t = Table::new(&["system", "r", "h", "psc", "uniform_psc_p1", "c_e", "ihv_percent"]);
    for (i, (sys, m)) in random_systems(params)?.into_iter().enumerate() {
        let floor = uniform_psc_of(sys.n() as f64, sys.r() as f64, 1.0)?;
        t.row(vec![
            i.to_string(),
            m.r.to_string(),
            m.h.to_string(),
            m.s.to_string(),
            real(floor),
            opt_real(m.c_e),
            opt_real(m.ihv_percent),
        ]);
    }
    Ok(t)
}

fn census_runs(scale: Scale, seed: u64) -> Result<Vec<CensusResult>> {
    let samples = scale.pick(200_000, 2_000_000);
    let mut out = vec![amc_census(100, 2, CensusMode::Exhaustive { cap: DEFAULT_CENSUS_CAP })?];
    for r in 3..=5 {
        out.push(amc_census(100, r, CensusMode::Sampled { seed, count: samples })?);
    }
    Ok(out)
}

pub fn figure(id: u32, seed: u64, scale: Scale) -> Result<Table> {
    Ok(match id {
        3 => {
            let mut t = Table::new(&["n", "psc"]);
            for n in 1..=100u64 {
                t.row(vec![n.to_string(), psc_unencapsulated(n).to_string()]);
            }
            t
        }
        15 => series_table(&varied_region_sweep(12, 1, Context::Flat)?, "r", "psc"),
        16 => growth_table(100, 1, &[Context::Unencapsulated, Context::Flat])?,
        17 => series_table(&varied_region_sweep(100, 1, Context::Flat)?, "r", "psc"),
        18 => {
            let mut t = Table::new(&["p", "r", "psc"]);
            for p in 1..=4u64 {
                for &(x, y) in &varied_region_sweep(100, p, Context::Flat)?.points {
                    t.row(vec![p.to_string(), real(x), real(y)]);
                }
            }
            t
        }
        19 => random_table(&RandomSystemParams {
            n: 100,
            system_count: scale.pick(200, 1000),
            seed,
        })?,
        20 | 21 => census_table(&census_runs(scale, seed)?),
        22 => {
            let ns: &[u64] = scale.pick(&[10, 20, 50, 100, 200], &[10, 20, 50, 100, 200, 500, 1000]);
            series_table(&average_efficiency_curve(ns, scale.pick(200, 1000), seed)?, "n", "mean_c_e")
        }
        23 => {
            let initial = starting_systems(100, 10, seed)?;
            let config = EvolutionConfig {
                steps: scale.pick(1000, 5000),
                seed,
                add_visibility: AddVisibility::default(),
            };
            evolution_table(&adhoc_evolution(&initial, &config)?)
        }
        24 => series_table(&capped_growth_curve(scale.pick(500, 2000), 10, 1)?, "n", "c_e"),
        27 => labeled_table(&layered_composition_sweep(12, 3, 1, 1)?, "layers", "psc"),
        28 => series_table(&varied_region_sweep(100, 1, Context::Layered)?, "layers", "psc"),
        29 => growth_table(100, 1, &[Context::Unencapsulated, Context::Flat, Context::Layered])?,
        34 => series_table(&varied_region_sweep(100, 1, Context::Hier2d)?, "subsystems", "psc"),
        35 => growth_table(
            100,
            1,
            &[Context::Unencapsulated, Context::Flat, Context::Layered, Context::Hier2d],
        )?,
        other => {
            return Err(EncapError::Invalid(format!(
                "unknown figure {other}; known: {}",
                FIGURE_IDS.iter().map(u32::to_string).collect::<Vec<_>>().join(", ")
            )))
        }
    })
}
